//! Per-family reports, the field-level diff against the shipped table, and
//! Markdown, JSON and CSV rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::centers::{
    check_basket, classify_curves, classify_nonsingular, classify_singular, rigidity_verdict, CaseLabel, CenterKind,
    CenterVerdict, Decision, SingularOptions, Verdict,
};
use crate::conditions::{audit_conditions, AuditReport, ConditionRecord};
use crate::family::{CenterAnnotation, Database, FamilyRecord, MethodTag, PrintedCase, TableAnnotation};
use crate::poly::CoefficientSeed;
use crate::rational::fmt_rational;

/// Birationally rigid families.
pub const I_BR: [u32; 19] = [1, 8, 14, 20, 24, 31, 37, 45, 47, 51, 59, 60, 64, 71, 75, 76, 78, 84, 85];

/// Families birational to a del Pezzo fibration.
pub const I_DP: [u32; 6] = [2, 4, 5, 11, 12, 13];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    /// Seed for the symbolic identities run on involution and link rows; none skips them.
    pub seed: Option<CoefficientSeed>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterRow {
    pub stratum: String,
    #[serde(rename = "type")]
    pub point_type: String,
    pub count: u32,
    pub method: String,
    pub sections: Option<String>,
    pub sharp: bool,
    pub conditions: Vec<String>,
    pub dagger: Option<String>,
    pub spurious: bool,
    pub decision: Decision,
    /// First numeric certificate, as a lowest-terms string.
    pub value: Option<String>,
    pub status: &'static str,
    pub certificates: Vec<crate::centers::Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub id: u32,
    pub weights: [u32; 6],
    pub degrees: [u32; 2],
    pub a3: String,
    pub case: Option<CaseLabel>,
    pub printed_case: Option<u8>,
    pub centers: Vec<CenterRow>,
    pub verdict: Option<Verdict>,
    pub curves: Vec<CenterVerdict>,
    pub nonsingular: Option<CenterVerdict>,
    pub conditions: Option<AuditReport>,
    pub errors: Vec<String>,
    pub ok: bool,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn row(p: &CenterAnnotation, v: CenterVerdict) -> CenterRow {
    let ok = v.verified();
    CenterRow {
        stratum: p.stratum_label(),
        point_type: p.type_string(),
        count: p.count,
        method: p.method.to_string(),
        sections: p.sections.clone(),
        sharp: p.sharp,
        conditions: p.conditions.clone(),
        dagger: p.dagger.clone(),
        spurious: p.spurious,
        decision: v.decision.clone(),
        value: v.certificates.iter().find_map(|c| c.value.as_ref().map(fmt_rational)),
        status: status(ok),
        certificates: v.certificates,
    }
}

/// Classifies every center of one family and re-evaluates every certificate.
pub fn family_report(
    f: &FamilyRecord,
    ann: &TableAnnotation,
    cond: Option<&ConditionRecord>,
    opts: ReportOptions,
) -> FamilyReport {
    let mut errors = Vec::new();
    let curves = classify_curves(f);
    let nonsingular = classify_nonsingular(f).map_err(|e| errors.push(e.to_string())).ok();
    let singular = classify_singular(f, ann, SingularOptions { symbolic: opts.seed })
        .map_err(|e| errors.push(e.to_string()))
        .unwrap_or_default();
    let verdict = if singular.is_empty() && ann.centers.iter().any(|c| c.method.is_link()) {
        None
    } else {
        rigidity_verdict(f, &singular).map_err(|e| errors.push(e.to_string())).ok()
    };
    let case = nonsingular.as_ref().and_then(|v| match v.center {
        CenterKind::Nonsingular { label } => Some(label),
        _ => None,
    });
    let centers: Vec<CenterRow> = ann.centers.iter().zip(singular).map(|(p, v)| row(p, v)).collect();
    let conditions = cond.map(|c| audit_conditions(f, c));
    let ok = errors.is_empty()
        && curves.iter().all(|c| c.verified())
        && nonsingular.as_ref().is_some_and(|v| v.verified())
        && centers.iter().all(|c| c.status == "PASS")
        && conditions.as_ref().is_none_or(|c| c.ok());
    FamilyReport {
        id: f.id,
        weights: f.weights,
        degrees: f.degrees,
        a3: fmt_rational(&f.a3()),
        case,
        printed_case: match ann.case {
            PrintedCase::Case(n) => Some(n),
            PrintedCase::None => None,
        },
        centers,
        verdict,
        curves,
        nonsingular,
        conditions,
        errors,
        ok,
    }
}

/// Reports for every family, in database order.
pub fn all_reports(db: &Database, conds: &BTreeMap<u32, ConditionRecord>, opts: ReportOptions) -> Vec<FamilyReport> {
    db.entries.par_iter().map(|(f, ann)| family_report(f, ann, conds.get(&f.id), opts)).collect()
}

/// One field where the computation disagrees with the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diff {
    pub family: u32,
    pub field: String,
    pub expected: String,
    pub computed: String,
}

impl std::fmt::Display for Diff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "No.{} {}: expected {}, computed {}", self.family, self.field, self.expected, self.computed)
    }
}

fn expected_verdict(id: u32) -> &'static str {
    if I_BR.contains(&id) {
        "RIGID"
    } else if I_DP.contains(&id) {
        "NONRIGID_DP"
    } else {
        "NONRIGID_FANO"
    }
}

fn verdict_kind(v: &Verdict) -> &'static str {
    match v {
        Verdict::Rigid => "RIGID",
        Verdict::NonrigidDp(_) => "NONRIGID_DP",
        Verdict::NonrigidFano(_) => "NONRIGID_FANO",
    }
}

fn failing(v: &CenterVerdict) -> String {
    let bad: Vec<&str> = v.certificates.iter().filter(|c| !c.holds).map(|c| c.statement.as_str()).collect();
    if bad.is_empty() {
        "no certificate".into()
    } else {
        bad.join("; ")
    }
}

fn expected_link(m: &MethodTag) -> Option<String> {
    match m {
        MethodTag::FanoLink { degree, weights } => {
            let w: Vec<String> = weights.iter().map(|a| a.to_string()).collect();
            Some(format!("X'_{degree} in P({})", w.join(",")))
        }
        MethodTag::DpLink { k } => Some(format!("dP_{k}")),
        _ => None,
    }
}

/// Field-level differences between the computation and the table.
pub fn diff_family(f: &FamilyRecord, ann: &TableAnnotation, rep: &FamilyReport) -> Vec<Diff> {
    let mut out = Vec::new();
    let mut push = |field: String, expected: String, computed: String| {
        out.push(Diff { family: f.id, field, expected, computed })
    };
    if fmt_rational(&ann.a3) != rep.a3 {
        push("a3".into(), fmt_rational(&ann.a3), rep.a3.clone());
    }
    if let Err(e) = check_basket(f, ann) {
        push("basket".into(), "table basket".into(), e.to_string());
    }
    let printed = match ann.case {
        PrintedCase::Case(n) => format!("Case {n}"),
        PrintedCase::None => "none".into(),
    };
    let computed = match rep.case {
        Some(CaseLabel::Case(n)) => format!("Case {n}"),
        Some(_) => "none".into(),
        None => "unclassified".into(),
    };
    if printed != computed {
        push("case".into(), printed, computed);
    }
    for c in &rep.curves {
        if !c.verified() {
            push(format!("certificate {}", c.label()), "holds".into(), failing(c));
        }
    }
    if let Some(n) = &rep.nonsingular {
        if !n.verified() {
            push(format!("certificate {}", n.label()), "holds".into(), failing(n));
        }
    }
    for r in &rep.centers {
        if r.status != "PASS" {
            let bad: Vec<&str> = r.certificates.iter().filter(|c| !c.holds).map(|c| c.statement.as_str()).collect();
            push(format!("certificate {} {} {}", r.stratum, r.point_type, r.method), "holds".into(), bad.join("; "));
        }
    }
    for (p, r) in ann.centers.iter().zip(&rep.centers) {
        if let (Some(e), Decision::Link(t)) = (expected_link(&p.method), &r.decision) {
            let same = match &p.method {
                MethodTag::FanoLink { degree, weights } => {
                    t.same_as(&crate::centers::LinkTarget::Fano { degree: *degree, weights: *weights })
                }
                MethodTag::DpLink { k } => t.same_as(&crate::centers::LinkTarget::DelPezzo { k: *k }),
                _ => true,
            };
            if !same {
                push(format!("link {}", p.stratum_label()), e, t.to_string());
            }
        }
    }
    let computed = rep.verdict.as_ref().map(verdict_kind).unwrap_or("none");
    if computed != expected_verdict(f.id) {
        push("verdict".into(), expected_verdict(f.id).into(), computed.into());
    }
    for e in &rep.errors {
        if !e.contains("basket differs") {
            push("error".into(), "none".into(), e.clone());
        }
    }
    if let Some(c) = &rep.conditions {
        for v in c.violations() {
            push(format!("conditions {}", v.check), "feasible".into(), v.detail.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub families: usize,
    pub passed: usize,
    pub failed: Vec<u32>,
    pub rigid: Vec<u32>,
    pub del_pezzo: Vec<u32>,
    pub fano: Vec<u32>,
}

pub fn summarize(reports: &[FamilyReport]) -> Summary {
    let ids = |k: &str| -> Vec<u32> {
        reports.iter().filter(|r| r.verdict.as_ref().map(verdict_kind) == Some(k)).map(|r| r.id).collect()
    };
    Summary {
        families: reports.len(),
        passed: reports.iter().filter(|r| r.ok).count(),
        failed: reports.iter().filter(|r| !r.ok).map(|r| r.id).collect(),
        rigid: ids("RIGID"),
        del_pezzo: ids("NONRIGID_DP"),
        fano: ids("NONRIGID_FANO"),
    }
}

// Rendering

fn method_cell(r: &CenterRow) -> String {
    let mut s = match MethodTag::parse(&r.method) {
        Some(MethodTag::TestClass { b, e }) => {
            let b = if b == 1 { "B".to_string() } else { format!("{b}B") };
            match e {
                0 => b,
                1 => format!("{b} + E"),
                _ => format!("{b} + {e}E"),
            }
        }
        Some(MethodTag::Cone { m }) => format!("cone, m = {m}"),
        Some(MethodTag::BadLink) => "bad link".into(),
        _ => String::new(),
    };
    if let Some(sec) = &r.sections {
        let sharp = if r.sharp { "#" } else { "" };
        s.push_str(&format!(", {{{sec}}}{sharp}"));
    }
    s
}

fn link_cell(r: &CenterRow) -> String {
    match MethodTag::parse(&r.method) {
        Some(MethodTag::Qi) => "Q.I.".into(),
        Some(MethodTag::Ei) => "E.I.".into(),
        Some(MethodTag::FanoLink { .. }) | Some(MethodTag::DpLink { .. }) => match &r.decision {
            Decision::Link(t) => t.to_string(),
            _ => r.method.clone(),
        },
        _ => String::new(),
    }
}

fn point_cell(r: &CenterRow) -> String {
    let mut s = if r.count == 1 {
        format!("{} = {}", r.stratum, r.point_type)
    } else {
        format!("{} = {} x {}", r.stratum, r.count, r.point_type)
    };
    if r.spurious {
        s.push_str(" (spurious)");
    }
    s
}

pub fn render_markdown(reports: &[FamilyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let w: Vec<String> = r.weights.iter().map(|a| a.to_string()).collect();
        let case = match r.case {
            Some(c) => format!(", {c}"),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "## No. {}: X_{{{},{}}} in P({}); (A^3) = {}{case}.\n",
            r.id,
            r.degrees[0],
            r.degrees[1],
            w.join(","),
            r.a3
        );
        if !r.centers.is_empty() {
            out.push_str("| point | method | link | conditions | value | status |\n|---|---|---|---|---|---|\n");
            for c in &r.centers {
                let mut conds: Vec<String> = c.conditions.iter().map(|x| format!("({x})")).collect();
                if let Some(d) = &c.dagger {
                    conds.push(format!("dagger {d}"));
                }
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    point_cell(c),
                    method_cell(c),
                    link_cell(c),
                    conds.join(" "),
                    c.value.clone().unwrap_or_default(),
                    c.status
                );
            }
            out.push('\n');
        }
        for c in r.curves.iter().chain(r.nonsingular.iter()) {
            let _ = writeln!(out, "- {}: {} [{}]", c.label(), c.decision, status(c.verified()));
        }
        for e in &r.errors {
            let _ = writeln!(out, "- error: {e}");
        }
        let verdict = r.verdict.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "none".into());
        let _ = writeln!(out, "\nVerdict: {verdict}\n");
    }
    out
}

pub fn render_json(reports: &[FamilyReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: u32,
    stratum: &'a str,
    #[serde(rename = "type")]
    point_type: &'a str,
    count: u32,
    method: &'a str,
    decision: String,
    value: &'a str,
    status: &'a str,
    verdict: String,
}

pub fn render_csv(reports: &[FamilyReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        let verdict = r.verdict.as_ref().map(|v| v.to_string()).unwrap_or_default();
        for c in &r.centers {
            w.serialize(CsvRow {
                id: r.id,
                stratum: &c.stratum,
                point_type: &c.point_type,
                count: c.count,
                method: &c.method,
                decision: c.decision.to_string(),
                value: c.value.as_deref().unwrap_or(""),
                status: c.status,
                verdict: verdict.clone(),
            })
            .expect("csv row");
        }
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Json,
    Csv,
}

pub fn render(reports: &[FamilyReport], format: Format) -> String {
    match format {
        Format::Markdown => render_markdown(reports),
        Format::Json => render_json(reports),
        Format::Csv => render_csv(reports),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::shipped_conditions;

    #[test]
    fn no57_block() {
        let db = Database::shipped();
        let conds = shipped_conditions(&db);
        let (f, ann) = db.get(57).unwrap();
        let rep = family_report(f, ann, conds.get(&57), ReportOptions::default());
        assert!(rep.ok, "{:?}", rep.errors);
        assert_eq!(rep.verdict.as_ref().unwrap().to_string(), "NONRIGID_FANO X'_14 in P(1,2,3,7,2)");
        assert!(diff_family(f, ann, &rep).is_empty());
        let md = render_markdown(std::slice::from_ref(&rep));
        assert!(md.contains("Verdict: NONRIGID_FANO X'_14 in P(1,2,3,7,2)"));
        let csv = render_csv(std::slice::from_ref(&rep));
        assert!(csv.starts_with("id,stratum,type,count,method,decision,value,status,verdict\n"));
    }

    #[test]
    fn json_fields() {
        let db = Database::shipped();
        let (f, ann) = db.get(14).unwrap();
        let rep = family_report(f, ann, None, ReportOptions::default());
        let v: serde_json::Value = serde_json::from_str(&render_json(&[rep])).unwrap();
        let o = &v[0];
        for k in ["id", "weights", "degrees", "a3", "case", "centers", "verdict"] {
            assert!(o.get(k).is_some(), "missing {k}");
        }
        assert_eq!(o["a3"], "1/2");
        assert_eq!(o["verdict"], "RIGID");
        assert_eq!(o["case"], "Case 2");
    }
}
