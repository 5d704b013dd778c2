//! Generality conditions (C1)-(C3), the curve templates of the quasismooth and
//! non-quasismooth tables, and the dagger-monomial fallbacks.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::One;
use serde::Serialize;

use crate::centers::{classify_center, dagger_fallback, CenterError, CenterVerdict, SingularOptions};
use crate::family::{CenterAnnotation, Database, FamilyError, FamilyRecord};
use crate::poly::{Poly, Ring};
use crate::rational::Rational;
use crate::singularity::representable;

pub const SHIPPED_CONDITIONS: &str = include_str!("../data/conditions.db");

/// Equations of a curve template with their nonvanishing conditions, kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveTemplate {
    pub quasismooth: bool,
    pub equations: [String; 2],
    pub conditions: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConditionRecord {
    pub family: u32,
    /// Monomial required by (C1), as space separated factors.
    pub c1: Option<String>,
    /// WCI curve types excluded by (C2).
    pub c2: Vec<[u32; 4]>,
    pub c3: bool,
    /// `(stratum, monomial)` for every table row carrying a dagger.
    pub daggers: Vec<(String, String)>,
    pub template: Option<CurveTemplate>,
}

fn entry(out: &mut BTreeMap<u32, ConditionRecord>, id: u32) -> &mut ConditionRecord {
    out.entry(id).or_insert_with(|| ConditionRecord { family: id, ..Default::default() })
}

fn parse_err(line: usize, msg: impl Into<String>) -> FamilyError {
    FamilyError::Parse { line, msg: msg.into() }
}

/// Parses the conditions file and attaches the dagger rows of `db`.
pub fn parse_conditions(text: &str, db: &Database) -> Result<BTreeMap<u32, ConditionRecord>, FamilyError> {
    let mut out: BTreeMap<u32, ConditionRecord> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut words = s.split_whitespace();
        let head = words.next().unwrap_or_default();
        let id: u32 = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| parse_err(line, "missing family id"))?;
        if db.get(id).is_none() {
            return Err(parse_err(line, format!("unknown family {id}")));
        }
        let rest: Vec<&str> = words.collect();
        match head {
            "c1" => {
                if rest.is_empty() {
                    return Err(parse_err(line, "empty monomial"));
                }
                entry(&mut out, id).c1 = Some(rest.join(" "));
            }
            "c2" => {
                for t in rest {
                    let v: Vec<u32> = t
                        .split(',')
                        .map(|x| x.parse().map_err(|_| parse_err(line, format!("bad type `{t}`"))))
                        .collect::<Result<_, _>>()?;
                    let ty: [u32; 4] = v.try_into().map_err(|_| parse_err(line, format!("type `{t}` needs 4 entries")))?;
                    entry(&mut out, id).c2.push(ty);
                }
            }
            "c3" => entry(&mut out, id).c3 = true,
            "curve" => {
                let fields: Vec<&str> = s.splitn(5, '|').map(str::trim).collect();
                if fields.len() < 4 {
                    return Err(parse_err(line, "curve line needs kind, two equations and conditions"));
                }
                let quasismooth = match fields[0].split_whitespace().last() {
                    Some("qsm") => true,
                    Some("nonqsm") => false,
                    _ => return Err(parse_err(line, "expected qsm or nonqsm")),
                };
                let conditions = fields
                    .get(3)
                    .map(|c| c.split(';').map(str::trim).filter(|c| !c.is_empty()).map(String::from).collect())
                    .unwrap_or_default();
                entry(&mut out, id).template = Some(CurveTemplate {
                    quasismooth,
                    equations: [fields[1].to_string(), fields[2].to_string()],
                    conditions,
                });
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }
    for (f, ann) in &db.entries {
        for p in ann.points() {
            if let Some(m) = &p.dagger {
                entry(&mut out, f.id).daggers.push((p.stratum_label(), m.clone()));
            }
        }
    }
    Ok(out)
}

pub fn load_conditions(path: &Path, db: &Database) -> Result<BTreeMap<u32, ConditionRecord>, FamilyError> {
    let text = std::fs::read_to_string(path).map_err(|e| FamilyError::Io(format!("{}: {e}", path.display())))?;
    parse_conditions(&text, db)
}

pub fn shipped_conditions(db: &Database) -> BTreeMap<u32, ConditionRecord> {
    parse_conditions(SHIPPED_CONDITIONS, db).expect("shipped conditions parse")
}

/// Splits `y^2z`, `s0 s1`, `z^3 s` into `(name, exponent)` factors.
pub fn monomial_factors(text: &str) -> Option<Vec<(String, u32)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_ascii_alphabetic() {
            return None;
        }
        let mut name = chars[i].to_string();
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            name.push(chars[i]);
            i += 1;
        }
        let mut k = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            k = chars[start..i].iter().collect::<String>().parse().ok()?;
        }
        out.push((name, k));
    }
    (!out.is_empty()).then_some(out)
}

/// Weighted degree of a monomial in the family's coordinate names.
pub fn monomial_degree(f: &FamilyRecord, text: &str) -> Option<u32> {
    let names = f.coordinate_names();
    monomial_factors(text)?
        .into_iter()
        .map(|(n, k)| names.iter().position(|m| *m == n).map(|i| f.weights[i] * k))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub family: u32,
    pub items: Vec<AuditItem>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &AuditItem> {
        self.items.iter().filter(|i| !i.ok)
    }
}

fn degree_item(f: &FamilyRecord, check: &str, monomial: &str) -> AuditItem {
    let [d1, d2] = f.degrees;
    match monomial_degree(f, monomial) {
        Some(d) => AuditItem {
            check: check.into(),
            ok: d == d1 || d == d2,
            detail: format!("deg {monomial} = {d}, degrees ({d1},{d2})"),
        },
        None => AuditItem { check: check.into(), ok: false, detail: format!("`{monomial}` uses unknown coordinates") },
    }
}

/// Template equation in the edge coordinates `x2, ..., x5` with coefficient names as 1.
fn template_poly(f: &FamilyRecord, eq: &str) -> Result<Poly, String> {
    let names = f.coordinate_names();
    let vars: Vec<(String, u32)> = names.iter().cloned().zip(f.weights).collect();
    let ring = Ring::new(&vars);
    let coefficient = |n: &str| matches!(n, "alpha" | "beta" | "gamma").then(Rational::one);
    let p = Poly::parse(&ring, eq, coefficient).map_err(|e| e.to_string())?;
    if let Some(name) = names.iter().take(2).enumerate().find(|(i, _)| p.degree_in(*i) > 0).map(|(_, n)| n) {
        return Err(format!("`{eq}` involves {name} outside P(a2,...,a5)"));
    }
    Ok(p)
}

/// Degree feasibility of (C1), (C2) and dagger monomials, and homogeneity of the curve template.
pub fn audit_conditions(f: &FamilyRecord, rec: &ConditionRecord) -> AuditReport {
    let mut items = Vec::new();
    if let Some(m) = &rec.c1 {
        items.push(degree_item(f, "C1 monomial", m));
    }
    for ty in &rec.c2 {
        let bad: Vec<u32> = ty.iter().copied().filter(|&c| !representable(c, &f.weights)).collect();
        items.push(AuditItem {
            check: "C2 type".into(),
            ok: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{ty:?} realizable in P{:?}", f.weights)
            } else {
                format!("{ty:?}: degrees {bad:?} not realizable")
            },
        });
    }
    if rec.c3 {
        items.push(AuditItem { check: "C3 flag".into(), ok: true, detail: "recorded, not verified".into() });
    }
    for (stratum, m) in &rec.daggers {
        items.push(degree_item(f, &format!("dagger monomial at {stratum}"), m));
    }
    if let Some(t) = &rec.template {
        let mut degs = Vec::new();
        for eq in &t.equations {
            match template_poly(f, eq) {
                Ok(p) if p.is_homogeneous() => degs.push(p.degree().unwrap_or(0)),
                Ok(p) => {
                    items.push(AuditItem {
                        check: "template homogeneity".into(),
                        ok: false,
                        detail: format!("`{eq}` has degrees {:?}", p.degrees()),
                    });
                }
                Err(e) => items.push(AuditItem { check: "template parse".into(), ok: false, detail: e }),
            }
        }
        if degs.len() == 2 {
            let mut sorted = degs.clone();
            sorted.sort_unstable();
            items.push(AuditItem {
                check: "template degrees".into(),
                ok: sorted == f.degrees.to_vec(),
                detail: format!("equations of degrees {degs:?}, family degrees {:?}", f.degrees),
            });
        }
        for c in &t.conditions {
            if let Some(m) = c.split("(dagger ").nth(1).and_then(|r| r.split(')').next()) {
                items.push(degree_item(f, "template dagger monomial", m));
            }
        }
    }
    AuditReport { family: f.id, items }
}

/// Both branches at a dagger point: the primary method when the monomial is
/// present and the bad-link number when it is absent.
pub fn dagger_branches(f: &FamilyRecord, point: &CenterAnnotation) -> Result<(CenterVerdict, CenterVerdict), CenterError> {
    if point.dagger.is_none() {
        return Err(CenterError::NoDagger { family: f.id, point: point.stratum_label() });
    }
    let a = classify_center(f, point, SingularOptions::default());
    let b = dagger_fallback(f, point)?;
    a.check(f.id)?;
    b.check(f.id)?;
    Ok((a, b))
}
