//! Acceptance run: one PASS/FAIL line per criterion, with runtimes.
//!
//! Known-red criteria are pinned; the run fails only when the set of failing
//! criteria differs from the pinned set.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wcirig::centers::*;
use wcirig::conditions::shipped_conditions;
use wcirig::enumerate::enumerate;
use wcirig::family::{anticanonical_degree, check_anticanonical, Database, FamilyRecord, MethodTag, PrintedCase};
use wcirig::poly::{count_monomials, monomials_of_degree, CoefficientSeed, Poly, Ring};
use wcirig::rational::{fmt_rational, int, rat, Rational};
use wcirig::report::{all_reports, diff_family, render, Format, ReportOptions, I_BR, I_DP};
use wcirig::sarkisov::{row_identities, Corruption};
use wcirig::singularity::{basket, count_oracle, count_points, enumerate_strata, quotient_type, TypeOutcome};

/// Criteria expected to fail on the shipped data, with the reason.
const KNOWN_RED: [(u32, &str); 4] = [
    (2, "five printed basket rows are misprinted; corrected rows agree"),
    (3, "No.33 TEST_CLASS(1,0) at 1/3(1,1,2) evaluates to 1/12 > 0"),
    (7, "the displayed No.11 completed square differs by -9/10 alpha^2"),
    (12, "No.83 has a5 = 17 > 15"),
];

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), notes: Vec::new() }
}

struct Runner {
    failed: BTreeSet<u32>,
}

impl Runner {
    fn run(&mut self, n: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut o = f();
        let took = start.elapsed();
        if let Some(l) = limit {
            if took > l {
                o.pass = false;
                o.detail.push_str(&format!("; runtime over {l:?}"));
            }
        }
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {status} [{name}] {} ({:.3}s)", o.detail, took.as_secs_f64());
        for note in &o.notes {
            println!("             note: {note}");
        }
        if !o.pass {
            self.failed.insert(n);
        }
    }
}

type Row = (Vec<usize>, String, u64);

fn computed_basket(f: &FamilyRecord) -> Vec<Row> {
    let mut v: Vec<Row> = match basket(f) {
        Ok(b) => b.into_iter().map(|p| (p.indices.clone(), p.kind.to_string(), p.count)).collect(),
        Err(e) => vec![(vec![], format!("error: {e}"), 0)],
    };
    v.sort();
    v
}

fn singular(db: &Database, id: u32) -> Vec<CenterVerdict> {
    let (f, ann) = db.get(id).unwrap();
    classify_singular(f, ann, SingularOptions::default()).unwrap()
}

fn value_of(db: &Database, id: u32, method: &str) -> Option<Rational> {
    singular(db, id).into_iter().find(|v| v.method == method).and_then(|v| v.certificates.iter().find_map(|c| c.value.clone()))
}

fn degrees(db: &Database) -> Outcome {
    let bad: Vec<u32> = db
        .entries
        .iter()
        .filter(|(f, ann)| !check_anticanonical(f) || anticanonical_degree(f) != ann.a3)
        .map(|(f, _)| f.id)
        .collect();
    outcome(bad.is_empty(), format!("{} of 85 match the printed (A^3); mismatches {bad:?}", 85 - bad.len()))
}

fn baskets(db: &Database) -> Outcome {
    let mut printed_bad = Vec::new();
    let mut corrected_bad = Vec::new();
    for (f, ann) in &db.entries {
        let computed = computed_basket(f);
        let mut printed: Vec<Row> = ann
            .centers
            .iter()
            .map(|c| {
                let p = c.as_printed();
                let t = format!("1/{}({},{},{})", p.r, p.type_weights[0], p.type_weights[1], p.type_weights[2]);
                (p.indices, t, p.count as u64)
            })
            .collect();
        printed.sort();
        let mut corrected: Vec<Row> = ann.points().map(|c| (c.indices.clone(), c.type_string(), c.count as u64)).collect();
        corrected.sort();
        if computed != printed {
            printed_bad.push(f.id);
        }
        if computed != corrected {
            corrected_bad.push(f.id);
        }
    }
    let no14 = computed_basket(&db.get(14).unwrap().0).iter().any(|r| r.1 == "1/2(1,1,1)" && r.2 == 9);
    let no85 = computed_basket(&db.get(85).unwrap().0).len() == 5;
    let mut o = outcome(
        printed_bad.is_empty() && no14 && no85,
        format!(
            "{} of 85 agree with the printed rows; differing {printed_bad:?}; No.14 9 x 1/2(1,1,1) {no14}; No.85 five rows {no85}",
            85 - printed_bad.len()
        ),
    );
    o.notes.push(format!(
        "against corrected rows: {} of 85 agree; differing {corrected_bad:?}",
        85 - corrected_bad.len()
    ));
    o
}

fn test_classes(db: &Database) -> Outcome {
    let mut rows = 0;
    let mut bad = Vec::new();
    for (f, ann) in &db.entries {
        let verdicts = classify_singular(f, ann, SingularOptions::default()).unwrap();
        for (p, v) in ann.centers.iter().zip(&verdicts) {
            if let MethodTag::TestClass { b, e } = p.method {
                rows += 1;
                let ok = b > p.r * e && v.verified() && v.certificates.iter().any(|c| c.value.as_ref().is_some_and(|x| !x.is_positive()));
                if !ok {
                    let val = v.certificates.iter().find_map(|c| c.value.as_ref().map(fmt_rational)).unwrap_or_default();
                    bad.push(format!("No.{} {} {}: {val}", f.id, p.stratum_label(), p.type_string()));
                }
            }
        }
    }
    let spot: Vec<(u32, Option<Rational>)> = [(24, "TEST_CLASS(4,1)"), (84, "TEST_CLASS(15,1)"), (60, "TEST_CLASS(2,0)")]
        .iter()
        .map(|&(id, m)| (id, value_of(db, id, m)))
        .collect();
    let spots_ok = spot.iter().all(|(_, v)| v.as_ref().is_some_and(|x| x.is_zero()));
    let spots: Vec<String> = spot.iter().map(|(id, v)| format!("No.{id} -> {}", v.as_ref().map(fmt_rational).unwrap_or("-".into()))).collect();
    outcome(
        rows == 61 && bad.is_empty() && spots_ok,
        format!("{} of {rows} rows certified; failing {bad:?}; spot values {}", rows - bad.len(), spots.join(", ")),
    )
}

fn cones(db: &Database) -> Outcome {
    let mut rows = 0;
    let mut bad = Vec::new();
    for (f, ann) in &db.entries {
        let verdicts = classify_singular(f, ann, SingularOptions::default()).unwrap();
        for (p, v) in ann.centers.iter().zip(&verdicts) {
            if let MethodTag::Cone { .. } = p.method {
                rows += 1;
                if !v.verified() || v.certificates[0].value.as_ref().is_none_or(|x| x.is_positive()) {
                    bad.push(f.id);
                }
            }
        }
    }
    let spot = [(19, int(0)), (59, rat(-1, 30)), (73, rat(1, 22) - rat(1, 12))];
    let got: Vec<(u32, Option<Rational>)> = spot
        .iter()
        .map(|(id, _)| {
            let v = singular(db, *id).into_iter().find(|v| v.method.starts_with("CONE"));
            (*id, v.and_then(|v| v.certificates[0].value.clone()))
        })
        .collect();
    let spots_ok = spot.iter().zip(&got).all(|((_, e), (_, g))| g.as_ref() == Some(e));
    let shown: Vec<String> = got.iter().map(|(id, v)| format!("No.{id} -> {}", v.as_ref().map(fmt_rational).unwrap_or("-".into()))).collect();
    outcome(bad.is_empty() && spots_ok && rows > 0, format!("{rows} rows, failing {bad:?}; B^3 {}", shown.join(", ")))
}

fn bad_links(db: &Database) -> Outcome {
    let mut got = vec![(69, value_of(db, 69, "BAD_LINK"), rat(-1, 9), false)];
    for (id, expected) in [(30, rat(-1, 5)), (40, rat(-2, 9)), (71, rat(-1, 6))] {
        let (f, ann) = db.get(id).unwrap();
        let p = ann.points().find(|p| p.dagger.is_some()).unwrap();
        let v = dagger_fallback(f, p).ok().and_then(|v| v.verified().then(|| v.certificates[0].value.clone()).flatten());
        let embedded = bad_link_record(id, &p.stratum_label())
            .is_some_and(|r| matches!(r.product, BadLinkProduct::Embedded(_)));
        got.push((id, v, expected, embedded));
    }
    let via_embedded = got[2].3;
    let ok = got.iter().all(|(_, v, e, _)| v.as_ref() == Some(e)) && via_embedded;
    let shown: Vec<String> =
        got.iter().map(|(n, v, _, _)| format!("No.{n} -> {}", v.as_ref().map(fmt_rational).unwrap_or("-".into()))).collect();
    outcome(ok, format!("{}; No.40 via embedded product {via_embedded}", shown.join(", ")))
}

fn curve_values(db: &Database) -> Outcome {
    let vals = |id: u32| -> Vec<Rational> {
        classify_curves(&db.get(id).unwrap().0)
            .iter()
            .flat_map(|v| v.certificates.iter().filter_map(|c| c.value.clone()))
            .collect()
    };
    let no4 = classify_curves(&db.get(4).unwrap().0);
    let no4_vals: Vec<Rational> = no4.iter().flat_map(|v| v.certificates.iter().filter_map(|c| c.value.clone())).collect();
    let no4_ok = no4_vals == vec![int(-2), int(0)] && no4.iter().all(|v| v.verified());
    let mut shown = vec![format!("No.4 -> {:?}", no4_vals.iter().map(fmt_rational).collect::<Vec<_>>())];
    let mut ok = no4_ok;
    for id in [5, 6, 7, 9, 11] {
        let v = vals(id);
        let neg = v.iter().any(|x| x.is_negative());
        let verified = classify_curves(&db.get(id).unwrap().0).iter().all(|c| c.verified());
        ok &= neg && verified;
        shown.push(format!("No.{id} -> {:?}", v.iter().map(fmt_rational).collect::<Vec<_>>()));
    }
    outcome(ok, shown.join(", "))
}

fn case_labels(db: &Database) -> Outcome {
    let mut mismatched = Vec::new();
    let mut printed = 0;
    for (f, ann) in &db.entries {
        let ns = classify_nonsingular(f).unwrap();
        let label = match ns.center {
            CenterKind::Nonsingular { label } => label,
            _ => unreachable!(),
        };
        if let PrintedCase::Case(c) = ann.case {
            printed += 1;
            if label != CaseLabel::Case(c) || !ns.verified() {
                mismatched.push(f.id);
            }
        }
        if SPECIAL_FAMILIES.contains(&f.id) && label != CaseLabel::Special {
            mismatched.push(f.id);
        }
    }
    let mut displayed_fail = Vec::new();
    let mut corrected_fail = Vec::new();
    let mut count = 0;
    for id in SPECIAL_FAMILIES {
        let f = &db.get(id).unwrap().0;
        let shown = special_surface_identities(f).unwrap();
        count += 1;
        if !shown.iter().all(|i| i.holds && i.positive) {
            let bad: Vec<String> = shown.iter().filter(|i| !i.holds).map(|i| format!("No.{id} {}: {}", i.name, i.difference)).collect();
            displayed_fail.extend(bad);
        }
        let fixed = special_surface_checks(f, IdentityForm::Corrected, None).unwrap();
        if !fixed.iter().all(|i| i.holds && i.positive) {
            corrected_fail.push(id);
        }
    }
    let mut o = outcome(
        mismatched.is_empty() && displayed_fail.is_empty(),
        format!(
            "{printed} printed cases, mismatches {mismatched:?}; SPECIAL identities on {count} families, displayed-form failures {displayed_fail:?}"
        ),
    );
    o.notes.push(format!("corrected No.11 completed square: failures {corrected_fail:?}"));
    o
}

fn link_targets(db: &Database) -> Outcome {
    let mut rows = 0;
    let mut bad = Vec::new();
    for (f, ann) in &db.entries {
        let verdicts = classify_singular(f, ann, SingularOptions::default()).unwrap();
        for (p, v) in ann.points().zip(verdicts.iter().filter(|v| !matches!(v.center, CenterKind::Singular { spurious: true, .. }))) {
            let expected = match &p.method {
                MethodTag::FanoLink { degree, weights } => LinkTarget::Fano { degree: *degree, weights: *weights },
                MethodTag::DpLink { k } => LinkTarget::DelPezzo { k: *k },
                _ => continue,
            };
            rows += 1;
            match &v.decision {
                Decision::Link(t) if t.same_as(&expected) && v.verified() => {}
                other => bad.push(format!("No.{} {}: {other}", f.id, p.stratum_label())),
            }
        }
        if let Err(e) = rigidity_verdict(f, &verdicts) {
            bad.push(format!("No.{}: {e}", f.id));
        }
    }
    outcome(bad.is_empty(), format!("{rows} link rows, mismatches {bad:?}; common target per family"))
}

fn symbolic(db: &Database) -> Outcome {
    let mut runs = 0;
    let mut bad = Vec::new();
    let mut covered = BTreeSet::new();
    for (f, ann) in &db.entries {
        for p in ann.points() {
            for s in 1..=3 {
                let Some(res) = row_identities(f, p, CoefficientSeed(s), Corruption::default()) else { continue };
                runs += 1;
                match res {
                    Ok(r) if r.passed() => {
                        covered.insert(f.id);
                    }
                    Ok(r) => {
                        let names: Vec<&str> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
                        bad.push(format!("No.{} seed {s}: {names:?}", f.id));
                    }
                    Err(e) => bad.push(format!("No.{} seed {s}: {e}", f.id)),
                }
            }
        }
    }
    let exemplars = [57, 75, 53, 16, 6];
    let missing: Vec<u32> = exemplars.iter().copied().filter(|id| !covered.contains(id)).collect();
    outcome(
        bad.is_empty() && missing.is_empty(),
        format!("{runs} row-seed runs on {} families, failures {bad:?}; exemplars missing {missing:?}", covered.len()),
    )
}

fn verdict_sets(db: &Database) -> Outcome {
    let mut sets: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for (f, ann) in &db.entries {
        let v = classify_singular(f, ann, SingularOptions::default()).unwrap();
        let key = match rigidity_verdict(f, &v) {
            Ok(Verdict::Rigid) => "rigid",
            Ok(Verdict::NonrigidDp(_)) => "dp",
            Ok(Verdict::NonrigidFano(_)) => "fano",
            Err(_) => "error",
        };
        sets.entry(key).or_default().insert(f.id);
    }
    let rigid = sets.remove("rigid").unwrap_or_default();
    let dp = sets.remove("dp").unwrap_or_default();
    let fano = sets.remove("fano").unwrap_or_default();
    let i_f: BTreeSet<u32> = (1..=85).filter(|id| !I_BR.contains(id) && !I_DP.contains(id)).collect();
    let ok = rigid == I_BR.into_iter().collect() && dp == I_DP.into_iter().collect() && fano == i_f && sets.is_empty();
    outcome(ok, format!("rigid {} {rigid:?}; dP {} {dp:?}; Fano {}", rigid.len(), dp.len(), fano.len()))
}

fn random_poly(ring: &std::sync::Arc<Ring>, rng: &mut ChaCha8Rng) -> Poly {
    let mut p = Poly::zero(ring);
    for _ in 0..rng.gen_range(1..=2) {
        let d = rng.gen_range(0..=6);
        let mons = monomials_of_degree(ring.weights(), d);
        let terms: Vec<(Vec<u32>, Rational)> = (0..rng.gen_range(0..6))
            .map(|_| (mons[rng.gen_range(0..mons.len())].clone(), rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))))
            .collect();
        p = &p + &Poly::from_terms(ring, terms);
    }
    p
}

fn brute_force_count(ws: &[u32], d: u32) -> u64 {
    match ws.split_first() {
        None => u64::from(d == 0),
        Some((&w, rest)) => (0..=d / w).map(|e| brute_force_count(rest, d - e * w)).sum(),
    }
}

fn properties(db: &Database) -> Outcome {
    let ring = Ring::new(&[("x", 1), ("y", 2), ("z", 3), ("t", 1)]);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut law_failures = 0;
    for _ in 0..1000 {
        let (p, q, r) = (random_poly(&ring, &mut rng), random_poly(&ring, &mut rng), random_poly(&ring, &mut rng));
        let laws = [
            &p + &q == &q + &p,
            &p * &q == &q * &p,
            &(&p * &q) * &r == &p * &(&q * &r),
            &p * &(&q + &r) == &(&p * &q) + &(&p * &r),
        ];
        law_failures += laws.iter().filter(|&&x| !x).count();
    }
    let tuples: BTreeSet<[u32; 6]> = db.families().map(|f| f.weights).collect();
    let mut count_failures = 0;
    for w in &tuples {
        for d in 0..=60 {
            let brute = brute_force_count(w, d);
            if count_monomials(w, d) != brute || (brute <= 20_000 && monomials_of_degree(w, d).len() as u64 != brute) {
                count_failures += 1;
            }
        }
    }
    let mut strata = 0;
    let mut oracle_failures = Vec::new();
    for f in db.families() {
        for s in enumerate_strata(f) {
            if s.indices.len() > 3 || s.gcd() != s.r || matches!(quotient_type(f, &s), Ok(TypeOutcome::NotIsolated)) {
                continue;
            }
            strata += 1;
            let n = count_points(f, &s);
            match (n, count_oracle(f, &s, CoefficientSeed(11))) {
                (Ok(n), Ok(c)) if c.free == n => {}
                _ => oracle_failures.push(f.id),
            }
        }
    }
    let conds = shipped_conditions(db);
    let opts = ReportOptions { seed: Some(CoefficientSeed(1)) };
    let a = all_reports(db, &conds, opts);
    let b = all_reports(db, &conds, opts);
    let deterministic = [Format::Json, Format::Markdown, Format::Csv].iter().all(|&f| render(&a, f) == render(&b, f))
        && db.entries.iter().zip(&a).zip(&b).all(|(((f, ann), x), y)| diff_family(f, ann, x) == diff_family(f, ann, y));
    outcome(
        law_failures == 0 && count_failures == 0 && oracle_failures.is_empty() && deterministic,
        format!(
            "algebra laws 1000 cases, {law_failures} failures; monomial counts {} tuples x d<=60, {count_failures} failures; count_oracle {strata} strata, failures {oracle_failures:?}; deterministic {deterministic}",
            tuples.len()
        ),
    )
}

fn enumeration(db: &Database) -> Outcome {
    let found = enumerate(15, 30, db);
    let known: BTreeSet<u32> = found.iter().filter_map(|c| c.known).collect();
    let missing: Vec<u32> = (1..=85).filter(|id| !known.contains(id)).collect();
    let extra = found.len() - found.iter().filter(|c| c.known.is_some()).count();
    let mut o = outcome(
        missing.is_empty(),
        format!("W=15, D=30: {} candidates, {} KNOWN, {extra} EXTRA; missing {missing:?}", found.len(), known.len()),
    );
    let wider = enumerate(17, 30, db);
    let wider_known: BTreeSet<u32> = wider.iter().filter_map(|c| c.known).collect();
    o.notes.push(format!("W=17, D=30: {} candidates, {} KNOWN", wider.len(), wider_known.len()));
    o
}

fn main() -> ExitCode {
    let db = Database::shipped();
    let mut r = Runner { failed: BTreeSet::new() };
    r.run(1, "anticanonical degrees", Some(Duration::from_secs(1)), || degrees(&db));
    r.run(2, "baskets", Some(Duration::from_secs(5)), || baskets(&db));
    r.run(3, "test classes", None, || test_classes(&db));
    r.run(4, "cone rows", None, || cones(&db));
    r.run(5, "bad-link numbers", None, || bad_links(&db));
    r.run(6, "curve arithmetic", None, || curve_values(&db));
    r.run(7, "case labels and special surfaces", None, || case_labels(&db));
    r.run(8, "link targets", None, || link_targets(&db));
    r.run(9, "symbolic suite", Some(Duration::from_secs(60)), || symbolic(&db));
    r.run(10, "verdict sets", None, || verdict_sets(&db));
    r.run(11, "property suites", None, || properties(&db));
    r.run(12, "enumeration containment", None, || enumeration(&db));
    let expected: BTreeSet<u32> = KNOWN_RED.iter().map(|k| k.0).collect();
    for (n, why) in KNOWN_RED {
        println!("known red {n:>2}: {why}");
    }
    println!("{} of 12 criteria pass; failing {:?}", 12 - r.failed.len(), r.failed);
    if r.failed == expected {
        ExitCode::SUCCESS
    } else {
        println!("failing set differs from the pinned known-red set {expected:?}");
        ExitCode::FAILURE
    }
}
