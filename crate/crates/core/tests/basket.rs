use wcirig::family::Database;
use num_traits::Zero;
use wcirig::singularity::{
    basket, count_oracle, count_points, enumerate_strata, quotient_type, riemann_roch_defect, TypeOutcome,
};
use wcirig::poly::CoefficientSeed;

#[test]
fn baskets_match_table() {
    let db = Database::shipped();
    let mut bad = Vec::new();
    for (f, ann) in &db.entries {
        let mut computed: Vec<(Vec<usize>, String, u64)> = basket(f)
            .unwrap_or_else(|e| panic!("{e}"))
            .into_iter()
            .map(|p| (p.indices.clone(), p.kind.to_string(), p.count))
            .collect();
        let mut table: Vec<(Vec<usize>, String, u64)> =
            ann.points().map(|c| (c.indices.clone(), c.type_string(), c.count as u64)).collect();
        computed.sort();
        table.sort();
        if computed != table {
            bad.push(format!("No.{}: computed {:?} table {:?}", f.id, computed, table));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn oracle_matches_counts_on_all_strata() {
    let db = Database::shipped();
    let mut bad = Vec::new();
    for f in db.families() {
        for s in enumerate_strata(f) {
            if s.indices.len() > 3 || s.gcd() != s.r {
                continue;
            }
            if matches!(quotient_type(f, &s), Ok(TypeOutcome::NotIsolated)) {
                continue;
            }
            let n = count_points(f, &s).unwrap();
            match count_oracle(f, &s, CoefficientSeed(11)) {
                Ok(c) if c.free == n => {}
                other => bad.push(format!("No.{} r={}: count {} oracle {:?}", f.id, s.r, n, other)),
            }
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn riemann_roch_confirms_baskets() {
    let db = Database::shipped();
    for f in db.families() {
        let b = basket(f).unwrap();
        assert!(riemann_roch_defect(f, &b).is_zero(), "No.{}", f.id);
    }
}

#[test]
fn printed_misprints_fail_riemann_roch() {
    let db = Database::shipped();
    let mut corrected = 0;
    for (f, ann) in &db.entries {
        if ann.centers.iter().all(|c| c.printed.is_none() && !c.spurious) {
            continue;
        }
        corrected += 1;
        let printed: Vec<_> = ann
            .centers
            .iter()
            .filter_map(|c| {
                let p = c.as_printed();
                let a = p.type_weights[1].min(p.type_weights[2]);
                (p.type_weights[1] + p.type_weights[2] == p.r).then(|| wcirig::singularity::SingularPoint {
                    r: p.r,
                    indices: p.indices.clone(),
                    kind: wcirig::singularity::QuotientType { r: p.r, a },
                    count: p.count as u64,
                })
            })
            .collect();
        let label_only = ann.centers.iter().all(|c| c.as_printed().type_weights == c.type_weights && c.as_printed().count == c.count && !c.spurious);
        if !label_only {
            let bad = printed.len() < ann.centers.len() || !riemann_roch_defect(f, &printed).is_zero();
            assert!(bad, "No.{} printed basket passes Riemann-Roch", f.id);
        }
    }
    assert_eq!(corrected, 5);
}
