//! Bounded scan for codimension-2 anticanonical weighted complete intersections
//! with terminal baskets.

use rayon::prelude::*;
use serde::Serialize;

use crate::family::{Database, FamilyRecord, WeightedSpace};
use crate::singularity::basket;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub weights: [u32; 6],
    pub degrees: [u32; 2],
    /// Family number when the candidate is one of the shipped families.
    pub known: Option<u32>,
}

impl Candidate {
    pub fn flag(&self) -> &'static str {
        if self.known.is_some() {
            "KNOWN"
        } else {
            "EXTRA"
        }
    }
}

fn gcd(ws: &[u32]) -> u32 {
    ws.iter().fold(0, |g, &w| num_integer::gcd(g, w))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Well-formedness of `X_{d1,d2} ⊂ P(a0,...,a5)`: the ambient space is well formed,
/// the gcd of any 3 weights divides some degree and of any 4 weights divides both.
pub fn is_well_formed(f: &FamilyRecord) -> bool {
    if !WeightedSpace::new(f.weights.to_vec()).is_well_formed() {
        return false;
    }
    let divides = |g: u32| f.degrees.iter().filter(|&&d| d % g == 0).count();
    subsets(6, 3).iter().all(|s| divides(gcd(&s.iter().map(|&i| f.weights[i]).collect::<Vec<_>>())) >= 1)
        && subsets(6, 4).iter().all(|s| divides(gcd(&s.iter().map(|&i| f.weights[i]).collect::<Vec<_>>())) == 2)
}

/// No degree equals a weight, so `X` is not an intersection with a linear cone.
pub fn not_linear_cone(f: &FamilyRecord) -> bool {
    f.degrees.iter().all(|d| !f.weights.contains(d))
}

/// At every vertex `p_j` lying on `X` there are monomials `x_j^m x_k ∈ F1` and
/// `x_j^n x_l ∈ F2` with `k != l`.
pub fn vertex_conditions(f: &FamilyRecord) -> bool {
    let w = &f.weights;
    (0..6).all(|j| {
        let [d1, d2] = f.degrees;
        if d1 % w[j] == 0 || d2 % w[j] == 0 {
            return true;
        }
        let partners = |d: u32| -> Vec<usize> {
            (0..6).filter(|&k| k != j && d > w[k] && (d - w[k]).is_multiple_of(w[j])).collect()
        };
        let p1 = partners(d1);
        let p2 = partners(d2);
        p1.iter().any(|k| p2.iter().any(|l| k != l))
    })
}

/// All filters, cheapest first.
pub fn passes_filters(f: &FamilyRecord) -> bool {
    not_linear_cone(f) && is_well_formed(f) && vertex_conditions(f) && basket(f).is_ok()
}

fn weight_tuples(max_weight: u32) -> Vec<[u32; 6]> {
    let mut out = Vec::new();
    let mut cur = [1u32; 6];
    fn go(i: usize, lo: u32, max: u32, cur: &mut [u32; 6], out: &mut Vec<[u32; 6]>) {
        if i == 6 {
            out.push(*cur);
            return;
        }
        for a in lo..=max {
            cur[i] = a;
            go(i + 1, a, max, cur, out);
        }
    }
    go(0, 1, max_weight, &mut cur, &mut out);
    out
}

/// Candidates with `a5 <= max_weight` and `d2 <= max_degree`, sorted by weights then degrees.
pub fn enumerate(max_weight: u32, max_degree: u32, db: &Database) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = weight_tuples(max_weight)
        .into_par_iter()
        .flat_map_iter(|w| {
            let total: u32 = w.iter().sum::<u32>() - 1;
            (2..=total / 2)
                .map(move |d1| (w, [d1, total - d1]))
                .filter(move |(_, d)| d[1] <= max_degree)
        })
        .filter_map(|(weights, degrees)| {
            let f = FamilyRecord::raw(0, weights, degrees);
            passes_filters(&f).then(|| Candidate {
                weights,
                degrees,
                known: db.families().find(|g| g.weights == weights && g.degrees == degrees).map(|g| g.id),
            })
        })
        .collect();
    out.sort_by_key(|a| (a.weights, a.degrees));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_families_pass() {
        let db = Database::shipped();
        for f in db.families() {
            assert!(not_linear_cone(f) && is_well_formed(f) && vertex_conditions(f), "family {}", f.id);
        }
    }

    #[test]
    fn small_scan_contains_no1() {
        let db = Database::shipped();
        let c = enumerate(1, 5, &db);
        assert!(c.iter().any(|c| c.known == Some(1)));
    }

    #[test]
    fn vertex_failure() {
        // p5 lies on X_{4,6} ⊂ P(1,1,1,1,2,5) and no x5^m x_k has degree 4.
        let f = FamilyRecord::raw(0, [1, 1, 1, 1, 2, 5], [4, 6]);
        assert!(!vertex_conditions(&f));
        let g = FamilyRecord::raw(0, [1, 1, 1, 1, 2, 3], [4, 4]);
        assert!(vertex_conditions(&g));
    }
}
