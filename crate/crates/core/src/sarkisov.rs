//! Explicit Sarkisov links and birational involutions.
//!
//! Three layers: role assignment (which coordinate plays which part in the
//! normal form), target construction (the link's destination), and symbolic
//! verification of the displayed identities with seeded generic coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::family::{CenterAnnotation, FamilyRecord};
use crate::poly::{determinant, generic_member_on, CoefficientSeed, Poly, Ring};
use crate::rational::{rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SarkisovError {
    #[error("family {family}, {point}: no role assignment ({reason})")]
    NoAssignment { family: u32, point: String, reason: String },
    #[error("family {family}, {point}: ambiguous role assignment: {}", .assignments.join("; "))]
    Ambiguous { family: u32, point: String, assignments: Vec<String> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{identity} fails with residual {residual}")]
    IdentityFail { identity: String, residual: String },
    #[error("normalization did not reach the target shape: {0}")]
    Normalization(String),
}

/// Outcome of one identity or grading check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// Nonzero difference, or a description of the grading defect.
    pub residual: Option<String>,
}

/// All checks run by one verifier call.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// The first failing check as an error.
    pub fn ok(&self) -> Result<(), SarkisovError> {
        match self.checks.iter().find(|c| !c.holds) {
            None => Ok(()),
            Some(c) => Err(SarkisovError::IdentityFail {
                identity: c.name.clone(),
                residual: c.residual.clone().unwrap_or_default(),
            }),
        }
    }

    fn equal(&mut self, name: &str, lhs: &Poly, rhs: &Poly) {
        let diff = lhs - rhs;
        self.checks.push(IdentityCheck {
            name: name.to_string(),
            holds: diff.is_zero(),
            residual: (!diff.is_zero()).then(|| diff.to_string()),
        });
    }

    fn homogeneous(&mut self, name: &str, p: &Poly, degree: u32) {
        let degs = p.degrees();
        let holds = degs.iter().all(|&d| d == degree);
        let found = degs.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        self.checks.push(IdentityCheck {
            name: format!("grading {name}"),
            holds,
            residual: (!holds).then(|| format!("expected degree {degree}, found {found}")),
        });
    }

    fn condition(&mut self, name: &str, holds: bool, detail: impl FnOnce() -> String) {
        self.checks.push(IdentityCheck { name: name.to_string(), holds, residual: (!holds).then(detail) });
    }
}

/// Names an identity whose right-hand side is perturbed by one coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Corruption<'a>(pub Option<&'a str>);

impl Corruption<'_> {
    fn apply(&self, name: &str, rhs: Poly, fallback: &Poly) -> Poly {
        if self.0 != Some(name) {
            return rhs;
        }
        let (m, _) = match rhs.leading().or_else(|| fallback.leading()) {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return &rhs + &Poly::one(rhs.ring()),
        };
        &rhs + &Poly::monomial(rhs.ring(), m.0, Rational::one())
    }
}

fn point_label(p: &CenterAnnotation) -> String {
    format!("{} {}", p.stratum_label(), p.type_string())
}

/// Index carrying the vertex coordinate of the point, preferring the stratum.
fn vertex_index(f: &FamilyRecord, p: &CenterAnnotation) -> Option<usize> {
    p.indices
        .iter()
        .copied()
        .find(|&i| f.weights[i] == p.r)
        .or_else(|| (0..6).find(|&i| f.weights[i] == p.r))
}

fn take_weight(avail: &mut Vec<usize>, weights: &[u32; 6], w: i64) -> Option<usize> {
    if w <= 0 {
        return None;
    }
    let pos = avail.iter().position(|&i| weights[i] as i64 == w)?;
    Some(avail.remove(pos))
}

fn multiset(ws: &[u32]) -> Vec<u32> {
    let mut v = ws.to_vec();
    v.sort_unstable();
    v
}

fn generic(ring: &Arc<Ring>, vars: &[usize], deg: i64, seed: CoefficientSeed, tag: &str) -> Poly {
    if deg < 0 {
        return Poly::zero(ring);
    }
    generic_member_on(ring, vars, deg as u32, seed.derive(tag), &BTreeSet::new())
}

/// Coefficients of `p` by exponent pattern in `roles`, the role variables removed.
fn split_roles(p: &Poly, roles: &[usize]) -> BTreeMap<Vec<u32>, Poly> {
    let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key: Vec<u32> = roles.iter().map(|&v| m.0[v]).collect();
        let mut e = m.0.clone();
        for &v in roles {
            e[v] = 0;
        }
        let entry = out.entry(key).or_insert_with(|| Poly::zero(p.ring()));
        *entry = &*entry + &Poly::monomial(p.ring(), e, c.clone());
    }
    out
}

/// Checks that `p` uses only the listed role patterns, with pinned coefficients where given.
fn has_shape(p: &Poly, roles: &[usize], allowed: &[(&[u32], Option<&Poly>)]) -> Result<(), String> {
    let parts = split_roles(p, roles);
    for (key, coeff) in &parts {
        match allowed.iter().find(|(k, _)| *k == key.as_slice()) {
            None => return Err(format!("unexpected pattern {key:?}")),
            Some((_, Some(want))) if coeff != *want => {
                return Err(format!("pattern {key:?} has coefficient {coeff}, expected {want}"))
            }
            _ => {}
        }
    }
    for (key, want) in allowed {
        if let Some(w) = want {
            if !w.is_zero() && !parts.contains_key(*key) {
                return Err(format!("pattern {key:?} is missing"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Fano links

/// Link from a distinguished point to a weighted hypersurface `X'_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoLinkScheme {
    pub family: u32,
    pub point: String,
    /// Source indices playing `x0, ..., x5`; the point is the vertex of `x5`.
    pub roles: [usize; 6],
    /// Weights `a0, ..., a5` in role order.
    pub weights: [u32; 6],
    pub degrees: [u32; 2],
    /// `a4 - a3`, the weight of the new coordinate `w`.
    pub b: u32,
    pub target_degree: u32,
    pub target_weights: [u32; 5],
}

impl FanoLinkScheme {
    /// Validates the shape `F1 = x5 x3 + G1`, `F2 = x5 x4 + G2` for a given role order.
    pub fn from_roles(f: &FamilyRecord, point: String, roles: [usize; 6]) -> Result<FanoLinkScheme, SarkisovError> {
        let weights = roles.map(|i| f.weights[i]);
        let [d1, d2] = f.degrees;
        if weights[5] + weights[3] != d1 || weights[5] + weights[4] != d2 {
            return Err(SarkisovError::Precondition(format!(
                "x5 x3 and x5 x4 must have degrees {d1} and {d2}, got {} and {}",
                weights[5] + weights[3],
                weights[5] + weights[4]
            )));
        }
        if weights[3] >= weights[4] {
            return Err(SarkisovError::Precondition(format!(
                "a3 < a4 fails: a3 = {}, a4 = {}",
                weights[3], weights[4]
            )));
        }
        let b = weights[4] - weights[3];
        Ok(FanoLinkScheme {
            family: f.id,
            point,
            roles,
            weights,
            degrees: f.degrees,
            b,
            target_degree: d2,
            target_weights: [weights[0], weights[1], weights[2], weights[3], b],
        })
    }

    pub fn target_string(&self) -> String {
        let w: Vec<String> = self.target_weights.iter().map(|a| a.to_string()).collect();
        format!("X'_{} in P({})", self.target_degree, w.join(","))
    }

    /// Compares with a printed `X'_d ⊂ P(...)` as degree plus weight multiset.
    pub fn matches(&self, degree: u32, weights: &[u32; 5]) -> bool {
        self.target_degree == degree && multiset(&self.target_weights) == multiset(weights)
    }
}

/// Solves the role assignment `a5 = r`, `a3 = d1 - r`, `a4 = d2 - r` and builds the target.
pub fn fano_link_target(f: &FamilyRecord, point: &CenterAnnotation) -> Result<FanoLinkScheme, SarkisovError> {
    let label = point_label(point);
    let [d1, d2] = f.degrees;
    if d1 >= d2 {
        return Err(SarkisovError::Precondition(format!("a3 < a4 needs d1 < d2, got degrees {d1},{d2}")));
    }
    let fail = |reason: String| SarkisovError::NoAssignment { family: f.id, point: label.clone(), reason };
    let x5 = vertex_index(f, point).ok_or_else(|| fail(format!("no coordinate of weight {}", point.r)))?;
    let mut avail: Vec<usize> = (0..6).filter(|&i| i != x5).collect();
    let a3 = d1 as i64 - point.r as i64;
    let a4 = d2 as i64 - point.r as i64;
    let x3 = take_weight(&mut avail, &f.weights, a3).ok_or_else(|| fail(format!("no coordinate of weight {a3}")))?;
    let x4 = take_weight(&mut avail, &f.weights, a4).ok_or_else(|| fail(format!("no coordinate of weight {a4}")))?;
    FanoLinkScheme::from_roles(f, label, [avail[0], avail[1], avail[2], x3, x4, x5])
}

fn link_ring(f: &FamilyRecord, roles: &[usize], extra: &[(&str, u32)]) -> Arc<Ring> {
    let names = f.coordinate_names();
    let mut vars: Vec<(String, u32)> = roles.iter().map(|&i| (names[i].clone(), f.weights[i])).collect();
    vars.extend(extra.iter().map(|(n, w)| (n.to_string(), *w)));
    Ring::new(&vars)
}

/// Checks the gradings of `Z`, `X'` and the correspondence `x4 = x3 w`.
pub fn verify_link_equations(
    f: &FamilyRecord,
    s: &FanoLinkScheme,
    seed: CoefficientSeed,
    corrupt: Corruption<'_>,
) -> IdentityReport {
    let ring = link_ring(f, &s.roles, &[("w", s.b)]);
    let x: Vec<Poly> = (0..7).map(|i| Poly::var(&ring, i)).collect();
    let [d1, d2] = s.degrees;
    let a = s.weights;
    let tag = format!("fano-{}-{}", s.family, s.point);
    let g1 = generic(&ring, &[0, 1, 2, 3, 4], d1 as i64, seed, &format!("{tag}-G1"));
    let g2 = generic(&ring, &[0, 1, 2, 3, 4], d2 as i64, seed, &format!("{tag}-G2"));
    let mut rep = IdentityReport::default();
    rep.homogeneous("F1", &(&(&x[5] * &x[3]) + &g1), d1);
    rep.homogeneous("F2", &(&(&x[5] * &x[4]) + &g2), d2);

    let z = &(&x[4] * &g1) - &(&x[3] * &g2);
    rep.homogeneous("Z", &z, d1 + a[4]);
    rep.condition("grading Z degrees agree", d1 + a[4] == d2 + a[3], || {
        format!("d1 + a4 = {} but d2 + a3 = {}", d1 + a[4], d2 + a[3])
    });

    let x3w = &x[3] * &x[6];
    let lift = |g: &Poly| g.substitute(4, &x3w).expect("x3 w has the weight of x4");
    let (g1l, g2l) = (lift(&g1), lift(&g2));
    let xp = &(&x[6] * &g1l) - &g2l;
    rep.homogeneous("X'", &xp, s.target_degree);
    rep.condition("X' ambient", xp.degree_in(4) == 0 && xp.degree_in(5) == 0, || {
        "X' involves x4 or x5".to_string()
    });
    let lhs = lift(&z);
    let rhs = corrupt.apply("correspondence", &x[3] * &xp, &lhs);
    rep.equal("correspondence", &lhs, &rhs);
    rep
}

/// Brings generic defining polynomials to `x5 x3 + G1`, `x5 x4 + G2` by triangular coordinate changes.
pub fn normalize_link_shape(
    f1: &Poly,
    f2: &Poly,
    x5: usize,
    x3: usize,
    x4: usize,
) -> Result<(Poly, Poly), SarkisovError> {
    let ring = f1.ring().clone();
    let v5 = Poly::var(&ring, x5);
    let (mut f1, mut f2) = (f1.clone(), f2.clone());
    let done = |f1: &Poly, f2: &Poly| {
        (f1 - &(&v5 * &Poly::var(&ring, x3))).degree_in(x5) == 0
            && (f2 - &(&v5 * &Poly::var(&ring, x4))).degree_in(x5) == 0
    };
    for _ in 0..64 {
        if done(&f1, &f2) {
            return Ok((f1, f2));
        }
        for (which, target) in [(0usize, x3), (1, x4)] {
            let fi = if which == 0 { &f1 } else { &f2 };
            let part = fi - &fi.set_zero(&[x5]);
            let l = part.div_exact(&v5).expect("x5 divides its own part");
            let mut e = vec![0; ring.nvars()];
            e[target] = 1;
            let c = l.coefficient(&e);
            if c.is_zero() {
                return Err(SarkisovError::Normalization(format!(
                    "{} {} is absent",
                    ring.name(x5),
                    ring.name(target)
                )));
            }
            let t = Poly::var(&ring, target);
            let h = &l - &t.scale(&c);
            if h.is_zero() && c.is_one() {
                continue;
            }
            let rep = (&t - &h).scale(&(Rational::one() / &c));
            let sub = |p: &Poly| p.substitute(target, &rep).map_err(|e| SarkisovError::Normalization(e.to_string()));
            f1 = sub(&f1)?;
            f2 = sub(&f2)?;
        }
    }
    Err(SarkisovError::Normalization("no convergence after 64 rounds".to_string()))
}

/// Normalizes fully generic members of the family at the link's vertex.
pub fn demo_link_normalization(f: &FamilyRecord, s: &FanoLinkScheme, seed: CoefficientSeed) -> Result<(), SarkisovError> {
    let ring = link_ring(f, &s.roles, &[]);
    let all: Vec<usize> = (0..6).collect();
    let tag = format!("fano-demo-{}", s.family);
    let f1 = generic(&ring, &all, s.degrees[0] as i64, seed, &format!("{tag}-F1"));
    let f2 = generic(&ring, &all, s.degrees[1] as i64, seed, &format!("{tag}-F2"));
    let (f1, f2) = (drop_vertex_powers(&f1, 5), drop_vertex_powers(&f2, 5));
    let (n1, n2) = normalize_link_shape(&f1, &f2, 5, 3, 4)?;
    for (n, d) in [(&n1, s.degrees[0]), (&n2, s.degrees[1])] {
        if n.degrees().iter().any(|&e| e != d) {
            return Err(SarkisovError::Normalization("lost homogeneity".to_string()));
        }
    }
    Ok(())
}

/// Removes pure powers of the vertex variable so that the vertex lies on `X`.
fn drop_vertex_powers(p: &Poly, v: usize) -> Poly {
    Poly::from_terms(
        p.ring(),
        p.terms()
            .filter(|(m, _)| m.0.iter().enumerate().any(|(i, &e)| i != v && e > 0))
            .map(|(m, c)| (m.0.clone(), c.clone())),
    )
}

// ---------------------------------------------------------------------------
// Del Pezzo links

/// Link from a distinguished point to a del Pezzo fibration of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpLinkScheme {
    pub family: u32,
    pub point: String,
    /// Source indices playing `x0, ..., x5`, with `a0 = a1 = e`.
    pub roles: [usize; 6],
    pub e: u32,
    pub rest: [u32; 3],
    pub degree: u32,
    pub k: u32,
    /// Grading matrix of the bundle on `w0, w1, x2, x3, x4, v`.
    pub bundle: [[i64; 6]; 2],
}

pub fn dp_link_degree(f: &FamilyRecord, point: &CenterAnnotation) -> Result<DpLinkScheme, SarkisovError> {
    let label = point_label(point);
    let fail = |reason: String| SarkisovError::NoAssignment { family: f.id, point: label.clone(), reason };
    let [d1, d2] = f.degrees;
    if d1 != d2 {
        return Err(fail(format!("degrees {d1},{d2} differ")));
    }
    let d = d1;
    let x5 = vertex_index(f, point).ok_or_else(|| fail(format!("no coordinate of weight {}", point.r)))?;
    if f.weights.iter().any(|&w| w > point.r) {
        return Err(fail(format!("a weight exceeds a5 = {}", point.r)));
    }
    let mut avail: Vec<usize> = (0..6).filter(|&i| i != x5).collect();
    let e = d as i64 - point.r as i64;
    let x0 = take_weight(&mut avail, &f.weights, e).ok_or_else(|| fail(format!("no coordinate of weight {e}")))?;
    let x1 = take_weight(&mut avail, &f.weights, e).ok_or_else(|| fail(format!("weight {e} occurs once")))?;
    let e = e as u32;
    let rest = [f.weights[avail[0]], f.weights[avail[1]], f.weights[avail[2]]];
    let prod = e * rest.iter().product::<u32>();
    if d % prod != 0 || !(1..=3).contains(&(d / prod)) {
        return Err(fail(format!("d/(e a2 a3 a4) = {d}/{prod} is not in 1..3")));
    }
    Ok(DpLinkScheme {
        family: f.id,
        point: label,
        roles: [x0, x1, avail[0], avail[1], avail[2], x5],
        e,
        rest,
        degree: d,
        k: d / prod,
        bundle: [[1, 1, 0, 0, 0, -1], [0, 0, rest[0] as i64, rest[1] as i64, rest[2] as i64, e as i64]],
    })
}

/// Checks `Z = (x0 G2 - x1 G1)`, the bidegree of `X'` in the bundle and the map to `Z`.
pub fn verify_dp_link(f: &FamilyRecord, s: &DpLinkScheme, seed: CoefficientSeed, corrupt: Corruption<'_>) -> IdentityReport {
    let ring = link_ring(f, &s.roles, &[]);
    let x: Vec<Poly> = (0..6).map(|i| Poly::var(&ring, i)).collect();
    let d = s.degree;
    let tag = format!("dp-{}-{}", s.family, s.point);
    let g1 = generic(&ring, &[0, 1, 2, 3, 4], d as i64, seed, &format!("{tag}-G1"));
    let g2 = generic(&ring, &[0, 1, 2, 3, 4], d as i64, seed, &format!("{tag}-G2"));
    let mut rep = IdentityReport::default();
    rep.homogeneous("F1", &(&(&x[5] * &x[0]) + &g1), d);
    rep.homogeneous("F2", &(&(&x[5] * &x[1]) + &g2), d);
    let z = &(&x[0] * &g2) - &(&x[1] * &g1);
    rep.homogeneous("Z", &z, d + s.e);

    // Cox ring of the bundle; its single grading is unused, bidegrees come from `bundle`.
    let names = f.coordinate_names();
    let cox = Ring::new(&[
        ("w0", 1),
        ("w1", 1),
        (names[s.roles[2]].as_str(), 1),
        (names[s.roles[3]].as_str(), 1),
        (names[s.roles[4]].as_str(), 1),
        ("v", 1),
    ]);
    let lift = |p: &Poly| {
        Poly::from_terms(
            &cox,
            p.terms().map(|(m, c)| {
                let e = m.exps();
                (vec![e[0], e[1], e[2], e[3], e[4], e[0] + e[1]], c.clone())
            }),
        )
    };
    let w0 = Poly::var(&cox, 0);
    let w1 = Poly::var(&cox, 1);
    let xp = &(&w0 * &lift(&g2)) - &(&w1 * &lift(&g1));
    let bideg: BTreeSet<(i64, i64)> = xp
        .terms()
        .map(|(m, _)| {
            let dot = |row: &[i64; 6]| m.exps().iter().zip(row).map(|(&e, &r)| e as i64 * r).sum::<i64>();
            (dot(&s.bundle[0]), dot(&s.bundle[1]))
        })
        .collect();
    let want = (1, d as i64);
    rep.condition("grading X' bidegree", bideg.iter().all(|&b| b == want), || {
        format!("expected {want:?}, found {bideg:?}")
    });
    let lhs = lift(&z);
    let rhs = corrupt.apply("correspondence", &Poly::var(&cox, 5) * &xp, &lhs);
    rep.equal("correspondence", &lhs, &rhs);
    rep.condition("fiber degree", s.k * s.e * s.rest.iter().product::<u32>() == d, || {
        format!("k = {} does not divide out", s.k)
    });
    rep
}

// ---------------------------------------------------------------------------
// Involutions

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InvolutionKind {
    Qi,
    Ei,
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvolutionKind::Qi => "QI",
            InvolutionKind::Ei => "EI",
        })
    }
}

/// Role assignment and degree bookkeeping for a quadratic or elliptic involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionScheme {
    pub family: u32,
    pub point: String,
    pub kind: InvolutionKind,
    pub xi: usize,
    pub zeta: usize,
    pub eta: Option<usize>,
    /// `i0, i1, i2` and for QI also `i3`.
    pub residual: Vec<usize>,
    pub weights: [u32; 6],
    /// Degree of the polynomial written first in the normal form.
    pub f1_degree: u32,
    pub f2_degree: u32,
    pub deg_v: u32,
    pub deg_w: Option<u32>,
    pub z_degree: u32,
    pub z_weights: Vec<u32>,
}

impl InvolutionScheme {
    pub fn a(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn assignment(&self) -> String {
        let w = |i: usize| self.weights[i];
        let res: Vec<String> = self.residual.iter().enumerate().map(|(k, &i)| format!("i{k}={}", w(i))).collect();
        match self.eta {
            None => format!("xi={}, zeta={}, {}", w(self.xi), w(self.zeta), res.join(", ")),
            Some(eta) => format!("xi={}, eta={}, zeta={}, {}", w(self.xi), w(eta), w(self.zeta), res.join(", ")),
        }
    }

    pub fn z_string(&self) -> String {
        let w: Vec<String> = self.z_weights.iter().map(|a| a.to_string()).collect();
        format!("Z_{} in P({})", self.z_degree, w.join(","))
    }
}

fn signature(s: &InvolutionScheme) -> Vec<u32> {
    let mut v = vec![s.a(s.xi), s.a(s.zeta), s.eta.map(|e| s.a(e)).unwrap_or(0), s.f1_degree];
    v.extend(s.residual.iter().map(|&i| s.a(i)));
    v
}

fn qi_candidate(f: &FamilyRecord, label: &str, xi: usize, d: u32, dd: u32) -> Option<InvolutionScheme> {
    let r = f.weights[xi];
    if !d.is_multiple_of(2) {
        return None;
    }
    let az = d / 2;
    if !(r < az && az < 2 * r) {
        return None;
    }
    let mut avail: Vec<usize> = (0..6).filter(|&i| i != xi).collect();
    let zeta = take_weight(&mut avail, &f.weights, az as i64)?;
    let i0 = take_weight(&mut avail, &f.weights, d as i64 - 2 * r as i64)?;
    let i1 = take_weight(&mut avail, &f.weights, dd as i64 - r as i64)?;
    let (i2, i3) = (avail[0], avail[1]);
    if f.weights[i3] >= r {
        return None;
    }
    let deg_v = f.weights[i1] + az;
    let mut zw = multiset(&[f.weights[i0], f.weights[i1], f.weights[i2], f.weights[i3]]);
    zw.push(deg_v);
    Some(InvolutionScheme {
        family: f.id,
        point: label.to_string(),
        kind: InvolutionKind::Qi,
        xi,
        zeta,
        eta: None,
        residual: vec![i0, i1, i2, i3],
        weights: f.weights,
        f1_degree: d,
        f2_degree: dd,
        deg_v,
        deg_w: None,
        z_degree: 2 * deg_v,
        z_weights: zw,
    })
}

fn ei_candidate(f: &FamilyRecord, label: &str, xi: usize, d: u32, dd: u32) -> Option<InvolutionScheme> {
    let r = f.weights[xi];
    if !d.is_multiple_of(2) || d <= r {
        return None;
    }
    let ae = d / 2;
    let az = d - r;
    if !(r < ae && ae < az && ae < 2 * r) || dd != az + ae {
        return None;
    }
    let mut avail: Vec<usize> = (0..6).filter(|&i| i != xi).collect();
    let eta = take_weight(&mut avail, &f.weights, ae as i64)?;
    let zeta = take_weight(&mut avail, &f.weights, az as i64)?;
    let i0 = take_weight(&mut avail, &f.weights, dd as i64 - 2 * r as i64)?;
    let (i1, i2) = (avail[0], avail[1]);
    if f.weights[i2] >= r {
        return None;
    }
    let mut zw = multiset(&[f.weights[i0], f.weights[i1], f.weights[i2]]);
    zw.extend([2 * az, 3 * az]);
    Some(InvolutionScheme {
        family: f.id,
        point: label.to_string(),
        kind: InvolutionKind::Ei,
        xi,
        zeta,
        eta: Some(eta),
        residual: vec![i0, i1, i2],
        weights: f.weights,
        f1_degree: d,
        f2_degree: dd,
        deg_v: 2 * az,
        deg_w: Some(3 * az),
        z_degree: 6 * az,
        z_weights: zw,
    })
}

/// The unique role assignment satisfying the normal-form inequalities.
pub fn involution_numerology(
    f: &FamilyRecord,
    point: &CenterAnnotation,
    kind: InvolutionKind,
) -> Result<InvolutionScheme, SarkisovError> {
    let label = point_label(point);
    let xi = vertex_index(f, point).ok_or_else(|| SarkisovError::NoAssignment {
        family: f.id,
        point: label.clone(),
        reason: format!("no coordinate of weight {}", point.r),
    })?;
    let [d1, d2] = f.degrees;
    let mut found: Vec<InvolutionScheme> = Vec::new();
    for (d, dd) in [(d1, d2), (d2, d1)] {
        let cand = match kind {
            InvolutionKind::Qi => qi_candidate(f, &label, xi, d, dd),
            InvolutionKind::Ei => ei_candidate(f, &label, xi, d, dd),
        };
        if let Some(c) = cand {
            if !found.iter().any(|s| signature(s) == signature(&c)) {
                found.push(c);
            }
        }
    }
    match found.len() {
        0 => Err(SarkisovError::NoAssignment { family: f.id, point: label, reason: format!("{kind} inequalities") }),
        1 => Ok(found.pop().expect("one element")),
        _ => Err(SarkisovError::Ambiguous {
            family: f.id,
            point: label,
            assignments: found.iter().map(|s| s.assignment()).collect(),
        }),
    }
}

/// Ring `x_{i0..}, xi, zeta, [eta], v, [w]` for an involution scheme.
pub fn involution_ring(f: &FamilyRecord, s: &InvolutionScheme) -> Arc<Ring> {
    let mut roles: Vec<usize> = s.residual.clone();
    roles.push(s.xi);
    roles.push(s.zeta);
    roles.extend(s.eta);
    let mut extra = vec![("v", s.deg_v)];
    if let Some(dw) = s.deg_w {
        extra.push(("w", dw));
    }
    link_ring(f, &roles, &extra)
}

/// Coefficient polynomials `a, b, c, d` of the quadratic-involution normal form.
#[derive(Debug, Clone)]
pub struct QiData {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
}

/// Seeded generic `a, b, c, d` in `x_{i0}, ..., x_{i3}` of their forced degrees.
pub fn qi_generic_data(ring: &Arc<Ring>, s: &InvolutionScheme, seed: CoefficientSeed) -> QiData {
    let xs = [0, 1, 2, 3];
    let (d, dd) = (s.f1_degree as i64, s.f2_degree as i64);
    let (ax, az) = (s.a(s.xi) as i64, s.a(s.zeta) as i64);
    let tag = format!("qi-{}-{}", s.family, s.point);
    QiData {
        a: generic(ring, &xs, d - ax, seed, &format!("{tag}-a")),
        b: generic(ring, &xs, d, seed, &format!("{tag}-b")),
        c: generic(ring, &xs, dd - az, seed, &format!("{tag}-c")),
        d: generic(ring, &xs, dd, seed, &format!("{tag}-d")),
    }
}

pub fn verify_qi_identities(f: &FamilyRecord, s: &InvolutionScheme, seed: CoefficientSeed, corrupt: Corruption<'_>) -> IdentityReport {
    let ring = involution_ring(f, s);
    let data = qi_generic_data(&ring, s, seed);
    verify_qi_with(&ring, s, &data, corrupt)
}

/// The quadratic-involution identities for given coefficient polynomials.
pub fn verify_qi_with(ring: &Arc<Ring>, s: &InvolutionScheme, data: &QiData, corrupt: Corruption<'_>) -> IdentityReport {
    let var = |i: usize| Poly::var(ring, i);
    let (x0, x1, xi, zeta, v) = (var(0), var(1), var(4), var(5), var(6));
    let QiData { a, b, c, d } = data;
    let mut rep = IdentityReport::default();

    let f1 = &(&(&(&xi * &xi) * &x0) + &(&xi * a)) + &(&(&zeta * &zeta) + b);
    let f2 = &(&(&xi * &x1) + &(&zeta * c)) + d;
    rep.homogeneous("F1", &f1, s.f1_degree);
    rep.homogeneous("F2", &f2, s.f2_degree);

    let h1 = &(&x0 * &xi) + a;
    let vdef = &(&(&zeta * &x1) - &(&(&x0 * c) * &xi)) - &(a * c);
    rep.homogeneous("v", &vdef, s.deg_v);

    let lhs = &(&x1 * &f1) - &(&h1 * &f2);
    let rhs = &(&(&vdef * &zeta) - &(d * &(&(&x0 * &xi) + a))) + &(&x1 * b);
    let rhs = corrupt.apply("eqQI1", rhs, &lhs);
    rep.equal("eqQI1", &lhs, &rhs);

    let row3 = |vv: &Poly| &(&(&(&(&x0 * c) * &xi) - &(&x1 * &zeta)) + vv) + &(a * c);
    let r3 = corrupt.apply("eqQI2", row3(&vdef), &lhs);
    rep.equal("eqQI2", &r3, &Poly::zero(ring));

    let m = vec![
        vec![x1.clone(), c.clone(), d.clone()],
        vec![-(&x0 * d), v.clone(), &(&x1 * b) - &(a * d)],
        vec![&x0 * c, -x1.clone(), &v + &(a * c)],
    ];
    let apply_row = |row: &[Poly]| {
        let row: Vec<Poly> = row.iter().map(|p| p.substitute(6, &vdef).expect("v has its degree")).collect();
        &(&(&row[0] * &xi) + &(&row[1] * &zeta)) + &row[2]
    };
    rep.equal("M relation F2", &apply_row(&m[0]), &f2);
    rep.equal("M relation eqQI1", &apply_row(&m[1]), &rhs);

    let g = &(&(&(&v * &v) + &(&(a * c) * &v)) + &(&x1 * &(&(&x1 * b) - &(a * d)))) + &(&x0 * &(&(&(b * c) * c) + &(d * d)));
    let g = corrupt.apply("G", g, &v);
    let det = determinant(&m);
    match det.div_exact(&x1) {
        Some(q) => rep.equal("G", &q, &g),
        None => rep.condition("G", false, || format!("det M = {det} is not divisible by x_i1")),
    }
    rep.homogeneous("G", &g, 2 * s.deg_v);
    rep.condition("G quadratic in v", g.degree_in(6) == 2, || format!("degree {} in v", g.degree_in(6)));
    rep
}

/// Coefficient polynomials `a, ..., g` of the elliptic-involution normal form.
#[derive(Debug, Clone)]
pub struct EiData {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
    pub e: Poly,
    pub f: Poly,
    pub g: Poly,
}

pub fn ei_generic_data(ring: &Arc<Ring>, s: &InvolutionScheme, seed: CoefficientSeed) -> EiData {
    let xs = [0, 1, 2];
    let (d, dd) = (s.f1_degree as i64, s.f2_degree as i64);
    let ax = s.a(s.xi) as i64;
    let ae = s.a(s.eta.expect("elliptic schemes carry eta")) as i64;
    let tag = format!("ei-{}-{}", s.family, s.point);
    let gen = |deg: i64, name: &str| generic(ring, &xs, deg, seed, &format!("{tag}-{name}"));
    EiData {
        a: gen(d - ae, "a"),
        b: gen(d, "b"),
        c: gen(dd - ax - ae, "c"),
        d: gen(dd - ax, "d"),
        e: gen(dd - 2 * ae, "e"),
        f: gen(dd - ae, "f"),
        g: gen(dd, "g"),
    }
}

pub fn verify_ei_identities(f: &FamilyRecord, s: &InvolutionScheme, seed: CoefficientSeed, corrupt: Corruption<'_>) -> IdentityReport {
    let ring = involution_ring(f, s);
    let data = ei_generic_data(&ring, s, seed);
    verify_ei_with(&ring, s, &data, corrupt)
}

/// The elliptic-involution identities for given coefficient polynomials.
pub fn verify_ei_with(ring: &Arc<Ring>, s: &InvolutionScheme, data: &EiData, corrupt: Corruption<'_>) -> IdentityReport {
    let var = |i: usize| Poly::var(ring, i);
    let (x0, xi, zeta, eta, vv, ww) = (var(0), var(3), var(4), var(5), var(6), var(7));
    let EiData { a, b, c, d, e, f, g } = data;
    let az = s.a(s.zeta);
    let mut rep = IdentityReport::default();

    let f1 = &(&(&xi * &zeta) + &(&eta * &eta)) + &(&(&eta * a) + b);
    let f2 = &(&(&(&(&xi * &xi) * &x0) + &(&xi * &(&(&eta * c) + d))) + &(&zeta * &eta))
        + &(&(&(&(&eta * &eta) * e) + &(&eta * f)) + g);
    rep.homogeneous("F1", &f1, s.f1_degree);
    rep.homogeneous("F2", &f2, s.f2_degree);

    let h1 = &(&(&x0 * &xi) + &(c * &eta)) + d;
    let v = &(&(&(&zeta * &zeta) + &(&(&zeta * &eta) * e)) + &(&zeta * f))
        - &(&(&h1 * &(&eta + a)) + &(b * c));
    rep.homogeneous("v", &v, 2 * az);
    rep.condition("v leading term", v.coeff_in(4, 2) == Poly::one(ring), || "zeta^2 coefficient is not 1".to_string());

    let x0xi_d = &(&x0 * &xi) + d;
    let lhs1 = &(&zeta * &f2) - &(&h1 * &f1);
    let rhs1 = &(&(&v * &eta) - &(b * &x0xi_d)) + &(g * &zeta);
    let rhs1 = corrupt.apply("eqEI1", rhs1, &lhs1);
    rep.equal("eqEI1", &lhs1, &rhs1);

    let eg = e * g;
    let vp = &v - &eg;
    let x0b_cg = &(&x0 * b) + &(c * g);
    let w = &(&(&(&(&x0 * g) * &xi) + &(&vp * &zeta)) + &(&x0b_cg * &eta)) + &(&(&(&x0 * a) * b) + &(g * &(d + &(a * c))));
    rep.homogeneous("w", &w, 3 * az);
    rep.condition("w leading term", w.coeff_in(4, 3) == Poly::one(ring), || "zeta^3 coefficient is not 1".to_string());

    let h2 = &(&zeta * &h1) - &(&x0 * b);
    let lhs3 = &(&(&zeta * &zeta) * &f2) - &(&h2 * &f1);
    let inner = &(&(&v + &(a * &x0xi_d)) + &(b * c)) - &(f * &zeta);
    let rhs3 = &(&(&(&w * &eta) + &(&(&x0 * b) * b)) - &(&(b * d) * &zeta)) + &(g * &inner);
    let rhs3 = corrupt.apply("eqEI3", rhs3, &lhs3);
    rep.equal("eqEI3", &lhs3, &rhs3);

    let h3 = &(&h1 * &eta) + &vp;
    let lhs5 = &(&(&(&zeta * &eta) - g) * &f2) - &(&h3 * &f1);
    let bd_fg = &(b * d) + &(f * g);
    let rhs5 = &(&(&(&(a * &x0b_cg) - &w) * &xi) - &(&(&(a * &vp) + &bd_fg) * &eta)) - &(&(b * &vp) + &(g * g));
    let rhs5 = corrupt.apply("eqEI5", rhs5, &lhs5);
    rep.equal("eqEI5", &lhs5, &rhs5);

    // Matrix with v and w as free coordinates.
    let vpf = &vv - &eg;
    let wpf = &ww - &(a * &x0b_cg);
    let m = vec![
        vec![-(&x0 * b), g.clone(), vv.clone(), -(b * d)],
        vec![&(&x0 * a) * g, -bd_fg.clone(), ww.clone(), &(g * &(&(&vv + &(a * d)) + &(b * c))) + &(&(&x0 * b) * b)],
        vec![&x0 * g, vpf.clone(), x0b_cg.clone(), &(g * d) - &wpf],
        vec![wpf.clone(), Poly::zero(ring), &(&(a * &vpf) + &(b * d)) + &(f * g), &(b * &vpf) + &(g * g)],
    ];
    let apply_row = |row: &[Poly]| {
        let row: Vec<Poly> = row
            .iter()
            .map(|p| p.substitute(6, &v).and_then(|p| p.substitute(7, &w)).expect("v, w have their degrees"))
            .collect();
        &(&(&(&row[0] * &xi) + &(&row[1] * &zeta)) + &(&row[2] * &eta)) + &row[3]
    };
    rep.equal("M relation eqEI1", &apply_row(&m[0]), &rhs1);
    rep.equal("M relation eqEI3", &apply_row(&m[1]), &rhs3);
    let r3 = corrupt.apply("eqEI4", apply_row(&m[2]), &lhs1);
    rep.equal("eqEI4", &r3, &Poly::zero(ring));
    rep.equal("M relation eqEI5", &apply_row(&m[3]), &-&rhs5);

    let det = determinant(&m);
    let det = corrupt.apply("det M", det, &lhs1);
    let divisor = &wpf * g;
    match det.div_exact(&divisor) {
        Some(gq) => {
            rep.condition("det M", true, String::new);
            rep.homogeneous("G", &gq, 6 * az);
            rep.condition("G quadratic in w", gq.degree_in(7) == 2, || format!("degree {} in w", gq.degree_in(7)));
            rep.condition("G cubic in v", gq.degree_in(6) == 3, || format!("degree {} in v", gq.degree_in(6)));
        }
        None => rep.condition("det M", false, || "det M is not divisible by w' g".to_string()),
    }
    rep
}

// ---------------------------------------------------------------------------
// Normal-form reachability

/// Applies the square completion of the quadratic normal form and checks the resulting shape.
pub fn demo_qi_normalization(f: &FamilyRecord, s: &InvolutionScheme, seed: CoefficientSeed) -> Result<(), SarkisovError> {
    let ring = involution_ring(f, s);
    let data = qi_generic_data(&ring, s, seed);
    let var = |i: usize| Poly::var(&ring, i);
    let (x0, x1, xi, zeta) = (var(0), var(1), var(4), var(5));
    let alpha = generic(&ring, &[0, 1, 2, 3], s.a(s.zeta) as i64 - s.a(s.xi) as i64, seed, "qi-demo-alpha");
    let f1 = &(&(&(&xi * &xi) * &x0) + &(&xi * &(&(&zeta * &alpha) + &data.a))) + &(&(&zeta * &zeta) + &data.b);
    let f2 = &(&(&xi * &x1) + &(&zeta * &data.c)) + &data.d;
    let err = |e: crate::poly::AlgebraError| SarkisovError::Normalization(e.to_string());
    let roles = [4, 5];

    let al = split_roles(&f1, &roles).remove(&vec![1, 1]).unwrap_or_else(|| Poly::zero(&ring));
    let rep = &zeta - &(&xi * &al).scale(&rat(1, 2));
    let (f1, f2) = (f1.substitute(5, &rep).map_err(err)?, f2.substitute(5, &rep).map_err(err)?);
    let p = split_roles(&f1, &roles).remove(&vec![2, 0]).unwrap_or_else(|| Poly::zero(&ring));
    let rep = &(&x0 + &x0) - &p;
    let (f1, f2) = (f1.substitute(0, &rep).map_err(err)?, f2.substitute(0, &rep).map_err(err)?);
    let q = split_roles(&f2, &roles).remove(&vec![1, 0]).unwrap_or_else(|| Poly::zero(&ring));
    let rep = &(&x1 + &x1) - &q;
    let (f1, f2) = (f1.substitute(1, &rep).map_err(err)?, f2.substitute(1, &rep).map_err(err)?);

    let one = Poly::one(&ring);
    has_shape(&f1, &roles, &[(&[2, 0], Some(&x0)), (&[1, 0], None), (&[0, 2], Some(&one)), (&[0, 0], None)])
        .map_err(|e| SarkisovError::Normalization(format!("F1: {e}")))?;
    has_shape(&f2, &roles, &[(&[1, 0], Some(&x1)), (&[0, 1], None), (&[0, 0], None)])
        .map_err(|e| SarkisovError::Normalization(format!("F2: {e}")))?;
    Ok(())
}

/// Applies the eliminations of the elliptic normal form and checks the resulting shape.
pub fn demo_ei_normalization(f: &FamilyRecord, s: &InvolutionScheme, seed: CoefficientSeed) -> Result<(), SarkisovError> {
    let ring = involution_ring(f, s);
    let data = ei_generic_data(&ring, s, seed);
    let var = |i: usize| Poly::var(&ring, i);
    let (x0, xi, zeta, eta) = (var(0), var(3), var(4), var(5));
    let (ax, ae) = (s.a(s.xi) as i64, s.a(s.eta.expect("eta")) as i64);
    let xs = [0, 1, 2];
    let alpha = generic(&ring, &xs, ax, seed, "ei-demo-alpha");
    let beta = generic(&ring, &xs, ae - ax, seed, "ei-demo-beta");
    let gamma = generic(&ring, &xs, ae, seed, "ei-demo-gamma");
    let EiData { a, b, c, d, e, f: ff, g } = &data;
    let f1 = &(&(&(&xi * &zeta) + &(&zeta * &alpha)) + &(&eta * &eta)) + &(&(&eta * a) + b);
    let f2 = &(&(&(&(&xi * &xi) * &x0) + &(&xi * &(&(&(&zeta * &beta) + &(&eta * c)) + d))) + &(&(&zeta * &eta) + &(&zeta * &gamma)))
        + &(&(&(&(&eta * &eta) * e) + &(&eta * ff)) + g);
    let err = |e: crate::poly::AlgebraError| SarkisovError::Normalization(e.to_string());
    let roles = [3, 4, 5];
    let coeff = |p: &Poly, k: [u32; 3]| split_roles(p, &roles).remove(k.as_slice()).unwrap_or_else(|| Poly::zero(&ring));

    let be = coeff(&f2, [1, 1, 0]);
    let f2 = &f2 - &(&be * &f1);
    let al = coeff(&f1, [0, 1, 0]);
    let rep = &xi - &al;
    let (f1, f2) = (f1.substitute(3, &rep).map_err(err)?, f2.substitute(3, &rep).map_err(err)?);
    let ga = coeff(&f2, [0, 1, 0]);
    let rep = &eta - &ga;
    let (f1, f2) = (f1.substitute(5, &rep).map_err(err)?, f2.substitute(5, &rep).map_err(err)?);

    let one = Poly::one(&ring);
    has_shape(&f1, &roles, &[(&[1, 1, 0], Some(&one)), (&[0, 0, 2], Some(&one)), (&[0, 0, 1], None), (&[0, 0, 0], None)])
        .map_err(|e| SarkisovError::Normalization(format!("F1: {e}")))?;
    has_shape(
        &f2,
        &roles,
        &[
            (&[2, 0, 0], Some(&x0)),
            (&[1, 0, 1], None),
            (&[1, 0, 0], None),
            (&[0, 1, 1], Some(&one)),
            (&[0, 0, 2], None),
            (&[0, 0, 1], None),
            (&[0, 0, 0], None),
        ],
    )
    .map_err(|e| SarkisovError::Normalization(format!("F2: {e}")))?;
    Ok(())
}

/// Runs the symbolic suite for one annotated row, or `None` when its method has no identities.
pub fn row_identities(
    f: &FamilyRecord,
    p: &CenterAnnotation,
    seed: CoefficientSeed,
    corrupt: Corruption<'_>,
) -> Option<Result<IdentityReport, SarkisovError>> {
    use crate::family::MethodTag;
    let run = || -> Result<IdentityReport, SarkisovError> {
        Ok(match &p.method {
            MethodTag::Qi => verify_qi_identities(f, &involution_numerology(f, p, InvolutionKind::Qi)?, seed, corrupt),
            MethodTag::Ei => verify_ei_identities(f, &involution_numerology(f, p, InvolutionKind::Ei)?, seed, corrupt),
            MethodTag::FanoLink { .. } => verify_link_equations(f, &fano_link_target(f, p)?, seed, corrupt),
            MethodTag::DpLink { .. } => verify_dp_link(f, &dp_link_degree(f, p)?, seed, corrupt),
            _ => unreachable!(),
        })
    };
    matches!(p.method, MethodTag::Qi | MethodTag::Ei | MethodTag::FanoLink { .. } | MethodTag::DpLink { .. })
        .then(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Database;

    fn point(db: &Database, id: u32, r: u32) -> (&FamilyRecord, &CenterAnnotation) {
        let (f, ann) = db.get(id).unwrap();
        (f, ann.points().find(|p| p.r == r).unwrap())
    }

    #[test]
    fn fano_targets() {
        let db = Database::shipped();
        let (f, p) = point(&db, 57, 5);
        let s = fano_link_target(f, p).unwrap();
        assert_eq!(s.target_string(), "X'_14 in P(1,2,3,7,2)");
        let (f, p) = point(&db, 6, 3);
        let s = fano_link_target(f, p).unwrap();
        assert_eq!((s.weights[3], s.weights[4], s.b), (1, 2, 1));
        assert!(s.matches(5, &[1, 1, 1, 2, 1]));
        let (f, p) = point(&db, 77, 10);
        assert!(fano_link_target(f, p).unwrap().matches(18, &[1, 1, 6, 9, 2]));
    }

    #[test]
    fn equal_degrees_rejected() {
        let db = Database::shipped();
        let (f, p) = point(&db, 4, 3);
        assert!(matches!(fano_link_target(f, p), Err(SarkisovError::Precondition(_))));
    }

    #[test]
    fn dp_degrees() {
        let db = Database::shipped();
        for (id, r, e, k) in [(4, 3, 1, 2), (13, 3, 3, 1), (12, 4, 2, 1)] {
            let (f, p) = point(&db, id, r);
            let s = dp_link_degree(f, p).unwrap();
            assert_eq!((s.e, s.k), (e, k), "family {id}");
        }
    }

    #[test]
    fn involution_roles() {
        let db = Database::shipped();
        let (f, p) = point(&db, 75, 8);
        let s = involution_numerology(f, p, InvolutionKind::Qi).unwrap();
        assert_eq!(s.assignment(), "xi=8, zeta=9, i0=2, i1=6, i2=1, i3=7");
        assert_eq!((s.deg_v, s.z_string()), (15, "Z_30 in P(1,2,6,7,15)".to_string()));
        let (f, p) = point(&db, 8, 2);
        let s = involution_numerology(f, p, InvolutionKind::Qi).unwrap();
        assert_eq!(s.z_string(), "Z_10 in P(1,1,2,2,5)");
        let (f, p) = point(&db, 53, 5);
        let s = involution_numerology(f, p, InvolutionKind::Ei).unwrap();
        assert_eq!(s.z_string(), "Z_42 in P(1,3,4,14,21)");
    }

    #[test]
    fn qi_identities_no75() {
        let db = Database::shipped();
        let (f, p) = point(&db, 75, 8);
        let s = involution_numerology(f, p, InvolutionKind::Qi).unwrap();
        for seed in 1..=3 {
            let rep = verify_qi_identities(f, &s, CoefficientSeed(seed), Corruption::default());
            rep.ok().unwrap();
        }
        let bad = verify_qi_identities(f, &s, CoefficientSeed(1), Corruption(Some("eqQI1")));
        assert!(matches!(bad.ok(), Err(SarkisovError::IdentityFail { identity, .. }) if identity == "eqQI1"));
    }

    #[test]
    fn qi_degenerate_data() {
        let db = Database::shipped();
        let (f, p) = point(&db, 75, 8);
        let s = involution_numerology(f, p, InvolutionKind::Qi).unwrap();
        let ring = involution_ring(f, &s);
        let z = Poly::zero(&ring);
        let data = QiData { a: z.clone(), b: z.clone(), c: z.clone(), d: z };
        verify_qi_with(&ring, &s, &data, Corruption::default()).ok().unwrap();
    }

    #[test]
    fn ei_identities_no53_no16() {
        let db = Database::shipped();
        for (id, r, deg) in [(53, 5, 42), (16, 2, 24)] {
            let (f, p) = point(&db, id, r);
            let s = involution_numerology(f, p, InvolutionKind::Ei).unwrap();
            assert_eq!(s.z_degree, deg);
            verify_ei_identities(f, &s, CoefficientSeed(1), Corruption::default()).ok().unwrap();
            let bad = verify_ei_identities(f, &s, CoefficientSeed(1), Corruption(Some("eqEI3")));
            assert!(!bad.passed());
        }
    }

    #[test]
    fn link_equations_no57_no6() {
        let db = Database::shipped();
        let (f, p) = point(&db, 57, 5);
        let s = fano_link_target(f, p).unwrap();
        verify_link_equations(f, &s, CoefficientSeed(2), Corruption::default()).ok().unwrap();
        assert_eq!(s.weights[4] + s.degrees[0], 21);
        demo_link_normalization(f, &s, CoefficientSeed(2)).unwrap();
        let (f, p) = point(&db, 4, 3);
        let s = dp_link_degree(f, p).unwrap();
        verify_dp_link(f, &s, CoefficientSeed(2), Corruption::default()).ok().unwrap();
    }

    #[test]
    fn normal_forms_reachable() {
        let db = Database::shipped();
        let (f, p) = point(&db, 75, 8);
        let s = involution_numerology(f, p, InvolutionKind::Qi).unwrap();
        demo_qi_normalization(f, &s, CoefficientSeed(3)).unwrap();
        let (f, p) = point(&db, 53, 5);
        let s = involution_numerology(f, p, InvolutionKind::Ei).unwrap();
        demo_ei_normalization(f, &s, CoefficientSeed(3)).unwrap();
    }
}
