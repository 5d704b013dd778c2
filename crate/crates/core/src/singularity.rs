//! Singular points of a general member: strata, quotient types, point counts.
//!
//! A stratum for the index `r` is the coordinate subspace spanned by the weights
//! divisible by `r`. Its points of index exactly `r` are counted by weighted
//! Bezout on the gcd-reduced stratum, less the local contributions of the
//! higher-index points lying on it.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::family::FamilyRecord;
use crate::poly::{generic_member, CoefficientSeed, Poly, Ring};
use crate::rational::{fmt_rational, gcd_u64, rat, Rational};
use crate::upoly::{interpolate, sylvester_resultant, UPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularityError {
    #[error("family {id}: index {r} stratum is not isolated")]
    NotIsolated { id: u32, r: u32 },
    #[error("family {id}: index {r} local weights {weights:?} admit no terminal normalization")]
    NormalizationFailed { id: u32, r: u32, weights: Vec<u32> },
    #[error("family {id}: index {r} point count {value} is not a non-negative integer")]
    NonIntegerCount { id: u32, r: u32, value: String },
    #[error("family {id}: index {r} oracle seeds stayed degenerate")]
    DegenerateSeed { id: u32, r: u32 },
}

/// Coin-problem test: can `d` be written as a non-negative combination of `gens`?
pub fn representable(d: u32, gens: &[u32]) -> bool {
    let d = d as usize;
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for i in 1..=d {
        reach[i] = gens.iter().any(|&g| g as usize <= i && g > 0 && reach[i - g as usize]);
    }
    reach[d]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Restriction {
    Vanishes,
    Degree(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub r: u32,
    pub indices: Vec<usize>,
    pub ambient: Vec<u32>,
    pub restrictions: [Restriction; 2],
}

impl Stratum {
    pub fn vanishing_degrees(&self, f: &FamilyRecord) -> Vec<u32> {
        (0..2).filter(|&i| self.restrictions[i] == Restriction::Vanishes).map(|i| f.degrees[i]).collect()
    }

    pub fn live_degrees(&self) -> Vec<u32> {
        self.restrictions
            .iter()
            .filter_map(|r| match r {
                Restriction::Degree(d) => Some(*d),
                Restriction::Vanishes => None,
            })
            .collect()
    }

    /// `|J| + |D|`, which equals 3 exactly when the stratum meets X in points.
    pub fn isolation_number(&self) -> usize {
        self.indices.len() + self.restrictions.iter().filter(|r| **r == Restriction::Vanishes).count()
    }

    pub fn gcd(&self) -> u32 {
        self.ambient.iter().fold(0u64, |g, &a| gcd_u64(g, a as u64)) as u32
    }

    pub fn label(&self) -> String {
        let v: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!("p{}", v.join(","))
    }
}

/// One stratum per `r >= 2` dividing a weight, in descending order of `r`.
pub fn enumerate_strata(f: &FamilyRecord) -> Vec<Stratum> {
    let top = *f.weights.iter().max().unwrap();
    let mut out = Vec::new();
    for r in (2..=top).rev() {
        let indices: Vec<usize> = (0..6).filter(|&j| f.weights[j].is_multiple_of(r)).collect();
        if indices.is_empty() {
            continue;
        }
        let ambient: Vec<u32> = indices.iter().map(|&j| f.weights[j]).collect();
        let restrict = |d: u32| if representable(d, &ambient) { Restriction::Degree(d) } else { Restriction::Vanishes };
        let restrictions = [restrict(f.degrees[0]), restrict(f.degrees[1])];
        out.push(Stratum { r, indices, ambient, restrictions });
    }
    out
}

/// Normalized quotient type `1/r(1, a, r - a)` with `a <= r - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuotientType {
    pub r: u32,
    pub a: u32,
}

impl QuotientType {
    pub fn weights(&self) -> [u32; 3] {
        [1, self.a, self.r - self.a]
    }
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{},{})", self.r, self.a, self.r - self.a)
    }
}

/// Finds the unit `u` mapping the residues to `{1, a, r - a}`.
pub fn normalize_type(r: u32, residues: &[u32]) -> Option<QuotientType> {
    if residues.len() != 3 {
        return None;
    }
    let mut best: Option<QuotientType> = None;
    for u in 1..r {
        if gcd_u64(u as u64, r as u64) != 1 {
            continue;
        }
        let mut v: Vec<u32> = residues.iter().map(|&x| ((x as u64 * u as u64) % r as u64) as u32).collect();
        v.sort_unstable();
        if v[0] == 1 && v[1] + v[2] == r && gcd_u64(v[1] as u64, r as u64) == 1 {
            let t = QuotientType { r, a: v[1] };
            if best.is_none_or(|b| t < b) {
                best = Some(t);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeOutcome {
    Isolated(QuotientType),
    /// The stratum misses a general member.
    Empty,
    NotIsolated,
}

/// Local type of the index-`r` points on a stratum.
pub fn quotient_type(f: &FamilyRecord, s: &Stratum) -> Result<TypeOutcome, SingularityError> {
    let n = s.isolation_number();
    if n < 3 {
        return Ok(TypeOutcome::Empty);
    }
    if n > 3 {
        return Ok(TypeOutcome::NotIsolated);
    }
    let r = s.r;
    let mut v: Vec<u32> = (0..6).filter(|j| !s.indices.contains(j)).map(|j| f.weights[j] % r).collect();
    for d in s.vanishing_degrees(f) {
        let res = d % r;
        match v.iter().position(|&x| x == res) {
            Some(p) => {
                v.remove(p);
            }
            None => return Err(SingularityError::NormalizationFailed { id: f.id, r, weights: v }),
        }
    }
    normalize_type(r, &v)
        .map(TypeOutcome::Isolated)
        .ok_or(SingularityError::NormalizationFailed { id: f.id, r, weights: v })
}

/// Minimal total exponent `>= 1` of a monomial in the local weights `alpha`
/// with residue `e` modulo `q`; `None` when unreachable. Residue-0 weights are
/// invariant coordinates.
pub fn local_multiplicity(alpha: &[u32], e: u32, q: u32) -> Option<u32> {
    let q = q as usize;
    let target = e as usize % q;
    let mut best: Vec<Option<u32>> = vec![None; q];
    let mut frontier = vec![0usize];
    for level in 1..=q as u32 {
        let mut next = Vec::new();
        for &x in &frontier {
            for &a in alpha {
                let y = (x + a as usize) % q;
                if best[y].is_none() {
                    best[y] = Some(level);
                    next.push(y);
                }
            }
        }
        if best[target].is_some() || next.is_empty() {
            break;
        }
        frontier = next;
    }
    best[target]
}

/// Number of points of index exactly `s.r` on a general member.
pub fn count_points(f: &FamilyRecord, s: &Stratum) -> Result<u64, SingularityError> {
    let strata = enumerate_strata(f);
    count_in(f, s, &strata)
}

fn count_in(f: &FamilyRecord, s: &Stratum, strata: &[Stratum]) -> Result<u64, SingularityError> {
    let g = s.gcd();
    if g != s.r {
        return Ok(0);
    }
    match quotient_type(f, s)? {
        TypeOutcome::Empty => return Ok(0),
        TypeOutcome::NotIsolated => return Err(SingularityError::NotIsolated { id: f.id, r: s.r }),
        TypeOutcome::Isolated(_) => {}
    }
    let reduced: Vec<u32> = s.ambient.iter().map(|a| a / g).collect();
    let live: Vec<u32> = s.live_degrees().iter().map(|d| d / g).collect();
    let num: i64 = live.iter().map(|&e| e as i64).product();
    let den: i64 = reduced.iter().map(|&w| w as i64).product();
    let mut total = rat(num, den);
    for t in strata.iter().filter(|t| t.r > s.r && t.r % s.r == 0) {
        let n = count_in(f, t, strata)?;
        if n == 0 {
            continue;
        }
        let support: Vec<usize> = t.indices.clone();
        let pos: Vec<usize> = support.iter().map(|j| s.indices.iter().position(|k| k == j).unwrap()).collect();
        let q = pos.iter().fold(0u64, |a, &p| gcd_u64(a, reduced[p] as u64)) as u32;
        let mut alpha: Vec<u32> =
            (0..reduced.len()).filter(|p| !pos.contains(p)).map(|p| reduced[p] % q).collect();
        alpha.extend(std::iter::repeat_n(0, pos.len() - 1));
        let mut contrib = Rational::one();
        for &e in &live {
            let mu = local_multiplicity(&alpha, e, q).ok_or_else(|| {
                SingularityError::NonIntegerCount { id: f.id, r: s.r, value: format!("unreachable residue {e} mod {q}") }
            })?;
            contrib *= Rational::from_integer(BigInt::from(mu));
        }
        contrib /= Rational::from_integer(BigInt::from(q));
        total -= contrib * Rational::from_integer(BigInt::from(n));
    }
    if !total.is_integer() || total.is_negative() {
        return Err(SingularityError::NonIntegerCount { id: f.id, r: s.r, value: fmt_rational(&total) });
    }
    Ok(total.to_integer().to_u64().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub r: u32,
    pub indices: Vec<usize>,
    pub kind: QuotientType,
    pub count: u64,
}

impl SingularPoint {
    pub fn label(&self) -> String {
        let v: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!("p{}", v.join(","))
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            write!(f, "{} = {}", self.label(), self.kind)
        } else {
            write!(f, "{} = {} x {}", self.label(), self.count, self.kind)
        }
    }
}

/// All isolated quotient points of a general member, by descending index.
pub fn basket(f: &FamilyRecord) -> Result<Vec<SingularPoint>, SingularityError> {
    let strata = enumerate_strata(f);
    let mut out = Vec::new();
    for s in &strata {
        if s.gcd() != s.r {
            continue;
        }
        let t = match quotient_type(f, s)? {
            TypeOutcome::Empty => continue,
            TypeOutcome::NotIsolated => return Err(SingularityError::NotIsolated { id: f.id, r: s.r }),
            TypeOutcome::Isolated(t) => t,
        };
        let n = count_in(f, s, &strata)?;
        if n > 0 {
            out.push(SingularPoint { r: s.r, indices: s.indices.clone(), kind: t, count: n });
        }
    }
    Ok(out)
}

/// `h^0(-K)` from singular Riemann-Roch on the basket, minus the number of
/// weight-1 coordinates. Vanishes for a correct basket since `d1, d2 > 1`.
pub fn riemann_roch_defect(f: &FamilyRecord, points: &[SingularPoint]) -> Rational {
    let mut rr = f.a3() / Rational::from_integer(BigInt::from(2)) + Rational::from_integer(BigInt::from(3));
    for p in points {
        let r = p.kind.r as i64;
        let b = (1..r).find(|b| (b * p.kind.a as i64) % r == 1).unwrap_or(1);
        rr -= rat(b * (r - b) * p.count as i64, 2 * r);
    }
    rr - Rational::from_integer(BigInt::from(f.weights.iter().filter(|&&a| a == 1).count()))
}

/// Points found by the oracle on a gcd-reduced stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCount {
    /// Points with trivial stabilizer in the reduced stratum.
    pub free: u64,
    /// Points with nontrivial stabilizer, as (stabilizer order, count).
    pub orbifold: Vec<(u32, u64)>,
}

const ORACLE_ATTEMPTS: u64 = 6;

/// Counts points of `X ∩ Π_J` on the gcd-reduced stratum directly from seeded
/// general members, by resultant elimination on each torus orbit.
pub fn count_oracle(f: &FamilyRecord, s: &Stratum, seed: CoefficientSeed) -> Result<OracleCount, SingularityError> {
    let g = s.gcd();
    let reduced: Vec<u32> = s.ambient.iter().map(|a| a / g).collect();
    let live: Vec<u32> = s.live_degrees().iter().map(|d| d / g).collect();
    let n = reduced.len();
    if n > 3 || live.len() + 1 < n {
        return Err(SingularityError::NotIsolated { id: f.id, r: s.r });
    }
    let names: Vec<(String, u32)> = reduced.iter().enumerate().map(|(i, &w)| (format!("w{i}"), w)).collect();
    let ring = Ring::new(&names);
    for attempt in 0..ORACLE_ATTEMPTS {
        let sd = seed.derive(&format!("oracle-{}-{}-{attempt}", f.id, s.r));
        let eqs: Vec<Poly> = live
            .iter()
            .enumerate()
            .map(|(k, &e)| generic_member(&ring, e, sd.derive(&format!("eq{k}")), &BTreeSet::new()))
            .collect();
        if let Some(c) = oracle_attempt(&reduced, &eqs, attempt) {
            return Ok(c);
        }
    }
    Err(SingularityError::DegenerateSeed { id: f.id, r: s.r })
}

fn oracle_attempt(w: &[u32], eqs: &[Poly], shear: u64) -> Option<OracleCount> {
    let n = w.len();
    let mut free = 0u64;
    let mut orbifold: std::collections::BTreeMap<u32, u64> = Default::default();
    let mut record = |stab: u32, k: u64| {
        if k == 0 {
            return;
        }
        if stab == 1 {
            free += k;
        } else {
            *orbifold.entry(stab).or_default() += k;
        }
    };
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let zero: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        let sw: Vec<u32> = support.iter().map(|&i| w[i]).collect();
        let stab = sw.iter().fold(0u64, |g, &x| gcd_u64(g, x as u64)) as u32;
        let restricted: Vec<Poly> = eqs.iter().map(|p| p.set_zero(&zero)).collect();
        let live: Vec<&Poly> = restricted.iter().filter(|p| !p.is_zero()).collect();
        let dim = support.len() - 1;
        if live.len() < dim {
            return None;
        }
        let k = match dim {
            0 => {
                if live.is_empty() {
                    1
                } else {
                    0
                }
            }
            1 => torus_count_1d(&sw, &support, &live)?,
            2 => {
                if live.len() != 2 {
                    return None;
                }
                torus_count_2d(&sw, live[0], live[1], shear)?
            }
            _ => return None,
        };
        record(stab, k);
    }
    Some(OracleCount { free, orbifold: orbifold.into_iter().collect() })
}

/// Polynomial in the torus coordinate of a coordinate line.
fn dehomogenize_1d(p: &Poly, support: &[usize], sw: &[u32]) -> UPoly {
    let g = gcd_u64(sw[0] as u64, sw[1] as u64) as u32;
    let step = sw[1] / g;
    let mut exps: Vec<(u32, Rational)> = Vec::new();
    for (m, c) in p.terms() {
        exps.push((m.exps()[support[0]], c.clone()));
    }
    let base = exps.iter().map(|(e, _)| *e).min().unwrap_or(0);
    let mut coeffs: Vec<Rational> = Vec::new();
    for (e, c) in exps {
        let k = ((e - base) / step) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] += c;
    }
    UPoly::new(coeffs)
}

fn torus_count_1d(sw: &[u32], support: &[usize], live: &[&Poly]) -> Option<u64> {
    let mut acc: Option<UPoly> = None;
    for p in live {
        let u = dehomogenize_1d(p, support, sw).strip_t();
        acc = Some(match acc {
            None => u,
            Some(a) => a.gcd(&u),
        });
    }
    let a = acc?;
    if a.is_zero() {
        return None;
    }
    Some(a.distinct_roots() as u64)
}

/// Integer polynomial in two torus coordinates, as a grid of coefficients `[i][j]` of `u^i v^j`.
struct Bivariate {
    grid: Vec<Vec<BigInt>>,
}

impl Bivariate {
    fn deg_u(&self) -> usize {
        self.grid.len().saturating_sub(1)
    }

    fn deg_v(&self) -> usize {
        self.grid.iter().map(|r| r.len()).max().unwrap_or(1).saturating_sub(1)
    }

    fn transpose(&self) -> Bivariate {
        let dv = self.deg_v();
        let mut grid = vec![vec![BigInt::zero(); self.grid.len()]; dv + 1];
        for (i, row) in self.grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                grid[j][i] = c.clone();
            }
        }
        Bivariate { grid }
    }

    /// Coefficients in `v` (formal length `deg_v + 1`) at `u = x`.
    fn at_u(&self, x: &BigInt, len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        let mut pw = BigInt::one();
        for row in &self.grid {
            for (j, c) in row.iter().enumerate() {
                out[j] += c * &pw;
            }
            pw *= x;
        }
        out
    }

    /// Univariate polynomial in `u` at `v = 0`.
    fn at_v0(&self) -> UPoly {
        UPoly::new(self.grid.iter().map(|row| Rational::from_integer(row.first().cloned().unwrap_or_default())).collect())
    }

    /// Coefficient of `v^deg_v` as a polynomial in `u`.
    fn lead_v(&self, dv: usize) -> UPoly {
        UPoly::new(self.grid.iter().map(|row| Rational::from_integer(row.get(dv).cloned().unwrap_or_default())).collect())
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Torus coordinates `u = x^b1`, `v = x^b2` for the basis `b1 = v1 + shear v2`, `b2 = v2`
/// of degree-zero exponent vectors.
fn to_bivariate(p: &Poly, w: &[u32], shear: i64) -> Option<Bivariate> {
    let (w0, w1, w2) = (w[0] as i64, w[1] as i64, w[2] as i64);
    let (g01, s, t) = ext_gcd(w0, w1);
    let v1 = [w1 / g01, -w0 / g01, 0];
    let v2 = [-s * w2, -t * w2, g01];
    let terms: Vec<([i64; 3], BigInt)> = p
        .terms()
        .map(|(m, c)| {
            let e = m.exps();
            ([e[0] as i64, e[1] as i64, e[2] as i64], c.to_integer())
        })
        .collect();
    let base = terms.first()?.0;
    let mut coords = Vec::with_capacity(terms.len());
    for (e, c) in &terms {
        let d = [e[0] - base[0], e[1] - base[1], e[2] - base[2]];
        if d[2] % g01 != 0 {
            return None;
        }
        let q = d[2] / g01;
        let rem = [d[0] - q * v2[0], d[1] - q * v2[1]];
        let pcoef = if v1[0] != 0 { rem[0] / v1[0] } else { rem[1] / v1[1] };
        if rem[0] != pcoef * v1[0] || rem[1] != pcoef * v1[1] {
            return None;
        }
        coords.push((pcoef, q - shear * pcoef, c.clone()));
    }
    let pmin = coords.iter().map(|c| c.0).min()?;
    let qmin = coords.iter().map(|c| c.1).min()?;
    let du = coords.iter().map(|c| c.0 - pmin).max()? as usize;
    let dv = coords.iter().map(|c| c.1 - qmin).max()? as usize;
    let mut grid = vec![vec![BigInt::zero(); dv + 1]; du + 1];
    for (pc, qc, c) in coords {
        grid[(pc - pmin) as usize][(qc - qmin) as usize] += c;
    }
    Some(Bivariate { grid })
}

/// Squarefree eliminant in the first torus coordinate with boundary roots removed.
fn eliminant(f: &Bivariate, g: &Bivariate) -> Option<UPoly> {
    let (mf, mg) = (f.deg_v(), g.deg_v());
    let bound = mg * f.deg_u() + mf * g.deg_u();
    let xs: Vec<Rational> = (0..=bound as i64).map(|k| Rational::from_integer(BigInt::from(k))).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let xi = x.to_integer();
            Rational::from_integer(sylvester_resultant(&f.at_u(&xi, mf + 1), &g.at_u(&xi, mg + 1)))
        })
        .collect();
    let res = interpolate(&xs, &ys);
    if res.is_zero() {
        return None;
    }
    let mut sf = res.strip_t().squarefree_part();
    sf = sf.remove_common(&f.at_v0().gcd(&g.at_v0()));
    sf = sf.remove_common(&f.lead_v(mf).gcd(&g.lead_v(mg)));
    Some(sf)
}

fn torus_count_2d(w: &[u32], f: &Poly, g: &Poly, shear: u64) -> Option<u64> {
    let bf = to_bivariate(f, w, shear as i64)?;
    let bg = to_bivariate(g, w, shear as i64)?;
    let ru = eliminant(&bf, &bg)?;
    let rv = eliminant(&bf.transpose(), &bg.transpose())?;
    let (nu, nv) = (ru.degree().unwrap_or(0), rv.degree().unwrap_or(0));
    (nu == nv).then_some(nu as u64)
}
