//! Sparse multivariate polynomials over the rationals with a weighted grading.
//!
//! A [`Poly`] lives in a [`Ring`], an ordered list of named variables with
//! positive weights. Terms are kept in graded-lex order (largest first) and
//! zero coefficients are never stored, so structural equality is equality of
//! polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::{fmt_rational, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("grading violation: {var} has weight {expected} but the replacement has degree {found}")]
    GradingViolation { var: String, expected: u32, found: String },
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("parse error in `{0}`")]
    Parse(String),
}

/// Ordered variables with positive weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[(S, u32)]) -> Arc<Ring> {
        assert!(vars.iter().all(|(_, w)| *w > 0), "weights must be positive");
        Arc::new(Ring {
            names: vars.iter().map(|(n, _)| n.as_ref().to_string()).collect(),
            weights: vars.iter().map(|(_, w)| *w).collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree_of(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }
}

/// Exponent vector ordered graded-lex descending: the larger monomial sorts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total()
            .cmp(&self.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Seed for deterministic coefficient generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoefficientSeed(pub u64);

impl CoefficientSeed {
    /// Independent sub-seed labelled by `tag`.
    pub fn derive(&self, tag: &str) -> CoefficientSeed {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in tag.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        let mut z = self.0 ^ h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        CoefficientSeed(z ^ (z >> 31))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

/// All exponent vectors of weighted degree `d`, in graded-lex order.
pub fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match weights.split_first() {
            None => {
                if d == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&w, rest)) => {
                for e in 0..=d / w {
                    prefix.push(e);
                    rec(rest, d - e * w, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    assert!(!weights.is_empty() && weights.iter().all(|&w| w > 0));
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::with_capacity(weights.len()), &mut out);
    out.sort_by_key(|a| Monomial(a.clone()));
    out
}

/// Number of monomials of weighted degree `d`, by the coin-change recurrence.
pub fn count_monomials(weights: &[u32], d: u32) -> u64 {
    let d = d as usize;
    let mut ways = vec![0u64; d + 1];
    ways[0] = 1;
    for &w in weights {
        for n in w as usize..=d {
            ways[n] += ways[n - w as usize];
        }
    }
    ways[d]
}

/// A homogeneous member of degree `d` with every monomial outside `exclusions`
/// carrying a seeded coefficient in `1..=97`.
pub fn generic_member(
    ring: &Arc<Ring>,
    d: u32,
    seed: CoefficientSeed,
    exclusions: &BTreeSet<Vec<u32>>,
) -> Poly {
    let vars: Vec<usize> = (0..ring.nvars()).collect();
    generic_member_on(ring, &vars, d, seed, exclusions)
}

/// As [`generic_member`], supported on the variables `vars` only.
pub fn generic_member_on(
    ring: &Arc<Ring>,
    vars: &[usize],
    d: u32,
    seed: CoefficientSeed,
    exclusions: &BTreeSet<Vec<u32>>,
) -> Poly {
    let mut rng = seed.rng();
    let mut p = Poly::zero(ring);
    if vars.is_empty() {
        if d == 0 {
            let c: i64 = rng.gen_range(1..=97);
            p = Poly::constant(ring, int(c));
        }
        return p;
    }
    let sub: Vec<u32> = vars.iter().map(|&i| ring.weight(i)).collect();
    for e in monomials_of_degree(&sub, d) {
        let mut full = vec![0; ring.nvars()];
        for (k, &i) in vars.iter().enumerate() {
            full[i] = e[k];
        }
        let c: i64 = rng.gen_range(1..=97);
        if !exclusions.contains(&full) {
            p.add_term(Monomial(full), int(c));
        }
    }
    p
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Poly {
        let mut p = Poly::zero(ring);
        p.add_term(Monomial(vec![0; ring.nvars()]), c);
        p
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, Rational::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Poly::monomial(ring, e, Rational::one())
    }

    /// Variable by name. Panics if absent.
    pub fn named(ring: &Arc<Ring>, name: &str) -> Poly {
        let i = ring.index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Poly::var(ring, i)
    }

    pub fn monomial(ring: &Arc<Ring>, exps: Vec<u32>, c: Rational) -> Poly {
        assert_eq!(exps.len(), ring.nvars());
        let mut p = Poly::zero(ring);
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(ring: &Arc<Ring>, terms: I) -> Poly {
        let mut p = Poly::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars());
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded-lex descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    /// The common weighted degree of all terms; `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| self.ring.degree_of(&m.0));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| self.ring.degree_of(&m.0)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Coefficient of `var^k`, as a polynomial with `var` removed.
    pub fn coeff_in(&self, var: usize, k: u32) -> Poly {
        let mut p = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut e = m.0.clone();
                e[var] = 0;
                p.add_term(Monomial(e), c.clone());
            }
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "{}",
            AlgebraError::RingMismatch
        );
    }

    /// Replaces `var` by `rep`. The replacement must be homogeneous of the weight of `var`.
    pub fn substitute(&self, var: usize, rep: &Poly) -> Result<Poly, AlgebraError> {
        self.check_ring(rep);
        let w = self.ring.weight(var);
        if !rep.is_zero() && rep.degree() != Some(w) {
            let found = rep.degrees().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
            return Err(AlgebraError::GradingViolation {
                var: self.ring.name(var).to_string(),
                expected: w,
                found,
            });
        }
        Ok(self.substitute_raw(var, rep))
    }

    fn substitute_raw(&self, var: usize, rep: &Poly) -> Poly {
        let mut by_power: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[var];
            let mut e = m.0.clone();
            e[var] = 0;
            by_power.entry(k).or_insert_with(|| Poly::zero(&self.ring)).add_term(Monomial(e), c.clone());
        }
        let mut out = Poly::zero(&self.ring);
        let mut power = Poly::one(&self.ring);
        let mut at = 0u32;
        for (k, coeff) in by_power {
            while at < k {
                power = &power * rep;
                at += 1;
            }
            out = &out + &(&coeff * &power);
        }
        out
    }

    /// Sets the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.0[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes a constant for `var`. Breaks homogeneity unless the value is zero.
    pub fn eval_var(&self, var: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var];
            e[var] = 0;
            let mut f = c.clone();
            for _ in 0..k {
                f *= value;
            }
            out.add_term(Monomial(e), f);
        }
        out
    }

    /// Values of all variables, giving a constant.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, v) in m.0.iter().zip(values) {
                for _ in 0..*e {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.check_ring(d);
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let e: Vec<u32> = m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(&self.ring, e, c / &lc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Re-embeds into `target`, sending variable `i` to `map[i]`.
    pub fn map_ring(&self, target: &Arc<Ring>, map: &[usize]) -> Poly {
        let mut p = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.nvars()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e[map[i]] += k;
                }
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Parses a sum of monomials such as `s0 y + z^2 - 3 alpha y^3`.
    ///
    /// Names known to the ring are variables; any other name is resolved by
    /// `coefficient`, which returns its numeric value.
    pub fn parse<F>(ring: &Arc<Ring>, text: &str, coefficient: F) -> Result<Poly, AlgebraError>
    where
        F: Fn(&str) -> Option<Rational>,
    {
        let err = || AlgebraError::Parse(text.to_string());
        let mut out = Poly::zero(ring);
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut sign = true;
        let mut cur = String::new();
        for ch in text.chars() {
            if ch == '+' || ch == '-' {
                if !cur.trim().is_empty() {
                    chunks.push((sign, std::mem::take(&mut cur)));
                } else if !chunks.is_empty() || ch == '+' {
                    cur.clear();
                }
                sign = ch == '+';
            } else {
                cur.push(ch);
            }
        }
        if !cur.trim().is_empty() {
            chunks.push((sign, cur));
        }
        if chunks.is_empty() {
            return Err(err());
        }
        for (positive, chunk) in chunks {
            let mut c = if positive { Rational::one() } else { -Rational::one() };
            let mut e = vec![0u32; ring.nvars()];
            for factor in chunk.split(|ch: char| ch.is_whitespace() || ch == '*').filter(|f| !f.is_empty()) {
                let (base, k) = match factor.split_once('^') {
                    Some((b, k)) => (b, k.parse::<u32>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                if let Some(v) = crate::rational::parse_rational(base) {
                    for _ in 0..k {
                        c *= &v;
                    }
                } else if let Some(i) = ring.index(base) {
                    e[i] += k;
                } else {
                    let v = coefficient(base).ok_or_else(err)?;
                    for _ in 0..k {
                        c *= &v;
                    }
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.name(i).to_string()
                    } else {
                        format!("{}^{}", self.ring.name(i), e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut acc: HashMap<Vec<u32>, Rational> = HashMap::with_capacity(self.nterms() * rhs.nterms());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let e: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (Monomial(e), c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Poly::zero(&ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let t = &m[0][j] * &determinant(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn xy() -> Arc<Ring> {
        Ring::new(&[("x", 1), ("y", 1)])
    }

    #[test]
    fn difference_of_squares() {
        let r = xy();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let lhs = (&x + &y) * (&x - &y);
        let rhs = &x.pow(2) - &y.pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "x^2 - y^2");
    }

    #[test]
    fn graded_lex_listing() {
        assert_eq!(monomials_of_degree(&[1, 1], 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(monomials_of_degree(&[4, 6], 2).is_empty());
        assert_eq!(monomials_of_degree(&[1, 2, 3], 12).len(), 19);
        assert_eq!(monomials_of_degree(&[3], 0), vec![vec![0]]);
    }

    #[test]
    fn substitution_respects_grading() {
        let r = Ring::new(&[("x3", 2), ("x4", 5), ("w", 3)]);
        let f = Poly::parse(&r, "x4^2 + x3^5", |_| None).unwrap();
        let rep = Poly::parse(&r, "x3 w", |_| None).unwrap();
        let g = f.substitute(1, &rep).unwrap();
        assert_eq!(g.degree(), Some(10));
        let bad = Poly::parse(&r, "x3", |_| None).unwrap();
        assert!(matches!(f.substitute(1, &bad), Err(AlgebraError::GradingViolation { .. })));
    }

    #[test]
    fn exact_division() {
        let r = xy();
        let p = Poly::parse(&r, "x^3 - y^3", |_| None).unwrap();
        let d = Poly::parse(&r, "x - y", |_| None).unwrap();
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, Poly::parse(&r, "x^2 + x y + y^2", |_| None).unwrap());
        let e = Poly::parse(&r, "x + 2 y", |_| None).unwrap();
        assert!(p.div_exact(&e).is_none());
    }

    #[test]
    fn generic_member_is_deterministic() {
        let r = xy();
        let a = generic_member(&r, 1, CoefficientSeed(7), &BTreeSet::new());
        let b = generic_member(&r, 1, CoefficientSeed(7), &BTreeSet::new());
        assert_eq!(a, b);
        assert_eq!(a.nterms(), 2);
        for (_, c) in a.terms() {
            assert!(c >= &int(1) && c <= &int(97));
        }
        let all: BTreeSet<Vec<u32>> = monomials_of_degree(&[1, 1], 1).into_iter().collect();
        assert!(generic_member(&r, 1, CoefficientSeed(7), &all).is_zero());
    }

    #[test]
    fn parse_with_coefficients() {
        let r = Ring::new(&[("y", 2), ("z", 3)]);
        let p = Poly::parse(&r, "z^2 - alpha y^3 + 1/2 y z", |n| (n == "alpha").then(|| rat(3, 1))).unwrap();
        assert_eq!(p.coefficient(&[3, 0]), rat(-3, 1));
        assert_eq!(p.coefficient(&[1, 1]), rat(1, 2));
        assert!(Poly::parse(&r, "beta y", |_| None).is_err());
    }

    #[test]
    fn determinant_small() {
        let r = xy();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        assert_eq!(determinant(&m), &x.pow(2) - &y.pow(2));
    }
}
