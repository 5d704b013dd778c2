//! Intersection numbers on Kawamata blowups, curve blowups and embedded weighted blowups.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::poly::Poly;
use crate::rational::{int, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("test class {b}B + {e}E at index {r}: b <= r e, nefness not certified")]
    NefnessFail { b: u32, e: u32, r: u32 },
    #[error("invalid type 1/{r}(1,{a},{})", r - a)]
    InvalidType { r: u32, a: u32 },
    #[error("no usable relation for coordinate {0}")]
    NoRelation(String),
}

/// `B = φ*A - E/r` on the Kawamata blowup of `1/r(1, a, r - a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupNumbers {
    pub r: u32,
    pub a: u32,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub a3: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub b3: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub eb2: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub be2: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub e3: Rational,
}

pub fn kawamata_numbers(a3: &Rational, r: u32, a: u32) -> Result<BlowupNumbers, BlowupError> {
    if a == 0 || a >= r || num_integer::gcd(a, r) != 1 {
        return Err(BlowupError::InvalidType { r, a });
    }
    let prod = (a as i64) * ((r - a) as i64);
    let r64 = r as i64;
    Ok(BlowupNumbers {
        r,
        a,
        a3: a3.clone(),
        b3: a3 - rat(1, r64 * prod),
        eb2: rat(1, prod),
        be2: rat(-r64, prod),
        e3: rat(r64 * r64, prod),
    })
}

impl BlowupNumbers {
    /// `(B + E/r)^3`, which must return `A^3`.
    pub fn expansion(&self) -> Rational {
        let r = int(self.r as i64);
        &self.b3 + int(3) * &self.eb2 / &r + int(3) * &self.be2 / (&r * &r) + &self.e3 / (&r * &r * &r)
    }

    /// `∏ (φ*A - (c_i / r) E)` over three divisors, each given by its numerator `c_i`,
    /// with the degree multipliers `d_i` on `φ*A`.
    pub fn triple(&self, factors: [(u32, u32); 3]) -> Rational {
        let d: i64 = factors.iter().map(|f| f.0 as i64).product();
        let c: i64 = factors.iter().map(|f| f.1 as i64).product();
        let r = self.r as i64;
        int(d) * &self.a3 - rat(c, r * r * r) * &self.e3
    }
}

/// `M = bB + eE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TestClass {
    pub b: u32,
    pub e: u32,
}

/// `(M · B^2) = b B^3 + e (E · B^2)`.
pub fn test_class_value(n: &BlowupNumbers, t: TestClass) -> Result<Rational, BlowupError> {
    if t.b <= n.r * t.e {
        return Err(BlowupError::NefnessFail { b: t.b, e: t.e, r: n.r });
    }
    Ok(int(t.b as i64) * &n.b3 + int(t.e as i64) * &n.eb2)
}

/// Vanishing order numerator `k` of a degree-`b` section giving `M = bB + eE`: `k = b - r e`.
pub fn test_class_order(n: &BlowupNumbers, t: TestClass) -> i64 {
    t.b as i64 - (n.r * t.e) as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveBlowupData {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub deg: Rational,
    pub pa: u32,
    pub a: u32,
}

/// `(aA* - E)(A* - E)^2 = a A^3 - (a + 1) degΓ - 2 + 2 p_a`.
pub fn curve_test_value(a3: &Rational, d: &CurveBlowupData) -> Rational {
    int(d.a as i64) * a3 - int(d.a as i64 + 1) * &d.deg - int(2) + int(2 * d.pa as i64)
}

/// `E^3 = -degΓ + 2 - 2 p_a` for a nonsingular curve in the smooth locus.
pub fn curve_e3(d: &CurveBlowupData) -> Rational {
    -&d.deg + int(2) - int(2 * d.pa as i64)
}

/// Five divisors `d_i ψ*A - (c_i / r) E` on a weighted blowup of the ambient space at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddedBlowupProduct {
    pub ambient: [u32; 6],
    pub r: u32,
    pub weights: [u32; 5],
    pub factors: [(u32, u32); 5],
}

/// `∏d_i / ∏a_j - (∏c_i / r^5)(r^4 / ∏b_k)`.
pub fn embedded_product(p: &EmbeddedBlowupProduct) -> Rational {
    let d: i64 = p.factors.iter().map(|f| f.0 as i64).product();
    let c: i64 = p.factors.iter().map(|f| f.1 as i64).product();
    let a: i64 = p.ambient.iter().map(|&x| x as i64).product();
    let b: i64 = p.weights.iter().map(|&x| x as i64).product();
    let r = p.r as i64;
    rat(d, a) - rat(c, r) / int(b)
}

/// `x_target · unit = tail` extracted from one defining equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub target: usize,
    pub cofactor: Poly,
    pub tail: Poly,
}

impl Relation {
    /// Splits `poly` into the part linear in `target` and the rest. The cofactor of
    /// `target` must contain a pure power of `unit`, the coordinate not vanishing at the point.
    pub fn from_equation(poly: &Poly, target: usize, unit: usize) -> Result<Relation, BlowupError> {
        let ring = poly.ring().clone();
        let name = ring.name(target).to_string();
        if poly.degree_in(target) > 1 {
            return Err(BlowupError::NoRelation(name));
        }
        let cofactor = poly.coeff_in(target, 1);
        let tail = -poly.coeff_in(target, 0);
        let has_unit = cofactor.terms().any(|(m, _)| {
            m.exps().iter().enumerate().all(|(i, &e)| if i == unit { e > 0 } else { e == 0 })
        });
        if !has_unit {
            return Err(BlowupError::NoRelation(name));
        }
        Ok(Relation { target, cofactor, tail })
    }
}

const ORDER_ROUNDS: usize = 64;

/// Lower bounds for vanishing orders along `E`.
///
/// `local` maps the three local coordinates to their exact orders, `unit` is the
/// coordinate nonvanishing at the point (order 0), and every other coordinate
/// is bounded through one relation, starting from `(a_l mod r)/r`.
pub fn order_bounds(
    weights: &[u32],
    r: u32,
    unit: usize,
    local: &[(usize, Rational)],
    relations: &[Relation],
) -> Result<BTreeMap<usize, Rational>, BlowupError> {
    let n = weights.len();
    let mut ord: Vec<Option<Rational>> = vec![None; n];
    ord[unit] = Some(Rational::zero());
    for (i, q) in local {
        ord[*i] = Some(q.clone());
    }
    let seeds: Vec<Rational> = weights.iter().map(|&a| rat((a % r) as i64, r as i64)).collect();
    for rel in relations {
        ord[rel.target] = Some(seeds[rel.target].clone());
    }
    if let Some(i) = (0..n).find(|&i| ord[i].is_none()) {
        return Err(BlowupError::NoRelation(format!("x{i}")));
    }
    let mut ord: Vec<Rational> = ord.into_iter().map(|o| o.unwrap()).collect();
    let cap: Vec<Rational> = relations
        .iter()
        .map(|rel| rat(rel.tail.degree().unwrap_or(0) as i64, r as i64))
        .collect();
    for _ in 0..ORDER_ROUNDS {
        let mut changed = false;
        for (k, rel) in relations.iter().enumerate() {
            let bound = rel
                .tail
                .terms()
                .map(|(m, _)| {
                    m.exps().iter().enumerate().fold(Rational::zero(), |acc, (i, &e)| acc + int(e as i64) * &ord[i])
                })
                .min()
                .unwrap_or_else(|| cap[k].clone());
            let i = rel.target;
            if bound > ord[i] {
                ord[i] = bound;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(ord.into_iter().enumerate().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    #[test]
    fn kawamata_anchor_values() {
        let n = kawamata_numbers(&rat(4, 45), 5, 2).unwrap();
        assert_eq!(n.triple([(1, 1), (1, 1), (1, 6)]), rat(-1, 9));
        assert_eq!(kawamata_numbers(&rat(1, 2), 2, 1).unwrap().b3, rat(0, 1));
        assert_eq!(kawamata_numbers(&rat(1, 20), 4, 1).unwrap().b3, rat(-1, 30));
        assert_eq!(n.expansion(), rat(4, 45));
        assert!(kawamata_numbers(&rat(1, 1), 4, 2).is_err());
    }

    #[test]
    fn test_class_spot_values() {
        let n24 = kawamata_numbers(&rat(1, 4), 2, 1).unwrap();
        assert_eq!(test_class_value(&n24, TestClass { b: 4, e: 1 }).unwrap(), rat(0, 1));
        let n84 = kawamata_numbers(&rat(1, 120), 8, 1).unwrap();
        assert_eq!(test_class_value(&n84, TestClass { b: 15, e: 1 }).unwrap(), rat(0, 1));
        let n60 = kawamata_numbers(&rat(1, 30), 5, 2).unwrap();
        assert_eq!(test_class_value(&n60, TestClass { b: 2, e: 0 }).unwrap(), rat(0, 1));
        assert!(test_class_value(&n24, TestClass { b: 4, e: 2 }).is_err());
    }

    #[test]
    fn curve_values() {
        let conic = CurveBlowupData { deg: int(2), pa: 0, a: 3 };
        assert_eq!(curve_test_value(&rat(8, 3), &conic), int(-2));
        let elliptic = CurveBlowupData { deg: int(2), pa: 1, a: 3 };
        assert_eq!(curve_test_value(&rat(8, 3), &elliptic), int(0));
        assert_eq!(curve_test_value(&int(2), &CurveBlowupData { deg: int(1), pa: 0, a: 2 }), int(-1));
    }

    #[test]
    fn embedded_products() {
        let ex40 = EmbeddedBlowupProduct {
            ambient: [1, 1, 3, 4, 5, 9],
            r: 3,
            weights: [1, 4, 1, 2, 3],
            factors: [(1, 1), (1, 1), (1, 4), (5, 2), (12, 3)],
        };
        assert_eq!(embedded_product(&ex40), rat(-2, 9));
        let ex71 = EmbeddedBlowupProduct {
            ambient: [1, 4, 5, 6, 7, 8],
            r: 5,
            weights: [6, 4, 1, 2, 3],
            factors: [(1, 1), (1, 6), (4, 4), (7, 2), (8, 3)],
        };
        assert_eq!(embedded_product(&ex71), rat(-1, 6));
        let bare = EmbeddedBlowupProduct { factors: [(1, 0), (1, 0), (2, 0), (3, 0), (5, 0)], ..ex40 };
        assert_eq!(embedded_product(&bare), rat(30, 540));
    }

    #[test]
    fn no57_orders() {
        let ring = Ring::new(&[("x", 1), ("y", 2), ("z", 3), ("s", 5), ("t", 7), ("u", 9)]);
        let f1 = Poly::parse(&ring, "s t + u z + t z y + x^12 + y^6 + z^4", |_| None).unwrap();
        let f2 = Poly::parse(&ring, "s u + u y^2 x + t^2 + t x^7 + z^4 y + y^7", |_| None).unwrap();
        let rels = [Relation::from_equation(&f1, 4, 3).unwrap(), Relation::from_equation(&f2, 5, 3).unwrap()];
        let local = [(0, rat(1, 5)), (1, rat(2, 5)), (2, rat(3, 5))];
        let ord = order_bounds(ring.weights(), 5, 3, &local, &rels).unwrap();
        assert!(ord[&4] >= rat(7, 5));
        assert!(ord[&5] >= rat(9, 5));
        assert_eq!(ord[&0], rat(1, 5));
        assert!(Relation::from_equation(&f1, 5, 3).is_err());
    }
}
