//! Dense univariate polynomials over the rationals and integer resultants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Coefficients stored low degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> UPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn one() -> UPoly {
        UPoly(vec![Rational::one()])
    }

    /// The monomial `t`.
    pub fn t() -> UPoly {
        UPoly(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        UPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        UPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn scale(&self, k: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * k).collect())
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.0.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let l = self.lead();
        self.scale(&(Rational::one() / l))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Number of distinct complex roots.
    pub fn distinct_roots(&self) -> usize {
        self.squarefree_part().degree().unwrap_or(0)
    }

    /// Removes every factor `t`.
    pub fn strip_t(&self) -> UPoly {
        let k = self.0.iter().take_while(|c| c.is_zero()).count();
        UPoly::new(self.0[k..].to_vec())
    }

    /// Removes from a squarefree `self` every root shared with `o`.
    pub fn remove_common(&self, o: &UPoly) -> UPoly {
        if o.is_zero() {
            return UPoly::one();
        }
        let g = self.gcd(o);
        if g.degree().unwrap_or(0) == 0 {
            self.clone()
        } else {
            self.divrem(&g).0
        }
    }
}

/// Fraction-free determinant of an integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two integer polynomials with formal degrees `len - 1` (low degree first).
pub fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    if f.is_empty() || g.is_empty() {
        return BigInt::zero();
    }
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Newton interpolation through `(x_k, y_k)`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> UPoly {
    let n = xs.len();
    let mut coef: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = UPoly::new(vec![coef[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        p = p.mul(&UPoly::new(vec![-xs[i].clone(), Rational::one()]));
        p = p.add(&UPoly::new(vec![coef[i].clone()]));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn bi(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = up(&[-1, 0, 1]);
        let b = up(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), up(&[1, 1]));
        let p = up(&[1, 1]).mul(&up(&[1, 1])).mul(&up(&[-2, 1]));
        assert_eq!(p.distinct_roots(), 2);
    }

    #[test]
    fn resultant_of_linear_forms() {
        assert_eq!(sylvester_resultant(&bi(&[-2, 1]), &bi(&[-3, 1])), BigInt::from(-1));
        assert_eq!(sylvester_resultant(&bi(&[-1, 0, 1]), &bi(&[-1, 1])), BigInt::from(0));
        assert_eq!(sylvester_resultant(&bi(&[-4, 0, 1]), &bi(&[0, 1])), BigInt::from(-4));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = up(&[3, 0, -1, 2]);
        let xs: Vec<Rational> = (0..4).map(int).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }
}
