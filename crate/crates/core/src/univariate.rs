//! Dense univariate polynomials, used for determinant restrictions to lines.
//!
//! Root finding works over prime fields only: distinct roots are isolated
//! with `gcd(f, t^p - t)` and split with deterministic shifts
//! `gcd((t + a)^((p-1)/2) - 1, ·)`.

use crate::error::{Error, Result};
use crate::field::Field;

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(T::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![T::one()],
        }
    }

    /// `t`.
    pub fn t() -> Self {
        UniPoly {
            coeffs: vec![T::zero(), T::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Unique polynomial of degree `< xs.len()` through the given points
    /// (Newton divided differences).
    pub fn interpolate(xs: &[T], ys: &[T]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Malformed("interpolation needs equal lengths".into()));
        }
        let n = xs.len();
        let mut div = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let den = (xs[i].clone() - xs[i - j].clone())
                    .inv()
                    .ok_or_else(|| Error::Malformed("repeated interpolation node".into()))?;
                div[i] = (div[i].clone() - div[i - 1].clone()) * den;
            }
        }
        let mut out = UniPoly::zero();
        for i in (0..n).rev() {
            // out = out * (t - x_i) + div[i]
            out = out.mul(&UniPoly::new(vec![-xs[i].clone(), T::one()]));
            out = out.add(&UniPoly::new(vec![div[i].clone()]));
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        UniPoly::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= c.clone() * b.clone();
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lead) => self.scale(&lead.inv().expect("nonzero lead")),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = UniPoly::one().rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in the prime field, sorted by canonical value.
    pub fn roots(&self) -> Result<Vec<T>> {
        let p = T::characteristic();
        if p == 0 {
            return Err(Error::Unsupported("root finding needs a prime field".into()));
        }
        if self.is_zero() {
            return Err(Error::Malformed("the zero polynomial has every root".into()));
        }
        let f = self.monic();
        let t = UniPoly::t();
        let tp = t.pow_mod(p, &f);
        let g = f.gcd(&tp.sub(&t));
        let mut roots = Vec::new();
        split_roots(&g, p, &mut roots);
        roots.sort_by_key(|r| r.reduce_mod(p).unwrap_or(0));
        Ok(roots)
    }
}

/// `g` is monic and a product of distinct linear factors.
fn split_roots<T: Field>(g: &UniPoly<T>, p: u64, out: &mut Vec<T>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeffs[0].clone()),
        Some(_) => {
            let exp = (p - 1) / 2;
            for a in 0..p {
                let shifted = UniPoly::new(vec![T::from_i64(a as i64), T::one()]);
                let h = shifted.pow_mod(exp, g).sub(&UniPoly::one());
                let f1 = g.gcd(&h);
                let d1 = f1.degree().unwrap_or(0);
                if d1 > 0 && d1 < g.degree().unwrap_or(0) {
                    let f2 = g.div_rem(&f1).0.monic();
                    split_roots(&f1, p, out);
                    split_roots(&f2, p, out);
                    return;
                }
            }
            unreachable!("shifts separate the roots of a squarefree split polynomial");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<101>;

    fn poly(c: &[i64]) -> UniPoly<F> {
        UniPoly::new(c.iter().map(|&v| F::from_i64(v)).collect())
    }

    #[test]
    fn roots_of_products_of_linear_factors() {
        // (t - 3)(t - 7)(t - 50)^2
        let f = poly(&[-3, 1])
            .mul(&poly(&[-7, 1]))
            .mul(&poly(&[-50, 1]))
            .mul(&poly(&[-50, 1]));
        let r: Vec<u64> = f.roots().unwrap().iter().map(|x| x.value()).collect();
        assert_eq!(r, vec![3, 7, 50]);
        // t^2 - 2: 2 is a non-residue mod 101.
        assert!(poly(&[-2, 0, 1]).roots().unwrap().is_empty());
        assert!(UniPoly::<F>::zero().roots().is_err());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = poly(&[5, -1, 0, 2, 9]);
        let xs: Vec<F> = (0..5).map(F::from_i64).collect();
        let ys: Vec<F> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys).unwrap(), f);
    }

    #[test]
    fn division_identity() {
        let a = poly(&[1, 2, 3, 4, 5, 6]);
        let b = poly(&[7, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }
}
