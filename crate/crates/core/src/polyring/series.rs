use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::poly::Poly;
use super::scalar::Scalar;
use crate::{Error, Result};

/// Truncated power series `f_0 + f_1 ħ + … + f_N ħ^N` with polynomial
/// coefficients. Exactly `N + 1` coefficient slots are kept; everything
/// beyond order `N` is discarded.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HSeries {
    nvars: usize,
    coeffs: Vec<Poly>,
}

impl HSeries {
    pub fn zero(nvars: usize, order: usize) -> Self {
        HSeries { nvars, coeffs: (0..=order).map(|_| Poly::zero(nvars)).collect() }
    }

    pub fn from_poly(f: Poly, order: usize) -> Self {
        let nvars = f.nvars();
        let mut s = HSeries::zero(nvars, order);
        s.coeffs[0] = f;
        s
    }

    /// Builds a series from leading coefficients, padding with zeros or
    /// dropping anything beyond `order`.
    pub fn from_coeffs(nvars: usize, coeffs: Vec<Poly>, order: usize) -> Result<Self> {
        let mut s = HSeries::zero(nvars, order);
        for (m, c) in coeffs.into_iter().enumerate() {
            c.check_nvars(nvars)?;
            if m <= order {
                s.coeffs[m] = c;
            }
        }
        Ok(s)
    }

    /// `c ħ^power`.
    pub fn hbar_power(nvars: usize, power: usize, c: Scalar, order: usize) -> Self {
        let mut s = HSeries::zero(nvars, order);
        if power <= order {
            s.coeffs[power] = Poly::constant(nvars, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &Poly {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, m: usize, f: Poly) {
        assert_eq!(f.nvars(), self.nvars);
        self.coeffs[m] = f;
    }

    pub fn classical_part(&self) -> &Poly {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Lowest `m` with a nonzero `ħ^m` coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub(crate) fn check_compatible(&self, other: &HSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::TruncationMismatch { left: self.order(), right: other.order() });
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &HSeries) -> Result<HSeries> {
        self.check_compatible(other)?;
        Ok(HSeries { nvars: self.nvars, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &HSeries) -> Result<HSeries> {
        self.check_compatible(other)?;
        Ok(HSeries { nvars: self.nvars, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &Scalar) -> HSeries {
        HSeries { nvars: self.nvars, coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn neg(&self) -> HSeries {
        HSeries { nvars: self.nvars, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// Multiplication by `ħ^shift`, truncated.
    pub fn shift(&self, shift: usize) -> HSeries {
        let mut out = HSeries::zero(self.nvars, self.order());
        for m in 0..=self.order() {
            if m + shift <= self.order() {
                out.coeffs[m + shift] = self.coeffs[m].clone();
            }
        }
        out
    }

    /// Multiplication by the scalar series `Σ c_j ħ^j`.
    pub fn mul_hbar_scalars(&self, cs: &[Scalar]) -> HSeries {
        let mut out = HSeries::zero(self.nvars, self.order());
        for (j, c) in cs.iter().enumerate() {
            if c.is_zero() || j > self.order() {
                continue;
            }
            for m in 0..=self.order() - j {
                out.coeffs[m + j] += &self.coeffs[m].scale(c);
            }
        }
        out
    }

    /// Commutative (pointwise) product, truncated.
    pub fn mul_commutative(&self, other: &HSeries) -> Result<HSeries> {
        self.check_compatible(other)?;
        let n = self.order();
        let mut out = HSeries::zero(self.nvars, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                out.coeffs[i + j] += &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        Ok(out)
    }

    /// Same series stored with a different truncation order.
    pub fn truncate_to(&self, order: usize) -> HSeries {
        let mut s = HSeries::zero(self.nvars, order);
        for m in 0..=order.min(self.order()) {
            s.coeffs[m] = self.coeffs[m].clone();
        }
        s
    }

    /// Sum of all coefficients, i.e. the value at `ħ = 1`.
    pub fn at_hbar_one(&self) -> Poly {
        self.coeffs.iter().fold(Poly::zero(self.nvars), |acc, c| acc + c.clone())
    }

    /// Polynomial degree `d` such that every `f_m` is homogeneous of degree
    /// `d - 2m`, i.e. the degree under the grading with `deg ħ = 2`.
    pub fn graded_degree(&self) -> Option<i64> {
        let mut degree = None;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c.homogeneous_degree()? as i64 + 2 * m as i64;
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        degree
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*hbar", c)?,
                _ => write!(f, "({})*hbar^{}", c, m)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::scalar::int;

    #[test]
    fn shift_truncates() {
        let s = HSeries::from_coeffs(2, alloc::vec![Poly::var(2, 0), Poly::one(2)], 2).unwrap();
        let t = s.shift(2);
        assert_eq!(t.coeff(2), &Poly::var(2, 0));
        assert!(t.coeff(0).is_zero() && t.coeff(1).is_zero());
        assert!(s.shift(3).is_zero());
    }

    #[test]
    fn mismatched_truncation_is_an_error() {
        let a = HSeries::zero(2, 3);
        let b = HSeries::zero(2, 4);
        assert_eq!(a.add(&b), Err(Error::TruncationMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn graded_degree_counts_hbar_twice() {
        let qp = &Poly::var(2, 0) * &Poly::var(2, 1);
        let s = HSeries::from_poly(qp, 3).add(&HSeries::hbar_power(2, 1, int(1), 3)).unwrap();
        assert_eq!(s.graded_degree(), Some(2));
        let t = s.add(&HSeries::hbar_power(2, 2, int(1), 3)).unwrap();
        assert_eq!(t.graded_degree(), None);
    }
}
