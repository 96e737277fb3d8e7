use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::scalar::{falling_factorial, Scalar};
use crate::{Error, Result};

/// Sparse polynomial with exact rational coefficients.
///
/// No zero coefficient is ever stored, so structural equality is polynomial
/// equality. Terms iterate in ascending canonical monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails with a dimension error when the
/// variable counts differ.
pub fn poly_arith(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly> {
    a.check_same(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

/// Quotient and remainder of multivariate division by a single polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Division {
    pub quotient: Poly,
    pub remainder: Poly,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Poly::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Poly::term(Monomial::var(nvars, index), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong variable count");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Largest term in canonical order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Total degree when all terms share it. The zero polynomial is
    /// homogeneous of every degree and yields `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub(crate) fn check_nvars(&self, nvars: usize) -> Result<()> {
        if self.nvars != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: self.nvars });
        }
        Ok(())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Poly> {
        if index >= self.nvars {
            return Err(Error::IndexOutOfRange { index, nvars: self.nvars });
        }
        let mut order = alloc::vec![0u32; self.nvars];
        order[index] = 1;
        Ok(self.derivative(&order))
    }

    /// Mixed partial derivative `∂^orders`, one order per variable.
    pub fn derivative(&self, orders: &[u32]) -> Poly {
        debug_assert_eq!(orders.len(), self.nvars);
        let mut out = Poly::zero(self.nvars);
        'terms: for (m, c) in &self.terms {
            let mut exps = Vec::with_capacity(self.nvars);
            let mut factor = BigInt::one();
            for (i, &k) in orders.iter().enumerate() {
                let e = m.exp(i);
                if k > e {
                    continue 'terms;
                }
                factor *= falling_factorial(e, k);
                exps.push(e - k);
            }
            out.add_term(Monomial::new(exps), c * Scalar::from_integer(factor));
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        for p in images {
            p.check_nvars(target)?;
        }
        let mut out = Poly::zero(target);
        // powers[i][e] = images[i]^e, built on demand
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|_| alloc::vec![Poly::one(target)]).collect();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out += &t;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Multivariate division by `divisor` in graded-lex order. The remainder
    /// is zero exactly when `divisor` divides `self`.
    pub fn divide(&self, divisor: &Poly) -> Result<Division> {
        self.check_same(divisor)?;
        let (lead_m, lead_c) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::InvalidSystem("division by the zero polynomial".into())),
        };
        let mut rest = self.clone();
        let mut quotient = Poly::zero(self.nvars);
        let mut remainder = Poly::zero(self.nvars);
        while let Some((m, c)) = rest.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lead_m) {
                Some(q) => {
                    let qc = &c / &lead_c;
                    rest -= &divisor.mul_monomial(&q, &qc);
                    quotient.add_term(q, qc);
                }
                None => {
                    rest.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        Ok(Division { quotient, remainder })
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Coefficient vector over `basis` (missing monomials are zero).
    pub fn coords(&self, basis: &[Monomial]) -> Vec<Scalar> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names: Some(names) }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable sets");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable sets");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable sets");
        let mut out = Poly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Renders a polynomial as `3/2*q1^2*p1 - p2 + 1`, terms in ascending
/// canonical order. Without names, variables print as `x0, x1, …`.
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.poly.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut first = true;
            if !abs.is_one() || m.is_one() {
                write!(f, "{}", abs)?;
                first = false;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                match self.names {
                    Some(names) => f.write_str(&names[i])?,
                    None => write!(f, "x{}", i)?,
                }
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay { poly: self, names: None }.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::scalar::{int, rat};
    use alloc::string::ToString;

    fn q1() -> Poly {
        Poly::var(2, 0)
    }
    fn p1() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&q1() + &p1()) * &(&q1() - &p1());
        assert_eq!(lhs, &q1().pow(2) - &p1().pow(2));
    }

    #[test]
    fn product_with_zero_is_zero() {
        assert!((&q1() * &Poly::zero(2)).is_zero());
    }

    #[test]
    fn binomial_cube() {
        let f = (&q1() + &Poly::one(2)).pow(3);
        let expected = Poly::from_terms(
            2,
            [
                (Monomial::new(alloc::vec![3, 0]), int(1)),
                (Monomial::new(alloc::vec![2, 0]), int(3)),
                (Monomial::new(alloc::vec![1, 0]), int(3)),
                (Monomial::new(alloc::vec![0, 0]), int(1)),
            ],
        );
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "1 + 3*x0 + 3*x0^2 + x0^3");
    }

    #[test]
    fn mismatched_dimensions_are_errors() {
        let a = Poly::var(2, 0);
        let b = Poly::var(4, 0);
        assert_eq!(poly_arith(&a, &b, ArithOp::Mul), Err(Error::DimensionMismatch { expected: 2, found: 4 }));
    }

    #[test]
    fn partial_derivatives() {
        // n = 2: q1, q2, p1, p2
        let q1 = Poly::var(4, 0);
        let p1 = Poly::var(4, 2);
        let f = &q1.pow(2) * &p1;
        assert_eq!(f.partial_derivative(0).unwrap(), (&q1 * &p1).scale(&int(2)));
        assert!(q1.partial_derivative(3).unwrap().is_zero());
        let mixed = (&q1 * &p1).partial_derivative(2).unwrap().partial_derivative(0).unwrap();
        assert_eq!(mixed, Poly::one(4));
        assert_eq!(q1.partial_derivative(4), Err(Error::IndexOutOfRange { index: 4, nvars: 4 }));
    }

    #[test]
    fn exact_division() {
        let f = &(&q1() + &p1()) * &(&q1().pow(2) - &p1().scale(&rat(1, 3)));
        let d = f.divide(&(&q1() + &p1())).unwrap();
        assert!(d.remainder.is_zero());
        assert_eq!(d.quotient, &q1().pow(2) - &p1().scale(&rat(1, 3)));
        let d = Poly::one(2).divide(&q1().scale(&int(2))).unwrap();
        assert!(d.quotient.is_zero());
        assert_eq!(d.remainder, Poly::one(2));
    }

    #[test]
    fn substitution() {
        // z(x, y) = x^2 + 4 y evaluated at x = q1 - p1, y = q1 p1
        let z = &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).scale(&int(4));
        let images = [&q1() - &p1(), &q1() * &p1()];
        assert_eq!(z.substitute(&images).unwrap(), (&q1() + &p1()).pow(2));
    }
}
