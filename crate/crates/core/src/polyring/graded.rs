use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::linalg::Echelon;
use super::monomial::Monomial;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::{Error, Result};

/// Per-degree rational bases of a graded subspace of a polynomial ring.
///
/// Each slice is stored as the reduced row-echelon basis of its span with
/// monomials as columns in ascending canonical order, so two equal
/// subspaces always compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    nvars: usize,
    slices: BTreeMap<u32, Vec<Poly>>,
}

impl GradedSubspace {
    pub fn new(nvars: usize) -> Self {
        GradedSubspace { nvars, slices: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Replaces the slice of `degree` with the span of `polys`.
    pub fn set_slice(&mut self, degree: u32, polys: impl IntoIterator<Item = Poly>) -> Result<()> {
        let mut ech = Echelon::new();
        for p in polys {
            p.check_nvars(self.nvars)?;
            if !p.is_zero() && p.homogeneous_degree() != Some(degree) {
                return Err(Error::NotHomogeneous(alloc::format!("{p} is not of degree {degree}")));
            }
            ech.insert(to_row(&p));
        }
        let basis: Vec<Poly> = ech.rows().map(|row| from_row(self.nvars, row)).collect();
        self.slices.insert(degree, basis);
        Ok(())
    }

    pub fn basis(&self, degree: u32) -> &[Poly] {
        self.slices.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, degree: u32) -> usize {
        self.basis(degree).len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.slices.keys().copied()
    }

    pub fn slices(&self) -> impl Iterator<Item = (u32, &[Poly])> + '_ {
        self.slices.iter().map(|(d, b)| (*d, b.as_slice()))
    }

    /// All basis elements, lowest degree first.
    pub fn all(&self) -> impl Iterator<Item = &Poly> + '_ {
        self.slices.values().flatten()
    }

    /// Whether `f` lies in the span. Inhomogeneous `f` is tested degree by
    /// degree.
    pub fn contains(&self, f: &Poly) -> bool {
        if f.nvars() != self.nvars {
            return false;
        }
        let degrees: alloc::collections::BTreeSet<u32> = f.terms().map(|(m, _)| m.degree()).collect();
        degrees.into_iter().all(|d| {
            let mut ech = Echelon::new();
            for b in self.basis(d) {
                ech.insert(to_row(b));
            }
            ech.contains(to_row(&f.homogeneous_part(d)))
        })
    }

    /// Whether every slice of `self` lies in the matching slice of `other`.
    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.all().all(|f| other.contains(f))
    }
}

pub(crate) fn to_row(p: &Poly) -> BTreeMap<Monomial, Scalar> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

pub(crate) fn from_row(nvars: usize, row: &BTreeMap<Monomial, Scalar>) -> Poly {
    Poly::from_terms(nvars, row.iter().map(|(m, c)| (m.clone(), c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::scalar::int;

    #[test]
    fn slices_are_canonical() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let mut a = GradedSubspace::new(2);
        a.set_slice(1, [&x + &y, &x - &y]).unwrap();
        let mut b = GradedSubspace::new(2);
        b.set_slice(1, [y.scale(&int(3)), x.clone(), &x + &y]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(1), 2);
        assert!(a.contains(&(&x + &y.scale(&int(7)))));
        assert!(!a.contains(&(&x * &y)));
    }

    #[test]
    fn rejects_wrong_degree() {
        let mut a = GradedSubspace::new(2);
        assert!(a.set_slice(2, [Poly::var(2, 0)]).is_err());
    }
}
