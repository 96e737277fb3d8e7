//! Specialization `ħ = 1`: the Weyl algebra `W(V)` as polynomials in
//! symmetric (Weyl-ordered) normal form with the product `Σ_m D_m(f, g)`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::polyring::{Echelon, HSeries, Poly, Scalar};
use crate::starprod::StarProduct;
use crate::{Error, Result};

/// An element of `W(V)`, stored by its Weyl symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement(pub Poly);

impl WeylElement {
    pub fn symbol(&self) -> &Poly {
        &self.0
    }
}

/// `f̂ ↦ f̂|_{ħ=1}`. Only `K^×`-finite series (a single weight component)
/// are accepted, so no information is lost by the substitution.
pub fn weyl_specialize(f: &HSeries) -> Result<WeylElement> {
    if !f.is_zero() && f.graded_degree().is_none() {
        return Err(Error::NotFinite);
    }
    Ok(WeylElement(f.at_hbar_one()))
}

/// The Weyl product: the Moyal sum at `ħ = 1`, which terminates.
pub fn weyl_mul(star: &StarProduct, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    let (fa, fb) = (a.symbol(), b.symbol());
    let max = fa.degree().unwrap_or(0).min(fb.degree().unwrap_or(0)) as usize;
    let terms = star.bidifferential_terms(fa, fb, max)?;
    Ok(WeylElement(terms.into_iter().fold(Poly::zero(star.nvars()), |acc, t| acc + t)))
}

pub fn weyl_commutator(star: &StarProduct, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    let ab = weyl_mul(star, a, b)?;
    let ba = weyl_mul(star, b, a)?;
    Ok(WeylElement(&ab.0 - &ba.0))
}

/// Index of the first test element that fails to commute with `a`.
pub fn weyl_centrality_failure(star: &StarProduct, a: &WeylElement, tests: &[Poly]) -> Result<Option<usize>> {
    for (i, u) in tests.iter().enumerate() {
        if !weyl_commutator(star, a, &WeylElement(u.clone()))?.0.is_zero() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Rank of the Jacobian of `elements` at deterministic integer points: a
/// full-rank value certifies algebraic independence.
pub fn jacobian_rank(star: &StarProduct, elements: &[Poly]) -> Result<usize> {
    let space = star.space();
    let nvars = space.nvars();
    let grads: Vec<Vec<Poly>> = elements
        .iter()
        .map(|f| (0..nvars).map(|i| f.partial_derivative(i)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut best = 0;
    for shift in 0..4 {
        let point = space.sample_point(shift * 7);
        let mut ech: Echelon<usize> = Echelon::new();
        for g in &grads {
            let row = g
                .iter()
                .enumerate()
                .map(|(i, d)| d.eval(&point).map(|v| (i, v)))
                .collect::<Result<Vec<(usize, Scalar)>>>()?
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            ech.insert(row);
        }
        best = best.max(ech.rank());
        if best == elements.len() {
            break;
        }
    }
    Ok(best)
}

/// Products `Π e_j^{α_j}` of the given generators with total degree exactly
/// `degree`, as Weyl products.
pub fn weyl_monomials(
    star: &StarProduct,
    gens: &[WeylElement],
    degrees: &[u32],
    degree: u32,
) -> Result<Vec<WeylElement>> {
    let mut out = Vec::new();
    let mut stack: Vec<(WeylElement, u32, usize)> = alloc::vec![(WeylElement(Poly::one(star.nvars())), 0, 0)];
    while let Some((w, d, from)) = stack.pop() {
        if d == degree {
            out.push(w.clone());
        }
        for j in from..gens.len() {
            let nd = d + degrees[j];
            if degrees[j] == 0 || nd > degree {
                continue;
            }
            stack.push((weyl_mul(star, &w, &gens[j])?, nd, j));
        }
    }
    Ok(out)
}

/// Top-degree part of the symbol.
pub fn top_symbol(a: &WeylElement) -> Poly {
    match a.0.degree() {
        Some(d) => a.0.homogeneous_part(d),
        None => a.0.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rat, SymplecticSpace};

    #[test]
    fn specialize_qp() {
        let space = SymplecticSpace::standard(1);
        let qp = &space.q(0) * &space.p(0);
        let mut f = HSeries::from_poly(qp.clone(), 3);
        f.set_coeff(1, Poly::constant(2, rat(1, 2)));
        let w = weyl_specialize(&f).unwrap();
        assert_eq!(w.0, &qp + &Poly::constant(2, rat(1, 2)));
        assert_eq!(weyl_specialize(&HSeries::from_poly(qp.clone(), 3)).unwrap().0, qp);
    }

    #[test]
    fn non_finite_series_is_rejected() {
        let space = SymplecticSpace::standard(1);
        let mut f = HSeries::from_poly(space.q(0), 3);
        f.set_coeff(1, space.q(0));
        assert_eq!(weyl_specialize(&f).unwrap_err(), Error::NotFinite);
    }

    #[test]
    fn canonical_commutation() {
        let star = StarProduct::new(SymplecticSpace::standard(1), 4);
        let q = WeylElement(star.space().q(0));
        let p = WeylElement(star.space().p(0));
        assert_eq!(weyl_commutator(&star, &q, &p).unwrap().0, Poly::one(2));
        let qp = weyl_mul(&star, &q, &p).unwrap();
        assert_eq!(qp.0, &(&q.0 * &p.0) + &Poly::constant(2, rat(1, 2)));
    }

    #[test]
    fn specialization_is_multiplicative() {
        let star = StarProduct::new(SymplecticSpace::standard(1), 6);
        let (q, p) = (star.space().q(0), star.space().p(0));
        let f = &q.pow(2) * &p;
        let g = &q * &p.pow(2);
        let fg = star.moyal(&f, &g).unwrap();
        assert_eq!(weyl_specialize(&fg).unwrap(), weyl_mul(&star, &WeylElement(f), &WeylElement(g)).unwrap());
    }

    #[test]
    fn jacobian_rank_certifies_independence() {
        let star = StarProduct::new(SymplecticSpace::standard(2), 2);
        let s = star.space();
        let h1 = &s.q(0) * &s.p(0);
        let h2 = &s.q(1) * &s.p(1);
        assert_eq!(jacobian_rank(&star, &[h1.clone(), h2.clone()]).unwrap(), 2);
        assert_eq!(jacobian_rank(&star, &[h1.clone(), h1.pow(2).scale(&int(3))]).unwrap(), 1);
    }
}
