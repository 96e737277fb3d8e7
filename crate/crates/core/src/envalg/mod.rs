//! The homogeneous enveloping algebra `U_ħ(g) = T(g)[ħ] / (ξη - ηξ - ħ[ξ,η])`
//! truncated at `ħ^N`, its PBW normal form, the symmetrization section, the
//! classical limit, Hamiltonian actions and the comoment map.

mod action;
mod lie;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::polyring::{factorial, Monomial, Poly, Scalar};
use crate::{Error, Result};

pub use action::{Diagram1Report, Eq25Failure, Eq25Report, HamiltonianAction};
pub use lie::{Bracket, LieAlgebraData};

/// Polynomial in `ħ` with rational coefficients, truncated at degree `N`.
/// Trailing zeros are trimmed; the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HbarPoly(Vec<Scalar>);

impl HbarPoly {
    pub fn zero() -> Self {
        HbarPoly(Vec::new())
    }

    pub fn constant(c: Scalar) -> Self {
        HbarPoly::from_coeffs(alloc::vec![c], usize::MAX)
    }

    /// `c ħ^power` (zero if `power > order`).
    pub fn monomial(power: usize, c: Scalar, order: usize) -> Self {
        if power > order {
            return HbarPoly::zero();
        }
        let mut v = alloc::vec![Scalar::zero(); power + 1];
        v[power] = c;
        HbarPoly::from_coeffs(v, order)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.truncate(order.saturating_add(1));
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        HbarPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn coeff(&self, j: usize) -> Scalar {
        self.0.get(j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &HbarPoly, order: usize) -> HbarPoly {
        let len = self.0.len().max(other.0.len());
        let v = (0..len).map(|j| self.coeff(j) + other.coeff(j)).collect();
        HbarPoly::from_coeffs(v, order)
    }

    pub fn mul(&self, other: &HbarPoly, order: usize) -> HbarPoly {
        if self.is_zero() || other.is_zero() {
            return HbarPoly::zero();
        }
        let len = (self.0.len() + other.0.len() - 1).min(order.saturating_add(1));
        let mut v = alloc::vec![Scalar::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                if i + j < len {
                    v[i + j] += a * b;
                }
            }
        }
        HbarPoly::from_coeffs(v, order)
    }

    pub fn scale(&self, c: &Scalar) -> HbarPoly {
        HbarPoly::from_coeffs(self.0.iter().map(|a| a * c).collect(), usize::MAX)
    }

    /// Multiplication by `ħ`, truncated.
    pub fn shift(&self, order: usize) -> HbarPoly {
        if self.is_zero() {
            return HbarPoly::zero();
        }
        let mut v = alloc::vec![Scalar::zero()];
        v.extend(self.0.iter().cloned());
        HbarPoly::from_coeffs(v, order)
    }
}

/// Element of `U_ħ(g)` mod `ħ^{N+1}` in PBW normal form: a map from
/// non-decreasing index words `ξ_{i_1} … ξ_{i_m}` to `ħ`-polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UEnvElement {
    dim: usize,
    order: usize,
    terms: BTreeMap<Vec<usize>, HbarPoly>,
}

impl UEnvElement {
    pub fn zero(dim: usize, order: usize) -> Self {
        UEnvElement { dim, order, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &HbarPoly)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn coeff(&self, word: &[usize]) -> HbarPoly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    fn add_sorted(&mut self, word: Vec<usize>, c: &HbarPoly) {
        debug_assert!(word.windows(2).all(|w| w[0] <= w[1]));
        add_into(&mut self.terms, word, c, self.order);
    }

    fn check_compatible(&self, other: &UEnvElement) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.order != other.order {
            return Err(Error::TruncationMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    pub fn add(&self, other: &UEnvElement) -> Result<UEnvElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_sorted(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &UEnvElement) -> Result<UEnvElement> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> UEnvElement {
        let mut out = UEnvElement::zero(self.dim, self.order);
        for (w, a) in &self.terms {
            out.add_sorted(w.clone(), &a.scale(c));
        }
        out
    }

    /// Multiplication by the central element `ħ`.
    pub fn mul_hbar(&self) -> UEnvElement {
        let mut out = UEnvElement::zero(self.dim, self.order);
        for (w, a) in &self.terms {
            out.add_sorted(w.clone(), &a.shift(self.order));
        }
        out
    }

    /// Whether the `ħ^0` part vanishes, i.e. the element lies in `ħ U_ħ(g)`.
    pub fn is_divisible_by_hbar(&self) -> bool {
        self.terms.values().all(|c| c.coeff(0).is_zero())
    }
}

impl fmt::Display for UEnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            f.write_str("(")?;
            for (j, a) in c.coeffs().iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                if j > 0 && c.coeffs()[..j].iter().any(|x| !x.is_zero()) {
                    f.write_str(" + ")?;
                }
                match j {
                    0 => write!(f, "{a}")?,
                    1 => write!(f, "{a}*hbar")?,
                    _ => write!(f, "{a}*hbar^{j}")?,
                }
            }
            f.write_str(")")?;
            for i in w {
                write!(f, "*x{i}")?;
            }
        }
        Ok(())
    }
}

fn add_into(terms: &mut BTreeMap<Vec<usize>, HbarPoly>, word: Vec<usize>, c: &HbarPoly, order: usize) {
    if c.is_zero() {
        return;
    }
    let sum = match terms.get(&word) {
        Some(prev) => prev.add(c, order),
        None => c.clone(),
    };
    if sum.is_zero() {
        terms.remove(&word);
    } else {
        terms.insert(word, sum);
    }
}

/// Which adjacent inversion the PBW rewriting resolves next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

/// `U_ħ(g)` for fixed structure constants and truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopingAlgebra {
    lie: LieAlgebraData,
    order: usize,
}

impl EnvelopingAlgebra {
    pub fn new(lie: LieAlgebraData, order: usize) -> Self {
        EnvelopingAlgebra { lie, order }
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn zero(&self) -> UEnvElement {
        UEnvElement::zero(self.dim(), self.order)
    }

    pub fn one(&self) -> UEnvElement {
        self.scalar(HbarPoly::constant(Scalar::one()))
    }

    pub fn scalar(&self, c: HbarPoly) -> UEnvElement {
        let mut out = self.zero();
        out.add_sorted(Vec::new(), &HbarPoly::from_coeffs(c.0, self.order));
        out
    }

    pub fn generator(&self, i: usize) -> UEnvElement {
        let mut out = self.zero();
        out.add_sorted(alloc::vec![i], &HbarPoly::constant(Scalar::one()));
        out
    }

    /// Normal form of `coeff · ξ_{w_1} … ξ_{w_m}` under the rewriting
    /// `ξ_j ξ_i → ξ_i ξ_j + ħ [ξ_j, ξ_i]` for `j > i`.
    pub fn pbw_normalize(&self, word: &[usize], coeff: &HbarPoly) -> Result<UEnvElement> {
        self.pbw_normalize_by(word, coeff, RewriteOrder::Leftmost)
    }

    pub fn pbw_normalize_by(&self, word: &[usize], coeff: &HbarPoly, order: RewriteOrder) -> Result<UEnvElement> {
        self.pbw_normalize_with(word, coeff, &mut |descents: &[usize]| match order {
            RewriteOrder::Leftmost => descents[0],
            RewriteOrder::Rightmost => descents[descents.len() - 1],
        })
    }

    /// Normalization with a caller-chosen rewrite position: `choose` gets the
    /// positions `p` with `w[p] > w[p+1]` and returns one of them.
    pub fn pbw_normalize_with(
        &self,
        word: &[usize],
        coeff: &HbarPoly,
        choose: &mut dyn FnMut(&[usize]) -> usize,
    ) -> Result<UEnvElement> {
        if let Some(&bad) = word.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::IndexOutOfRange { index: bad, nvars: self.dim() });
        }
        let n = self.order;
        let mut out = self.zero();
        let mut pending: BTreeMap<Vec<usize>, HbarPoly> = BTreeMap::new();
        add_into(&mut pending, word.to_vec(), &HbarPoly::from_coeffs(coeff.0.clone(), n), n);
        while let Some((w, c)) = pending.pop_first() {
            let descents: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]).collect();
            if descents.is_empty() {
                out.add_sorted(w, &c);
                continue;
            }
            let p = choose(&descents);
            assert!(descents.contains(&p), "rewrite position must be a descent");
            let (j, i) = (w[p], w[p + 1]);
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            add_into(&mut pending, swapped, &c, n);
            let hc = c.shift(n);
            if hc.is_zero() {
                continue;
            }
            for (k, ck) in self.lie.bracket(j, i) {
                let mut shorter = Vec::with_capacity(w.len() - 1);
                shorter.extend_from_slice(&w[..p]);
                shorter.push(*k);
                shorter.extend_from_slice(&w[p + 2..]);
                add_into(&mut pending, shorter, &hc.scale(ck), n);
            }
        }
        Ok(out)
    }

    fn check(&self, a: &UEnvElement) -> Result<()> {
        if a.dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim });
        }
        if a.order != self.order {
            return Err(Error::TruncationMismatch { left: self.order, right: a.order });
        }
        Ok(())
    }

    /// Product: concatenate words, then normalize.
    pub fn mul(&self, a: &UEnvElement, b: &UEnvElement) -> Result<UEnvElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let c = ca.mul(cb, self.order);
                if c.is_zero() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out = out.add(&self.pbw_normalize(&w, &c)?)?;
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, a: &UEnvElement, b: &UEnvElement) -> Result<UEnvElement> {
        self.mul(a, b)?.sub(&self.mul(b, a)?)
    }

    /// The symmetrization section `S(g) → U_ħ(g)`: a monomial of degree `m`
    /// maps to the average over all `m!` orderings of its factors.
    pub fn symmetrize(&self, s: &Poly) -> Result<UEnvElement> {
        s.check_nvars(self.dim())?;
        let mut out = self.zero();
        for (m, c) in s.terms() {
            let mut word: Vec<usize> =
                m.exps().iter().enumerate().flat_map(|(i, &e)| core::iter::repeat_n(i, e as usize)).collect();
            // each distinct arrangement stands for Π e_i! of the m! orderings
            let multiplicity: BigInt = m.exps().iter().map(|&e| factorial(e)).product();
            let weight = c * Scalar::new(multiplicity, factorial(m.degree()));
            let coeff = HbarPoly::constant(weight);
            loop {
                out = out.add(&self.pbw_normalize(&word, &coeff)?)?;
                if !next_permutation(&mut word) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Sets `ħ = 0` and reads PBW words as commutative monomials.
    pub fn classical_limit(&self, a: &UEnvElement) -> Poly {
        let d = self.dim();
        let mut out = Poly::zero(d);
        for (w, c) in &a.terms {
            let mut exps = alloc::vec![0u32; d];
            for &i in w {
                exps[i] += 1;
            }
            out.add_term(Monomial::new(exps), c.coeff(0));
        }
        out
    }

    /// `ξ_i a - a ξ_i = 0` for every basis element, which in `U_ħ(g)` is the
    /// same as centrality.
    pub fn adjoint_invariant_check(&self, a: &UEnvElement) -> Result<bool> {
        for i in 0..self.dim() {
            if !self.commutator(&self.generator(i), a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lexicographic next permutation; `false` once the last one is reached.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rat};

    const E: usize = 0;
    const H: usize = 1;
    const F: usize = 2;

    fn sl2(order: usize) -> EnvelopingAlgebra {
        EnvelopingAlgebra::new(LieAlgebraData::sl2(), order)
    }

    fn one() -> HbarPoly {
        HbarPoly::constant(int(1))
    }

    fn element(alg: &EnvelopingAlgebra, terms: &[(&[usize], HbarPoly)]) -> UEnvElement {
        let mut out = alg.zero();
        for (w, c) in terms {
            out.add_sorted(w.to_vec(), c);
        }
        out
    }

    #[test]
    fn one_rewrite_step() {
        let alg = sl2(4);
        let got = alg.pbw_normalize(&[H, E], &one()).unwrap();
        let expected = element(&alg, &[(&[E, H], one()), (&[E], HbarPoly::monomial(1, int(2), 4))]);
        assert_eq!(got, expected);
    }

    #[test]
    fn sorted_words_are_fixed() {
        let alg = sl2(4);
        let got = alg.pbw_normalize(&[E, E, H, F], &one()).unwrap();
        assert_eq!(got, element(&alg, &[(&[E, E, H, F], one())]));
    }

    #[test]
    fn abelian_words_just_sort() {
        let alg = EnvelopingAlgebra::new(LieAlgebraData::abelian(3), 4);
        let got = alg.pbw_normalize(&[2, 0, 1, 0], &one()).unwrap();
        assert_eq!(got, element(&alg, &[(&[0, 0, 1, 2], one())]));
    }

    #[test]
    fn ef_minus_fe() {
        let alg = sl2(4);
        let (e, f) = (alg.generator(E), alg.generator(F));
        let got = alg.commutator(&e, &f).unwrap();
        assert_eq!(got, alg.generator(H).mul_hbar());
        let a = alg.symmetrize(&Poly::var(3, H).pow(2)).unwrap();
        assert_eq!(alg.mul(&a, &alg.one()).unwrap(), a);
        assert_eq!(alg.mul(&a.mul_hbar(), &e).unwrap(), alg.mul(&a, &e).unwrap().mul_hbar());
    }

    #[test]
    fn symmetrized_ef() {
        // (ef + fe)/2 with fe = ef - ħh
        let alg = sl2(4);
        let ef = &Poly::var(3, E) * &Poly::var(3, F);
        let got = alg.symmetrize(&ef).unwrap();
        let expected = element(&alg, &[(&[E, F], one()), (&[H], HbarPoly::monomial(1, rat(-1, 2), 4))]);
        assert_eq!(got, expected);
        assert_eq!(alg.classical_limit(&got), ef);
    }

    #[test]
    fn degree_one_symmetrization_is_identity() {
        let alg = sl2(3);
        for i in 0..3 {
            assert_eq!(alg.symmetrize(&Poly::var(3, i)).unwrap(), alg.generator(i));
        }
        let ab = EnvelopingAlgebra::new(LieAlgebraData::abelian(2), 3);
        let s = &Poly::var(2, 0).pow(2) * &Poly::var(2, 1);
        assert_eq!(ab.symmetrize(&s).unwrap(), element(&ab, &[(&[0, 0, 1], one())]));
    }

    #[test]
    fn classical_limit_drops_hbar() {
        let alg = sl2(3);
        let a = element(&alg, &[(&[E, H], one()), (&[E], HbarPoly::monomial(1, int(2), 3))]);
        assert_eq!(alg.classical_limit(&a), &Poly::var(3, E) * &Poly::var(3, H));
        assert!(alg.classical_limit(&alg.generator(E).mul_hbar()).is_zero());
    }

    #[test]
    fn casimir_is_central() {
        let alg = sl2(4);
        let e = Poly::var(3, E);
        let h = Poly::var(3, H);
        let f = Poly::var(3, F);
        let casimir = &(&e * &f) + &h.pow(2).scale(&rat(1, 4));
        let c = alg.symmetrize(&casimir).unwrap();
        assert!(alg.adjoint_invariant_check(&c).unwrap());
        assert!(!alg.adjoint_invariant_check(&alg.generator(E)).unwrap());
        let ab = EnvelopingAlgebra::new(LieAlgebraData::abelian(2), 3);
        assert!(ab.adjoint_invariant_check(&ab.generator(1)).unwrap());
    }

    #[test]
    fn truncation_drops_high_hbar_orders() {
        let alg = sl2(0);
        // h e = e h + 2ħ e, and ħ vanishes at order 0
        assert_eq!(alg.pbw_normalize(&[H, E], &one()).unwrap(), element(&alg, &[(&[E, H], one())]));
    }

    #[test]
    fn out_of_range_index() {
        assert!(matches!(sl2(2).pbw_normalize(&[3], &one()), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn permutations_are_distinct() {
        let mut w = alloc::vec![0, 0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut w) {
            count += 1;
        }
        assert_eq!(count, 12);
    }
}
