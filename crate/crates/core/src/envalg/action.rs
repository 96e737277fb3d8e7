use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{EnvelopingAlgebra, LieAlgebraData, UEnvElement};
use crate::polyring::{HSeries, Poly, Scalar};
use crate::starprod::StarProduct;
use crate::{Error, Result};

/// Hamiltonian action of `g` on a symplectic space: classical hamiltonians
/// `H_i` and quantum hamiltonians `Ĥ_i ≡ H_i mod ħ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianAction {
    lie: LieAlgebraData,
    star: StarProduct,
    classical: Vec<Poly>,
    quantum: Vec<HSeries>,
    quantum_bracket_failure: Option<(usize, usize)>,
}

impl HamiltonianAction {
    /// Validates equivariance `{H_i, H_j} = Σ c_{ij}^k H_k` and the classical
    /// parts of the quantum hamiltonians (which default to `Ĥ_i = H_i`).
    pub fn new(
        lie: LieAlgebraData,
        star: StarProduct,
        classical: Vec<Poly>,
        quantum: Option<Vec<HSeries>>,
    ) -> Result<Self> {
        let d = lie.dim();
        if classical.len() != d {
            return Err(Error::InvalidAction(format!("expected {d} hamiltonians, found {}", classical.len())));
        }
        for h in &classical {
            h.check_nvars(star.nvars())?;
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let lhs = star.poisson(&classical[i], &classical[j])?;
                if lhs != combination(star.nvars(), lie.bracket(i, j), &classical) {
                    return Err(Error::NotEquivariant { i, j });
                }
            }
        }
        let quantum = match quantum {
            Some(q) => {
                if q.len() != d {
                    return Err(Error::InvalidAction(format!("expected {d} quantum hamiltonians, found {}", q.len())));
                }
                for (index, (qh, h)) in q.iter().zip(&classical).enumerate() {
                    if qh.order() != star.order() {
                        return Err(Error::TruncationMismatch { left: star.order(), right: qh.order() });
                    }
                    if qh.nvars() != star.nvars() {
                        return Err(Error::DimensionMismatch { expected: star.nvars(), found: qh.nvars() });
                    }
                    if qh.classical_part() != h {
                        return Err(Error::ClassicalPartMismatch { index });
                    }
                }
                q
            }
            None => classical.iter().map(|h| star.embed(h)).collect(),
        };
        let mut act = HamiltonianAction { lie, star, classical, quantum, quantum_bracket_failure: None };
        act.quantum_bracket_failure = act.find_quantum_bracket_failure()?;
        Ok(act)
    }

    fn find_quantum_bracket_failure(&self) -> Result<Option<(usize, usize)>> {
        let d = self.lie.dim();
        for i in 0..d {
            for j in (i + 1)..d {
                let lhs = self.star.star_commutator(&self.quantum[i], &self.quantum[j])?;
                let mut rhs = self.star.zero();
                for (k, c) in self.lie.bracket(i, j) {
                    rhs = rhs.add(&self.quantum[*k].scale(c))?;
                }
                if lhs != rhs.shift(1) {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn star(&self) -> &StarProduct {
        &self.star
    }

    pub fn nvars(&self) -> usize {
        self.star.nvars()
    }

    pub fn order(&self) -> usize {
        self.star.order()
    }

    pub fn hamiltonians(&self) -> &[Poly] {
        &self.classical
    }

    pub fn quantum_hamiltonians(&self) -> &[HSeries] {
        &self.quantum
    }

    /// Same action with every series re-truncated at `order`.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        let quantum = self.quantum.iter().map(|q| q.truncate_to(order)).collect();
        HamiltonianAction::new(self.lie.clone(), self.star.with_order(order), self.classical.clone(), Some(quantum))
    }

    /// Whether `Ĥ_i ★ Ĥ_j - Ĥ_j ★ Ĥ_i = ħ Σ c_{ij}^k Ĥ_k` for all `i, j`.
    pub fn quantum_brackets_hold(&self) -> bool {
        self.quantum_bracket_failure.is_none()
    }

    /// First pair `(i, j)` with `[Ĥ_i, Ĥ_j]_★ ≠ ħ Σ c_{ij}^k Ĥ_k`.
    pub fn quantum_bracket_failure(&self) -> Option<(usize, usize)> {
        self.quantum_bracket_failure
    }

    /// `μ*(z) = z(H_1, …, H_d)`.
    pub fn pullback(&self, z: &Poly) -> Result<Poly> {
        z.check_nvars(self.lie.dim())?;
        if self.classical.is_empty() {
            return Ok(Poly::constant(self.nvars(), z.constant_term()));
        }
        z.substitute(&self.classical)
    }

    /// Whether `{H_i, f} = 0` for all `i`.
    pub fn is_invariant(&self, f: &Poly) -> Result<bool> {
        for h in &self.classical {
            if !self.star.poisson(h, f)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The algebra map `U_ħ(g) → K[X][[ħ]]`, `ξ_i ↦ Ĥ_i`; PBW words go to
    /// left-to-right star products.
    pub fn comoment(&self, a: &UEnvElement) -> Result<HSeries> {
        if let Some((i, j)) = self.quantum_bracket_failure {
            return Err(Error::InvalidAction(format!(
                "quantum hamiltonians {i} and {j} do not satisfy the bracket relation"
            )));
        }
        if a.dim() != self.lie.dim() {
            return Err(Error::DimensionMismatch { expected: self.lie.dim(), found: a.dim() });
        }
        if a.order() != self.order() {
            return Err(Error::TruncationMismatch { left: self.order(), right: a.order() });
        }
        let mut memo: BTreeMap<Vec<usize>, HSeries> = BTreeMap::new();
        memo.insert(Vec::new(), self.star.one());
        let mut out = self.star.zero();
        for (word, c) in a.terms() {
            let image = self.word_image(word, &mut memo)?;
            out = out.add(&image.mul_hbar_scalars(c.coeffs()))?;
        }
        Ok(out)
    }

    fn word_image(&self, word: &[usize], memo: &mut BTreeMap<Vec<usize>, HSeries>) -> Result<HSeries> {
        if let Some(s) = memo.get(word) {
            return Ok(s.clone());
        }
        let (last, prefix) = word.split_last().expect("empty word is memoized");
        let head = self.word_image(prefix, memo)?;
        let s = self.star.star(&head, &self.quantum[*last])?;
        memo.insert(word.to_vec(), s.clone());
        Ok(s)
    }

    /// Checks `[Ĥ_i, f]_★ = ħ {H_i, f}` for every hamiltonian and sample.
    pub fn check_eq25(&self, samples: &[Poly]) -> Result<Eq25Report> {
        let mut failures = Vec::new();
        for (sample, f) in samples.iter().enumerate() {
            f.check_nvars(self.nvars())?;
            for (hamiltonian, (qh, h)) in self.quantum.iter().zip(&self.classical).enumerate() {
                let lhs = self.star.commutator_with_poly(qh, f)?;
                let rhs = self.star.embed(&self.star.poisson(h, f)?).shift(1);
                let residual = lhs.sub(&rhs)?;
                if !residual.is_zero() {
                    failures.push(Eq25Failure { hamiltonian, sample, residual });
                }
            }
        }
        Ok(Eq25Report { order: self.order(), checked: samples.len() * self.classical.len(), failures })
    }

    /// Both paths of the square `S(g)^g → U_ħ(g) → K[X][[ħ]] → K[X]` and
    /// `S(g)^g → K[X]` for one invariant `z`.
    pub fn check_diagram1(&self, alg: &EnvelopingAlgebra, z: &Poly) -> Result<Diagram1Report> {
        if alg.lie() != &self.lie {
            return Err(Error::InvalidAction("enveloping algebra of a different Lie algebra".into()));
        }
        if !self.lie.is_invariant(z) {
            return Err(Error::NotInvariant(format!("{z}")));
        }
        let sym = alg.symmetrize(z)?;
        let section_holds = alg.classical_limit(&sym) == *z;
        let quantum = self.comoment(&sym)?;
        let pullback = self.pullback(z)?;
        Ok(Diagram1Report { section_holds, commutes: *quantum.classical_part() == pullback, pullback, quantum })
    }
}

fn combination(nvars: usize, v: &BTreeMap<usize, Scalar>, hs: &[Poly]) -> Poly {
    let mut out = Poly::zero(nvars);
    for (k, c) in v {
        out += &hs[*k].scale(c);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq25Failure {
    pub hamiltonian: usize,
    pub sample: usize,
    pub residual: HSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq25Report {
    pub order: usize,
    pub checked: usize,
    pub failures: Vec<Eq25Failure>,
}

impl Eq25Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram1Report {
    /// `classical_limit(symmetrize(z)) = z`.
    pub section_holds: bool,
    /// `comoment(symmetrize(z)) ≡ μ*(z) mod ħ`.
    pub commutes: bool,
    pub pullback: Poly,
    pub quantum: HSeries,
}

impl Diagram1Report {
    pub fn passed(&self) -> bool {
        self.section_holds && self.commutes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rat, SymplecticSpace};

    fn sl2_tstar(order: usize) -> HamiltonianAction {
        let space = SymplecticSpace::standard(2);
        let (q1, q2, p1, p2) = (space.q(0), space.q(1), space.p(0), space.p(1));
        let he = &q2 * &p1;
        let hf = &q1 * &p2;
        let hh = &(&q1 * &p1) - &(&q2 * &p2);
        HamiltonianAction::new(LieAlgebraData::sl2(), StarProduct::new(space, order), alloc::vec![he, hh, hf], None)
            .unwrap()
    }

    #[test]
    fn torus_eq25() {
        let space = SymplecticSpace::standard(1);
        let h = &space.q(0) * &space.p(0);
        let act = HamiltonianAction::new(
            LieAlgebraData::abelian(1),
            StarProduct::new(space.clone(), 4),
            alloc::vec![h],
            None,
        )
        .unwrap();
        let report = act.check_eq25(&[space.q(0), Poly::constant(2, int(3)), space.p(0).pow(3)]).unwrap();
        assert!(report.passed());
        let lhs = act.star().commutator_with_poly(&act.quantum_hamiltonians()[0], &space.q(0)).unwrap();
        assert_eq!(lhs, act.star().embed(&space.q(0)).shift(1).neg());
    }

    #[test]
    fn non_equivariant_hamiltonians_are_rejected() {
        let space = SymplecticSpace::standard(2);
        let q1 = space.q(0);
        let p1 = space.p(0);
        let err =
            HamiltonianAction::new(LieAlgebraData::abelian(2), StarProduct::new(space, 3), alloc::vec![q1, p1], None)
                .unwrap_err();
        assert_eq!(err, Error::NotEquivariant { i: 0, j: 1 });
    }

    #[test]
    fn classical_part_is_checked() {
        let space = SymplecticSpace::standard(1);
        let h = &space.q(0) * &space.p(0);
        let wrong = HSeries::from_poly(space.q(0).pow(2), 3);
        let err = HamiltonianAction::new(
            LieAlgebraData::abelian(1),
            StarProduct::new(space, 3),
            alloc::vec![h],
            Some(alloc::vec![wrong]),
        )
        .unwrap_err();
        assert_eq!(err, Error::ClassicalPartMismatch { index: 0 });
    }

    #[test]
    fn bad_quantum_correction_blocks_comoment() {
        // Ĥ_2 = q2p2 + ħ q1 breaks the commutator identity and [Ĥ_1, Ĥ_2]_★ = 0
        let space = SymplecticSpace::standard(2);
        let h1 = &space.q(0) * &space.p(0);
        let h2 = &space.q(1) * &space.p(1);
        let mut q2 = HSeries::from_poly(h2.clone(), 3);
        q2.set_coeff(1, space.q(0));
        let act = HamiltonianAction::new(
            LieAlgebraData::abelian(2),
            StarProduct::new(space.clone(), 3),
            alloc::vec![h1.clone(), h2],
            Some(alloc::vec![HSeries::from_poly(h1, 3), q2]),
        )
        .unwrap();
        assert!(!act.check_eq25(&[space.p(0)]).unwrap().passed());
        assert!(!act.quantum_brackets_hold());
        let alg = EnvelopingAlgebra::new(act.lie().clone(), 3);
        assert!(matches!(act.comoment(&alg.generator(0)), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn sl2_comoment_of_casimir() {
        let act = sl2_tstar(4);
        let alg = EnvelopingAlgebra::new(act.lie().clone(), 4);
        let casimir = &act.lie().invariant_generators()[0];
        let report = act.check_diagram1(&alg, casimir).unwrap();
        assert!(report.passed());
        let space = act.star().space();
        let e = &(&space.q(0) * &space.p(0)) + &(&space.q(1) * &space.p(1));
        assert_eq!(report.pullback, e.pow(2));
        // E★E = E² - ħ²/2, and the symmetrized Casimir lands at E★E - ħ²
        let expected = act.star().embed(&e.pow(2)).add(&HSeries::hbar_power(4, 2, rat(-3, 2), 4)).unwrap();
        assert_eq!(report.quantum, expected);
    }

    #[test]
    fn comoment_is_multiplicative_on_generators() {
        let act = sl2_tstar(3);
        let alg = EnvelopingAlgebra::new(act.lie().clone(), 3);
        for i in 0..3 {
            assert_eq!(act.comoment(&alg.generator(i)).unwrap(), act.quantum_hamiltonians()[i]);
            for j in 0..3 {
                let prod = alg.mul(&alg.generator(i), &alg.generator(j)).unwrap();
                let lhs = act.comoment(&prod).unwrap();
                let rhs = act.star().star(&act.quantum_hamiltonians()[i], &act.quantum_hamiltonians()[j]).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(act.comoment(&alg.one()).unwrap(), act.star().one());
    }

    #[test]
    fn diagram1_rejects_non_invariant() {
        let act = sl2_tstar(2);
        let alg = EnvelopingAlgebra::new(act.lie().clone(), 2);
        assert!(matches!(act.check_diagram1(&alg, &Poly::var(3, 0)), Err(Error::NotInvariant(_))));
    }
}
