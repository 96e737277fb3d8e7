//! Order-by-order lifting of integral central elements.
//!
//! Given an invariant `f` with a monic relation
//! `P(f) = f^n + a_{n-1} f^{n-1} + … + a_0 = 0` over the lifted subalgebra,
//! the lift `f̂ = Σ f_m ħ^m` is built so that
//! `f̂^{★n} + â_{n-1} ★ f̂^{★(n-1)} + … + â_0 ≡ 0`. Once `f_0, …, f_m` are fixed
//! the defect lies in `ħ^{m+1}`, and its `ħ^{m+1}` coefficient is cancelled
//! by the unique `f_{m+1}` with `P'(f) f_{m+1} = Q_{m+1}`. The division is
//! carried out exactly in `K[X]`; a nonzero remainder is an obstruction.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::envalg::{EnvelopingAlgebra, HamiltonianAction};
use crate::invcenter::{subalgebra_basis, CenterContext};
use crate::polyring::{to_row, Echelon, HSeries, Poly, Scalar};
use crate::starprod::StarProduct;
use crate::{Error, Result};

/// `p(F_1, …, F_r)` with monomials expanded as left-to-right star products
/// in increasing index order.
pub fn star_evaluate(star: &StarProduct, p: &Poly, images: &[HSeries]) -> Result<HSeries> {
    if p.nvars() != images.len() {
        return Err(Error::DimensionMismatch { expected: images.len(), found: p.nvars() });
    }
    let mut powers: Vec<Vec<HSeries>> = images.iter().map(|_| alloc::vec![star.one()]).collect();
    let mut out = star.zero();
    for (m, c) in p.terms() {
        let mut t = star.one().scale(c);
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = star.star(powers[i].last().unwrap(), &images[i])?;
                powers[i].push(next);
            }
            t = star.star(&t, &powers[i][e as usize])?;
        }
        out = out.add(&t)?;
    }
    Ok(out)
}

fn classical_evaluate(nvars: usize, p: &Poly, images: &[Poly]) -> Result<Poly> {
    if images.is_empty() {
        p.check_nvars(0)?;
        return Ok(Poly::constant(nvars, p.constant_term()));
    }
    p.substitute(images)
}

/// A section `ι` of the designated invariant generators `z_j` into the
/// quantum algebra: `ι(z_j) = comoment(symmetrize(z_j)) + c_j(ħ)` with
/// scalar shifts `c_j ∈ ħK[ħ]`, extended multiplicatively.
#[derive(Clone, Debug)]
pub struct CenterSection {
    act: HamiltonianAction,
    shifts: Vec<Vec<Scalar>>,
    images: Vec<HSeries>,
    pullbacks: Vec<Poly>,
}

impl CenterSection {
    /// The plain symmetrization section.
    pub fn symmetrization(act: &HamiltonianAction) -> Result<Self> {
        let r = act.lie().invariant_generators().len();
        CenterSection::with_shifts(act, alloc::vec![Vec::new(); r])
    }

    /// `shifts[j][m]` is the coefficient of `ħ^m` added to `ι(z_j)`; the
    /// constant term must vanish so the section still lifts `z_j`.
    pub fn with_shifts(act: &HamiltonianAction, shifts: Vec<Vec<Scalar>>) -> Result<Self> {
        let gens = act.lie().invariant_generators();
        if shifts.len() != gens.len() {
            return Err(Error::InvalidAction(format!(
                "expected {} section shifts, found {}",
                gens.len(),
                shifts.len()
            )));
        }
        let alg = EnvelopingAlgebra::new(act.lie().clone(), act.order());
        let mut images = Vec::with_capacity(gens.len());
        let mut pullbacks = Vec::with_capacity(gens.len());
        for (j, (z, shift)) in gens.iter().zip(&shifts).enumerate() {
            if shift.first().is_some_and(|c| !c.is_zero()) {
                return Err(Error::InvalidAction(format!("section shift {j} has a nonzero constant term")));
            }
            let image = act.comoment(&alg.symmetrize(z)?)?;
            images.push(image.add(&act.star().one().mul_hbar_scalars(shift))?);
            pullbacks.push(act.pullback(z)?);
        }
        Ok(CenterSection { act: act.clone(), shifts, images, pullbacks })
    }

    pub fn action(&self) -> &HamiltonianAction {
        &self.act
    }

    pub fn shifts(&self) -> &[Vec<Scalar>] {
        &self.shifts
    }

    /// `ι(z_j)`.
    pub fn images(&self) -> &[HSeries] {
        &self.images
    }

    /// `μ*(z_j)`.
    pub fn pullbacks(&self) -> &[Poly] {
        &self.pullbacks
    }

    /// `a(μ*(z_1), …)` for a polynomial `a` in the generator symbols.
    pub fn classical(&self, a: &Poly) -> Result<Poly> {
        classical_evaluate(self.act.nvars(), a, &self.pullbacks)
    }

    /// `a(ι(z_1), …)` under the star product.
    pub fn quantum(&self, a: &Poly) -> Result<HSeries> {
        star_evaluate(self.act.star(), a, &self.images)
    }

    /// Whether every `ι(z_j)` has the `K^×`-weight of `μ*(z_j)`.
    pub fn is_homogeneous(&self) -> bool {
        let space = self.act.star().space();
        self.images
            .iter()
            .zip(&self.pullbacks)
            .all(|(s, p)| p.is_zero() || space.series_weight(s) == space.weighted_degree(p))
    }
}

/// `P(t) = t^n + Σ a_i t^i` with quantum coefficients `â_i ≡ a_i mod ħ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicRelation {
    classical: Vec<Poly>,
    quantum: Vec<HSeries>,
}

impl MonicRelation {
    /// Checks `P(f) = 0` and `â_i ≡ a_i mod ħ`.
    pub fn new(f: &Poly, classical: Vec<Poly>, quantum: Vec<HSeries>) -> Result<Self> {
        if classical.is_empty() || classical.len() != quantum.len() {
            return Err(Error::InvalidRelation("need matching nonempty classical and quantum coefficients".into()));
        }
        for (i, (a, qa)) in classical.iter().zip(&quantum).enumerate() {
            a.check_nvars(f.nvars())?;
            if qa.nvars() != f.nvars() {
                return Err(Error::DimensionMismatch { expected: f.nvars(), found: qa.nvars() });
            }
            if qa.classical_part() != a {
                return Err(Error::InvalidRelation(format!("quantum coefficient {i} does not reduce to a_{i}")));
            }
            if qa.order() != quantum[0].order() {
                return Err(Error::TruncationMismatch { left: quantum[0].order(), right: qa.order() });
            }
        }
        let rel = MonicRelation { classical, quantum };
        if !rel.eval_classical(f).is_zero() {
            return Err(Error::InvalidRelation(format!("P(f) = {} for f = {f}", rel.eval_classical(f))));
        }
        Ok(rel)
    }

    /// Coefficients given as polynomials in the designated generators:
    /// `a_i = coeffs[i](μ*(z))`, `â_i = coeffs[i](ι(z))`. The relation must
    /// be of minimal degree over the subalgebra generated by the `μ*(z_j)`.
    pub fn from_section(section: &CenterSection, f: &Poly, coeffs: &[Poly]) -> Result<Self> {
        let classical = coeffs.iter().map(|a| section.classical(a)).collect::<Result<_>>()?;
        let quantum = coeffs.iter().map(|a| section.quantum(a)).collect::<Result<_>>()?;
        let rel = MonicRelation::new(f, classical, quantum)?;
        if !rel.is_minimal_over(f, section.pullbacks())? {
            return Err(Error::InvalidRelation(format!(
                "f = {f} satisfies a monic relation of lower degree over the moment image"
            )));
        }
        Ok(rel)
    }

    pub fn degree(&self) -> usize {
        self.classical.len()
    }

    pub fn order(&self) -> usize {
        self.quantum[0].order()
    }

    pub fn classical_coeffs(&self) -> &[Poly] {
        &self.classical
    }

    pub fn quantum_coeffs(&self) -> &[HSeries] {
        &self.quantum
    }

    /// `P(f)`.
    pub fn eval_classical(&self, f: &Poly) -> Poly {
        let mut acc = Poly::one(f.nvars());
        for a in self.classical.iter().rev() {
            acc = &(&acc * f) + a;
        }
        acc
    }

    /// `P'(f)`.
    pub fn derivative_at(&self, f: &Poly) -> Poly {
        let n = self.degree();
        let mut out = f.pow(n as u32 - 1).scale(&Scalar::from_integer((n as i64).into()));
        for (i, a) in self.classical.iter().enumerate().skip(1) {
            out += &(&f.pow(i as u32 - 1) * a).scale(&Scalar::from_integer((i as i64).into()));
        }
        out
    }

    /// `f̂^{★n} + Σ â_i ★ f̂^{★i}`.
    pub fn defect(&self, star: &StarProduct, fhat: &HSeries) -> Result<HSeries> {
        let mut power = star.one();
        let mut out = star.zero();
        for a in &self.quantum {
            out = out.add(&star.star(a, &power)?)?;
            power = star.star(&power, fhat)?;
        }
        out.add(&power)
    }

    /// No monic `Q` of lower degree over `K[gens]` has `Q(f) = 0`. For
    /// homogeneous data it is enough to test `f^m ∈ Σ_{i<m} B_{(m-i)e} f^i`.
    pub fn is_minimal_over(&self, f: &Poly, gens: &[Poly]) -> Result<bool> {
        let n = self.degree() as u32;
        if n == 1 {
            return Ok(true);
        }
        let e = f.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(format!("{f}")))?;
        if e == 0 {
            return Ok(false);
        }
        let sub = subalgebra_basis(f.nvars(), gens, (n - 1) * e)?;
        for m in 1..n {
            let mut ech = Echelon::new();
            for i in 0..m {
                let fi = f.pow(i);
                for b in sub.basis((m - i) * e) {
                    ech.insert(to_row(&(b * &fi)));
                }
            }
            if ech.contains(to_row(&f.pow(m))) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One step of the recursion: `P'(f) · correction = rhs` at `ħ^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftStep {
    pub order: usize,
    pub rhs: Poly,
    pub correction: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub lift: HSeries,
    pub steps: Vec<LiftStep>,
}

/// Runs the recursion for an invariant homogeneous `f` up to the order of
/// the action's star product.
pub fn hensel_lift(f: &Poly, rel: &MonicRelation, act: &HamiltonianAction) -> Result<Lift> {
    let star = act.star();
    if rel.order() != star.order() {
        return Err(Error::TruncationMismatch { left: star.order(), right: rel.order() });
    }
    if !f.is_zero() && !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(format!("{f}")));
    }
    if !act.is_invariant(f)? {
        return Err(Error::NotInvariant(format!("{f}")));
    }
    let dp = rel.derivative_at(f);
    if dp.is_zero() {
        return Err(Error::NonSimpleRoot);
    }
    let mut fhat = star.embed(f);
    let mut steps = Vec::new();
    for m in 0..star.order() {
        let defect = rel.defect(star, &fhat)?;
        debug_assert!(defect.coeffs()[..=m].iter().all(Poly::is_zero));
        let rhs = -defect.coeff(m + 1);
        let division = rhs.divide(&dp)?;
        if !division.remainder.is_zero() {
            return Err(Error::LiftObstruction { order: m + 1, remainder: division.remainder });
        }
        fhat.set_coeff(m + 1, division.quotient.clone());
        steps.push(LiftStep { order: m + 1, rhs, correction: division.quotient });
    }
    Ok(Lift { lift: fhat, steps })
}

/// Independent check of a candidate lift.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftVerification {
    pub order: usize,
    /// `P(f̂ mod ħ) = 0`.
    pub classical_holds: bool,
    /// Lowest `ħ`-order where the quantum relation fails.
    pub relation_failure: Option<usize>,
    /// First `(test element, ħ-order)` where `f̂` fails to commute.
    pub central_failure: Option<(usize, usize)>,
    /// Coefficients `â_i` that fail to commute, with the failing order.
    pub coefficient_failures: Vec<(usize, usize)>,
    /// Every `f_m ħ^m` has the weight of `f`.
    pub homogeneous: bool,
}

impl LiftVerification {
    pub fn passed(&self) -> bool {
        self.classical_holds
            && self.relation_failure.is_none()
            && self.central_failure.is_none()
            && self.coefficient_failures.is_empty()
            && self.homogeneous
    }
}

/// Re-expands the relation with powers built from the left and tests
/// centrality of `f̂` and of every `â_i` against the invariants of `ctx`.
pub fn verify_lift(fhat: &HSeries, rel: &MonicRelation, ctx: &CenterContext<'_>) -> Result<LiftVerification> {
    let star = ctx.action().star();
    let f = fhat.classical_part();
    let n = rel.degree();
    let mut powers = alloc::vec![star.one()];
    for i in 1..=n {
        powers.push(star.star(fhat, &powers[i - 1])?);
    }
    let mut total = powers[n].clone();
    for (i, a) in rel.quantum_coeffs().iter().enumerate() {
        total = total.add(&star.star(a, &powers[i])?)?;
    }
    let mut coefficient_failures = Vec::new();
    for (i, a) in rel.quantum_coeffs().iter().enumerate() {
        if let Some((_, order)) = ctx.centrality_defect(a)? {
            coefficient_failures.push((i, order));
        }
    }
    let space = star.space();
    let homogeneous = f.is_zero() || space.series_weight(fhat) == space.weighted_degree(f);
    Ok(LiftVerification {
        order: star.order(),
        classical_holds: rel.eval_classical(f).is_zero(),
        relation_failure: total.valuation(),
        central_failure: ctx.centrality_defect(fhat)?,
        coefficient_failures,
        homogeneous,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsoEntry {
    pub generator: Poly,
    pub lift: Lift,
    pub verification: LiftVerification,
    /// `f̂ mod ħ = f`.
    pub triangle_holds: bool,
    /// `f̂` has the `K^×`-weight of `f`.
    pub equivariant: bool,
}

/// The table `f_j ↦ f̂_j` on generators of the Poisson center.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterIso {
    pub order: usize,
    pub entries: Vec<IsoEntry>,
    pub relations_checked: usize,
}

impl CenterIso {
    pub fn lifts(&self) -> Vec<HSeries> {
        self.entries.iter().map(|e| e.lift.lift.clone()).collect()
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.verification.passed() && e.triangle_holds && e.equivariant)
    }
}

/// Lifts every generator and checks each relation `r(f_1, …, f_k) = 0`
/// (a polynomial in `k` symbols) survives as `r(f̂_1, …, f̂_k) ≡ 0` under ★.
pub fn build_center_iso(
    gens: &[(Poly, MonicRelation)],
    relations: &[Poly],
    ctx: &CenterContext<'_>,
) -> Result<CenterIso> {
    let act = ctx.action();
    let space = act.star().space();
    let mut entries = Vec::with_capacity(gens.len());
    for (f, rel) in gens {
        let lift = hensel_lift(f, rel, act)?;
        let verification = verify_lift(&lift.lift, rel, ctx)?;
        let triangle_holds = lift.lift.classical_part() == f;
        let equivariant = f.is_zero() || space.series_weight(&lift.lift) == space.weighted_degree(f);
        entries.push(IsoEntry { generator: f.clone(), lift, verification, triangle_holds, equivariant });
    }
    let classical: Vec<Poly> = gens.iter().map(|(f, _)| f.clone()).collect();
    let lifts: Vec<HSeries> = entries.iter().map(|e| e.lift.lift.clone()).collect();
    for (index, r) in relations.iter().enumerate() {
        if !classical_evaluate(act.nvars(), r, &classical)?.is_zero() {
            return Err(Error::InvalidRelation(format!("relation {index} does not hold classically")));
        }
        if let Some(order) = star_evaluate(act.star(), r, &lifts)?.valuation() {
            return Err(Error::RelationViolation { index, order });
        }
    }
    Ok(CenterIso { order: act.order(), entries, relations_checked: relations.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envalg::LieAlgebraData;
    use crate::polyring::{int, rat, SymplecticSpace};
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;

    fn euler(space: &SymplecticSpace) -> Poly {
        (0..space.n()).map(|i| &space.q(i) * &space.p(i)).fold(Poly::zero(space.nvars()), |a, b| a + b)
    }

    fn sl2_tstar(order: usize) -> HamiltonianAction {
        let space = SymplecticSpace::standard(2);
        let (q1, q2, p1, p2) = (space.q(0), space.q(1), space.p(0), space.p(1));
        let hh = &(&q1 * &p1) - &(&q2 * &p2);
        HamiltonianAction::new(
            LieAlgebraData::sl2(),
            StarProduct::new(space, order),
            alloc::vec![&q2 * &p1, hh, &q1 * &p2],
            None,
        )
        .unwrap()
    }

    // T² acting on K⁴ with designated invariants x1 + x2 and x1 x2
    fn torus2_symmetric(order: usize) -> HamiltonianAction {
        let space = SymplecticSpace::standard(2);
        let x = |i| Poly::var(2, i);
        let lie = LieAlgebraData::from_table(
            alloc::vec!["x1".to_string(), "x2".to_string()],
            alloc::vec![alloc::vec![BTreeMap::new(); 2]; 2],
            alloc::vec![&x(0) + &x(1), &x(0) * &x(1)],
        )
        .unwrap();
        let h = alloc::vec![&space.q(0) * &space.p(0), &space.q(1) * &space.p(1)];
        HamiltonianAction::new(lie, StarProduct::new(space, order), h, None).unwrap()
    }

    #[test]
    fn linear_relation_returns_the_section() {
        let space = SymplecticSpace::standard(2);
        let e = euler(&space);
        let act = HamiltonianAction::new(
            LieAlgebraData::abelian(1),
            StarProduct::new(space, 5),
            alloc::vec![e.clone()],
            None,
        )
        .unwrap();
        let section = CenterSection::symmetrization(&act).unwrap();
        let rel = MonicRelation::from_section(&section, &e, &[-Poly::var(1, 0)]).unwrap();
        let lift = hensel_lift(&e, &rel, &act).unwrap();
        assert_eq!(lift.lift, section.images()[0]);
        assert!(lift.steps.iter().all(|s| s.correction.is_zero()));
    }

    #[test]
    fn sl2_lift_with_shifted_section() {
        let act = sl2_tstar(6);
        let e = euler(act.star().space());
        let section = CenterSection::with_shifts(&act, alloc::vec![alloc::vec![int(0), int(0), int(1)]]).unwrap();
        assert!(section.is_homogeneous());
        assert_eq!(section.images()[0], act.star().moyal(&e, &e).unwrap());
        let rel = MonicRelation::from_section(&section, &e, &[Poly::zero(1), Poly::zero(1)]);
        assert!(rel.is_err(), "t² over a zero constant term is not a relation for E");
        let rel = MonicRelation::from_section(&section, &e, &[-Poly::var(1, 0), Poly::zero(1)]).unwrap();
        let lift = hensel_lift(&e, &rel, &act).unwrap();
        assert_eq!(lift.lift, act.star().embed(&e));
        let ctx = CenterContext::new(&act, 6).unwrap();
        assert!(verify_lift(&lift.lift, &rel, &ctx).unwrap().passed());
    }

    #[test]
    fn plain_symmetrization_is_obstructed() {
        let act = sl2_tstar(4);
        let e = euler(act.star().space());
        let section = CenterSection::symmetrization(&act).unwrap();
        let rel = MonicRelation::from_section(&section, &e, &[-Poly::var(1, 0), Poly::zero(1)]).unwrap();
        match hensel_lift(&e, &rel, &act) {
            Err(Error::LiftObstruction { order, remainder }) => {
                assert_eq!(order, 2);
                assert_eq!(remainder, Poly::constant(4, int(-1)));
            }
            other => panic!("expected an obstruction, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_constant_coefficient_is_obstructed_at_order_one() {
        let act = sl2_tstar(4);
        let e = euler(act.star().space());
        let section = CenterSection::with_shifts(&act, alloc::vec![alloc::vec![int(0), int(0), int(1)]]).unwrap();
        let rel = MonicRelation::from_section(&section, &e, &[-Poly::var(1, 0), Poly::zero(1)]).unwrap();
        let mut quantum = rel.quantum_coeffs().to_vec();
        quantum[0] = quantum[0].add(&HSeries::hbar_power(4, 1, int(1), 4)).unwrap();
        let perturbed = MonicRelation::new(&e, rel.classical_coeffs().to_vec(), quantum).unwrap();
        assert!(matches!(hensel_lift(&e, &perturbed, &act), Err(Error::LiftObstruction { order: 1, .. })));
    }

    fn lambda_relation(act: &HamiltonianAction, lambda: Scalar) -> MonicRelation {
        let (h1, h2) = (act.hamiltonians()[0].clone(), act.hamiltonians()[1].clone());
        let star = act.star();
        let n = act.order();
        let a1 = -(&h1 + &h2);
        let a0 = &h1 * &h2;
        let qa1 = star.embed(&a1).add(&HSeries::hbar_power(4, 1, lambda.clone(), n)).unwrap();
        let qa0 = star.embed(&a0).sub(&star.embed(&h2).shift(1).scale(&lambda)).unwrap();
        MonicRelation::new(&h1, alloc::vec![a0, a1], alloc::vec![qa0, qa1]).unwrap()
    }

    #[test]
    fn recursion_tracks_the_quantum_coefficients() {
        let act = torus2_symmetric(5);
        let h1 = act.hamiltonians()[0].clone();
        let lambda = rat(3, 2);
        let rel = lambda_relation(&act, lambda.clone());
        let section = CenterSection::symmetrization(&act).unwrap();
        assert!(rel.is_minimal_over(&h1, section.pullbacks()).unwrap());
        assert_eq!(rel.derivative_at(&h1), &h1 - &act.hamiltonians()[1]);
        let lift = hensel_lift(&h1, &rel, &act).unwrap();
        let expected = act.star().embed(&h1).sub(&HSeries::hbar_power(4, 1, lambda, 5)).unwrap();
        assert_eq!(lift.lift, expected);
        assert_eq!(lift.steps[0].rhs, (&act.hamiltonians()[1] - &h1).scale(&rat(3, 2)));
        let ctx = CenterContext::new(&act, 4).unwrap();
        let check = verify_lift(&lift.lift, &rel, &ctx).unwrap();
        assert!(check.passed(), "{check:?}");
        // the unlifted element fails at the first order
        let bare = verify_lift(&act.star().embed(&h1), &rel, &ctx).unwrap();
        assert_eq!(bare.relation_failure, Some(1));
    }

    #[test]
    fn non_minimal_relation_is_rejected() {
        let act = torus2_symmetric(3);
        let section = CenterSection::symmetrization(&act).unwrap();
        let s = &act.hamiltonians()[0] + &act.hamiltonians()[1];
        // t² - s1² kills s = μ*(s1), which already satisfies t - s1
        let s1 = Poly::var(2, 0);
        let err = MonicRelation::from_section(&section, &s, &[-s1.pow(2), Poly::zero(2)]).unwrap_err();
        assert!(matches!(err, Error::InvalidRelation(_)));
    }

    #[test]
    fn zero_order_is_the_classical_check() {
        let act = torus2_symmetric(0);
        let h1 = act.hamiltonians()[0].clone();
        let rel = lambda_relation(&act, int(5));
        let lift = hensel_lift(&h1, &rel, &act).unwrap();
        assert!(lift.steps.is_empty());
        let ctx = CenterContext::new(&act, 2).unwrap();
        assert!(verify_lift(&lift.lift, &rel, &ctx).unwrap().passed());
    }

    #[test]
    fn repeated_root_is_rejected() {
        let act = torus2_symmetric(2);
        let h1 = act.hamiltonians()[0].clone();
        let a1 = h1.scale(&int(-2));
        let a0 = h1.pow(2);
        let star = act.star();
        let rel =
            MonicRelation::new(&h1, alloc::vec![a0.clone(), a1.clone()], alloc::vec![star.embed(&a0), star.embed(&a1)])
                .unwrap();
        assert_eq!(hensel_lift(&h1, &rel, &act).unwrap_err(), Error::NonSimpleRoot);
    }

    #[test]
    fn sl2_iso_with_relation() {
        let act = sl2_tstar(5);
        let e = euler(act.star().space());
        let section = CenterSection::with_shifts(&act, alloc::vec![alloc::vec![int(0), int(0), int(1)]]).unwrap();
        let z = Poly::var(1, 0);
        let gens = alloc::vec![
            (e.pow(2), MonicRelation::from_section(&section, &e.pow(2), &[-z.clone()]).unwrap()),
            (e.clone(), MonicRelation::from_section(&section, &e, &[-z, Poly::zero(1)]).unwrap()),
        ];
        // y2² - y1
        let relation = &Poly::var(2, 1).pow(2) - &Poly::var(2, 0);
        let ctx = CenterContext::new(&act, 6).unwrap();
        let iso = build_center_iso(&gens, &[relation], &ctx).unwrap();
        assert!(iso.passed());
        assert_eq!(iso.relations_checked, 1);
    }

    #[test]
    fn violated_relation_reports_order() {
        let act = torus2_symmetric(3);
        let h1 = act.hamiltonians()[0].clone();
        let gens = alloc::vec![(h1.clone(), lambda_relation(&act, int(1))), (h1, lambda_relation(&act, int(0)))];
        let relation = &Poly::var(2, 0) - &Poly::var(2, 1);
        let ctx = CenterContext::new(&act, 4).unwrap();
        assert_eq!(
            build_center_iso(&gens, &[relation], &ctx).unwrap_err(),
            Error::RelationViolation { index: 0, order: 1 }
        );
    }
}
