//! The Moyal-Weyl star product on `K[V][[ħ]]`, the Poisson bracket, star
//! commutators and executable checks of the star-product axioms.
//!
//! For polynomials the exponential series terminates, so `f ★ g` is computed
//! exactly as `Σ_m ħ^m D_m(f, g)` with
//!
//! `D_m(f, g) = 1/(2^m m!) Σ P^{i_1 j_1} … P^{i_m j_m} (∂_{i_1…i_m} f)(∂_{j_1…j_m} g)`
//!
//! and truncation only happens when the result is stored.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::polyring::{factorial, falling_factorial, HSeries, Monomial, Poly, Scalar, SymplecticSpace};
use crate::{Error, Result};

/// The Moyal-Weyl product of a [`SymplecticSpace`], truncated at `ħ^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarProduct {
    space: SymplecticSpace,
    order: usize,
}

impl StarProduct {
    pub fn new(space: SymplecticSpace, order: usize) -> Self {
        StarProduct { space, order }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.space.nvars()
    }

    pub fn with_order(&self, order: usize) -> StarProduct {
        StarProduct { space: self.space.clone(), order }
    }

    /// Embeds a polynomial as a constant series.
    pub fn embed(&self, f: &Poly) -> HSeries {
        HSeries::from_poly(f.clone(), self.order)
    }

    pub fn one(&self) -> HSeries {
        self.embed(&Poly::one(self.nvars()))
    }

    pub fn zero(&self) -> HSeries {
        HSeries::zero(self.nvars(), self.order)
    }

    /// `D_0(f, g), …, D_M(f, g)` for `M = min(max_order, deg f, deg g)`.
    pub fn bidifferential_terms(&self, f: &Poly, g: &Poly, max_order: usize) -> Result<Vec<Poly>> {
        f.check_nvars(self.nvars())?;
        g.check_nvars(self.nvars())?;
        let nvars = self.nvars();
        let top = match (f.degree(), g.degree()) {
            (Some(a), Some(b)) => (a.min(b) as usize).min(max_order),
            _ => return Ok(Vec::new()),
        };
        let entries = self.space.bivector_entries();
        let mut acc: Vec<BTreeMap<Monomial, Scalar>> = (0..=top).map(|_| BTreeMap::new()).collect();
        let mut weights: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        let mut alpha = alloc::vec![0u32; entries.len()];
        for (a, ca) in f.terms() {
            for (b, cb) in g.terms() {
                let mut a_rem = a.exps().to_vec();
                let mut b_rem = b.exps().to_vec();
                let mut walk =
                    Walk { entries, a, b, coeff: ca * cb, max_order: top, weights: &mut weights, acc: &mut acc };
                walk.visit(0, 0, &mut alpha, &mut a_rem, &mut b_rem);
            }
        }
        Ok(acc
            .into_iter()
            .map(|terms| Poly::from_terms(nvars, terms.into_iter().filter(|(_, c)| !c.is_zero())))
            .collect())
    }

    /// `D_l(f, g)`.
    pub fn bidifferential(&self, l: usize, f: &Poly, g: &Poly) -> Result<Poly> {
        let terms = self.bidifferential_terms(f, g, l)?;
        Ok(terms.get(l).cloned().unwrap_or_else(|| Poly::zero(self.nvars())))
    }

    /// `f ★ g`, truncated at order `N`.
    pub fn moyal(&self, f: &Poly, g: &Poly) -> Result<HSeries> {
        let terms = self.bidifferential_terms(f, g, self.order)?;
        HSeries::from_coeffs(self.nvars(), terms, self.order)
    }

    /// The ħ-bilinear, ħ-adically continuous extension of [`Self::moyal`].
    pub fn star(&self, lhs: &HSeries, rhs: &HSeries) -> Result<HSeries> {
        self.check_series(lhs)?;
        self.check_series(rhs)?;
        let n = self.order;
        let mut out = self.zero();
        let mut slots: Vec<Poly> = out.coeffs().to_vec();
        for i in 0..=n {
            if lhs.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if rhs.coeff(j).is_zero() {
                    continue;
                }
                let terms = self.bidifferential_terms(lhs.coeff(i), rhs.coeff(j), n - i - j)?;
                for (m, t) in terms.into_iter().enumerate() {
                    slots[i + j + m] += &t;
                }
            }
        }
        for (m, c) in slots.into_iter().enumerate() {
            out.set_coeff(m, c);
        }
        Ok(out)
    }

    /// `F^{★e}`; `F^{★0} = 1`.
    pub fn power(&self, base: &HSeries, e: u32) -> Result<HSeries> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.star(&acc, base)?;
        }
        Ok(acc)
    }

    pub fn poisson(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.space.poisson(f, g)
    }

    /// `F ★ G - G ★ F`.
    pub fn star_commutator(&self, lhs: &HSeries, rhs: &HSeries) -> Result<HSeries> {
        self.star(lhs, rhs)?.sub(&self.star(rhs, lhs)?)
    }

    /// `[F, g]_★` for a polynomial `g`.
    pub fn commutator_with_poly(&self, lhs: &HSeries, g: &Poly) -> Result<HSeries> {
        self.star_commutator(lhs, &self.embed(g))
    }

    fn check_series(&self, s: &HSeries) -> Result<()> {
        if s.order() != self.order {
            return Err(Error::TruncationMismatch { left: self.order, right: s.order() });
        }
        if s.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: s.nvars() });
        }
        Ok(())
    }
}

/// Enumerates the multiplicities `α_e` of the commuting operators
/// `P^{ij} ∂_i ⊗ ∂_j` for one pair of monomials.
struct Walk<'a> {
    entries: &'a [(usize, usize, Scalar)],
    a: &'a Monomial,
    b: &'a Monomial,
    coeff: Scalar,
    max_order: usize,
    weights: &'a mut BTreeMap<Vec<u32>, Scalar>,
    acc: &'a mut Vec<BTreeMap<Monomial, Scalar>>,
}

impl Walk<'_> {
    fn visit(&mut self, e: usize, m: usize, alpha: &mut Vec<u32>, a_rem: &mut [u32], b_rem: &mut [u32]) {
        if e == self.entries.len() {
            self.emit(m, alpha, a_rem, b_rem);
            return;
        }
        let (i, j, _) = self.entries[e];
        let cap = a_rem[i].min(b_rem[j]).min((self.max_order - m) as u32);
        for k in 0..=cap {
            alpha[e] = k;
            a_rem[i] -= k;
            b_rem[j] -= k;
            self.visit(e + 1, m + k as usize, alpha, a_rem, b_rem);
            a_rem[i] += k;
            b_rem[j] += k;
        }
        alpha[e] = 0;
    }

    fn emit(&mut self, m: usize, alpha: &[u32], a_rem: &[u32], b_rem: &[u32]) {
        let entries = self.entries;
        let weight = self.weights.entry(alpha.to_vec()).or_insert_with(|| alpha_weight(entries, alpha, m));
        let mut ff = BigInt::one();
        for (v, &rem) in a_rem.iter().enumerate() {
            ff *= falling_factorial(self.a.exp(v), self.a.exp(v) - rem);
        }
        for (v, &rem) in b_rem.iter().enumerate() {
            ff *= falling_factorial(self.b.exp(v), self.b.exp(v) - rem);
        }
        let c = &self.coeff * &*weight * Scalar::from_integer(ff);
        let mono = Monomial::new(a_rem.iter().zip(b_rem).map(|(x, y)| x + y).collect());
        let slot = self.acc[m].entry(mono).or_insert_with(Scalar::zero);
        *slot += c;
    }
}

// Π_e (P_e)^{α_e} / α_e!  ·  1 / 2^m
fn alpha_weight(entries: &[(usize, usize, Scalar)], alpha: &[u32], m: usize) -> Scalar {
    let mut w = Scalar::one();
    for ((_, _, c), &k) in entries.iter().zip(alpha) {
        for _ in 0..k {
            w *= c;
        }
        w /= Scalar::from_integer(factorial(k));
    }
    w / Scalar::from_integer(BigInt::from(2u32).pow(m as u32))
}

/// A nonzero residual found by one of the checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub check: &'static str,
    pub residual: HSeries,
}

impl Residual {
    /// Lowest `ħ`-order at which the residual is nonzero.
    pub fn order(&self) -> Option<usize> {
        self.residual.valuation()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub index: usize,
    pub failures: Vec<Residual>,
}

/// Per-sample outcome of [`check_axioms`].
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub order: usize,
    pub samples: Vec<SampleReport>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(|s| s.failures.is_empty())
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &Residual)> {
        self.samples.iter().flat_map(|s| s.failures.iter().map(move |r| (s.index, r)))
    }
}

/// Checks the star-product axioms on polynomial triples `(f, g, h)`:
/// ħ-adic continuity (order locality) and ħ-linearity, associativity, the
/// unit, and both memberships `f★g - fg ∈ ħ` and
/// `f★g - g★f - ħ{f,g} ∈ ħ²`. Every residual must vanish exactly.
pub fn check_axioms(star: &StarProduct, samples: &[(Poly, Poly, Poly)]) -> Result<AxiomReport> {
    let mut out = Vec::with_capacity(samples.len());
    for (index, (f, g, h)) in samples.iter().enumerate() {
        let mut failures = Vec::new();
        let mut record = |check: &'static str, residual: HSeries| {
            if !residual.is_zero() {
                failures.push(Residual { check, residual });
            }
        };
        let (ef, eg, eh) = (star.embed(f), star.embed(g), star.embed(h));
        let fg = star.star(&ef, &eg)?;

        let assoc = star.star(&fg, &eh)?.sub(&star.star(&ef, &star.star(&eg, &eh)?)?)?;
        record("associativity", assoc);

        let one = star.one();
        for ex in [&ef, &eg, &eh] {
            record("left unit", star.star(&one, ex)?.sub(ex)?);
            record("right unit", star.star(ex, &one)?.sub(ex)?);
        }

        let d0 = fg.sub(&star.embed(&(f * g)))?;
        record("f*g - fg in hbar", d0.truncate_to(0).truncate_to(star.order()));

        let gf = star.star(&eg, &ef)?;
        let bracket = star.embed(&star.poisson(f, g)?).shift(1);
        let d1 = fg.sub(&gf)?.sub(&bracket)?;
        record("f*g - g*f - hbar{f,g} in hbar^2", d1.truncate_to(1.min(star.order())).truncate_to(star.order()));

        // (*1): ħ-linearity and order locality under high-order perturbations
        record("hbar-linearity", star.star(&ef.shift(1), &eg)?.sub(&fg.shift(1))?);
        record("additivity", star.star(&ef.add(&eh)?, &eg)?.sub(&fg.add(&star.star(&eh, &eg)?)?)?);
        for j in 1..=star.order() {
            let perturbed = ef.add(&eh.shift(j))?;
            let left = star.star(&perturbed, &eg)?.sub(&fg)?;
            record("continuity (left)", left.truncate_to(j - 1).truncate_to(star.order()));
            let right = star.star(&eg, &perturbed)?.sub(&gf)?;
            record("continuity (right)", right.truncate_to(j - 1).truncate_to(star.order()));
        }
        out.push(SampleReport { index, failures });
    }
    Ok(AxiomReport { order: star.order(), samples: out })
}

/// One violation of the degree law `wdeg D_l(f,g) = wdeg f + wdeg g + k l`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityViolation {
    pub sample: usize,
    pub l: usize,
    pub expected_weight: i64,
    /// Weights actually present in `D_l(f, g)`.
    pub found_weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityReport {
    pub order: usize,
    pub checked: usize,
    pub violations: Vec<HomogeneityViolation>,
}

impl HomogeneityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies that every `D_l(f, g)`, `l ≤ N`, is `w`-homogeneous of weight
/// `wdeg f + wdeg g + k l`, i.e. that `ħ^l D_l(f, g)` has the weight of
/// `fg` when `ħ` has weight `-k`. Inputs must be `w`-homogeneous; pairs with
/// a zero member pass vacuously.
pub fn check_homogeneity(star: &StarProduct, pairs: &[(Poly, Poly)]) -> Result<HomogeneityReport> {
    let space = star.space();
    let mut violations = Vec::new();
    let mut checked = 0;
    for (sample, (f, g)) in pairs.iter().enumerate() {
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let wf =
            space.weighted_degree(f).ok_or_else(|| Error::NotHomogeneous(alloc::format!("sample {sample}: {f}")))?;
        let wg =
            space.weighted_degree(g).ok_or_else(|| Error::NotHomogeneous(alloc::format!("sample {sample}: {g}")))?;
        let terms = star.bidifferential_terms(f, g, star.order())?;
        for (l, d) in terms.iter().enumerate() {
            checked += 1;
            if d.is_zero() {
                continue;
            }
            let expected_weight = wf + wg + space.k() * l as i64;
            let found: Vec<i64> = space.grade_decompose(d).into_keys().collect();
            if found != [expected_weight] {
                violations.push(HomogeneityViolation { sample, l, expected_weight, found_weights: found });
            }
        }
    }
    Ok(HomogeneityReport { order: star.order(), checked, violations })
}
