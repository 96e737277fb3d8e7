//! Invariants, Poisson centers and quantum centers of a Hamiltonian action,
//! degree by degree.
//!
//! Invariance is infinitesimal: `f` is invariant when `{H_i, f} = 0` for all
//! hamiltonians. Centrality is tested against every invariant basis element
//! up to a cutoff degree `Dtest`. Series are sliced by the grading with
//! `deg ħ = 2`, so a central series of degree `d` has coefficients
//! `f_m ∈ K[X]^G_{d-2m}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::envalg::HamiltonianAction;
use crate::polyring::{kernel_of_columns, Echelon, GradedSubspace, HSeries, Monomial, Poly, Scalar};
use crate::{Error, Result};

/// Every `f` of degree `≤ d` with `{H_i, f} = 0` for all `i`, one slice per
/// degree.
pub fn invariants_up_to(act: &HamiltonianAction, d: u32) -> Result<GradedSubspace> {
    let nvars = act.nvars();
    let mut out = GradedSubspace::new(nvars);
    for degree in 0..=d {
        let monomials = Monomial::all_of_degree(nvars, degree);
        let mut cols = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let f = Poly::term(m.clone(), Scalar::from_integer(1.into()));
            let mut col: BTreeMap<(usize, Monomial), Scalar> = BTreeMap::new();
            for (i, h) in act.hamiltonians().iter().enumerate() {
                for (mono, c) in act.star().poisson(h, &f)?.into_terms() {
                    col.insert((i, mono), c);
                }
            }
            cols.push(col);
        }
        let basis = kernel_of_columns(&cols)
            .into_iter()
            .map(|v| Poly::from_terms(nvars, monomials.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero())));
        out.set_slice(degree, basis)?;
    }
    Ok(out)
}

/// The subalgebra generated by homogeneous `gens`, up to degree `d`.
pub fn subalgebra_basis(nvars: usize, gens: &[Poly], d: u32) -> Result<GradedSubspace> {
    let mut graded = Vec::new();
    for g in gens {
        g.check_nvars(nvars)?;
        if g.is_zero() || g.is_constant() {
            continue;
        }
        let deg = g.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(alloc::format!("{g}")))?;
        graded.push((deg, g));
    }
    let mut slices: Vec<Vec<Poly>> = (0..=d).map(|_| Vec::new()).collect();
    slices[0].push(Poly::one(nvars));
    // products g^α, enumerated by extending with generators of index ≥ the last one used
    let mut stack: Vec<(Poly, u32, usize)> = alloc::vec![(Poly::one(nvars), 0, 0)];
    while let Some((p, deg, from)) = stack.pop() {
        for (j, (gd, g)) in graded.iter().enumerate().skip(from) {
            let nd = deg + gd;
            if nd > d {
                continue;
            }
            let q = &p * *g;
            slices[nd as usize].push(q.clone());
            stack.push((q, nd, j));
        }
    }
    let mut out = GradedSubspace::new(nvars);
    for (degree, polys) in slices.into_iter().enumerate() {
        out.set_slice(degree as u32, polys)?;
    }
    Ok(out)
}

/// The subalgebra generated by the pullbacks `μ*(z_j)` of the designated
/// invariant generators.
pub fn moment_image_basis(act: &HamiltonianAction, d: u32) -> Result<GradedSubspace> {
    let gens: Vec<Poly> = act.lie().invariant_generators().iter().map(|z| act.pullback(z)).collect::<Result<_>>()?;
    subalgebra_basis(act.nvars(), &gens, d)
}

/// Invariants of degree `≤ d` Poisson-commuting with every invariant of
/// degree `≤ dtest`.
pub fn poisson_center_up_to(act: &HamiltonianAction, d: u32, dtest: u32) -> Result<GradedSubspace> {
    CenterContext::new(act, d.max(dtest))?.poisson_center(d)
}

/// Central invariant series of degree `≤ d` (see [`QuantumCenter`]).
pub fn quantum_center_up_to(act: &HamiltonianAction, d: u32, dtest: u32) -> Result<QuantumCenter> {
    CenterContext::new(act, d.max(dtest))?.quantum_center(d)
}

pub fn compare_centers(act: &HamiltonianAction, d: u32, dtest: u32) -> Result<CenterReport> {
    CenterContext::new(act, d.max(dtest))?.compare(d)
}

/// One degree of the quantum center.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumSlice {
    pub degree: u32,
    /// Dimension of the space of central series of this degree.
    pub series_dim: usize,
    /// Dimension of its image under `ħ ↦ 0`: the rank over the truncated
    /// `ħ`-scalars.
    pub rank: usize,
    /// One central series per basis element of the image, in reduced
    /// echelon form with respect to the classical parts.
    pub lifts: Vec<HSeries>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCenter {
    pub order: usize,
    pub test_degree: u32,
    pub slices: Vec<QuantumSlice>,
}

impl QuantumCenter {
    pub fn slice(&self, degree: u32) -> Option<&QuantumSlice> {
        self.slices.iter().find(|s| s.degree == degree)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterRow {
    pub degree: u32,
    pub invariants_dim: usize,
    pub poisson_dim: usize,
    pub quantum_rank: usize,
    pub moment_image_dim: usize,
    pub poisson_basis: Vec<Poly>,
    pub quantum_lifts: Vec<HSeries>,
}

impl CenterRow {
    pub fn ranks_agree(&self) -> bool {
        self.poisson_dim == self.quantum_rank
    }
}

/// Degree-by-degree comparison of the Poisson center of the invariants with
/// the quantum center.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterReport {
    pub max_degree: u32,
    pub test_degree: u32,
    pub order: usize,
    pub rows: Vec<CenterRow>,
    /// Every classical part of a central series lies in the Poisson center.
    pub classical_parts_central: bool,
    /// The moment image lies in the Poisson center.
    pub moment_image_central: bool,
}

impl CenterReport {
    pub fn mismatched_degrees(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| !r.ranks_agree()).map(|r| r.degree).collect()
    }

    pub fn passed(&self) -> bool {
        self.mismatched_degrees().is_empty() && self.classical_parts_central && self.moment_image_central
    }
}

/// An action together with its invariants up to the test degree, shared by
/// every centrality computation.
#[derive(Clone, Debug)]
pub struct CenterContext<'a> {
    act: &'a HamiltonianAction,
    test_degree: u32,
    invariants: GradedSubspace,
}

impl<'a> CenterContext<'a> {
    pub fn new(act: &'a HamiltonianAction, test_degree: u32) -> Result<Self> {
        Ok(CenterContext { act, test_degree, invariants: invariants_up_to(act, test_degree)? })
    }

    pub fn action(&self) -> &HamiltonianAction {
        self.act
    }

    pub fn test_degree(&self) -> u32 {
        self.test_degree
    }

    pub fn invariants(&self) -> &GradedSubspace {
        &self.invariants
    }

    // constants commute with everything
    fn test_elements(&self) -> impl Iterator<Item = &Poly> {
        self.invariants.all().filter(|u| !u.is_constant())
    }

    pub fn poisson_center(&self, d: u32) -> Result<GradedSubspace> {
        let nvars = self.act.nvars();
        let mut out = GradedSubspace::new(nvars);
        for degree in 0..=d.min(self.test_degree) {
            let basis = self.invariants.basis(degree);
            let mut cols: Vec<BTreeMap<(usize, Monomial), Scalar>> = alloc::vec![BTreeMap::new(); basis.len()];
            for (k, u) in self.test_elements().enumerate() {
                for (col, b) in cols.iter_mut().zip(basis) {
                    for (m, c) in self.act.star().poisson(b, u)?.into_terms() {
                        col.insert((k, m), c);
                    }
                }
            }
            let slice = kernel_of_columns(&cols).into_iter().map(|v| combine_polys(nvars, basis, &v));
            out.set_slice(degree, slice)?;
        }
        Ok(out)
    }

    /// First failure of `[f, u]_★ ≡ 0` over the invariant basis, as
    /// `(index of u, lowest nonzero ħ-order)`.
    pub fn centrality_defect(&self, f: &HSeries) -> Result<Option<(usize, usize)>> {
        for (k, u) in self.test_elements().enumerate() {
            let c = self.act.star().commutator_with_poly(f, u)?;
            if let Some(order) = c.valuation() {
                return Ok(Some((k, order)));
            }
        }
        Ok(None)
    }

    pub fn quantum_center(&self, d: u32) -> Result<QuantumCenter> {
        let order = self.act.order();
        let slices = (0..=d.min(self.test_degree)).map(|deg| self.quantum_slice(deg)).collect::<Result<_>>()?;
        Ok(QuantumCenter { order, test_degree: self.test_degree, slices })
    }

    fn quantum_slice(&self, degree: u32) -> Result<QuantumSlice> {
        let nvars = self.act.nvars();
        let n = self.act.order();
        let star = self.act.star();
        // unknowns ħ^m b for b in the invariant basis of degree d - 2m; m = 0 first
        let mut unknowns: Vec<HSeries> = Vec::new();
        let mut classical_count = 0;
        for m in 0..=n {
            let Some(rest) = degree.checked_sub(2 * m as u32) else { break };
            for b in self.invariants.basis(rest) {
                unknowns.push(star.embed(b).shift(m));
                if m == 0 {
                    classical_count += 1;
                }
            }
        }
        let total = unknowns.len();
        // kernel vectors in unknown coordinates, restricted one test element at a time
        let mut kernel: Vec<Vec<Scalar>> = (0..total)
            .map(|j| (0..total).map(|i| if i == j { Scalar::from_integer(1.into()) } else { Scalar::zero() }).collect())
            .collect();
        let mut series: Vec<HSeries> = unknowns.clone();
        for u in self.test_elements() {
            if kernel.is_empty() {
                break;
            }
            let mut cols = Vec::with_capacity(series.len());
            for s in &series {
                let c = star.commutator_with_poly(s, u)?;
                let mut col: BTreeMap<(usize, Monomial), Scalar> = BTreeMap::new();
                for (m, coeff) in c.coeffs().iter().enumerate() {
                    for (mono, v) in coeff.terms() {
                        col.insert((m, mono.clone()), v.clone());
                    }
                }
                cols.push(col);
            }
            if cols.iter().all(BTreeMap::is_empty) {
                continue;
            }
            let restriction = kernel_of_columns(&cols);
            kernel = restriction.iter().map(|r| combine_vectors(&kernel, r, total)).collect();
            series = restriction.iter().map(|r| combine_series(star.zero(), &series, r)).collect::<Result<_>>()?;
        }
        let kernel = crate::polyring::rref_dense(kernel);
        let lifts: Vec<HSeries> = kernel
            .iter()
            .filter(|v| v[..classical_count].iter().any(|c| !c.is_zero()))
            .map(|v| combine_series(star.zero(), &unknowns, v))
            .collect::<Result<_>>()?;
        debug_assert!(lifts.iter().all(|s| s.nvars() == nvars));
        Ok(QuantumSlice { degree, series_dim: kernel.len(), rank: lifts.len(), lifts })
    }

    pub fn compare(&self, d: u32) -> Result<CenterReport> {
        let poisson = self.poisson_center(d)?;
        let quantum = self.quantum_center(d)?;
        let image = moment_image_basis(self.act, d)?;
        let mut rows = Vec::new();
        let mut classical_parts_central = true;
        for slice in &quantum.slices {
            let deg = slice.degree;
            let mut ech = Echelon::new();
            for s in &slice.lifts {
                let part = s.classical_part();
                classical_parts_central &= poisson.contains(part);
                ech.insert(crate::polyring::to_row(part));
            }
            classical_parts_central &= ech.rank() == slice.rank;
            rows.push(CenterRow {
                degree: deg,
                invariants_dim: self.invariants.dim(deg),
                poisson_dim: poisson.dim(deg),
                quantum_rank: slice.rank,
                moment_image_dim: image.dim(deg),
                poisson_basis: poisson.basis(deg).to_vec(),
                quantum_lifts: slice.lifts.clone(),
            });
        }
        Ok(CenterReport {
            max_degree: d,
            test_degree: self.test_degree,
            order: quantum.order,
            rows,
            classical_parts_central,
            moment_image_central: image.is_subspace_of(&poisson),
        })
    }
}

fn combine_polys(nvars: usize, basis: &[Poly], v: &[Scalar]) -> Poly {
    let mut out = Poly::zero(nvars);
    for (b, c) in basis.iter().zip(v) {
        if !c.is_zero() {
            out += &b.scale(c);
        }
    }
    out
}

fn combine_vectors(kernel: &[Vec<Scalar>], r: &[Scalar], len: usize) -> Vec<Scalar> {
    let mut out = alloc::vec![Scalar::zero(); len];
    for (k, c) in kernel.iter().zip(r) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(k) {
            *o += c * x;
        }
    }
    out
}

fn combine_series(zero: HSeries, series: &[HSeries], v: &[Scalar]) -> Result<HSeries> {
    let mut out = zero;
    for (s, c) in series.iter().zip(v) {
        if !c.is_zero() {
            out = out.add(&s.scale(c))?;
        }
    }
    Ok(out)
}
