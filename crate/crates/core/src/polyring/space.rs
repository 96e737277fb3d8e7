use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::linalg::Echelon;
use super::poly::Poly;
use super::scalar::{int, Scalar};
use crate::{Error, Result};

/// A symplectic vector space of dimension `2n` with coordinates
/// `q_1..q_n, p_1..p_n` (variable indices `0..n` and `n..2n`), a constant
/// nondegenerate Poisson bivector and a `K^×`-weight grading.
///
/// Variables carry the integer weights `w`; `ħ` carries weight `-k`. With the
/// defaults (`w = -1` everywhere, `k = 2`) the Moyal product is homogeneous
/// and the weight of a monomial is minus its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    n: usize,
    poisson: Vec<Vec<Scalar>>,
    weights: Vec<i64>,
    hbar_weight_k: i64,
    // nonzero (i, j, P^{ij})
    entries: Vec<(usize, usize, Scalar)>,
}

impl SymplecticSpace {
    /// The standard form `P^{q_i p_i} = 1`, default weights.
    pub fn standard(n: usize) -> Self {
        let dim = 2 * n;
        let mut poisson = alloc::vec![alloc::vec![Scalar::zero(); dim]; dim];
        for i in 0..n {
            poisson[i][n + i] = Scalar::one();
            poisson[n + i][i] = -Scalar::one();
        }
        SymplecticSpace::new(n, poisson, alloc::vec![-1; dim], 2).expect("standard form is valid")
    }

    #[allow(clippy::needless_range_loop)]
    pub fn new(n: usize, poisson: Vec<Vec<Scalar>>, weights: Vec<i64>, k: i64) -> Result<Self> {
        let dim = 2 * n;
        if poisson.len() != dim || poisson.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidSpace(format!("Poisson bivector must be {dim}x{dim}")));
        }
        if weights.len() != dim {
            return Err(Error::InvalidSpace(format!("expected {dim} weights, found {}", weights.len())));
        }
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if poisson[i][j] != -&poisson[j][i] {
                    return Err(Error::InvalidSpace(format!("bivector not antisymmetric at ({i}, {j})")));
                }
                if !poisson[i][j].is_zero() {
                    entries.push((i, j, poisson[i][j].clone()));
                }
            }
        }
        let mut ech = Echelon::new();
        for row in &poisson {
            ech.insert(row.iter().cloned().enumerate().collect::<BTreeMap<_, _>>());
        }
        if ech.rank() != dim {
            return Err(Error::InvalidSpace(String::from("bivector is degenerate")));
        }
        Ok(SymplecticSpace { n, poisson, weights, hbar_weight_k: k, entries })
    }

    pub fn with_weights(&self, weights: Vec<i64>, k: i64) -> Result<Self> {
        SymplecticSpace::new(self.n, self.poisson.clone(), weights, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        2 * self.n
    }

    pub fn poisson_matrix(&self) -> &[Vec<Scalar>] {
        &self.poisson
    }

    pub(crate) fn bivector_entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// The homogeneity weight `k` (`t.ħ = t^k ħ`).
    pub fn k(&self) -> i64 {
        self.hbar_weight_k
    }

    /// `q_{i+1}` as a polynomial.
    pub fn q(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i)
    }

    /// `p_{i+1}` as a polynomial.
    pub fn p(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), self.n + i)
    }

    pub fn var_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("q{i}")).chain((1..=self.n).map(|i| format!("p{i}"))).collect()
    }

    /// `{f, g} = Σ P^{ij} ∂_i f ∂_j g`.
    pub fn poisson(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        f.check_nvars(self.nvars())?;
        g.check_nvars(self.nvars())?;
        let df: Vec<Poly> = (0..self.nvars()).map(|i| f.partial_derivative(i)).collect::<Result<_>>()?;
        let dg: Vec<Poly> = (0..self.nvars()).map(|i| g.partial_derivative(i)).collect::<Result<_>>()?;
        let mut out = Poly::zero(self.nvars());
        for (i, j, c) in &self.entries {
            if df[*i].is_zero() || dg[*j].is_zero() {
                continue;
            }
            out += &(&df[*i] * &dg[*j]).scale(c);
        }
        Ok(out)
    }

    /// Weight of `f` when it is `w`-homogeneous; `None` for mixed weights
    /// or the zero polynomial.
    pub fn weighted_degree(&self, f: &Poly) -> Option<i64> {
        let mut it = f.terms().map(|(m, _)| m.weight(&self.weights));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Splits `f` into `w`-homogeneous components keyed by weight.
    pub fn grade_decompose(&self, f: &Poly) -> BTreeMap<i64, Poly> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in f.terms() {
            out.entry(m.weight(&self.weights)).or_insert_with(|| Poly::zero(f.nvars())).add_term(m.clone(), c.clone());
        }
        out
    }

    /// `K^×`-weight of a series `Σ f_m ħ^m` whose every term
    /// `f_m ħ^m` has the same weight `wdeg(f_m) - k m`.
    pub fn series_weight(&self, f: &super::HSeries) -> Option<i64> {
        let mut weight = None;
        for (m, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = self.weighted_degree(c)? - self.hbar_weight_k * m as i64;
            match weight {
                None => weight = Some(w),
                Some(prev) if prev != w => return None,
                _ => {}
            }
        }
        weight
    }

    /// A deterministic point with pairwise distinct nonzero coordinates,
    /// used for rank certificates.
    pub fn sample_point(&self, shift: i64) -> Vec<Scalar> {
        (0..self.nvars()).map(|i| int(2 * i as i64 + 3 + shift)).collect()
    }
}
