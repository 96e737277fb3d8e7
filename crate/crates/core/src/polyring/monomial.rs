use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Exponent vector over a fixed list of variables.
///
/// Ordering is graded lexicographic with the variables ascending in index
/// order (`q_1 < … < q_n < p_1 < … < p_n` for symplectic coordinates): first
/// total degree, then the exponent of the highest-index variable decides.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { degree, exps: exps.into_boxed_slice() }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(alloc::vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = alloc::vec![0; nvars];
        exps[index] = 1;
        Monomial::new(exps)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.nvars());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial::new(exps))
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial::new(self.exps.iter().map(|a| a * e).collect())
    }

    /// Sum of `weights[i] * exps[i]`.
    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.exps.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    /// All exponent vectors of total degree `degree` in `nvars` variables, in
    /// ascending canonical order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial::new(Vec::new()));
            }
            return out;
        }
        let mut exps = alloc::vec![0u32; nvars];
        fill(&mut exps, 0, degree, &mut out);
        out.sort();
        out
    }
}

fn fill(exps: &mut [u32], index: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if index + 1 == exps.len() {
        exps[index] = remaining;
        out.push(Monomial::new(exps.to_vec()));
        return;
    }
    for e in 0..=remaining {
        exps[index] = e;
        fill(exps, index + 1, remaining - e, out);
    }
    exps[index] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
