use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::{Error, Result};

type SparseRow<K> = BTreeMap<K, Scalar>;

/// Incrementally maintained reduced row-echelon form over sparse rows.
///
/// Columns are identified by an ordered key; the pivot of a row is always
/// its smallest (leftmost) key. Every stored row is normalized to pivot 1
/// and has zeros in every other pivot column, so the stored rows form the
/// unique reduced row-echelon basis of their span.
#[derive(Clone, Debug, Default)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseRow<K>>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseRow<K>> {
        self.rows.values()
    }

    /// Reduces `row` against the stored pivots.
    pub fn reduce(&self, mut row: SparseRow<K>) -> SparseRow<K> {
        let hits: Vec<(K, Scalar)> =
            row.iter().filter(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone())).collect();
        for (k, c) in hits {
            let pivot_row = &self.rows[&k];
            for (col, v) in pivot_row {
                let entry = row.entry(col.clone()).or_insert_with(Scalar::zero);
                *entry -= &c * v;
                if entry.is_zero() {
                    row.remove(col);
                }
            }
        }
        row
    }

    /// Inserts a row; returns `false` when it was already in the span.
    pub fn insert(&mut self, row: SparseRow<K>) -> bool {
        let mut row = self.reduce(row);
        row.retain(|_, c| !c.is_zero());
        let Some((pivot, lead)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for c in row.values_mut() {
                *c *= &inv;
            }
        }
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                for (col, v) in &row {
                    let entry = other.entry(col.clone()).or_insert_with(Scalar::zero);
                    *entry -= &c * v;
                    if entry.is_zero() {
                        other.remove(col);
                    }
                }
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, row: SparseRow<K>) -> bool {
        self.reduce(row).values().all(Zero::is_zero)
    }
}

/// Basis of `{x : Σ_j x_j col_j = 0}`, in reduced row-echelon form.
pub fn kernel_of_columns<K: Ord + Clone>(cols: &[BTreeMap<K, Scalar>]) -> Vec<Vec<Scalar>> {
    let ncols = cols.len();
    let mut rows: BTreeMap<K, SparseRow<usize>> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (k, c) in col {
            if !c.is_zero() {
                rows.entry(k.clone()).or_default().insert(j, c.clone());
            }
        }
    }
    let mut ech = Echelon::new();
    for row in rows.into_values() {
        ech.insert(row);
    }
    kernel_from_echelon(&ech, ncols)
}

fn kernel_from_echelon(ech: &Echelon<usize>, ncols: usize) -> Vec<Vec<Scalar>> {
    let pivots: Vec<usize> = ech.pivots().cloned().collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !ech.rows.contains_key(c)) {
        let mut v = alloc::vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for &p in &pivots {
            if let Some(c) = ech.rows[&p].get(&free) {
                v[p] = -c;
            }
        }
        basis.push(v);
    }
    rref_dense(basis)
}

/// Reduced row-echelon form of a list of dense vectors (zero rows dropped).
pub(crate) fn rref_dense(vectors: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let len = vectors.first().map_or(0, Vec::len);
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
    }
    ech.rows()
        .map(|row| {
            let mut v = alloc::vec![Scalar::zero(); len];
            for (j, c) in row {
                v[*j] = c.clone();
            }
            v
        })
        .collect()
}

/// Solution set of an affine linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    /// One solution of the inhomogeneous system, if it is consistent.
    pub particular: Option<Vec<Scalar>>,
    /// Reduced row-echelon basis of the homogeneous solution space; empty
    /// when the system is infeasible.
    pub kernel: Vec<Vec<Scalar>>,
    pub infeasible: bool,
}

/// Solves `constraints = 0`, each constraint a polynomial of degree at most
/// one in `unknowns` variables (the constant term is the inhomogeneous part).
pub fn solve_linear(constraints: &[Poly], unknowns: usize) -> Result<LinearSolution> {
    // Column `unknowns` holds the constant term; it sorts after every
    // unknown, so it becomes a pivot only for a contradictory row.
    let mut ech = Echelon::new();
    for (n, c) in constraints.iter().enumerate() {
        c.check_nvars(unknowns)?;
        let mut row = SparseRow::new();
        for (m, v) in c.terms() {
            match m.degree() {
                0 => {
                    row.insert(unknowns, v.clone());
                }
                1 => {
                    let j = m.exps().iter().position(|&e| e == 1).unwrap();
                    row.insert(j, v.clone());
                }
                _ => return Err(Error::InvalidSystem(format!("constraint {n} is not linear"))),
            }
        }
        ech.insert(row);
    }
    if ech.rows.contains_key(&unknowns) {
        return Ok(LinearSolution { particular: None, kernel: Vec::new(), infeasible: true });
    }
    let mut particular = alloc::vec![Scalar::zero(); unknowns];
    for (p, row) in &ech.rows {
        if let Some(c) = row.get(&unknowns) {
            particular[*p] = -c;
        }
    }
    let mut homogeneous = Echelon::new();
    for row in ech.rows.values() {
        homogeneous.insert(row.iter().filter(|(k, _)| **k < unknowns).map(|(k, v)| (*k, v.clone())).collect());
    }
    Ok(LinearSolution {
        particular: Some(particular),
        kernel: kernel_from_echelon(&homogeneous, unknowns),
        infeasible: false,
    })
}
