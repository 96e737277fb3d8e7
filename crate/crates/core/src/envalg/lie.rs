use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::polyring::{int, Poly, Scalar};
use crate::{Error, Result};

/// A finite-dimensional Lie algebra given by structure constants
/// `[ξ_i, ξ_j] = Σ_k c_{ij}^k ξ_k`, together with designated generators of
/// the invariant subalgebra `S(g)^g`, written as polynomials in the basis
/// `ξ_1..ξ_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    labels: Vec<String>,
    // brackets[i][j] = [ξ_i, ξ_j] as sparse coordinates
    brackets: Vec<Vec<BTreeMap<usize, Scalar>>>,
    invariant_generators: Vec<Poly>,
}

/// One listed bracket `[ξ_left, ξ_right] = Σ c_k ξ_k`.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub left: usize,
    pub right: usize,
    pub value: Vec<(usize, Scalar)>,
}

impl LieAlgebraData {
    /// Builds the algebra from a list of brackets. Each unordered pair may
    /// be listed in either order; a pair listed both ways must agree up to
    /// sign. Unlisted brackets are zero. Antisymmetry, the Jacobi identity
    /// and invariance of the designated generators are validated.
    pub fn from_brackets(labels: Vec<String>, brackets: &[Bracket], invariant_generators: Vec<Poly>) -> Result<Self> {
        let d = labels.len();
        let mut table: Vec<Vec<Option<BTreeMap<usize, Scalar>>>> = alloc::vec![alloc::vec![None; d]; d];
        for b in brackets {
            for &idx in [b.left, b.right].iter().chain(b.value.iter().map(|(k, _)| k)) {
                if idx >= d {
                    return Err(Error::IndexOutOfRange { index: idx, nvars: d });
                }
            }
            let mut v = BTreeMap::new();
            for (k, c) in &b.value {
                let e = v.entry(*k).or_insert_with(Scalar::zero);
                *e += c;
            }
            v.retain(|_, c: &mut Scalar| !c.is_zero());
            if table[b.left][b.right].is_some() {
                return Err(Error::InvalidLieAlgebra(format!("bracket ({}, {}) listed twice", b.left, b.right)));
            }
            table[b.left][b.right] = Some(v);
        }
        let mut full = alloc::vec![alloc::vec![BTreeMap::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                match (&table[i][j], &table[j][i]) {
                    (Some(a), Some(b)) => {
                        if *a != negate(b) {
                            return Err(Error::NotAntisymmetric { i, j });
                        }
                        full[i][j] = a.clone();
                    }
                    (Some(a), None) => full[i][j] = a.clone(),
                    (None, Some(b)) => full[i][j] = negate(b),
                    (None, None) => {}
                }
            }
        }
        Self::from_table(labels, full, invariant_generators)
    }

    /// Builds the algebra from the full bracket table `table[i][j] = [ξ_i, ξ_j]`.
    #[allow(clippy::needless_range_loop)]
    pub fn from_table(
        labels: Vec<String>,
        table: Vec<Vec<BTreeMap<usize, Scalar>>>,
        invariant_generators: Vec<Poly>,
    ) -> Result<Self> {
        let d = labels.len();
        if table.len() != d || table.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidLieAlgebra(format!("bracket table must be {d}x{d}")));
        }
        for i in 0..d {
            for j in 0..d {
                if table[i][j] != negate(&table[j][i]) {
                    return Err(Error::NotAntisymmetric { i, j });
                }
            }
        }
        let lie = LieAlgebraData { labels, brackets: table, invariant_generators };
        lie.check_jacobi()?;
        for (index, z) in lie.invariant_generators.iter().enumerate() {
            z.check_nvars(d)?;
            if let Some(basis) = (0..d).find(|&i| !lie.adjoint_derivation(i, z).is_zero()) {
                return Err(Error::GeneratorNotInvariant { index, basis });
            }
        }
        Ok(lie)
    }

    /// Abelian algebra of dimension `d`; `S(g)^g = S(g)` is generated by the
    /// coordinates.
    pub fn abelian(d: usize) -> Self {
        let labels = (1..=d).map(|i| format!("x{i}")).collect();
        let generators = (0..d).map(|i| Poly::var(d, i)).collect();
        LieAlgebraData::from_table(labels, alloc::vec![alloc::vec![BTreeMap::new(); d]; d], generators)
            .expect("abelian algebra is valid")
    }

    /// `sl_2` in the basis `e < h < f` with `[e,f] = h`, `[h,e] = 2e`,
    /// `[h,f] = -2f`; `S(g)^g` is generated by the Casimir `h² + 4ef`.
    pub fn sl2() -> Self {
        let labels = ["e", "h", "f"].iter().map(|s| s.to_string()).collect();
        let brackets = [
            Bracket { left: 0, right: 2, value: alloc::vec![(1, int(1))] },
            Bracket { left: 1, right: 0, value: alloc::vec![(0, int(2))] },
            Bracket { left: 1, right: 2, value: alloc::vec![(2, int(-2))] },
        ];
        let e = Poly::var(3, 0);
        let h = Poly::var(3, 1);
        let f = Poly::var(3, 2);
        let casimir = &h.pow(2) + &(&e * &f).scale(&int(4));
        LieAlgebraData::from_brackets(labels, &brackets, alloc::vec![casimir]).expect("sl2 is valid")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn invariant_generators(&self) -> &[Poly] {
        &self.invariant_generators
    }

    /// `[ξ_i, ξ_j]` in coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> &BTreeMap<usize, Scalar> {
        &self.brackets[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.brackets[i][j].get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    fn bracket_vectors(&self, x: &BTreeMap<usize, Scalar>, y: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in &self.brackets[*i][*j] {
                    let e = out.entry(*k).or_insert_with(Scalar::zero);
                    *e += a * b * c;
                }
            }
        }
        out.retain(|_, c: &mut Scalar| !c.is_zero());
        out
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim();
        let unit = |i: usize| -> BTreeMap<usize, Scalar> { [(i, int(1))].into_iter().collect() };
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    let mut total = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_vectors(&unit(a), &unit(b));
                        for (idx, v) in self.bracket_vectors(&inner, &unit(c)) {
                            let e = total.entry(idx).or_insert_with(Scalar::zero);
                            *e += v;
                        }
                    }
                    if total.values().any(|v: &Scalar| !v.is_zero()) {
                        return Err(Error::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The derivation `ad ξ_i` of `S(g)`, applied to `z`.
    pub fn adjoint_derivation(&self, i: usize, z: &Poly) -> Poly {
        let d = self.dim();
        let mut out = Poly::zero(d);
        for j in 0..d {
            let image = &self.brackets[i][j];
            if image.is_empty() {
                continue;
            }
            let dz = z.partial_derivative(j).expect("index in range");
            if dz.is_zero() {
                continue;
            }
            let lin = Poly::from_terms(d, image.iter().map(|(k, c)| (crate::Monomial::var(d, *k), c.clone())));
            out += &(&dz * &lin);
        }
        out
    }

    /// Whether `z ∈ S(g)^g`.
    pub fn is_invariant(&self, z: &Poly) -> bool {
        z.nvars() == self.dim() && (0..self.dim()).all(|i| self.adjoint_derivation(i, z).is_zero())
    }
}

fn negate(v: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
    v.iter().map(|(k, c)| (*k, -c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_brackets() {
        let g = LieAlgebraData::sl2();
        assert_eq!(g.structure_constant(0, 2, 1), int(1));
        assert_eq!(g.structure_constant(2, 0, 1), int(-1));
        assert_eq!(g.structure_constant(0, 1, 0), int(-2));
        assert!(g.is_invariant(&g.invariant_generators()[0]));
        assert!(!g.is_invariant(&Poly::var(3, 0)));
    }

    #[test]
    fn broken_jacobi_is_rejected() {
        // [x,y] = x, [x,z] = y: the Jacobi sum on (x, y, z) is y
        let labels = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let brackets = [
            Bracket { left: 0, right: 1, value: alloc::vec![(0, int(1))] },
            Bracket { left: 0, right: 2, value: alloc::vec![(1, int(1))] },
        ];
        let err = LieAlgebraData::from_brackets(labels, &brackets, alloc::vec![]).unwrap_err();
        assert_eq!(err, Error::Jacobi { i: 0, j: 1, k: 2 });
    }

    #[test]
    fn inconsistent_antisymmetry_is_rejected() {
        let labels = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let brackets = [
            Bracket { left: 0, right: 1, value: alloc::vec![(0, int(1))] },
            Bracket { left: 1, right: 0, value: alloc::vec![(0, int(1))] },
        ];
        assert_eq!(
            LieAlgebraData::from_brackets(labels, &brackets, alloc::vec![]).unwrap_err(),
            Error::NotAntisymmetric { i: 0, j: 1 }
        );
    }

    #[test]
    fn non_invariant_generator_is_rejected() {
        let g = LieAlgebraData::sl2();
        let labels = g.labels().to_vec();
        let err = LieAlgebraData::from_table(labels, g.brackets.clone(), alloc::vec![Poly::var(3, 1)]).unwrap_err();
        assert!(matches!(err, Error::GeneratorNotInvariant { index: 0, .. }));
    }
}
