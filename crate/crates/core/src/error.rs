use alloc::string::String;

use crate::polyring::Poly;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("invalid symplectic space: {0}")]
    InvalidSpace(String),

    #[error("input is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("invalid linear system: {0}")]
    InvalidSystem(String),

    #[error("structure constants are not antisymmetric at ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },

    #[error("Jacobi identity fails on the triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },

    #[error("invariant generator {index} is not annihilated by ad of basis element {basis}")]
    GeneratorNotInvariant { index: usize, basis: usize },

    #[error("invalid Lie algebra data: {0}")]
    InvalidLieAlgebra(String),

    #[error("hamiltonians are not equivariant: {{H_{i}, H_{j}}} differs from H_[{i},{j}]")]
    NotEquivariant { i: usize, j: usize },

    #[error("quantum hamiltonian {index} does not reduce to its classical hamiltonian mod hbar")]
    ClassicalPartMismatch { index: usize },

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("element is not invariant: {0}")]
    NotInvariant(String),

    #[error("invalid monic relation: {0}")]
    InvalidRelation(String),

    #[error("derivative of the relation vanishes at the root")]
    NonSimpleRoot,

    #[error("lift obstructed at hbar order {order}: defect not divisible by dP/dt(f), remainder {remainder}")]
    LiftObstruction { order: usize, remainder: Poly },

    #[error("relation {index} violated at hbar order {order}")]
    RelationViolation { index: usize, order: usize },

    #[error("series is not K^x-finite (more than one weight component)")]
    NotFinite,
}
