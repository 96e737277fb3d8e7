//! Exact computations with Moyal-Weyl deformation quantizations of
//! polynomial symplectic vector spaces carrying Hamiltonian actions of
//! reductive Lie algebras.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact rational
//! arithmetic; formal power series in `ħ` are truncated at a fixed order and
//! every identity is asserted with zero residual.
//!
//! Layout:
//!
//! * [`polyring`]: rationals, multivariate polynomials, truncated `ħ`-series,
//!   the symplectic coordinate space, exact linear algebra.
//! * [`starprod`]: the Moyal-Weyl product, Poisson bracket and executable
//!   checks of the star-product axioms.
//! * [`envalg`]: Lie algebra data, the homogeneous enveloping algebra
//!   `U_ħ(g)` in PBW normal form, Hamiltonian actions and the comoment map.
//! * [`invcenter`]: invariants, Poisson centers and quantum centers degree by
//!   degree.
//! * [`henselift`]: the order-by-order lift of integral central elements.
//! * [`weyl`]: specialization at `ħ = 1` into the Weyl algebra.
#![no_std]

extern crate alloc;

pub mod envalg;
mod error;
pub mod henselift;
pub mod invcenter;
pub mod polyring;
pub mod starprod;
pub mod weyl;

pub use error::{Error, Result};
pub use polyring::{int, rat, GradedSubspace, HSeries, Monomial, Poly, Scalar, SymplecticSpace};
pub use starprod::StarProduct;
