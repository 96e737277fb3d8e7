//! Exact-rational polynomial arithmetic in symplectic coordinates, truncated
//! `ħ`-series, gradings and linear algebra over the rationals.

mod graded;
mod linalg;
mod monomial;
mod poly;
mod scalar;
mod series;
mod space;

pub use graded::GradedSubspace;
pub use linalg::{kernel_of_columns, solve_linear, Echelon, LinearSolution};
pub use monomial::Monomial;
pub use poly::{poly_arith, ArithOp, Division, Poly, PolyDisplay};
pub use scalar::{factorial, falling_factorial, int, rat, Scalar};
pub use series::HSeries;
pub use space::SymplecticSpace;

pub(crate) use graded::to_row;
pub(crate) use linalg::rref_dense;
