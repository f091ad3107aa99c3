//! Generalized resolvents of linear operator pencils A(z) = A0 + A1 z on an
//! annulus: chain spaces, spectral projections, Laurent coefficients and an
//! independent contour-quadrature check.

pub mod chains;
pub mod error;
pub mod linalg;
pub mod pencil;
pub mod projections;
pub mod resolvent;
pub mod zoo;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Subspace, Tolerances, C64};
pub use pencil::{Annulus, BasicSolution, OperatorPencil};
