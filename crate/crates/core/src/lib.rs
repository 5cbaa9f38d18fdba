//! Ideal compressible MHD on quarter- and half-space boxes with perfectly
//! conducting walls: symmetric quasilinear assembly, structure verification
//! suites, compatibility checks for initial data, parity extension across
//! the x3 wall, and a method-of-lines integrator whose wall handling is
//! mirror-equivariant to the bit.
//!
//! The numerics are generic over the scalar type through [`scalar::Scalar`]
//! (`f32`, `f64`, and the forward-mode [`dual::Dual`]); the binaries and the
//! file formats use [`Real`].

pub mod scalar;
pub mod dual;
pub mod error;
pub mod state;
pub mod mat8;
pub mod eos;
pub mod system;
pub mod subspace;
pub mod verify;
pub mod grid;
pub mod field;
pub mod stencil;
pub mod reflection;
pub mod bc;
pub mod reduce;
pub mod diagnostics;
pub mod solver;
pub mod compat;
pub mod datum;
pub mod snapshot;
pub mod config;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete scalar used by the command line tools and the snapshot format.
pub type Real = f64;
pub type RealState = state::State<Real>;
pub type RealMatrixSet = system::MatrixSet<Real>;
