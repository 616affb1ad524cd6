//! Tube algebras of (graded) unitary fusion categories.
//!
//! Starting from fusion-category data (F-symbols, fusion rules, optional group
//! grading) the crate builds the tube algebra and the defect tube algebra as
//! explicit finite-dimensional C*-algebras, block-diagonalizes them, and
//! extracts the emergent anyon theory (modular S/T, quantum dimensions,
//! Verlinde fusion), the symmetry-defect theory (domain walls, permutation
//! action, projective 2-cocycles, G-crossed S/T), the gauged theory and the
//! symmetry-breaking condensation.
//!
//! Pipeline: [`category`] → [`tubes`] → [`spectra`] → [`modular`],
//! [`defects`] → [`gauging`] / [`condensation`].

pub mod algebra;
pub mod category;
pub mod condensation;
pub mod defects;
pub mod error;
pub mod fixtures;
pub mod gauging;
pub mod linalg;
pub mod modular;
pub mod par;
pub mod report;
pub mod spectra;
pub mod tubes;

pub use error::{Error, Result};

/// Default seed for all randomized steps.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
/// Default residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
