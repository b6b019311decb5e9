//! Numerical constructions around scaled rotated copies of a fixed
//! diagonal conductivity spectrum: rank-one connections, the seed curves
//! and their double connections, infinite-rank laminates, the attainable
//! region of eigenvalue triples, and the polycrystal transform layer.

pub mod attainable;
pub mod error;
pub mod laminate;
pub mod linalg;
pub mod polycrystal;
pub mod rank_one;
pub mod t2;

pub use error::{Error, Result};
pub use linalg::{
    CrystalSpectrum, EigenDecomposition, PlanePoint, Rotation3, Spectrum, SymMat3, UnitVector3,
};

/// Default certificate tolerance used by the CLI unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;
