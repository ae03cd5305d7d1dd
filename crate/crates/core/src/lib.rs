//! Numerical differential geometry at desk scale.
//!
//! Chart-level curvature, O'Neill tensors of Riemannian submersions, second
//! fundamental forms of Riemannian maps, and pointwise verification of
//! Chen-Ricci inequalities with equality-case detection.
//!
//! All numerical kernels are generic over [`scalar::Real`]; the aliases below
//! fix `f64`, which is what the bundled tolerances assume.

pub mod catalog;
pub mod chart;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod fd;
pub mod inequality;
pub mod linalg;
pub mod rng;
pub mod scalar;
pub mod spaceform;
pub mod rmap;
pub mod submersion;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` type aliases for the common surface.
pub type Expr64 = expr::Expression<f64>;
pub type Jet64 = expr::Jet2<f64>;
pub type Vec64 = linalg::Vector<f64>;
pub type Mat64 = linalg::Mat<f64>;
pub type Sym64 = linalg::SymMat<f64>;
pub type Frame64 = linalg::Frame<f64>;
