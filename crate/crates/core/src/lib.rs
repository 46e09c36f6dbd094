//! Anisotropic Lp centroidal Voronoi tessellation.
//!
//! The energy being minimized over the generator positions `W` is
//!
//! ```text
//! F(W) = sum_i  integral over (cell_i ∩ domain) of  || M_x (x - w_i) ||_p^p  dx
//! ```
//!
//! with `p` even and `M_x` a unit-determinant factor of a user supplied
//! symmetric positive definite tensor field `G_x = M_xᵗ M_x`. Every restricted
//! Voronoi cell is cut into integration simplices (cones from the generator to
//! fan-triangulated facets in volume mode, triangles in surface mode) on which
//! the integral and its gradient have closed forms.
//!
//! Module map:
//!
//! - [`field`]: anisotropy tensors, their spectral factorization and lookup.
//! - [`quadrature`]: star-product algebra and exact simplex integration.
//! - [`gradient`]: closed-form derivatives of a simplex contribution.
//! - [`rvd`]: restricted Voronoi diagrams, vertex provenance and Jacobians.
//! - [`optimize`]: global energy/gradient assembly and the L-BFGS minimizer.
//! - [`io`]: text formats for domains, fields, seeds, traces and RVD export.
//! - [`oracles`], [`verify`]: independent verification machinery (feature
//!   `oracles`, on by default).

pub mod error;
pub mod field;
pub mod gradient;
pub mod io;
pub mod optimize;
pub mod quadrature;
pub mod rvd;
pub mod simplex;

#[cfg(feature = "oracles")]
pub mod oracles;
#[cfg(feature = "oracles")]
pub mod verify;

pub use error::{Error, Result};
pub use field::{AnisotropyTensor, FrameMatrix, TensorField};
pub use gradient::SimplexVertexGradient;
pub use optimize::{
    evaluate, optimize, Evaluation, GradientAccumulator, Method, OptimizerConfig, Termination,
    TraceRow,
};
pub use quadrature::{ExponentTuple, StarVector};
pub use rvd::{build_rvd, Domain, RestrictedCell, SeedSet, VertexProvenance};
pub use simplex::{IntegrationSimplex, SimplexDim};

/// Points and vectors in R³.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3×3 real matrices.
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Largest supported even exponent.
pub const MAX_P: u32 = 16;
