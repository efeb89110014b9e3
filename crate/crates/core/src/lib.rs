//! Geodesic ball packings of H2xR generated by screw motion groups.
//!
//! The crate covers the hyperbolic plane kernel, the product geometry, the
//! admissible translation classes, the screw groups themselves and the
//! optimizer that finds the densest ball packing per group.

// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod frobenius;
pub mod h2xr_geometry;
pub mod hyperbolic_plane;
pub mod numeric;
pub mod packing_optimizer;
pub mod quadrature;
pub mod reference;
pub mod screw_group;

pub use error::{Error, Result};
pub use frobenius::{KernelSite, TranslationClass};
pub use h2xr_geometry::{GeodesicShot, H2xRPoint};
pub use hyperbolic_plane::{H2Isometry, H2Point, TriangleGeometry};
pub use packing_optimizer::{Mode, PackingSolution, SolverOptions, SweepReport};
pub use screw_group::{GroupContext, ScrewElement, Word};
