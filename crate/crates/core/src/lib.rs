//! Newtonian potentials of planar source terms, their symmetric kernels,
//! and numerical probes of Hessian blow-up at the origin.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod borderline1d;
pub mod counterexamples;
pub mod error;
pub mod geom2d;
pub mod jet;
pub mod kernels;
pub mod potential;
pub mod sectors;
pub mod verify;
pub mod quadrature;

pub use error::{Error, Result};
pub use geom2d::{Point2, Rotation, Sector, SectorUnion, Sym2};
pub use kernels::KernelConvention;
pub use quadrature::{QuadratureConfig, Region};
pub use potential::{BlowupReport, Field2D, GrowthModel, ProbeQuantity};
