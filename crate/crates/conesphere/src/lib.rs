//! Building hyperbolic cone spheres out of three-cornered pieces.
//!
//! A samosa is a hyperbolic sphere with three conical singularities. Slitting
//! samosas open and cross-gluing the slits chains them into cone spheres
//! whose holonomy is under full numerical control. This crate implements the
//! whole pipeline:
//!
//! - [`trig`], [`hyp`]: hyperbolic trigonometry and upper half-plane
//!   geometry;
//! - [`barycentric`]: point-mass combinations and barycentric coordinates;
//! - [`chains`]: triangle chains and their action-angle coordinates;
//! - [`assembly`]: the samosa-assembly data model and its validity
//!   conditions;
//! - [`realize`]: intrinsic parameters of an assembled cone sphere, their
//!   inversion, and edge-length coordinate vectors;
//! - [`dtrep`]: totally elliptic representation tuples, the pants-curve
//!   game, generator standardization, untwisting, and synthesis of an
//!   assembly with prescribed holonomy;
//! - [`net`]: unfolding an assembly into a planar net and SVG output;
//! - [`io`]: JSON formats for assemblies, representations, intrinsics and
//!   edge vectors.
//!
//! The command line lives in the `conesphere` binary; `conesphere selftest`
//! runs the seeded property suite from [`selftest`].

pub mod assembly;
pub mod barycentric;
pub mod chains;
pub mod dtrep;
pub mod hyp;
pub mod io;
pub mod net;
pub mod oracle;
pub mod realize;
pub mod sampling;
pub mod selftest;
pub mod trig;

// Re-exports are added as modules land.


pub use hyp::{HPoint, HTriangle, Isometry};

