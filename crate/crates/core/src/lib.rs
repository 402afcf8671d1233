//! Eccentric pie charts and constrained pie cutting.
//!
//! Sectors of prescribed area share an apex that need not be the circle's
//! center. Chart layouts are solved one ray at a time with the closed-form
//! sector area; the regular 3-blade pie cut is solved either directly on the
//! exact geometry or by approximating `arccos` with a Taylor polynomial,
//! solving the polynomial system by homotopy continuation, filtering the
//! false roots introduced by squaring, and polishing the survivors with
//! Newton's method on the exact equations.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

mod error;
mod linalg;
mod scalar;

pub mod charts;
pub mod geometry;
pub mod polysys;
pub mod solvers;
pub mod taylor;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use geometry::Orientation;

pub type Point = geometry::Point2<f64>;
pub type Sector = geometry::EccentricSector<f64>;
pub type Taylor = taylor::UniPoly<f64>;
pub type Poly = polysys::MultiPoly<f64>;
pub type System = polysys::PolySystem<f64>;
pub type Model = polysys::ExactModel<f64>;
pub type Chart = charts::ChartSpec<f64>;
pub type Layout = charts::ChartLayout<f64>;
pub type Roots = solvers::RootSet<f64>;
pub type Path = solvers::PathResult<f64>;
pub type CutSolution = solvers::PieCutSolution<f64>;
