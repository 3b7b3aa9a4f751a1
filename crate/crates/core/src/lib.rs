//! Empty-simplex degree machinery for finite point sets in `R^M`, the
//! cluster-counting functionals built on top of it, generalized covariograms
//! of convex bodies, and a seeded Monte Carlo experiment harness.
//!
//! The crate is organised in layers:
//!
//! * [`geom`] — robust low-level predicates (orientation, simplex volume,
//!   closed-simplex containment) and the core point-set types.
//! * [`bodies`] — convex bodies (ball, box, ellipsoid, H-polytope) with
//!   uniform sampling, membership, volumes, shadows and grid-cell counts.
//! * [`degree`] — emptiness of simplices, subset degrees, the set degree
//!   `deg(X)` (exact or as a certified local lower bound).
//! * [`functionals`] — the counting functionals `N_T` and `F_T^(k)`.
//! * [`covariogram`] — generalized covariograms, directional right
//!   derivatives at zero, directional variation and perimeter recovery.
//! * [`experiments`] — reproducible experiment drivers plus CSV output.

pub mod bodies;
pub mod covariogram;
pub mod degree;
pub mod error;
pub mod experiments;
pub mod functionals;
pub mod geom;
pub(crate) mod grid;

pub use bodies::{BodySpec, ConvexBody, Halfspace, Seed};
pub use covariogram::{CovariogramQuery, DirectionalProfile, McEstimate, McSettings, StepSchedule};
pub use degree::{DegreeEngine, DegreeMode, DegreeReport, SubsetDegree};
pub use error::Error;
pub use experiments::{ExperimentConfig, ResultRow};
pub use functionals::FunctionalValue;
pub use geom::{Orientation, Point, PointSet, SimplexTester, SimplexVertices};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
