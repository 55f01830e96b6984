//! Spherical curves with geodesic curvature constrained to an open band.
//!
//! The library builds C¹ regular curves on the unit sphere from a pair of
//! unconstrained control functions: a diffeomorphism sends the controls to a
//! strictly positive speed and a curvature strictly inside a prescribed band
//! (κ₁, κ₂), and the Frenet frame of the curve is integrated exactly on
//! SO(3). On top of that sit curvature analysis (discrete profiles and
//! tangent-circle upper/lower curvature bounds), four curve metrics (sup
//! surface/chordal distance, with and without tangent terms), and a seeded
//! verification suite exercising the geometric guarantees:
//!
//! - confinement of in-band curves between their tangent circles,
//! - equivalence of the curvature-band and tangent-circle membership tests,
//! - length convergence along uniformly convergent in-band sequences,
//! - agreement of position and tangent-bundle convergence,
//! - exactness of the controls → curve → controls round trip.
//!
//! See the `arcband-cli` crate for the command-line surface and file formats.

pub mod controls;
pub mod curvature;
pub mod curve;
pub mod error;
pub mod files;
pub mod fixtures;
pub mod integrator;
pub mod metrics;
pub mod so3;
pub mod verify;

pub use controls::{ControlPair, CurvatureBand, SpeedCoordinate};
pub use curvature::{BandReport, CurvatureProfile, ExtendedCurvature, Side};
pub use curve::{Param, SphericalCurve};
pub use error::{Error, Result};
pub use integrator::FrenetPath;
pub use metrics::{MetricKind, MetricValue};
pub use so3::{Rotation, SkewGenerator};
pub use verify::{SuiteConfig, SuiteReport, TrialReport};
