//! Numerical toolkit for Thurston's asymmetric metrics on the one-holed torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`hyp2`]: upper half-plane primitives (points, isometries, geodesics,
//!   horocycles, right-angled hexagons).
//! * [`saccheri`]: ideal Saccheri quadrilaterals, their partial horocyclic
//!   foliations and the k-expansion map.
//! * [`torus`]: marked one-holed tori in trace coordinates, slopes, curve and
//!   arc lengths, Fenchel–Nielsen and doubled-hexagon constructors.
//! * [`metrics`]: the curve metric `K`, the arc metric `A`, stretch families
//!   and their envelopes.
//! * [`parallel`]: worker-count control with deterministic reductions.

pub mod error;
pub mod hyp2;
pub mod metrics;
pub mod parallel;
pub mod saccheri;
pub mod torus;

pub use error::{Error, Result};
pub use hyp2::{BoundaryPoint, Geodesic, Horocycle, HyperbolicPoint, Isometry, Sl2};
pub use metrics::{EnvelopeSlice, GeodesicReport, MetricResult, Side, Spectrum, StretchFamily};
pub use saccheri::{ExpansionMap, FoliationCase, IdealSaccheriQuad, PartialFoliation};
pub use torus::{FNCoords, Slope, StructureLiteral, TraceCoords};

/// `2 arcsinh(1)`: the base length separating the three foliation cases.
pub const CRITICAL_BASE: f64 = 1.762_747_174_039_086;

/// `4 arcsinh(1)`: boundary length up to which the curve and arc metrics agree.
pub const EQUALITY_BOUNDARY: f64 = 2.0 * CRITICAL_BASE;
