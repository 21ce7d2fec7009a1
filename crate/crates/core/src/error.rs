use thiserror::Error;

/// Errors raised by the geometric and metric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({re}, {im}) is not in the upper half-plane")]
    InvalidPoint { re: f64, im: f64 },

    #[error("matrix is singular or has negative determinant (det = {det})")]
    SingularMatrix { det: f64 },

    #[error("ill-conditioned isometry: image left the upper half-plane")]
    IllConditioned,

    #[error("element is not hyperbolic (|trace| = {trace} <= 2)")]
    NonHyperbolic { trace: f64 },

    #[error("geodesic endpoints must be distinct")]
    DegenerateGeodesic,

    #[error("horocycle size must be positive, got {0}")]
    InvalidHorocycle(f64),

    #[error("geodesics {0} have no common perpendicular")]
    NoCommonPerpendicular(&'static str),

    #[error("no right-angled hexagon with sides ({0}, {1}, {2})")]
    NoHexagon(f64, f64, f64),

    #[error("invalid base length {0}: must be positive and finite")]
    InvalidBaseLength(f64),

    #[error("expansion factor must satisfy k >= 1, got {0}")]
    InvalidExpansionFactor(f64),

    #[error("point ({re}, {im}) lies outside the expansion domain")]
    OutsideDomain { re: f64, im: f64 },

    #[error("invalid trace coordinates ({u}, {v}, {w}): {reason}")]
    InvalidTraceCoords {
        u: f64,
        v: f64,
        w: f64,
        reason: &'static str,
    },

    #[error("slope ({0}, {1}) is not a primitive integer vector")]
    InvalidSlope(i64, i64),

    #[error("degenerate structure: slope trace {0} <= 2")]
    DegenerateStructure(f64),

    #[error("invalid Fenchel-Nielsen data: {0}")]
    InvalidFenchelNielsen(&'static str),

    #[error("hexagon parameter X must exceed 1, got {0}")]
    InvalidHexagonParameter(f64),

    #[error("the boundary is a cusp; orthogeodesic arcs have infinite length")]
    CuspBoundary,

    #[error(
        "boundary lengths differ ({0} vs {1}); metrics are only defined on a fixed-boundary slice"
    )]
    BoundaryMismatch(f64, f64),

    #[error("stretch envelope minimum {min} exceeds t + tol = {bound}; raise the depth")]
    InsufficientDepth { min: f64, bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse structure literal `{0}`")]
    ParseLiteral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
