use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sides ({a}, {b}, {c}) do not form a non-degenerate triangle")]
    DegenerateTriangle { a: f64, b: f64, c: f64 },
    #[error("length must be non-negative and finite, got {0}")]
    NegativeLength(f64),
    #[error("ellipse axes out of order: minor axis {h} exceeds major axis {g}")]
    AxisOrder { g: f64, h: f64 },
    #[error("polygon input is empty")]
    EmptyInput,
    #[error("polygon needs at least two distinct vertices")]
    TooFewVertices,
    #[error("polygon vertex {index} is not in convex position")]
    NotConvex { index: usize },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("body does not fit the lattice cell at every orientation (margin {margin:e})")]
    BodyTooLarge { margin: f64 },
    #[error("adaptive quadrature exhausted {panels} panels with error {error:e} > {tol:e}")]
    QuadratureFailure { panels: usize, error: f64, tol: f64 },
    #[error("intersection search did not converge after {iterations} iterations")]
    NonConvergence { iterations: u32 },
    #[error("needle length {ell} exceeds the admissible {max} for this lattice")]
    NeedleTooLong { ell: f64, max: f64 },
    #[error("closed form requires an acute or right lattice")]
    ObtuseLatticeUnsupported,
    #[error("lattice angles do not match the requested closed form: {0}")]
    LatticeClass(&'static str),
    #[error("body is not centrally symmetric about its reference point")]
    NotCentrallySymmetric,
    #[error("throw {index} hit {hits} triangles although the body fits a cell")]
    HitBound { index: u64, hits: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
