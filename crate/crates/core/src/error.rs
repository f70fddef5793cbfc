use thiserror::Error;

/// Errors produced by the geometry, planning and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no path of curvature {kappa} fits: radius {radius} exceeds largest inscribed radius {max_radius}")]
    NoSuchPath {
        kappa: f64,
        radius: f64,
        max_radius: f64,
    },
    #[error("point lies inside a largest inscribed circle and has no critical arc")]
    NoCriticalArc,
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
