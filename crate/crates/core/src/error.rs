use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::Point;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "malformed rational literal {text:?} (expected an integer, num/den with den > 0, or a decimal)"
)]
pub struct ParseRationalError {
    pub text: String,
}

impl ParseRationalError {
    pub(crate) fn new(text: &str) -> Self {
        Self {
            text: text.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    ParseRational(#[from] ParseRationalError),

    #[error("no radial line for the origin")]
    OriginHasNoRadialLine,

    #[error("coincidence predicate requires nonzero targets and non-origin points")]
    CoincidenceHypotheses,

    #[error("A/B decomposition requires nonzero targets and a point set without the origin")]
    DecompositionHypotheses,

    #[error("duplicate point {point} at index {index}")]
    DuplicatePoint { index: usize, point: Box<Point> },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("line {line}: {message}")]
    PointsFile { line: u64, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("energy diverges: points {first} and {second} coincide")]
    EnergyDiverges { first: usize, second: usize },

    #[error(
        "separation precondition violated: points {first} and {second} have squared distance {sq_distance} < {required}"
    )]
    SeparationViolated {
        first: usize,
        second: usize,
        sq_distance: Box<Rational>,
        required: Box<Rational>,
    },

    #[error("points must lie in the unit square; point {index} does not")]
    OutsideUnitSquare { index: usize },

    #[error("insufficient data: need at least 3 rows with a positive count, got {0}")]
    InsufficientData(usize),

    #[error("bound violated: {0}")]
    BoundViolation(String),
}

impl Error {
    /// Errors that signal a failed proof-derived bound rather than bad input.
    pub fn is_bound_violation(&self) -> bool {
        matches!(self, Error::BoundViolation(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
