use thiserror::Error;

/// Errors raised by the correspondence, bundle and motion routines.
///
/// Values are carried as `f64` regardless of the scalar type used for the
/// computation so the error type stays non-generic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("branch point: {what} at ({re}, {im})")]
    BranchPoint { what: &'static str, re: f64, im: f64 },

    #[error("overflow: |z|^(p/q) is not finite for |z| = {modulus}")]
    Overflow { modulus: f64 },

    #[error("({z_re}, {z_im}) -> ({w_re}, {w_im}) does not satisfy the correspondence (residual {residual:e})")]
    InvalidPair {
        z_re: f64,
        z_im: f64,
        w_re: f64,
        w_im: f64,
        residual: f64,
    },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("Newton iteration did not converge after {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("orbit collapsed onto the branch point at step {step} (|z| = {modulus:e})")]
    BranchCollapse { step: usize, modulus: f64 },

    #[error("continuation stuck at c = ({re}, {im}): step underflow")]
    ContinuationStuck { re: f64, im: f64 },

    #[error("annulus bounds are not valid for |c| = {modulus}")]
    InvalidAnnulus { modulus: f64 },

    #[error("orbit has no steps")]
    EmptyOrbit,

    #[error("orbit too short: need {needed} steps, have {have}")]
    ShortOrbit { needed: usize, have: usize },

    #[error("metric depth {depth} exceeds orbit length {have}")]
    Depth { depth: usize, have: usize },

    #[error("output size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("symbol sequence too short: need {needed}, have {have}")]
    ShortSequence { needed: usize, have: usize },

    #[error("shadow escaped at index {index}: drift {drift:e} >= eps {eps:e}")]
    ShadowEscape { index: usize, drift: f64, eps: f64 },

    #[error("ambiguous branch at index {index}: two preimages equidistant within {gap:e}")]
    AmbiguousBranch { index: usize, gap: f64 },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("sampler starved after {restarts} consecutive restarts")]
    Starvation { restarts: usize },

    #[error("no attracting region: {0}")]
    NoAttractor(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad
    /// input or I/O).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::BranchCollapse { .. }
                | Error::ContinuationStuck { .. }
                | Error::ShadowEscape { .. }
                | Error::AmbiguousBranch { .. }
                | Error::Starvation { .. }
                | Error::NoAttractor(_)
                | Error::Overflow { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
