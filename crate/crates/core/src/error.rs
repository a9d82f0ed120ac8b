use num_complex::Complex64;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument {0} lies on a pole")]
    PoleAtArgument(Complex64),

    #[error("{what}: argument {value} outside supported range (|z| <= {bound})")]
    OutOfRange { what: &'static str, value: f64, bound: f64 },

    #[error("hypergeometric series diverges at z = {0}")]
    Divergence(f64),

    #[error("overflow evaluating {0}")]
    Overflow(&'static str),

    #[error("unsupported fading family `{0}`")]
    UnsupportedFamily(String),

    #[error("parameter {name} = {value} out of range (expected {expected})")]
    ParameterOutOfRange { name: &'static str, value: f64, expected: &'static str },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ill-conditioned contour around s = {location}: |H| varies by {ratio:.3e}")]
    IllConditionedContour { location: f64, ratio: f64 },

    #[error("quadrature oracle supports at most 3 hops, got {0}")]
    UnsupportedHopCount(usize),

    #[error("quadrature did not converge (estimate {estimate:.6e}, error {error:.3e})")]
    QuadratureNonconvergence { estimate: f64, error: f64 },

    #[error("dimension mismatch: {gains} gains vs {rhos} noise ratios")]
    DimensionMismatch { gains: usize, rhos: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("nonpositive probability {value} at point {index}")]
    NonPositiveProbability { value: f64, index: usize },
}

impl Error {
    /// True for failures of the channel-model hypotheses (bad family or parameters).
    pub fn is_model_validation(&self) -> bool {
        matches!(self, Error::UnsupportedFamily(_) | Error::ParameterOutOfRange { .. })
    }

    /// True for failures of the numerical machinery itself.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IllConditionedContour { .. }
                | Error::QuadratureNonconvergence { .. }
                | Error::Divergence(_)
                | Error::Overflow(_)
                | Error::PoleAtArgument(_)
                | Error::OutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
