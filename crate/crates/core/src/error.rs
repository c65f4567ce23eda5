use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("singular 2x2 matrix (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("residual requested for a zero vector")]
    ZeroVector,

    #[error("undamped oscillator evaluated at its resonance (omega = {omega:e} rad/s)")]
    EvalAtResonance { omega: f64 },

    #[error("ideal-conductor tag cannot be evaluated as a dielectric function")]
    IdealConductorEval,

    #[error("dielectric function has a pole at zero frequency")]
    ZeroFrequencyPole,

    #[error("invalid frequency point: {0}")]
    InvalidFrequency(String),

    #[error("singular interface matrix: {0}")]
    SingularInterface(String),

    #[error("film round-trip matrix is singular (resonant film)")]
    ResonantFilm,

    #[error("epsilon_zz vanishes; the 4x4 propagation matrix is undefined")]
    DegenerateEpsZZ,

    #[error("unsupported ideal-conductor limit: {0}")]
    UnsupportedIdealLimit(String),

    #[error("cavity resonance: |det(I - K)| = {det:e}")]
    CavityResonance { det: f64 },

    #[error("no convergence: {what} (error estimate {err_est:e} above tolerance {tol:e})")]
    NoConvergence { what: String, err_est: f64, tol: f64 },

    #[error("zero-frequency Matsubara term is ill-conditioned: proxy values {coarse:e} and {fine:e} disagree")]
    IllConditionedZeroMode { coarse: f64, fine: f64 },

    #[error("no interior maximum on [{d_min:e}, {d_max:e}] m")]
    NoInteriorMaximum { d_min: f64, d_max: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::ZeroVector => "ZeroVector",
            Error::EvalAtResonance { .. } => "EvalAtResonance",
            Error::IdealConductorEval => "IdealConductorEval",
            Error::ZeroFrequencyPole => "ZeroFrequencyPole",
            Error::InvalidFrequency(_) => "InvalidFrequency",
            Error::SingularInterface(_) => "SingularInterface",
            Error::ResonantFilm => "ResonantFilm",
            Error::DegenerateEpsZZ => "DegenerateEpsZZ",
            Error::UnsupportedIdealLimit(_) => "UnsupportedIdealLimit",
            Error::CavityResonance { .. } => "CavityResonance",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::IllConditionedZeroMode { .. } => "IllConditionedZeroMode",
            Error::NoInteriorMaximum { .. } => "NoInteriorMaximum",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
