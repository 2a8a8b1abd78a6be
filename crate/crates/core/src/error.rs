use thiserror::Error;

/// Everything that can go wrong in the analysis pipeline.
///
/// Variants split into two families: bad input (malformed data, out-of-range
/// parameters) and numeric failure (non-convergence, a scaled field that
/// leaves the barrier's valid range). [`Error::is_numeric`] tells them apart;
/// the CLI maps the two families onto different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonPositiveWorkFunction: work function must be > 0 eV, got {0}")]
    NonPositiveWorkFunction(f64),

    #[error("DomainError: {function}({x}) is outside the accepted domain {domain}")]
    Domain {
        function: &'static str,
        x: f64,
        domain: &'static str,
    },

    #[error("ScaledFieldOutOfRange: scaled field f = {f} is outside (0, 1]")]
    ScaledFieldOutOfRange { f: f64 },

    #[error(
        "TemperatureRegimeError: Swanson-Bell parameter p = {p} is at or above the guard {limit}"
    )]
    TemperatureRegime { p: f64, limit: f64 },

    #[error("ParseError: line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("NonPositiveValue: line {line}: {what} must be > 0, got {value}")]
    NonPositiveValue {
        line: u64,
        what: &'static str,
        value: f64,
    },

    #[error("TooFewPoints: need at least {needed} distinct points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("DegenerateAbscissa: all abscissa values are equal")]
    DegenerateAbscissa,

    #[error("PositiveSlope: fitted FN slope {0} is not negative; data is not FE-like")]
    PositiveSlope(f64),

    #[error("NonConvergence: iteration at V_t = {v_t} V did not converge in {iterations} steps")]
    NonConvergence { v_t: f64, iterations: usize },

    #[error("MissingCurrent: no measured current available at V_t = {v_t} V")]
    MissingCurrent { v_t: f64 },

    #[error("NonPositiveArea: {what} must be > 0, got {value}")]
    NonPositiveArea { what: &'static str, value: f64 },

    #[error("NonPositiveInput: {what} must be > 0, got {value}")]
    NonPositiveInput { what: &'static str, value: f64 },

    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("MultiPeak: found {crossings} half-maximum crossings, expected 2")]
    MultiPeak { crossings: usize },

    #[error("MissingSection: report has no {0} section")]
    MissingSection(&'static str),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ScaledFieldOutOfRange { .. }
                | Error::TemperatureRegime { .. }
                | Error::NonConvergence { .. }
                | Error::MultiPeak { .. }
        )
    }

    /// Short stable identifier, used in report error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveWorkFunction(_) => "NonPositiveWorkFunction",
            Error::Domain { .. } => "DomainError",
            Error::ScaledFieldOutOfRange { .. } => "ScaledFieldOutOfRange",
            Error::TemperatureRegime { .. } => "TemperatureRegimeError",
            Error::Parse { .. } => "ParseError",
            Error::NonPositiveValue { .. } => "NonPositiveValue",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::DegenerateAbscissa => "DegenerateAbscissa",
            Error::PositiveSlope(_) => "PositiveSlope",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::MissingCurrent { .. } => "MissingCurrent",
            Error::NonPositiveArea { .. } => "NonPositiveArea",
            Error::NonPositiveInput { .. } => "NonPositiveInput",
            Error::InvalidInput(_) => "InvalidInput",
            Error::MultiPeak { .. } => "MultiPeak",
            Error::MissingSection(_) => "MissingSection",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn require_positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositiveInput { what, value })
    }
}
