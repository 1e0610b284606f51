use thiserror::Error;

/// Errors raised when a precondition of a simulator operation is violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid point count must be odd and at least {min}, got {got}")]
    GridPoints { got: usize, min: usize },
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("delay point count must be odd and at least 3, got {0}")]
    DelayPoints(usize),
    #[error(
        "beamsplitter is not passive: largest power gain |t|^2 + |r|^2 + 2|Re(t r*)| = {0} > 1"
    )]
    ActiveBeamSplitter(f64),
    #[error("operation requires a lossless 50:50 beamsplitter")]
    NotBalancedLossless,
    #[error("two-photon filter must be centred at zero, got {0}")]
    TwoPhotonCenter(f64),
    #[error("oracle grid of {got} modes per port exceeds the cap of {cap}")]
    OracleTooLarge { got: usize, cap: usize },
    #[error("traces have mismatched delay axes")]
    AxisMismatch,
    #[error("trace has only {0} samples; at least 21 are required")]
    TraceTooShort(usize),
    #[error("trace is featureless")]
    Featureless,
    #[error("trace has {rates} rates for {delays} delays")]
    TraceLength { rates: usize, delays: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
