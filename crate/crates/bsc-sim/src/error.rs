use thiserror::Error;

/// Errors surfaced by the simulator.
///
/// Construction errors (`Ladder`, `Manifest`, `Config`, ...) mean the input
/// violates a documented invariant and nothing was built. `NeverCompletes` is
/// the one runtime abort: a download was requested on a link whose bandwidth
/// is zero from the request instant onward, so the session cannot make
/// progress.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bitrate ladder: {0}")]
    Ladder(String),

    #[error("invalid manifest: {0}")]
    Manifest(String),

    #[error("rate {0} bps is not a rung of the ladder")]
    UnknownRate(u64),

    #[error("inconsistent block plan: {0}")]
    Plan(String),

    #[error("invalid capacity trace: {0}")]
    Trace(String),

    #[error("trace parse error at line {line}: {reason}")]
    TraceParse { line: usize, reason: String },

    #[error("download never completes: bandwidth is zero from t={start_s}s onward")]
    NeverCompletes { start_s: f64 },

    #[error("measurement interval is empty or reversed")]
    EmptyInterval,

    #[error("invalid config: {0}")]
    Config(String),

    #[error("api misuse: {0}")]
    Misuse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
