use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its documented constraint. The message names it.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("market price {price} is not positive at tick {tick}")]
    Positivity { tick: u64, price: f64 },

    #[error("no transaction within {steps} steps at tick {tick}")]
    Timeout { tick: u64, steps: u64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("out of supported range: {0}")]
    Range(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(
        "trend coefficient {d} is in the bubble regime (d >= {bound}); diffusion is unbounded"
    )]
    BubbleRegime { d: f64, bound: f64 },

    #[error("insufficient or degenerate data: {0}")]
    Data(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
