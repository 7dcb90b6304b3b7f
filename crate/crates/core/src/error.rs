use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Residue disks of the projective line over `F_p` that the pipeline cannot evaluate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbiddenDisk {
    Zero,
    One,
    Infinity,
}

impl std::fmt::Display for ForbiddenDisk {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ForbiddenDisk::Zero => write!(f, "residue disk of 0"),
            ForbiddenDisk::One => write!(f, "residue disk of 1"),
            ForbiddenDisk::Infinity => write!(f, "residue disk of infinity"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("mismatched primes {left} and {right}")]
    PrimeMismatch { left: u64, right: u64 },

    #[error("division by a value indistinguishable from zero (valuation >= {valuation})")]
    PrecisionLoss { valuation: i64 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("expected a unit, got valuation {valuation}")]
    NotAUnit { valuation: i64 },

    #[error("argument of valuation {valuation} is outside the convergence domain")]
    ConvergenceDomain { valuation: i64 },

    #[error("word of length {len} exceeds truncation level {level}")]
    WordTooLong { len: usize, level: usize },

    #[error("mismatched series parameters: {0}")]
    ParameterMismatch(String),

    #[error("constant term violation: {0}")]
    ConstantTerm(String),

    #[error("evaluation point lies in the {0}")]
    Forbidden(ForbiddenDisk),

    #[error("function does not vanish at 0 (valuation {valuation})")]
    NonzeroAtOrigin { valuation: i64 },

    #[error(
        "nonvanishing {form} obstruction for word {word}: valuation {valuation} < {tolerance}"
    )]
    Obstruction {
        word: String,
        form: &'static str,
        valuation: i64,
        tolerance: i64,
    },

    #[error("not a Teichmüller point: {0}")]
    NotTeichmuller(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("no coefficient valuation growth detected; cannot certify convergence")]
    NoConvergence,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionLoss { .. } | Error::PrecisionExhausted(_) | Error::NoConvergence => 2,
            Error::Obstruction { .. } | Error::NonzeroAtOrigin { .. } | Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}
