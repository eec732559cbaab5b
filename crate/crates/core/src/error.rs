use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("precision of {0} digits is below the supported minimum of 30")]
    PrecisionTooLow(u32),
    #[error("arithmetic produced a non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("hypergeometric series has a pole: c = {0} is a non-positive integer")]
    HypergeometricPole(String),
    #[error("mehler kernel is singular at z = +-1/2 (got z = {0})")]
    MehlerSingular(String),
    #[error("moment integral routes disagree for k = {k}, p = {p}: closed form {closed}, recurrence {recurrence}")]
    MomentMismatch {
        k: u32,
        p: u32,
        closed: String,
        recurrence: String,
    },
    #[error("operation not supported for {0}")]
    Unsupported(String),
    #[error("quadrature failed for coefficient {n}: {reason}")]
    QuadratureFailure { n: usize, reason: String },
    #[error("term budget of {0} exhausted")]
    TermBudget(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("radicals do not combine exactly")]
    IncompatibleRadicals,
}
