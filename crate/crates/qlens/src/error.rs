use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QArithError {
    #[error("q^{0} cannot be evaluated at q = 0")]
    NegativePowerAtZero(i64),
    #[error("q = {0} is outside [0, 1]")]
    Domain(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("monomial (k={k}, l={l}, m={m}) is not homogeneous for p={p}, r={r}")]
    NotHomogeneous {
        k: i64,
        l: u32,
        m: u32,
        p: u32,
        r: i64,
    },
    #[error("p={p} and r={r} are not coprime")]
    NotCoprime { p: u32, r: i64 },
    #[error("cannot parse word letter {0:?}")]
    BadLetter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("invalid basis label (2j={two_j}, 2mu={two_mu}, 2n={two_n})")]
    InvalidLabel { two_j: i64, two_mu: i64, two_n: i64 },
    #[error("q = {0} is outside (0, 1]")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("p={p} and r={r} are not coprime")]
    NotCoprime { p: u32, r: i64 },
    #[error("p must be positive")]
    ZeroP,
    #[error("closed forms exist only for K in {{0, p/2}}; got K={k} for p={p}")]
    UnsupportedClosedForm { p: u32, k: u32 },
    #[error("lattice range must be at least 1")]
    BadRange,
}

#[derive(Debug, Error, PartialEq)]
pub enum BundleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    QArith(#[from] QArithError),
}
