use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("{0} is outside the domain {1}")]
    Domain(f64, &'static str),

    #[error("derivative requested at {0}, too close to a singularity")]
    NearSingularity(f64),

    #[error("node system is not in the regularity set: interval {0} is singular")]
    NotRegular(usize),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("finite differences left the regularity set after {0} step reductions")]
    LeftDomain(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
