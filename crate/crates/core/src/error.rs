use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid predicate `{0}`: {1}")]
    Predicate(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("size budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: usize,
        budget: usize,
    },
    #[error("no integer (r, k) satisfies the reduction conditions for n = {n}, l = {l}")]
    ReductionInfeasible { n: usize, l: usize },
    #[error("{0} did not converge within {1} iterations")]
    NoConvergence(&'static str, usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("oracle check failed: {0}")]
    Oracle(String),
    #[error("eigenvalue clusters could not be separated after {0} attempts")]
    ClusterCollision(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
