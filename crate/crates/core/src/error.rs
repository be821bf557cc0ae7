use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degree {degree} out of supported range 1..={max}")]
    Range { degree: usize, max: usize },
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("branch selection failed: {0}")]
    Branch(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("{what} did not converge after {iterations} iterations (residuals {residuals:?})")]
    NonConvergence { what: &'static str, iterations: usize, residuals: [f64; 2] },
    #[error("contour error: {0}")]
    Path(String),
    #[error("expected {expected} critical points in the disk, found {found}")]
    RootCount { expected: usize, found: usize },
    #[error("continuation failed: {0}")]
    Continuation(String),
    #[error("fiber paths collided: {0}")]
    Collision(String),
    #[error("sheet graph is not a tree: {0}")]
    Structure(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
}
