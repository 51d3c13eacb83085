use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration {mask:#b} is not in the sector (N={n_sites}, r={n_down})")]
    NotInSector {
        mask: u64,
        n_sites: usize,
        n_down: usize,
    },
    #[error("cot singularity: angle {0} is a multiple of 2pi")]
    Singular(f64),
    #[error("Bethe iteration did not converge after {iterations} iterations (last update {last_update:e})")]
    Diverged { iterations: usize, last_update: f64 },
    #[error("Bethe roots {first} and {second} coincide (separation {separation:e}); the state vanishes")]
    DegenerateRoots {
        first: usize,
        second: usize,
        separation: f64,
    },
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("arity mismatch: expected {expected} down spins, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state is not an eigenstate (residual {0:e})")]
    NotEigenstate(f64),
    #[error("integrator failure: {0}")]
    Integrator(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
