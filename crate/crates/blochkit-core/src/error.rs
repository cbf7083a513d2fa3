use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every numerical module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("permittivity singular at omega = {omega} (|denominator| = {denominator:e})")]
    SingularFrequency { omega: Complex64, denominator: f64 },
    #[error("beta = 0: the permittivity has no finite singularity")]
    NoFiniteSingularity,
    #[error("contrast too close to zero ({magnitude:e})")]
    DegenerateContrast { magnitude: f64 },
    #[error("permittivity is complex on the sweep (Im eps = {im:e} at omega = {omega})")]
    ComplexPermittivity { omega: f64, im: f64 },
    #[error("damped model (gamma = {gamma}): the cascade requires gamma = 0")]
    DampedModel { gamma: f64 },
    #[error("no real pole to accumulate at")]
    NoPole,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate lattice: generators are linearly dependent")]
    DegenerateLattice,
    #[error("lattice sum not converged: tail estimate {estimate:e} above tolerance {tol:e}")]
    SlowConvergence { value: Complex64, estimate: f64, tol: f64 },
    #[error("quadrature too coarse: self-convergence {change:e} exceeds {limit:e}")]
    QuadratureTooCoarse { change: f64, limit: f64 },
    #[error("power iteration did not converge in {iterations} steps")]
    EigenFailure { iterations: usize },
    #[error("pole-pencil denominator vanishes ({magnitude:e})")]
    PolePencilSingular { magnitude: f64 },
    #[error("root polish did not converge from {start}")]
    NoConvergence { start: Complex64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
