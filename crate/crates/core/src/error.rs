use crate::solver::PgsReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("projected Gauss-Seidel did not converge after {} sweeps (update {:e}, complementarity {:e})", .0.sweeps, .0.update_norm, .0.complementarity)]
    PgsNotConverged(PgsReport),

    #[error("linear solver stalled: relative residual {residual:e} after {iterations} iterations")]
    LinearSolver { residual: f64, iterations: usize },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}
