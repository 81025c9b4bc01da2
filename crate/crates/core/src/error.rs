use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("degenerate symplectic form: {0}")]
    DegenerateForm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("implicit step did not converge at t = {t} (h = {h}); try a smaller step")]
    StiffStep { t: f64, h: f64 },

    #[error("non-finite state at t = {t}")]
    BlowUp { t: f64 },

    #[error("energy drift {drift:e} exceeds budget {budget:e}")]
    DriftBudgetExceeded { drift: f64, budget: f64 },

    #[error("infeasible pins: {0}")]
    InfeasiblePins(String),

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("bracket routes disagree: dF(sgrad a) = {via_form}, a(sgrad F) = {via_field}")]
    InternalInconsistency { via_form: f64, via_field: f64 },

    #[error("rotation pairing formulas disagree: double integral {double_integral}, loop integral {loop_integral}")]
    QuadratureWarning {
        double_integral: f64,
        loop_integral: f64,
    },

    #[error("no feasible candidate in family: {0}")]
    InfeasibleFamily(String),

    #[error("cannot certify sup norm: {0}")]
    Uncertifiable(String),

    #[error("region error: {0}")]
    Region(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
