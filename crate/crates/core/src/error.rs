use crate::jets::JetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what}: r = {r} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        r: f64,
        domain: String,
    },
    #[error("at r = {r}: {source}")]
    Jet { r: f64, source: JetError },
    #[error("K = {curvature} has its first conjugate point at r = {limit}, requested r = {r}")]
    ConjugatePoint { curvature: f64, r: f64, limit: f64 },
    #[error("critical point of f at r = {r}: |f'| = {slope:e} is below {threshold:e}")]
    CriticalPoint { r: f64, slope: f64, threshold: f64 },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("quadrature did not converge: achieved {achieved:e}, target {target:e}")]
    Quadrature { achieved: f64, target: f64 },
    #[error("extrapolation did not converge: residual {residual:e}")]
    Extrapolation { residual: f64 },
}

impl Error {
    pub(crate) fn jet(r: f64) -> impl FnOnce(JetError) -> Error {
        move |source| Error::Jet { r, source }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Error {
        Error::Validation(msg.into())
    }
}
