use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature on [{a}, {b}] did not reach tolerance {tol:e}")]
    Quadrature { a: f64, b: f64, tol: f64 },
    #[error("no firing in ({t}, {}]", t + horizon)]
    HorizonExceeded { t: f64, horizon: f64 },
    #[error("t = {t} lies outside the coefficient window")]
    OutOfWindow { t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
