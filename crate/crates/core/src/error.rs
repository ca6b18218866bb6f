use thiserror::Error;

use crate::beltrami::Form;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("derivative order {0} is not supported (maximum 4)")]
    UnsupportedOrder(usize),

    #[error("curvature {kappa:e} at u = {u} is below the Frenet threshold; frame undefined")]
    VanishingCurvature { u: f64, kappa: f64 },

    #[error("parameter ({v1}, {v2}) lies outside the domain")]
    OutOfDomain { v1: f64, v2: f64 },

    #[error("degenerate parametrization at ({v1}, {v2}): |r1 x r2| = {norm:e}")]
    DegenerateParametrization { v1: f64, v2: f64, norm: f64 },

    #[error("form {form} is singular at ({v1}, {v2}) (guard value {value:e})")]
    SingularForm { form: Form, v1: f64, v2: f64, value: f64 },

    #[error("(u, phi) = ({u}, {phi}) lies in the singular band |cos phi| = {cos_phi:e} <= {eps_band}")]
    SingularBand { u: f64, phi: f64, cos_phi: f64, eps_band: f64 },

    #[error("tube radius {radius} violates 0 < r < {bound}")]
    InvalidRadius { radius: f64, bound: f64 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("wrong case: {0}")]
    WrongCase(String),

    #[error("jet of order {have} where order {needed} is required")]
    JetOrder { needed: usize, have: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    /// Errors raised because an operator metric degenerates at the sample.
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::SingularForm { .. } | Error::SingularBand { .. })
    }
}
