//! Pointwise tensor algebra and finite-difference exterior calculus on R^N.
//!
//! Forms are stored on the increasing multi-index basis; all differential
//! operators are central differences on closure-backed fields.

pub mod contour;
mod fd;
mod field;
mod form;
mod hodge;
mod quad;
mod structure;

pub use fd::{dc_deriv, ddc, ext_deriv, gradient, laplacian, partial, DcField, FdScheme, STRUCTURE_TOL};
pub use field::{ConstField, FnField, FormField, ScalarFn};
pub use form::{binomial, multi_indices, FormValue};
pub use hodge::{form_norm, hodge_star};
pub use quad::{gauss_legendre, surface_integral};
pub use structure::{
    almost_complex_residual, structure_from_form, type11_residual, type11_residual_in_frame,
    type11_residual_metric, ComplexStructureValue, MetricValue,
};

use crate::error::{Error, Result};

/// A point of R^N with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointR(Vec<f64>);

impl PointR {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("non-finite coordinate".into()));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for PointR {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
