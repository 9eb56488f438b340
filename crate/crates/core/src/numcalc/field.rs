use crate::error::Result;

use super::form::FormValue;

/// A differential form field on an open subset of R^N.
///
/// `singular_distance` reports how far a point is from the field's singular set
/// (centers, Dirac strings, coordinate axes). Finite-difference operators refuse
/// stencils that come within ten steps of it.
pub trait FormField: Sync {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    fn eval(&self, p: &[f64]) -> Result<FormValue>;
    fn singular_distance(&self, _p: &[f64]) -> f64 {
        f64::INFINITY
    }
}

type Distance = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Form field backed by a closure.
pub struct FnField<F> {
    dim: usize,
    degree: usize,
    f: F,
    singular: Option<Distance>,
}

impl<F> FnField<F>
where
    F: Fn(&[f64]) -> Result<FormValue> + Sync,
{
    pub fn new(dim: usize, degree: usize, f: F) -> Self {
        Self { dim, degree, f, singular: None }
    }

    pub fn with_singular(mut self, d: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.singular = Some(Box::new(d));
        self
    }
}

impl<F> FormField for FnField<F>
where
    F: Fn(&[f64]) -> Result<FormValue> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn eval(&self, p: &[f64]) -> Result<FormValue> {
        (self.f)(p)
    }
    fn singular_distance(&self, p: &[f64]) -> f64 {
        self.singular.as_ref().map_or(f64::INFINITY, |d| d(p))
    }
}

/// Scalar (0-form) field backed by a real-valued closure.
pub struct ScalarFn<G> {
    dim: usize,
    g: G,
    singular: Option<Distance>,
}

impl<G> ScalarFn<G>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(dim: usize, g: G) -> Self {
        Self { dim, g, singular: None }
    }

    pub fn with_singular(mut self, d: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.singular = Some(Box::new(d));
        self
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        (self.g)(p)
    }
}

impl<G> FormField for ScalarFn<G>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn degree(&self) -> usize {
        0
    }
    fn eval(&self, p: &[f64]) -> Result<FormValue> {
        Ok(FormValue::scalar(self.dim, (self.g)(p)))
    }
    fn singular_distance(&self, p: &[f64]) -> f64 {
        self.singular.as_ref().map_or(f64::INFINITY, |d| d(p))
    }
}

/// Constant form field.
pub struct ConstField(pub FormValue);

impl FormField for ConstField {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn degree(&self) -> usize {
        self.0.degree()
    }
    fn eval(&self, _p: &[f64]) -> Result<FormValue> {
        Ok(self.0.clone())
    }
}
