use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::field::FormField;
use super::form::{multi_indices, FormValue};
use super::structure::almost_complex_residual;

/// Central finite-difference scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdScheme {
    pub h: f64,
    pub order: u8,
    pub richardson: bool,
}

impl Default for FdScheme {
    fn default() -> Self {
        Self { h: 1e-3, order: 4, richardson: false }
    }
}

/// Tolerance on ‖I²+Id‖ before a structure field is rejected by `dc_deriv`.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// Stencils closer than this many steps to a singular set are rejected.
const SINGULAR_MARGIN_STEPS: f64 = 10.0;

impl FdScheme {
    pub fn new(h: f64, order: u8) -> Result<Self> {
        let s = Self { h, order, richardson: false };
        s.validate()?;
        Ok(s)
    }

    pub fn with_richardson(mut self) -> Self {
        self.richardson = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Invalid(format!("step must be positive, got {}", self.h)));
        }
        if self.order != 2 && self.order != 4 {
            return Err(Error::Invalid(format!("order must be 2 or 4, got {}", self.order)));
        }
        Ok(())
    }

    fn radius(&self) -> f64 {
        self.h * f64::from(self.order / 2)
    }

    /// (offset multiple, weight) pairs of the first-derivative stencil, weights in units of 1/h.
    fn first_stencil(&self) -> &'static [(f64, f64)] {
        match self.order {
            2 => &[(-1.0, -0.5), (1.0, 0.5)],
            _ => &[(-2.0, 1.0 / 12.0), (-1.0, -2.0 / 3.0), (1.0, 2.0 / 3.0), (2.0, -1.0 / 12.0)],
        }
    }

    fn second_stencil(&self) -> &'static [(f64, f64)] {
        match self.order {
            2 => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
            _ => &[
                (-2.0, -1.0 / 12.0),
                (-1.0, 4.0 / 3.0),
                (0.0, -5.0 / 2.0),
                (1.0, 4.0 / 3.0),
                (2.0, -1.0 / 12.0),
            ],
        }
    }
}

fn check_domain(field: &dyn FormField, p: &[f64], scheme: &FdScheme) -> Result<()> {
    scheme.validate()?;
    if p.len() != field.dim() {
        return Err(Error::Invalid(format!("point has {} coordinates, field expects {}", p.len(), field.dim())));
    }
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite coordinate".into()));
    }
    let margin = (SINGULAR_MARGIN_STEPS * scheme.h).max(scheme.radius());
    let d = field.singular_distance(p);
    if d <= margin {
        return Err(Error::Domain(format!(
            "stencil within {margin:.2e} of singular set (distance {d:.3e})"
        )));
    }
    Ok(())
}

fn eval_finite(field: &dyn FormField, p: &[f64]) -> Result<FormValue> {
    let v = field.eval(p)?;
    if v.components().iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain(format!("field not finite at {p:?}")));
    }
    Ok(v)
}

fn stencil_apply(
    field: &dyn FormField,
    p: &[f64],
    axis: usize,
    h: f64,
    stencil: &[(f64, f64)],
    power: i32,
) -> Result<FormValue> {
    let mut acc = FormValue::zeros(field.dim(), field.degree());
    let mut q = p.to_vec();
    for &(off, w) in stencil {
        q[axis] = p[axis] + off * h;
        acc = &acc + &eval_finite(field, &q)?.scale(w);
    }
    Ok(acc.scale(h.powi(-power)))
}

fn richardson(coarse: FormValue, fine: FormValue, order: u8) -> FormValue {
    let r = 2f64.powi(i32::from(order));
    (&fine.scale(r) - &coarse).scale(1.0 / (r - 1.0))
}

/// Partial derivative of every component of `field` along coordinate `axis`.
pub fn partial(field: &dyn FormField, p: &[f64], axis: usize, scheme: &FdScheme) -> Result<FormValue> {
    check_domain(field, p, scheme)?;
    let st = scheme.first_stencil();
    let d = stencil_apply(field, p, axis, scheme.h, st, 1)?;
    if scheme.richardson {
        let fine = stencil_apply(field, p, axis, scheme.h / 2.0, st, 1)?;
        return Ok(richardson(d, fine, scheme.order));
    }
    Ok(d)
}

/// Exterior derivative of a k-form field at `p`:
/// `(dw)_{j₀…j_k} = Σ_m (−1)^m ∂_{j_m} w_{j₀…ĵ_m…j_k}`.
pub fn ext_deriv(field: &dyn FormField, p: &[f64], scheme: &FdScheme) -> Result<FormValue> {
    let n = field.dim();
    let k = field.degree();
    if k >= n {
        return Ok(FormValue::zeros(n, k + 1));
    }
    let partials: Vec<FormValue> = (0..n).map(|a| partial(field, p, a, scheme)).collect::<Result<_>>()?;
    let comps = multi_indices(n, k + 1)
        .iter()
        .map(|idx| {
            let mut s = 0.0;
            for m in 0..=k {
                let rest: Vec<usize> = idx.iter().enumerate().filter(|(q, _)| *q != m).map(|(_, &j)| j).collect();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * partials[idx[m]].get(&rest);
            }
            s
        })
        .collect();
    Ok(FormValue::from_components(n, k + 1, comps))
}

/// Gradient of a scalar field as a 1-form.
pub fn gradient(field: &dyn FormField, p: &[f64], scheme: &FdScheme) -> Result<FormValue> {
    assert_eq!(field.degree(), 0, "gradient needs a scalar field");
    ext_deriv(field, p, scheme)
}

/// `Σ ∂²f/∂x_i²` by central differences.
pub fn laplacian(field: &dyn FormField, p: &[f64], scheme: &FdScheme) -> Result<f64> {
    assert_eq!(field.degree(), 0, "laplacian needs a scalar field");
    check_domain(field, p, scheme)?;
    let st = scheme.second_stencil();
    let mut total = 0.0;
    for a in 0..field.dim() {
        let mut d = stencil_apply(field, p, a, scheme.h, st, 2)?;
        if scheme.richardson {
            let fine = stencil_apply(field, p, a, scheme.h / 2.0, st, 2)?;
            d = richardson(d, fine, scheme.order);
        }
        total += d.components()[0];
    }
    Ok(total)
}

/// `d^c f = −df∘I`, as a 1-form at `p`.
pub fn dc_deriv(
    f: &dyn FormField,
    structure: &DMatrix<f64>,
    p: &[f64],
    scheme: &FdScheme,
) -> Result<FormValue> {
    let res = almost_complex_residual(structure);
    if res > STRUCTURE_TOL {
        return Err(Error::Structure { residual: res, tol: STRUCTURE_TOL });
    }
    let df = gradient(f, p, scheme)?;
    let n = f.dim();
    let comps = (0..n)
        .map(|j| -(0..n).map(|i| df.components()[i] * structure[(i, j)]).sum::<f64>())
        .collect();
    Ok(FormValue::from_components(n, 1, comps))
}

/// The 1-form field `d^c f` for a (possibly point-dependent) complex structure.
pub struct DcField<'a, S> {
    pub f: &'a dyn FormField,
    pub structure: S,
    pub scheme: FdScheme,
}

impl<S> FormField for DcField<'_, S>
where
    S: Fn(&[f64]) -> DMatrix<f64> + Sync,
{
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn degree(&self) -> usize {
        1
    }
    fn eval(&self, p: &[f64]) -> Result<FormValue> {
        dc_deriv(self.f, &(self.structure)(p), p, &self.scheme)
    }
    fn singular_distance(&self, p: &[f64]) -> f64 {
        self.f.singular_distance(p) - self.scheme.radius()
    }
}

/// `dd^c f` at `p`, by nested central differences.
pub fn ddc<S>(f: &dyn FormField, structure: S, p: &[f64], scheme: &FdScheme) -> Result<FormValue>
where
    S: Fn(&[f64]) -> DMatrix<f64> + Sync,
{
    let field = DcField { f, structure, scheme: *scheme };
    ext_deriv(&field, p, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcalc::field::{FnField, ScalarFn};

    fn standard_i(n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for k in 0..n / 2 {
            m[(2 * k + 1, 2 * k)] = 1.0;
            m[(2 * k, 2 * k + 1)] = -1.0;
        }
        m
    }

    #[test]
    fn d_of_coordinate_is_unit_covector() {
        let f = ScalarFn::new(3, |p: &[f64]| p[0]);
        let d = ext_deriv(&f, &[0.3, -1.0, 2.0], &FdScheme::default()).unwrap();
        assert!((d.components()[0] - 1.0).abs() < 1e-12);
        assert!(d.components()[1].abs() < 1e-12 && d.components()[2].abs() < 1e-12);
    }

    #[test]
    fn d_of_x1_dx2() {
        let w = FnField::new(3, 1, |p: &[f64]| Ok(FormValue::covector(&[0.0, p[0], 0.0])));
        let d = ext_deriv(&w, &[0.5, 0.5, 0.5], &FdScheme::default()).unwrap();
        assert!((d.get(&[0, 1]) - 1.0).abs() < 1e-12);
        assert!(d.get(&[0, 2]).abs() < 1e-12 && d.get(&[1, 2]).abs() < 1e-12);
    }

    #[test]
    fn exact_gradient_of_inverse_radius_is_closed() {
        let w = FnField::new(3, 1, |p: &[f64]| {
            let r3 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).powf(1.5);
            Ok(FormValue::covector(&[-p[0] / r3, -p[1] / r3, -p[2] / r3]))
        })
        .with_singular(|p: &[f64]| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt());
        let d = ext_deriv(&w, &[1.0, 1.0, 1.0], &FdScheme::default()).unwrap();
        assert!(d.max_abs() < 1e-7, "{}", d.max_abs());
    }

    #[test]
    fn laplacian_examples() {
        let s = FdScheme::default();
        let sq = ScalarFn::new(3, |p: &[f64]| p[0] * p[0]);
        assert!((laplacian(&sq, &[0.2, 0.1, 0.0], &s).unwrap() - 2.0).abs() < 1e-8);
        let r2 = ScalarFn::new(3, |p: &[f64]| p.iter().map(|x| x * x).sum());
        assert!((laplacian(&r2, &[0.2, 0.1, 0.4], &s).unwrap() - 6.0).abs() < 1e-8);
        let a = [0.5, -0.2, 0.1];
        let inv = ScalarFn::new(3, move |p: &[f64]| {
            1.0 / ((p[0] - a[0]).powi(2) + (p[1] - a[1]).powi(2) + (p[2] - a[2]).powi(2)).sqrt()
        });
        assert!(laplacian(&inv, &[1.1, 0.7, -0.3], &s).unwrap().abs() < 1e-6);
    }

    #[test]
    fn stencil_near_singularity_is_rejected() {
        let inv = ScalarFn::new(3, |p: &[f64]| 1.0 / p.iter().map(|x| x * x).sum::<f64>().sqrt())
            .with_singular(|p: &[f64]| p.iter().map(|x| x * x).sum::<f64>().sqrt());
        let err = laplacian(&inv, &[0.005, 0.0, 0.0], &FdScheme::default()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn bad_scheme_rejected() {
        assert!(FdScheme::new(0.0, 4).is_err());
        assert!(FdScheme::new(1e-3, 3).is_err());
    }

    #[test]
    fn dc_of_constant_vanishes() {
        let c = ScalarFn::new(2, |_: &[f64]| 3.0);
        let d = dc_deriv(&c, &standard_i(2), &[0.1, 0.2], &FdScheme::default()).unwrap();
        assert!(d.max_abs() < 1e-12);
    }

    #[test]
    fn dc_rejects_non_complex_structure() {
        let c = ScalarFn::new(2, |p: &[f64]| p[0]);
        let bad = DMatrix::identity(2, 2);
        assert!(matches!(
            dc_deriv(&c, &bad, &[0.1, 0.2], &FdScheme::default()),
            Err(Error::Structure { .. })
        ));
    }

    #[test]
    fn ddc_of_half_modulus_squared() {
        // f = |z|²/2: d^c f = −y dx + x dy, so dd^c f = 2 dx∧dy = i dz∧dz̄.
        let f = ScalarFn::new(2, |p: &[f64]| 0.5 * (p[0] * p[0] + p[1] * p[1]));
        let w = ddc(&f, |_: &[f64]| standard_i(2), &[0.3, -0.7], &FdScheme::default()).unwrap();
        assert!((w.get(&[0, 1]) - 2.0).abs() < 1e-8, "{}", w.get(&[0, 1]));
    }

    #[test]
    fn second_order_error_quarters_when_step_halves() {
        let f = ScalarFn::new(1, |p: &[f64]| p[0].sin() * p[0].exp());
        let exact = |x: f64| x.exp() * (x.sin() + x.cos());
        let x = 0.7;
        let e1 = (gradient(&f, &[x], &FdScheme::new(1e-2, 2).unwrap()).unwrap().components()[0] - exact(x)).abs();
        let e2 = (gradient(&f, &[x], &FdScheme::new(5e-3, 2).unwrap()).unwrap().components()[0] - exact(x)).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn richardson_improves_second_order() {
        let f = ScalarFn::new(1, |p: &[f64]| p[0].sin() * p[0].exp());
        let exact = 0.7f64.exp() * (0.7f64.sin() + 0.7f64.cos());
        let s = FdScheme::new(1e-2, 2).unwrap();
        let plain = (gradient(&f, &[0.7], &s).unwrap().components()[0] - exact).abs();
        let rich = (gradient(&f, &[0.7], &s.with_richardson()).unwrap().components()[0] - exact).abs();
        assert!(rich < plain / 100.0);
    }
}
