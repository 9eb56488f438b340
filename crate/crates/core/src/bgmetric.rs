//! Explicit hyperkähler potential on the cotangent bundle of a Hermitian symmetric
//! space, built from spectral functions of the curvature operator `v ↦ IR(Iv, v)`.
//!
//! The implemented base is CP¹ in the affine chart `q`, with fibre coordinate `p`
//! for the covector `p dq`. Real coordinates are `(Re q, Im q, Re p, Im p)` and the
//! complex structure I is the standard one of the chart `(q, p)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcalc::{
    ddc, gradient, structure_from_form, type11_residual_metric, FdScheme, FormValue, MetricValue, ScalarFn,
};

const SERIES_SWITCH: f64 = 1e-4;
const EIGEN_CLAMP: f64 = -1e-12;

/// The scalar functions f, g and (uf)′ of `u = IR(Iv, v)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BGScalarFns;

impl BGScalarFns {
    fn check(u: f64) -> Result<()> {
        if !(u >= 0.0) || !u.is_finite() {
            return Err(Error::Domain(format!("spectral argument u = {u} outside [0, ∞)")));
        }
        Ok(())
    }

    /// `√(1+u) − 1` without cancellation.
    fn sqrt1p_m1(u: f64) -> f64 {
        u / ((1.0 + u).sqrt() + 1.0)
    }

    /// `log((1 + √(1+u))/2)` without cancellation.
    fn log_half(u: f64) -> f64 {
        (0.5 * Self::sqrt1p_m1(u)).ln_1p()
    }

    pub fn f(&self, u: f64) -> Result<f64> {
        Self::check(u)?;
        if u < SERIES_SWITCH {
            return Ok(0.25 + u * (-1.0 / 32.0 + u * (1.0 / 96.0 - u * 5.0 / 1024.0)));
        }
        Ok((Self::sqrt1p_m1(u) - Self::log_half(u)) / u)
    }

    pub fn g(&self, u: f64) -> Result<f64> {
        Self::check(u)?;
        if u < SERIES_SWITCH {
            return Ok(-0.25 + u * (3.0 / 32.0 + u * (-5.0 / 96.0 + u * 35.0 / 1024.0)));
        }
        Ok(-Self::log_half(u) / u)
    }

    /// Closed form of `(u f(u))′ = (√(1+u) − 1)/(2u)`.
    pub fn uf_prime(&self, u: f64) -> Result<f64> {
        Self::check(u)?;
        if u < SERIES_SWITCH {
            return Ok(0.25 + u * (-1.0 / 16.0 + u * (1.0 / 32.0 - u * 5.0 / 256.0)));
        }
        Ok(Self::sqrt1p_m1(u) / (2.0 * u))
    }
}

/// `max |d/du (u f(u)) − (√(1+u) − 1)/(2u)|` over the grid, with a fourth-order
/// central difference of relative step 1e-3.
pub fn fu_identity_residual(grid: &[f64]) -> Result<f64> {
    let s = BGScalarFns;
    let uf = |u: f64| -> Result<f64> { Ok(u * s.f(u)?) };
    let mut worst: f64 = 0.0;
    for &u in grid {
        if !(u > 0.0) {
            return Err(Error::Domain(format!("grid point {u} is not positive")));
        }
        let h = 1e-3 * u;
        let d = (uf(u - 2.0 * h)? - 8.0 * uf(u - h)? + 8.0 * uf(u + h)? - uf(u + 2.0 * h)?) / (12.0 * h);
        let rhs = ((1.0 + u).sqrt() - 1.0) / (2.0 * u);
        worst = worst.max((d - rhs).abs());
    }
    Ok(worst)
}

/// `n` log-spaced points on `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// A point of T*CP¹ in the affine chart: base coordinate `q`, covector `p dq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotangentPoint {
    pub q: Complex64,
    pub p: Complex64,
}

impl CotangentPoint {
    pub fn new(q: Complex64, p: Complex64) -> Result<Self> {
        if !(q.re.is_finite() && q.im.is_finite() && p.re.is_finite() && p.im.is_finite()) {
            return Err(Error::Domain("cotangent point outside the affine chart".into()));
        }
        Ok(Self { q, p })
    }

    pub fn from_real(x: &[f64]) -> Result<Self> {
        if x.len() != 4 {
            return Err(Error::Invalid(format!("T*CP¹ chart point needs 4 coordinates, got {}", x.len())));
        }
        Self::new(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }

    pub fn to_real(&self) -> [f64; 4] {
        [self.q.re, self.q.im, self.p.re, self.p.im]
    }
}

/// Hermitian symmetric base together with its curvature operator on cotangent fibres.
#[derive(Debug, Clone)]
pub struct SymmetricSpaceModel {
    /// Complex dimension of the base.
    pub base_dim: usize,
    /// Holomorphic sectional curvature of the base metric.
    pub curvature: f64,
}

impl SymmetricSpaceModel {
    /// CP¹ with `ω = i∂∂̄ log(1 + |q|²)`, so `∫ω = 2π`.
    pub fn cp1() -> Self {
        Self { base_dim: 1, curvature: 2.0 }
    }

    pub fn real_dim(&self) -> usize {
        4 * self.base_dim
    }

    /// Base Kähler form pulled back to the total space.
    pub fn base_kahler_form(&self, pt: &CotangentPoint) -> FormValue {
        let r2 = pt.q.norm_sqr();
        FormValue::two_form(4, &[(0, 1, 2.0 / (1.0 + r2).powi(2))])
    }

    /// Coordinates of the real covector `Re(p dq)` in an orthonormal coframe.
    pub fn fibre_vector(&self, pt: &CotangentPoint) -> DVector<f64> {
        let s = (1.0 + pt.q.norm_sqr()) / 2f64.sqrt();
        DVector::from_vec(vec![s * pt.p.re, -s * pt.p.im])
    }

    /// `IR(Iv, v)` on the real fibre; for CP¹ it is scalar.
    pub fn curvature_operator(&self, v: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(v.len(), v.len()) * (self.curvature * v.norm_squared())
    }

    /// `(φ(IR(Iv, v)) v, v)` for a scalar function φ applied spectrally.
    pub fn spectral_pairing(&self, pt: &CotangentPoint, phi: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let v = self.fibre_vector(pt);
        let op = self.curvature_operator(&v);
        let eig = SymmetricEigen::new(op);
        let mut lam = eig.eigenvalues.clone();
        for l in lam.iter_mut() {
            if *l < EIGEN_CLAMP {
                return Err(Error::Model(format!("curvature operator has negative eigenvalue {l:.3e}")));
            }
            *l = phi(l.max(0.0))?;
        }
        let fv = &eig.eigenvectors * DMatrix::from_diagonal(&lam) * eig.eigenvectors.transpose() * &v;
        Ok(fv.dot(&v))
    }

    /// The scalar `u = IR(Iv, v)` for CP¹.
    pub fn u(&self, pt: &CotangentPoint) -> f64 {
        self.curvature * self.fibre_vector(pt).norm_squared()
    }
}

/// Standard complex structure of the chart `(q, p)`.
pub fn chart_structure() -> DMatrix<f64> {
    let mut s = DMatrix::zeros(4, 4);
    for b in [0, 2] {
        s[(b + 1, b)] = 1.0;
        s[(b, b + 1)] = -1.0;
    }
    s
}

/// `ω₂` and `ω₃` from the canonical form `dp∧dq = ω₂ + iω₃`.
pub fn canonical_forms() -> (FormValue, FormValue) {
    let w2 = FormValue::two_form(4, &[(0, 2, -1.0), (1, 3, 1.0)]);
    let w3 = FormValue::two_form(4, &[(0, 3, -1.0), (1, 2, -1.0)]);
    (w2, w3)
}

/// Generator of `v ↦ e^{iθ} v`.
pub fn fibre_rotation_field(x: &[f64]) -> Vec<f64> {
    vec![0.0, 0.0, -x[3], x[2]]
}

/// `h(v) = (f(IR(Iv, v)) v, v)`.
pub fn potential_h(model: &SymmetricSpaceModel, pt: &CotangentPoint) -> Result<f64> {
    model.spectral_pairing(pt, |u| BGScalarFns.f(u))
}

/// `k(v) = (g(IR(Iv, v)) v, v)`.
pub fn potential_k(model: &SymmetricSpaceModel, pt: &CotangentPoint) -> Result<f64> {
    model.spectral_pairing(pt, |u| BGScalarFns.g(u))
}

/// `μ(v) = −2((uf(u))′ v, v)`.
pub fn bg_moment_map(model: &SymmetricSpaceModel, pt: &CotangentPoint) -> Result<f64> {
    Ok(-2.0 * model.spectral_pairing(pt, |u| BGScalarFns.uf_prime(u))?)
}

fn scalar_on_chart<'a>(
    model: &'a SymmetricSpaceModel,
    phi: fn(&SymmetricSpaceModel, &CotangentPoint) -> Result<f64>,
) -> ScalarFn<impl Fn(&[f64]) -> f64 + Sync + 'a> {
    ScalarFn::new(4, move |x: &[f64]| {
        CotangentPoint::from_real(x).and_then(|pt| phi(model, &pt)).unwrap_or(f64::NAN)
    })
}

fn ddc_chart(
    model: &SymmetricSpaceModel,
    phi: fn(&SymmetricSpaceModel, &CotangentPoint) -> Result<f64>,
    pt: &CotangentPoint,
    scheme: &FdScheme,
) -> Result<FormValue> {
    let field = scalar_on_chart(model, phi);
    let i = chart_structure();
    let out = ddc(&field, |_: &[f64]| i.clone(), &pt.to_real(), scheme)?;
    if out.components().iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("stencil left the chart".into()));
    }
    Ok(out)
}

/// `ω₁ = p*ω + dd^c h`.
pub fn bg_omega1(model: &SymmetricSpaceModel, pt: &CotangentPoint, scheme: &FdScheme) -> Result<FormValue> {
    Ok(model.base_kahler_form(pt) + ddc_chart(model, potential_h, pt, scheme)?)
}

/// Both sides `(ω₁ + dd^c μ, p*ω + dd^c k)` of the curvature identity.
pub fn bg_curvature_pair(
    model: &SymmetricSpaceModel,
    pt: &CotangentPoint,
    scheme: &FdScheme,
) -> Result<(FormValue, FormValue)> {
    let lhs = bg_omega1(model, pt, scheme)? + ddc_chart(model, bg_moment_map, pt, scheme)?;
    let rhs = model.base_kahler_form(pt) + ddc_chart(model, potential_k, pt, scheme)?;
    Ok((lhs, rhs))
}

/// Curvature `F = p*ω + dd^c k`.
pub fn bg_curvature(model: &SymmetricSpaceModel, pt: &CotangentPoint, scheme: &FdScheme) -> Result<FormValue> {
    Ok(bg_curvature_pair(model, pt, scheme)?.1)
}

/// Residuals of the two moment-map characterizations at `pt`:
/// `|μ − ∂_λ h(λ⁻¹v)|_{λ=1}|` and `|μ + i_X d^c h|`.
pub fn bg_moment_residuals(model: &SymmetricSpaceModel, pt: &CotangentPoint, scheme: &FdScheme) -> Result<(f64, f64)> {
    let mu = bg_moment_map(model, pt)?;
    let h_at = |lam: f64| potential_h(model, &CotangentPoint { q: pt.q, p: pt.p / lam });
    let d = 1e-3;
    let dl = (h_at(1.0 - 2.0 * d)? - 8.0 * h_at(1.0 - d)? + 8.0 * h_at(1.0 + d)? - h_at(1.0 + 2.0 * d)?) / (12.0 * d);
    let x = pt.to_real();
    let field = scalar_on_chart(model, potential_h);
    let dh = gradient(&field, &x, scheme)?;
    // −i_X d^c h = dh(IX)
    let ix = chart_structure() * DVector::from_row_slice(&fibre_rotation_field(&x));
    let via_dc: f64 = dh.components().iter().zip(ix.iter()).map(|(a, b)| a * b).sum();
    Ok(((mu - dl).abs(), (mu - via_dc).abs()))
}

/// Residuals of the hyperkähler structure built from `(ω₁, I, dp∧dq)`.
#[derive(Debug, Clone, Serialize)]
pub struct BgHkResiduals {
    /// ‖J² + Id‖ with `J = −g⁻¹ω₂`.
    pub j_square: f64,
    /// ‖IJ + JI‖.
    pub anticommute: f64,
    /// (1,1)-residual of F for I, J, K.
    pub type11: [f64; 3],
}

/// Builds `g(X, Y) = ω₁(X, IY)`, `J` from `ω₂`, `K = IJ`, and tests F against them.
pub fn bg_hyperkahler_check(model: &SymmetricSpaceModel, pt: &CotangentPoint, scheme: &FdScheme) -> Result<BgHkResiduals> {
    let i = chart_structure();
    let w1 = bg_omega1(model, pt, scheme)?.to_matrix();
    let g = MetricValue::new(&w1 * &i)?;
    let (w2, _) = canonical_forms();
    let j = structure_from_form(&g, &w2);
    let k = &i * &j;
    let id = DMatrix::<f64>::identity(4, 4);
    let f = bg_curvature(model, pt, scheme)?;
    Ok(BgHkResiduals {
        j_square: (&j * &j + &id).amax(),
        anticommute: (&i * &j + &j * &i).amax(),
        type11: [
            type11_residual_metric(&f, &i, &g),
            type11_residual_metric(&f, &j, &g),
            type11_residual_metric(&f, &k, &g),
        ],
    })
}
