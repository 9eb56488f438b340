//! Flat quaternionic space Hⁿ = Cⁿ ⊕ jCⁿ with its Kähler triple, diagonal circle
//! actions and the hyperholomorphic curvature of the induced line bundle.
//!
//! Real coordinates are packed as
//! `(Re z₁, Im z₁, …, Re zₙ, Im zₙ, Re w₁, Im w₁, …, Re wₙ, Im wₙ)`
//! everywhere in the crate.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcalc::{ddc, ext_deriv, gradient, structure_from_form, FdScheme, FnField, FormValue, MetricValue, ScalarFn};

/// Flat Hⁿ with the constant triple I, J, K.
#[derive(Debug, Clone)]
pub struct FlatModel {
    n: usize,
    omegas: [FormValue; 3],
    structures: [DMatrix<f64>; 3],
}

impl FlatModel {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("quaternionic dimension must be at least 1".into()));
        }
        let omegas = kahler_triple(n);
        let g = MetricValue::euclidean(4 * n);
        let structures = [0, 1, 2].map(|i| structure_from_form(&g, &omegas[i]));
        Ok(Self { n, omegas, structures })
    }

    pub fn quaternionic_dim(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        4 * self.n
    }

    pub fn omega(&self, i: usize) -> &FormValue {
        &self.omegas[i]
    }

    pub fn omegas(&self) -> &[FormValue; 3] {
        &self.omegas
    }

    /// I, J, K as real matrices, with ω_i(X, Y) = g(S_i X, Y).
    pub fn structure(&self, i: usize) -> &DMatrix<f64> {
        &self.structures[i]
    }

    pub fn structures(&self) -> &[DMatrix<f64>; 3] {
        &self.structures
    }
}

pub(crate) fn z_re(i: usize) -> usize {
    2 * i
}
pub(crate) fn w_re(n: usize, i: usize) -> usize {
    2 * n + 2 * i
}

/// ω₁ = (i/2)Σ(dz∧dz̄ + dw∧dw̄), ω₂ + iω₃ = Σ dz∧dw in real coordinates.
pub fn kahler_triple(n: usize) -> [FormValue; 3] {
    let dim = 4 * n;
    let mut w1 = Vec::new();
    let mut w2 = Vec::new();
    let mut w3 = Vec::new();
    for i in 0..n {
        let (zr, zi, wr, wi) = (z_re(i), z_re(i) + 1, w_re(n, i), w_re(n, i) + 1);
        w1.push((zr, zi, 1.0));
        w1.push((wr, wi, 1.0));
        // dz∧dw = (dzr∧dwr − dzi∧dwi) + i(dzr∧dwi + dzi∧dwr)
        w2.push((zr, wr, 1.0));
        w2.push((zi, wi, -1.0));
        w3.push((zr, wi, 1.0));
        w3.push((zi, wr, 1.0));
    }
    [FormValue::two_form(dim, &w1), FormValue::two_form(dim, &w2), FormValue::two_form(dim, &w3)]
}

/// Diagonal circle action `z_i ↦ e^{ik_iθ} z_i`, `w_i ↦ e^{il_iθ} w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleActionSpec {
    pub k: Vec<i64>,
    pub l: Vec<i64>,
}

impl CircleActionSpec {
    pub fn new(k: Vec<i64>, l: Vec<i64>) -> Result<Self> {
        if k.is_empty() || k.len() != l.len() {
            return Err(Error::Invalid(format!("weight vectors must be non-empty and equal length ({} vs {})", k.len(), l.len())));
        }
        Ok(Self { k, l })
    }

    /// The same weight pair on every quaternionic coordinate.
    pub fn uniform(n: usize, k: i64, l: i64) -> Self {
        Self { k: vec![k; n], l: vec![l; n] }
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.k.iter().chain(&self.l).all(|&x| x == 0)
    }

    /// The integer n with (ω₂+iω₃) ↦ e^{inθ}(ω₂+iω₃); requires k_i + l_i = n for all i.
    pub fn rotation_degree(&self) -> Result<i64> {
        let n = self.k[0] + self.l[0];
        if self.k.iter().zip(&self.l).any(|(k, l)| k + l != n) {
            return Err(Error::Model(format!(
                "weights {:?}/{:?} do not rotate ω₂+iω₃ by a single degree",
                self.k, self.l
            )));
        }
        Ok(n)
    }

    /// Real generator matrix (skew, commutes with I).
    pub fn generator(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(4 * n, 4 * n);
        for i in 0..n {
            for (base, wt) in [(z_re(i), self.k[i]), (w_re(n, i), self.l[i])] {
                let w = wt as f64;
                m[(base + 1, base)] = w;
                m[(base, base + 1)] = -w;
            }
        }
        m
    }

    /// Finite rotation by angle θ.
    pub fn rotation(&self, theta: f64) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(4 * n, 4 * n);
        for i in 0..n {
            for (base, wt) in [(z_re(i), self.k[i]), (w_re(n, i), self.l[i])] {
                let (s, c) = ((wt as f64) * theta).sin_cos();
                m[(base, base)] = c;
                m[(base + 1, base + 1)] = c;
                m[(base + 1, base)] = s;
                m[(base, base + 1)] = -s;
            }
        }
        m
    }
}

fn check_point(spec: &CircleActionSpec, p: &[f64]) -> Result<()> {
    if p.len() != 4 * spec.n() {
        return Err(Error::Invalid(format!("point has {} coordinates, expected {}", p.len(), 4 * spec.n())));
    }
    Ok(())
}

/// X(p) = d/dθ|₀ of the weighted rotation.
pub fn action_vector_field(spec: &CircleActionSpec, p: &[f64]) -> Result<Vec<f64>> {
    check_point(spec, p)?;
    let g = spec.generator();
    Ok((0..p.len()).map(|r| (0..p.len()).map(|c| g[(r, c)] * p[c]).sum()).collect())
}

/// μ = −½ Σ (k_i|z_i|² + l_i|w_i|²), normalized by μ(0) = 0.
pub fn moment_map(spec: &CircleActionSpec, p: &[f64]) -> f64 {
    let n = spec.n();
    let mut s = 0.0;
    for i in 0..n {
        let z2 = p[z_re(i)].powi(2) + p[z_re(i) + 1].powi(2);
        let w2 = p[w_re(n, i)].powi(2) + p[w_re(n, i) + 1].powi(2);
        s += spec.k[i] as f64 * z2 + spec.l[i] as f64 * w2;
    }
    -0.5 * s
}

/// Curvature of the hyperholomorphic bundle, F = ω₁ + (1/n)·dd^cμ.
///
/// For a degree-n action the circle that rotates ω₂+iω₃ once is the quotient by Z_n,
/// whose moment map is μ/n; for n = 1 this is ω₁ + dd^cμ. A trivial action gives ω₁.
pub fn hyperholo_curvature(spec: &CircleActionSpec, p: &[f64], scheme: &FdScheme) -> Result<FormValue> {
    check_point(spec, p)?;
    let model = FlatModel::new(spec.n())?;
    let omega1 = model.omega(0).clone();
    if spec.is_trivial() {
        return Ok(omega1);
    }
    let n = spec.rotation_degree()?;
    if n == 0 {
        return Err(Error::Model("triholomorphic action: no hyperholomorphic lift of this type".into()));
    }
    let mu = ScalarFn::new(4 * spec.n(), |q: &[f64]| moment_map(spec, q));
    let i = model.structure(0).clone();
    let ddc_mu = ddc(&mu, |_: &[f64]| i.clone(), p, scheme)?;
    Ok(&omega1 + &ddc_mu.scale(1.0 / n as f64))
}

/// The combination `ω₁ + n·dd^cμ` with the degree as a multiplier rather than a divisor.
pub fn scaled_up_curvature(spec: &CircleActionSpec, p: &[f64], scheme: &FdScheme) -> Result<FormValue> {
    check_point(spec, p)?;
    let model = FlatModel::new(spec.n())?;
    let n = if spec.is_trivial() { 0 } else { spec.rotation_degree()? };
    let mu = ScalarFn::new(4 * spec.n(), |q: &[f64]| moment_map(spec, q));
    let i = model.structure(0).clone();
    let ddc_mu = ddc(&mu, |_: &[f64]| i.clone(), p, scheme)?;
    Ok(model.omega(0) + &ddc_mu.scale(n as f64))
}

/// `max_θ ‖R_θ*(ω₂+iω₃) − e^{inθ}(ω₂+iω₃)‖` over the sampled angles.
pub fn rotation_degree_check(spec: &CircleActionSpec, n: i64, thetas: &[f64]) -> Result<f64> {
    let model = FlatModel::new(spec.n())?;
    let w2 = model.omega(1).to_matrix();
    let w3 = model.omega(2).to_matrix();
    let mut worst: f64 = 0.0;
    for &t in thetas {
        let r = spec.rotation(t);
        let p2 = r.transpose() * &w2 * &r;
        let p3 = r.transpose() * &w3 * &r;
        let (s, c) = (n as f64 * t).sin_cos();
        let e2 = &w2 * c - &w3 * s;
        let e3 = &w2 * s + &w3 * c;
        worst = worst.max((p2 - e2).amax()).max((p3 - e3).amax());
    }
    Ok(worst)
}

/// `max_a |∂_a μ − (i_Xω₁)_a|` with ∂μ by finite differences.
pub fn moment_residual(spec: &CircleActionSpec, p: &[f64], scheme: &FdScheme) -> Result<f64> {
    check_point(spec, p)?;
    let model = FlatModel::new(spec.n())?;
    let mu = ScalarFn::new(4 * spec.n(), |q: &[f64]| moment_map(spec, q));
    let dmu = gradient(&mu, p, scheme)?;
    let x = action_vector_field(spec, p)?;
    let ix = model.omega(0).interior(&x);
    Ok((&dmu - &ix).max_abs())
}

/// Killing and ω₁-preservation residual of the (linear) action field:
/// `max(‖A + Aᵀ‖, ‖AᵀW₁ + W₁A‖)`.
pub fn killing_residual(spec: &CircleActionSpec) -> Result<f64> {
    let model = FlatModel::new(spec.n())?;
    let a = spec.generator();
    let w1 = model.omega(0).to_matrix();
    Ok((&a + a.transpose()).amax().max((a.transpose() * &w1 + &w1 * &a).amax()))
}

/// `‖dF‖` at p, differentiating the curvature field by finite differences.
pub fn curvature_closedness(spec: &CircleActionSpec, p: &[f64], scheme: &FdScheme) -> Result<f64> {
    let inner = FdScheme { h: scheme.h.max(1e-2), ..*scheme };
    let field = FnField::new(4 * spec.n(), 2, |q: &[f64]| hyperholo_curvature(spec, q, &inner));
    Ok(ext_deriv(&field, p, scheme)?.max_abs())
}
