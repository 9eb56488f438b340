use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::action::{hk_moment, moment_jacobian, moment_vector, LinearAction};
use super::level::{condition, LevelSetPoint, LevelSpec, LEVEL_TOL, MAX_CONDITION, MAX_NEWTON_ITERS};
use crate::error::{Error, Result};
use crate::hkspace::{moment_map, CircleActionSpec};
use crate::numcalc::{ext_deriv, gradient, FdScheme, FnField, FormValue, ScalarFn};

/// Modified Gram–Schmidt; fails if a column is dependent on the previous ones.
fn orthonormalize(cols: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(cols.len());
    for c in cols {
        let scale = c.norm();
        let mut v = c.clone();
        for q in &out {
            v -= q * q.dot(&v);
        }
        let nv = v.norm();
        if scale == 0.0 || nv < scale / MAX_CONDITION {
            return Err(Error::NonFree { cond: if nv > 0.0 { scale / nv } else { f64::INFINITY } });
        }
        out.push(v / nv);
    }
    Ok(out)
}

/// Orthonormal basis of `span{ξ_a m, Iξ_a m, Jξ_a m, Kξ_a m}`.
fn vertical_basis(action: &LinearAction, m: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
    let mut cols = Vec::new();
    for g in action.generators() {
        let x = g * m;
        cols.push(x.clone());
        for s in action.model().structures() {
            cols.push(s * &x);
        }
    }
    orthonormalize(&cols)
}

/// Projection onto the orthogonal complement of the vertical space at `m`.
fn horizontal_projector(action: &LinearAction, m: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = m.len();
    let mut p = DMatrix::identity(n, n);
    for q in vertical_basis(action, m)? {
        p -= &q * q.transpose();
    }
    Ok(p)
}

/// Horizontal tangent data of the quotient at one level-set point.
#[derive(Debug, Clone)]
pub struct QuotientSample {
    pub m: DVector<f64>,
    /// Orthonormal horizontal frame, as columns.
    pub frame: DMatrix<f64>,
    /// Quotient metric on the frame (the identity).
    pub metric: DMatrix<f64>,
    /// `ω̄_j` on the frame.
    pub omegas: [DMatrix<f64>; 3],
    /// `Ī, J̄, K̄` on the frame.
    pub structures: [DMatrix<f64>; 3],
}

impl QuotientSample {
    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn omega_form(&self, j: usize) -> FormValue {
        FormValue::from_matrix(&self.omegas[j])
    }

    /// `max ‖S̄_j² + Id‖`.
    pub fn structure_residual(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        self.structures.iter().map(|s| (s * s + &id).amax()).fold(0.0, f64::max)
    }

    /// `max |S̄_1S̄_2 − S̄_3|` and cyclic permutations.
    pub fn quaternion_residual(&self) -> f64 {
        let s = &self.structures;
        (0..3).map(|i| (&s[i] * &s[(i + 1) % 3] - &s[(i + 2) % 3]).amax()).fold(0.0, f64::max)
    }

    /// `max |ω̄_i∧ω̄_j − 2δ_ij vol|` with `vol = ω̄₁²/2`, which is ±1 on the orthonormal frame.
    pub fn wedge_residual(&self) -> f64 {
        let w: Vec<FormValue> = (0..3).map(|j| self.omega_form(j)).collect();
        let vol = 0.5 * w[0].wedge(&w[0]).components()[0];
        let mut worst = (vol.abs() - 1.0).abs();
        for i in 0..3 {
            for j in 0..3 {
                let top = w[i].wedge(&w[j]).components()[0];
                let expect = if i == j { 2.0 * vol } else { 0.0 };
                worst = worst.max((top - expect).abs());
            }
        }
        worst
    }
}

/// Horizontal space `ker Dν ∩ (orbit)^⊥` at a level-set point, with the restricted forms.
pub fn quotient_sample(action: &LinearAction, lsp: &LevelSetPoint) -> Result<QuotientSample> {
    let m = &lsp.m;
    let n = m.len();
    let vert = vertical_basis(action, m)?;
    let d = n - vert.len();
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(d);
    for k in 0..n {
        if accepted.len() == d {
            break;
        }
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        for q in vert.iter().chain(&accepted) {
            v -= q * q.dot(&v);
        }
        for q in vert.iter().chain(&accepted) {
            v -= q * q.dot(&v);
        }
        let nv = v.norm();
        if nv > 1e-3 {
            accepted.push(v / nv);
        }
    }
    if accepted.len() != d {
        return Err(Error::NonFree { cond: f64::INFINITY });
    }
    let frame = DMatrix::from_columns(&accepted);
    let model = action.model();
    let omegas = std::array::from_fn(|j| frame.transpose() * model.omega(j).to_matrix() * &frame);
    let structures = std::array::from_fn(|j| frame.transpose() * model.structure(j) * &frame);
    Ok(QuotientSample { m: m.clone(), metric: DMatrix::identity(d, d), frame, omegas, structures })
}

/// Local section `t ↦ m₀ + Σ t_a e_a + N s(t)` of the level set, transverse to the orbits,
/// with `N` the fixed normals `S_j ξ_a m₀`.
pub struct QuotientChart<'a> {
    pub action: &'a LinearAction,
    pub target: DVector<f64>,
    pub sample: QuotientSample,
    normals: DMatrix<f64>,
}

impl<'a> QuotientChart<'a> {
    pub fn new(action: &'a LinearAction, level: &LevelSpec, lsp: &LevelSetPoint) -> Result<Self> {
        let sample = quotient_sample(action, lsp)?;
        let normals = moment_jacobian(action, &lsp.m).transpose();
        Ok(Self { action, target: level.target(), sample, normals })
    }

    pub fn dim(&self) -> usize {
        self.sample.dim()
    }

    fn jn(&self, m: &DVector<f64>) -> Result<(DMatrix<f64>, nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>)> {
        let jac = moment_jacobian(self.action, m);
        let jn = &jac * &self.normals;
        let cond = condition(&jn);
        if cond > MAX_CONDITION {
            return Err(Error::NonFree { cond });
        }
        Ok((jac, jn.lu()))
    }

    /// The level-set point over chart coordinate `t`.
    pub fn point(&self, t: &[f64]) -> Result<DVector<f64>> {
        let base = &self.sample.m + &self.sample.frame * DVector::from_row_slice(t);
        let mut s = DVector::zeros(self.normals.ncols());
        for _ in 0..MAX_NEWTON_ITERS {
            let m = &base + &self.normals * &s;
            let r = moment_vector(self.action, &m) - &self.target;
            if r.amax() < LEVEL_TOL {
                return Ok(m);
            }
            let (_, lu) = self.jn(&m)?;
            s -= lu.solve(&r).ok_or(Error::NonFree { cond: f64::INFINITY })?;
        }
        Err(Error::Convergence { iters: MAX_NEWTON_ITERS, residual: f64::NAN })
    }

    /// Coordinate tangent vectors `∂φ/∂t_a = e_a − N (Dν N)⁻¹ Dν e_a` at `m = φ(t)`, as columns.
    pub fn tangents(&self, m: &DVector<f64>) -> Result<DMatrix<f64>> {
        let (jac, lu) = self.jn(m)?;
        let rhs = &jac * &self.sample.frame;
        let ds = lu.solve(&rhs).ok_or(Error::NonFree { cond: f64::INFINITY })?;
        Ok(&self.sample.frame - &self.normals * ds)
    }

    /// A 1-form field on the chart given by its values on the coordinate tangents.
    fn pulled_back<F>(&self, eval: F) -> impl crate::numcalc::FormField + '_
    where
        F: Fn(&DVector<f64>, &DMatrix<f64>) -> Result<Vec<f64>> + Sync + 'a,
    {
        FnField::new(self.dim(), 1, move |t: &[f64]| {
            let m = self.point(t)?;
            let b = self.tangents(&m)?;
            Ok(FormValue::covector(&eval(&m, &b)?))
        })
    }
}

/// The rotating circle pushed down to the quotient.
#[derive(Debug, Clone, Serialize)]
pub struct DescendedCircle {
    /// Horizontal projection of the action field, in frame coordinates.
    pub x_bar: Vec<f64>,
    /// Restricted moment map.
    pub mu_bar: f64,
    /// Rotation degree on `ω₂ + iω₃`.
    pub degree: i64,
}

fn check_rotator(action: &LinearAction, rotator: &CircleActionSpec, m: &DVector<f64>) -> Result<DMatrix<f64>> {
    let r = rotator.generator();
    if r.nrows() != action.real_dim() {
        return Err(Error::Invalid("rotator acts on a different Hⁿ".into()));
    }
    let comm = action.commutator_residual(&r);
    if comm > 1e-12 {
        return Err(Error::Model(format!("rotator does not commute with the group (residual {comm:.3e})")));
    }
    let nu = hk_moment(action, m);
    for th in [0.37, 1.9] {
        let moved = hk_moment(action, &(rotator.rotation(th) * m));
        let drift = (moved.row(0) - nu.row(0)).amax().max(moved.rows(1, 2).amax());
        if drift > 1e-10 {
            return Err(Error::Model(format!("rotator does not preserve the level set (drift {drift:.3e})")));
        }
    }
    Ok(r)
}

/// `(X̄, μ̄)` of a circle action commuting with the group and preserving the level set.
pub fn descended_circle_data(
    action: &LinearAction,
    rotator: &CircleActionSpec,
    sample: &QuotientSample,
) -> Result<DescendedCircle> {
    let r = check_rotator(action, rotator, &sample.m)?;
    let x = &r * &sample.m;
    let x_bar = sample.frame.transpose() * x;
    let degree = if rotator.is_trivial() { 0 } else { rotator.rotation_degree()? };
    Ok(DescendedCircle { x_bar: x_bar.iter().copied().collect(), mu_bar: moment_map(rotator, sample.m.as_slice()), degree })
}

/// `max |dμ̄ − i_{X̄}ω̄₁|` on the quotient frame, with dμ̄ by finite differences along the chart.
pub fn descended_moment_residual(chart: &QuotientChart, rotator: &CircleActionSpec, scheme: &FdScheme) -> Result<f64> {
    let data = descended_circle_data(chart.action, rotator, &chart.sample)?;
    let mu = ScalarFn::new(chart.dim(), |t: &[f64]| {
        chart.point(t).map(|m| moment_map(rotator, m.as_slice())).unwrap_or(f64::NAN)
    });
    let d = gradient(&mu, &vec![0.0; chart.dim()], scheme)?;
    let ix = chart.sample.omega_form(0).interior(&data.x_bar);
    Ok((d - ix).max_abs())
}

/// `dd^cμ̄` on the quotient frame: exterior derivative of `v ↦ −dμ(I P_H v)` along the chart.
pub fn quotient_ddc_mu(chart: &QuotientChart, rotator: &CircleActionSpec, scheme: &FdScheme) -> Result<FormValue> {
    let r = check_rotator(chart.action, rotator, &chart.sample.m)?;
    let model = chart.action.model();
    let w1 = model.omega(0).to_matrix();
    let i = model.structure(0).clone();
    let field = chart.pulled_back(move |m, b| {
        let dmu = (&r * m).transpose() * &w1;
        let ph = horizontal_projector(chart.action, m)?;
        let ib = &i * ph * b;
        Ok((0..b.ncols()).map(|a| -(&dmu * ib.column(a))[(0, 0)]).collect())
    });
    ext_deriv(&field, &vec![0.0; chart.dim()], scheme)
}

/// `ω̄₁ + (1/n)·dd^cμ̄` for the descended rotation of degree n.
pub fn quotient_hyperholo_curvature(
    chart: &QuotientChart,
    rotator: &CircleActionSpec,
    scheme: &FdScheme,
) -> Result<FormValue> {
    let w1 = chart.sample.omega_form(0);
    if rotator.is_trivial() {
        return Ok(w1);
    }
    let n = rotator.rotation_degree()?;
    if n == 0 {
        return Err(Error::Model("triholomorphic rotator".into()));
    }
    Ok(w1 + quotient_ddc_mu(chart, rotator, scheme)?.scale(1.0 / n as f64))
}

/// Curvature of the canonical connection on `ν⁻¹(c,0,0) ×_G C` for the character `χ`:
/// `−d(χ∘θ)` with `θ(v) = Gram⁻¹ ⟨ξ m, v⟩` the orthogonal-projection connection.
pub fn canonical_bundle_curvature(chart: &QuotientChart, chi: &[i64], scheme: &FdScheme) -> Result<FormValue> {
    if chi.len() != chart.action.dim_g() {
        return Err(Error::Invalid("character needs one weight per generator".into()));
    }
    if !chart.action.is_abelian() {
        return Err(Error::Model("canonical curvature is implemented for tori".into()));
    }
    let chi: Vec<f64> = chi.iter().map(|&x| x as f64).collect();
    let field = chart.pulled_back(move |m, b| {
        let xi = chart.action.orbit_vectors(m);
        let gram = xi.transpose() * &xi;
        let theta = gram.lu().solve(&(xi.transpose() * b)).ok_or(Error::NonFree { cond: f64::INFINITY })?;
        Ok((0..b.ncols()).map(|a| chi.iter().enumerate().map(|(k, c)| c * theta[(k, a)]).sum()).collect())
    });
    Ok(ext_deriv(&field, &vec![0.0; chart.dim()], scheme)?.scale(-1.0))
}

/// Gibbons–Hawking data `(x, V)` of a residual triholomorphic circle on a four-dimensional quotient.
///
/// The fibre angle has period 4π, so the circle is generated by `η/4`:
/// `x = ν^η/4` and `V⁻¹ = |P_H ηm|²/16`.
pub fn gh_coordinates(action: &LinearAction, eta: &CircleActionSpec, sample: &QuotientSample) -> Result<([f64; 3], f64)> {
    if sample.dim() != 4 {
        return Err(Error::Invalid(format!("GH coordinates need a 4-dimensional quotient, got {}", sample.dim())));
    }
    let e = eta.generator();
    let comm = action.commutator_residual(&e);
    let tri = action.model().structures().iter().map(|s| (s * &e - &e * s).amax()).fold(0.0, f64::max);
    if comm > 1e-12 || tri > 1e-12 {
        return Err(Error::Model("residual circle must commute with the group and be triholomorphic".into()));
    }
    let tri_action = LinearAction::new(action.model().quaternionic_dim(), vec![e.clone()])?;
    let nu = hk_moment(&tri_action, &sample.m);
    let y = sample.frame.transpose() * (&e * &sample.m);
    let len2 = y.norm_squared() / 16.0;
    if len2 < 1e-20 {
        return Err(Error::Domain("sample is a fixed point of the residual circle".into()));
    }
    Ok(([nu[(0, 0)] / 4.0, nu[(1, 0)] / 4.0, nu[(2, 0)] / 4.0], 1.0 / len2))
}

/// Result of fitting `V = Σ_i 1/|x − a_i|` to samples.
#[derive(Debug, Clone, Serialize)]
pub struct CenterFit {
    pub centers: Vec<[f64; 3]>,
    /// `max_s |V_s − Σ 1/|x_s − a_i||`.
    pub residual: f64,
    pub iterations: usize,
}

impl CenterFit {
    pub fn separation(&self) -> f64 {
        let (a, b) = (self.centers[0], self.centers[1]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

fn fit_residuals(samples: &[([f64; 3], f64)], p: &DVector<f64>, k: usize) -> (DVector<f64>, DMatrix<f64>) {
    let mut r = DVector::zeros(samples.len());
    let mut jac = DMatrix::zeros(samples.len(), 3 * k);
    for (s, (x, v)) in samples.iter().enumerate() {
        let mut model = 0.0;
        for i in 0..k {
            let d: Vec<f64> = (0..3).map(|c| x[c] - p[3 * i + c]).collect();
            let dist = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            model += 1.0 / dist;
            for c in 0..3 {
                jac[(s, 3 * i + c)] = d[c] / dist.powi(3);
            }
        }
        r[s] = model - v;
    }
    (r, jac)
}

fn levenberg_marquardt(samples: &[([f64; 3], f64)], mut p: DVector<f64>, k: usize) -> (DVector<f64>, f64, usize) {
    let mut lambda = 1e-3;
    let (mut r, mut jac) = fit_residuals(samples, &p, k);
    let mut cost = r.norm_squared();
    let mut iters = 0;
    for it in 0..500 {
        iters = it;
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let damped = &jtj + DMatrix::from_diagonal(&jtj.diagonal()) * lambda;
        let Some(step) = damped.lu().solve(&g) else { break };
        let trial = &p - &step;
        let (rt, jt) = fit_residuals(samples, &trial, k);
        let ct = rt.norm_squared();
        if ct.is_finite() && ct < cost {
            let done = step.amax() < 1e-15 * (1.0 + p.amax()) || cost - ct < 1e-30;
            p = trial;
            r = rt;
            jac = jt;
            cost = ct;
            lambda = (lambda / 3.0).max(1e-15);
            if done {
                break;
            }
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    (p, r.amax(), iters)
}

/// Least-squares fit of two centers to `(x, V)` samples, multi-started from the data.
pub fn fit_two_centers(samples: &[([f64; 3], f64)]) -> Result<CenterFit> {
    if samples.len() < 7 {
        return Err(Error::Invalid("at least seven samples are needed to fit two centers".into()));
    }
    let n = samples.len() as f64;
    let mean: Vec<f64> = (0..3).map(|c| samples.iter().map(|s| s.0[c]).sum::<f64>() / n).collect();
    let mut cov = DMatrix::<f64>::zeros(3, 3);
    for (x, _) in samples {
        for a in 0..3 {
            for b in 0..3 {
                cov[(a, b)] += (x[a] - mean[a]) * (x[b] - mean[b]) / n;
            }
        }
    }
    let eig = cov.symmetric_eigen();
    let sigma = eig.eigenvalues.max().max(1e-12).sqrt();
    let mut starts = Vec::new();
    for k in 0..3 {
        let axis = eig.eigenvectors.column(k).into_owned();
        for spread in [0.03, 0.1, 0.25, 0.5, 1.0, 2.0] {
            let s = spread * sigma;
            starts.push(DVector::from_fn(6, |r, _| mean[r % 3] + if r < 3 { -s } else { s } * axis[r % 3]));
        }
    }
    let mut by_v: Vec<usize> = (0..samples.len()).collect();
    by_v.sort_by(|&a, &b| samples[b].1.total_cmp(&samples[a].1));
    let first = samples[by_v[0]].0;
    if let Some(&j) = by_v.iter().find(|&&j| {
        let x = samples[j].0;
        (0..3).map(|c| (x[c] - first[c]).powi(2)).sum::<f64>().sqrt() > 1.0 / samples[by_v[0]].1
    }) {
        let second = samples[j].0;
        starts.push(DVector::from_fn(6, |r, _| if r < 3 { first[r] } else { second[r - 3] }));
    }
    let mut best: Option<(DVector<f64>, f64, usize)> = None;
    for s in starts {
        let cand = levenberg_marquardt(samples, s, 2);
        if cand.1.is_finite() && best.as_ref().is_none_or(|b| cand.1 < b.1) {
            best = Some(cand);
        }
    }
    let (p, residual, iterations) = best.ok_or(Error::Convergence { iters: 0, residual: f64::NAN })?;
    let mut centers = vec![[p[0], p[1], p[2]], [p[3], p[4], p[5]]];
    centers.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2])));
    Ok(CenterFit { centers, residual, iterations })
}
