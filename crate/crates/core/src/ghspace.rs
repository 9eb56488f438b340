//! Multi-center Gibbons–Hawking spaces with centers on the x₁-axis, the circle lift
//! of the axial rotation, and the anti-self-dual connection built from its monopole.
//!
//! Chart coordinates are `(x₁, x₂, x₃, θ)` with orientation `dx₁∧dx₂∧dx₃∧dθ`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcalc::{
    ext_deriv, gradient, hodge_star, laplacian, surface_integral, FdScheme, FnField, FormField, FormValue,
    MetricValue, ScalarFn,
};

/// Smallest cylindrical radius used in `dφ`.
pub const AXIS_CLAMP: f64 = 1e-3;
/// Smallest admissible distance to a center.
pub const CENTER_MARGIN: f64 = 1e-6;

/// Centers `a₁ < … < a_{k+1}` on the x₁-axis, lift constant `c`, and an overall
/// scale of the potential (`V = scale·Σ 1/|x − a_i|`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhConfig {
    pub centers: Vec<f64>,
    pub c: f64,
    pub scale: f64,
}

impl GhConfig {
    pub fn new(centers: Vec<f64>, c: f64) -> Result<Self> {
        Self::with_scale(centers, c, 1.0)
    }

    pub fn with_scale(centers: Vec<f64>, c: f64, scale: f64) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Invalid("at least one center is required".into()));
        }
        if centers.iter().any(|a| !a.is_finite()) || !c.is_finite() || !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Invalid("centers, c and scale must be finite (scale > 0)".into()));
        }
        if centers.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid(format!("centers must be strictly increasing: {centers:?}")));
        }
        Ok(Self { centers, c, scale })
    }

    /// One center with `V = 1/(2r)`: flat C² in Gibbons–Hawking form.
    pub fn flat() -> Self {
        Self { centers: vec![0.0], c: 0.0, scale: 0.5 }
    }

    pub fn num_centers(&self) -> usize {
        self.centers.len()
    }

    /// Dirac coefficients `a_{k+1} − a_i` are all integers.
    pub fn is_integral(&self) -> bool {
        let last = *self.centers.last().unwrap();
        self.centers.iter().all(|a| {
            let d = last - a;
            (d - d.round()).abs() < 1e-12
        })
    }

    fn distances(&self, x: &[f64]) -> Vec<f64> {
        self.centers
            .iter()
            .map(|a| ((x[0] - a).powi(2) + x[1] * x[1] + x[2] * x[2]).sqrt())
            .collect()
    }

    /// Distance from `x` to the nearest center.
    pub fn min_distance(&self, x: &[f64]) -> f64 {
        self.distances(x).into_iter().fold(f64::INFINITY, f64::min)
    }

    fn check(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() < 3 {
            return Err(Error::Invalid("need at least the three base coordinates".into()));
        }
        let r = self.distances(x);
        if r.iter().any(|&ri| ri <= CENTER_MARGIN) {
            return Err(Error::Domain(format!("point {:?} is at a center", &x[..3])));
        }
        Ok(r)
    }

    /// Per-center string tags that keep the Dirac strings away from `x`.
    pub fn default_tags(&self, x: &[f64]) -> Vec<i8> {
        self.centers.iter().map(|a| if x[0] >= *a { 1 } else { -1 }).collect()
    }

    /// Tags for which every `α_i` vanishes on the open axis segment `(a_i, a_{i+1})`.
    pub fn segment_tags(&self, segment: usize) -> Vec<i8> {
        (0..self.num_centers()).map(|j| if j <= segment { 1 } else { -1 }).collect()
    }
}

/// A chart point with its gauge tags (+1: string along −x₁, −1: string along +x₁).
#[derive(Debug, Clone, PartialEq)]
pub struct GhPoint {
    pub x: [f64; 3],
    pub theta: f64,
    pub tags: Vec<i8>,
}

impl GhPoint {
    pub fn new(cfg: &GhConfig, x: [f64; 3], theta: f64) -> Result<Self> {
        let tags = cfg.default_tags(&x);
        Self::with_tags(cfg, x, theta, tags)
    }

    pub fn with_tags(cfg: &GhConfig, x: [f64; 3], theta: f64, tags: Vec<i8>) -> Result<Self> {
        if tags.len() != cfg.num_centers() || tags.iter().any(|t| t.abs() != 1) {
            return Err(Error::Invalid("one ±1 tag per center is required".into()));
        }
        let r = cfg.check(&x)?;
        let rho = x[1].hypot(x[2]);
        if rho < AXIS_CLAMP {
            for ((a, ri), s) in cfg.centers.iter().zip(&r).zip(&tags) {
                if ((x[0] - a) / ri - f64::from(*s)).abs() > 1e-9 {
                    return Err(Error::Domain(format!("point {x:?} lies on the Dirac string of center {a}")));
                }
            }
        }
        Ok(Self { x, theta, tags })
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x[0], self.x[1], self.x[2], self.theta]
    }
}

/// `V = scale·Σ 1/|x − a_i|`.
pub fn gh_potential(cfg: &GhConfig, x: &[f64]) -> Result<f64> {
    Ok(cfg.scale * cfg.check(x)?.iter().map(|r| 1.0 / r).sum::<f64>())
}

/// `dφ` of the cylindrical angle about the x₁-axis, as a 4-dimensional covector.
fn dphi(x: &[f64]) -> [f64; 4] {
    let rho2 = (x[1] * x[1] + x[2] * x[2]).max(AXIS_CLAMP * AXIS_CLAMP);
    [0.0, -x[2] / rho2, x[1] / rho2, 0.0]
}

/// `Σ w_i ((x₁ − a_i)/r_i − s_i) dφ`.
fn weighted_alpha(cfg: &GhConfig, weights: &[f64], x: &[f64], tags: &[i8]) -> Result<FormValue> {
    let r = cfg.check(x)?;
    let coef: f64 = cfg
        .centers
        .iter()
        .zip(&r)
        .zip(tags)
        .zip(weights)
        .map(|(((a, ri), s), w)| w * ((x[0] - a) / ri - f64::from(*s)))
        .sum();
    let d = dphi(x);
    Ok(FormValue::covector(&d.map(|c| coef * c)))
}

/// `α` with `dα = ∗dV` on R³, in the gauge fixed by `tags`.
pub fn gh_alpha(cfg: &GhConfig, x: &[f64], tags: &[i8]) -> Result<FormValue> {
    weighted_alpha(cfg, &vec![cfg.scale; cfg.num_centers()], x, tags)
}

/// `dθ + α`.
fn fibre_form(cfg: &GhConfig, x: &[f64], tags: &[i8]) -> Result<FormValue> {
    let mut e = gh_alpha(cfg, x, tags)?;
    e.add_component(&[3], 1.0);
    Ok(e)
}

/// `g = V dx² + V⁻¹(dθ + α)²`.
pub fn gh_metric(cfg: &GhConfig, x: &[f64], tags: &[i8]) -> Result<MetricValue> {
    let v = gh_potential(cfg, x)?;
    let e = fibre_form(cfg, x, tags)?;
    let e = e.components();
    let mut g = DMatrix::from_fn(4, 4, |i, j| e[i] * e[j] / v);
    for i in 0..3 {
        g[(i, i)] += v;
    }
    MetricValue::new(g)
}

/// `ω_i = V dx_j∧dx_k + dx_i∧(dθ + α)` for cyclic `(i, j, k)`.
pub fn gh_kahler_triple(cfg: &GhConfig, x: &[f64], tags: &[i8]) -> Result<[FormValue; 3]> {
    let v = gh_potential(cfg, x)?;
    let e = fibre_form(cfg, x, tags)?;
    let mut out: [FormValue; 3] = std::array::from_fn(|_| FormValue::zeros(4, 2));
    for (i, w) in out.iter_mut().enumerate() {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let mut dx = [0.0; 4];
        dx[i] = 1.0;
        *w = FormValue::two_form(4, &[(j, k, v)]) + FormValue::covector(&dx).wedge(&e);
    }
    Ok(out)
}

/// Complex structures `S_i = −g⁻¹ω_i`.
pub fn gh_structures(cfg: &GhConfig, x: &[f64], tags: &[i8]) -> Result<[DMatrix<f64>; 3]> {
    let g = gh_metric(cfg, x, tags)?;
    let w = gh_kahler_triple(cfg, x, tags)?;
    Ok(std::array::from_fn(|i| crate::numcalc::structure_from_form(&g, &w[i])))
}

/// Circle lift of the axial rotation, `f = scale·Σ (x₁ − a_i)/|x − a_i| + c`.
pub fn rotation_lift_f(cfg: &GhConfig, x: &[f64]) -> Result<f64> {
    let r = cfg.check(x)?;
    Ok(cfg.scale * cfg.centers.iter().zip(&r).map(|(a, ri)| (x[0] - a) / ri).sum::<f64>() + cfg.c)
}

/// The covector `(x₂V₂ + x₃V₃)dx₁ − x₂V₁dx₂ − x₃V₁dx₃` in its written form.
pub fn displayed_df(cfg: &GhConfig, x: &[f64], scheme: &FdScheme) -> Result<FormValue> {
    let v = ScalarFn::new(3, |y: &[f64]| gh_potential(cfg, y).unwrap_or(f64::NAN));
    let dv = gradient(&v, &x[..3], scheme)?;
    let d = dv.components();
    Ok(FormValue::covector(&[x[1] * d[1] + x[2] * d[2], -x[1] * d[0], -x[2] * d[0]]))
}

/// A monopole on R³: `φ = scale·Σ q_i/|x − a_i| + c`, `A = Σ q_i α_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonopoleData {
    pub charges: Vec<f64>,
    pub constant: f64,
}

impl MonopoleData {
    /// The monopole of the lifted rotation in the gauge where `φ = Σ (a_{k+1} − a_i)/r_i + c`.
    pub fn from_config(cfg: &GhConfig) -> Self {
        let last = *cfg.centers.last().unwrap();
        Self { charges: cfg.centers.iter().map(|a| last - a).collect(), constant: cfg.c }
    }

    /// The same monopole before the gauge shift, `φ = −x₁V + f = −Σ a_i/r_i + c`.
    pub fn unshifted(cfg: &GhConfig) -> Self {
        Self { charges: cfg.centers.iter().map(|a| -a).collect(), constant: cfg.c }
    }

    /// Gauge shift `A ↦ A + tα`, `φ ↦ φ + tV`.
    pub fn shifted(&self, t: f64) -> Self {
        Self { charges: self.charges.iter().map(|q| q + t).collect(), constant: self.constant }
    }

    pub fn phi(&self, cfg: &GhConfig, x: &[f64]) -> Result<f64> {
        let r = cfg.check(x)?;
        Ok(cfg.scale * self.charges.iter().zip(&r).map(|(q, ri)| q / ri).sum::<f64>() + self.constant)
    }

    pub fn connection(&self, cfg: &GhConfig, x: &[f64], tags: &[i8]) -> Result<FormValue> {
        let w: Vec<f64> = self.charges.iter().map(|q| q * cfg.scale).collect();
        weighted_alpha(cfg, &w, x, tags)
    }
}

/// `φ = Σ_{i≤k} (a_{k+1} − a_i)/|x − a_i| + c`.
pub fn monopole_phi(cfg: &GhConfig, x: &[f64]) -> Result<f64> {
    MonopoleData::from_config(cfg).phi(cfg, x)
}

/// `Â = A − φV⁻¹(dθ + α)` on the four-dimensional chart.
pub fn connection_ahat(cfg: &GhConfig, mono: &MonopoleData, x: &[f64], tags: &[i8]) -> Result<FormValue> {
    let v = gh_potential(cfg, x)?;
    let phi = mono.phi(cfg, x)?;
    let e = fibre_form(cfg, x, tags)?;
    Ok(mono.connection(cfg, x, tags)? - e.scale(phi / v))
}

fn singular_distance(cfg: &GhConfig) -> impl Fn(&[f64]) -> f64 + Send + Sync + 'static {
    let cfg = cfg.clone();
    move |x: &[f64]| cfg.min_distance(x) - CENTER_MARGIN
}

/// `dÂ` at a point, by finite differences in the point's gauge.
pub fn curvature_ahat(cfg: &GhConfig, mono: &MonopoleData, pt: &GhPoint, scheme: &FdScheme) -> Result<FormValue> {
    let tags = pt.tags.clone();
    let field = FnField::new(4, 1, move |x: &[f64]| connection_ahat(cfg, mono, x, &tags))
        .with_singular(singular_distance(cfg));
    ext_deriv(&field, &pt.coords(), scheme)
}

/// `max |∗dÂ + dÂ|` in the Gibbons–Hawking metric.
pub fn asd_residual(cfg: &GhConfig, mono: &MonopoleData, pt: &GhPoint, scheme: &FdScheme) -> Result<f64> {
    let f = curvature_ahat(cfg, mono, pt, scheme)?;
    let g = gh_metric(cfg, &pt.x, &pt.tags)?;
    Ok((hodge_star(&g, 1.0, &f)? + f).max_abs())
}

/// `max |i_Y dÂ − d(φ/V)|` with `Y = ∂_θ`.
pub fn interior_y_residual(cfg: &GhConfig, mono: &MonopoleData, pt: &GhPoint, scheme: &FdScheme) -> Result<f64> {
    let f = curvature_ahat(cfg, mono, pt, scheme)?;
    let iy = f.interior(&[0.0, 0.0, 0.0, 1.0]);
    let ratio = ScalarFn::new(4, |x: &[f64]| {
        (|| Ok::<_, Error>(mono.phi(cfg, x)? / gh_potential(cfg, x)?))().unwrap_or(f64::NAN)
    })
    .with_singular(singular_distance(cfg));
    let d = gradient(&ratio, &pt.coords(), scheme)?;
    Ok((iy - d).max_abs())
}

/// Components of `dÂ` on the frame `(H₁, H₂, H₃, ∂_θ)`, `H_j = ∂_j − α_j ∂_θ`,
/// which does not depend on the string gauge.
pub fn invariant_curvature(cfg: &GhConfig, mono: &MonopoleData, pt: &GhPoint, scheme: &FdScheme) -> Result<FormValue> {
    let f = curvature_ahat(cfg, mono, pt, scheme)?;
    let a = gh_alpha(cfg, &pt.x, &pt.tags)?;
    let frame: Vec<Vec<f64>> = (0..4)
        .map(|j| {
            let mut v = vec![0.0; 4];
            v[j] = 1.0;
            if j < 3 {
                v[3] = -a.components()[j];
            }
            v
        })
        .collect();
    Ok(f.restrict(&frame))
}

/// `∫ ω₁` over the sphere swept by the fibre circle over `[a_i, a_{i+1}]` (0-based `segment`).
pub fn sphere_period(cfg: &GhConfig, segment: usize, resolution: usize) -> Result<f64> {
    if segment + 1 >= cfg.num_centers() {
        return Err(Error::Invalid(format!("segment {segment} needs centers {segment} and {}", segment + 1)));
    }
    let (a, b) = (cfg.centers[segment], cfg.centers[segment + 1]);
    let tags = cfg.segment_tags(segment);
    let field = FnField::new(4, 2, move |x: &[f64]| Ok(gh_kahler_triple(cfg, x, &tags)?[0].clone()));
    let surf = move |s: f64, t: f64| vec![a + s * (b - a), 0.0, 0.0, 2.0 * PI * t];
    surface_integral(&field, &surf, resolution)
}

/// Values of `(V, f, φ)` at `x` on the x₁-axis.
pub fn axis_profile(cfg: &GhConfig, x1: f64) -> Result<(f64, f64, f64)> {
    let x = [x1, 0.0, 0.0];
    Ok((gh_potential(cfg, &x)?, rotation_lift_f(cfg, &x)?, monopole_phi(cfg, &x)?))
}

/// Metric Christoffel symbols `Γ^a_{bc}` from a metric field, indexed `[a][b][c]`.
fn christoffel(metric: &dyn Fn(&[f64]) -> Result<DMatrix<f64>>, p: &[f64], h: f64) -> Result<Vec<Vec<Vec<f64>>>> {
    let n = p.len();
    let mut dg = Vec::with_capacity(n);
    for k in 0..n {
        let at = |s: f64| {
            let mut q = p.to_vec();
            q[k] += s * h;
            metric(&q)
        };
        dg.push((at(-2.0)? - at(-1.0)? * 8.0 + at(1.0)? * 8.0 - at(2.0)?) / (12.0 * h));
    }
    let ginv = metric(p)?
        .try_inverse()
        .ok_or_else(|| Error::Metric("singular metric in Christoffel symbols".into()))?;
    let mut gam = vec![vec![vec![0.0; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                gam[a][b][c] = 0.5
                    * (0..n).map(|d| ginv[(a, d)] * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)])).sum::<f64>();
            }
        }
    }
    Ok(gam)
}

/// `max |R^a_{bcd}|` by nested central differences.
pub fn riemann_max(metric: &dyn Fn(&[f64]) -> Result<DMatrix<f64>>, p: &[f64], h: f64) -> Result<f64> {
    let n = p.len();
    let gam = christoffel(metric, p, h)?;
    let mut dgam = Vec::with_capacity(n);
    for k in 0..n {
        let at = |s: f64| {
            let mut q = p.to_vec();
            q[k] += s * h;
            christoffel(metric, &q, h)
        };
        let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
        let mut d = vec![vec![vec![0.0; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    d[a][b][c] = (m2[a][b][c] - 8.0 * m1[a][b][c] + 8.0 * p1[a][b][c] - p2[a][b][c]) / (12.0 * h);
                }
            }
        }
        dgam.push(d);
    }
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut r = dgam[c][a][d][b] - dgam[d][a][c][b];
                    for e in 0..n {
                        r += gam[a][c][e] * gam[e][d][b] - gam[a][d][e] * gam[e][c][b];
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// `max |R|` of the Gibbons–Hawking metric at a chart point.
pub fn gh_riemann_max(cfg: &GhConfig, pt: &GhPoint, h: f64) -> Result<f64> {
    let tags = pt.tags.clone();
    riemann_max(&|x: &[f64]| Ok(gh_metric(cfg, x, &tags)?.matrix().clone()), &pt.coords(), h)
}

/// `max |∂_j V|`-scale residuals of the harmonicity and Bogomolny checks at `x ∈ R³`:
/// `(|ΔV|, |Δφ|, ‖dα − ∗dV‖, ‖dA − ∗dφ‖)`.
pub fn monopole_residuals(cfg: &GhConfig, mono: &MonopoleData, x: &[f64], tags: &[i8], scheme: &FdScheme) -> Result<[f64; 4]> {
    let x = &x[..3];
    let e3 = MetricValue::euclidean(3);
    let v = ScalarFn::new(3, |y: &[f64]| gh_potential(cfg, y).unwrap_or(f64::NAN)).with_singular(singular_distance(cfg));
    let phi = ScalarFn::new(3, |y: &[f64]| mono.phi(cfg, y).unwrap_or(f64::NAN)).with_singular(singular_distance(cfg));
    let restrict3 = |w: FormValue| FormValue::covector(&w.components()[..3]);
    let alpha = FnField::new(3, 1, |y: &[f64]| Ok(restrict3(gh_alpha(cfg, y, tags)?)));
    let a = FnField::new(3, 1, |y: &[f64]| Ok(restrict3(mono.connection(cfg, y, tags)?)));
    let bog = |pot: &dyn FormField, conn: &dyn FormField| -> Result<f64> {
        let star = hodge_star(&e3, 1.0, &gradient(pot, x, scheme)?)?;
        Ok((ext_deriv(conn, x, scheme)? - star).max_abs())
    };
    Ok([
        laplacian(&v, x, scheme)?.abs(),
        laplacian(&phi, x, scheme)?.abs(),
        bog(&v, &alpha)?,
        bog(&phi, &a)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcalc::type11_residual_metric;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(rng: &mut ChaCha8Rng, cfg: &GhConfig) -> GhPoint {
        loop {
            let x = [rng.gen_range(-1.5..3.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            if cfg.min_distance(&x) > 0.3 && x[1].hypot(x[2]) > 0.2 {
                return GhPoint::new(cfg, x, rng.gen_range(0.0..2.0 * PI)).unwrap();
            }
        }
    }

    fn two() -> GhConfig {
        GhConfig::new(vec![0.0, 1.0], 0.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(GhConfig::new(vec![], 0.0).is_err());
        assert!(GhConfig::new(vec![1.0, 0.0], 0.0).is_err());
        assert!(GhConfig::new(vec![0.0, 0.0], 0.0).is_err());
        assert!(GhConfig::new(vec![0.0, 1.0, 3.0], 0.5).unwrap().is_integral());
        assert!(!GhConfig::new(vec![0.0, 1.5], 0.5).unwrap().is_integral());
    }

    #[test]
    fn potential_values_and_domain() {
        let one = GhConfig::new(vec![0.0], 0.0).unwrap();
        assert_eq!(gh_potential(&one, &[0.0, 0.0, 1.0]).unwrap(), 1.0);
        assert!(matches!(gh_potential(&one, &[0.0, 0.0, 0.0]), Err(Error::Domain(_))));
        // string of the +1 tag runs along x₁ < a
        assert!(GhPoint::with_tags(&one, [-1.0, 0.0, 0.0], 0.0, vec![1]).is_err());
        assert!(GhPoint::with_tags(&one, [1.0, 0.0, 0.0], 0.0, vec![1]).is_ok());
    }

    #[test]
    fn harmonic_and_bogomolny() {
        let s = FdScheme::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for cfg in [two(), GhConfig::new(vec![0.0, 1.0, 3.0], 0.7).unwrap()] {
            let mono = MonopoleData::from_config(&cfg);
            for _ in 0..30 {
                let pt = sample(&mut rng, &cfg);
                let r = monopole_residuals(&cfg, &mono, &pt.x, &pt.tags, &s).unwrap();
                assert!(r.iter().all(|e| *e < 1e-6), "{r:?}");
            }
        }
    }

    #[test]
    fn triple_closed_and_orthogonal() {
        let s = FdScheme::default();
        let cfg = two();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let pt = sample(&mut rng, &cfg);
            let tags = pt.tags.clone();
            let w = gh_kahler_triple(&cfg, &pt.x, &tags).unwrap();
            let g = gh_metric(&cfg, &pt.x, &tags).unwrap();
            let vol = g.det().sqrt();
            for i in 0..3 {
                let field = FnField::new(4, 2, |x: &[f64]| Ok(gh_kahler_triple(&cfg, x, &tags)?[i].clone()));
                assert!(ext_deriv(&field, &pt.coords(), &s).unwrap().max_abs() < 1e-6);
                assert!((hodge_star(&g, 1.0, &w[i]).unwrap() - w[i].clone()).max_abs() < 1e-10);
                for j in 0..3 {
                    let top = w[i].wedge(&w[j]).components()[0];
                    let expect = if i == j { 2.0 * vol } else { 0.0 };
                    assert!((top - expect).abs() < 1e-10);
                }
            }
            let st = gh_structures(&cfg, &pt.x, &pt.tags).unwrap();
            let id = DMatrix::<f64>::identity(4, 4);
            assert!((&st[0] * &st[1] - &st[2]).amax() < 1e-10);
            assert!((&st[0] * &st[0] + &id).amax() < 1e-10);
        }
    }

    #[test]
    fn flat_fixture_has_no_curvature() {
        let cfg = GhConfig::flat();
        let pt = GhPoint::new(&cfg, [0.4, 0.7, -0.5], 1.0).unwrap();
        assert!(gh_riemann_max(&cfg, &pt, 1e-3).unwrap() < 1e-4);
        let curved = GhPoint::new(&two(), [0.4, 0.7, -0.5], 1.0).unwrap();
        assert!(gh_riemann_max(&two(), &curved, 1e-3).unwrap() > 1e-2);
    }

    #[test]
    fn lift_differential_is_negated_display() {
        let s = FdScheme::default();
        let cfg = GhConfig::new(vec![0.0, 1.0, 3.0], 0.3).unwrap();
        let f = ScalarFn::new(3, |y: &[f64]| rotation_lift_f(&cfg, y).unwrap());
        let x = [0.6, 0.8, -0.4];
        let df = gradient(&f, &x, &s).unwrap();
        let shown = displayed_df(&cfg, &x, &s).unwrap();
        assert!((&df + &shown).max_abs() < 1e-9);
        assert!((&df - &shown).max_abs() > 1e-2);
    }

    #[test]
    fn lift_values_on_axis() {
        let cfg = GhConfig::new(vec![0.0, 1.0, 3.0], 0.25).unwrap();
        assert_eq!(rotation_lift_f(&cfg, &[5.0, 0.0, 0.0]).unwrap(), 3.25);
        assert_eq!(rotation_lift_f(&cfg, &[-5.0, 0.0, 0.0]).unwrap(), -2.75);
        for x1 in [0.1, 0.5, 0.93] {
            assert_eq!(rotation_lift_f(&cfg, &[x1, 0.0, 0.0]).unwrap(), -0.75);
        }
        let even = GhConfig::new(vec![0.0, 1.0, 2.0, 3.0], 0.0).unwrap();
        for x1 in [1.1, 1.5, 1.9] {
            assert_eq!(rotation_lift_f(&even, &[x1, 0.0, 0.0]).unwrap(), 0.0);
        }
    }

    #[test]
    fn monopole_gauge_forms() {
        let cfg = GhConfig::new(vec![-1.0, 0.5, 2.0], 0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let pt = sample(&mut rng, &cfg);
            let v = gh_potential(&cfg, &pt.x).unwrap();
            let mid = -pt.x[0] * v + rotation_lift_f(&cfg, &pt.x).unwrap();
            let raw = MonopoleData::unshifted(&cfg).phi(&cfg, &pt.x).unwrap();
            assert!((mid - raw).abs() < 1e-12);
            let shifted = monopole_phi(&cfg, &pt.x).unwrap();
            assert!((shifted - raw - cfg.centers[2] * v).abs() < 1e-12);
        }
        assert_eq!(MonopoleData::from_config(&cfg).charges, vec![3.0, 1.5, 0.0]);
    }

    #[test]
    fn connection_is_anti_self_dual() {
        let s = FdScheme::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for cfg in [two(), GhConfig::new(vec![0.0, 1.0, 3.0], 0.5).unwrap()] {
            let mono = MonopoleData::from_config(&cfg);
            for _ in 0..20 {
                let pt = sample(&mut rng, &cfg);
                assert!(asd_residual(&cfg, &mono, &pt, &s).unwrap() < 1e-5);
                assert!(interior_y_residual(&cfg, &mono, &pt, &s).unwrap() < 1e-5);
            }
        }
    }

    #[test]
    fn curvature_is_hyperholomorphic() {
        let s = FdScheme::default();
        let cfg = two();
        let mono = MonopoleData::from_config(&cfg);
        let pt = GhPoint::new(&cfg, [0.3, 0.6, 0.2], 0.5).unwrap();
        let f = curvature_ahat(&cfg, &mono, &pt, &s).unwrap();
        let g = gh_metric(&cfg, &pt.x, &pt.tags).unwrap();
        for st in gh_structures(&cfg, &pt.x, &pt.tags).unwrap() {
            assert!(type11_residual_metric(&f, &st, &g) < 1e-6);
        }
    }

    #[test]
    fn gauge_shift_and_string_choice() {
        let s = FdScheme::default();
        let cfg = two();
        let mono = MonopoleData::from_config(&cfg);
        let pt = GhPoint::new(&cfg, [0.3, 0.6, 0.2], 0.5).unwrap();
        let f = curvature_ahat(&cfg, &mono, &pt, &s).unwrap();
        let g = curvature_ahat(&cfg, &mono.shifted(2.5), &pt, &s).unwrap();
        assert!((f - g).max_abs() < 1e-8);
        let flipped = GhPoint::with_tags(&cfg, pt.x, pt.theta, vec![-1, 1]).unwrap();
        let a = invariant_curvature(&cfg, &mono, &pt, &s).unwrap();
        let b = invariant_curvature(&cfg, &mono, &flipped, &s).unwrap();
        assert!((a - b).max_abs() < 1e-8);
    }

    #[test]
    fn periods() {
        let p = sphere_period(&two(), 0, 8).unwrap();
        assert!((p - 2.0 * PI).abs() < 1e-6 * 2.0 * PI);
        let cfg = GhConfig::new(vec![0.0, 2.0, 3.0], 0.0).unwrap();
        assert!((sphere_period(&cfg, 0, 8).unwrap() - 4.0 * PI).abs() < 1e-6 * 4.0 * PI);
        assert!((sphere_period(&cfg, 1, 8).unwrap() - 2.0 * PI).abs() < 1e-6 * 2.0 * PI);
        let close = GhConfig::new(vec![0.0, 1e-3], 0.0).unwrap();
        assert!(sphere_period(&close, 0, 8).unwrap() < 1e-2);
        assert!(sphere_period(&two(), 1, 8).is_err());
    }
}
