use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::field::FormField;

/// Gauss–Legendre nodes and weights on [0, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

const TANGENT_STEP: f64 = 1e-4;

fn tangent(surf: &dyn Fn(f64, f64) -> Vec<f64>, s: f64, t: f64, along_s: bool) -> Vec<f64> {
    let h = TANGENT_STEP;
    let at = |k: f64| if along_s { surf(s + k * h, t) } else { surf(s, t + k * h) };
    let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
    (0..m1.len())
        .map(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h))
        .collect()
}

/// `∫ surf*(w)` over the unit square, with an n×n tensor Gauss–Legendre rule.
pub fn surface_integral(
    w: &dyn FormField,
    surf: &dyn Fn(f64, f64) -> Vec<f64>,
    resolution: usize,
) -> Result<f64> {
    if w.degree() != 2 {
        return Err(Error::Invalid("surface integral needs a 2-form".into()));
    }
    let (x, wt) = gauss_legendre(resolution);
    let mut total = 0.0;
    for (s, ws) in x.iter().zip(&wt) {
        for (t, wt_) in x.iter().zip(&wt) {
            let p = surf(*s, *t);
            if p.len() != w.dim() {
                return Err(Error::Invalid("surface dimension mismatch".into()));
            }
            if w.singular_distance(&p) <= 0.0 {
                return Err(Error::Domain(format!("surface meets singular set at {p:?}")));
            }
            let ts = tangent(surf, *s, *t, true);
            let tt = tangent(surf, *s, *t, false);
            let v = w.eval(&p)?.eval(&[&ts, &tt]);
            if !v.is_finite() {
                return Err(Error::Domain(format!("integrand not finite at {p:?}")));
            }
            total += ws * wt_ * v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcalc::field::{ConstField, FnField};
    use crate::numcalc::form::FormValue;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 0.1).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unit_square_area() {
        let w = ConstField(FormValue::two_form(2, &[(0, 1, 1.0)]));
        let v = surface_integral(&w, &|s, t| vec![s, t], 4).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    fn area_form() -> impl FormField {
        FnField::new(3, 2, |p: &[f64]| {
            let r3 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).powf(1.5);
            Ok(FormValue::two_form(3, &[(1, 2, p[0] / r3), (2, 0, p[1] / r3), (0, 1, p[2] / r3)]))
        })
    }

    fn sphere(s: f64, t: f64) -> Vec<f64> {
        let (th, ph) = (PI * s, 2.0 * PI * t);
        vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
    }

    #[test]
    fn unit_sphere_area() {
        let v = surface_integral(&area_form(), &sphere, 32).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-6, "{v}");
    }

    #[test]
    fn refinement_reduces_error() {
        let e = |n| (surface_integral(&area_form(), &sphere, n).unwrap() - 4.0 * PI).abs();
        assert!(e(8) < e(4));
    }
}
