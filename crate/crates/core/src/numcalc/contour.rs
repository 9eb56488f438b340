//! Contour quadrature for holomorphic and meromorphic functions of one variable.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Laurent coefficient `a_k` of `f` about `center`, from the trapezoid rule on |ζ − center| = radius:
/// `a_k ≈ (1/N) Σ_j f(center + r ω^j) (r ω^j)^{−k}`, ω = e^{2πi/N}.
///
/// Spectrally accurate when `f` is analytic on an annulus containing the circle.
pub fn laurent_coefficient(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    k: i32,
    nodes: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let u = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
        acc += f(center + u) * u.powi(-k);
    }
    acc / nodes as f64
}

/// Residue at `center` (the a₋₁ coefficient).
pub fn residue(f: impl Fn(Complex64) -> Complex64, center: Complex64, radius: f64, nodes: usize) -> Complex64 {
    laurent_coefficient(f, center, radius, -1, nodes)
}

/// Complex derivative of a holomorphic function by Cauchy's formula on a small circle.
pub fn holomorphic_derivative(f: impl Fn(Complex64) -> Complex64, z: Complex64, radius: f64, nodes: usize) -> Complex64 {
    laurent_coefficient(f, z, radius, 1, nodes)
}
