//! Twistor space of flat Hⁿ: the two standard charts over P¹, the holomorphic line
//! bundle given by `exp(−Σvξ/2ζ)`, its connections, and the meromorphic connection
//! attached to a rotating circle action.
//!
//! Holomorphic forms are stored by their coefficients against
//! `(dv₁, …, dvₙ, dξ₁, …, dξₙ, dζ)` and evaluated on `(1,0)` vectors given by the
//! same components.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hkspace::{kahler_triple, CircleActionSpec};
use crate::numcalc::contour::{holomorphic_derivative, laurent_coefficient};
use crate::numcalc::{ddc, FdScheme, FormValue, ScalarFn};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
/// Contour radius for Laurent coefficients and residues.
pub const CONTOUR_RADIUS: f64 = 1e-2;
/// Default node count on that contour.
pub const CONTOUR_NODES: usize = 64;
const POLE_EPS: f64 = 1e-300;

fn check_zeta(zeta: C, what: &str) -> Result<()> {
    if zeta.norm() <= POLE_EPS || !zeta.re.is_finite() || !zeta.im.is_finite() {
        return Err(Error::Pole(format!("{what} at ζ = {zeta}")));
    }
    Ok(())
}

/// A point of the chart `U = {ζ ≠ ∞}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorPointU {
    pub v: Vec<C>,
    pub xi: Vec<C>,
    pub zeta: C,
}

/// A point of the chart `V = {ζ ≠ 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorPointV {
    pub vt: Vec<C>,
    pub xit: Vec<C>,
    pub zetat: C,
}

impl TwistorPointU {
    pub fn new(v: Vec<C>, xi: Vec<C>, zeta: C) -> Result<Self> {
        if v.is_empty() || v.len() != xi.len() {
            return Err(Error::Invalid("v and ξ must be non-empty and of equal length".into()));
        }
        Ok(Self { v, xi, zeta })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `(ṽ, ξ̃, ζ̃) = (v/ζ, ξ/ζ, 1/ζ)`.
    pub fn to_v(&self) -> Result<TwistorPointV> {
        check_zeta(self.zeta, "chart change U → V")?;
        let r = self.zeta.inv();
        Ok(TwistorPointV { vt: self.v.iter().map(|x| x * r).collect(), xit: self.xi.iter().map(|x| x * r).collect(), zetat: r })
    }

    /// `v·ξ`.
    pub fn pairing(&self) -> C {
        self.v.iter().zip(&self.xi).map(|(a, b)| a * b).sum()
    }

    /// `(v…, ξ…, ζ)` as one coordinate vector.
    pub fn coords(&self) -> Vec<C> {
        self.v.iter().chain(&self.xi).copied().chain(std::iter::once(self.zeta)).collect()
    }

    pub fn from_coords(c: &[C]) -> Self {
        let n = (c.len() - 1) / 2;
        Self { v: c[..n].to_vec(), xi: c[n..2 * n].to_vec(), zeta: c[2 * n] }
    }
}

impl TwistorPointV {
    pub fn to_u(&self) -> Result<TwistorPointU> {
        check_zeta(self.zetat, "chart change V → U")?;
        let r = self.zetat.inv();
        Ok(TwistorPointU { v: self.vt.iter().map(|x| x * r).collect(), xi: self.xit.iter().map(|x| x * r).collect(), zeta: r })
    }

    /// `(v…, ξ…, ζ)` as one coordinate vector.
    pub fn coords(&self) -> Vec<C> {
        self.vt.iter().chain(&self.xit).copied().chain(std::iter::once(self.zetat)).collect()
    }

    pub fn from_coords(c: &[C]) -> Self {
        let n = (c.len() - 1) / 2;
        Self { vt: c[..n].to_vec(), xit: c[n..2 * n].to_vec(), zetat: c[2 * n] }
    }
}

/// A point of `Hⁿ × C` identified with chart U by `(z + ζw̄, w − ζz̄, ζ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothProductCoords {
    pub z: Vec<C>,
    pub w: Vec<C>,
    pub zeta: C,
}

impl SmoothProductCoords {
    pub fn new(z: Vec<C>, w: Vec<C>, zeta: C) -> Result<Self> {
        if z.is_empty() || z.len() != w.len() {
            return Err(Error::Invalid("z and w must be non-empty and of equal length".into()));
        }
        Ok(Self { z, w, zeta })
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// Real coordinates `(Re z₁, Im z₁, …, Re w₁, Im w₁, …, Re ζ, Im ζ)`.
    pub fn to_real(&self) -> Vec<f64> {
        self.z
            .iter()
            .chain(&self.w)
            .chain(std::iter::once(&self.zeta))
            .flat_map(|c| [c.re, c.im])
            .collect()
    }

    pub fn from_real(x: &[f64]) -> Result<Self> {
        if x.len() < 6 || !(x.len() - 2).is_multiple_of(4) {
            return Err(Error::Invalid(format!("{} real coordinates do not describe Hⁿ × C", x.len())));
        }
        let n = (x.len() - 2) / 4;
        let c = |k: usize| C::new(x[2 * k], x[2 * k + 1]);
        Ok(Self { z: (0..n).map(c).collect(), w: (n..2 * n).map(c).collect(), zeta: c(2 * n) })
    }

    pub fn to_chart_u(&self) -> TwistorPointU {
        let v = self.z.iter().zip(&self.w).map(|(z, w)| z + self.zeta * w.conj()).collect();
        let xi = self.z.iter().zip(&self.w).map(|(z, w)| w - self.zeta * z.conj()).collect();
        TwistorPointU { v, xi, zeta: self.zeta }
    }

    /// Components `(dv(X), dξ(X), dζ(X))` of a real tangent vector `X` at this point.
    pub fn push_forward(&self, x: &[f64]) -> Vec<C> {
        let n = self.dim();
        let c = |k: usize| C::new(x[2 * k], x[2 * k + 1]);
        let (dz, dw, dzeta) = ((0..n).map(c).collect::<Vec<_>>(), (n..2 * n).map(c).collect::<Vec<_>>(), c(2 * n));
        let mut out = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            out.push(dz[i] + dzeta * self.w[i].conj() + self.zeta * dw[i].conj());
        }
        for i in 0..n {
            out.push(dw[i] - dzeta * self.z[i].conj() - self.zeta * dz[i].conj());
        }
        out.push(dzeta);
        out
    }

    /// The (1,0)-coframe `dv, dξ, dζ` as complex rows over the real coordinates.
    pub fn holomorphic_coframe(&self) -> DMatrix<C> {
        let dim = 4 * self.dim() + 2;
        let cols: Vec<DVector<C>> = (0..dim)
            .map(|k| {
                let mut e = vec![0.0; dim];
                e[k] = 1.0;
                DVector::from_vec(self.push_forward(&e))
            })
            .collect();
        DMatrix::from_columns(&cols)
    }
}

/// The fibre complex structure on `Hⁿ × C` whose (1,0)-forms are `dv, dξ, dζ`.
pub fn twistor_structure(pt: &SmoothProductCoords) -> Result<DMatrix<f64>> {
    let theta = pt.holomorphic_coframe();
    let h = theta.nrows();
    let mut m = DMatrix::<C>::zeros(2 * h, 2 * h);
    let mut d = DMatrix::<C>::zeros(2 * h, 2 * h);
    for r in 0..h {
        for c in 0..2 * h {
            m[(r, c)] = theta[(r, c)];
            m[(h + r, c)] = theta[(r, c)].conj();
        }
        d[(r, r)] = I;
        d[(h + r, h + r)] = -I;
    }
    let minv = m.clone().try_inverse().ok_or_else(|| Error::Domain("degenerate twistor coframe".into()))?;
    let j = minv * d * m;
    if j.iter().any(|x| x.im.abs() > 1e-12) {
        return Err(Error::Domain("twistor structure is not real".into()));
    }
    Ok(j.map(|x| x.re))
}

/// `(ω₂+iω₃) + 2iζω₁ + ζ²(ω₂−iω₃)` on real tangent vectors of Hⁿ.
pub fn fibre_symplectic(dim: usize, zeta: C, x: &[f64], y: &[f64]) -> C {
    let [w1, w2, w3] = kahler_triple(dim);
    let (a, b, c) = (w1.eval(&[x, y]), w2.eval(&[x, y]), w3.eval(&[x, y]));
    C::new(b, c) + 2.0 * I * zeta * a + zeta * zeta * C::new(b, -c)
}

/// `exp(−Σ v_iξ_i / 2ζ)`.
pub fn transition_guv(pt: &TwistorPointU) -> Result<C> {
    check_zeta(pt.zeta, "transition function")?;
    Ok((-pt.pairing() / (2.0 * pt.zeta)).exp())
}

/// The inverse transition written in chart V, `exp(+Σ ṽ_iξ̃_i / 2ζ̃)`.
pub fn transition_gvu(pt: &TwistorPointV) -> Result<C> {
    check_zeta(pt.zetat, "transition function")?;
    let s: C = pt.vt.iter().zip(&pt.xit).map(|(a, b)| a * b).sum();
    Ok((s / (2.0 * pt.zetat)).exp())
}

/// `max_a |∂̄_a g_UV|` by fourth-order differences in each complex coordinate.
pub fn transition_dbar_residual(pt: &TwistorPointU) -> Result<f64> {
    transition_guv(pt)?;
    let x0 = pt.coords();
    let h = 1e-3 * pt.zeta.norm().min(1.0);
    let mut worst: f64 = 0.0;
    for a in 0..x0.len() {
        let g = |d: C| {
            let mut x = x0.clone();
            x[a] += d;
            transition_guv(&TwistorPointU::from_coords(&x))
        };
        let fd = |dir: C| -> Result<C> {
            Ok((g(dir * -2.0 * h)? - g(dir * -h)? * 8.0 + g(dir * h)? * 8.0 - g(dir * 2.0 * h)?) / (12.0 * h))
        };
        // ∂̄ = ½(∂_x + i∂_y)
        worst = worst.max(((fd(C::new(1.0, 0.0))? + I * fd(I)?) * 0.5).norm());
    }
    Ok(worst)
}

/// `|P(−1/ζ̄)(X, Y) − conj(P(ζ)(X, Y))/ζ̄²|` for the fibre pencil.
pub fn pencil_reality_residual(dim: usize, zeta: C, x: &[f64], y: &[f64]) -> Result<f64> {
    check_zeta(zeta, "pencil reality")?;
    let zb = zeta.conj();
    Ok((fibre_symplectic(dim, -zb.inv(), x, y) - fibre_symplectic(dim, zeta, x, y).conj() / (zb * zb)).norm())
}

/// Components in chart V of a chart-U tangent vector at `pt`.
fn tangent_to_v(pt: &TwistorPointU, t: &[C]) -> Vec<C> {
    let n = pt.dim();
    let (z, tz) = (pt.zeta, t[2 * n]);
    let z2 = z * z;
    let mut out: Vec<C> = (0..n).map(|i| t[i] / z - pt.v[i] * tz / z2).collect();
    out.extend((0..n).map(|i| t[n + i] / z - pt.xi[i] * tz / z2));
    out.push(-tz / z2);
    out
}

/// `A_U = (1/2ζ) Σ v_i dξ_i`.
pub fn connection_au(pt: &TwistorPointU) -> Result<Vec<C>> {
    check_zeta(pt.zeta, "A_U")?;
    let n = pt.dim();
    let mut a = vec![C::new(0.0, 0.0); 2 * n + 1];
    for i in 0..n {
        a[n + i] = pt.v[i] / (2.0 * pt.zeta);
    }
    Ok(a)
}

/// Which chart-V partner of `A_U` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AvForm {
    /// `−(1/2ζ̃) Σ ξ̃_i dṽ_i`, the partner compatible with the transition function.
    Compatible,
    /// `−(1/2ζ̃) Σ ṽ_i dξ̃_i`, as written next to `A_U`.
    Displayed,
}

/// `A_V` in chart-V coefficients.
pub fn connection_av(pt: &TwistorPointV, form: AvForm) -> Result<Vec<C>> {
    check_zeta(pt.zetat, "A_V")?;
    let n = pt.vt.len();
    let mut a = vec![C::new(0.0, 0.0); 2 * n + 1];
    let s = -1.0 / (2.0 * pt.zetat);
    for i in 0..n {
        match form {
            AvForm::Compatible => a[i] = s * pt.xit[i],
            AvForm::Displayed => a[n + i] = s * pt.vt[i],
        }
    }
    Ok(a)
}

fn pair(form: &[C], t: &[C]) -> C {
    form.iter().zip(t).map(|(a, b)| a * b).sum()
}

/// `d(v·ξ / 2ζ)` in chart-U coefficients.
pub fn d_half_pairing(pt: &TwistorPointU) -> Result<Vec<C>> {
    check_zeta(pt.zeta, "d(vξ/2ζ)")?;
    let n = pt.dim();
    let z = pt.zeta;
    let mut d: Vec<C> = (0..n).map(|i| pt.xi[i] / (2.0 * z)).collect();
    d.extend((0..n).map(|i| pt.v[i] / (2.0 * z)));
    d.push(-pt.pairing() / (2.0 * z * z));
    Ok(d)
}

/// `|(A_V − A_U + d(v·ξ/2ζ))(T)|` for a chart-U tangent `T`.
pub fn connection_pair_residual(pt: &TwistorPointU, t: &[C], form: AvForm) -> Result<f64> {
    let ptv = pt.to_v()?;
    let av = pair(&connection_av(&ptv, form)?, &tangent_to_v(pt, t));
    let au = pair(&connection_au(pt)?, t);
    let dg = pair(&d_half_pairing(pt)?, t);
    Ok((av - au + dg).norm())
}

/// The meromorphic connection `2πi·n dζ/ζ + (1/2ζ) Σ (ξ_i dv_i − v_i dξ_i)`.
pub fn mero_connection(degree: i64, pt: &TwistorPointU) -> Result<Vec<C>> {
    check_zeta(pt.zeta, "meromorphic connection")?;
    let n = pt.dim();
    let z = pt.zeta;
    let mut a: Vec<C> = (0..n).map(|i| pt.xi[i] / (2.0 * z)).collect();
    a.extend((0..n).map(|i| -pt.v[i] / (2.0 * z)));
    a.push(2.0 * PI * I * degree as f64 / z);
    Ok(a)
}

/// `F_Z = (1/ζ) Σ dξ_i∧dv_i − (1/2ζ²) dζ∧Σ(ξ_i dv_i − v_i dξ_i)`, as an antisymmetric matrix.
pub fn curvature_fz(pt: &TwistorPointU) -> Result<DMatrix<C>> {
    check_zeta(pt.zeta, "F_Z")?;
    let n = pt.dim();
    let z = pt.zeta;
    let mut f = DMatrix::<C>::zeros(2 * n + 1, 2 * n + 1);
    let zz = 2 * n;
    for i in 0..n {
        let (vi, xi) = (i, n + i);
        f[(xi, vi)] += 1.0 / z;
        f[(vi, xi)] -= 1.0 / z;
        let c = 1.0 / (2.0 * z * z);
        f[(zz, vi)] -= c * pt.xi[i];
        f[(vi, zz)] += c * pt.xi[i];
        f[(zz, xi)] += c * pt.v[i];
        f[(xi, zz)] -= c * pt.v[i];
    }
    Ok(f)
}

/// `d` of a holomorphic 1-form by contour derivatives of its coefficients.
pub fn holomorphic_exterior_derivative(
    form: &dyn Fn(&TwistorPointU) -> Result<Vec<C>>,
    pt: &TwistorPointU,
) -> Result<DMatrix<C>> {
    let x0 = pt.coords();
    let m = x0.len();
    let radius = 1e-3 * pt.zeta.norm().min(1.0);
    let mut f = DMatrix::<C>::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let coef = |c: C| -> C {
                let mut x = x0.clone();
                x[a] = c;
                form(&TwistorPointU::from_coords(&x)).map(|v| v[b]).unwrap_or(C::new(f64::NAN, 0.0))
            };
            let d = holomorphic_derivative(coef, x0[a], radius, 32);
            f[(a, b)] += d;
            f[(b, a)] -= d;
        }
    }
    Ok(f)
}

/// The circle action `e^{iθ/2}(z, w)`, `ζ ↦ e^{iθ}ζ` transported to chart U and differentiated in θ.
pub fn lifted_action_field(pt: &SmoothProductCoords) -> Vec<C> {
    let flow = |theta: f64| {
        let r = C::from_polar(1.0, theta / 2.0);
        SmoothProductCoords {
            z: pt.z.iter().map(|z| z * r).collect(),
            w: pt.w.iter().map(|w| w * r).collect(),
            zeta: pt.zeta * C::from_polar(1.0, theta),
        }
        .to_chart_u()
        .coords()
    };
    let h = 1e-3;
    let (m2, m1, p1, p2) = (flow(-2.0 * h), flow(-h), flow(h), flow(2.0 * h));
    (0..m1.len()).map(|k| (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h)).collect()
}

/// Residuals of the three properties of `F_Z` at one point.
#[derive(Debug, Clone, Serialize)]
pub struct FzReport {
    /// `max |i_V F_Z|`.
    pub interior: f64,
    /// `max |F_Z(X, Y) − (1/2iζ)P(ζ)(X, Y)|` over coordinate pairs on the fibre.
    pub fibre: f64,
    /// Measured ratio `F_Z(X, Y) / ((1/2iζ)P(ζ)(X, Y))` for the largest target entry.
    pub fibre_ratio: (f64, f64),
    /// `max |Res_{ζ=0} A(X) − i_V(ω₂+iω₃)(X)/2i|` over coordinate vectors X.
    pub residue: f64,
    /// Measured ratio of the residue to the target for the largest target entry.
    pub residue_ratio: (f64, f64),
    /// Residue of the dζ coefficient at ζ = 0.
    pub dzeta_residue: (f64, f64),
}

/// `(a) i_V F_Z`, `(b)` fibre restriction and `(c)` residue checks at a smooth-product point.
pub fn fz_checks(degree: i64, pt: &SmoothProductCoords, nodes: usize) -> Result<FzReport> {
    let n = pt.dim();
    let u = pt.to_chart_u();
    let f = curvature_fz(&u)?;
    let vf = lifted_action_field(pt);
    let proj = vf[2 * n] - I * pt.zeta;
    if proj.norm() > 1e-8 * (1.0 + pt.zeta.norm()) {
        return Err(Error::Model(format!("lifted field does not project to iζ∂_ζ (residual {:.3e})", proj.norm())));
    }
    let vv = DVector::from_vec(vf);
    let interior = (f.transpose() * &vv).iter().map(|c| c.norm()).fold(0.0, f64::max);

    let dim = 4 * n + 2;
    let basis = |k: usize| {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        e
    };
    let (mut fibre, mut best_t, mut ratio) = (0.0f64, 0.0f64, C::new(0.0, 0.0));
    for a in 0..4 * n {
        for b in a + 1..4 * n {
            let (x, y) = (basis(a), basis(b));
            let tx = DVector::from_vec(pt.push_forward(&x));
            let ty = DVector::from_vec(pt.push_forward(&y));
            let got = (tx.transpose() * &f * ty)[(0, 0)];
            let target = fibre_symplectic(n, pt.zeta, &x[..4 * n], &y[..4 * n]) / (2.0 * I * pt.zeta);
            fibre = fibre.max((got - target).norm());
            if target.norm() > best_t {
                best_t = target.norm();
                ratio = got / target;
            }
        }
    }

    let w = kahler_triple(n);
    let rot = CircleActionSpec::uniform(n, 1, 1).generator();
    let m: Vec<f64> = pt.to_real()[..4 * n].to_vec();
    let vm: Vec<f64> = (0..4 * n).map(|r| 0.5 * (0..4 * n).map(|c| rot[(r, c)] * m[c]).sum::<f64>()).collect();
    let (mut residue, mut best_r, mut rratio) = (0.0f64, 0.0f64, C::new(0.0, 0.0));
    for a in 0..4 * n {
        let x = basis(a);
        let along = |zeta: C| -> C {
            let p = SmoothProductCoords { zeta, ..pt.clone() };
            let t = p.push_forward(&x);
            mero_connection(degree, &p.to_chart_u()).map(|c| pair(&c, &t)).unwrap_or(C::new(f64::NAN, 0.0))
        };
        let res = laurent_coefficient(along, C::new(0.0, 0.0), CONTOUR_RADIUS, -1, nodes);
        let target = C::new(w[1].eval(&[&vm, &x[..4 * n]]), w[2].eval(&[&vm, &x[..4 * n]])) / (2.0 * I);
        residue = residue.max((res - target).norm());
        if target.norm() > best_r {
            best_r = target.norm();
            rratio = res / target;
        }
    }
    let dz = |zeta: C| -> C {
        let p = SmoothProductCoords { zeta, ..pt.clone() };
        mero_connection(degree, &p.to_chart_u()).map(|c| c[2 * n]).unwrap_or(C::new(f64::NAN, 0.0))
    };
    let dzr = laurent_coefficient(dz, C::new(0.0, 0.0), CONTOUR_RADIUS, -1, nodes);
    Ok(FzReport {
        interior,
        fibre,
        fibre_ratio: (ratio.re, ratio.im),
        residue,
        residue_ratio: (rratio.re, rratio.im),
        dzeta_residue: (dzr.re, dzr.im),
    })
}

/// Largest `k` with a nonzero Laurent coefficient `a_{−k}` of any coefficient of the
/// meromorphic connection, at `ζ = 0` (chart U, fixed `v, ξ`) and `ζ = ∞` (chart V, fixed `ṽ, ξ̃`).
pub fn pole_orders(degree: i64, v: &[C], xi: &[C], nodes: usize) -> Result<(u32, u32)> {
    let n = v.len();
    let tol = 1e-9;
    let order = |coef: &dyn Fn(C, usize) -> C| -> u32 {
        let mut ord = 0;
        for b in 0..2 * n + 1 {
            for k in 1..=4 {
                let a = laurent_coefficient(|z| coef(z, b), C::new(0.0, 0.0), CONTOUR_RADIUS, -k, nodes);
                if a.norm() > tol {
                    ord = ord.max(k as u32);
                }
            }
        }
        ord
    };
    let at_zero = order(&|zeta, b| {
        let pt = TwistorPointU { v: v.to_vec(), xi: xi.to_vec(), zeta };
        mero_connection(degree, &pt).map(|c| c[b]).unwrap_or(C::new(f64::NAN, 0.0))
    });
    let at_inf = order(&|zt, b| {
        let pv = TwistorPointV { vt: v.to_vec(), xit: xi.to_vec(), zetat: zt };
        let Ok(pu) = pv.to_u() else { return C::new(f64::NAN, 0.0) };
        // pull back along the chart change: A_V(e_b) = A_U(J e_b)
        let mut e = vec![C::new(0.0, 0.0); 2 * n + 1];
        e[b] = C::new(1.0, 0.0);
        let t = tangent_to_u(&pv, &e);
        mero_connection(degree, &pu).map(|c| pair(&c, &t)).unwrap_or(C::new(f64::NAN, 0.0))
    });
    Ok((at_zero, at_inf))
}

/// Components in chart U of a chart-V tangent vector.
fn tangent_to_u(pt: &TwistorPointV, t: &[C]) -> Vec<C> {
    let n = pt.vt.len();
    let (z, tz) = (pt.zetat, t[2 * n]);
    let z2 = z * z;
    let mut out: Vec<C> = (0..n).map(|i| t[i] / z - pt.vt[i] * tz / z2).collect();
    out.extend((0..n).map(|i| t[n + i] / z - pt.xit[i] * tz / z2));
    out.push(-tz / z2);
    out
}

/// `max |∂_a F_bc + ∂_b F_ca + ∂_c F_ab|` of the closed-form `F_Z`, by contour derivatives.
pub fn fz_closedness(pt: &TwistorPointU) -> Result<f64> {
    let x0 = pt.coords();
    let m = x0.len();
    let radius = 1e-3 * pt.zeta.norm().min(1.0);
    let deriv = |a: usize, b: usize, c: usize| -> C {
        let f = |s: C| {
            let mut x = x0.clone();
            x[a] = s;
            curvature_fz(&TwistorPointU::from_coords(&x)).map(|f| f[(b, c)]).unwrap_or(C::new(f64::NAN, 0.0))
        };
        holomorphic_derivative(f, x0[a], radius, 32)
    };
    let mut worst: f64 = 0.0;
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                worst = worst.max((deriv(a, b, c) + deriv(b, c, a) + deriv(c, a, b)).norm());
            }
        }
    }
    Ok(worst)
}

/// `log h_U = ½ Σ (|z_i|² − |w_i|² + ζ z̄_i w̄_i + ζ̄ z_i w_i)`.
pub fn log_hu(pt: &SmoothProductCoords) -> f64 {
    let mut s = 0.0;
    for (z, w) in pt.z.iter().zip(&pt.w) {
        s += z.norm_sqr() - w.norm_sqr() + 2.0 * (pt.zeta * z.conj() * w.conj()).re;
    }
    0.5 * s
}

/// `log h_V(z, w, ζ) = −log h_U(z, w, −1/ζ̄)`.
pub fn log_hv(pt: &SmoothProductCoords) -> Result<f64> {
    check_zeta(pt.zeta, "log h_V")?;
    Ok(-log_hu(&SmoothProductCoords { zeta: -pt.zeta.conj().inv(), ..pt.clone() }))
}

/// `|log h_V − log h_U + 2 log|g_UV||` at a point of the overlap.
pub fn reality_residual(pt: &SmoothProductCoords) -> Result<f64> {
    let g = transition_guv(&pt.to_chart_u())?;
    Ok((log_hv(pt)? - log_hu(pt) + 2.0 * g.norm().ln()).abs())
}

/// The real form R with `∂̄∂ log h_U = i·R`, from `∂̄∂ = (i/2)dd^c` in the twistor structure.
pub fn dbar_d_log_hu(pt: &SmoothProductCoords, scheme: &FdScheme) -> Result<FormValue> {
    let dim = 4 * pt.dim() + 2;
    let f = ScalarFn::new(dim, |x: &[f64]| SmoothProductCoords::from_real(x).map(|p| log_hu(&p)).unwrap_or(f64::NAN));
    let j = |x: &[f64]| {
        SmoothProductCoords::from_real(x)
            .and_then(|p| twistor_structure(&p))
            .unwrap_or_else(|_| DMatrix::from_element(dim, dim, f64::NAN))
    };
    Ok(ddc(&f, j, &pt.to_real(), scheme)?.scale(0.5))
}

/// The constant target `Σ(−dz∧dz̄ + dw∧dw̄)/2 = i·Σ(dx_z∧dy_z − dx_w∧dy_w)`, as its real part over i.
pub fn hermitian_target(dim: usize) -> FormValue {
    let n = dim;
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push((2 * i, 2 * i + 1, 1.0));
        terms.push((2 * n + 2 * i, 2 * n + 2 * i + 1, -1.0));
    }
    FormValue::two_form(4 * n + 2, &terms)
}

/// `max |∂̄∂ log h_U / i − target|`.
pub fn hermitian_metric_check(pt: &SmoothProductCoords, scheme: &FdScheme) -> Result<f64> {
    Ok((dbar_d_log_hu(pt, scheme)? - hermitian_target(pt.dim())).max_abs())
}
