use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::form::{multi_indices, small_det, FormValue};
use super::structure::MetricValue;

fn perm_sign(seq: &[usize]) -> f64 {
    let mut s = 1.0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                s = -s;
            }
        }
    }
    s
}

fn minor(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    if k == 0 {
        return 1.0;
    }
    let mut a = Vec::with_capacity(k * k);
    for &r in rows {
        for &c in cols {
            a.push(m[(r, c)]);
        }
    }
    small_det(a, k)
}

/// Components `w^I` of a form with all indices raised by `g`.
fn raise(ginv: &DMatrix<f64>, w: &FormValue) -> Vec<f64> {
    let idx = multi_indices(w.dim(), w.degree());
    idx.iter()
        .map(|i| idx.iter().zip(w.components()).map(|(j, c)| c * minor(ginv, i, j)).sum())
        .collect()
}

/// Metric Hodge dual, `w ∧ ∗u = ⟨w, u⟩_g vol_g`, with `vol_g = orientation · √det g dx¹∧…∧dxᴺ`.
pub fn hodge_star(g: &MetricValue, orientation: f64, w: &FormValue) -> Result<FormValue> {
    let n = g.dim();
    if w.dim() != n {
        return Err(Error::Invalid(format!("form dimension {} vs metric {}", w.dim(), n)));
    }
    let det = g.det();
    if !(det > 0.0) {
        return Err(Error::Metric(format!("singular metric (det {det:.3e})")));
    }
    let k = w.degree();
    let up = raise(&g.inverse(), w);
    let src = multi_indices(n, k);
    let vol = orientation.signum() * det.sqrt();
    let mut out = FormValue::zeros(n, n - k);
    for (i, wi) in src.iter().zip(&up) {
        let comp: Vec<usize> = (0..n).filter(|x| !i.contains(x)).collect();
        let seq: Vec<usize> = i.iter().chain(comp.iter()).copied().collect();
        out.add_component(&comp, vol * perm_sign(&seq) * wi);
    }
    Ok(out)
}

/// Pointwise norm `√⟨w, w⟩_g`.
pub fn form_norm(g: &MetricValue, w: &FormValue) -> f64 {
    let up = raise(&g.inverse(), w);
    up.iter().zip(w.components()).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn star_dx1_in_r3() {
        let g = MetricValue::euclidean(3);
        let s = hodge_star(&g, 1.0, &FormValue::covector(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(s.get(&[1, 2]), 1.0);
        assert_eq!(s.get(&[0, 1]), 0.0);
    }

    #[test]
    fn kahler_form_self_dual_in_r4() {
        let g = MetricValue::euclidean(4);
        let w1 = FormValue::two_form(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
        assert_eq!(hodge_star(&g, 1.0, &w1).unwrap(), w1);
        let asd = FormValue::two_form(4, &[(0, 1, 1.0), (2, 3, -1.0)]);
        assert_eq!(hodge_star(&g, 1.0, &asd).unwrap(), asd.scale(-1.0));
    }

    fn random_metric(diag: &[f64], off: &[f64]) -> MetricValue {
        let n = diag.len();
        let mut a = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = off[k % off.len()];
                k += 1;
            }
        }
        let g = &a * a.transpose() + DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(diag));
        MetricValue::new(g).unwrap()
    }

    proptest! {
        #[test]
        fn star_is_isometry_and_squares_to_sign(
            diag in proptest::collection::vec(0.5f64..2.0, 4),
            off in proptest::collection::vec(-0.5f64..0.5, 16),
            comps in proptest::collection::vec(-1.0f64..1.0, 6),
            one in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            let g = random_metric(&diag, &off);
            let w = FormValue::from_components(4, 2, comps);
            let sw = hodge_star(&g, 1.0, &w).unwrap();
            prop_assert!((form_norm(&g, &sw) - form_norm(&g, &w)).abs() < 1e-10);
            // ∗∗ = (−1)^{k(n−k)} in Riemannian signature
            let ssw = hodge_star(&g, 1.0, &sw).unwrap();
            prop_assert!((&ssw - &w).max_abs() < 1e-10);
            let a = FormValue::covector(&one);
            let ssa = hodge_star(&g, 1.0, &hodge_star(&g, 1.0, &a).unwrap()).unwrap();
            prop_assert!((&ssa + &a).max_abs() < 1e-10);
        }
    }
}
