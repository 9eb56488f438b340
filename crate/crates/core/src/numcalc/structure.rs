use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::form::FormValue;

/// `max |(S² + Id)_{ij}|`.
pub fn almost_complex_residual(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows();
    (s * s + DMatrix::identity(n, n)).amax()
}

/// A linear endomorphism with S² = −Id at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructureValue(DMatrix<f64>);

impl ComplexStructureValue {
    pub fn new(s: DMatrix<f64>, tol: f64) -> Result<Self> {
        let residual = almost_complex_residual(&s);
        if residual > tol {
            return Err(Error::Structure { residual, tol });
        }
        Ok(Self(s))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// Symmetric positive-definite metric at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue(DMatrix<f64>);

impl MetricValue {
    /// Symmetrizes `g` and checks positivity.
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        let sym = (&g + g.transpose()) * 0.5;
        if sym.iter().any(|x| !x.is_finite()) {
            return Err(Error::Metric("non-finite metric entry".into()));
        }
        let min = sym.clone().symmetric_eigen().eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::Metric(format!("metric not positive definite (min eigenvalue {min:.3e})")));
        }
        Ok(Self(sym))
    }

    pub fn euclidean(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.0.clone().cholesky().expect("positive definite").inverse()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Columns form a g-orthonormal basis (E^T G E = Id).
    pub fn orthonormal_frame(&self) -> DMatrix<f64> {
        let l = self.0.clone().cholesky().expect("positive definite").l();
        l.transpose().try_inverse().expect("invertible Cholesky factor")
    }
}

/// The endomorphism S with `w(X, Y) = g(SX, Y)`, i.e. `S = −G⁻¹W` for the matrix W of `w`.
pub fn structure_from_form(g: &MetricValue, w: &FormValue) -> DMatrix<f64> {
    -(g.inverse() * w.to_matrix())
}

/// `max_{a<b} |F(S e_a, S e_b) − F(e_a, e_b)|` over the columns of `frame`.
pub fn type11_residual_in_frame(f: &FormValue, s: &DMatrix<f64>, frame: &DMatrix<f64>) -> f64 {
    let w = f.to_matrix();
    let diff = s.transpose() * &w * s - &w;
    (frame.transpose() * diff * frame).amax()
}

/// Type-(1,1) residual in the standard basis, which is orthonormal for flat metrics.
pub fn type11_residual(f: &FormValue, s: &DMatrix<f64>) -> f64 {
    let n = s.nrows();
    type11_residual_in_frame(f, s, &DMatrix::identity(n, n))
}

/// Type-(1,1) residual in a g-orthonormal frame.
pub fn type11_residual_metric(f: &FormValue, s: &DMatrix<f64>, g: &MetricValue) -> f64 {
    type11_residual_in_frame(f, s, &g.orthonormal_frame())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn std_i4() -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        m[(1, 0)] = 1.0;
        m[(0, 1)] = -1.0;
        m[(3, 2)] = 1.0;
        m[(2, 3)] = -1.0;
        m
    }

    #[test]
    fn omega_recovers_structure() {
        let w = FormValue::two_form(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let s = structure_from_form(&MetricValue::euclidean(4), &w);
        assert_eq!(s, std_i4());
    }

    #[test]
    fn symplectic_form_is_11_and_holomorphic_form_is_not() {
        let w1 = FormValue::two_form(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let w2 = FormValue::two_form(4, &[(0, 2, 1.0), (1, 3, -1.0)]);
        assert!(type11_residual(&w1, &std_i4()) < 1e-15);
        assert!(type11_residual(&w2, &std_i4()) > 1.0);
    }

    #[test]
    fn rejects_indefinite_metric() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(MetricValue::new(g), Err(Error::Metric(_))));
    }

    #[test]
    fn rejects_non_complex() {
        assert!(ComplexStructureValue::new(DMatrix::identity(2, 2), 1e-10).is_err());
        assert!(ComplexStructureValue::new(std_i4(), 1e-12).is_ok());
    }

    proptest! {
        #[test]
        fn residual_invariant_under_orthonormal_change(
            angle in 0.0f64..std::f64::consts::TAU, comps in proptest::collection::vec(-1.0f64..1.0, 6)
        ) {
            let f = FormValue::from_components(4, 2, comps);
            let s = std_i4();
            // A rotation in the (0,2) plane followed by one in (1,3); zero iff zero in any frame,
            // and the max over a frame pair equals the Frobenius-like norm only up to frame,
            // so compare the Frobenius norm of the residual matrix.
            let (c, sn) = (angle.cos(), angle.sin());
            let mut r = DMatrix::identity(4, 4);
            r[(0, 0)] = c; r[(0, 2)] = -sn; r[(2, 0)] = sn; r[(2, 2)] = c;
            let w = f.to_matrix();
            let diff = s.transpose() * &w * &s - &w;
            let rotated = r.transpose() * &diff * &r;
            prop_assert!((rotated.norm() - diff.norm()).abs() < 1e-10);
        }
    }
}
