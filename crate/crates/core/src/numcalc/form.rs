use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

/// Number of k-subsets of an n-set.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing multi-indices of length `k` in `0..n`, in lexicographic order.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Lexicographic rank of an increasing multi-index.
fn rank(n: usize, idx: &[usize]) -> usize {
    let k = idx.len();
    let mut r = 0;
    let mut prev: isize = -1;
    for (i, &c) in idx.iter().enumerate() {
        for j in (prev + 1) as usize..c {
            r += binomial(n - 1 - j, k - 1 - i);
        }
        prev = c as isize;
    }
    r
}

/// Sort `idx` in place; return the permutation sign, or 0 if an index repeats.
fn sort_with_sign(idx: &mut [usize]) -> f64 {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0.0
    } else {
        sign
    }
}

/// Determinant of a small dense matrix given row-major, by partial-pivot elimination.
pub(crate) fn small_det(mut a: Vec<f64>, k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&x, &y| a[x * k + col].abs().total_cmp(&a[y * k + col].abs()))
            .unwrap();
        if a[piv * k + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..k {
                a.swap(piv * k + c, col * k + c);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in col + 1..k {
            let factor = a[r * k + col] / p;
            if factor != 0.0 {
                for c in col..k {
                    a[r * k + c] -= factor * a[col * k + c];
                }
            }
        }
    }
    det
}

/// An alternating k-linear form on R^N, stored on the increasing multi-index basis:
/// `w = Σ_{i₁<…<i_k} w_I dx^{i₁}∧…∧dx^{i_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormValue {
    dim: usize,
    degree: usize,
    comps: Vec<f64>,
}

impl FormValue {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        Self { dim, degree, comps: vec![0.0; binomial(dim, degree)] }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self { dim, degree: 0, comps: vec![value] }
    }

    /// Builds a form from components listed in `multi_indices(dim, degree)` order.
    pub fn from_components(dim: usize, degree: usize, comps: Vec<f64>) -> Self {
        assert_eq!(comps.len(), binomial(dim, degree), "component count mismatch");
        Self { dim, degree, comps }
    }

    /// 1-form from a covector.
    pub fn covector(v: &[f64]) -> Self {
        Self { dim: v.len(), degree: 1, comps: v.to_vec() }
    }

    /// 2-form from the matrix of values `M[i][j] = w(e_i, e_j)`; only the upper triangle is read.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let comps = multi_indices(n, 2).iter().map(|ij| m[(ij[0], ij[1])]).collect();
        Self { dim: n, degree: 2, comps }
    }

    /// `Σ coeff · dx^i ∧ dx^j` for a list of `(i, j, coeff)` terms.
    pub fn two_form(dim: usize, terms: &[(usize, usize, f64)]) -> Self {
        let mut w = Self::zeros(dim, 2);
        for &(i, j, c) in terms {
            w.add_component(&[i, j], c);
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    /// Component on an arbitrary (possibly unsorted or repeated) index tuple.
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.degree);
        let mut sorted = idx.to_vec();
        let s = sort_with_sign(&mut sorted);
        if s == 0.0 {
            return 0.0;
        }
        s * self.comps[rank(self.dim, &sorted)]
    }

    /// Adds `value` to the component `idx` (any order), respecting antisymmetry.
    pub fn add_component(&mut self, idx: &[usize], value: f64) {
        let mut sorted = idx.to_vec();
        let s = sort_with_sign(&mut sorted);
        if s != 0.0 {
            let r = rank(self.dim, &sorted);
            self.comps[r] += s * value;
        }
    }

    /// Value on `degree` tangent vectors.
    pub fn eval(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let k = self.degree;
        if k == 0 {
            return self.comps[0];
        }
        let mut total = 0.0;
        for (c, idx) in self.comps.iter().zip(multi_indices(self.dim, k)) {
            if *c == 0.0 {
                continue;
            }
            let mut m = Vec::with_capacity(k * k);
            for &i in &idx {
                for v in vectors {
                    m.push(v[i]);
                }
            }
            total += c * small_det(m, k);
        }
        total
    }

    /// Matrix `M[i][j] = w(e_i, e_j)` of a 2-form.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.degree, 2);
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (c, ij) in self.comps.iter().zip(multi_indices(self.dim, 2)) {
            m[(ij[0], ij[1])] = *c;
            m[(ij[1], ij[0])] = -*c;
        }
        m
    }

    pub fn wedge(&self, other: &FormValue) -> FormValue {
        assert_eq!(self.dim, other.dim);
        let mut out = FormValue::zeros(self.dim, self.degree + other.degree);
        if self.degree + other.degree > self.dim {
            return out;
        }
        let a_idx = multi_indices(self.dim, self.degree);
        let b_idx = multi_indices(self.dim, other.degree);
        for (ca, ia) in self.comps.iter().zip(&a_idx) {
            if *ca == 0.0 {
                continue;
            }
            for (cb, ib) in other.comps.iter().zip(&b_idx) {
                if *cb == 0.0 {
                    continue;
                }
                let joined: Vec<usize> = ia.iter().chain(ib.iter()).copied().collect();
                out.add_component(&joined, ca * cb);
            }
        }
        out
    }

    /// Interior product `i_X w`, i.e. `w(X, ·, …)`.
    pub fn interior(&self, x: &[f64]) -> FormValue {
        assert!(self.degree >= 1);
        assert_eq!(x.len(), self.dim);
        let mut out = FormValue::zeros(self.dim, self.degree - 1);
        for (c, idx) in self.comps.iter().zip(multi_indices(self.dim, self.degree)) {
            for (pos, &i) in idx.iter().enumerate() {
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &j)| j).collect();
                out.add_component(&rest, sign * c * x[i]);
            }
        }
        out
    }

    /// Restriction to the span of `frame`: the form on R^m with components `w(f_{i₁}, …)`.
    pub fn restrict(&self, frame: &[Vec<f64>]) -> FormValue {
        let m = frame.len();
        let comps = multi_indices(m, self.degree)
            .iter()
            .map(|idx| {
                let vs: Vec<&[f64]> = idx.iter().map(|&i| frame[i].as_slice()).collect();
                self.eval(&vs)
            })
            .collect();
        FormValue { dim: m, degree: self.degree, comps }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the stored components.
    pub fn coeff_norm(&self) -> f64 {
        self.comps.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> FormValue {
        FormValue { dim: self.dim, degree: self.degree, comps: self.comps.iter().map(|c| c * s).collect() }
    }

    fn zip_with(&self, other: &FormValue, f: impl Fn(f64, f64) -> f64) -> FormValue {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "form shape mismatch");
        FormValue {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

impl Add for &FormValue {
    type Output = FormValue;
    fn add(self, rhs: &FormValue) -> FormValue {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FormValue {
    type Output = FormValue;
    fn sub(self, rhs: &FormValue) -> FormValue {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for FormValue {
    type Output = FormValue;
    fn add(self, rhs: FormValue) -> FormValue {
        &self + &rhs
    }
}

impl Sub for FormValue {
    type Output = FormValue;
    fn sub(self, rhs: FormValue) -> FormValue {
        &self - &rhs
    }
}

impl Neg for FormValue {
    type Output = FormValue;
    fn neg(self) -> FormValue {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &FormValue {
    type Output = FormValue;
    fn mul(self, s: f64) -> FormValue {
        self.scale(s)
    }
}

impl Mul<f64> for FormValue {
    type Output = FormValue;
    fn mul(self, s: f64) -> FormValue {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn multi_index_ranks_are_positions() {
        for n in 1..7 {
            for k in 0..=n {
                let all = multi_indices(n, k);
                assert_eq!(all.len(), binomial(n, k));
                for (pos, idx) in all.iter().enumerate() {
                    assert_eq!(rank(n, idx), pos);
                }
            }
        }
    }

    #[test]
    fn wedge_of_basis_covectors() {
        let dx0 = FormValue::covector(&[1.0, 0.0, 0.0, 0.0]);
        let dx1 = FormValue::covector(&[0.0, 1.0, 0.0, 0.0]);
        let w = dx0.wedge(&dx1);
        assert_eq!(w.get(&[0, 1]), 1.0);
        assert_eq!(w.get(&[1, 0]), -1.0);
        assert_eq!(dx1.wedge(&dx0).get(&[0, 1]), -1.0);
        let v = w.eval(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]]);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn interior_product_of_area_form() {
        let w = FormValue::two_form(3, &[(1, 2, 1.0)]);
        let i = w.interior(&[0.0, 2.0, 0.0]);
        assert_eq!(i.components(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn volume_form_square_of_symplectic() {
        let w = FormValue::two_form(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let v = w.wedge(&w);
        assert_eq!(v.get(&[0, 1, 2, 3]), 2.0);
    }

    proptest! {
        #[test]
        fn swapping_arguments_flips_sign(
            comps in proptest::collection::vec(-1.0f64..1.0, 10),
            a in proptest::collection::vec(-1.0f64..1.0, 5),
            b in proptest::collection::vec(-1.0f64..1.0, 5),
            c in proptest::collection::vec(-1.0f64..1.0, 5),
        ) {
            let w = FormValue::from_components(5, 3, comps);
            let x = w.eval(&[&a, &b, &c]);
            let y = w.eval(&[&b, &a, &c]);
            let z = w.eval(&[&a, &c, &b]);
            prop_assert!((x + y).abs() < 1e-12);
            prop_assert!((x + z).abs() < 1e-12);
        }

        #[test]
        fn matrix_roundtrip(comps in proptest::collection::vec(-1.0f64..1.0, 15)) {
            let w = FormValue::from_components(6, 2, comps);
            prop_assert_eq!(FormValue::from_matrix(&w.to_matrix()), w);
        }
    }
}
