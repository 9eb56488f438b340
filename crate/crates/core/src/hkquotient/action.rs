use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hkspace::{CircleActionSpec, FlatModel};

const COMMUTE_TOL: f64 = 1e-12;

/// A linear triholomorphic action of a compact group on flat Hⁿ, by its Lie algebra generators.
#[derive(Debug, Clone)]
pub struct LinearAction {
    model: FlatModel,
    generators: Vec<DMatrix<f64>>,
    /// `[ξ_a, ξ_b] = Σ_c f[a][b][c] ξ_c`.
    structure_constants: Vec<Vec<Vec<f64>>>,
}

fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.iter().copied())
}

/// Least-squares coefficients of `m` in the span of `basis`, and the fit residual.
fn expand(basis: &[DMatrix<f64>], m: &DMatrix<f64>) -> (Vec<f64>, f64) {
    if basis.is_empty() {
        return (vec![], m.amax());
    }
    let cols: Vec<DVector<f64>> = basis.iter().map(flatten).collect();
    let a = DMatrix::from_columns(&cols);
    let b = flatten(m);
    let coef = a.clone().svd(true, true).solve(&b, 1e-14).unwrap_or_else(|_| DVector::zeros(basis.len()));
    let res = (&a * &coef - b).amax();
    (coef.iter().copied().collect(), res)
}

impl LinearAction {
    pub fn new(n: usize, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        let model = FlatModel::new(n)?;
        let dim = 4 * n;
        for (a, g) in generators.iter().enumerate() {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::Invalid(format!("generator {a} is not {dim}×{dim}")));
            }
            let skew = (g + g.transpose()).amax();
            if skew > COMMUTE_TOL {
                return Err(Error::Model(format!("generator {a} is not skew (residual {skew:.3e})")));
            }
            for (s, name) in model.structures().iter().zip(["I", "J", "K"]) {
                let c = (s * g - g * s).amax();
                if c > COMMUTE_TOL {
                    return Err(Error::Model(format!("generator {a} does not commute with {name} (residual {c:.3e})")));
                }
            }
        }
        let k = generators.len();
        let mut structure_constants = vec![vec![vec![0.0; k]; k]; k];
        for a in 0..k {
            for b in 0..k {
                let br = &generators[a] * &generators[b] - &generators[b] * &generators[a];
                let (coef, res) = expand(&generators, &br);
                if res > 1e-10 {
                    return Err(Error::Model(format!("generators do not close under bracket (residual {res:.3e})")));
                }
                structure_constants[a][b] = coef;
            }
        }
        Ok(Self { model, generators, structure_constants })
    }

    /// A torus acting diagonally, one circle per weight pair.
    pub fn torus(specs: &[CircleActionSpec]) -> Result<Self> {
        let n = specs.first().ok_or_else(|| Error::Invalid("empty torus".into()))?.n();
        if specs.iter().any(|s| s.n() != n) {
            return Err(Error::Invalid("all circle factors must act on the same Hⁿ".into()));
        }
        Self::new(n, specs.iter().map(CircleActionSpec::generator).collect())
    }

    pub fn model(&self) -> &FlatModel {
        &self.model
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn dim_g(&self) -> usize {
        self.generators.len()
    }

    pub fn real_dim(&self) -> usize {
        self.model.real_dim()
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<f64>>] {
        &self.structure_constants
    }

    pub fn is_abelian(&self) -> bool {
        self.structure_constants.iter().flatten().flatten().all(|c| c.abs() < 1e-12)
    }

    /// Orbit directions `ξ_a m` as columns.
    pub fn orbit_vectors(&self, m: &DVector<f64>) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.generators.iter().map(|g| g * m).collect();
        DMatrix::from_columns(&cols)
    }

    /// Largest commutator of `x` with the generators.
    pub fn commutator_residual(&self, x: &DMatrix<f64>) -> f64 {
        self.generators.iter().map(|g| (g * x - x * g).amax()).fold(0.0, f64::max)
    }
}

/// `ν_j(m)(ξ_a) = ½ω_j(ξ_a m, m)` as a 3 × dim 𝔤 matrix.
pub fn hk_moment(action: &LinearAction, m: &DVector<f64>) -> DMatrix<f64> {
    let k = action.dim_g();
    let mut out = DMatrix::zeros(3, k);
    for j in 0..3 {
        let w = action.model().omega(j).to_matrix();
        for a in 0..k {
            let x = &action.generators()[a] * m;
            out[(j, a)] = 0.5 * x.dot(&(&w * m));
        }
    }
    out
}

/// Jacobian of `ν` with rows ordered `(j, a)` ↦ `3a + j`; row `(j, a)` is `(S_j ξ_a m)ᵀ`.
pub fn moment_jacobian(action: &LinearAction, m: &DVector<f64>) -> DMatrix<f64> {
    let k = action.dim_g();
    let mut jac = DMatrix::zeros(3 * k, action.real_dim());
    for a in 0..k {
        let x = &action.generators()[a] * m;
        for j in 0..3 {
            let row = action.model().structure(j) * &x;
            jac.set_row(3 * a + j, &row.transpose());
        }
    }
    jac
}

/// `ν` flattened in the same `(j, a)` order as [`moment_jacobian`].
pub fn moment_vector(action: &LinearAction, m: &DVector<f64>) -> DVector<f64> {
    let nu = hk_moment(action, m);
    DVector::from_fn(3 * action.dim_g(), |r, _| nu[(r % 3, r / 3)])
}

/// `max |ν(g·m)(ξ) − ν(m)(Ad_{g⁻¹}ξ)|` for `g = exp(t ξ_b)` over all generators `ξ_b`.
pub fn equivariance_residual(action: &LinearAction, m: &DVector<f64>, t: f64) -> f64 {
    let nu = hk_moment(action, m);
    let mut worst: f64 = 0.0;
    for b in action.generators() {
        let g = (b * t).exp();
        let ginv = (b * (-t)).exp();
        let lhs = hk_moment(action, &(&g * m));
        for (a, xa) in action.generators().iter().enumerate() {
            let (coef, _) = expand(action.generators(), &(&ginv * xa * &g));
            for j in 0..3 {
                let rhs: f64 = coef.iter().enumerate().map(|(c, x)| x * nu[(j, c)]).sum();
                worst = worst.max((lhs[(j, a)] - rhs).abs());
            }
        }
    }
    worst
}
