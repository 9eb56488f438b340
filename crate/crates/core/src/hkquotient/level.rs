use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::action::{moment_jacobian, moment_vector, LinearAction};
use crate::error::{Error, Result};

/// Jacobians with a larger condition number are treated as a non-free point.
pub const MAX_CONDITION: f64 = 1e8;
pub const LEVEL_TOL: f64 = 1e-12;
pub const MAX_NEWTON_ITERS: usize = 50;

/// The level `ν = (c, 0, 0)`, with `c` given against the generator basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub c: Vec<f64>,
}

impl LevelSpec {
    pub fn new(action: &LinearAction, c: Vec<f64>) -> Result<Self> {
        if c.len() != action.dim_g() {
            return Err(Error::Invalid(format!("level has {} entries, group has dimension {}", c.len(), action.dim_g())));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("level must be finite".into()));
        }
        let spec = Self { c };
        let res = spec.coadjoint_residual(action);
        if res > 1e-10 {
            return Err(Error::Model(format!("level is not coadjoint invariant (residual {res:.3e})")));
        }
        Ok(spec)
    }

    /// `max_{a,b} |c([ξ_a, ξ_b])|`.
    pub fn coadjoint_residual(&self, action: &LinearAction) -> f64 {
        let f = action.structure_constants();
        let mut worst: f64 = 0.0;
        for row in f {
            for coef in row {
                worst = worst.max(coef.iter().zip(&self.c).map(|(x, c)| x * c).sum::<f64>().abs());
            }
        }
        worst
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| (x - x.round()).abs() < 1e-12)
    }

    /// The character `χ = c` whose associated bundle carries the curvature `ω̄₁ + dd^cμ̄/n`.
    pub fn character(&self) -> Result<Vec<i64>> {
        if !self.is_integral() {
            return Err(Error::Model(format!("level {:?} is not integral: no associated line bundle", self.c)));
        }
        Ok(self.c.iter().map(|x| x.round() as i64).collect())
    }

    /// Target vector in the `(j, a)` order of the moment Jacobian.
    pub fn target(&self) -> DVector<f64> {
        DVector::from_fn(3 * self.c.len(), |r, _| if r % 3 == 0 { self.c[r / 3] } else { 0.0 })
    }
}

/// A point on the level set, with cached derivative and orbit frame.
#[derive(Debug, Clone)]
pub struct LevelSetPoint {
    pub m: DVector<f64>,
    pub jacobian: DMatrix<f64>,
    pub orbit: DMatrix<f64>,
    pub residual: f64,
    /// Residual norms, starting with the seed.
    pub history: Vec<f64>,
}

impl LevelSetPoint {
    pub fn iterations(&self) -> usize {
        self.history.len() - 1
    }
}

/// Condition number of a full-row-rank matrix, infinite if rank deficient.
pub(crate) fn condition(j: &DMatrix<f64>) -> f64 {
    let sv = j.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 || max == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Newton iteration on `ν(m) = (c, 0, 0)` with minimum-norm steps `Jᵀ(JJᵀ)⁻¹r`.
pub fn solve_level(action: &LinearAction, level: &LevelSpec, seed: &DVector<f64>) -> Result<LevelSetPoint> {
    if seed.len() != action.real_dim() {
        return Err(Error::Invalid(format!("seed has dimension {}, expected {}", seed.len(), action.real_dim())));
    }
    let target = level.target();
    let mut m = seed.clone();
    let mut history = Vec::new();
    for _ in 0..=MAX_NEWTON_ITERS {
        let r = moment_vector(action, &m) - &target;
        let res = r.amax();
        history.push(res);
        let jac = moment_jacobian(action, &m);
        let cond = condition(&jac);
        if res < LEVEL_TOL {
            if cond > MAX_CONDITION {
                return Err(Error::NonFree { cond });
            }
            let orbit = action.orbit_vectors(&m);
            return Ok(LevelSetPoint { m, jacobian: jac, orbit, residual: res, history });
        }
        if cond > MAX_CONDITION {
            return Err(Error::NonFree { cond });
        }
        let jjt = &jac * jac.transpose();
        let y = jjt.lu().solve(&r).ok_or(Error::NonFree { cond })?;
        m -= jac.transpose() * y;
        if !m.iter().all(|x| x.is_finite()) {
            break;
        }
    }
    Err(Error::Convergence { iters: MAX_NEWTON_ITERS, residual: *history.last().unwrap_or(&f64::NAN) })
}
