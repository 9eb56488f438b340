//! Hyperkähler quotients of flat Hⁿ by tori, descent of the hyperholomorphic bundle,
//! and the affine Dynkin data behind the ALE quiver quotients.

mod action;
mod dynkin;
mod level;
mod sample;

pub use action::{equivariance_residual, hk_moment, moment_jacobian, moment_vector, LinearAction};
pub use dynkin::{affine_cartan, dynkin_signs, group_order, mckay_dims, quiver_dim, DynkinGraph, DynkinKind};
pub use level::{solve_level, LevelSetPoint, LevelSpec, LEVEL_TOL, MAX_CONDITION, MAX_NEWTON_ITERS};
pub use sample::{
    canonical_bundle_curvature, descended_circle_data, descended_moment_residual, fit_two_centers, gh_coordinates,
    quotient_ddc_mu, quotient_hyperholo_curvature, quotient_sample, CenterFit, DescendedCircle, QuotientChart,
    QuotientSample,
};

use crate::hkspace::CircleActionSpec;

/// The Eguchi–Hanson fixture on H²: the group circle, the rotating circle and the
/// residual triholomorphic circle.
pub struct EguchiHanson {
    pub action: LinearAction,
    pub rotator: CircleActionSpec,
    pub residual: CircleActionSpec,
}

impl EguchiHanson {
    pub fn new() -> Self {
        let group = CircleActionSpec { k: vec![1, 1], l: vec![-1, -1] };
        Self {
            action: LinearAction::torus(&[group]).expect("fixed triholomorphic weights"),
            rotator: CircleActionSpec::uniform(2, 1, 1),
            residual: CircleActionSpec { k: vec![1, -1], l: vec![-1, 1] },
        }
    }
}

impl Default for EguchiHanson {
    fn default() -> Self {
        Self::new()
    }
}
