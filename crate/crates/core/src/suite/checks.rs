//! The per-module check lists behind `verify`.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::report::{max_of, Recorder};
use crate::bgmetric::{
    bg_curvature_pair, bg_hyperkahler_check, bg_moment_residuals, fu_identity_residual, log_grid, CotangentPoint,
    SymmetricSpaceModel,
};
use crate::error::{Error, Result};
use crate::ghspace::{
    asd_residual, curvature_ahat, gh_metric, gh_structures, monopole_residuals, rotation_lift_f, sphere_period,
    GhConfig, GhPoint, MonopoleData,
};
use crate::hkquotient::{
    canonical_bundle_curvature, descended_moment_residual, dynkin_signs, fit_two_centers, gh_coordinates, group_order,
    quiver_dim, quotient_hyperholo_curvature, quotient_sample, solve_level, DynkinGraph, DynkinKind, EguchiHanson,
    LevelSetPoint, LevelSpec, LinearAction,
};
use crate::hkspace::{
    curvature_closedness, hyperholo_curvature, killing_residual, moment_residual, rotation_degree_check,
    scaled_up_curvature, CircleActionSpec, FlatModel,
};
use crate::numcalc::{type11_residual, type11_residual_metric};
use crate::twistor::{
    connection_pair_residual, curvature_fz, fz_checks, fz_closedness, hermitian_metric_check,
    holomorphic_exterior_derivative, mero_connection, pencil_reality_residual, pole_orders, reality_residual,
    transition_dbar_residual, transition_guv, transition_gvu, twistor_structure, AvForm, SmoothProductCoords,
    TwistorPointU,
};

type C = Complex64;

fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

// ---------------------------------------------------------------- flat

pub fn flat(cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let s = cfg.scheme()?;
    let n = cfg.n;
    let model = FlatModel::new(n)?;
    let mut r = rng(cfg, 1);
    let points: Vec<Vec<f64>> = (0..cfg.samples).map(|_| (0..4 * n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    for (k, l) in [(0, 1), (1, 1)] {
        let spec = CircleActionSpec::uniform(n, k, l);
        let tag = format!("flat.k{k}l{l}");
        for (si, name) in ["I", "J", "K"].iter().enumerate() {
            rec.check(&format!("{tag}.type11.{name}"), "F = ω₁ + dd^cμ/n is of type (1,1)", 1e-8, || {
                max_of(points.iter().map(|p| Ok(type11_residual(&hyperholo_curvature(&spec, p, &s)?, model.structure(si)))))
            });
        }
        rec.check(&format!("{tag}.moment"), "dμ = i_Xω₁", 1e-9, || {
            max_of(points.iter().map(|p| moment_residual(&spec, p, &s)))
        });
        rec.check(&format!("{tag}.killing"), "X preserves g and I", 1e-12, || killing_residual(&spec));
        rec.check(&format!("{tag}.closed"), "dF = 0", 1e-6, || {
            max_of(points.iter().take(5).map(|p| curvature_closedness(&spec, p, &s)))
        });
        let degree = spec.rotation_degree()?;
        rec.check(&format!("{tag}.degree"), "(ω₂+iω₃) ↦ e^{inθ}(ω₂+iω₃)", 1e-12, || {
            rotation_degree_check(&spec, degree, &[0.3, 1.1, 2.5, 4.0])
        });
    }
    let full = CircleActionSpec::uniform(n, 1, 1);
    rec.check("flat.full_rotation.vanishes", "full rotation: the line bundle is trivial", 1e-9, || {
        max_of(points.iter().map(|p| Ok(hyperholo_curvature(&full, p, &s)?.max_abs())))
    });
    rec.check("flat.k0l1.closed_form", "weights (0,1): F = (i/2)Σ(dz∧dz̄ − dw∧dw̄)", 1e-9, || {
        let spec = CircleActionSpec::uniform(n, 0, 1);
        let mut terms = Vec::new();
        for i in 0..n {
            terms.push((2 * i, 2 * i + 1, 1.0));
            terms.push((2 * n + 2 * i, 2 * n + 2 * i + 1, -1.0));
        }
        let expect = crate::numcalc::FormValue::two_form(4 * n, &terms);
        max_of(points.iter().map(|p| Ok((hyperholo_curvature(&spec, p, &s)? - expect.clone()).max_abs())))
    });
    rec.diagnostic("flat.full_rotation.scaled_up_norm", "‖ω₁ + n·dd^cμ‖ with n as a multiplier", 1e-9, || {
        max_of(points.iter().map(|p| Ok(scaled_up_curvature(&full, p, &s)?.max_abs())))
    });
    Ok(())
}

// ---------------------------------------------------------------- bg

fn bg_point(r: &mut ChaCha8Rng, pmax: f64) -> Result<CotangentPoint> {
    CotangentPoint::new(
        C::new(r.gen_range(-0.8..0.8), r.gen_range(-0.8..0.8)),
        C::new(r.gen_range(-pmax..pmax), r.gen_range(-pmax..pmax)),
    )
}

pub fn bg(cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let s = cfg.scheme()?;
    let m = SymmetricSpaceModel::cp1();
    let mut r = rng(cfg, 2);
    let pts: Vec<CotangentPoint> = (0..cfg.samples).map(|_| bg_point(&mut r, 1.0)).collect::<Result<_>>()?;
    let near: Vec<CotangentPoint> = (0..cfg.samples.min(20)).map(|_| bg_point(&mut r, 0.5)).collect::<Result<_>>()?;
    rec.check("bg.fu_identity", "(uf)′ = (√(1+u) − 1)/2u", 1e-7, || fu_identity_residual(&log_grid(1e-3, 10.0, 200)));
    let moments: Vec<Result<(f64, f64)>> = pts.iter().map(|p| bg_moment_residuals(&m, p, &s)).collect();
    rec.check("bg.moment.scaling", "μ(v) = ∂_λ h(λ⁻¹v) at λ = 1", 1e-7, || {
        max_of(moments.iter().map(|x| x.clone().map(|t| t.0)))
    });
    rec.check("bg.moment.dc", "μ = −i_X d^c h", 1e-6, || max_of(moments.iter().map(|x| x.clone().map(|t| t.1))));
    rec.check("bg.curvature_pair", "ω₁ + dd^cμ = p*ω + dd^ck", 1e-5, || {
        max_of(pts.iter().take(10).map(|p| bg_curvature_pair(&m, p, &s).map(|(a, b)| (a - b).max_abs())))
    });
    let hk: Vec<_> = near.iter().map(|p| bg_hyperkahler_check(&m, p, &s)).collect();
    rec.check("bg.hk.j_square", "J² = −Id", 1e-6, || max_of(hk.iter().map(|x| x.clone().map(|r| r.j_square))));
    rec.check("bg.hk.anticommute", "IJ = −JI", 1e-6, || max_of(hk.iter().map(|x| x.clone().map(|r| r.anticommute))));
    for (i, name) in ["I", "J", "K"].iter().enumerate() {
        rec.check(&format!("bg.type11.{name}"), "F is of type (1,1)", 1e-6, || {
            max_of(hk.iter().map(|x| x.clone().map(|r| r.type11[i])))
        });
    }
    Ok(())
}

// ---------------------------------------------------------------- gh

pub fn gh_configs(cfg: &RunConfig) -> Result<Vec<GhConfig>> {
    let c = cfg.c.unwrap_or(0.0);
    if cfg.centers.is_empty() {
        Ok(vec![GhConfig::new(vec![0.0, 1.0], c)?, GhConfig::new(vec![0.0, 1.0, 3.0], c)?])
    } else {
        Ok(vec![GhConfig::new(cfg.centers.clone(), c).map_err(|e| Error::Config(e.to_string()))?])
    }
}

fn label(gc: &GhConfig) -> String {
    gc.centers.iter().map(|a| format!("{a}")).collect::<Vec<_>>().join("_")
}

/// A point at distance > 0.3 from every center and > 0.2 from the axis.
pub fn gh_sample(r: &mut ChaCha8Rng, gc: &GhConfig) -> Result<GhPoint> {
    let lo = gc.centers[0] - 1.5;
    let hi = gc.centers[gc.centers.len() - 1] + 1.5;
    loop {
        let x = [r.gen_range(lo..hi), r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5)];
        if gc.min_distance(&x) > 0.3 && x[1].hypot(x[2]) > 0.2 {
            return GhPoint::new(gc, x, r.gen_range(0.0..2.0 * PI));
        }
    }
}

/// Values of f at interior points of each open axis segment between consecutive centers.
pub fn segment_values(gc: &GhConfig, seg: usize) -> Result<Vec<f64>> {
    let (a, b) = (gc.centers[seg], gc.centers[seg + 1]);
    (1..8).map(|k| rotation_lift_f(gc, &[a + (b - a) * k as f64 / 8.0, 0.0, 0.0])).collect()
}

pub fn gh(cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let s = cfg.scheme()?;
    let mut r = rng(cfg, 3);
    for gc in gh_configs(cfg)? {
        let tag = format!("gh.{}", label(&gc));
        let mono = MonopoleData::from_config(&gc);
        let pts: Vec<GhPoint> = (0..cfg.samples).map(|_| gh_sample(&mut r, &gc)).collect::<Result<_>>()?;
        let res: Vec<Result<[f64; 4]>> = pts.iter().map(|p| monopole_residuals(&gc, &mono, &p.x, &p.tags, &s)).collect();
        for (i, (name, anchor)) in [
            ("laplace_v", "ΔV = 0"),
            ("laplace_phi", "Δφ = 0"),
            ("dalpha", "dα = ∗dV"),
            ("dA", "dA = ∗dφ"),
        ]
        .iter()
        .enumerate()
        {
            rec.check(&format!("{tag}.{name}"), anchor, 1e-6, || max_of(res.iter().map(|x| x.clone().map(|v| v[i]))));
        }
        rec.check(&format!("{tag}.asd"), "∗₄dÂ = −dÂ", 1e-5, || {
            max_of(pts.iter().take(10).map(|p| asd_residual(&gc, &mono, p, &s)))
        });
        rec.check(&format!("{tag}.type11"), "dÂ is of type (1,1) for I, J, K", 1e-6, || {
            max_of(pts.iter().take(5).map(|p| {
                let f = curvature_ahat(&gc, &mono, p, &s)?;
                let g = gh_metric(&gc, &p.x, &p.tags)?;
                max_of(gh_structures(&gc, &p.x, &p.tags)?.iter().map(|st| Ok(type11_residual_metric(&f, st, &g))))
            }))
        });
        for seg in 0..gc.centers.len() - 1 {
            let expect = 2.0 * PI * (gc.centers[seg + 1] - gc.centers[seg]);
            rec.check(&format!("{tag}.period.{seg}"), "∫ω₁ over the sphere = 2π(a_{i+1} − a_i)", 1e-6, || {
                Ok((sphere_period(&gc, seg, 8)? - expect).abs() / expect)
            });
            rec.exact(&format!("{tag}.f_constant.{seg}"), "f is constant on each axis segment", || {
                let v = segment_values(&gc, seg)?;
                Ok(v.iter().all(|x| *x == v[0]))
            });
        }
        let k = gc.centers.len();
        if k % 2 == 0 && gc.c == 0.0 {
            rec.exact(&format!("{tag}.f_middle_zero"), "even number of centers, c = 0: f = 0 on the middle segment", || {
                Ok(segment_values(&gc, k / 2 - 1)?.iter().all(|x| *x == 0.0))
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- quotient

/// Level-set points from random seeds; gives up after `50 × count` failed solves.
pub fn level_points(action: &LinearAction, level: &LevelSpec, r: &mut ChaCha8Rng, count: usize) -> Result<Vec<LevelSetPoint>> {
    let mut out = Vec::with_capacity(count);
    let mut last = None;
    for _ in 0..50 * count.max(1) {
        if out.len() == count {
            break;
        }
        let seed = DVector::from_fn(action.real_dim(), |_, _| r.gen_range(-1.5..1.5));
        match solve_level(action, level, &seed) {
            Ok(p) => out.push(p),
            Err(e) => last = Some(e),
        }
    }
    if out.len() < count {
        return Err(last.unwrap_or(Error::Convergence { iters: 0, residual: f64::NAN }));
    }
    Ok(out)
}

/// `(x, V)` samples of the residual circle at level `c`.
pub fn gh_samples(eh: &EguchiHanson, c: f64, r: &mut ChaCha8Rng, count: usize) -> Result<Vec<([f64; 3], f64)>> {
    let level = LevelSpec::new(&eh.action, vec![c])?;
    level_points(&eh.action, &level, r, count)?
        .iter()
        .map(|p| gh_coordinates(&eh.action, &eh.residual, &quotient_sample(&eh.action, p)?))
        .collect()
}

pub fn quotient(cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let s = cfg.scheme()?;
    let eh = EguchiHanson::new();
    let c = cfg.c.unwrap_or(1.0);
    let mut r = rng(cfg, 4);
    let level = LevelSpec::new(&eh.action, vec![c])?;
    let pts = level_points(&eh.action, &level, &mut r, cfg.samples);
    rec.check("quotient.level_set", "ν(m) = (c, 0, 0) by Newton", 1e-12, || {
        max_of(pts.clone()?.iter().map(|p| Ok(p.residual)))
    });
    let pts = pts.unwrap_or_default();
    let charts: Vec<Result<_>> = pts.iter().map(|p| crate::hkquotient::QuotientChart::new(&eh.action, &level, p)).collect();
    rec.check("quotient.hk_algebra", "ω̄_i = ḡ(S̄_i·,·) and S̄_iS̄_j = S̄_k", 1e-8, || {
        max_of(charts.iter().map(|ch| {
            let sm = &ch.as_ref().map_err(Clone::clone)?.sample;
            Ok(sm.structure_residual().max(sm.quaternion_residual()).max(sm.wedge_residual()))
        }))
    });
    rec.check("quotient.descended_moment", "dμ̄ = i_X̄ω̄₁", 1e-7, || {
        max_of(charts.iter().take(5).map(|ch| descended_moment_residual(ch.as_ref().map_err(Clone::clone)?, &eh.rotator, &s)))
    });
    let curv: Vec<Result<_>> = charts
        .iter()
        .map(|ch| {
            let ch = ch.as_ref().map_err(Clone::clone)?;
            Ok((canonical_bundle_curvature(ch, &level.character()?, &s)?, quotient_hyperholo_curvature(ch, &eh.rotator, &s)?, ch.sample.structures.clone()))
        })
        .collect();
    rec.check("quotient.canonical_curvature", "curvature of the bundle with character χ = c equals ω̄₁ + dd^cμ̄/n", 1e-5, || {
        max_of(curv.iter().map(|x| x.as_ref().map_err(Clone::clone).map(|(a, b, _)| (a - b).max_abs())))
    });
    rec.check("quotient.type11", "canonical curvature is of type (1,1) for Ī, J̄, K̄", 1e-5, || {
        max_of(curv.iter().map(|x| {
            let (a, _, st) = x.as_ref().map_err(Clone::clone)?;
            max_of(st.iter().map(|m| Ok(type11_residual(a, m))))
        }))
    });
    let fits: Vec<Result<_>> = [c, 2.0 * c]
        .iter()
        .map(|&cc| fit_two_centers(&gh_samples(&eh, cc, &mut r, cfg.samples.max(7))?))
        .collect();
    for (i, f) in fits.iter().enumerate() {
        rec.check(&format!("quotient.gh_fit.{i}"), "V = Σ 1/|x − a_i| on the quotient", 1e-5, || {
            f.as_ref().map(|f| f.residual).map_err(Clone::clone)
        });
    }
    rec.check("quotient.gh_fit.linear_in_c", "center separation scales linearly in c", 1e-4, || {
        let a = fits[0].as_ref().map_err(Clone::clone)?.separation();
        let b = fits[1].as_ref().map_err(Clone::clone)?.separation();
        Ok((b / a - 2.0).abs() / 2.0)
    });
    Ok(())
}

// ---------------------------------------------------------------- twistor

fn rc(r: &mut ChaCha8Rng) -> C {
    C::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// A smooth-product point with `|ζ| ≥ 0.2`.
pub fn twistor_sample(r: &mut ChaCha8Rng, n: usize) -> Result<SmoothProductCoords> {
    let z = (0..n).map(|_| rc(r)).collect();
    let w = (0..n).map(|_| rc(r)).collect();
    let mut zeta = rc(r);
    while zeta.norm() < 0.2 {
        zeta = rc(r);
    }
    SmoothProductCoords::new(z, w, zeta)
}

pub fn twistor(cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let s = cfg.scheme()?;
    let mut r = rng(cfg, 5);
    let count = cfg.samples;
    let mut pts: Vec<SmoothProductCoords> = Vec::new();
    for n in 1..=3 {
        for _ in 0..count {
            pts.push(twistor_sample(&mut r, n)?);
        }
    }
    let tangents: Vec<Vec<C>> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let m = 2 * p.dim() + 1;
            if i % 4 == 0 {
                // the ∂_ζ direction alone
                (0..m).map(|k| if k + 1 == m { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect()
            } else {
                (0..m).map(|_| rc(&mut r)).collect()
            }
        })
        .collect();
    let pair = |form: AvForm| {
        max_of(pts.iter().zip(&tangents).map(|(p, t)| connection_pair_residual(&p.to_chart_u(), t, form)))
    };
    rec.check("twistor.connection_pair", "A_V − A_U = −d(v·ξ/2ζ)", 1e-12, || pair(AvForm::Compatible));
    rec.diagnostic("twistor.connection_pair.displayed", "A_V = −(1/2ζ̃)Σṽdξ̃ against the same identity", 1e-12, || {
        pair(AvForm::Displayed)
    });
    rec.check("twistor.cocycle", "g_UV·g_VU = 1", 1e-12, || {
        max_of(pts.iter().map(|p| {
            let u = p.to_chart_u();
            Ok((transition_guv(&u)? * transition_gvu(&u.to_v()?)? - 1.0).norm())
        }))
    });
    rec.check("twistor.holomorphic", "∂̄g_UV = 0", 1e-8, || {
        max_of(pts.iter().take(10).map(|p| transition_dbar_residual(&p.to_chart_u())))
    });
    rec.exact("twistor.pole", "g_UV is singular at ζ = 0", || {
        let u = TwistorPointU::new(vec![C::new(1.0, 0.0)], vec![C::new(1.0, 0.0)], C::new(0.0, 0.0))?;
        Ok(matches!(transition_guv(&u), Err(Error::Pole(_))))
    });
    rec.check("twistor.pencil_reality", "P(−1/ζ̄) = conj P(ζ)/ζ̄²", 1e-12, || {
        max_of(pts.iter().map(|p| {
            let n = p.dim();
            let x: Vec<f64> = p.to_real()[..4 * n].iter().map(|v| v.sin()).collect();
            let y: Vec<f64> = p.to_real()[..4 * n].iter().map(|v| v.cos()).collect();
            pencil_reality_residual(n, p.zeta, &x, &y)
        }))
    });
    let low: Vec<&SmoothProductCoords> = pts.iter().filter(|p| p.dim() <= 2).take(6).collect();
    rec.check("twistor.fz.exact", "F_Z is the exterior derivative of the connection", 1e-10, || {
        max_of(low.iter().map(|p| {
            let u = p.to_chart_u();
            let num = holomorphic_exterior_derivative(&|q| mero_connection(2, q), &u)?;
            Ok((num - curvature_fz(&u)?).iter().map(|c| c.norm()).fold(0.0, f64::max))
        }))
    });
    rec.check("twistor.fz.closed", "dF_Z = 0", 1e-10, || max_of(low.iter().map(|p| fz_closedness(&p.to_chart_u()))));
    let fz: Vec<Result<_>> = low.iter().map(|p| fz_checks(2, p, cfg.nodes)).collect();
    let get = |f: &dyn Fn(&crate::twistor::FzReport) -> f64| max_of(fz.iter().map(|x| x.as_ref().map(f).map_err(Clone::clone)));
    rec.check("twistor.fz.interior", "i_V F_Z = 0", 1e-10, || get(&|x| x.interior));
    rec.check("twistor.fz.fibre", "F_Z on a fibre = (1/2iζ)(ω₂+iω₃) + ω₁ + (ζ/2i)(ω₂−iω₃)", 1e-10, || get(&|x| x.fibre));
    rec.check("twistor.fz.residue", "residue at ζ = 0 = i_V(ω₂+iω₃)/2i", 1e-10, || get(&|x| x.residue));
    rec.diagnostic("twistor.fz.fibre_factor", "fibre restriction is exactly −2i times the target", 1e-10, || {
        get(&|x| (C::new(x.fibre_ratio.0, x.fibre_ratio.1) - C::new(0.0, -2.0)).norm())
    });
    rec.diagnostic("twistor.fz.residue_factor", "residue is exactly −2 times the target", 1e-10, || {
        get(&|x| (C::new(x.residue_ratio.0, x.residue_ratio.1) + 2.0).norm())
    });
    rec.diagnostic("twistor.dzeta_residue", "residue of the dζ coefficient equals 2πi·n for n = 2", 1e-10, || {
        get(&|x| (C::new(x.dzeta_residue.0, x.dzeta_residue.1) - C::new(0.0, 4.0 * PI)).norm())
    });
    rec.exact("twistor.simple_poles", "simple poles at ζ = 0 and ζ = ∞", || {
        let u = pts[0].to_chart_u();
        Ok(pole_orders(2, &u.v, &u.xi, cfg.nodes)? == (1, 1))
    });
    rec.check("twistor.structure", "J_Z² = −Id", 1e-12, || {
        max_of(pts.iter().take(10).map(|p| {
            let j = twistor_structure(p)?;
            let d = j.nrows();
            Ok((&j * &j + nalgebra::DMatrix::<f64>::identity(d, d)).amax())
        }))
    });
    let herm: Vec<&SmoothProductCoords> = pts.iter().step_by(3).take(10).collect();
    rec.check("twistor.hermitian", "∂̄∂ log h_U = Σ(−dz∧dz̄ + dw∧dw̄)/2", 1e-6, || {
        max_of(herm.iter().map(|p| hermitian_metric_check(p, &s)))
    });
    rec.check("twistor.hermitian.zeta0", "on ζ = 0 the curvature is the flat F for weights (0,1)", 1e-6, || {
        max_of(herm.iter().map(|p| hermitian_metric_check(&SmoothProductCoords { zeta: C::new(0.0, 0.0), ..(*p).clone() }, &s)))
    });
    rec.check("twistor.reality", "log h_V − log h_U = −2 log|g_UV|", 1e-12, || max_of(pts.iter().map(reality_residual)));
    Ok(())
}

// ---------------------------------------------------------------- mckay

pub fn mckay_kinds(cfg: &RunConfig) -> Vec<DynkinKind> {
    if let Some(k) = cfg.diagram {
        return vec![k];
    }
    let mut v: Vec<DynkinKind> = (1..=9).map(DynkinKind::A).collect();
    v.extend((4..=8).map(DynkinKind::D));
    v.extend([DynkinKind::E6, DynkinKind::E7, DynkinKind::E8]);
    v
}

pub fn mckay(cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    for kind in mckay_kinds(cfg) {
        let g = DynkinGraph::extended(kind)?;
        let signs = dynkin_signs(&g);
        let solvable = !matches!(kind, DynkinKind::A(k) if k % 2 == 0);
        rec.exact(&format!("mckay.{kind}.solvable"), "sign assignment exists iff the diagram has no odd cycle", || {
            Ok(signs.clone()?.is_some() == solvable)
        });
        if let Ok(Some(c)) = &signs {
            rec.exact(&format!("mckay.{kind}.edges"), "c_ic_j = −1 on every edge", || {
                Ok(g.edges.iter().all(|&(a, b)| c[a] * c[b] == -1))
            });
        }
        rec.exact(&format!("mckay.{kind}.order"), "Σd_i² = |Γ|", || {
            Ok(g.marks.iter().map(|d| d * d).sum::<u64>() == group_order(kind))
        });
    }
    rec.exact("mckay.A1.quiver_dim", "quiver representation space of A₁ is H²", || {
        Ok(quiver_dim(&DynkinGraph::extended(DynkinKind::A(1))?) == 2)
    });
    Ok(())
}
