//! Verification suites, run configuration, JSON reports and CSV profiles.

pub mod checks;
mod config;
mod report;

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{parse_list, RunConfig, Suite};
pub use report::{max_of, CheckRecord, Recorder, Report, Summary, SCHEMA_VERSION};

use crate::error::{Error, Result};
use crate::ghspace::{axis_profile, GhConfig};
use crate::hkquotient::{fit_two_centers, EguchiHanson};

fn run_one(suite: Suite, cfg: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let out = match suite {
        Suite::Flat => checks::flat(cfg, rec),
        Suite::Bg => checks::bg(cfg, rec),
        Suite::Gh => checks::gh(cfg, rec),
        Suite::Quotient => checks::quotient(cfg, rec),
        Suite::Twistor => checks::twistor(cfg, rec),
        Suite::Mckay => checks::mckay(cfg, rec),
        Suite::All => unreachable!("expanded by run_suite"),
    };
    match out {
        Err(e @ Error::Config(_)) => Err(e),
        Err(e) => {
            rec.check(&format!("{suite}.setup"), "suite setup", 0.0, || Err(e));
            Ok(())
        }
        Ok(()) => Ok(()),
    }
}

/// Runs the selected suite. Only configuration problems are returned as errors;
/// numerical failures become failing records.
pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let suites: Vec<Suite> = if cfg.suite == Suite::All { Suite::EACH.to_vec() } else { vec![cfg.suite] };
    let mut rec = Recorder::new(cfg.tol);
    for s in suites {
        run_one(s, cfg, &mut rec)?;
    }
    Report::new(cfg.suite.to_string(), cfg.seed, rec.finish())
}

/// Full-precision scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for r in rows {
        text.push_str(&r.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// Rows `(x₁, V, f, φ)` at `count` equally spaced axis points, skipping the centers.
pub fn gh_axis_rows(gc: &GhConfig, lo: f64, hi: f64, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .filter_map(|k| {
            let x1 = lo + (hi - lo) * k as f64 / (count.max(2) - 1) as f64;
            axis_profile(gc, x1).ok().map(|(v, f, phi)| vec![x1, v, f, phi])
        })
        .collect()
}

/// Writes the plot data for the `gh` and `quotient` suites into `dir` and returns the files written.
pub fn emit_profiles(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let want_gh = matches!(cfg.suite, Suite::Gh | Suite::All);
    let want_q = matches!(cfg.suite, Suite::Quotient | Suite::All);
    if !want_gh && !want_q {
        return Err(Error::Config("profiles need the gh or quotient suite".into()));
    }
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    if want_gh {
        let mut configs = checks::gh_configs(cfg)?;
        if cfg.centers.is_empty() {
            configs.push(GhConfig::flat());
        }
        for gc in configs {
            let name = if gc == GhConfig::flat() {
                "gh_axis_flat.csv".to_string()
            } else {
                format!("gh_axis_{}.csv", gc.centers.iter().map(|a| format!("{a}")).collect::<Vec<_>>().join("_"))
            };
            let lo = gc.centers[0] - 2.0;
            let hi = gc.centers[gc.centers.len() - 1] + 2.0;
            let path = dir.join(name);
            write_csv(&path, &["x1", "V", "f", "phi"], &gh_axis_rows(&gc, lo, hi, 4 * cfg.samples.max(50) + 1))?;
            files.push(path);
        }
    }
    if want_q {
        let eh = EguchiHanson::new();
        let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
        let samples = checks::gh_samples(&eh, cfg.c.unwrap_or(1.0), &mut r, cfg.samples.max(7))?;
        let fit = fit_two_centers(&samples)?;
        let rows: Vec<Vec<f64>> = samples
            .iter()
            .map(|(x, v)| {
                let d: Vec<f64> = fit
                    .centers
                    .iter()
                    .map(|a| ((x[0] - a[0]).powi(2) + (x[1] - a[1]).powi(2) + (x[2] - a[2]).powi(2)).sqrt())
                    .collect();
                vec![x[0], x[1], x[2], d[0], d[1], *v, 1.0 / d[0] + 1.0 / d[1]]
            })
            .collect();
        let path = dir.join("quotient_gh_scatter.csv");
        write_csv(&path, &["x1", "x2", "x3", "dist_a1", "dist_a2", "V", "V_model"], &rows)?;
        files.push(path);
    }
    Ok(files)
}
