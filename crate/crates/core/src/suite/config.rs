use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hkquotient::DynkinKind;
use crate::numcalc::FdScheme;

/// Which family of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Flat,
    Bg,
    Gh,
    Quotient,
    Twistor,
    Mckay,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Flat, Suite::Bg, Suite::Gh, Suite::Quotient, Suite::Twistor, Suite::Mckay];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Flat => "flat",
            Suite::Bg => "bg",
            Suite::Gh => "gh",
            Suite::Quotient => "quotient",
            Suite::Twistor => "twistor",
            Suite::Mckay => "mckay",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "flat" => Suite::Flat,
            "bg" => Suite::Bg,
            "gh" => Suite::Gh,
            "quotient" => Suite::Quotient,
            "twistor" => Suite::Twistor,
            "mckay" => Suite::Mckay,
            "all" => Suite::All,
            other => return Err(Error::Config(format!("unknown suite '{other}'"))),
        })
    }
}

/// Everything a verification run depends on. A fixed seed gives a fixed report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub suite: Suite,
    /// Overrides every per-check tolerance when set.
    pub tol: Option<f64>,
    pub h: f64,
    pub order: u8,
    pub samples: usize,
    pub seed: u64,
    /// Gibbons–Hawking centers; empty means the built-in fixtures.
    pub centers: Vec<f64>,
    /// GH constant for `gh`, moment level for `quotient`.
    pub c: Option<f64>,
    /// Quaternionic dimension of the flat model.
    pub n: usize,
    pub diagram: Option<DynkinKind>,
    /// Contour node count for twistor residues.
    pub nodes: usize,
    pub out: Option<PathBuf>,
    /// Directory for profile CSVs.
    pub profiles: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            tol: None,
            h: 1e-3,
            order: 4,
            samples: 20,
            seed: 1,
            centers: Vec::new(),
            c: None,
            n: 2,
            diagram: None,
            nodes: 64,
            out: None,
            profiles: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("bad value '{value}' for '{key}'")))
}

/// Comma-separated floats.
pub fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("bad number '{s}' in list"))))
        .collect()
}

impl RunConfig {
    /// Sets one field from its textual key, as used by both flags and config files.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "suite" => self.suite = value.parse()?,
            "tol" => self.tol = Some(parse(key, value)?),
            "h" => self.h = parse(key, value)?,
            "order" => self.order = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "centers" => {
                self.centers = parse_list(value)?;
                if self.centers.is_empty() {
                    return Err(Error::Config("empty center list".into()));
                }
            }
            "c" => self.c = Some(parse(key, value)?),
            "n" => self.n = parse(key, value)?,
            "diagram" => self.diagram = Some(value.parse()?),
            "nodes" => self.nodes = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "profiles" => self.profiles = Some(PathBuf::from(value.trim())),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            self.set(k, v).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", no + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h < 0.1) {
            return Err(Error::Config(format!("step h = {} must lie in (0, 0.1)", self.h)));
        }
        if ![2, 4].contains(&self.order) {
            return Err(Error::Config(format!("order {} must be 2 or 4", self.order)));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.nodes < 8 {
            return Err(Error::Config("nodes must be at least 8".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("tolerance {t} must be positive")));
            }
        }
        if self.c.is_some_and(|c| !c.is_finite()) || self.centers.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("c and centers must be finite".into()));
        }
        Ok(())
    }

    pub fn scheme(&self) -> Result<FdScheme> {
        FdScheme::new(self.h, self.order).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_value_text() {
        let cfg = RunConfig::from_text("# run\nsuite = gh\ncenters = 0, 1, 3\nc=0.5\nseed = 7 # trailing\n\ndiagram = D5\n").unwrap();
        assert_eq!(cfg.suite, Suite::Gh);
        assert_eq!(cfg.centers, vec![0.0, 1.0, 3.0]);
        assert_eq!(cfg.c, Some(0.5));
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.diagram, Some(DynkinKind::D(5)));
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["suite = nope", "samples = -1", "bogus = 1", "no equals sign", "order = 3", "h = 0", "diagram = D3", "nodes = 2", "centers = "] {
            assert!(matches!(RunConfig::from_text(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
    }
}
