use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::geometry::RadiusSchedule;
use crate::spectra::EigenConfig;

/// How the `c_d` constant in the tail bounds is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CdMode {
    Fixed(f64),
    /// Largest admissible value at the realised `M_n / r`.
    Feasible,
}

impl std::str::FromStr for CdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "feasible" {
            return Ok(CdMode::Feasible);
        }
        s.strip_prefix("fixed:")
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| *v > 0.0)
            .map(CdMode::Fixed)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "c_d mode `{s}`: expected fixed:<positive> or feasible"
                ))
            })
    }
}

impl std::fmt::Display for CdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CdMode::Fixed(v) => write!(f, "fixed:{v}"),
            CdMode::Feasible => write!(f, "feasible"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dims: Vec<usize>,
    /// Lattice sides; each run uses `n = side^d`.
    pub sides: Vec<usize>,
    /// `None` picks [`RadiusSchedule::default_for`] per dimension.
    pub schedule: Option<RadiusSchedule<f64>>,
    pub trials: usize,
    pub master_seed: u64,
    pub c_d_mode: CdMode,
    pub t_grid: Vec<f64>,
    pub output_path: Option<PathBuf>,
    pub eigen: EigenConfig<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dims: vec![2],
            sides: vec![16],
            schedule: None,
            trials: 10,
            master_seed: 1,
            c_d_mode: CdMode::Fixed(1.0),
            t_grid: vec![1.0],
            output_path: None,
            eigen: EigenConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn schedule_for(&self, d: usize) -> RadiusSchedule<f64> {
        self.schedule
            .unwrap_or_else(|| RadiusSchedule::default_for(d))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.sides.is_empty() {
            return Err(Error::Empty("dims or sides"));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d >= 1 << 8) {
            return Err(Error::InvalidDimension(d));
        }
        if let Some(&m) = self.sides.iter().find(|&&m| !(2..1 << 24).contains(&m)) {
            return Err(Error::Domain(format!("side {m} outside [2, 2^24)")));
        }
        if self.t_grid.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::Domain(
                "deviation parameters must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Applies flat `key=value` lines. Blank lines and `#` comments are
    /// skipped; list values are comma separated. Keys mirror the CLI flags:
    /// `dim`, `side`, `trials`, `seed`, `c`, `beta`, `t`, `cd`, `out`.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        let mut c = None;
        let mut beta = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad =
                |what: &str| Error::Parse(format!("line {}: bad {what} `{value}`", lineno + 1));
            match key {
                "dim" => self.dims = parse_list(value).map_err(|_| bad("dim"))?,
                "side" => self.sides = parse_list(value).map_err(|_| bad("side"))?,
                "trials" => self.trials = value.parse().map_err(|_| bad("trials"))?,
                "seed" => self.master_seed = value.parse().map_err(|_| bad("seed"))?,
                "c" => c = Some(value.parse::<f64>().map_err(|_| bad("c"))?),
                "beta" => beta = Some(value.parse::<f64>().map_err(|_| bad("beta"))?),
                "t" => self.t_grid = parse_list(value).map_err(|_| bad("t"))?,
                "cd" => self.c_d_mode = value.parse()?,
                "out" => self.output_path = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        self.set_schedule(c, beta)
    }

    /// Overrides the schedule scale and/or exponent. With only one given, the
    /// other keeps its current value (or the `d = 2` default).
    pub fn set_schedule(&mut self, c: Option<f64>, beta: Option<f64>) -> Result<()> {
        if c.is_none() && beta.is_none() {
            return Ok(());
        }
        let base = self
            .schedule
            .unwrap_or_else(|| RadiusSchedule::default_for(2));
        self.schedule = Some(RadiusSchedule::new(
            c.unwrap_or(base.c),
            beta.unwrap_or(base.beta),
        )?);
        Ok(())
    }

    /// `key=value` pairs echoed into output metadata.
    pub fn echo(&self) -> Vec<(String, String)> {
        let join = |v: &[usize]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let schedule = match self.schedule {
            Some(s) => format!("c={},beta={}", s.c, s.beta),
            None => "default".to_string(),
        };
        vec![
            ("dim".into(), join(&self.dims)),
            ("side".into(), join(&self.sides)),
            ("trials".into(), self.trials.to_string()),
            ("seed".into(), self.master_seed.to_string()),
            ("schedule".into(), schedule),
            ("cd".into(), self.c_d_mode.to_string()),
            (
                "t".into(),
                self.t_grid
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ]
    }
}

pub(crate) fn parse_list<T: std::str::FromStr>(value: &str) -> std::result::Result<Vec<T>, T::Err> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}
