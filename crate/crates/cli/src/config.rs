//! Configuration: TOML file + command-line overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use nvrotor::{Frame, SystemParams};

/// Uniform grid specification.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + step * i as f64)
            .collect()
    }
}

/// Raw TOML schema; every field optional so the file can be sparse.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    frame: Option<String>,
    cutoff: Option<u32>,
    n_levels: Option<usize>,
    field: Option<GridSpec>,
    /// temperatures in millikelvin; empty or absent = ground-state only
    temperatures_mk: Option<Vec<f64>>,
    /// figure-3c style single field value, tesla
    field_tesla: Option<f64>,
    compare: Option<Vec<u32>>,
    params: Option<ParamsFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    /// zero-field splitting in GHz (ordinary frequency)
    d_zfs_ghz: Option<f64>,
    g: Option<f64>,
    mu_b: Option<f64>,
    i1: Option<f64>,
    i3: Option<f64>,
}

fn parse_frame(s: &str) -> Result<Frame> {
    match s {
        "body" => Ok(Frame::Body),
        "space" => Ok(Frame::Space),
        other => bail!("unknown frame {:?}: expected \"body\" or \"space\"", other),
    }
}

impl FromStr for FigureTag {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "3a" => FigureTag::Fig3a,
            "3b" => FigureTag::Fig3b,
            "3c" => FigureTag::Fig3c,
            "4a" => FigureTag::Fig4a,
            "4b" => FigureTag::Fig4b,
            "4c" => FigureTag::Fig4c,
            "5" => FigureTag::Fig5,
            other => bail!(
                "unknown figure tag {:?}: expected one of 3a, 3b, 3c, 4a, 4b, 4c, 5",
                other
            ),
        })
    }
}

/// Canned dataset selectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureTag {
    Fig3a,
    Fig3b,
    Fig3c,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig5,
}

impl FigureTag {
    pub fn file_name(&self) -> &'static str {
        match self {
            FigureTag::Fig3a => "fig3a.csv",
            FigureTag::Fig3b => "fig3b.csv",
            FigureTag::Fig3c => "fig3c.csv",
            FigureTag::Fig4a => "fig4a.csv",
            FigureTag::Fig4b => "fig4b.csv",
            FigureTag::Fig4c => "fig4c.csv",
            FigureTag::Fig5 => "fig5.csv",
        }
    }
}

/// Fully resolved sweep configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub frame: Frame,
    pub cutoff: u32,
    pub n_levels: usize,
    pub field_grid: Vec<f64>,
    /// kelvin; empty = ground-state only
    pub temperatures: Vec<f64>,
    pub out_dir: PathBuf,
    pub params: SystemParams,
    /// single-field value used by the figure-3c dataset
    pub field_tesla: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            frame: Frame::Body,
            cutoff: 4,
            n_levels: 20,
            field_grid: GridSpec {
                start: 0.0,
                stop: 1.0,
                points: 41,
            }
            .values(),
            temperatures: Vec::new(),
            out_dir: PathBuf::from("out"),
            params: SystemParams::default(),
            field_tesla: 0.2,
        }
    }
}

/// Fully resolved convergence-study configuration.
#[derive(Debug, Clone)]
pub struct ConvergeConfig {
    pub base: u32,
    pub compare: Vec<u32>,
    pub field_grid: Vec<f64>,
    pub out_dir: PathBuf,
    pub params: SystemParams,
    /// temperature of the negativity-vs-cutoff table, kelvin
    pub temperature: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            base: 4,
            compare: vec![5, 6, 7, 8],
            field_grid: GridSpec {
                start: 0.0,
                stop: 1.0,
                points: 21,
            }
            .values(),
            out_dir: PathBuf::from("out"),
            params: SystemParams::default(),
            temperature: 10e-3,
        }
    }
}

/// Command-line overrides applied on top of the file values.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub frame: Option<String>,
    pub cutoff: Option<u32>,
    pub n_levels: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub temperatures_mk: Option<Vec<f64>>,
    pub field_points: Option<usize>,
    pub field_max: Option<f64>,
    pub field_tesla: Option<f64>,
    pub compare: Option<Vec<u32>>,
}

fn load_file(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config file {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing config file {}", p.display()))
        }
    }
}

fn apply_params(base: SystemParams, file: &Option<ParamsFile>) -> SystemParams {
    let mut p = base;
    if let Some(f) = file {
        if let Some(d) = f.d_zfs_ghz {
            p.d_zfs = 2.0 * std::f64::consts::PI * d * 1e9;
        }
        if let Some(g) = f.g {
            p.g = g;
        }
        if let Some(m) = f.mu_b {
            p.mu_b = m;
        }
        if let Some(i1) = f.i1 {
            p.i1 = i1;
        }
        if let Some(i3) = f.i3 {
            p.i3 = i3;
        }
    }
    p
}

impl SweepConfig {
    /// File values override the defaults; command-line flags override both.
    pub fn resolve(path: Option<&Path>, over: &Overrides) -> Result<Self> {
        let file = load_file(path)?;
        let mut cfg = SweepConfig::default();
        if let Some(f) = &file.frame {
            cfg.frame = parse_frame(f)?;
        }
        if let Some(c) = file.cutoff {
            cfg.cutoff = c;
        }
        if let Some(n) = file.n_levels {
            cfg.n_levels = n;
        }
        if let Some(g) = file.field {
            cfg.field_grid = g.values();
        }
        if let Some(t) = &file.temperatures_mk {
            cfg.temperatures = t.iter().map(|mk| mk * 1e-3).collect();
        }
        if let Some(b) = file.field_tesla {
            cfg.field_tesla = b;
        }
        cfg.params = apply_params(cfg.params, &file.params);

        if let Some(f) = &over.frame {
            cfg.frame = parse_frame(f)?;
        }
        if let Some(c) = over.cutoff {
            cfg.cutoff = c;
        }
        if let Some(n) = over.n_levels {
            cfg.n_levels = n;
        }
        if let Some(o) = &over.out_dir {
            cfg.out_dir = o.clone();
        }
        if let Some(t) = &over.temperatures_mk {
            cfg.temperatures = t.iter().map(|mk| mk * 1e-3).collect();
        }
        if over.field_points.is_some() || over.field_max.is_some() {
            let spec = GridSpec {
                start: 0.0,
                stop: over.field_max.unwrap_or(1.0),
                points: over.field_points.unwrap_or(41),
            };
            cfg.field_grid = spec.values();
        }
        if let Some(b) = over.field_tesla {
            cfg.field_tesla = b;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.field_grid.is_empty() {
            bail!("field grid is empty");
        }
        if self.cutoff < 1 {
            bail!("cutoff must be at least 1 for physics runs, got {}", self.cutoff);
        }
        if self.n_levels == 0 {
            bail!("n_levels must be positive");
        }
        if self.field_grid.iter().any(|b| *b < 0.0) {
            bail!("magnetic field values must be nonnegative");
        }
        if self.temperatures.iter().any(|t| *t < 0.0) {
            bail!("temperatures must be nonnegative");
        }
        Ok(())
    }
}

impl ConvergeConfig {
    pub fn resolve(path: Option<&Path>, over: &Overrides) -> Result<Self> {
        let file = load_file(path)?;
        let mut cfg = ConvergeConfig::default();
        if let Some(c) = file.cutoff {
            cfg.base = c;
        }
        if let Some(list) = &file.compare {
            cfg.compare = list.clone();
        }
        if let Some(g) = file.field {
            cfg.field_grid = g.values();
        }
        cfg.params = apply_params(cfg.params, &file.params);
        if let Some(c) = over.cutoff {
            cfg.base = c;
        }
        if let Some(list) = &over.compare {
            cfg.compare = list.clone();
        }
        if let Some(o) = &over.out_dir {
            cfg.out_dir = o.clone();
        }
        if let Some(points) = over.field_points {
            cfg.field_grid = GridSpec {
                start: 0.0,
                stop: over.field_max.unwrap_or(1.0),
                points,
            }
            .values();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.compare.is_empty() {
            bail!("compare list is empty");
        }
        if let Some(&bad) = self.compare.iter().find(|c| **c <= self.base) {
            bail!(
                "compare cutoff {} must exceed the base cutoff {}",
                bad,
                self.base
            );
        }
        if self.field_grid.is_empty() {
            bail!("field grid is empty");
        }
        Ok(())
    }
}
