//! Command-line arguments and flat `key = value` configuration files.
//!
//! Every long flag can also be given in a file passed with `--config`; flags on
//! the command line take precedence. Blank lines and lines starting with `#`
//! are ignored, and keys may use `-` or `_`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use patankar::pds::TestProblem;

use crate::error::CliError;
use crate::spec::{parse_nodes, parse_number, ParamDefaults, SchemeSpec};

pub fn read_key_values(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{}:{}: expected `key = value`", path.display(), n + 1)))?;
        out.push((k.trim().replace('_', "-").to_ascii_lowercase(), v.trim().to_string()));
    }
    Ok(out)
}

fn set_if_none<T>(slot: &mut Option<T>, value: &str, parse: impl Fn(&str) -> Result<T, CliError>) -> Result<(), CliError> {
    if slot.is_none() {
        *slot = Some(parse(value)?);
    }
    Ok(())
}

fn int(s: &str) -> Result<usize, CliError> {
    s.parse().map_err(|_| CliError::Config(format!("invalid integer `{s}`")))
}

fn path(s: &str) -> Result<PathBuf, CliError> {
    Ok(PathBuf::from(s))
}

fn text(s: &str) -> Result<String, CliError> {
    Ok(s.to_string())
}

/// Flags shared by the subcommands that build schemes.
#[derive(Args, Debug, Clone, Default)]
pub struct SchemeArgs {
    /// Scheme descriptor; repeat for several schemes where supported.
    #[arg(long)]
    pub scheme: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Order of MPDeC schemes.
    #[arg(long = "order-p")]
    pub order_p: Option<usize>,
    /// MPDeC node family: equi or gl.
    #[arg(long)]
    pub nodes: Option<String>,
}

impl SchemeArgs {
    fn apply(&mut self, key: &str, value: &str) -> Result<bool, CliError> {
        match key {
            "scheme" => {
                if self.scheme.is_empty() {
                    self.scheme = value.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                }
            }
            "alpha" => set_if_none(&mut self.alpha, value, text)?,
            "beta" => set_if_none(&mut self.beta, value, text)?,
            "gamma" => set_if_none(&mut self.gamma, value, text)?,
            "order-p" => set_if_none(&mut self.order_p, value, int)?,
            "nodes" => set_if_none(&mut self.nodes, value, text)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn defaults(&self) -> Result<ParamDefaults, CliError> {
        let num = |s: &Option<String>| s.as_deref().map(parse_number).transpose();
        Ok(ParamDefaults {
            alpha: num(&self.alpha)?,
            beta: num(&self.beta)?,
            gamma: num(&self.gamma)?,
            order: self.order_p,
            nodes: self.nodes.as_deref().map(parse_nodes).transpose()?,
        })
    }

    /// Parsed descriptors, or `fallback` when none was given.
    pub fn specs(&self, fallback: &str) -> Result<Vec<SchemeSpec>, CliError> {
        let defaults = self.defaults()?;
        if self.scheme.is_empty() {
            return Ok(vec![SchemeSpec::parse(fallback, &defaults)?]);
        }
        self.scheme.iter().map(|s| SchemeSpec::parse(s, &defaults)).collect()
    }
}

/// Flags of `run` and `order`.
#[derive(Args, Debug, Clone, Default)]
pub struct ExperimentArgs {
    /// Catalog problem id, see `list-problems`.
    #[arg(long)]
    pub problem: Option<String>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Sets the step so that `dt * lambda = z` for the stiffest eigenvalue.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of step halvings for `order`.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for independent runs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl ExperimentArgs {
    /// Fills unset flags from the `--config` file, if any.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        if let Some(file) = self.config.clone() {
            for (k, v) in read_key_values(&file)? {
                if self.scheme.apply(&k, &v)? {
                    continue;
                }
                match k.as_str() {
                    "problem" => set_if_none(&mut self.problem, &v, text)?,
                    "dt" => set_if_none(&mut self.dt, &v, parse_number)?,
                    "z" => set_if_none(&mut self.z, &v, parse_number)?,
                    "steps" => set_if_none(&mut self.steps, &v, int)?,
                    "levels" => set_if_none(&mut self.levels, &v, int)?,
                    "out" => set_if_none(&mut self.out, &v, path)?,
                    "jobs" => set_if_none(&mut self.jobs, &v, int)?,
                    _ => return Err(CliError::Config(format!("unknown key `{k}` in {}", file.display()))),
                }
            }
        }
        Ok(self)
    }

    pub fn problem(&self) -> Result<TestProblem, CliError> {
        let id = self.problem.as_deref().ok_or_else(|| CliError::Config("--problem is required".into()))?;
        id.parse().map_err(CliError::config)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

/// Flags of `stability`.
#[derive(Args, Debug, Clone, Default)]
pub struct StabilityArgs {
    /// What to compute: ray, raster, threshold or conditions.
    #[arg(long)]
    pub plot: Option<String>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// MPDeC orders for ray plots, e.g. `4-14` or `4,8,12`.
    #[arg(long)]
    pub orders: Option<String>,
    /// MPDeC stability mode: general or reduced.
    #[arg(long)]
    pub mode: Option<String>,
    /// Direction of the ray in degrees, 180 being the negative real axis.
    #[arg(long)]
    pub angle: Option<f64>,
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    #[arg(long = "ray-step")]
    pub ray_step: Option<f64>,
    /// Raster window `re_min,re_max,im_min,im_max`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Points per axis of the condition grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Problem whose stiffest eigenvalue converts a threshold into a step bound.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl StabilityArgs {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        if let Some(file) = self.config.clone() {
            for (k, v) in read_key_values(&file)? {
                if self.scheme.apply(&k, &v)? {
                    continue;
                }
                match k.as_str() {
                    "plot" => set_if_none(&mut self.plot, &v, text)?,
                    "orders" => set_if_none(&mut self.orders, &v, text)?,
                    "mode" => set_if_none(&mut self.mode, &v, text)?,
                    "angle" => set_if_none(&mut self.angle, &v, parse_number)?,
                    "r-max" => set_if_none(&mut self.r_max, &v, parse_number)?,
                    "ray-step" => set_if_none(&mut self.ray_step, &v, parse_number)?,
                    "window" => set_if_none(&mut self.window, &v, text)?,
                    "width" => set_if_none(&mut self.width, &v, int)?,
                    "height" => set_if_none(&mut self.height, &v, int)?,
                    "grid" => set_if_none(&mut self.grid, &v, int)?,
                    "problem" => set_if_none(&mut self.problem, &v, text)?,
                    "out" => set_if_none(&mut self.out, &v, path)?,
                    "jobs" => set_if_none(&mut self.jobs, &v, int)?,
                    _ => return Err(CliError::Config(format!("unknown key `{k}` in {}", file.display()))),
                }
            }
        }
        Ok(self)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

/// Parses `4-14`, `4..14` or `4,8,12`.
pub fn parse_orders(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Config(format!("invalid order list `{s}`"));
    let range = s.split_once("..").or_else(|| s.split_once('-'));
    if let Some((a, b)) = range {
        let (a, b) = (int(a.trim()).map_err(|_| bad())?, int(b.trim()).map_err(|_| bad())?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| int(t.trim()).map_err(|_| bad())).collect()
}
