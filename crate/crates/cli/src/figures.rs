//! Stability figures: rays, rasters, thresholds and condition grids.

use std::path::{Path, PathBuf};

use patankar::mpdec::NodeKind;
use patankar::pds::{test_problem, TestProblem};
use patankar::schemes::{alpha0, in_mprk43_region};
use patankar::stability::{
    check_mprk43ab_conditions, find_stability_threshold, sample_ray, stability_mprk43ab, stability_region_raster,
    time_step_bound, MpdecMode, Window,
};
use patankar::Error;
use rayon::prelude::*;

use crate::error::CliError;
use crate::output::{ensure_dir, fmt17, header, write_csv};
use crate::spec::SchemeSpec;

pub const DEFAULT_R_MAX: f64 = 60.0;
pub const DEFAULT_RAY_STEP: f64 = 1e-2;
pub const DEFAULT_RASTER_SIDE: usize = 300;
pub const DEFAULT_GRID: usize = 200;
/// Upper end of `alpha` in the unbounded part of the parameter region.
pub const CONDITION_ALPHA_MAX: f64 = 3.0;

pub fn parse_mode(s: Option<&str>) -> Result<MpdecMode, CliError> {
    match s.map(str::to_ascii_lowercase).as_deref() {
        None | Some("general") => Ok(MpdecMode::General),
        Some("reduced") => Ok(MpdecMode::Reduced),
        Some(other) => Err(CliError::Config(format!("unknown mode `{other}`, expected general or reduced"))),
    }
}

pub fn parse_window(s: &str) -> Result<Window, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("invalid window `{s}`")))?;
    if v.len() != 4 {
        return Err(CliError::Config("window needs re_min,re_max,im_min,im_max".into()));
    }
    Window::new(v[0], v[1], v[2], v[3]).map_err(CliError::config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayCurve {
    pub label: String,
    pub magnitudes: Vec<f64>,
}

impl RayCurve {
    pub fn max(&self) -> f64 {
        self.magnitudes.iter().copied().fold(0.0, f64::max)
    }
}

/// `|R(r e^{i angle})|` for every scheme on a common radius grid.
pub fn ray_curves(
    specs: &[SchemeSpec],
    mode: MpdecMode,
    angle: f64,
    r_max: f64,
    step: f64,
) -> Result<(Vec<f64>, Vec<RayCurve>), CliError> {
    let funcs = specs.iter().map(|s| s.stability(mode)).collect::<Result<Vec<_>, _>>()?;
    let sampled = funcs
        .par_iter()
        .map(|f| sample_ray(f.as_ref(), angle, r_max, step))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| match e {
            Error::InvalidParams(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        })?;
    let radii = sampled.first().map(|s| s.iter().map(|&(r, _)| r).collect()).unwrap_or_default();
    let curves = specs
        .iter()
        .zip(sampled)
        .map(|(s, pts)| RayCurve { label: s.to_string(), magnitudes: pts.into_iter().map(|(_, m)| m).collect() })
        .collect();
    Ok((radii, curves))
}

pub fn write_ray_csv(dir: &Path, name: &str, radii: &[f64], curves: &[RayCurve]) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let mut cols = vec!["r".to_string()];
    cols.extend(curves.iter().map(|c| c.label.clone()));
    write_csv(
        dir,
        name,
        &cols,
        radii
            .iter()
            .enumerate()
            .map(|(k, r)| std::iter::once(fmt17(*r)).chain(curves.iter().map(|c| fmt17(c.magnitudes[k]))).collect()),
    )
}

/// MPDeC descriptors for a list of orders, one list per node family.
pub fn mpdec_family(orders: &[usize], kinds: &[NodeKind]) -> Vec<(NodeKind, Vec<SchemeSpec>)> {
    kinds
        .iter()
        .map(|&k| (k, orders.iter().map(|&p| SchemeSpec::Mpdec { order: p, nodes: k }).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RasterSummary {
    pub path: PathBuf,
    pub csv: PathBuf,
    pub stable: usize,
    pub cells: usize,
    pub unstable_left: usize,
}

pub fn write_raster(
    dir: &Path,
    spec: &SchemeSpec,
    mode: MpdecMode,
    window: Window,
    width: usize,
    height: usize,
) -> Result<RasterSummary, CliError> {
    let f = spec.stability(mode)?;
    let raster = stability_region_raster(f.as_ref(), window, width, height).map_err(|e| match e {
        Error::InvalidParams(m) => CliError::Config(m),
        other => CliError::Numerical(other),
    })?;
    ensure_dir(dir)?;
    let path = dir.join(format!("raster_{}.pgm", spec.slug()));
    std::fs::write(&path, raster.to_pgm())?;
    let cells = (0..height).flat_map(|row| (0..width).map(move |col| (row, col)));
    let csv = write_csv(
        dir,
        &format!("raster_{}.csv", spec.slug()),
        &header(&["re", "im", "magnitude"]),
        cells.map(|(row, col)| {
            let z = raster.center(row, col);
            vec![fmt17(z.re), fmt17(z.im), fmt17(raster.magnitude(row, col))]
        }),
    )?;
    Ok(RasterSummary {
        path,
        csv,
        stable: raster.stable_count(),
        cells: width * height,
        unstable_left: raster.unstable_in_left_half_plane().len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub label: String,
    /// `None` when `|R| < 1` on the whole sampled negative axis.
    pub z_star: Option<f64>,
    pub dt_bound: Option<f64>,
}

pub fn thresholds(specs: &[SchemeSpec], mode: MpdecMode, problem: Option<TestProblem>) -> Result<Vec<Threshold>, CliError> {
    let lambda = problem.map(|p| test_problem::<f64>(p).stiffest_eigenvalue());
    specs
        .par_iter()
        .map(|s| {
            let f = s.stability(mode)?;
            let z_star = match find_stability_threshold(f.as_ref()) {
                Ok(z) => Some(z),
                Err(Error::NoCrossing { .. }) => None,
                Err(e) => return Err(CliError::Numerical(e)),
            };
            let dt_bound = z_star.zip(lambda).map(|(z, l)| time_step_bound(z, l));
            Ok(Threshold { label: s.to_string(), z_star, dt_bound })
        })
        .collect()
}

pub fn write_thresholds(dir: &Path, rows: &[Threshold]) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    write_csv(
        dir,
        "threshold.csv",
        &header(&["scheme", "z_star", "dt_bound"]),
        rows.iter().map(|t| {
            vec![t.label.clone(), t.z_star.map(fmt17).unwrap_or_default(), t.dt_bound.map(fmt17).unwrap_or_default()]
        }),
    )
}

/// One grid point of the condition study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionPoint {
    /// Sub-region 1, 2 or 3 of the admissible `(alpha, beta)` set.
    pub region: u8,
    pub alpha: f64,
    pub beta: f64,
    pub coefficients: [f64; 8],
    pub passes: bool,
}

/// `beta` range of sub-region `region` at `alpha`.
fn beta_range(region: u8, alpha: f64) -> (f64, f64) {
    match region {
        1 => (2.0 / 3.0, 3.0 * alpha * (1.0 - alpha)),
        2 => (3.0 * alpha * (1.0 - alpha), 2.0 / 3.0),
        _ => ((3.0 * alpha - 2.0) / (6.0 * alpha - 3.0), 2.0 / 3.0),
    }
}

/// Evaluates the sign conditions on an `n x n` grid in each of the three
/// sub-regions. Degenerate points are skipped.
pub fn condition_grid(n: usize) -> Result<Vec<ConditionPoint>, CliError> {
    if n < 2 {
        return Err(CliError::Config("--grid must be at least 2".into()));
    }
    let a0 = alpha0();
    let alpha_ranges = [(1, 1.0 / 3.0, 2.0 / 3.0), (2, 2.0 / 3.0, a0), (3, a0, CONDITION_ALPHA_MAX)];
    let rows: Vec<(u8, f64)> = alpha_ranges
        .iter()
        .flat_map(|&(region, lo, hi)| (0..n).map(move |i| (region, lo + (hi - lo) * i as f64 / (n - 1) as f64)))
        .collect();
    Ok(rows
        .par_iter()
        .flat_map_iter(|&(region, alpha)| {
            let (lo, hi) = beta_range(region, alpha);
            (0..n).filter_map(move |j| {
                let beta = lo + (hi - lo) * j as f64 / (n - 1) as f64;
                if !in_mprk43_region(alpha, beta) || stability_mprk43ab(alpha, beta).is_err() {
                    return None;
                }
                let r = check_mprk43ab_conditions(alpha, beta);
                Some(ConditionPoint { region, alpha, beta, coefficients: r.coefficients, passes: r.passes })
            })
        })
        .collect())
}

/// One CSV per coefficient, with the raw value and the value scaled by
/// `(beta - alpha)^2`.
pub fn write_condition_grid(dir: &Path, points: &[ConditionPoint]) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(dir)?;
    (0..8)
        .map(|j| {
            write_csv(
                dir,
                &format!("conditions_c{j}.csv"),
                &header(&["region", "alpha", "beta", "value", "scaled"]),
                points.iter().map(|p| {
                    let c = p.coefficients[j];
                    vec![
                        p.region.to_string(),
                        fmt17(p.alpha),
                        fmt17(p.beta),
                        fmt17(c),
                        fmt17(c * (p.beta - p.alpha).powi(2)),
                    ]
                }),
            )
        })
        .collect()
}

/// Samples the two sector boundary rays `arg z = 3pi/4, 5pi/4`.
pub fn sector_boundary_max(spec: &SchemeSpec, r_max: f64, step: f64) -> Result<f64, CliError> {
    let f = spec.stability(MpdecMode::General)?;
    let mut worst = 0.0f64;
    for angle in [0.75 * std::f64::consts::PI, 1.25 * std::f64::consts::PI] {
        for (_, m) in sample_ray(f.as_ref(), angle, r_max, step)? {
            worst = worst.max(m);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_lobatto_rays_stay_below_one() {
        let orders: Vec<usize> = (4..=14).collect();
        let fam = mpdec_family(&orders, &[NodeKind::GaussLobatto]);
        let (radii, curves) = ray_curves(&fam[0].1, MpdecMode::Reduced, std::f64::consts::PI, 60.0, 0.05).unwrap();
        assert_eq!(radii.len(), 1200);
        assert!(curves.iter().all(|c| c.max() <= 1.0));
    }

    #[test]
    fn condition_grid_passes() {
        let pts = condition_grid(12).unwrap();
        assert!(pts.len() > 300);
        assert!(pts.iter().all(|p| p.coefficients[2..7].iter().all(|&c| c <= 1e-12)));
        assert!(pts.iter().any(|p| p.region == 3 && p.alpha > 2.0));
    }

    #[test]
    fn modes_and_windows() {
        assert_eq!(parse_mode(None).unwrap(), MpdecMode::General);
        assert_eq!(parse_mode(Some("Reduced")).unwrap(), MpdecMode::Reduced);
        assert!(parse_mode(Some("x")).is_err());
        assert!(parse_window("-6,0,-3,3").is_ok());
        assert!(parse_window("-6,0,-3").is_err());
        assert!(parse_window("0,-6,-3,3").is_err());
    }
}
