//! Catalog runs and convergence tables.

use std::path::PathBuf;

use patankar::linalg::dot;
use patankar::pds::{test_problem, CatalogEntry, TestProblem};
use rayon::prelude::*;

use crate::config::ExperimentArgs;
use crate::error::CliError;
use crate::output::{ensure_dir, fmt17, header, write_csv, write_metadata};
use crate::spec::SchemeSpec;

/// Time constants of the stiffest mode covered by a default convergence study.
pub const ORDER_TIME_CONSTANTS: f64 = 3.0;
pub const DEFAULT_ORDER_STEPS: usize = 160;
pub const DEFAULT_LEVELS: usize = 3;
pub const DEFAULT_RUN_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: TestProblem,
    pub scheme: SchemeSpec,
    pub dt: f64,
    pub steps: usize,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn from_args(args: &ExperimentArgs) -> Result<Self, CliError> {
        let problem = args.problem()?;
        let specs = args.scheme.specs("mprk32")?;
        if specs.len() > 1 {
            return Err(CliError::Config("`run` takes a single --scheme".into()));
        }
        let entry = test_problem::<f64>(problem);
        let dt = step_from(args.dt, args.z, &entry)?
            .ok_or_else(|| CliError::Config("either --dt or --z is required".into()))?;
        let steps = args.steps.unwrap_or(DEFAULT_RUN_STEPS);
        if steps == 0 {
            return Err(CliError::Config("--steps must be at least 1".into()));
        }
        Ok(Self { problem, scheme: specs[0].clone(), dt, steps, out: args.out_dir() })
    }
}

fn step_from(dt: Option<f64>, z: Option<f64>, entry: &CatalogEntry<f64>) -> Result<Option<f64>, CliError> {
    let dt = match (dt, z) {
        (Some(_), Some(_)) => return Err(CliError::Config("--dt and --z are mutually exclusive".into())),
        (Some(dt), None) => dt,
        (None, Some(z)) => z.abs() / entry.stiffest_eigenvalue().norm(),
        (None, None) => return Ok(None),
    };
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Config(format!("time step must be positive, got {dt}")));
    }
    Ok(Some(dt))
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub final_state: Vec<f64>,
    /// Largest relative change of each basis invariant along the run.
    pub invariant_drift: Vec<f64>,
    pub final_error: f64,
    pub files: Vec<PathBuf>,
    pub warning: Option<String>,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Runs one experiment and writes the trajectory, invariant and error CSVs
/// together with `metadata.txt`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary, CliError> {
    let scheme = cfg.scheme.build()?;
    let entry = test_problem::<f64>(cfg.problem);
    let path = scheme.integrate(&entry.pds, &entry.y0, cfg.dt, cfg.steps)?;
    ensure_dir(&cfg.out)?;
    let n = entry.y0.len();
    let times: Vec<f64> = (0..=cfg.steps).map(|k| k as f64 * cfg.dt).collect();

    let mut cols = vec!["t".to_string()];
    cols.extend((1..=n).map(|i| format!("y{i}")));
    let trajectory = write_csv(
        &cfg.out,
        "trajectory.csv",
        &cols,
        times.iter().zip(&path).map(|(t, y)| std::iter::once(fmt17(*t)).chain(y.iter().map(|v| fmt17(*v))).collect()),
    )?;

    let basis = entry.pds.invariant_basis();
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=basis.len()).map(|i| format!("invariant{i}")));
    let values: Vec<Vec<f64>> = path.iter().map(|y| basis.iter().map(|b| dot(b, y)).collect()).collect();
    let invariants = write_csv(
        &cfg.out,
        "invariants.csv",
        &cols,
        times.iter().zip(&values).map(|(t, v)| std::iter::once(fmt17(*t)).chain(v.iter().map(|x| fmt17(*x))).collect()),
    )?;
    let invariant_drift = (0..basis.len())
        .map(|i| {
            let start = values[0][i];
            let scale = start.abs().max(f64::MIN_POSITIVE);
            values.iter().map(|v| (v[i] - start).abs() / scale).fold(0.0, f64::max)
        })
        .collect();

    let errors: Vec<f64> = times.iter().zip(&path).map(|(t, y)| max_abs_diff(y, &entry.exact.eval(*t))).collect();
    let error = write_csv(
        &cfg.out,
        "error.csv",
        &header(&["t", "error_inf"]),
        times.iter().zip(&errors).map(|(t, e)| vec![fmt17(*t), fmt17(*e)]),
    )?;

    let warning = match &scheme {
        patankar::schemes::Scheme::Mpdec(c) => c.warning(),
        _ => None,
    };
    let metadata = write_metadata(
        &cfg.out,
        "patankar run",
        &[
            ("problem", cfg.problem.name().to_string()),
            ("scheme", cfg.scheme.to_string()),
            ("dt", cfg.dt.to_string()),
            ("steps", cfg.steps.to_string()),
        ],
        warning.as_slice(),
    )?;
    Ok(RunSummary {
        final_state: path.last().cloned().unwrap_or_default(),
        invariant_drift,
        final_error: *errors.last().unwrap_or(&0.0),
        files: vec![trajectory, invariants, error, metadata],
        warning,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderRow {
    pub scheme: String,
    pub dt: f64,
    pub steps: usize,
    pub error: f64,
    /// `log2(e(2 dt) / e(dt))`, absent on the coarsest level.
    pub order: Option<f64>,
}

/// Errors at a fixed final time for `steps, 2 steps, ...` and the observed
/// orders between consecutive levels.
pub fn convergence_table(
    problem: TestProblem,
    specs: &[SchemeSpec],
    final_time: f64,
    steps: usize,
    levels: usize,
) -> Result<Vec<OrderRow>, CliError> {
    if levels < 2 {
        return Err(CliError::Config("a convergence table needs at least two levels".into()));
    }
    let schemes = specs.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>()?;
    let entry = test_problem::<f64>(problem);
    let exact = entry.exact.eval(final_time);
    let jobs: Vec<(usize, usize)> = (0..schemes.len()).flat_map(|s| (0..levels).map(move |l| (s, l))).collect();
    let errors = jobs
        .par_iter()
        .map(|&(s, l)| {
            let n = steps << l;
            let path = schemes[s].integrate(&entry.pds, &entry.y0, final_time / n as f64, n)?;
            Ok(max_abs_diff(path.last().expect("non-empty path"), &exact))
        })
        .collect::<Result<Vec<f64>, patankar::Error>>()?;
    let mut rows = Vec::with_capacity(jobs.len());
    for (k, &(s, l)) in jobs.iter().enumerate() {
        let n = steps << l;
        rows.push(OrderRow {
            scheme: specs[s].to_string(),
            dt: final_time / n as f64,
            steps: n,
            error: errors[k],
            order: (l > 0).then(|| (errors[k - 1] / errors[k]).log2()),
        });
    }
    Ok(rows)
}

/// Resolves the final time and base step count of an `order` invocation.
pub fn order_setup(args: &ExperimentArgs) -> Result<(f64, usize, usize), CliError> {
    let entry = test_problem::<f64>(args.problem()?);
    let steps = args.steps.unwrap_or(DEFAULT_ORDER_STEPS);
    if steps == 0 {
        return Err(CliError::Config("--steps must be at least 1".into()));
    }
    let final_time = match step_from(args.dt, args.z, &entry)? {
        Some(dt) => dt * steps as f64,
        None => ORDER_TIME_CONSTANTS / entry.stiffest_eigenvalue().norm(),
    };
    Ok((final_time, steps, args.levels.unwrap_or(DEFAULT_LEVELS)))
}

pub fn write_order_table(dir: &std::path::Path, rows: &[OrderRow]) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    write_csv(
        dir,
        "order.csv",
        &header(&["scheme", "dt", "steps", "error_inf", "order"]),
        rows.iter().map(|r| {
            vec![
                r.scheme.clone(),
                fmt17(r.dt),
                r.steps.to_string(),
                fmt17(r.error),
                r.order.map(fmt17).unwrap_or_default(),
            ]
        }),
    )
}
