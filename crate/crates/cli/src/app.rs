use std::io::Write;

use clap::{Parser, Subcommand};
use patankar::mpdec::NodeKind;
use patankar::pds::{test_problem, TestProblem};

use crate::config::{parse_orders, ExperimentArgs, StabilityArgs};
use crate::error::CliError;
use crate::experiment::{convergence_table, order_setup, run_experiment, write_order_table, ExperimentConfig};
use crate::figures::{
    condition_grid, mpdec_family, parse_mode, parse_window, ray_curves, thresholds, write_condition_grid,
    write_ray_csv, write_raster, write_thresholds, DEFAULT_GRID, DEFAULT_RASTER_SIDE, DEFAULT_RAY_STEP, DEFAULT_R_MAX,
};
use crate::spec::{parse_nodes, FAMILIES};

#[derive(Parser, Debug)]
#[command(name = "patankar", version, about = "Modified Patankar experiments and linear stability studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate a catalog problem and write trajectory, invariant and error CSVs.
    Run(ExperimentArgs),
    /// Observed convergence orders against the closed-form solution.
    Order(ExperimentArgs),
    /// Stability rays, rasters, thresholds and parameter condition grids.
    Stability(StabilityArgs),
    /// Show the catalog of test problems.
    ListProblems,
    /// Show the accepted scheme descriptors.
    ListSchemes,
}

/// Checks every catalog closed form against its differential equation.
pub fn self_test() -> Result<(), CliError> {
    for id in TestProblem::ALL {
        test_problem::<f64>(id).self_test()?;
    }
    Ok(())
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::Config("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(CliError::config)?;
            Ok(pool.install(f))
        }
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run(args.resolve()?, out),
        Command::Order(args) => order(args.resolve()?, out),
        Command::Stability(args) => stability(args.resolve()?, out),
        Command::ListProblems => list_problems(out),
        Command::ListSchemes => list_schemes(out),
    }
}

fn run(args: ExperimentArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = ExperimentConfig::from_args(&args)?;
    let summary = run_experiment(&cfg)?;
    if let Some(w) = &summary.warning {
        eprintln!("warning: {w}");
    }
    writeln!(out, "{} {} dt = {} steps = {}", cfg.problem, cfg.scheme, cfg.dt, cfg.steps)?;
    let state: Vec<String> = summary.final_state.iter().map(|v| format!("{v:.12e}")).collect();
    writeln!(out, "final state: {}", state.join(" "))?;
    writeln!(out, "final max-norm error: {:.3e}", summary.final_error)?;
    for (i, d) in summary.invariant_drift.iter().enumerate() {
        writeln!(out, "invariant {} max relative drift: {d:.3e}", i + 1)?;
    }
    for f in &summary.files {
        writeln!(out, "wrote {}", f.display())?;
    }
    Ok(())
}

fn order(args: ExperimentArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let problem = args.problem()?;
    let specs = args.scheme.specs("mprk32")?;
    let (final_time, steps, levels) = order_setup(&args)?;
    let rows = with_jobs(args.jobs, || convergence_table(problem, &specs, final_time, steps, levels))??;
    writeln!(out, "{problem}, final time {final_time}")?;
    writeln!(out, "{:<24} {:>12} {:>7} {:>12} {:>7}", "scheme", "dt", "steps", "error", "order")?;
    for r in &rows {
        let order = r.order.map(|o| format!("{o:.3}")).unwrap_or_else(|| "-".into());
        writeln!(out, "{:<24} {:>12.5e} {:>7} {:>12.5e} {:>7}", r.scheme, r.dt, r.steps, r.error, order)?;
    }
    let path = write_order_table(&args.out_dir(), &rows)?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn stability(args: StabilityArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mode = parse_mode(args.mode.as_deref())?;
    let dir = args.out_dir();
    let plot = args.plot.clone().unwrap_or_else(|| "ray".into()).to_ascii_lowercase();
    let orders = args.orders.as_deref().map(parse_orders).transpose()?;
    let kinds: Vec<NodeKind> = match args.scheme.nodes.as_deref() {
        Some(s) => vec![parse_nodes(s)?],
        None => vec![NodeKind::GaussLobatto, NodeKind::Equispaced],
    };
    // Named groups of schemes: one per node family for `--orders`, otherwise
    // the `--scheme` list.
    let groups = match &orders {
        Some(list) => mpdec_family(list, &kinds).into_iter().map(|(k, s)| (format!("mpdec_{k}"), s)).collect(),
        None => vec![(String::new(), args.scheme.specs("mprk32")?)],
    };
    match plot.as_str() {
        "ray" => {
            let angle = args.angle.unwrap_or(180.0).to_radians();
            let r_max = args.r_max.unwrap_or(DEFAULT_R_MAX);
            let step = args.ray_step.unwrap_or(DEFAULT_RAY_STEP);
            for (name, specs) in &groups {
                let (radii, curves) = with_jobs(args.jobs, || ray_curves(specs, mode, angle, r_max, step))??;
                for c in &curves {
                    let flag = if c.max() > 1.0 { "exceeds 1" } else { "bounded by 1" };
                    writeln!(out, "{:<24} max |R| = {:.6} ({flag})", c.label, c.max())?;
                }
                let file = if name.is_empty() { "ray.csv".to_string() } else { format!("ray_{name}.csv") };
                let path = write_ray_csv(&dir, &file, &radii, &curves)?;
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        "raster" => {
            let window = parse_window(args.window.as_deref().unwrap_or("-6,0,-3,3"))?;
            let width = args.width.unwrap_or(DEFAULT_RASTER_SIDE);
            let height = args.height.unwrap_or(DEFAULT_RASTER_SIDE);
            for spec in groups.iter().flat_map(|(_, s)| s) {
                let s = write_raster(&dir, spec, mode, window, width, height)?;
                writeln!(
                    out,
                    "{spec}: {} of {} cells stable, {} unstable cells with Re z < 0",
                    s.stable, s.cells, s.unstable_left
                )?;
                writeln!(out, "wrote {}", s.path.display())?;
                writeln!(out, "wrote {}", s.csv.display())?;
            }
        }
        "threshold" => {
            let problem = args.problem.as_deref().map(str::parse::<TestProblem>).transpose().map_err(CliError::config)?;
            let specs: Vec<_> = groups.into_iter().flat_map(|(_, s)| s).collect();
            let rows = with_jobs(args.jobs, || thresholds(&specs, mode, problem))??;
            for t in &rows {
                match (t.z_star, t.dt_bound) {
                    (Some(z), Some(dt)) => writeln!(out, "{:<24} z* = {z:.6}, dt <= {dt:.6}", t.label)?,
                    (Some(z), None) => writeln!(out, "{:<24} z* = {z:.6}", t.label)?,
                    (None, _) => writeln!(out, "{:<24} no crossing on (0, 200]", t.label)?,
                }
            }
            let path = write_thresholds(&dir, &rows)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        "conditions" => {
            let n = args.grid.unwrap_or(DEFAULT_GRID);
            let points = with_jobs(args.jobs, || condition_grid(n))??;
            let failing = points.iter().filter(|p| !p.passes).count();
            let worst = points
                .iter()
                .flat_map(|p| p.coefficients[2..7].iter().copied())
                .fold(f64::NEG_INFINITY, f64::max);
            writeln!(out, "{} grid points, {failing} violate the sign conditions, max c2..c6 = {worst:.3e}", points.len())?;
            for path in write_condition_grid(&dir, &points)? {
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown plot `{other}`, expected ray, raster, threshold or conditions"
            )))
        }
    }
    Ok(())
}

fn list_problems(out: &mut dyn Write) -> Result<(), CliError> {
    for id in TestProblem::ALL {
        let e = test_problem::<f64>(id);
        writeln!(out, "{:<14} {}", id.name(), id.description())?;
        let ys: Vec<String> = e.steady_state.vector().iter().map(|v| format!("{v:.6}")).collect();
        writeln!(out, "{:<14} steady state ({})", "", ys.join(", "))?;
        let ev: Vec<String> = e.eigenvalues.iter().map(|l| format!("{}{:+}i", l.re, l.im)).collect();
        writeln!(out, "{:<14} eigenvalues {}", "", ev.join(", "))?;
    }
    Ok(())
}

fn list_schemes(out: &mut dyn Write) -> Result<(), CliError> {
    for (name, text) in FAMILIES {
        writeln!(out, "{name:<22} {text}")?;
    }
    writeln!(out, "\nParameters left out of a descriptor come from --alpha, --beta, --gamma, --order-p and --nodes.")?;
    Ok(())
}
