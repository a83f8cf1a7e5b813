//! `translates`: evaluate, invert and apply the interval-maxima map of a
//! field plus translated kernels.
//!
//! Every command writes one JSON document (`--out` or stdout) holding the
//! command name, the crate version, the effective configuration, its SHA-256
//! and the result. Exit codes: 0 success, 2 invalid input, 3 no convergence.

mod problem;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use translates::applications::bojanov::bojanov_extremal;
use translates::applications::interpolation::{
    hermite_fejer_moving_nodes, lagrange_interpolate, trig_interpolate, InterpolationProblem,
};
use translates::calculus::{analytic_jacobian, fd_jacobian, sandwich_jacobian, FD_STEP};
use translates::config::KernelConfig;
use translates::gallery::{run_example, Example};
use translates::landscape::{eval_f, interval_maxima, phi, NodeSystem, DEFAULT_TOL};
use translates::solver::solve_phi;

use problem::{
    parse_example, parse_factors, parse_field, parse_kernels, parse_list, parse_weight, BojanovBlock,
    InterpolationBlock, ProblemConfig,
};

const EXIT_INVALID: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "translates",
    version,
    about = "Interval maxima of fields plus translated kernels"
)]
struct Cli {
    /// JSON problem file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a CSV table here (commands that produce one).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Seed for commands that draw random problems.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Golden-section tolerance for `eval`, `maxima` and `phi`; residual
    /// tolerance for the solving commands.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Default)]
struct ProblemArgs {
    /// Use the kernel and field of a built-in example.
    #[arg(long, value_parser = parse_example)]
    example: Option<Example>,
    /// Comma-separated kernels: log[:nu], sine[:nu[:a]], sqrt, kinked,
    /// reciprocal, or a JSON array of kernel records.
    #[arg(long)]
    kernels: Option<String>,
    /// Number of nodes; a single kernel is repeated this many times.
    #[arg(long)]
    n: Option<usize>,
    /// zero, kinked, jump, plateau, jacobi:a:b[:scale], discrete:x;x;...,
    /// or a JSON field record.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum JacobianChoice {
    /// Analytic, falling back to finite differences.
    Auto,
    Analytic,
    Fd,
    Sandwich,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InterpolationKind {
    Lagrange,
    HermiteFejer,
    Trig,
}

#[derive(Subcommand)]
enum Command {
    /// Sample F on a grid and report the interval maxima.
    #[command(alias = "sample")]
    Eval {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Node system, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Number of grid cells on [0, 1].
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Interval maxima, brackets and Φ at a node system.
    Maxima {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// Φ and its Jacobian at a node system.
    Phi {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        jacobian: JacobianChoice,
    },
    /// Solve Φ(y) = target.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        /// Starting node system.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
    },
    /// Interpolation by products of translated log-concave factors.
    Interpolate {
        #[arg(value_enum)]
        kind: InterpolationKind,
        /// Abscissae x_0 < ... < x_n (lagrange, trig).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Values alpha_0, ..., alpha_n.
        #[arg(long)]
        alpha: Option<String>,
        /// Comma-separated factors: t, t^nu, sin, sin^nu, sin(a), sin(a)^nu.
        #[arg(long)]
        factor: Option<String>,
        /// Weight of the moving-node problem: a number, jacobi:a:b[:scale]
        /// or a JSON weight record.
        #[arg(long)]
        weight: Option<String>,
        /// Number of grid cells for the `--csv` table of G.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Weighted Chebyshev polynomial with prescribed multiplicities.
    Bojanov {
        /// Multiplicities, comma-separated.
        #[arg(long)]
        nu: Option<String>,
        /// Interval a,b.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        /// A number, jacobi:a:b[:scale] or a JSON weight record, given on
        /// the interval.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Compare a built-in example with its closed form.
    Example {
        #[arg(value_parser = parse_example)]
        name: Example,
        /// Number of interior node positions in the sweep.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
    },
    /// Random round trips y -> Φ(y) -> y with log kernels and zero field.
    Roundtrip {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Largest number of nodes.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

/// A finished command: its JSON result and whether it converged.
struct Outcome {
    config: Value,
    result: Value,
    converged: bool,
}

impl Outcome {
    fn new(config: Value, result: impl Serialize, converged: bool) -> Result<Outcome> {
        Ok(Outcome {
            config,
            result: serde_json::to_value(result)?,
            converged,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => match emit(&cli, outcome) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn emit(cli: &Cli, outcome: Outcome) -> Result<ExitCode> {
    let canonical = serde_json::to_vec(&outcome.config)?;
    let envelope = json!({
        "command": command_name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
        "config_hash": hex::encode(Sha256::digest(&canonical)),
        "config": outcome.config,
        "result": outcome.result,
    });
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if outcome.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("warning: the solver did not converge");
        Ok(ExitCode::from(EXIT_NO_CONVERGENCE))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Maxima { .. } => "maxima",
        Command::Phi { .. } => "phi",
        Command::Solve { .. } => "solve",
        Command::Interpolate { .. } => "interpolate",
        Command::Bojanov { .. } => "bojanov",
        Command::Example { .. } => "example",
        Command::Roundtrip { .. } => "roundtrip",
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let mut p = ProblemConfig::load(cli.config.as_deref())?;
    if let Some(tol) = cli.tol {
        ensure!(tol > 0.0 && tol.is_finite(), "--tol must be positive");
    }
    match &cli.command {
        Command::Eval { problem, y, grid } => {
            apply_problem(&mut p, problem)?;
            set_list(&mut p.y, y)?;
            ensure!(*grid >= 1, "--grid must be at least 1");
            let tol = cli.tol.unwrap_or(DEFAULT_TOL);
            let (kernels, field, nodes) = landscape_inputs(&mut p)?;
            let samples = (0..=*grid)
                .map(|k| {
                    let t = k as f64 / *grid as f64;
                    Ok((t, eval_f(&kernels, &field, &nodes, t)?))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(path) = &cli.csv {
                let rows = samples.iter().map(|(t, f)| vec![*t, f.to_f64()]);
                write_csv(path, &["t", "F"], rows)?;
            }
            let maxima = interval_maxima(&kernels, &field, &nodes, tol)?;
            let config = json!({"problem": p, "grid": grid, "tol": tol});
            Outcome::new(config, json!({"maxima": maxima, "samples": samples}), true)
        }
        Command::Maxima { problem, y } => {
            apply_problem(&mut p, problem)?;
            set_list(&mut p.y, y)?;
            let tol = cli.tol.unwrap_or(DEFAULT_TOL);
            let (kernels, field, nodes) = landscape_inputs(&mut p)?;
            let maxima = interval_maxima(&kernels, &field, &nodes, tol)?;
            Outcome::new(json!({"problem": p, "tol": tol}), maxima, true)
        }
        Command::Phi { problem, y, jacobian } => {
            apply_problem(&mut p, problem)?;
            set_list(&mut p.y, y)?;
            let tol = cli.tol.unwrap_or(DEFAULT_TOL);
            let (kernels, field, nodes) = landscape_inputs(&mut p)?;
            let report = interval_maxima(&kernels, &field, &nodes, tol)?;
            let values = phi(&kernels, &field, &nodes, tol)?;
            let estimate = match jacobian {
                JacobianChoice::Analytic => analytic_jacobian(&kernels, &field, &nodes, &report)?,
                JacobianChoice::Fd => fd_jacobian(&kernels, &field, &nodes, FD_STEP)?,
                JacobianChoice::Sandwich => sandwich_jacobian(&kernels, &nodes, &report)?,
                JacobianChoice::Auto => match analytic_jacobian(&kernels, &field, &nodes, &report) {
                    Ok(j) => j,
                    Err(_) => fd_jacobian(&kernels, &field, &nodes, FD_STEP)?,
                },
            };
            let config = json!({"problem": p, "tol": tol, "jacobian": jacobian});
            Outcome::new(
                config,
                json!({"phi": values, "maxima": report, "jacobian": estimate}),
                true,
            )
        }
        Command::Solve { problem, target, start } => {
            apply_problem(&mut p, problem)?;
            set_list(&mut p.target, target)?;
            set_list(&mut p.start, start)?;
            if let Some(tol) = cli.tol {
                p.solver.residual_tol = tol;
            }
            p.normalize()?;
            let kernels = p.build_kernels()?;
            let field = p.build_field()?;
            let d = p.target.clone().context("no target given (--target)")?;
            let y0 = p.start.clone().map(NodeSystem::new).transpose()?;
            let report = solve_phi(&kernels, &field, &d, &p.solver, y0.as_ref())?;
            let converged = report.converged();
            Outcome::new(json!({"problem": p}), report, converged)
        }
        Command::Interpolate {
            kind,
            x,
            alpha,
            factor,
            weight,
            grid,
        } => {
            ensure!(*grid >= 1, "--grid must be at least 1");
            let block = p.interpolation.get_or_insert_with(InterpolationBlock::default);
            if let Some(x) = x {
                block.abscissae = parse_list(x)?;
            }
            if let Some(a) = alpha {
                block.values = parse_list(a)?;
            }
            if let Some(f) = factor {
                block.factors = parse_factors(f)?;
            }
            if let Some(w) = weight {
                block.weight = Some(parse_weight(w)?);
            }
            let block = block.clone();
            if let Some(tol) = cli.tol {
                p.solver.residual_tol = tol;
            }
            ensure!(!block.factors.is_empty(), "no factors given (--factor)");
            let factors = expand(&block.factors, block.values.len().saturating_sub(1));
            let result = match kind {
                InterpolationKind::HermiteFejer => {
                    let w = block.weight.clone().context("no weight given (--weight)")?;
                    hermite_fejer_moving_nodes(&factors, &w, &block.values, &p.solver)?
                }
                InterpolationKind::Lagrange | InterpolationKind::Trig => {
                    let problem = InterpolationProblem {
                        factors: factors.clone(),
                        abscissae: block.abscissae.clone(),
                        values: block.values.clone(),
                    };
                    match kind {
                        InterpolationKind::Trig => trig_interpolate(&problem, &p.solver)?,
                        _ => lagrange_interpolate(&problem, &p.solver)?,
                    }
                }
            };
            if let Some(path) = &cli.csv {
                let rows = (0..=*grid).map(|k| {
                    let t = k as f64 / *grid as f64;
                    let g = factors
                        .iter()
                        .zip(&result.nodes)
                        .map(|(f, y)| f.eval(t - y))
                        .product::<f64>();
                    vec![t, result.scale * g]
                });
                write_csv(path, &["t", "G"], rows)?;
            }
            let converged = result.converged();
            Outcome::new(json!({"problem": p, "kind": kind}), result, converged)
        }
        Command::Bojanov { nu, interval, weight } => {
            let block = p.bojanov.get_or_insert_with(BojanovBlock::default);
            if let Some(nu) = nu {
                block.nu = parse_list(nu)?;
            }
            if let Some(iv) = interval {
                let iv = parse_list(iv)?;
                ensure!(iv.len() == 2, "--interval takes two numbers a,b");
                block.interval = [iv[0], iv[1]];
            }
            if let Some(w) = weight {
                block.weight = parse_weight(w)?;
            }
            let block = block.clone();
            if let Some(tol) = cli.tol {
                p.solver.residual_tol = tol;
            }
            let [a, b] = block.interval;
            let result = bojanov_extremal(&block.nu, &block.weight, (a, b), &p.solver)?;
            let converged = result.solve.converged();
            Outcome::new(json!({"problem": p}), result, converged)
        }
        Command::Example { name, grid } => {
            ensure!(*grid >= 2, "--grid must be at least 2");
            if let Some(path) = &cli.csv {
                let rows = (1..=*grid).map(|k| {
                    let y = k as f64 / (*grid + 1) as f64;
                    let (m0, m1) = name.computed(y);
                    let (c0, c1) = name.closed_form(y);
                    let (m0, m1) = (m0.to_f64(), m1.to_f64());
                    vec![y, m0, m1, m1 - m0, c0, c1, c1 - c0]
                });
                write_csv(
                    path,
                    &["y", "m0", "m1", "phi", "m0_closed", "m1_closed", "phi_closed"],
                    rows,
                )?;
            }
            let report = run_example(*name, *grid);
            Outcome::new(json!({"example": name, "grid": grid}), report, true)
        }
        Command::Roundtrip { count, max_n } => roundtrip(cli, *count, *max_n),
    }
}

/// A single factor is repeated to match the number of values.
fn expand<T: Clone>(list: &[T], n: usize) -> Vec<T> {
    if list.len() == 1 && n > 1 {
        vec![list[0].clone(); n]
    } else {
        list.to_vec()
    }
}

fn apply_problem(p: &mut ProblemConfig, args: &ProblemArgs) -> Result<()> {
    if let Some(ex) = args.example {
        ensure!(
            args.kernels.is_none() && args.field.is_none(),
            "--example excludes --kernels and --field"
        );
        p.use_example(ex);
    }
    if let Some(k) = &args.kernels {
        p.kernels = parse_kernels(k)?;
    }
    if let Some(n) = args.n {
        p.n = Some(n);
    }
    if let Some(f) = &args.field {
        p.field = Some(parse_field(f)?);
    }
    Ok(())
}

fn set_list(slot: &mut Option<Vec<f64>>, flag: &Option<String>) -> Result<()> {
    if let Some(s) = flag {
        *slot = Some(parse_list(s)?);
    }
    Ok(())
}

type LandscapeInputs = (Vec<translates::kernels::Kernel>, translates::fields::Field, NodeSystem);

fn landscape_inputs(p: &mut ProblemConfig) -> Result<LandscapeInputs> {
    p.normalize()?;
    let kernels = p.build_kernels()?;
    let field = p.build_field()?;
    let y = p.y.clone().context("no node system given (--y)")?;
    ensure!(
        y.len() == kernels.len(),
        "{} nodes given for {} kernels",
        y.len(),
        kernels.len()
    );
    Ok((kernels, field, NodeSystem::new(y)?))
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format_cell(*x)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Shortest representation that parses back to the same value.
fn format_cell(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:?}")
    }
}

#[derive(Serialize)]
struct RoundTrip {
    nu: Vec<f64>,
    y: Vec<f64>,
    target: Vec<f64>,
    solution: Vec<f64>,
    node_error: f64,
    residual: f64,
    converged: bool,
}

fn roundtrip(cli: &Cli, count: usize, max_n: usize) -> Result<Outcome> {
    ensure!(max_n >= 1, "--max-n must be at least 1");
    ensure!(count >= 1, "--count must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut solver = translates::solver::SolveConfig::default();
    if let Some(tol) = cli.tol {
        solver.residual_tol = tol;
    }
    let field = translates::fields::make_zero_field();
    let mut trips = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.random_range(1..=max_n);
        let nu: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..3.0)).collect();
        let y = loop {
            let mut y: Vec<f64> = (0..n).map(|_| rng.random_range(0.02..0.98)).collect();
            y.sort_by(f64::total_cmp);
            if y.windows(2).all(|w| w[1] - w[0] > 1e-2) {
                break y;
            }
        };
        let configs: Vec<KernelConfig> = nu.iter().map(|&nu| KernelConfig::Log { nu }).collect();
        let kernels = translates::config::build_kernels(&configs)?;
        let target = phi(&kernels, &field, &NodeSystem::new(y.clone())?, DEFAULT_TOL)?;
        let report = solve_phi(&kernels, &field, &target, &solver, None)?;
        let node_error = y
            .iter()
            .zip(&report.y_solution)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        trips.push(RoundTrip {
            converged: report.converged(),
            residual: report.residual,
            solution: report.y_solution,
            nu,
            y,
            target,
            node_error,
        });
    }
    let converged = trips.iter().all(|t| t.converged);
    let max_node_error = trips.iter().map(|t| t.node_error).fold(0.0, f64::max);
    let config = json!({"seed": cli.seed, "count": count, "max_n": max_n, "solver": solver});
    Outcome::new(
        config,
        json!({"max_node_error": max_node_error, "all_converged": converged, "trips": trips}),
        converged,
    )
}
