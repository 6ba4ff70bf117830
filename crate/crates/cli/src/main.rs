//! Batch driver: residual battery, single-patch and bubble simulations, and
//! convergence sweeps, all writing CSV.

mod config;
mod converge;
mod output;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use surfdiff::bubble::BubbleGeometry;
use surfdiff::calculus::Resolution;
use surfdiff::geometry::Affine;

use config::{Config, ConfigError, ConvergeCheck};
use output::{Csv, RESIDUAL_HEADER};

#[derive(Parser)]
#[command(name = "cli", version, about = "Surface calculus checks and diffusion on evolving surfaces")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (TOML); built-in defaults if absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the CSV output.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads; all cores if absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the seed in the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print what the subcommand would run and exit.
    #[arg(long, global = true)]
    list: bool,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Run the residual battery and write residuals.csv.
    Verify,
    /// Simulate one patch and write snapshot.csv and report.csv.
    Run,
    /// Simulate the double bubble and write per-patch snapshots and bubble_laws.csv.
    Bubble,
    /// Refine one residual and fit its order; writes convergence.csv.
    Converge,
}

/// Why a subcommand did not finish normally.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] surfdiff::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use surfdiff::Error as E;
        match self {
            Failure::Core(E::NonFinite { .. } | E::PairingMismatch { .. } | E::DegenerateMetric { .. }) => 1,
            _ => 2,
        }
    }
}

const PASS: u8 = 0;
const FAIL: u8 = 1;

fn bubble_geometry(cfg: &Config) -> BubbleGeometry {
    let b = &cfg.bubble;
    BubbleGeometry::new(Affine::new(b.a0, b.a1), Affine::new(b.b0, b.b1), Affine::new(b.m0, b.m1))
}

fn verify(args: &Args, cfg: &Config) -> Result<u8, Failure> {
    let v = &cfg.verify;
    v.validate()?;
    let selected: Vec<&verify::Check> = if v.checks.is_empty() {
        verify::CHECKS.iter().collect()
    } else {
        v.checks
            .iter()
            .map(|name| {
                verify::CHECKS.iter().find(|c| c.name == name).ok_or_else(|| ConfigError::Invalid {
                    field: "verify.checks".into(),
                    reason: format!("unknown check `{name}`"),
                })
            })
            .collect::<Result<_, _>>()?
    };
    if args.list {
        for c in selected {
            println!("{:<18} {}", c.name, c.about);
        }
        return Ok(PASS);
    }
    let bubble = bubble_geometry(cfg);
    bubble
        .check_at(v.time)
        .map_err(|e| ConfigError::Invalid { field: "bubble.a0, b0, m0".into(), reason: e.to_string() })?;
    let n = v.resolution;
    let ctx = verify::Ctx {
        res: Resolution::new(n, n, v.m_edge.unwrap_or(4 * n)).with_rule(v.rule.into()),
        points: v.points,
        seed: args.seed.unwrap_or(cfg.seed),
        time: v.time,
        bubble,
    };
    let reports = verify::run(&ctx, &selected, v.tolerance);
    let mut csv = Csv::create(&args.out, "residuals.csv", RESIDUAL_HEADER)?;
    output::residual_rows(&mut csv, &reports)?;
    let path = csv.finish()?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    for r in &reports {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:<36} {:>12.3e}  (tol {:.0e})", r.name, r.value, r.tolerance);
    }
    println!("{} of {} residuals pass; wrote {}", reports.len() - failed, reports.len(), path.display());
    Ok(if failed == 0 { PASS } else { FAIL })
}

fn run(args: &Args, cfg: &Config) -> Result<u8, Failure> {
    if args.list {
        println!("geometry.kind: plane disc cap hemisphere cylinder graph");
        println!("initial, density: bessel | constant(c) | gaussian(x1, x2, x3, width) | coordinate(k)");
        println!("system: diffusion heat; energy: linear power log; bc: neumann dirichlet");
        return Ok(PASS);
    }
    let s = simulate::run(&cfg.run, &args.out)?;
    print_summary(&s);
    Ok(PASS)
}

fn bubble(args: &Args, cfg: &Config) -> Result<u8, Failure> {
    if args.list {
        println!("init_A, init_B, init_S: constant(c) | gaussian(theta0, width) | indicator");
        return Ok(PASS);
    }
    let s = simulate::bubble(&cfg.bubble, &args.out)?;
    print_summary(&s);
    Ok(PASS)
}

fn print_summary(s: &simulate::RunSummary) {
    println!(
        "{} steps to t = {:.6}; relative mass drift {:.3e}; final energy-law residual {:.3e}",
        s.steps, s.t, s.mass_drift, s.final_residual
    );
    for f in &s.files {
        println!("wrote {}", f.display());
    }
}

fn converge(args: &Args, cfg: &Config) -> Result<u8, Failure> {
    if args.list {
        for (_, name, about) in ConvergeCheck::ALL {
            println!("{name:<18} {about}");
        }
        return Ok(PASS);
    }
    let c = &cfg.converge;
    let study = converge::run(c, &bubble_geometry(cfg), &args.out)?;
    println!("{:>6} {:>6} {:>12} {:>14}", "level", "n", "dt", "value");
    for (k, l) in study.levels.iter().enumerate() {
        let dt = l.dt.map(|d| format!("{d:.3e}")).unwrap_or_else(|| "-".into());
        println!("{k:>6} {:>6} {dt:>12} {:>14.6e}", l.n, l.value);
    }
    match study.order {
        Some(p) => println!("fitted order {p:.3} (minimum {})", c.min_order),
        None => println!("all values at or below {:e}; order fit skipped", c.floor),
    }
    println!("{}; wrote {}", if study.pass { "PASS" } else { "FAIL" }, study.file.display());
    Ok(if study.pass { PASS } else { FAIL })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match Config::load(args.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("config error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match args.command {
        Command::Verify => verify(&args, &cfg),
        Command::Run => run(&args, &cfg),
        Command::Bubble => bubble(&args, &cfg),
        Command::Converge => converge(&args, &cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
