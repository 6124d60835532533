use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use irp_cli::commands::{self, SweepBox};
use irp_cli::config::{Document, EosConfig};
use irp_cli::CliResult;

#[derive(Parser)]
#[command(
    name = "irp",
    version,
    about = "1D Euler solver with an invariant-region-preserving limiter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write snapshots and diagnostics.
    Solve {
        config: PathBuf,
        /// Overrides `output.directory`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Sweep an (s, v) box and write thermodynamic stability reports.
    EosCheck {
        config: PathBuf,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
        s_range: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
        v_range: Option<Vec<f64>>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare closed-form Hessian minors of q with finite differences.
    VerifyRegion {
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        tolerance: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write the exact solution of a polytropic Riemann problem.
    RiemannExact {
        config: PathBuf,
        /// Sampling time (defaults to `solver.t_final`).
        #[arg(long)]
        time: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve { config, out_dir } => {
            let s = commands::solve(&config, out_dir.as_deref())?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            for p in &s.snapshots {
                println!("{}", p.display());
            }
            println!("{}", s.diagnostics.display());
            eprintln!("{} steps", s.steps);
        }
        Command::EosCheck {
            config,
            s_range,
            v_range,
            points,
            out_dir,
        } => {
            let mut sweep =
                SweepBox::default_for(&EosConfig::from_document(&Document::read(&config)?)?);
            if let Some(r) = s_range {
                sweep.s = (r[0], r[1]);
            }
            if let Some(r) = v_range {
                sweep.v = (r[0], r[1]);
            }
            sweep.n_s = points.max(1);
            sweep.n_v = points.max(1);
            let s = commands::eos_check(&config, Some(sweep), out_dir.as_deref())?;
            println!("{}", s.path.display());
            println!(
                "points={} admissible={} convexity_violations={} other_violations={}",
                s.points, s.admissible, s.convexity_violations, s.other_violations
            );
        }
        Command::VerifyRegion {
            config,
            samples,
            seed,
            tolerance,
            out_dir,
        } => {
            let s = commands::verify_region(&config, samples, seed, tolerance, out_dir.as_deref())?;
            println!("{}", s.path.display());
            println!(
                "samples={} failures={} unresolved={} max_rel_diff={:e}",
                s.samples, s.failures, s.unresolved, s.max_rel_diff
            );
        }
        Command::RiemannExact {
            config,
            time,
            out_dir,
        } => {
            let p = commands::riemann_exact(&config, time, out_dir.as_deref())?;
            println!("{}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!(
                "config-error: <args>: {}",
                first.trim_start_matches("error: ")
            );
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
