use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bmv_measure::io::{cmd_closed_form2, cmd_measure, cmd_random, cmd_verify, RunConfig};
use bmv_measure::{TwoByTwoInstance, C64};

#[derive(Parser)]
#[command(name = "bmv", version, about = "Representing measures of t -> Tr exp(A - tB)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the measure; writes measure.json and density.csv
    Measure {
        instance: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every check; writes report.json, exits nonzero on any failure
    Verify {
        instance: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare the 2x2 closed forms with the contour density
    #[command(name = "closed-form2")]
    ClosedForm2 {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a11: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a22: f64,
        /// Modulus of the off-diagonal entry
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a12: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b2: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a seeded random instance
    Random {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "instance.json")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Gauss–Legendre points per subinterval
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Atom exclusion radius, relative to the support width
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    #[arg(long)]
    pd_floor: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    radius_factor: f64,
    #[arg(long, default_value_t = 20)]
    max_doublings: usize,
    #[arg(long, default_value_t = 1e-10)]
    qtol: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 2.0, 5.0])]
    t_samples: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    m_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            grid: self.grid,
            delta: self.delta,
            pd_floor: self.pd_floor,
            radius_factor: self.radius_factor,
            max_doublings: self.max_doublings,
            qtol: self.qtol,
            t_samples: self.t_samples.clone(),
            m_max: self.m_max,
            seed: self.seed,
        }
    }
}

fn run(cli: Cli) -> bmv_measure::Result<ExitCode> {
    match cli.cmd {
        Cmd::Measure { instance, run } => {
            let mu = cmd_measure(&instance, &run.config(), &run.out)?;
            eprintln!("{} atoms, {} density points", mu.atoms.len(), mu.density.len());
        }
        Cmd::Verify { instance, run } => {
            let report = cmd_verify(&instance, &run.config(), &run.out)?;
            for c in &report.checks {
                eprintln!("{} {}: {:e} <= {:e}", if c.passed { "pass" } else { "FAIL" }, c.name, c.residual, c.tolerance);
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::ClosedForm2 { a11, a22, a12, b1, b2, run } => {
            let inst = TwoByTwoInstance::new(a11, a22, C64::new(a12, 0.0), b1, b2)?;
            let rows = cmd_closed_form2(&inst, &run.config(), &run.out)?;
            let worst = rows.iter().map(|r| r.max_pair_diff()).fold(0.0, f64::max);
            eprintln!("{} rows, largest pairwise difference {worst:e}", rows.len());
        }
        Cmd::Random { n, seed, out } => {
            cmd_random(n, seed, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
