use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dirassort::generators::PowerLawSpec;
use dirassort::theory::GammaPair;
use dirassort_cli::*;

/// Degree-degree dependency measures for directed graphs.
#[derive(Parser)]
#[command(name = "dirassort", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all dependency types × measures for an edge list.
    Compute {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated subset of pearson,spearman_uniform,spearman_average,kendall.
        #[arg(long)]
        measures: Option<String>,
        /// Comma-separated subset of out_in,out_out,in_in,in_out.
        #[arg(long)]
        types: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random tie-break instances averaged per spearman_uniform cell.
        #[arg(long, default_value_t = 3)]
        rho_reps: usize,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Write a synthetic graph as an edge list.
    Generate {
        #[command(subcommand)]
        family: GenerateFamily,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Compare a graph against erased configuration model rewirings of itself.
    Randomize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        rho_reps: usize,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Numerical studies, written as CSV.
    Study {
        #[command(subcommand)]
        study: Study,
    },
}

#[derive(Args)]
struct BridgeSize {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    m: u64,
}

#[derive(Subcommand)]
enum GenerateFamily {
    Bridge(BridgeSize),
    BridgeDisconnected(BridgeSize),
    BridgeCollection {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.5)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
    },
    IidCm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma_out: f64,
        #[arg(long)]
        gamma_in: f64,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_attempts: u64,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("invalid list entry {x:?} in {s:?}"))))
        .collect()
}

#[derive(Subcommand)]
enum Study {
    /// Growth of Σ out^p in^q with n for i.i.d. power-law degrees.
    Scaling {
        /// Tail index of both degree distributions unless overridden.
        #[arg(long, default_value_t = 1.5)]
        gamma: f64,
        #[arg(long)]
        gamma_out: Option<f64>,
        #[arg(long)]
        gamma_in: Option<f64>,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
        /// Exponent pair "p,q"; repeat for several.
        #[arg(long, default_values_t = ["2,0".to_string()])]
        pq: Vec<String>,
        #[arg(long, default_value = "1000,10000,100000")]
        n_grid: String,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Measures on G(n, an) and its disconnected variant next to closed forms.
    BridgeConvergence {
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value = "10,100,1000")]
        n_grid: String,
    },
    /// In/Out Pearson's r over independent random bridge collections.
    BridgeDistribution {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.5)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        xmin: u64,
        #[arg(long, default_value_t = 100)]
        reals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Compute { input, measures, types, seed, rho_reps, format } => {
            let args = ComputeArgs { input, measures, types, seed, rho_reps, format: Format::parse(&format)? };
            cmd_compute(&args, &mut out)?;
        }
        Command::Randomize { input, reps, seed, rho_reps, format } => {
            let args = RandomizeArgs { input, reps, seed, rho_reps, format: Format::parse(&format)? };
            cmd_randomize(&args, &mut out)?;
        }
        Command::Generate { family, seed, out: path } => {
            let path = path.ok_or_else(|| CliError::Usage("--out is required".into()))?;
            let family = match family {
                GenerateFamily::Bridge(s) => Family::Bridge { k: s.k, m: s.m },
                GenerateFamily::BridgeDisconnected(s) => Family::BridgeDisconnected { k: s.k, m: s.m },
                GenerateFamily::BridgeCollection { n, a, gamma, xmin } => {
                    Family::BridgeCollection { n, a, gamma, x_min: xmin }
                }
                GenerateFamily::IidCm { n, gamma_out, gamma_in, xmin, max_attempts } => {
                    Family::IidCm { n, gamma_out, gamma_in, x_min: xmin, max_attempts }
                }
            };
            cmd_generate(&family, seed, &path, &mut std::io::stderr())?;
        }
        Command::Study { study } => match study {
            Study::Scaling { gamma, gamma_out, gamma_in, xmin, pq, n_grid, reps, seed } => {
                let gammas = GammaPair::new(gamma_out.unwrap_or(gamma), gamma_in.unwrap_or(gamma))?;
                let exponents = pq
                    .iter()
                    .map(|s| match parse_list::<f64>(s)?.as_slice() {
                        &[p, q] if p >= 0.0 && q >= 0.0 => Ok((p, q)),
                        _ => Err(CliError::Usage(format!("--pq expects two non-negative numbers, got {s:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                cmd_study_scaling(gammas, xmin, exponents, parse_list(&n_grid)?, reps, seed, &mut out)?;
            }
            Study::BridgeConvergence { a, n_grid } => {
                cmd_study_bridge_convergence(a, &parse_list(&n_grid)?, &mut out)?;
            }
            Study::BridgeDistribution { n, a, gamma, xmin, reals, seed } => {
                let spec = PowerLawSpec::new(gamma, xmin)?;
                cmd_study_bridge_distribution(n, a, spec, reals, seed, &mut out)?;
            }
        },
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        // panics are violated internal invariants; the hook already printed the message
        Err(_) => ExitCode::from(3),
    }
}
