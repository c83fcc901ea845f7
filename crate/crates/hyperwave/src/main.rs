use anyhow::Result;
use clap::{Parser, Subcommand};
use hyperwave::output::{region_body, write_artifact};
use hyperwave::persist::save_plan;
use hyperwave::{load_config, run_scenario, sweep, ScenarioResult};
use hyperwave_core::transform::{make_plan, DEFAULT_LAMBDA_MAX, DEFAULT_NODES, DEFAULT_R_MAX};
use hyperwave_core::Dimension;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hyperwave", version, about = "Shifted wave equation experiments on hyperbolic space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config.
        #[arg(long, env = "HYPWAVE_OUT_DIR")]
        out: Option<PathBuf>,
    },
    /// Run every *.json config in a directory.
    Sweep {
        dir: PathBuf,
        /// Root for per-config output directories.
        #[arg(long, env = "HYPWAVE_OUT_DIR", default_value = "hyperwave-sweep")]
        out: PathBuf,
        #[arg(long, env = "HYPWAVE_THREADS", default_value_t = 1)]
        threads: usize,
    },
    /// Write the admissible-region boundary polylines as CSV.
    Region {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=5))]
        n: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Build a plan and report its calibration.
    Calibrate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=5))]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        r_max: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        n_r: usize,
        #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
        lambda_max: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        n_lambda: usize,
        /// Also write the plan snapshot here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

fn report(res: &ScenarioResult) {
    println!("scenario {}: {}", res.config.scenario, res.status);
    for c in &res.checks {
        println!("  {}", c.line());
    }
    for n in &res.notes {
        println!("  note: {n}");
    }
    if let Some(e) = &res.error {
        println!("  error: {e}");
    }
    for a in &res.artifacts {
        println!("  wrote {}", a.display());
    }
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let res = run_scenario(&cfg);
            report(&res);
            Ok(res.passed())
        }
        Command::Sweep { dir, out, threads } => {
            let results = sweep(&dir, &out, threads.max(1))?;
            let mut all = true;
            for (path, res) in results {
                match res {
                    Ok(res) => {
                        all &= res.passed();
                        println!("{}: {}", path.display(), if res.passed() { "pass" } else { "fail" });
                        report(&res);
                    }
                    Err(e) => {
                        all = false;
                        println!("{}: error: {e:#}", path.display());
                    }
                }
            }
            Ok(all)
        }
        Command::Region { n, out, resolution } => {
            let body = region_body(Dimension::new(n)?, resolution)?;
            write_artifact(&out, "region", "none", &body)?;
            println!("wrote {}", out.display());
            Ok(true)
        }
        Command::Calibrate { n, r_max, n_r, lambda_max, n_lambda, save } => {
            let dim = Dimension::new(n)?;
            let plan = make_plan(dim, r_max, n_r, lambda_max, n_lambda)?;
            let reference = match n {
                3 => 1.0 / (2.0 * PI * PI),
                4 => 1.0 / (8.0 * PI * PI),
                _ => 1.0 / (12.0 * PI.powi(3)),
            };
            println!("{dim}: {} radial x {} spectral nodes", plan.radial().len(), plan.spectral().len());
            println!("c_norm            {:.15e}", plan.c_norm());
            println!(
                "closed form       {reference:.15e} (relative difference {:.2e})",
                plan.c_norm() / reference - 1.0
            );
            println!("roundtrip residual {:.3e}", plan.roundtrip_residual());
            println!("recalibration     {:.15}", plan.calibrate_normalization()?);
            if let Some(path) = save {
                save_plan(&plan, &path)?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}
