use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tumour_core::radial::solve_radial;
use tumour_sim::io::{apply_overrides, read_config};
use tumour_sim::{preset_runs, run, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "tumour", about = "Adaptive finite element simulations of three-phase tumour growth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a configuration file.
    Run {
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Flat key-value (TOML) configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Compute on the quarter domain.
        #[arg(long)]
        quarter: bool,
        #[arg(long)]
        t_end: Option<f64>,
        /// `key=value`, may be repeated.
        #[arg(long = "override", value_name = "KEY=VAL")]
        overrides: Vec<String>,
        /// Record a trace row every this many steps.
        #[arg(long, default_value_t = 1)]
        trace_every: usize,
    },
    /// Print the sharp-interface radial nutrient profile as CSV.
    Oracle {
        #[arg(long = "R3")]
        r3: f64,
        #[arg(long = "R2")]
        r2: f64,
        #[arg(long = "Rout")]
        r_out: f64,
        #[arg(long = "C")]
        consumption: f64,
        #[arg(long = "sigmaB")]
        sigma_b: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Run the built-in checks.
    Validate,
    /// List the presets.
    Presets,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Run { preset, config, out, quarter, t_end, overrides, trace_every } => {
            let runs = match (preset, config) {
                (Some(name), None) => preset_runs(&name)?,
                (None, Some(path)) => vec![("run".to_string(), read_config(&path)?)],
                _ => return Err(CliError::Config("give exactly one of --preset and --config".into())),
            };
            let single = runs.len() == 1;
            for (label, cfg) in runs {
                let mut cfg = apply_overrides(&cfg, &overrides)?;
                cfg.quarter |= quarter;
                if let Some(t) = t_end {
                    cfg.t_end = t;
                }
                cfg.validate()?;
                let dir = if single { out.clone() } else { out.join(&label) };
                let opts = RunOptions { out: Some(dir.clone()), trace_every, ..RunOptions::default() };
                let outcome = run(&cfg, &opts)?;
                println!(
                    "{label}: {} steps to t = {:.4}, {} vertices, output in {}",
                    outcome.state.step,
                    outcome.state.time,
                    outcome.state.mesh.num_vertices(),
                    dir.display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { r3, r2, r_out, consumption, sigma_b, points } => {
            let profile = solve_radial(r3, r2, r_out, consumption, sigma_b)?;
            println!("r,sigma");
            let n = points.max(2) - 1;
            for k in 0..=n {
                let r = r_out * k as f64 / n as f64;
                println!("{r:?},{:?}", profile.eval(r));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => {
            let checks = tumour_sim::validate::run_checks();
            for c in &checks {
                println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Presets => {
            for name in tumour_sim::PRESETS {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
