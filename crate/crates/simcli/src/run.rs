//! The time loop with its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use tumour_core::{advance, Error, SimConfig, SimState};

use crate::error::CliError;
use crate::initial::initial_state;
use crate::io::{write_config, write_csv, write_vtk, TraceRow};
use crate::post::{extract_radii, scalar_view, DEFAULT_RAYS};

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Output directory; nothing is written when `None`.
    pub out: Option<PathBuf>,
    pub n_rays: usize,
    /// A trace row is recorded every this many steps.
    pub trace_every: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { out: None, n_rays: DEFAULT_RAYS, trace_every: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: Vec<TraceRow>,
    pub state: SimState,
}

pub fn trace_row(state: &SimState, cfg: &SimConfig, n_rays: usize) -> TraceRow {
    let radii = extract_radii(&state.mesh, &state.phase, n_rays);
    TraceRow {
        t: state.time,
        r_inner: radii.inner.mean(),
        r_outer: radii.outer.mean(),
        amplitudes: radii.outer.amplitudes(),
        energy: state.energy(cfg),
    }
}

/// Number of steps of size `tau` needed to reach `t`.
pub fn steps_for(t: f64, tau: f64) -> usize {
    (t / tau - 1e-9).ceil().max(0.0) as usize
}

pub fn write_state(state: &SimState, path: &Path) -> Result<(), CliError> {
    let phi = &state.phase.phi;
    let mu = &state.phase.mu;
    let col = |v: &[[f64; 3]], i: usize| v.iter().map(|x| x[i]).collect::<Vec<_>>();
    let view = scalar_view(&state.phase);
    let (phi1, phi2, phi3) = (col(phi, 0), col(phi, 1), col(phi, 2));
    let (mu1, mu2, mu3) = (col(mu, 0), col(mu, 1), col(mu, 2));
    write_vtk(
        &state.mesh,
        &[
            ("phase", &view),
            ("phi1", &phi1),
            ("phi2", &phi2),
            ("phi3", &phi3),
            ("mu1", &mu1),
            ("mu2", &mu2),
            ("mu3", &mu3),
            ("sigma", &state.flow.sigma),
            ("p", &state.flow.p),
        ],
        path,
    )
}

/// Runs from the initial data to `cfg.t_end`.
///
/// With an output directory, writes `config.toml`, `fields_NNNNN.vtk` every
/// `cfg.output_interval` and `trace.csv` at the end. `observe` sees the state
/// after every step.
pub fn run_with(
    cfg: &SimConfig,
    opts: &RunOptions,
    mut observe: impl FnMut(&SimState),
) -> Result<RunOutcome, CliError> {
    let mut state = initial_state(cfg)?;
    if let Some(dir) = &opts.out {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        write_config(cfg, &dir.join("config.toml"))?;
    }
    let n_steps = steps_for(cfg.t_end, cfg.tau);
    let field_every = steps_for(cfg.output_interval, cfg.tau).max(1);
    let trace_every = opts.trace_every.max(1);

    let write_fields = |state: &SimState| -> Result<(), CliError> {
        match &opts.out {
            Some(dir) => write_state(state, &dir.join(format!("fields_{:05}.vtk", state.step / field_every))),
            None => Ok(()),
        }
    };
    let mut trace = vec![trace_row(&state, cfg, opts.n_rays)];
    write_fields(&state)?;
    observe(&state);
    for _ in 0..n_steps {
        if let Err(e) = advance(&mut state, cfg) {
            return Err(abort(&state, &trace, opts, e));
        }
        if state.step % trace_every == 0 || state.step == n_steps {
            trace.push(trace_row(&state, cfg, opts.n_rays));
        }
        if state.step % field_every == 0 {
            write_fields(&state)?;
        }
        observe(&state);
    }
    if let Some(dir) = &opts.out {
        write_csv(&trace, &dir.join("trace.csv"))?;
    }
    Ok(RunOutcome { trace, state })
}

pub fn run(cfg: &SimConfig, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    run_with(cfg, opts, |_| {})
}

fn abort(state: &SimState, trace: &[TraceRow], opts: &RunOptions, e: Error) -> CliError {
    let step = match &e {
        Error::Step { step, .. } => *step,
        _ => state.step + 1,
    };
    let dir = opts.out.clone().unwrap_or_else(std::env::temp_dir);
    let dump = dir.join(format!("failed_step_{step:05}.vtk"));
    if let Err(io) = write_state(state, &dump) {
        return io;
    }
    if opts.out.is_some() {
        if let Err(io) = write_csv(trace, &dir.join("trace.csv")) {
            return io;
        }
    }
    CliError::Aborted { step, dump, source: e }
}
