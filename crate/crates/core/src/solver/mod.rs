//! Time stepping: the phase-field variational inequality by projected block
//! Gauss-Seidel, then the nutrient, then the pressure.

mod local;

use crate::config::{NutrientMode, SimConfig};
use crate::error::{Error, Result};
use crate::fem::{self, solve_cg, P1Space};
use crate::mesh::AdaptiveMesh;
use crate::physics::{self, PsiSplit, Vec3};

use local::{FaceInverse, NodalProblem};

/// Relative residual required from every linear solve.
pub const LINEAR_TOL: f64 = 1e-10;

/// Threshold of the interface indicator.
pub const INDICATOR_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub phi: Vec<Vec3>,
    pub mu: Vec<Vec3>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub sigma: Vec<f64>,
    pub p: Vec<f64>,
}

/// Convergence record of one projected Gauss-Seidel solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgsReport {
    pub sweeps: usize,
    /// Largest nodal change of `(phi, mu)` in the last sweep. A change of
    /// `mu_i` at vertex `j` is weighted by `min(1, tau C_ii / m_j)` with
    /// `C_ii` the diagonal mobility stiffness, i.e. by how far it can move
    /// `phi_i` within one step.
    pub update_norm: f64,
    /// `max |min(phi_i, r_i / m_j)|` over all nodes and components.
    pub complementarity: f64,
    pub converged: bool,
}

/// Flags vertices where some phase lies strictly inside `(d, 1 - d)`.
pub fn interface_indicator(phi: &[Vec3]) -> Vec<bool> {
    phi.iter()
        .map(|x| x.iter().any(|&v| v > INDICATOR_DELTA && v < 1.0 - INDICATOR_DELTA))
        .collect()
}

/// Solves the coupled phase / chemical potential system of one time step.
pub fn ch_step(space: &P1Space, prev: &PhaseState, flow_prev: &FlowState, cfg: &SimConfig) -> Result<(PhaseState, PgsReport)> {
    ch_step_with(space, prev, flow_prev, cfg, cfg.tau, None)
}

fn ch_step_with(
    space: &P1Space,
    prev: &PhaseState,
    flow_prev: &FlowState,
    cfg: &SimConfig,
    tau: f64,
    guess: Option<&PhaseState>,
) -> Result<(PhaseState, PgsReport)> {
    let n = space.num_vertices();
    check_len("phase state", prev.phi.len(), n)?;
    check_len("chemical potential", prev.mu.len(), n)?;
    check_len("nutrient", flow_prev.sigma.len(), n)?;
    check_len("pressure", flow_prev.p.len(), n)?;

    let mob = fem::mobility_stiffness(space, &prev.phi, cfg.delta_c);
    let lap = fem::stiffness(space);
    let mass = space.mass();
    let sources = cfg.sources();
    let conv = fem::convection_rhs(space, &prev.phi, &prev.mu, &flow_prev.p, &flow_prev.sigma, cfg.k, cfg.chi_phi);
    let be = cfg.beta * cfg.epsilon;
    let b_over_e = cfg.beta / cfg.epsilon;

    let mut f0 = Vec::with_capacity(n);
    let mut g0 = Vec::with_capacity(n);
    for j in 0..n {
        let m = mass[j];
        let old = prev.phi[j];
        let u = sources.eval_hat(old, flow_prev.sigma[j], cfg.k);
        let total = u[0] + u[1] + u[2];
        f0.push([0, 1, 2].map(|i| m / tau * old[i] + m * (u[i] - total * old[i]) + conv[j][i]));
        let wp = PsiSplit::apply(&PsiSplit::W_PLUS, old);
        let nn = physics::nutrient_coupling(flow_prev.sigma[j], cfg.chi_phi);
        g0.push([0, 1, 2].map(|i| m * b_over_e * wp[i] - m * nn[i]));
    }

    let start = guess.filter(|g| g.phi.len() == n && g.mu.len() == n).unwrap_or(prev);
    let mut phi = start.phi.clone();
    let mut mu = start.mu.clone();
    let mut active: Vec<u8> = phi
        .iter()
        .map(|x| (0..3).filter(|&i| x[i] <= 0.0).fold(0u8, |s, i| s | 1 << i).min(6))
        .collect();
    let pattern = space.pattern().clone();
    let diag: Vec<usize> = (0..n).map(|j| pattern.find(j, j).expect("diagonal")).collect();
    let local_tol = 1e-13;
    let mut cache: Vec<Option<FaceInverse>> = vec![None; n];

    let mut report = PgsReport { sweeps: 0, update_norm: f64::INFINITY, complementarity: f64::INFINITY, converged: false };
    while report.sweeps < cfg.max_sweeps {
        let mut change: f64 = 0.0;
        for j in 0..n {
            let m = mass[j];
            let mut f = f0[j];
            let mut g = g0[j];
            for k in pattern.row(j) {
                let col = pattern.col[k];
                if col == j {
                    continue;
                }
                let b = &mob.val[k];
                let mk = mu[col];
                let pk = phi[col];
                let a = be * lap.val[k];
                for i in 0..3 {
                    f[i] -= b[i][0] * mk[0] + b[i][1] * mk[1] + b[i][2] * mk[2];
                    g[i] -= a * pk[i];
                }
            }
            let problem = NodalProblem {
                m,
                m_over_tau: m / tau,
                mjj: mob.val[diag[j]],
                a: be * lap.val[diag[j]],
                c: 2.0 / 3.0 * b_over_e * m,
                f,
                g,
            };
            let s = problem.solve_cached(&mut cache[j], active[j], local_tol);
            for i in 0..3 {
                let w = (tau * problem.mjj[i][i] / m).min(1.0);
                change = change.max((s.phi[i] - phi[j][i]).abs()).max(w * (s.mu[i] - mu[j][i]).abs());
            }
            phi[j] = s.phi;
            mu[j] = s.mu;
            active[j] = s.active;
        }
        report.sweeps += 1;
        report.update_norm = change;
        if change <= cfg.tol_pgs {
            report.complementarity = complementarity(space, &lap, &phi, &mu, &g0, be, b_over_e);
            if report.complementarity <= cfg.tol_pgs {
                report.converged = true;
                break;
            }
        }
    }
    if !report.converged {
        if !report.complementarity.is_finite() {
            report.complementarity = complementarity(space, &lap, &phi, &mu, &g0, be, b_over_e);
        }
        return Err(Error::PgsNotConverged(report));
    }
    Ok((PhaseState { phi, mu }, report))
}

/// `max |min(phi_i, r_i / m_j)|` with `r` the residual of the inequality.
fn complementarity(
    space: &P1Space,
    lap: &fem::CsrMatrix,
    phi: &[Vec3],
    mu: &[Vec3],
    g0: &[Vec3],
    be: f64,
    b_over_e: f64,
) -> f64 {
    let pattern = space.pattern();
    let mass = space.mass();
    let mut worst: f64 = 0.0;
    for j in 0..phi.len() {
        let m = mass[j];
        let mut lp = [0.0; 3];
        for k in pattern.row(j) {
            let pk = phi[pattern.col[k]];
            for i in 0..3 {
                lp[i] += be * lap.val[k] * pk[i];
            }
        }
        let s = phi[j][0] + phi[j][1] + phi[j][2];
        for i in 0..3 {
            let r = lp[i] + 2.0 / 3.0 * b_over_e * m * s - m * mu[j][i] - g0[j][i];
            worst = worst.max(phi[j][i].min(r / m).abs());
        }
    }
    worst
}

/// `D (grad s, grad chi) + C (clamp(phi_2) s, chi)_h = lambda (grad phi_2, grad chi)`
/// with `s = sigma_B` on the outer boundary.
pub fn nutrient_step_quasistatic(space: &P1Space, phi: &[Vec3], sigma_guess: &[f64], cfg: &SimConfig) -> Result<Vec<f64>> {
    let n = space.num_vertices();
    check_len("phase state", phi.len(), n)?;
    let lap = fem::stiffness(space);
    let mut a = lap.scaled(cfg.d);
    let reaction: Vec<f64> = (0..n).map(|v| cfg.consumption * space.mass()[v] * phi[v][1].clamp(0.0, 1.0)).collect();
    a.add_diagonal(&reaction);
    let phi2: Vec<f64> = phi.iter().map(|x| x[1]).collect();
    let mut rhs: Vec<f64> = lap.mul_vec(&phi2).iter().map(|v| cfg.lambda * v).collect();
    fem::apply_dirichlet(&mut a, &mut rhs, space.boundary_flags(), cfg.sigma_b);
    let mut sigma = initial_guess(sigma_guess, n, cfg.sigma_b);
    solve_cg(&a, &rhs, &mut sigma, LINEAR_TOL)?;
    pin_dirichlet(space, &mut sigma, cfg.sigma_b);
    Ok(sigma)
}

/// One implicit step of the transient nutrient equation with explicit
/// transport and volume-change terms.
pub fn nutrient_step_transient(
    space: &P1Space,
    prev: &PhaseState,
    phi: &PhaseState,
    flow_prev: &FlowState,
    cfg: &SimConfig,
) -> Result<Vec<f64>> {
    nutrient_transient_with(space, prev, phi, flow_prev, cfg, cfg.tau)
}

fn nutrient_transient_with(
    space: &P1Space,
    prev: &PhaseState,
    next: &PhaseState,
    flow_prev: &FlowState,
    cfg: &SimConfig,
    tau: f64,
) -> Result<Vec<f64>> {
    let n = space.num_vertices();
    check_len("phase state", next.phi.len(), n)?;
    let mass = space.mass();
    let lap = fem::stiffness(space);
    let mut a = lap.scaled(cfg.d);
    let diag: Vec<f64> = (0..n)
        .map(|v| mass[v] / tau + cfg.consumption * mass[v] * next.phi[v][1].clamp(0.0, 1.0))
        .collect();
    a.add_diagonal(&diag);

    let w = fem::effective_potential(&next.mu, &flow_prev.sigma, cfg.chi_phi);
    let transport = fem::scalar_convection_rhs(space, &flow_prev.sigma, &next.phi, &w, &flow_prev.p, cfg.k);
    let phi2: Vec<f64> = next.phi.iter().map(|x| x[1]).collect();
    let chemotaxis = lap.mul_vec(&phi2);
    let sources = cfg.sources();
    let mut rhs: Vec<f64> = (0..n)
        .map(|v| {
            let s_old = flow_prev.sigma[v];
            let u = sources.eval_hat(prev.phi[v], s_old, cfg.k);
            mass[v] / tau * s_old + transport[v] - mass[v] * (u[0] + u[1] + u[2]) * s_old + cfg.lambda * chemotaxis[v]
        })
        .collect();
    fem::apply_dirichlet(&mut a, &mut rhs, space.boundary_flags(), cfg.sigma_b);
    let mut sigma = initial_guess(&flow_prev.sigma, n, cfg.sigma_b);
    solve_cg(&a, &rhs, &mut sigma, LINEAR_TOL)?;
    pin_dirichlet(space, &mut sigma, cfg.sigma_b);
    Ok(sigma)
}

/// `(grad p, grad chi) = ((grad phi)^T (mu - N_phi(sigma)), grad chi)_h
/// + K^-1 (1.U_hat, chi)_h` with `p = 0` on the outer boundary.
pub fn pressure_step(space: &P1Space, state: &PhaseState, sigma: &[f64], p_guess: &[f64], cfg: &SimConfig) -> Result<Vec<f64>> {
    if !(cfg.k > 0.0) {
        return Err(Error::Contract("the pressure is only defined for K > 0".into()));
    }
    let n = space.num_vertices();
    check_len("nutrient", sigma.len(), n)?;
    let w = fem::effective_potential(&state.mu, sigma, cfg.chi_phi);
    let mut rhs = fem::gradient_load(space, &state.phi, &w);
    let sources = cfg.sources();
    for v in 0..n {
        let u = sources.eval_hat(state.phi[v], sigma[v], cfg.k);
        rhs[v] += space.mass()[v] * (u[0] + u[1] + u[2]) / cfg.k;
    }
    let mut a = fem::stiffness(space);
    fem::apply_dirichlet(&mut a, &mut rhs, space.boundary_flags(), 0.0);
    let mut p = initial_guess(p_guess, n, 0.0);
    solve_cg(&a, &rhs, &mut p, LINEAR_TOL)?;
    pin_dirichlet(space, &mut p, 0.0);
    Ok(p)
}

fn initial_guess(guess: &[f64], n: usize, fallback: f64) -> Vec<f64> {
    if guess.len() == n {
        guess.to_vec()
    } else {
        vec![fallback; n]
    }
}

fn pin_dirichlet(space: &P1Space, u: &mut [f64], value: f64) {
    for (v, f) in space.boundary_flags().iter().enumerate() {
        if f.is_dirichlet() {
            u[v] = value;
        }
    }
}

fn check_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::InvalidArgument(format!("{what} has {got} values for {expected} vertices")));
    }
    Ok(())
}

/// A complete simulation state on one mesh.
#[derive(Debug, Clone)]
pub struct SimState {
    pub mesh: AdaptiveMesh,
    pub space: P1Space,
    pub phase: PhaseState,
    pub flow: FlowState,
    pub time: f64,
    pub step: usize,
    /// Gauss-Seidel record of the most recent step.
    pub last_report: Option<PgsReport>,
    /// Phase state one step back with the step size that led from it to
    /// `phase`, used to extrapolate the starting iterate.
    pub previous: Option<(PhaseState, f64)>,
}

impl SimState {
    pub fn new(mesh: AdaptiveMesh, phase: PhaseState, flow: FlowState) -> Self {
        let space = P1Space::new(&mesh);
        SimState { mesh, space, phase, flow, time: 0.0, step: 0, last_report: None, previous: None }
    }

    /// Initial state with `mu = 0`, `sigma = sigma_B` and `p = 0`.
    pub fn from_phases(mesh: AdaptiveMesh, phi: Vec<Vec3>, cfg: &SimConfig) -> Self {
        let n = phi.len();
        let phase = PhaseState { phi, mu: vec![[0.0; 3]; n] };
        let flow = FlowState { sigma: vec![cfg.sigma_b; n], p: vec![0.0; n] };
        SimState::new(mesh, phase, flow)
    }

    pub fn energy(&self, cfg: &SimConfig) -> f64 {
        physics::discrete_energy(&self.space, &self.phase.phi, &self.flow.sigma, &cfg.energy_params())
    }
}

/// Adapts the mesh to the current interfaces and carries every field over.
pub fn adapt_state(state: &mut SimState, cfg: &SimConfig) -> Result<()> {
    let indicator = interface_indicator(&state.phase.phi);
    let (mesh, map) = state.mesh.adapt(&indicator, cfg.h_f, cfg.h_c)?;
    if map.is_identity() {
        return Ok(());
    }
    state.phase.phi = map.transfer_vec3(&state.phase.phi);
    state.phase.mu = map.transfer_vec3(&state.phase.mu);
    if let Some((old, _)) = &mut state.previous {
        old.phi = map.transfer_vec3(&old.phi);
        old.mu = map.transfer_vec3(&old.mu);
    }
    state.flow.sigma = map.transfer(&state.flow.sigma);
    state.flow.p = map.transfer(&state.flow.p);
    state.mesh = mesh;
    state.space = P1Space::new(&state.mesh);
    pin_dirichlet(&state.space, &mut state.flow.sigma, cfg.sigma_b);
    pin_dirichlet(&state.space, &mut state.flow.p, 0.0);
    Ok(())
}

/// Linear extrapolation of the phase state to one step of size `tau` ahead.
fn extrapolate(state: &SimState, tau: f64) -> Option<PhaseState> {
    let (old, last_tau) = state.previous.as_ref()?;
    let s = tau / last_tau;
    let line = |a: &[Vec3], b: &[Vec3]| -> Vec<Vec3> {
        a.iter().zip(b).map(|(x, y)| [0, 1, 2].map(|i| x[i] + s * (x[i] - y[i]))).collect()
    };
    Some(PhaseState { phi: line(&state.phase.phi, &old.phi), mu: line(&state.phase.mu, &old.mu) })
}

fn substep(state: &mut SimState, cfg: &SimConfig, tau: f64) -> Result<PgsReport> {
    let guess = extrapolate(state, tau);
    let (next, report) = ch_step_with(&state.space, &state.phase, &state.flow, cfg, tau, guess.as_ref())?;
    let sigma = match cfg.nutrient {
        NutrientMode::QuasiStatic => nutrient_step_quasistatic(&state.space, &next.phi, &state.flow.sigma, cfg)?,
        NutrientMode::Transient => nutrient_transient_with(&state.space, &state.phase, &next, &state.flow, cfg, tau)?,
    };
    let p = if cfg.k > 0.0 {
        pressure_step(&state.space, &next, &sigma, &state.flow.p, cfg)?
    } else {
        vec![0.0; sigma.len()]
    };
    state.previous = Some((std::mem::replace(&mut state.phase, next), tau));
    state.flow = FlowState { sigma, p };
    state.time += tau;
    Ok(report)
}

/// One full time step: adapt, transfer, phase solve, nutrient, pressure.
///
/// When the Gauss-Seidel iteration fails, the step is retried once as two
/// steps of half the size before giving up.
pub fn advance(state: &mut SimState, cfg: &SimConfig) -> Result<()> {
    let step = state.step + 1;
    let wrap = |e: Error| Error::Step { step, source: Box::new(e) };
    if cfg.adapt {
        adapt_state(state, cfg).map_err(wrap)?;
    }
    let saved = (state.phase.clone(), state.flow.clone(), state.time, state.previous.clone());
    let report = match substep(state, cfg, cfg.tau) {
        Ok(r) => r,
        Err(Error::PgsNotConverged(_)) => {
            (state.phase, state.flow, state.time, state.previous) = saved;
            substep(state, cfg, 0.5 * cfg.tau).map_err(wrap)?;
            substep(state, cfg, 0.5 * cfg.tau).map_err(wrap)?
        }
        Err(e) => return Err(wrap(e)),
    };
    state.step = step;
    state.last_report = Some(report);
    Ok(())
}
