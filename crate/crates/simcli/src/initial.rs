//! Diffuse initial profiles and the mesh adapted to them.

use std::f64::consts::PI;

use tumour_core::mesh::build_square_mesh;
use tumour_core::physics::Vec3;
use tumour_core::{AdaptiveMesh, InitialShape, PhaseState, Result, SimConfig, SimState};

/// Upper bound on the number of adaptation passes while building the
/// initial mesh.
const MAX_PASSES: usize = 40;

fn perturbed_radius(r: f64, delta: f64, m: u32, theta: f64) -> f64 {
    r + delta * (m as f64 * theta).cos()
}

/// Clamped sine profile: 1 inside, 0 outside, width `eps * pi`.
pub fn profile(d: f64, eps: f64) -> f64 {
    let half = 0.5 * eps * PI;
    if d <= -half {
        1.0
    } else if d >= half {
        0.0
    } else {
        0.5 - 0.5 * (d / eps).sin()
    }
}

/// Signed radial distances `r - R_i(theta)` to the two perturbed circles.
fn distances(x: [f64; 2], shape: &InitialShape) -> [f64; 2] {
    let r = x[0].hypot(x[1]);
    let theta = x[1].atan2(x[0]);
    [
        r - perturbed_radius(shape.r2, shape.delta2, shape.m2, theta),
        r - perturbed_radius(shape.r3, shape.delta3, shape.m3, theta),
    ]
}

pub fn initial_phi(x: [f64; 2], shape: &InitialShape, eps: f64) -> Vec3 {
    let [d2, d3] = distances(x, shape);
    let v2 = profile(d2, eps);
    let v3 = profile(d3, eps);
    [(1.0 - v2) * (1.0 - v3), v2 * (1.0 - v3), v3]
}

/// Nodal interpolant of the initial profile, with `mu = 0`.
pub fn initial_phase(mesh: &AdaptiveMesh, shape: &InitialShape, eps: f64) -> PhaseState {
    let phi: Vec<Vec3> = mesh.vertices().iter().map(|&x| initial_phi(x, shape, eps)).collect();
    let mu = vec![[0.0; 3]; phi.len()];
    PhaseState { phi, mu }
}

/// Flags vertices whose incident triangles may reach into an interface
/// layer of the analytic profile.
fn layer_indicator(mesh: &AdaptiveMesh, shape: &InitialShape, eps: f64) -> Vec<bool> {
    let mut reach = vec![0.0f64; mesh.num_vertices()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let d = mesh.diameter(t);
        for &v in tri {
            reach[v] = reach[v].max(d);
        }
    }
    let half = 0.5 * eps * PI;
    mesh.vertices()
        .iter()
        .zip(&reach)
        .map(|(&x, &h)| distances(x, shape).iter().any(|d| d.abs() < half + h))
        .collect()
}

/// Starts from the uniform mesh of size `h_c` and adapts to the analytic
/// profile until the mesh stops changing.
pub fn initial_mesh(cfg: &SimConfig) -> Result<AdaptiveMesh> {
    let mut mesh = build_square_mesh(cfg.half_width, cfg.h_c, cfg.quarter)?;
    if !cfg.adapt {
        return Ok(mesh);
    }
    for _ in 0..MAX_PASSES {
        let indicator = layer_indicator(&mesh, &cfg.shape, cfg.epsilon);
        let (next, map) = mesh.adapt(&indicator, cfg.h_f, cfg.h_c)?;
        if map.is_identity() {
            break;
        }
        mesh = next;
    }
    Ok(mesh)
}

/// Initial state: adapted mesh, interpolated profile, `sigma = sigma_B`, `p = 0`.
pub fn initial_state(cfg: &SimConfig) -> Result<SimState> {
    cfg.validate()?;
    let mesh = initial_mesh(cfg)?;
    let phase = initial_phase(&mesh, &cfg.shape, cfg.epsilon);
    Ok(SimState::from_phases(mesh, phase.phi, cfg))
}
