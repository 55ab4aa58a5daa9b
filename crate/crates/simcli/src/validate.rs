//! Quick self checks run by `tumour validate`.

use tumour_core::physics::{mobility, Mat3, DELTA_C};
use tumour_core::radial::solve_radial;
use tumour_core::{advance, SimConfig};

use crate::initial::initial_state;
use crate::io::{read_vtk, write_vtk};
use crate::post::extract_radii;
use crate::presets::PERT_G;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Smallest eigenvalue of a symmetric 3x3 matrix by cyclic Jacobi rotations.
pub fn min_eigenvalue(a: &Mat3) -> f64 {
    let mut a = *a;
    for _ in 0..50 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        if off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
        }
    }
    a[0][0].min(a[1][1]).min(a[2][2])
}

fn mobility_check() -> Check {
    let n = 40;
    let (mut asym, mut rows, mut eig) = (0.0f64, 0.0f64, f64::INFINITY);
    for i in 0..=n {
        for j in 0..=n - i {
            let x = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
            let c = mobility(x, DELTA_C);
            for a in 0..3 {
                rows = rows.max((c[a][0] + c[a][1] + c[a][2]).abs());
                for b in 0..3 {
                    asym = asym.max((c[a][b] - c[b][a]).abs());
                }
            }
            eig = eig.min(min_eigenvalue(&c));
        }
    }
    Check {
        name: "mobility tensor",
        passed: asym <= 1e-15 && rows <= 1e-15 && eig >= -1e-12,
        detail: format!("asymmetry {asym:e}, row sums {rows:e}, min eigenvalue {eig:e}"),
    }
}

fn radial_check() -> Check {
    let frozen = [(0.5, 0.880148943643), (1.5, 1.081328360269), (2.5, 2.511582564368)];
    match solve_radial(1.0, 2.0, 5.0, 2.0, 5.0) {
        Ok(profile) => {
            let err = frozen.iter().map(|&(r, v)| (profile.eval(r) - v).abs()).fold(0.0, f64::max);
            Check { name: "radial nutrient profile", passed: err < 1e-8, detail: format!("max deviation {err:e}") }
        }
        Err(e) => Check { name: "radial nutrient profile", passed: false, detail: e.to_string() },
    }
}

fn coarse_config() -> SimConfig {
    SimConfig { h_f: 0.08, h_c: 0.32, epsilon: 0.1, quarter: true, shape: PERT_G, ..SimConfig::default() }
}

fn radii_check() -> Check {
    let cfg = SimConfig { quarter: true, shape: PERT_G, ..SimConfig::default() };
    let state = match initial_state(&cfg) {
        Ok(s) => s,
        Err(e) => return Check { name: "initial radii", passed: false, detail: e.to_string() },
    };
    let radii = extract_radii(&state.mesh, &state.phase, 256);
    let outer = radii.outer.amplitudes().map_or(f64::NAN, |a| a[1]);
    let inner = radii.inner.amplitudes().map_or(f64::NAN, |a| a[5]);
    let mean = radii.outer.mean().unwrap_or(f64::NAN);
    let ok = (outer - 0.1).abs() <= cfg.h_f && (inner - 0.05).abs() <= cfg.h_f && (mean - 2.0).abs() <= cfg.h_f;
    Check {
        name: "initial radii",
        passed: ok,
        detail: format!("outer mean {mean:.5}, mode 2 {outer:.5}, inner mode 6 {inner:.5}"),
    }
}

fn simplex_check() -> Check {
    let cfg = coarse_config();
    let mut worst: f64 = 0.0;
    let result = initial_state(&cfg).and_then(|mut state| {
        for _ in 0..5 {
            advance(&mut state, &cfg)?;
            for x in &state.phase.phi {
                worst = worst.max(-x[0]).max(-x[1]).max(-x[2]).max((x[0] + x[1] + x[2] - 1.0).abs());
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => Check {
            name: "simplex after five steps",
            passed: worst <= 1e-10,
            detail: format!("largest violation {worst:e}"),
        },
        Err(e) => Check { name: "simplex after five steps", passed: false, detail: e.to_string() },
    }
}

fn vtk_check() -> Check {
    let cfg = coarse_config();
    let path = std::env::temp_dir().join(format!("tumour-validate-{}.vtk", std::process::id()));
    let outcome = initial_state(&cfg).map_err(crate::CliError::from).and_then(|state| {
        let x: Vec<f64> = state.mesh.vertices().iter().map(|p| p[0]).collect();
        write_vtk(&state.mesh, &[("x", &x)], &path)?;
        let back = read_vtk(&path)?;
        let err = back.fields[0].1.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(err)
    });
    let _ = std::fs::remove_file(&path);
    match outcome {
        Ok(err) => Check { name: "VTK round trip", passed: err <= 1e-12, detail: format!("max deviation {err:e}") },
        Err(e) => Check { name: "VTK round trip", passed: false, detail: e.to_string() },
    }
}

pub fn run_checks() -> Vec<Check> {
    vec![mobility_check(), radial_check(), radii_check(), simplex_check(), vtk_check()]
}
