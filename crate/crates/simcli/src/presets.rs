//! Parameter sets of the published experiments.

use tumour_core::physics::SourceVariant;
use tumour_core::{InitialShape, SimConfig};

use crate::error::CliError;

pub const PRESETS: [&str; 11] = [
    "fig1",
    "fig2",
    "fig3-radial",
    "fig4-gap",
    "fig5",
    "fig6",
    "fig7-large",
    "fig8-smallcore",
    "fig9-Dn0",
    "fig9-Dn1",
    "fig9-Dn5",
];

/// Mode 2 on the outer and mode 6 on the inner interface.
pub const PERT_G: InitialShape = InitialShape { r2: 2.0, r3: 1.0, delta2: 0.1, delta3: 0.05, m2: 2, m3: 6 };
/// Mode 6 on the outer and mode 4 on the inner interface.
pub const PERT_H: InitialShape = InitialShape { r2: 2.0, r3: 1.0, delta2: 0.1, delta3: 0.05, m2: 6, m3: 4 };
/// Mode 2 on the outer interface only.
pub const PERT_I: InitialShape = InitialShape { r2: 2.0, r3: 1.0, delta2: 0.1, delta3: 0.0, m2: 2, m3: 1 };
pub const CIRCULAR: InitialShape = InitialShape { r2: 2.0, r3: 1.0, delta2: 0.0, delta3: 0.0, m2: 1, m3: 1 };

fn base() -> SimConfig {
    SimConfig {
        epsilon: 0.05,
        tau: 1e-3,
        h_f: 0.02,
        h_c: 0.16,
        beta: 0.1,
        d: 1.0,
        consumption: 2.0,
        ..SimConfig::default()
    }
}

fn radial_growth(sigma_b: f64, k: f64, shape: InitialShape, variant: SourceVariant, t_end: f64) -> SimConfig {
    SimConfig {
        half_width: 5.0,
        apoptosis: 0.5,
        proliferation: 0.5,
        lambda: 0.1,
        chi_phi: 0.1,
        d_n: 0.0,
        sigma_b,
        k,
        variant,
        shape,
        t_end,
        ..base()
    }
}

fn large_domain(r3: f64, d_n: f64) -> SimConfig {
    SimConfig {
        half_width: 10.0,
        apoptosis: 0.0,
        proliferation: 0.1,
        lambda: 0.02,
        chi_phi: 5.0,
        d_n,
        sigma_b: 1.0,
        k: 0.01,
        variant: SourceVariant::A,
        shape: InitialShape { r3, ..PERT_I },
        t_end: 25.0,
        ..base()
    }
}

/// The configuration of a named preset. For presets made of several runs
/// this is the first one; see [`preset_runs`].
pub fn preset(name: &str) -> Result<SimConfig, CliError> {
    preset_runs(name).map(|mut runs| runs.swap_remove(0).1)
}

/// Every run of a preset, labelled.
pub fn preset_runs(name: &str) -> Result<Vec<(String, SimConfig)>, CliError> {
    use SourceVariant::{A, C};
    let single = |cfg: SimConfig| Ok(vec![(name.to_string(), cfg)]);
    match name {
        "fig1" => single(radial_growth(5.0, 0.01, PERT_G, C, 5.0)),
        "fig2" => single(radial_growth(5.0, 0.01, PERT_H, C, 5.0)),
        "fig3-radial" => {
            let mut runs = Vec::new();
            for k in [0.0, 0.01] {
                for sigma_b in [2.0, 5.0, 10.0] {
                    runs.push((format!("sigmaB{sigma_b}-K{k}"), radial_growth(sigma_b, k, CIRCULAR, C, 5.0)));
                }
            }
            Ok(runs)
        }
        "fig4-gap" => Ok([0.0, 0.01]
            .into_iter()
            .map(|k| (format!("K{k}"), radial_growth(2.0, k, CIRCULAR, C, 8.0)))
            .collect()),
        "fig5" => single(radial_growth(5.0, 0.01, PERT_G, A, 2.0)),
        "fig6" => single(radial_growth(5.0, 0.0, PERT_G, A, 2.0)),
        "fig7-large" => single(large_domain(1.0, 0.0)),
        "fig8-smallcore" => single(large_domain(0.5, 0.0)),
        "fig9-Dn0" => single(large_domain(1.5, 0.0)),
        "fig9-Dn1" => single(large_domain(1.5, 1.0)),
        "fig9-Dn5" => single(large_domain(1.5, 5.0)),
        _ => Err(CliError::UnknownPreset { name: name.to_string(), valid: PRESETS.join(", ") }),
    }
}
