use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physics::{EnergyParams, SourceVariant, Sources, DELTA_C};

/// How the nutrient is advanced in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NutrientMode {
    QuasiStatic,
    Transient,
}

/// Perturbed radii `R_i + delta_i cos(m_i theta)` of the proliferating
/// (`i = 2`) and necrotic (`i = 3`) regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialShape {
    pub r2: f64,
    pub r3: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub m2: u32,
    pub m3: u32,
}

impl InitialShape {
    pub fn validate(&self) -> Result<()> {
        if !(self.r3 > 0.0 && self.r3 < self.r2) {
            return Err(Error::InvalidArgument(format!("need 0 < R3 < R2, got {} and {}", self.r3, self.r2)));
        }
        if !(self.delta2 >= 0.0 && self.delta3 >= 0.0) {
            return Err(Error::InvalidArgument("perturbation amplitudes must be nonnegative".into()));
        }
        if self.m2 == 0 || self.m3 == 0 {
            return Err(Error::InvalidArgument("mode numbers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Every parameter of the model, the scheme and the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Interface width parameter.
    pub epsilon: f64,
    /// Time step.
    pub tau: f64,
    /// Surface tension scale.
    pub beta: f64,
    /// Permeability; 0 switches the flow off.
    pub k: f64,
    /// Nutrient diffusivity.
    pub d: f64,
    /// Chemotaxis ratio chi_phi / chi_sigma.
    pub lambda: f64,
    pub chi_phi: f64,
    /// Consumption rate.
    pub consumption: f64,
    pub variant: SourceVariant,
    /// Proliferation rate.
    pub proliferation: f64,
    /// Apoptosis rate.
    pub apoptosis: f64,
    /// Necrotic decay rate.
    pub d_n: f64,
    /// Nutrient value on the outer boundary.
    pub sigma_b: f64,
    pub delta_c: f64,
    pub h_f: f64,
    pub h_c: f64,
    pub half_width: f64,
    pub quarter: bool,
    pub nutrient: NutrientMode,
    #[serde(flatten)]
    pub shape: InitialShape,
    pub t_end: f64,
    /// Time between field snapshots.
    pub output_interval: f64,
    pub tol_pgs: f64,
    pub max_sweeps: usize,
    /// Adapt the mesh at the start of every step.
    pub adapt: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            epsilon: 0.05,
            tau: 1e-3,
            beta: 0.1,
            k: 0.01,
            d: 1.0,
            lambda: 0.1,
            chi_phi: 0.1,
            consumption: 2.0,
            variant: SourceVariant::C,
            proliferation: 0.5,
            apoptosis: 0.5,
            d_n: 0.0,
            sigma_b: 5.0,
            delta_c: DELTA_C,
            h_f: 0.02,
            h_c: 0.16,
            half_width: 5.0,
            quarter: false,
            nutrient: NutrientMode::QuasiStatic,
            shape: InitialShape { r2: 2.0, r3: 1.0, delta2: 0.1, delta3: 0.05, m2: 2, m3: 6 },
            t_end: 5.0,
            output_interval: 0.1,
            tol_pgs: 1e-7,
            max_sweeps: 10_000,
            adapt: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epsilon", self.epsilon),
            ("tau", self.tau),
            ("beta", self.beta),
            ("d", self.d),
            ("h_f", self.h_f),
            ("h_c", self.h_c),
            ("half_width", self.half_width),
            ("tol_pgs", self.tol_pgs),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        let nonneg = [
            ("k", self.k),
            ("lambda", self.lambda),
            ("chi_phi", self.chi_phi),
            ("consumption", self.consumption),
            ("proliferation", self.proliferation),
            ("apoptosis", self.apoptosis),
            ("d_n", self.d_n),
            ("delta_c", self.delta_c),
            ("t_end", self.t_end),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if self.h_f > self.h_c {
            return Err(Error::InvalidArgument(format!("h_f {} exceeds h_c {}", self.h_f, self.h_c)));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
        }
        self.shape.validate()
    }

    pub fn sources(&self) -> Sources {
        Sources {
            variant: self.variant,
            p: self.proliferation,
            a: self.apoptosis,
            d_n: self.d_n,
            epsilon: self.epsilon,
        }
    }

    /// `chi_sigma = chi_phi / lambda`, and 1 when either vanishes.
    pub fn chi_sigma(&self) -> f64 {
        if self.lambda > 0.0 && self.chi_phi > 0.0 {
            self.chi_phi / self.lambda
        } else {
            1.0
        }
    }

    pub fn energy_params(&self) -> EnergyParams {
        EnergyParams {
            beta: self.beta,
            epsilon: self.epsilon,
            chi_phi: self.chi_phi,
            chi_sigma: self.chi_sigma(),
        }
    }
}
