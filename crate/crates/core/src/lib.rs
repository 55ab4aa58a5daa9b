//! Adaptive P1 finite elements for a three-phase Cahn-Hilliard-Darcy tumour
//! growth model with an obstacle potential.

pub mod config;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod physics;
pub mod radial;
pub mod solver;

pub use config::{InitialShape, NutrientMode, SimConfig};
pub use error::{Error, Result};
pub use mesh::{AdaptiveMesh, BoundaryFlag, TransferMap};
pub use solver::{advance, FlowState, PgsReport, PhaseState, SimState};
