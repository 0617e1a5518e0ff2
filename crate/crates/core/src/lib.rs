//! Simulation and design of two-ion geometric phase gates driven by
//! polarization-modulated optical dipole forces.

pub mod atomic_data;
pub mod atomic_physics;
pub mod cli;
pub mod config;
pub mod constants;
pub mod drive_dynamics;
pub mod error;
pub mod error_budget;
pub mod gate_designer;
pub mod keyvalue;
pub mod numerics;
pub mod report;
pub mod trap_mechanics;

pub use error::{Error, Result};
