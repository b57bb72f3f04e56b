//! Electron-transfer barriers and heterogeneous rate constants for the
//! two-level Marcus model, from the non-adiabatic to the strongly adiabatic
//! regime.
//!
//! - [`model`]: diabats, couplings and adiabatic surfaces
//! - [`barriers`]: Marcus, shifted, effective-λ and exact adiabatic barriers
//! - [`rates`]: Marcus–Hush–Chidsey rates, numeric and closed form
//! - [`analysis`]: sweeps, λ_eff fitting and Arrhenius analysis
//! - [`cli`]: the `marcus-kinetics` command

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod barriers;
pub mod cli;
pub mod error;
pub mod model;
pub mod numerics;
pub mod rates;
pub mod table;

pub use barriers::{barrier, BarrierMethod, BarrierResult};
pub use error::{Error, Result};
pub use model::{CouplingModel, DiabaticSystem};
pub use rates::{ElectrodeConditions, PrefactorKind, RateRequest};
pub use table::SweepTable;
