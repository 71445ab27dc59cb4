//! Forward powertrain simulation with second-law bookkeeping.
//!
//! The crate propagates an electric vehicle (EV) or a parallel hybrid (HEV)
//! through a driving cycle at a fixed step and, at every step, accounts for
//! the exergy carried by heat, work and mass across each component boundary
//! together with the exergy destroyed inside it. Everything here is pure
//! computation over in-memory tables; parsing files, configuration and
//! report emission live in the `exergy-cli` companion crate.
//!
//! Sign conventions follow one rule: a ledger entry is the signed
//! contribution of a term to the vehicle exergy `X_veh`, so transfers out of
//! the vehicle and destruction are negative.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod battery;
pub mod cycle;
pub mod driveline;
pub mod engine;
pub mod error;
pub mod ledger;
pub mod motor;
pub mod presets;
pub mod sim;
pub mod supervisor;
pub mod table;
pub mod thermo;
pub mod vehicle;

pub use crate::error::{Error, Result};
