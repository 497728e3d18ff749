//! Closed-form VLSI analysis: device models, gate networks, interconnect delay,
//! logical effort, timing checks, power, SRAM electrical analysis and test logic.

pub mod cli;
pub mod device;
pub mod effort;
pub mod error;
pub mod expr;
pub mod gates;
pub mod interconnect;
pub mod memory;
pub mod numeric;
pub mod power;
pub mod testability;
pub mod timing;

pub use error::{Error, Result};
