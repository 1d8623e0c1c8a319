//! Exact analysis and simulation of Mills Futurity style slot machines:
//! periodic payout distributions plus a rebate of `J` coins after `J`
//! consecutive losses.

pub mod cyclic;
pub mod equilibrium;
pub mod error;
pub mod limit;
pub mod machine;
pub mod montecarlo;
pub mod specfile;
pub mod strategy;

pub use error::{Error, Result};
pub use machine::{futurity1936, make_spec, MachineSpec, MachineState, PayoutDistribution};
