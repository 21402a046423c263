//! Optimization of static and dynamic maps with a periodically reset
//! integrator fed by a unit persistently exciting signal.

pub mod cost;
pub mod error;
pub mod hybrid;
pub mod linalg;
pub mod optimizers;
pub mod oracle;
pub mod signals;
pub mod plants;
pub mod analysis;
pub mod config;
pub mod experiments;
