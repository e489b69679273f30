//! Heun equations as pullbacks of Gauss hypergeometric equations by Belyi maps.

pub mod arith;
pub mod belyi;
pub mod error;
pub mod heun;
pub mod numeric;
pub mod ode2;
pub mod pipeline;
pub mod tables;

pub use error::{Error, Result};
