//! Gaussian-state models of continuous-variable telecloning over lossy,
//! noisy channels, and of the local clone-then-transmit alternative.

pub mod error;
pub mod experiments;
pub mod gaussian;
pub mod lcdt;
pub mod optim;
pub mod quadrature;
pub mod sum1;
pub mod telecloning;

pub use error::{Error, Result};
