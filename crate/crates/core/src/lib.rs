//! Blockage-aware stochastic geometry for urban cellular networks.
//!
//! Buildings are a Boolean scheme of random rectangles; base stations form a
//! homogeneous Poisson point process. The crate provides closed-form link and
//! network analytics for that model together with an exact Monte Carlo engine
//! that checks them.

pub mod error;
pub mod geometry;
pub mod link_stats;
pub mod montecarlo;
pub mod network;
pub mod processes;
pub mod quad;
pub mod rng;
pub mod spatial;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
