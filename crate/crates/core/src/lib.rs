//! Monte Carlo simulator of connected-mode discontinuous reception (DRX)
//! over blockage-prone 28 / 140 GHz cellular links.
//!
//! The crate models a square multi-cell deployment, a Poisson field of moving
//! human/vehicular blockers whose screens attenuate each link through double
//! knife-edge diffraction, a link-budget SNR per cell and monitoring instance,
//! the listening-set DRX tracker, and the receiver front-end power draw that
//! turns sleep fractions into milliwatts.
//!
//! All physics is generic over the scalar type (`f32`/`f64`) via
//! [`scalar::Real`]; the aliases below fix the default `f64` instantiation
//! used by the CLI and the aggregation layer.

pub mod blockage;
pub mod channel;
pub mod config;
pub mod drx;
pub mod error;
pub mod geometry;
pub mod power;
pub mod scalar;
pub mod scenario;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};

/// Default scalar type of the shipped binaries and presets.
pub type Scalar = f64;

pub type ScenarioConfig = scenario::ScenarioConfig<Scalar>;
pub type Deployment = scenario::Deployment<Scalar>;
pub type Blocker = blockage::Blocker<Scalar>;
pub type BlockerField = blockage::BlockerField<Scalar>;
pub type LinkState = channel::LinkState<Scalar>;
pub type LinkSample = channel::LinkSample<Scalar>;
pub type CycleOutcome = drx::CycleOutcome<Scalar>;
pub type PowerConfig = power::PowerConfig<Scalar>;
pub type Point2 = geometry::Point2<Scalar>;
pub type Point3 = geometry::Point3<Scalar>;
