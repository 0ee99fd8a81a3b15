//! Generalized area spectral efficiency (GASE) of wireless links under
//! Rayleigh fading: ergodic capacity per unit of affected area.
//!
//! Analytic modules are generic over [`Real`] (`f32` or `f64`); the
//! Monte Carlo oracle works in `f64`.

pub mod cognitive_underlay;
pub mod coop_threenode;
pub mod error;
pub mod link_p2p;
pub mod mathkernel;
pub mod mc_oracle;
pub mod propagation;
pub mod relay_dualhop;
pub mod scalar;

pub use error::{GaseError, Result};
pub use scalar::Real;

pub use cognitive_underlay::CognitiveScenario;
pub use coop_threenode::{CoopResult, CoopScenario};
pub use link_p2p::{GaseBreakdown, P2pScenario};
pub use mathkernel::QuadratureSpec;
pub use mc_oracle::{McConfig, McEstimate};
pub use propagation::{FadingGain, PowerLevel, PropagationEnvironment};
pub use relay_dualhop::{DualHopScenario, HopPair, RelayOptimum, RelayProtocol};

pub type Environment64 = PropagationEnvironment<f64>;
pub type Environment32 = PropagationEnvironment<f32>;
pub type PowerLevel64 = PowerLevel<f64>;
pub type PowerLevel32 = PowerLevel<f32>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;
pub type QuadratureSpec32 = QuadratureSpec<f32>;
pub type P2pScenario64 = P2pScenario<f64>;
pub type P2pScenario32 = P2pScenario<f32>;
pub type DualHopScenario64 = DualHopScenario<f64>;
pub type DualHopScenario32 = DualHopScenario<f32>;
pub type CoopScenario64 = CoopScenario<f64>;
pub type CoopScenario32 = CoopScenario<f32>;
pub type CognitiveScenario64 = CognitiveScenario<f64>;
pub type CognitiveScenario32 = CognitiveScenario<f32>;
pub type GaseBreakdown64 = GaseBreakdown<f64>;
pub type GaseBreakdown32 = GaseBreakdown<f32>;
