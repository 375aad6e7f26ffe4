//! Inter-domain distribution matching (IDM) at desk scale.
//!
//! The crate is organized around the training objective
//! `L = L_E + lambda1 * L_G + lambda2 * L_R`, where the two penalty terms
//! align per-sample classifier gradients and encoder representations across
//! training environments using sorted per-dimension matching (PDM):
//!
//! - [`infotheory`]: exact discrete information measures plus executable
//!   verifiers for the constructive results (shift decomposition, predictor
//!   gap, Pinsker chain, XOR aggregation counterexample, indistinguishable
//!   Gaussian environments).
//! - [`distmatch`]: column sorting, moving-average buffers and the PDM
//!   penalty, together with the closed-form/numeric divergence machinery
//!   that certifies sorted matching optimality.
//! - [`nn`]: dense f64 kernels, a deterministic RNG, a small MLP
//!   (encoder + linear classifier) with analytic forward/backward, and Adam.
//! - [`penalties`]: the IDM objective composition plus the ERM/IRMv1/V-REx/
//!   IGA/Fishr penalty zoo used for learning-dynamics traces.
//! - [`data`]: MNIST IDX ingestion, Colored MNIST environment construction,
//!   grayscale evaluation sets, and a synthetic two-feature surrogate.
//! - [`trainer`]: the full-batch training loop with warmup gating, penalty
//!   scheduling, metrics recording and model selection.

pub mod data;
pub mod distmatch;
mod error;
pub mod infotheory;
pub(crate) mod linalg;
pub mod nn;
pub mod penalties;
pub mod rng;
pub mod trainer;

pub use error::{Error, Result};
