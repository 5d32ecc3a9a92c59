//! Entanglement dynamics of a three-qubit XXZ ring with DM coupling.
//!
//! The crate builds initial states, propagates them unitarily or under
//! Milburn intrinsic decoherence, applies single-qubit Kraus channels, and
//! evaluates pair, one-to-other and genuinely tripartite entanglement
//! measures. Closed-form expressions for the analytically tractable cases
//! live in [`closedform`] and serve as oracles for the numeric pipeline.

pub mod channels;
pub mod closedform;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measures;
pub mod states;

pub use error::{Error, Result};
