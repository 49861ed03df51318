//! Entanglement analysis for small quantum systems.
//!
//! The crate is organized bottom-up:
//!
//! - [`qcore`]: dense complex matrices, states, partial trace/transpose, eigen-decompositions.
//! - [`statezoo`]: named pure and mixed state families.
//! - [`measures`]: concurrence, negativity, entropies, singlet fraction, distances.
//! - [`channel`]: teleportation usefulness and Bell-CHSH analysis of two-qubit channels.
//! - [`cloning`]: the Buzek–Hillery universal cloner and what its outputs are good for.
//! - [`protocols`]: controlled dense coding and cloning-controlled secret sharing.
//! - [`cli`]: the command-line front end behind the `entkit` binary.

pub mod channel;
pub mod cli;
pub mod cloning;
pub mod error;
pub mod measures;
pub mod protocols;
pub mod qcore;
pub mod random;
pub mod statezoo;

pub use error::{Error, Result};
