//! Separating path systems for complete graphs.
//!
//! A family of paths in `K_n` is (weakly) separating when every pair of
//! edges is told apart by some path containing exactly one of them. This
//! crate builds such families from circulant generator paths, certifies
//! them by brute force and searches small cases exhaustively.

pub mod circulant;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod search;
pub mod verify;

pub use circulant::{Edge, PathFamily, PathSeq, Vertex};
pub use error::{Error, Result};
