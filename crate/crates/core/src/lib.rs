//! Finite-depth computations on inverse sequences of finite cellular graphs.
//!
//! A sequence is a list of finite graphs `G_1, G_2, ...` carrying a reflexive
//! symmetric relation and a finite topology, joined by bonding maps
//! `G_{n+1} → G_n`. Questions about the inverse limit are answered at an
//! explicit depth `D` by working with the depth-`D` threads.

pub mod error;
pub mod generators;
pub mod graph;
pub mod maps;
pub mod sequence;

pub use error::{Error, Result};
pub use graph::{Cell, CellSet, CellularGraph, Continuity, FiniteTopology, Relation};
pub use sequence::{InverseSequence, Thread, ThreadSpace};
