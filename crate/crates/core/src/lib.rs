//! Simulation, coding and exact analysis for information transmission by
//! swarms of oblivious robots on grid graphs.
//!
//! A sender places a connected swarm next to itself; a deterministic
//! algorithm moves one robot at a time until the swarm touches the receiver,
//! who reads the message off the arriving configuration.

pub mod alg1;
pub mod alg2;
pub mod analysis;
pub mod codec;
pub mod engine;
pub mod error;
pub mod exec;
pub mod grid;
pub mod loco;
mod strip;

pub use engine::{run, BehaviorTrace, MoveAction, SwarmAlgorithm};
pub use error::{Error, MoveViolation, Result};
pub use exec::Exec;
pub use grid::{Configuration, GraphKind, GridGraph, Membership, Vertex};
pub use strip::{bits_to_index, format_bits, index_to_bits, parse_bits};
