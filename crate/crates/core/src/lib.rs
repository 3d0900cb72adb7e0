//! Subgraph detection and enumeration in the Broadcast CONGEST model.
//!
//! * [`graph`]: graphs, orientations, degeneracy and a brute-force oracle.
//! * [`repfam`]: representative set families.
//! * [`sim`]: round-synchronous Broadcast CONGEST simulator.
//! * [`detect`]: distributed detection of paths, cycles, trees and
//!   pseudotrees.
//! * [`sparse`]: distributed enumeration on low-degeneracy graphs.
//! * [`lowerbound`]: lower-bound instance generator and verifier.

pub mod gen;
pub mod graph;
pub mod repfam;
pub mod sim;
pub mod detect;
pub mod sparse;
pub mod lowerbound;

pub use graph::{Graph, GraphError, NodeId};
