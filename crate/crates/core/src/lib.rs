//! Maximum Morse matchings of simplicial complexes.
//!
//! A complex is read from a facet list, its Hasse diagram is split into
//! levels, and a branch-and-cut search over the arc variables finds a Morse
//! matching with the fewest critical faces. Betti numbers over several
//! fields give the initial bounds, cycle and free-face inequalities are
//! separated during the search, and an LP-guided greedy heuristic supplies
//! incumbents.

pub mod cli;
pub mod complex;
pub mod error;
pub mod heuristic;
pub mod homology;
pub mod instances;
pub mod io;
pub mod lp;
pub mod matching;
pub mod separation;
pub mod solver;

pub use complex::{Arc, ArcId, Face, FaceId, HasseDiagram, LevelGraph, SimplicialComplex};
