//! Honey-Bee: a color-conquest game on vertex-colored graphs.
//!
//! Players own a connected territory and grow it by calling a color: every
//! node of that color reachable from the territory through same-colored
//! nodes joins. The crate covers the single-player puzzle (shortest
//! conquering sequence), the two-player game, and generators that compile
//! hard source problems into game instances.

pub mod duel;
pub mod graph;
pub mod hexboard;
pub mod io;
pub mod nodeset;
pub mod random;
pub mod reductions;
pub mod solitaire;

pub use graph::{Color, ColoredGraph, GraphError, NodeId, NodeSpec, Weight};
pub use io::{load_instance, write_instance, Instance};
pub use nodeset::NodeSet;
pub use solitaire::{Method, SolveError, SolveResult};
