//! Structure of theta-free, prism-free graphs with bounded claw-like stars:
//! pattern detection, wheel and pyramid separators, strip-structures,
//! alignments and connectifiers, amicable separators and tree
//! decompositions with bounded independence number.

pub mod align;
pub mod amicable;
pub mod campaign;
pub mod decomp;
pub mod detect;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod separators;
pub mod shape;
pub mod strip;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, Vertex, VertexSet};
pub use weights::{Rational, WeightFn};
