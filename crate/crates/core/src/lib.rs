//! Modulo-k factors, modulo orientations and the connectivity certificates
//! they depend on, for multigraphs with loops and parallel edges.
//!
//! Every construction returns objects tied to the host graph by edge id, and
//! every engine has a brute-force counterpart in [`oracle`] for desk-scale
//! cross-checking.

pub mod audit;
pub mod check;
pub mod compat;
pub mod connectivity;
pub mod error;
pub mod extract;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod io;
pub mod matching;
pub mod modk;
pub mod maxcut;
pub mod oracle;
pub mod orient;
pub mod par;
pub mod parity;
pub mod regular;

pub use error::{Error, Hypotheses, Result};
pub use graph::{Bipartition, Factor, IntFunc, Multigraph, Orientation, ResidueMap, VertexSet};
pub use par::Exec;
