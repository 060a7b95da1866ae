//! Treewidth solver: given a graph G and an integer k, compute a tree
//! decomposition of width at most k (exact mode) or at most (1+eps)k
//! (approximate mode), or certify that the treewidth of G exceeds k.
//!
//! The solvers work by iterative compression driven by a local-improvement
//! engine; each improvement round calls a branching search over important
//! separators. A brute-force oracle (subset dynamic programming over
//! elimination orders) provides independent ground truth for testing.

mod bitgraph;
pub mod drivers;
pub mod graph;
pub mod impsep;
pub mod improve;
pub mod io;
pub mod oracle;
pub mod pstw;
pub mod search;
pub mod stw;
pub mod treedec;

pub use drivers::{approx, exact, treewidth, Backend, DriverResult, Mode, Ratio};
pub use graph::{FlowResult, Graph, Separation, Vertex, VertexSet};
pub use search::{SearchCtx, SolveOptions};
pub use treedec::{TorsoTreeDecomposition, TreeDecomposition, ValidationReport, Violation};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid separation: {0}")]
    InvalidSeparation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("set is not a separator")]
    NotSeparator,
    #[error("no bag contains {0:?}")]
    NoBagContains(Vec<Vertex>),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("instance too large: {0} exceeds cap {1}")]
    SizeCap(usize, usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
