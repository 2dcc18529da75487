use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("self-loop on node {node} rejected: self-persistence is encoded by self-edges across layers")]
    SelfLoop { node: String },
    #[error("edge {src} -> {dst} has non-positive weight {weight}")]
    NonPositiveWeight { src: String, dst: String, weight: f64 },
    #[error("node index {index} out of range for {num_nodes} nodes")]
    NodeOutOfRange { index: usize, num_nodes: usize },
    #[error("layer {layer} out of range for {num_steps} steps")]
    LayerOutOfRange { layer: usize, num_steps: usize },
    #[error("no spatial edge between {src} and {dst}")]
    UnknownEdge { src: usize, dst: usize },
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("non-finite signal value at node {node}, step {step}")]
    NonFinite { node: usize, step: usize },
    #[error("threshold must be finite, got {0}")]
    NonFiniteThreshold(f64),
    #[error("k = {k} out of range for {n} vectors")]
    InvalidK { k: usize, n: usize },
    #[error("empty k range")]
    EmptyRange,
    #[error("cluster {0} has no assigned components")]
    EmptyCluster(usize),
    #[error("sparsification threshold must satisfy 0 <= tau < 1, got {0}")]
    InvalidTau(f64),
    #[error("average component has no nodes on layer 0")]
    EmptyFirstLayer,
    #[error("seed node {0} is not present on layer 0")]
    UnknownSeedNode(u32),
    #[error("no label for node {0}")]
    MissingLabel(u32),
    #[error("verifier limited to N*T <= {limit}, got {size}")]
    SizeGuard { size: usize, limit: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
