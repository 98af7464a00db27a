use thiserror::Error;

/// Errors raised by the analytical model, the MLP builders and the renderers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid machine `{field}`: {reason}")]
    InvalidMachine { field: &'static str, reason: String },

    #[error("invalid kernel profile `{field}`: {reason}")]
    InvalidProfile { field: &'static str, reason: String },

    #[error("all time bounds are zero; the kernel performs no work")]
    EmptyKernel,

    #[error("invalid tolerance {0}: must be finite and non-negative")]
    InvalidTolerance(f64),

    #[error("geometric classification needs finite coordinates; use the time-domain path for kernels without network traffic")]
    InfiniteCoordinate,

    #[error("invalid range [{min}, {max}]: {reason}")]
    InvalidRange {
        min: f64,
        max: f64,
        reason: &'static str,
    },

    #[error("invalid sample count {0}: need at least 2")]
    TooFewSamples(usize),

    #[error("invalid dimension `{name}` = {value}: must be at least 1")]
    ZeroDimension { name: &'static str, value: u64 },

    #[error("unsupported element size {0} bytes (expected 1, 2, 4 or 8)")]
    InvalidDtype(u32),

    #[error(
        "layer {index} expects {expected} input features but the previous layer produces {found}"
    )]
    LayerMismatch {
        index: usize,
        expected: u64,
        found: u64,
    },

    #[error("the MLP has no layers")]
    NoLayers,

    #[error("phase {0} is not enabled for this MLP")]
    PhaseDisabled(crate::mlp::Phase),

    #[error("training needs the forward, activation-gradient and weight-gradient phases")]
    IncompleteTraining,

    #[error("global batch {batch} is not divisible by {nodes} nodes")]
    IndivisibleBatch { batch: u64, nodes: u64 },

    #[error("invalid all-reduce model: {0}")]
    InvalidAllReduce(String),

    #[error("empty batch list")]
    EmptySweep,

    #[error("invalid plot style `{field}`: {reason}")]
    InvalidStyle { field: &'static str, reason: String },

    #[error("nothing to plot: the curve has no samples")]
    EmptyCurve,

    #[error("point `{label}` has an infinite coordinate; only kernels with network traffic can be placed on the ridgeline plane")]
    InfinitePoint { label: String },

    #[error("unknown surface export format `{0}` (expected `grid-text` or `csv`)")]
    UnknownFormat(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
