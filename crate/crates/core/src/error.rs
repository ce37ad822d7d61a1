use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown cell `{id}` at level {level}")]
    UnknownCell { level: usize, id: String },

    #[error("cell index {index} out of range at level {level}")]
    CellOutOfRange { level: usize, index: usize },

    #[error("level {level} out of range (sequence has {levels} levels)")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("depth {depth} out of range (sequence has {levels} levels)")]
    DepthOutOfRange { depth: usize, levels: usize },

    #[error("radius multiplier must be 1, 2 or 3, got {0}")]
    InvalidRadius(usize),

    #[error("duplicate cell `{id}` at level {level}")]
    DuplicateCell { level: usize, id: String },

    #[error("invalid topology at level {level}: {reason}")]
    InvalidTopology { level: usize, reason: String },

    #[error("map table is not total: no image for cell {index}")]
    NonTotal { index: usize },

    #[error("map image {image} out of range for target of size {size}")]
    ImageOutOfRange { image: usize, size: usize },

    #[error("bonding map into level {level} is missing or has the wrong domain size")]
    BondingShape { level: usize },

    #[error("levels out of order: {from} > {to}")]
    LevelOrder { from: usize, to: usize },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("set is not open at level {level}")]
    NotOpen { level: usize },

    #[error("level {level} must be below the depth {depth}")]
    LevelNotBelowDepth { level: usize, depth: usize },

    #[error("declared threshold {declared} must be below the prefix length {len}")]
    ThresholdTooLarge { declared: usize, len: usize },

    #[error("thread depth {depth} is below the deepest sequence level {needed}")]
    InsufficientDepth { depth: usize, needed: usize },

    #[error("cell sequence is not Cauchy: {0}")]
    NotCauchy(String),

    #[error("not a thread: coordinate {level} is incompatible with the bonding map")]
    NotAThread { level: usize },

    #[error(
        "map is not well defined on classes: threads {first} and {second} share a class but land in different classes"
    )]
    IllDefined { first: usize, second: usize },

    #[error("family does not commute at level {level}, cell {cell}")]
    NonCommuting { level: usize, cell: usize },

    #[error("family does not preserve edges at level {level}: ({x}, {y})")]
    FamilyEdge { level: usize, x: usize, y: usize },

    #[error("condition (4) unsatisfiable at depth {depth}: no admissible level for target level {target_level} on thread {thread}")]
    EmptyK {
        thread: usize,
        target_level: usize,
        depth: usize,
    },

    #[error("nesting violated on thread {thread} between target levels {level} and {next}")]
    Nesting { thread: usize, level: usize, next: usize },

    #[error("cell map does not preserve closeness: {0}")]
    NotClosePreserving(String),

    #[error("invalid level profile: {0}")]
    InvalidProfile(String),

    #[error("no depth-{depth} limit thread exists")]
    NoLimit { depth: usize },

    #[error("H_1 is not a simplex: cells {a} and {b} are unrelated")]
    NotSimplex { a: usize, b: usize },

    #[error("quotient map is not continuous")]
    Discontinuous,

    #[error("emptiness hypothesis fails at depth {depth} for thread {thread}, target level {target_level}")]
    EmptinessHypothesis {
        thread: usize,
        target_level: usize,
        depth: usize,
    },

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
