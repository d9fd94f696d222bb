//! Discrete interior capacities of condensers.
//!
//! A condenser is a finite collection of plates (point sets) carrying signs
//! +1 or -1, with closures of opposite-signed plates disjoint. Given a
//! symmetric positive definite kernel, a weight function g > 0, and per-plate
//! mass targets a_i, the crate minimizes the signed kernel energy over all
//! measures placing g-weighted mass a_i on plate i. The reciprocal of the
//! minimal energy is the capacity; the minimizer yields the capacitary
//! constants C_i, the capacitary distribution gamma, Frostman-type optimality
//! residuals, and dual feasibility certificates.
//!
//! Pipeline: [`condenser::discretize`] turns plate shapes into point clouds,
//! [`kernel::assemble_matrix`] builds the PD-certified kernel matrix,
//! [`solver::solve_min_energy`] runs projected gradient with a Frank-Wolfe
//! gap certificate, and [`capacity::build_report`] derives capacity,
//! constants, and verification reports. The `condenser-cap` binary drives
//! everything from JSON scenario files.
//!
//! The `parallel` feature (on by default) runs matrix assembly, matrix-vector
//! products, and study levels on a rayon thread pool; disabling it compiles
//! the same interfaces down to sequential loops. Results are bit-identical
//! either way: parallelism is only ever across rows or across independent
//! solves, never across a single floating-point reduction.

pub mod capacity;
pub mod commands;
pub mod condenser;
pub mod jsonfmt;
pub mod kernel;
pub mod measure;
pub mod sampling;
pub mod scenario;
pub mod solver;
pub mod suite;

mod geom;

pub use capacity::{build_report, CapacityReport, DualityReport, FrostmanReport};
pub use condenser::{discretize, validate, DiscreteCondenser, PlateSpec, Shape, Sign, WeightFunction};
pub use kernel::{assemble_matrix, KernelFamily, KernelMatrix, KernelSpec};
pub use measure::CondenserMeasure;
pub use solver::{solve_min_energy, SolveOptions, SolveResult};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("kernel diverges at coincident points with smoothing epsilon = 0")]
    CoincidentPoints,

    #[error("point outside the open unit disk (|x| = {norm}); the logarithmic kernel is restricted to |x| < 1")]
    OutsideUnitDisk { norm: f64 },

    #[error("invalid plate {id}: {reason}")]
    InvalidPlate { id: u32, reason: String },

    #[error("plate {id} is empty")]
    EmptyPlate { id: u32 },

    #[error("condenser validation failed: {0}")]
    InvalidCondenser(String),

    #[error(
        "kernel matrix failed the positive-definiteness certificate \
         (smallest pivot {smallest_pivot:e}, floor {floor:e}); refusing to optimize"
    )]
    NotPositiveDefinite { smallest_pivot: f64, floor: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("brute-force oracle limited to {limit} total points, got {points}")]
    OracleTooLarge { points: usize, limit: usize },

    #[error("potential is +infinity and -infinity at once (probe point coincides with carriers of both signs at epsilon = 0)")]
    MixedInfinitePotential,

    #[error("exhaustion levels are not nested: {0}")]
    NotNested(String),

    #[error("measure does not belong to this condenser (fingerprint {got} != {expected})")]
    FingerprintMismatch { expected: String, got: String },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code contract: 0 converged, 1 invalid input,
    /// 2 not converged, 3 internal error. Errors reachable from bad user
    /// input map to 1; I/O failures while writing results map to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Json(_) => 3,
            _ => 1,
        }
    }
}
