use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by mesh construction, I/O, operators, solvers, and flows.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("face {face} references vertex {index} but mesh has {vertex_count} vertices")]
    FaceIndexOutOfRange {
        face: usize,
        index: usize,
        vertex_count: usize,
    },

    #[error("face {face} repeats a vertex index")]
    RepeatedFaceIndex { face: usize },

    #[error("non-manifold edge ({a}, {b}) shared by {count} faces")]
    NonManifoldEdge { a: usize, b: usize, count: usize },

    #[error("inconsistent orientation across edge ({a}, {b})")]
    InconsistentOrientation { a: usize, b: usize },

    #[error("boundary edges at vertex {vertex} do not form a closed loop")]
    OpenBoundary { vertex: usize },

    #[error("degenerate face {face}: area below tolerance")]
    DegenerateFace { face: usize },

    #[error("vertex {vertex} has a zero-magnitude accumulated normal")]
    ZeroNormal { vertex: usize },

    #[error("enclosed volume undefined: mesh has a boundary")]
    VolumeUndefined,

    #[error("invalid shape spec: {0}")]
    ShapeSpec(String),

    #[error("subdivision level {requested} exceeds cap {cap}")]
    SubdivisionCap { requested: u32, cap: u32 },

    #[error("dimension mismatch: matrix is {matrix} but right-hand side has {rhs} rows")]
    DimensionMismatch { matrix: usize, rhs: usize },

    #[error("solver did not converge in {iterations} iterations (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("constraint clamps every vertex: no free unknowns")]
    NoFreeUnknowns,

    #[error("blow-up: non-finite position produced at step {step}")]
    BlowUp { step: usize },

    #[error("identity check needs at least 2 records, series has {0}")]
    TooFewRecords(usize),

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
