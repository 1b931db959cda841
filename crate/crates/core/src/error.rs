use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("dimension mismatch: expected a {expected}-chain, found a {found}-chain")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coefficient ring mismatch: expected {expected}, found {found}")]
    CoefficientMismatch { expected: String, found: String },

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("duplicate vertex {vertex} in simplex")]
    DuplicateVertex { vertex: usize },

    #[error("voxel ({x}, {y}, {z}) lies outside a {dx}x{dy}x{dz} image")]
    VoxelOutOfRange {
        x: i64,
        y: i64,
        z: i64,
        dx: usize,
        dy: usize,
        dz: usize,
    },

    #[error("chain complexes do not match: {0}")]
    ComplexMismatch(String),

    #[error("{p} divides lambda = {lambda}; no inverse modulo {p}")]
    LambdaDivisibleByPrime { p: u64, lambda: String },

    #[error("differential is not in diagonal normal form: {0}")]
    NotNormalForm(String),

    #[error("inconsistent mod-p ranks: torsion count at dimension {q} would be {value}")]
    InconsistentTorsion { q: usize, value: i64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
