use thiserror::Error;

/// Errors raised by the linear-system, emulator and simulator routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HhlError {
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("right-hand side is not a unit vector (norm = {norm})")]
    NotUnitVector { norm: f64 },
    #[error("matrix is singular (min |eigenvalue| = {min_abs:e})")]
    Singular { min_abs: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("spectrum is not positive definite (eigenvalue {0}); the clock register encodes positive integers only")]
    IndefiniteSpectrum(f64),
    #[error("eigenvalue ratios have no exact integer form within the denominator cap; a clock size must be given")]
    InexactRatioNoOverride,
    #[error("clock register size {0} is out of range")]
    InvalidClockSize(u32),
    #[error("rotation constant {c} exceeds scaled eigenvalue {eig}")]
    RotationDomain { c: f64, eig: f64 },
    #[error("ancilla success probability is zero")]
    ZeroSuccessProbability,
    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("gate qubits overlap (qubit {0} used twice)")]
    OverlappingQubits(usize),
    #[error("gate payload is not unitary (max |G^H G - I| = {deviation:e})")]
    NonUnitaryGate { deviation: f64 },
    #[error("histogram has no ancilla = 1 counts")]
    ZeroSuccessCounts,
    #[error("cannot aggregate an empty list of estimates")]
    EmptyList,
    #[error("invalid problem instance: {0}")]
    Instance(String),
}

pub type Result<T, E = HhlError> = std::result::Result<T, E>;
