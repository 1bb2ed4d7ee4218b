use thiserror::Error;

/// Errors produced by parsing, simulation, code validation, and fault
/// enumeration. Variants carry enough position information to report
/// actionable diagnostics for agent-submitted text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: u32, num_qubits: u32 },

    #[error("operand length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: u32, right: u32 },

    #[error("gate {gate} expects {expected} target(s), got {got}")]
    BadArity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("duplicate qubit {qubit} within one gate application")]
    DuplicateTarget { qubit: u32 },

    #[error("gate {gate} is not supported in this context")]
    UnsupportedGate { gate: &'static str },

    #[error("nondeterministic measurement at instruction {instruction} (qubit {qubit})")]
    NondeterministicMeasurement { instruction: usize, qubit: u32 },

    #[error("measurement on data qubit {qubit} is not allowed for this task")]
    MeasurementOnData { qubit: u32 },

    #[error("ill-formed flag gadget: {reason}")]
    IllFormedFlagGadget { reason: String },

    #[error("generator set is not abelian: generators {a} and {b} anticommute")]
    NonCommutingGenerators { a: usize, b: usize },

    #[error("generator {index} is not Hermitian (phase must be a plain sign)")]
    NonHermitianGenerator { index: usize },

    #[error("operator is not Hermitian (phase must be a plain sign)")]
    NonHermitianPauli,

    #[error("empty generator set")]
    EmptyGeneratorSet,

    #[error("generator {index} is a product of earlier generators")]
    DependentGenerators { index: usize },

    #[error("malformed code {id}: {reason}")]
    MalformedCode { id: String, reason: String },

    #[error("unknown code id {0}")]
    UnknownCodeId(String),

    #[error("duplicate code id {0}")]
    DuplicateCodeId(String),

    #[error("unsupported code family parameters: {0}")]
    UnsupportedParams(String),

    #[error("invalid fault location: qubit {qubit}, layer {layer}")]
    InvalidFaultLocation { qubit: u32, layer: u64 },

    #[error("circuit does not preserve the stabilizer group ({satisfied}/{total} generators hold)")]
    NotPreserving { satisfied: u32, total: u32 },

    #[error("operation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
