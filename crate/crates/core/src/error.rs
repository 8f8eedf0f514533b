use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate argument `{0}`")]
    DuplicateArgument(String),
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("argument `{0}` is missing from the ordering")]
    MissingArgument(String),
    #[error("weight {value} of argument `{id}` is outside [0, 1]")]
    WeightOutOfRange { id: String, value: f64 },
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ordering syntax error at byte {position}: {message}")]
    OrderingSyntax { position: usize, message: String },
    #[error("kernel descriptor syntax error at byte {position}: {message}")]
    DescriptorSyntax { position: usize, message: String },
    #[error("negative linear-combination coefficient {0}")]
    NegativeCoefficient(f64),
    #[error("geometric combination needs at least one kernel")]
    EmptyGeometricCombination,
    #[error("invalid kernel parameter: {0}")]
    InvalidKernelParameter(String),
    #[error("operation is only defined for the built-in max-based, card-based and h-categorizer kernels")]
    UnsupportedKernel,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("mapping is not an isomorphism of the attack relation")]
    NotAnIsomorphism,
    #[error("isomorphism does not map argument {from} to argument {to}")]
    IsomorphismMismatch { from: usize, to: usize },
    #[error("degree {value} at index {index} is outside [0, 1]")]
    DegreeOutOfRange { index: usize, value: f64 },
}
