use thiserror::Error;

/// Errors raised by the algebra, construction, verification and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {modulus:?} is not irreducible over F_{p}")]
    NotIrreducible { p: u32, modulus: Vec<u32> },
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("operands belong to different fields or rings")]
    SpecMismatch,
    #[error("modulus {0:?} is not basic primitive over Z_4")]
    NotBasicPrimitive(Vec<u8>),
    #[error("root of modulus {modulus:?} has order {order}, expected {expected}")]
    NotTeichmullerLift {
        modulus: Vec<u8>,
        order: u64,
        expected: u64,
    },
    #[error("construction requires odd characteristic, got {0}")]
    EvenCharacteristic(u32),
    #[error("construction requires characteristic at least 5, got {0}")]
    CharacteristicTooSmall(u32),
    #[error("empty input")]
    EmptyInput,
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("exponent {value} out of range for root order {root_order}")]
    ExponentOutOfRange { value: i64, root_order: u64 },
    #[error("bases use different root orders ({0} and {1})")]
    MixedRootOrders(u64, u64),
    #[error("quadratic coefficient must be nonzero")]
    DegenerateQuadratic,
    #[error("target count {target} exceeds d+1 = {bound}")]
    InvalidTarget { target: usize, bound: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot tensor a standard basis with a flat basis at index {0}")]
    UnrepresentableTensor(usize),
    #[error("integer overflow in cyclotomic arithmetic")]
    Overflow,
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
