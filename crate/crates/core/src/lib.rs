//! Exact constructions and certification of mutually unbiased bases.
//!
//! Flat bases are stored as integer exponent matrices over `Z_m`, so every
//! inner product is an element of the cyclotomic ring `Z[w_m]` and can be
//! checked with integer arithmetic alone.
//!
//! ```
//! use mubs_core::{prime_power_family, verify_exact, Status};
//!
//! let family = prime_power_family(9).unwrap();
//! assert_eq!(family.len(), 10);
//! assert_eq!(verify_exact(&family).unwrap().status, Status::CertifiedExtremal);
//! ```

pub mod bounds;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod finite_field;
pub mod galois_ring;
pub mod search;
pub mod verifier;

pub use bounds::{bounds_table, lower_bound, upper_bound, BoundRow};
pub use constructions::{
    alltop, export_family, galois_ring_mubs, import_family, macneish_tensor, prime_power_family,
    standard_basis, wootters_fields, ExponentBasis, MubFamily,
};
pub use cyclotomic::{CyclotomicInt, CyclotomicRing};
pub use error::{Error, Result};
pub use finite_field::{make_field, FieldElement, FieldSpec};
pub use galois_ring::{make_ring, teichmuller, RingElement, RingSpec, TeichmullerSet};
pub use search::{
    extend_family, objective, search, SearchConfig, SearchResult, StepSchedule, UnitaryBasis,
};
pub use verifier::{
    extremality_check, gamma_oracle, verify_exact, verify_float, weil_sum_oracle, weil_sweep,
    PairVerdict, Status, VerdictKind, VerificationReport,
};
