//! Level-one modular forms mod `p`, their Hecke eigensystems, and the count
//! of eigensystems up to twist.

pub mod eigen;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod poly;
pub mod qseries;
pub mod report;
pub mod systems;

pub use eigen::{weight_orbits, BasisSource, DirectBasis, HeckeOrbit};
pub use field::{ExtField, Field, Integers, PrimeField, Ring};
pub use forms::{
    delta, delta_product, dim_cusp, eisenstein, eisenstein_mod_p, hecke_matrix, hecke_tn, victor_miller_basis,
    victor_miller_basis_mod_p,
};
pub use qseries::QSeries;
pub use report::{
    assemble_census, census, census_separators, census_weights, census_with, CensusConfig, CensusReport,
    NearCollision, OrbitClass, DEFAULT_CENSUS_CAP,
};
pub use systems::{
    default_separator_bound, eigensystems_weight, eigensystems_weight_with, is_reducible_system, label_orbit,
    separator_primes, twist, EigenSystem, Labeling,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error("precision {got} is too small, need {needed}")]
    PrecisionTooSmall { needed: usize, got: usize },
    #[error("unsupported weight {0}")]
    BadWeight(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the Hecke prime must differ from p = {0}")]
    EllEqualsP(u64),
    #[error("separator primes must be primes different from p")]
    BadSeparator,
    #[error("non-exact division by 1728")]
    NonExactDivision,
    #[error("p = {p} exceeds the census cap {cap}")]
    LimitExceeded { p: u64, cap: u64 },
    #[error("internal error: {0}")]
    Internal(&'static str),
}
