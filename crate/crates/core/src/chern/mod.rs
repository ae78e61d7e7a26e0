//! Exact Chern-class calculus in `ℚ[k][h]/(h^{n+1})`, where `h` is the class
//! of the polarizing line bundle `L` and `k` the twist exponent.

mod bundle;
mod class;
mod examples;
mod invariants;
mod poly;
mod porteous;
mod problem;

pub use bundle::{binomial, binomial_q, difference_chern, dual_chern, twist_by_k, twist_chern, BundleJson, BundleSpec};
pub use class::CohomologyClass;
pub use examples::{cross_k_isotopy_check, example_tables, ExampleFamily, ExampleRow};
pub use invariants::{
    auroux_invariants, harris_tu_n1, harris_tu_n11_n2, integrate, zero_locus_invariants, DeterminantalProblem,
    InvariantReport, VolumeMultiple,
};
pub use poly::{int, rat, QPoly};
pub use porteous::{class_determinant, porteous_delta};
pub use problem::ProblemJson;
