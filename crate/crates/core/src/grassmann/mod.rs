//! Matrix model of the Grassmannian `Gr(r, N)`: points as full-rank `r × N`
//! matrices up to row operations, Plücker coordinates, the standard chart
//! around `Π₀ = [I | 0]`, the Fubini–Study distance, compound matrices,
//! rank strata of morphisms, and the curvature of the universal bundle.
//!
//! Two arithmetic backends are provided: `Complex<f64>` for geometry and
//! `Complex<BigRational>` for identities that must hold exactly.

mod compound;
mod curvature;
mod json;
mod morphism;
mod point;
mod scalar;

pub use compound::{compound_matrix, minor, subsets};
pub use curvature::{
    coordinate_tangent, curvature_endomorphism_at_base, curvature_sample, random_unit_tangent,
    universal_curvature_at_base, universal_curvature_form, CurvatureReport, CurvatureSample,
};
pub use json::{parse_rational, JsonScalar, MatrixJson};
pub use morphism::{
    decomposable_cone_dim, expected_codimension, rank_stratum, rank_stratum_exact,
    rank_variety_tangent_rank, MorphismSample, JACOBIAN_FD_STEP, JACOBIAN_RANK_RTOL,
};
pub use point::{
    chart_inverse, chart_isometry_defect, chart_psi0, fs_distance, pluecker_embed,
    pluecker_embed_exact, GrassmannPoint, PlueckerCoords, RationalGrassmannPoint,
    CHART_MAX_CONDITION, METRIC_FD_STEP, POINT_RANK_RTOL,
};
pub use scalar::{
    adjoint, determinant, exact_norm_sqr, exact_rank, qc_int, qc_is_zero, qc_to_c64, to_float_matrix,
    FieldScalar, C64, QC,
};
