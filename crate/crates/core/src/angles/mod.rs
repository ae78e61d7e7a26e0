//! Estimated Euclidean geometry of subspaces of ℝⁿ: vector and subspace
//! angles, the maximum and minimum angle, the complex angle with respect to a
//! complex structure, and quantitative transversality.

mod complex;
mod measure;
mod subspace;
mod transverse;

pub use complex::{
    asymptotic_holomorphicity_rate, complex_angle, is_complex, is_symplectic, ComplexStructure,
    HolomorphicityFit, EXPONENT_SLACK, ZERO_BETA,
};
pub use measure::{
    angle_between_vectors, angle_vector_subspace, intersect, is_transversal, max_angle, min_angle,
    min_angle_perp, principal_angles, transversal_decomposition, DEFAULT_TRANSVERSALITY_TOL,
    ZERO_PROJECTION_RTOL,
};
pub use subspace::{AngleRadians, Subspace, SubspaceJson, SPAN_EQ_TOL};
pub use transverse::{
    bridge_angle_bound, check_sigma_transverse, BridgeBound, SigmaCheck, TransversalitySample,
};
