//! Estimated transversality and determinantal loci.
//!
//! * [`angles`]: maximum/minimum angles between subspaces of ℝⁿ and the
//!   inequalities relating them, complex angles, σ-transversality.
//! * [`grassmann`]: the matrix model of `Gr(r, N)`, Plücker coordinates,
//!   charts, compound matrices, rank strata and the curvature of the
//!   universal bundle.
//! * [`chern`]: exact Chern-class calculus with a symbolic twist `k`,
//!   Porteous determinants, Harris–Tu Chern numbers of determinantal loci
//!   and zero loci.
//! * [`suites`] and [`acceptance`]: seeded property suites and the
//!   end-to-end acceptance checks, shared by the tests and the CLI.

pub mod acceptance;
pub mod angles;
pub mod chern;
pub mod error;
pub mod grassmann;
pub(crate) mod linalg;
pub mod random;
pub mod reference;
pub mod suites;

pub use angles::{AngleRadians, ComplexStructure, Subspace};
pub use chern::{BundleSpec, CohomologyClass, DeterminantalProblem, InvariantReport, QPoly};
pub use error::{Error, Result};
pub use grassmann::{GrassmannPoint, MorphismSample, PlueckerCoords};
