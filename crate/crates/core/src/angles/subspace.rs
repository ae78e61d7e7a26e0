use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RANK_RTOL};

/// Residual bound used by [`Subspace::span_eq`].
pub const SPAN_EQ_TOL: f64 = 1e-9;

/// A nonzero linear subspace of ℝⁿ stored as an orthonormal frame
/// (an `n × dim` matrix with orthonormal columns).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    frame: DMatrix<f64>,
}

impl Subspace {
    /// Span of the columns of `basis`. The columns need not be orthonormal but
    /// must be linearly independent.
    pub fn from_columns(basis: &DMatrix<f64>) -> Result<Self> {
        let expected = basis.ncols();
        if expected == 0 || basis.nrows() == 0 {
            return Err(Error::Domain("subspace must be nonzero".into()));
        }
        if expected > basis.nrows() {
            return Err(Error::RankDeficient {
                rank: basis.nrows(),
                expected,
            });
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("basis contains non-finite entries".into()));
        }
        let frame = linalg::column_span(basis, RANK_RTOL).ok_or(Error::RankDeficient {
            rank: 0,
            expected,
        })?;
        if frame.ncols() < expected {
            return Err(Error::RankDeficient {
                rank: frame.ncols(),
                expected,
            });
        }
        Ok(Self { frame })
    }

    /// Span of a list of vectors of length `ambient_dim`.
    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        let cols: Vec<DVector<f64>> = vectors.iter().map(|v| DVector::from_column_slice(v)).collect();
        if cols.is_empty() {
            return Err(Error::Domain("subspace must be nonzero".into()));
        }
        Self::from_columns(&DMatrix::from_columns(&cols))
    }

    /// Span of the standard basis vectors with the given zero-based indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let vectors: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![0.0; ambient_dim];
                if i < ambient_dim {
                    v[i] = 1.0;
                }
                v
            })
            .collect();
        Self::from_vectors(ambient_dim, &vectors)
    }

    /// Span of the columns of `m`, allowing dependent columns. `None` for the
    /// zero span.
    pub fn span_of(m: &DMatrix<f64>) -> Option<Self> {
        linalg::column_span(m, RANK_RTOL).map(|frame| Self { frame })
    }

    /// Wraps a frame already known to be orthonormal.
    pub(crate) fn from_orthonormal(frame: DMatrix<f64>) -> Self {
        debug_assert!(frame.ncols() >= 1);
        Self { frame }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.frame * (self.frame.transpose() * v)
    }

    /// Orthogonal complement in ℝⁿ, `None` when the subspace is all of ℝⁿ.
    pub fn complement(&self) -> Option<Self> {
        linalg::orthogonal_complement(&self.frame).map(Self::from_orthonormal)
    }

    /// Image under a linear map of the ambient space (re-orthonormalized).
    pub fn transformed(&self, map: &DMatrix<f64>) -> Result<Self> {
        if map.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: map.ncols(),
            });
        }
        Self::from_columns(&(map * &self.frame))
    }

    /// Largest residual of projecting each frame onto the other.
    pub fn projection_residual(&self, other: &Self) -> f64 {
        if self.ambient_dim() != other.ambient_dim() {
            return f64::INFINITY;
        }
        let res = |a: &DMatrix<f64>, b: &DMatrix<f64>| {
            let r = a - b * (b.transpose() * a);
            r.norm()
        };
        res(&self.frame, &other.frame).max(res(&other.frame, &self.frame))
    }

    /// Equality of column spans, up to [`SPAN_EQ_TOL`].
    pub fn span_eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.projection_residual(other) <= SPAN_EQ_TOL
    }

    /// Deviation of `frameᵀ·frame` from the identity, in max-abs norm.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.frame.transpose() * &self.frame - DMatrix::identity(self.dim(), self.dim());
        g.amax()
    }

    pub(crate) fn ensure_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }
}

/// JSON form `{"ambient_dim": n, "basis": [[...], ...]}`; basis vectors are
/// rows and need not be orthonormal.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<f64>>,
}

impl TryFrom<SubspaceJson> for Subspace {
    type Error = Error;

    fn try_from(value: SubspaceJson) -> Result<Self> {
        Subspace::from_vectors(value.ambient_dim, &value.basis)
    }
}

impl From<&Subspace> for SubspaceJson {
    fn from(s: &Subspace) -> Self {
        SubspaceJson {
            ambient_dim: s.ambient_dim(),
            basis: s
                .frame()
                .column_iter()
                .map(|c| c.iter().copied().collect())
                .collect(),
        }
    }
}

/// An angle in radians, finite and inside `[0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleRadians(f64);

impl AngleRadians {
    pub const ZERO: Self = AngleRadians(0.0);
    pub const RIGHT: Self = AngleRadians(std::f64::consts::FRAC_PI_2);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=std::f64::consts::PI).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!("angle {value} outside [0, π]")))
        }
    }

    /// Clamps rounding overshoot into `[0, π]`.
    pub(crate) fn clamped(value: f64) -> Self {
        Self(value.clamp(0.0, std::f64::consts::PI))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for AngleRadians {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_orthonormalizes() {
        let s = Subspace::from_vectors(3, &[vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let err = Subspace::from_vectors(3, &[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, expected: 2 }));
        assert!(Subspace::from_vectors(3, &[vec![0.0; 3]]).is_err());
        assert!(Subspace::from_vectors(3, &[vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn span_equality_ignores_basis_choice() {
        let a = Subspace::from_vectors(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let b = Subspace::from_vectors(3, &[vec![1.0, 1.0, 0.0], vec![1.0, -2.0, 0.0]]).unwrap();
        let c = Subspace::coordinate(3, &[0, 2]).unwrap();
        assert!(a.span_eq(&b));
        assert!(!a.span_eq(&c));
    }

    #[test]
    fn complement_is_orthogonal() {
        let a = Subspace::from_vectors(4, &[vec![1.0, 2.0, 0.0, 1.0]]).unwrap();
        let c = a.complement().unwrap();
        assert_eq!(c.dim(), 3);
        assert!((a.frame().transpose() * c.frame()).amax() < 1e-12);
        assert!(Subspace::coordinate(2, &[0, 1]).unwrap().complement().is_none());
    }

    #[test]
    fn json_round_trip_preserves_span() {
        let json = r#"{"ambient_dim": 3, "basis": [[1, 1, 0], [0, 0, 2]]}"#;
        let parsed: SubspaceJson = serde_json::from_str(json).unwrap();
        let s = Subspace::try_from(parsed).unwrap();
        let back = Subspace::try_from(SubspaceJson::from(&s)).unwrap();
        assert!(s.span_eq(&back));
    }

    #[test]
    fn angle_range_is_checked() {
        assert!(AngleRadians::new(-0.1).is_err());
        assert!(AngleRadians::new(4.0).is_err());
        assert!(AngleRadians::new(f64::NAN).is_err());
        assert_eq!(AngleRadians::new(1.0).unwrap().value(), 1.0);
    }
}
