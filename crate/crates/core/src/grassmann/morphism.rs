use nalgebra::DMatrix;
use num::Zero;

use super::compound::compound_matrix;
use super::scalar::{exact_rank, C64, QC};
use crate::error::{domain, Error, Result};
use crate::linalg;

/// A linear map `φ: V → W` as an `n × m` matrix (`m = dim V`, `n = dim W`).
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismSample {
    matrix: DMatrix<C64>,
}

impl MorphismSample {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return domain("morphism dimensions must be positive");
        }
        Ok(Self { matrix })
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }
}

/// Number of singular values above `tol · σ_max` (or above `tol` when every
/// singular value is negligible).
pub fn rank_stratum(phi: &MorphismSample, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return domain("rank tolerance must be positive");
    }
    let sigma = linalg::singular_values(&phi.matrix);
    let top = sigma.first().copied().unwrap_or(0.0);
    let scale = if top <= f64::EPSILON { 1.0 } else { top };
    Ok(sigma.iter().filter(|&&s| s > tol * scale).count())
}

/// Exact rank of a rational morphism.
pub fn rank_stratum_exact(phi: &DMatrix<QC>) -> usize {
    exact_rank(phi)
}

/// Real codimension `2(r_e − r)(r_f − r)` of the rank-`r` stratum of
/// `Hom(ℂ^{r_e}, ℂ^{r_f})`.
pub fn expected_codimension(r_e: usize, r_f: usize, r: usize) -> usize {
    2 * r_e.saturating_sub(r) * r_f.saturating_sub(r)
}

/// Finite-difference step for [`rank_variety_tangent_rank`].
pub const JACOBIAN_FD_STEP: f64 = 1e-6;
/// Relative singular-value threshold for the Jacobian rank.
pub const JACOBIAN_RANK_RTOL: f64 = 1e-6;

/// Complex rank of the differential of `φ ↦ ⋀ⁿφ` at `phi`.
///
/// The map is holomorphic, so the real Jacobian over the `2nm` real
/// coordinates (central differences) has twice the complex rank.
pub fn rank_variety_tangent_rank(phi: &MorphismSample) -> Result<usize> {
    let (n, m) = phi.matrix.shape();
    if m < n {
        return Err(Error::Precondition(format!("need dim V ≥ dim W, got m = {m}, n = {n}")));
    }
    if rank_stratum(phi, 1e-10)? < n {
        return Err(Error::Precondition("⋀ⁿφ vanishes: φ is not of full rank".into()));
    }
    let wedge = |x: &DMatrix<C64>| -> Vec<C64> {
        compound_matrix(x, n).expect("n ≤ min(n, m)").iter().copied().collect()
    };
    let out_dim = wedge(&phi.matrix).len();
    let h = JACOBIAN_FD_STEP;
    let mut jac = DMatrix::<f64>::zeros(2 * out_dim, 2 * n * m);
    for idx in 0..n * m {
        for (part, unit) in [(0usize, C64::new(h, 0.0)), (1, C64::new(0.0, h))] {
            let mut plus = phi.matrix.clone();
            let mut minus = phi.matrix.clone();
            plus[(idx / m, idx % m)] += unit;
            minus[(idx / m, idx % m)] -= unit;
            let (fp, fm) = (wedge(&plus), wedge(&minus));
            let col = 2 * idx + part;
            for k in 0..out_dim {
                let d = (fp[k] - fm[k]) / (2.0 * h);
                jac[(2 * k, col)] = d.re;
                jac[(2 * k + 1, col)] = d.im;
            }
        }
    }
    let sigma = linalg::singular_values(&jac);
    let top = sigma.first().copied().unwrap_or(0.0);
    if top.is_zero() {
        return Ok(0);
    }
    let real_rank = sigma.iter().filter(|&&s| s > JACOBIAN_RANK_RTOL * top).count();
    Ok(real_rank.div_ceil(2))
}

/// Dimension of the image of `φ ↦ ⋀ⁿφ` on full-rank `n × m` matrices: the
/// affine cone over `Gr(n, m)`, of complex dimension `n(m − n) + 1`.
pub fn decomposable_cone_dim(m: usize, n: usize) -> usize {
    n * (m - n) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::scalar::qc_int;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn stratum_examples() {
        let zero = MorphismSample::new(DMatrix::zeros(2, 3)).unwrap();
        assert_eq!(rank_stratum(&zero, 1e-8).unwrap(), 0);
        assert_eq!(expected_codimension(3, 2, 0), 12);
        let mut padded = DMatrix::zeros(3, 4);
        padded[(0, 0)] = c(1.0);
        padded[(1, 1)] = c(1.0);
        assert_eq!(rank_stratum(&MorphismSample::new(padded).unwrap(), 1e-8).unwrap(), 2);
        let tiny = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1e-12)]);
        assert_eq!(rank_stratum(&MorphismSample::new(tiny).unwrap(), 1e-8).unwrap(), 1);
        assert!(rank_stratum(&MorphismSample::new(DMatrix::zeros(1, 1)).unwrap(), 0.0).is_err());
    }

    #[test]
    fn exact_rank_of_rational_morphism() {
        let m: Vec<_> = [1, 2, 3, 2, 4, 6].iter().map(|&x| qc_int(x, 0)).collect();
        assert_eq!(rank_stratum_exact(&DMatrix::from_row_slice(2, 3, &m)), 1);
    }

    #[test]
    fn tangent_rank_of_a_covector() {
        let phi = MorphismSample::new(DMatrix::from_row_slice(1, 2, &[c(1.0), c(0.0)])).unwrap();
        assert_eq!(rank_variety_tangent_rank(&phi).unwrap(), 2);
    }

    #[test]
    fn tangent_rank_is_the_cone_dimension() {
        // At φ = [I | 0] the differential of ⋀ⁿ is spanned by φ itself and
        // the n(m−n) minors that replace one identity column by e_i, i > n.
        for (m, n) in [(3usize, 2usize), (4, 2), (4, 3), (5, 2)] {
            let phi = DMatrix::from_fn(n, m, |i, j| if i == j { c(1.0) } else { c(0.0) });
            let rank = rank_variety_tangent_rank(&MorphismSample::new(phi).unwrap()).unwrap();
            assert_eq!(rank, decomposable_cone_dim(m, n), "(m, n) = ({m}, {n})");
        }
    }

    #[test]
    fn tangent_rank_preconditions() {
        let wide = MorphismSample::new(DMatrix::from_row_slice(2, 1, &[c(1.0), c(0.0)])).unwrap();
        assert!(matches!(rank_variety_tangent_rank(&wide), Err(Error::Precondition(_))));
        let deficient = MorphismSample::new(DMatrix::zeros(2, 3)).unwrap();
        assert!(matches!(rank_variety_tangent_rank(&deficient), Err(Error::Precondition(_))));
    }
}
