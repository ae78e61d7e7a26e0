//! Small dense helpers shared by the real and complex geometry code.

use nalgebra::{ComplexField, DMatrix};

/// Relative threshold below which a singular value is treated as zero when
/// orthonormalizing a user-supplied basis.
pub const RANK_RTOL: f64 = 1e-10;

/// Scalars the SVD helpers accept: real and complex doubles.
///
/// The decomposition itself runs in faer; nalgebra's bidiagonal SVD returns
/// inconsistent factors on some rank-deficient inputs.
pub trait Scalar: ComplexField<RealField = f64> + faer::traits::ComplexField {}

impl Scalar for f64 {}
impl Scalar for nalgebra::Complex<f64> {}

fn thin_svd<T: Scalar>(m: &DMatrix<T>) -> (DMatrix<T>, Vec<f64>) {
    let a = faer::Mat::<T>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].clone());
    let svd = a.thin_svd().expect("SVD converges");
    let (u, s) = (svd.U(), svd.S().column_vector());
    let k = s.nrows();
    let mut order: Vec<usize> = (0..k).collect();
    let sigma: Vec<f64> = (0..k).map(|i| s[i].clone().real()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let left = DMatrix::from_fn(m.nrows(), k, |i, j| u[(i, order[j])].clone());
    (left, order.iter().map(|&i| sigma[i]).collect())
}

/// Singular values in non-increasing order.
pub fn singular_values<T: Scalar>(m: &DMatrix<T>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    thin_svd(m).1
}

/// Thin SVD with the left singular vectors reordered by non-increasing
/// singular value.
pub fn sorted_left_svd<T: Scalar>(m: &DMatrix<T>) -> (DMatrix<T>, Vec<f64>) {
    thin_svd(m)
}

/// Orthonormal basis of the column span of `m`, returned as columns, keeping
/// singular directions above `rtol * sigma_max`. Returns `None` for the zero
/// span.
pub fn column_span<T: Scalar>(
    m: &DMatrix<T>,
    rtol: f64,
) -> Option<DMatrix<T>> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return None;
    }
    let (u, sigma) = sorted_left_svd(m);
    let top = sigma.first().copied().unwrap_or(0.0);
    if top <= f64::MIN_POSITIVE {
        return None;
    }
    let rank = sigma.iter().take_while(|&&s| s > rtol * top).count();
    Some(u.columns(0, rank).into_owned())
}

/// The `k` leading left singular vectors of `m`.
pub fn leading_left_vectors<T: Scalar>(
    m: &DMatrix<T>,
    k: usize,
) -> DMatrix<T> {
    let (u, _) = sorted_left_svd(m);
    u.columns(0, k).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `frame` inside the ambient space.
pub fn orthogonal_complement<T: Scalar>(
    frame: &DMatrix<T>,
) -> Option<DMatrix<T>> {
    let n = frame.nrows();
    let d = frame.ncols();
    if d >= n {
        return None;
    }
    let projector = DMatrix::<T>::identity(n, n) - frame * frame.adjoint();
    Some(leading_left_vectors(&projector, n - d))
}

/// Clamp to `[-1, 1]` and take the arccosine.
pub fn clamped_acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}
