//! Angles between vectors and subspaces.
//!
//! Every subspace angle reduces to singular values of products of orthonormal
//! frames. For frames `A` (of `U`) and `B` (of `V`) the cosines of the
//! principal angles are the singular values of `BᵀA`, and the sines are the
//! singular values of the residual `(I − BBᵀ)A`. Angles are evaluated as
//! `atan2(sin, cos)` of the matching pair, which keeps small angles accurate
//! where a bare `arccos` would lose half the digits.

use nalgebra::{DMatrix, DVector};

use super::subspace::{AngleRadians, Subspace};
use crate::error::{domain, Error, Result};
use crate::linalg::{self, clamped_acos};

/// Default threshold for deciding `U + V = ℝⁿ` from the smallest singular
/// value of the stacked frames.
pub const DEFAULT_TRANSVERSALITY_TOL: f64 = 1e-9;

/// Relative size below which a projection counts as zero in
/// [`angle_vector_subspace`].
pub const ZERO_PROJECTION_RTOL: f64 = 1e-12;

fn nonzero_norm(u: &DVector<f64>) -> Result<f64> {
    let n = u.norm();
    if n > 0.0 && n.is_finite() {
        Ok(n)
    } else {
        domain("angle of a zero or non-finite vector")
    }
}

/// `∠(u, v) = arccos(⟨u,v⟩ / |u||v|) ∈ [0, π]`.
pub fn angle_between_vectors(u: &DVector<f64>, v: &DVector<f64>) -> Result<AngleRadians> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let nu = nonzero_norm(u)?;
    let nv = nonzero_norm(v)?;
    let (a, b) = (u / nu, v / nv);
    // 2·asin(|a−b|/2) resp. π − 2·asin(|a+b|/2) is exact near 0 and π.
    let c = a.dot(&b);
    let theta = if c >= 0.0 {
        2.0 * ((&a - &b).norm() / 2.0).min(1.0).asin()
    } else {
        std::f64::consts::PI - 2.0 * ((&a + &b).norm() / 2.0).min(1.0).asin()
    };
    Ok(AngleRadians::clamped(theta))
}

/// `∠(u, V)`: the angle between `u` and its orthogonal projection onto `V`,
/// taken as π/2 when the projection vanishes.
pub fn angle_vector_subspace(u: &DVector<f64>, v: &Subspace) -> Result<AngleRadians> {
    if u.len() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: v.ambient_dim(),
            found: u.len(),
        });
    }
    let nu = nonzero_norm(u)?;
    let coords = v.frame().transpose() * u;
    let along = coords.norm();
    if along <= ZERO_PROJECTION_RTOL * nu {
        return Ok(AngleRadians::RIGHT);
    }
    let across = (u - v.frame() * coords).norm();
    Ok(AngleRadians::clamped(across.atan2(along)))
}

/// Cosines (`σ(BᵀA)`) and sines (`σ((I−BBᵀ)A)`) of the angles between unit
/// vectors of `U` and `V`, each padded to `dim U` entries and sorted
/// non-increasingly.
fn cos_sin_spectra(u: &Subspace, v: &Subspace) -> (Vec<f64>, Vec<f64>) {
    let a = u.frame();
    let b = v.frame();
    let p = u.dim();
    let mut cos = linalg::singular_values(&(b.transpose() * a));
    cos.resize(p, 0.0);
    let residual = a - b * (b.transpose() * a);
    let mut sin = linalg::singular_values(&residual);
    sin.resize(p, 0.0);
    (cos, sin)
}

/// `∠_M(U, V) = max_{u ∈ U} ∠(u, V)`.
///
/// Reduction: with orthonormal frames `A`, `B`, the maximizing unit vector
/// minimizes `|Bᵀu|`, so `∠_M = arccos σ_min(BᵀA)` where `σ_min` is the
/// `dim U`-th singular value (zero when `dim U > dim V`). The same vector
/// maximizes the residual, so the sine is `σ_max((I−BBᵀ)A)`.
pub fn max_angle(u: &Subspace, v: &Subspace) -> Result<AngleRadians> {
    u.ensure_same_ambient(v)?;
    let (cos, sin) = cos_sin_spectra(u, v);
    let c = *cos.last().expect("nonzero subspace");
    let s = sin[0];
    Ok(AngleRadians::clamped(s.atan2(c)))
}

/// Smallest angle between a unit vector of `U` and the subspace `V`:
/// `atan2(σ_min((I−BBᵀ)A), σ_max(BᵀA))`.
pub(crate) fn smallest_principal_angle(u: &Subspace, v: &Subspace) -> f64 {
    let (cos, sin) = cos_sin_spectra(u, v);
    let c = cos[0];
    let s = *sin.last().expect("nonzero subspace");
    s.atan2(c).clamp(0.0, std::f64::consts::FRAC_PI_2)
}

/// Principal angles between `U` and `V` (`min(dim U, dim V)` of them, in
/// increasing order), from the cosine spectrum.
pub fn principal_angles(u: &Subspace, v: &Subspace) -> Result<Vec<AngleRadians>> {
    u.ensure_same_ambient(v)?;
    let m = v.frame().transpose() * u.frame();
    Ok(linalg::singular_values(&m)
        .into_iter()
        .map(|c| AngleRadians::clamped(clamped_acos(c)))
        .collect())
}

/// Whether `U + V = ℝⁿ`, judged by the `n`-th singular value of `[A | B]`.
pub fn is_transversal(u: &Subspace, v: &Subspace, tol: f64) -> Result<bool> {
    u.ensure_same_ambient(v)?;
    let n = u.ambient_dim();
    if u.dim() + v.dim() < n {
        return Ok(false);
    }
    let mut stacked = DMatrix::zeros(n, u.dim() + v.dim());
    stacked.columns_mut(0, u.dim()).copy_from(u.frame());
    stacked.columns_mut(u.dim(), v.dim()).copy_from(v.frame());
    let sigma = linalg::singular_values(&stacked);
    Ok(sigma.get(n - 1).copied().unwrap_or(0.0) > tol)
}

/// Principal vectors of `U` paired with cosines, sorted by decreasing cosine.
fn principal_vectors(u: &Subspace, v: &Subspace) -> (DMatrix<f64>, Vec<f64>) {
    let m = u.frame().transpose() * v.frame();
    let (y, cos) = linalg::sorted_left_svd(&m);
    (u.frame() * y, cos)
}

/// `U ∩ V`, spanned by the principal vectors whose cosine is at least
/// `1 − tol`. `None` is the zero subspace.
pub fn intersect(u: &Subspace, v: &Subspace, tol: f64) -> Result<Option<Subspace>> {
    u.ensure_same_ambient(v)?;
    if !(tol > 0.0) {
        return domain("intersection tolerance must be positive");
    }
    let (vectors, cos) = principal_vectors(u, v);
    let k = cos.iter().take_while(|&&c| c >= 1.0 - tol).count();
    if k == 0 {
        return Ok(None);
    }
    Ok(Subspace::span_of(&vectors.columns(0, k).into_owned()))
}

/// Orthogonal complement of the orthonormal frame `w` inside `s`.
fn complement_within(s: &Subspace, w: &DMatrix<f64>) -> Option<Subspace> {
    let rank = s.dim() - w.ncols();
    if rank == 0 {
        return None;
    }
    let residual = s.frame() - w * (w.transpose() * s.frame());
    Some(Subspace::from_orthonormal(linalg::leading_left_vectors(
        &residual, rank,
    )))
}

/// The intersection `W` and the complements `U_c`, `V_c` of `W` inside `U`
/// and `V`, for a transversal pair. `W` has dimension `dim U + dim V − n`
/// and is spanned by the leading principal vectors.
pub fn transversal_decomposition(
    u: &Subspace,
    v: &Subspace,
) -> (Option<Subspace>, Option<Subspace>, Option<Subspace>) {
    let s = (u.dim() + v.dim()).saturating_sub(u.ambient_dim());
    let (vectors, _) = principal_vectors(u, v);
    let w = vectors.columns(0, s).into_owned();
    let u_c = complement_within(u, &w);
    let v_c = complement_within(v, &w);
    let w = if s > 0 {
        Some(Subspace::from_orthonormal(w))
    } else {
        None
    };
    (w, u_c, v_c)
}

/// `∠_m(U, V)`, the minimum angle.
///
/// Zero when `dim U + dim V < n` or when `U + V ≠ ℝⁿ` (decided with `tol`).
/// Otherwise, with `W = U ∩ V` and `U_c`, `V_c` the orthogonal complements of
/// `W` in `U` and `V`, returns the least angle between a unit vector of `U_c`
/// and `V_c`. When `U_c = {0}` (equivalently `V^⊥ = {0}`) the minimum is over
/// an empty set and the result is π/2.
///
/// [`min_angle_perp`] computes the same value from `U^⊥` and `V^⊥`.
pub fn min_angle(u: &Subspace, v: &Subspace, tol: f64) -> Result<AngleRadians> {
    u.ensure_same_ambient(v)?;
    if !(tol > 0.0) {
        return domain("transversality tolerance must be positive");
    }
    if u.dim() + v.dim() < u.ambient_dim() || !is_transversal(u, v, tol)? {
        return Ok(AngleRadians::ZERO);
    }
    let (_, u_c, v_c) = transversal_decomposition(u, v);
    match (u_c, v_c) {
        (Some(a), Some(b)) => Ok(AngleRadians::clamped(smallest_principal_angle(&a, &b))),
        _ => Ok(AngleRadians::RIGHT),
    }
}

/// Minimum angle between unit vectors of `U^⊥` and `V^⊥`. Equals
/// [`min_angle`] on transversal pairs and is near zero otherwise.
pub fn min_angle_perp(u: &Subspace, v: &Subspace) -> Result<AngleRadians> {
    u.ensure_same_ambient(v)?;
    match (u.complement(), v.complement()) {
        (Some(a), Some(b)) => Ok(AngleRadians::clamped(smallest_principal_angle(&a, &b))),
        _ => Ok(AngleRadians::RIGHT),
    }
}
