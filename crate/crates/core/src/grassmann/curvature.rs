//! Curvature of the universal bundle over `Gr(r, N)`.
//!
//! In the chart `Ψ₀` the holomorphic frame `f(z) = [I; zᵀ]` (columns
//! `e_j + Σ_k z_{jk} e_{r+k}`) has Hermitian matrix `h = f̄ᵗ f`, and the
//! dual bundle has curvature
//!
//! ```text
//! R_{U*} = h⁻¹ d f̄ᵗ ∧ df − h⁻¹ d f̄ᵗ f h⁻¹ ∧ f̄ᵗ df,     R_U = −R_{U*}ᵗ.
//! ```
//!
//! Two-forms are evaluated as `(α∧β)(X, Y) = ½(α(X)β(Y) − α(Y)β(X))`. With
//! this normalization a coordinate direction gives `R_U(e_{jk}, i e_{jk}) =
//! −i e_j⊗e_j*`, and in general `−i R_U(u, Ju) = −u u*` at `Π₀`.

use nalgebra::{DMatrix, SymmetricEigen};
use num::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::scalar::C64;
use crate::error::{domain, Result};
use crate::random;

fn frame(z: &DMatrix<C64>) -> DMatrix<C64> {
    let (r, k) = z.shape();
    let mut f = DMatrix::zeros(r + k, r);
    for j in 0..r {
        f[(j, j)] = C64::one();
    }
    f.rows_mut(r, k).copy_from(&z.transpose());
    f
}

fn frame_differential(x: &DMatrix<C64>) -> DMatrix<C64> {
    let (r, k) = x.shape();
    let mut d = DMatrix::zeros(r + k, r);
    d.rows_mut(r, k).copy_from(&x.transpose());
    d
}

/// `R_U(X, Y)` at the chart point `z` for real tangent vectors `X`, `Y`,
/// each given by its holomorphic components (an `r × (N−r)` matrix).
pub fn universal_curvature_form(
    z: &DMatrix<C64>,
    x: &DMatrix<C64>,
    y: &DMatrix<C64>,
) -> Result<DMatrix<C64>> {
    if x.shape() != z.shape() || y.shape() != z.shape() {
        return domain("tangent vectors must have the chart's shape");
    }
    let f = frame(z);
    let h = f.adjoint() * &f;
    let h_inv = h.try_inverse().expect("frame Gram matrix is positive definite");
    let (dfx, dfy) = (frame_differential(x), frame_differential(y));
    let half = C64::new(0.5, 0.0);

    let first = |a: &DMatrix<C64>, b: &DMatrix<C64>| &h_inv * a.adjoint() * b;
    let term1 = (first(&dfx, &dfy) - first(&dfy, &dfx)) * half;

    let left = |a: &DMatrix<C64>| &h_inv * a.adjoint() * &f * &h_inv;
    let right = |b: &DMatrix<C64>| f.adjoint() * b;
    let term2 = (left(&dfx) * right(&dfy) - left(&dfy) * right(&dfx)) * half;

    let dual = term1 - term2;
    Ok(-dual.transpose())
}

/// The endomorphism `−i R_U(u, Ju)` of ℂʳ at `Π₀`.
pub fn curvature_endomorphism_at_base(u: &DMatrix<C64>) -> DMatrix<C64> {
    let z = DMatrix::zeros(u.nrows(), u.ncols());
    let ju = u * C64::i();
    let r = universal_curvature_form(&z, u, &ju).expect("shapes agree");
    r * (-C64::i())
}

/// Unit vector `∂/∂z_{jk}` of the chart.
pub fn coordinate_tangent(r: usize, n: usize, j: usize, k: usize) -> DMatrix<C64> {
    let mut u = DMatrix::zeros(r, n - r);
    u[(j, k)] = C64::one();
    u
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    /// Eigenvalues of `−i R_U(u, Ju)`, ascending.
    pub spectrum: Vec<f64>,
    /// `−i R_{⋀ʳU}(u, Ju)`, the trace of the endomorphism.
    pub determinant_curvature: f64,
    /// Max-abs entry of `E − E*`.
    pub hermitian_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub r: usize,
    pub n: usize,
    pub samples: Vec<CurvatureSample>,
}

impl CurvatureReport {
    pub fn max_eigenvalue(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|s| s.spectrum.iter().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_determinant_curvature(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.determinant_curvature)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        self.samples.iter().map(|s| s.hermitian_defect).fold(0.0, f64::max)
    }
}

pub fn curvature_sample(u: &DMatrix<C64>) -> CurvatureSample {
    let e = curvature_endomorphism_at_base(u);
    let hermitian_defect = (&e - e.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sym = (&e + e.adjoint()) * C64::new(0.5, 0.0);
    let mut spectrum: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    spectrum.sort_by(f64::total_cmp);
    let trace = e.trace();
    CurvatureSample {
        spectrum,
        determinant_curvature: trace.re,
        hermitian_defect: hermitian_defect.max(trace.im.abs()),
    }
}

/// Curvature spectra at `Π₀` for `tangent_samples` random unit tangents
/// (Frobenius norm one in chart coordinates, where the chart is isometric).
/// Any other point is moved to `Π₀` by a unitary map, which conjugates the
/// endomorphism and leaves the spectrum unchanged.
pub fn universal_curvature_at_base(
    r: usize,
    n: usize,
    tangent_samples: usize,
    seed: u64,
) -> Result<CurvatureReport> {
    if r == 0 || r >= n {
        return domain(format!("curvature needs 1 ≤ r < N, got r = {r}, N = {n}"));
    }
    let mut rng = random::stream(seed, 0);
    let samples = (0..tangent_samples)
        .map(|_| {
            let mut u = random::complex_gaussian(&mut rng, r, n - r);
            let norm = u.norm();
            u /= C64::new(norm, 0.0);
            curvature_sample(&u)
        })
        .collect();
    Ok(CurvatureReport { r, n, samples })
}

/// A random unit tangent, exposed for property suites.
pub fn random_unit_tangent<R: Rng>(rng: &mut R, r: usize, n: usize) -> DMatrix<C64> {
    let mut u = random::complex_gaussian(rng, r, n - r);
    let norm = u.norm();
    if norm.is_zero() {
        return coordinate_tangent(r, n, 0, 0);
    }
    u /= C64::new(norm, 0.0);
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_direction_spectrum() {
        let s = curvature_sample(&coordinate_tangent(2, 4, 0, 0));
        assert_eq!(s.spectrum.len(), 2);
        assert!((s.spectrum[0] + 1.0).abs() < 1e-15);
        assert!(s.spectrum[1].abs() < 1e-15);
        assert!((s.determinant_curvature + 1.0).abs() < 1e-15);
    }

    #[test]
    fn coordinate_direction_matches_projector() {
        // R_U(e_{jk}, i e_{jk}) = −i b_jj with b_jj = e_j ⊗ e_j*.
        for (j, k) in [(0, 0), (1, 2), (0, 1)] {
            let u = coordinate_tangent(2, 5, j, k);
            let z = DMatrix::zeros(2, 3);
            let r = universal_curvature_form(&z, &u, &(&u * C64::i())).unwrap();
            let mut b = DMatrix::<C64>::zeros(2, 2);
            b[(j, j)] = C64::one();
            assert!((r - b * (-C64::i())).norm() < 1e-15);
        }
    }

    #[test]
    fn random_tangents_are_seminegative() {
        let report = universal_curvature_at_base(2, 5, 200, 11).unwrap();
        assert!(report.max_eigenvalue() <= 1e-10);
        assert!(report.max_determinant_curvature() < 0.0);
        assert!(report.max_hermitian_defect() < 1e-12);
        for s in &report.samples {
            assert!((s.determinant_curvature + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn curvature_is_antisymmetric() {
        let mut rng = random::stream(3, 1);
        let z = DMatrix::zeros(2, 2);
        let x = random_unit_tangent(&mut rng, 2, 4);
        let y = random_unit_tangent(&mut rng, 2, 4);
        let a = universal_curvature_form(&z, &x, &y).unwrap();
        let b = universal_curvature_form(&z, &y, &x).unwrap();
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn bad_dimensions() {
        assert!(universal_curvature_at_base(2, 2, 1, 0).is_err());
        assert!(universal_curvature_at_base(0, 2, 1, 0).is_err());
    }
}
