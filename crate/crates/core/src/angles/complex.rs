use nalgebra::DMatrix;
use serde::Serialize;

use super::measure::max_angle;
use super::subspace::{AngleRadians, Subspace};
use crate::error::{domain, Error, Result};

/// A linear complex structure `J` on ℝ²ⁿ, `J² = −I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructure {
    matrix: DMatrix<f64>,
}

impl ComplexStructure {
    pub const SQUARE_TOL: f64 = 1e-12;

    /// The standard structure `J e_{2i−1} = e_{2i}`, `J e_{2i} = −e_{2i−1}`.
    pub fn standard(ambient_dim: usize) -> Result<Self> {
        if ambient_dim == 0 || ambient_dim % 2 != 0 {
            return domain(format!("complex structure needs an even dimension, got {ambient_dim}"));
        }
        let mut j = DMatrix::zeros(ambient_dim, ambient_dim);
        for i in (0..ambient_dim).step_by(2) {
            j[(i + 1, i)] = 1.0;
            j[(i, i + 1)] = -1.0;
        }
        Ok(Self { matrix: j })
    }

    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n == 0 || n % 2 != 0 {
            return domain("complex structure must be a square matrix of even size");
        }
        let defect = (&matrix * &matrix + DMatrix::identity(n, n)).amax();
        if defect > Self::SQUARE_TOL {
            return domain(format!("J² + I has max entry {defect:e}"));
        }
        Ok(Self { matrix })
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `J·V`.
    pub fn apply(&self, v: &Subspace) -> Result<Subspace> {
        v.transformed(&self.matrix)
    }
}

/// `β(V) = ∠_M(V, JV)` for an even-dimensional subspace.
pub fn complex_angle(v: &Subspace, j: &ComplexStructure) -> Result<AngleRadians> {
    if v.ambient_dim() != j.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: j.ambient_dim(),
            found: v.ambient_dim(),
        });
    }
    if v.dim() % 2 != 0 {
        return domain(format!("complex angle needs an even-dimensional subspace, got {}", v.dim()));
    }
    max_angle(v, &j.apply(v)?)
}

/// `β(V) ≤ tol`.
pub fn is_complex(v: &Subspace, j: &ComplexStructure, tol: f64) -> Result<bool> {
    Ok(complex_angle(v, j)?.value() <= tol)
}

/// `β(V) < π/2 − tol`, i.e. the restriction of the symplectic form is
/// nondegenerate.
pub fn is_symplectic(v: &Subspace, j: &ComplexStructure, tol: f64) -> Result<bool> {
    Ok(complex_angle(v, j)?.value() < std::f64::consts::FRAC_PI_2 - tol)
}

/// Samples with `β` at or below this are treated as exactly complex.
pub const ZERO_BETA: f64 = 1e-12;

/// Exponents up to `−0.5 + EXPONENT_SLACK` count as `O(k^{−1/2})` decay.
pub const EXPONENT_SLACK: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphicityFit {
    /// Fitted `a` in `β ≈ C·kᵃ`; `None` when every sample is exactly complex.
    pub exponent: Option<f64>,
    pub constant: Option<f64>,
    pub exactly_holomorphic: bool,
    pub samples_used: usize,
    pub passes: bool,
}

/// Least-squares fit of `log β(V_k)` against `log k`.
pub fn asymptotic_holomorphicity_rate(
    samples: &[(u64, Subspace)],
    j: &ComplexStructure,
) -> Result<HolomorphicityFit> {
    if samples.len() < 3 {
        return domain("at least three samples are required");
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) || samples[0].0 == 0 {
        return domain("sample indices must be positive and increasing");
    }
    let mut points = Vec::with_capacity(samples.len());
    for (k, v) in samples {
        let beta = complex_angle(v, j)?.value();
        if beta > ZERO_BETA {
            points.push(((*k as f64).ln(), beta.ln()));
        }
    }
    if points.is_empty() {
        return Ok(HolomorphicityFit {
            exponent: None,
            constant: None,
            exactly_holomorphic: true,
            samples_used: 0,
            passes: true,
        });
    }
    if points.len() < 2 {
        return domain("fewer than two samples with nonzero complex angle");
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok(HolomorphicityFit {
        exponent: Some(slope),
        constant: Some(intercept.exp()),
        exactly_holomorphic: false,
        samples_used: points.len(),
        passes: slope <= -0.5 + EXPONENT_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn span(n: usize, vs: &[Vec<f64>]) -> Subspace {
        Subspace::from_vectors(n, vs).unwrap()
    }

    #[test]
    fn standard_structure_squares_to_minus_one() {
        let j = ComplexStructure::standard(6).unwrap();
        let sq = j.matrix() * j.matrix();
        assert!((sq + DMatrix::identity(6, 6)).amax() == 0.0);
        assert!(ComplexStructure::standard(3).is_err());
        assert!(ComplexStructure::from_matrix(DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn complex_line_and_lagrangian_plane() {
        let j = ComplexStructure::standard(4).unwrap();
        let line = Subspace::coordinate(4, &[0, 1]).unwrap();
        assert!(complex_angle(&line, &j).unwrap().value() < 1e-14);
        assert!(is_complex(&line, &j, 1e-9).unwrap());
        let lag = Subspace::coordinate(4, &[0, 2]).unwrap();
        assert!((complex_angle(&lag, &j).unwrap().value() - FRAC_PI_2).abs() < 1e-14);
        assert!(!is_symplectic(&lag, &j, 1e-9).unwrap());
        assert!(complex_angle(&Subspace::coordinate(4, &[0]).unwrap(), &j).is_err());
    }

    #[test]
    fn tilted_plane_matches_rotation_angle() {
        let j = ComplexStructure::standard(4).unwrap();
        let t: f64 = 0.5;
        let v = span(4, &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, t.cos(), t.sin(), 0.0]]);
        let beta = complex_angle(&v, &j).unwrap().value();
        assert!((beta - t).abs() < 1e-14);
        assert!(is_symplectic(&v, &j, 1e-9).unwrap());
    }

    fn tilted(k: u64, beta: f64) -> (u64, Subspace) {
        (k, span(4, &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, beta.cos(), beta.sin(), 0.0]]))
    }

    #[test]
    fn rate_of_inverse_square_root_decay() {
        let j = ComplexStructure::standard(4).unwrap();
        let samples: Vec<_> = [4u64, 16, 64, 256].iter().map(|&k| tilted(k, (k as f64).powf(-0.5))).collect();
        let fit = asymptotic_holomorphicity_rate(&samples, &j).unwrap();
        assert!((fit.exponent.unwrap() + 0.5).abs() < 0.05);
        assert!((fit.constant.unwrap() - 1.0).abs() < 1e-6);
        assert!(fit.passes);
    }

    #[test]
    fn rate_of_faster_decay_passes() {
        let j = ComplexStructure::standard(4).unwrap();
        let samples: Vec<_> = [2u64, 8, 32, 128].iter().map(|&k| tilted(k, 1.0 / k as f64)).collect();
        let fit = asymptotic_holomorphicity_rate(&samples, &j).unwrap();
        assert!((fit.exponent.unwrap() + 1.0).abs() < 1e-6);
        assert!(fit.passes);
    }

    #[test]
    fn constant_complex_sequence() {
        let j = ComplexStructure::standard(4).unwrap();
        let samples: Vec<_> = [1u64, 2, 3].iter().map(|&k| tilted(k, 0.0)).collect();
        let fit = asymptotic_holomorphicity_rate(&samples, &j).unwrap();
        assert!(fit.exactly_holomorphic && fit.passes && fit.exponent.is_none());
    }

    #[test]
    fn slow_decay_fails_and_bad_input_errors() {
        let j = ComplexStructure::standard(4).unwrap();
        let samples: Vec<_> = [4u64, 16, 64].iter().map(|&k| tilted(k, (k as f64).powf(-0.2))).collect();
        assert!(!asymptotic_holomorphicity_rate(&samples, &j).unwrap().passes);
        assert!(asymptotic_holomorphicity_rate(&samples[..2], &j).is_err());
        let mut rev = samples.clone();
        rev.reverse();
        assert!(asymptotic_holomorphicity_rate(&rev, &j).is_err());
    }
}
