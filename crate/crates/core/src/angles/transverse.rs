use serde::Serialize;

use super::measure::{min_angle, DEFAULT_TRANSVERSALITY_TOL};
use super::subspace::{AngleRadians, Subspace};
use crate::error::{domain, Result};
use crate::linalg;

/// One point of an embedded submanifold near a target: its distance to the
/// target, the image tangent plane, and the plane of the distribution there.
#[derive(Clone, Debug)]
pub struct TransversalitySample {
    pub distance: f64,
    pub tangent_image: Subspace,
    pub distribution_plane: Subspace,
}

impl TransversalitySample {
    pub fn new(distance: f64, tangent_image: Subspace, distribution_plane: Subspace) -> Result<Self> {
        if !(distance >= 0.0) {
            return domain("distance must be nonnegative");
        }
        tangent_image.ensure_same_ambient(&distribution_plane)?;
        Ok(Self {
            distance,
            tangent_image,
            distribution_plane,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaCheck {
    pub transverse: bool,
    pub first_violation: Option<usize>,
}

/// Checks `d < σ ⇒ ∠_m(tangent, distribution) > σ − tol` on every sample.
pub fn check_sigma_transverse(
    samples: &[TransversalitySample],
    sigma: f64,
    tol: f64,
) -> Result<SigmaCheck> {
    if !(sigma > 0.0) {
        return domain("sigma must be positive");
    }
    for (i, s) in samples.iter().enumerate() {
        if s.distance >= sigma {
            continue;
        }
        let angle = min_angle(&s.tangent_image, &s.distribution_plane, DEFAULT_TRANSVERSALITY_TOL)?;
        if angle.value() <= sigma - tol {
            return Ok(SigmaCheck {
                transverse: false,
                first_violation: Some(i),
            });
        }
    }
    Ok(SigmaCheck {
        transverse: true,
        first_violation: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeBound {
    /// Operator norm of the minimal-norm right inverse of `h: U → V^⊥`;
    /// infinite when `h` is not onto.
    pub theta_norm: f64,
    /// `1/|θ|`, the lower bound the right inverse implies for `∠_m(U, V)`.
    pub angle_lower_bound: AngleRadians,
    pub observed: AngleRadians,
}

/// Right-inverse bound for the minimum angle.
///
/// `h` is the orthogonal projection of `U` onto `V^⊥`; in orthonormal
/// coordinates it is `CᵀA` with `C` a frame of `V^⊥`. When it is onto, its
/// pseudo-inverse is the right inverse of least norm, `|θ| = 1/σ_min(CᵀA)`.
/// When `V = ℝⁿ` the codomain is zero, `θ = 0`, and no bound is implied.
pub fn bridge_angle_bound(u: &Subspace, v: &Subspace) -> Result<BridgeBound> {
    u.ensure_same_ambient(v)?;
    let observed = min_angle(u, v, DEFAULT_TRANSVERSALITY_TOL)?;
    let Some(perp) = v.complement() else {
        return Ok(BridgeBound {
            theta_norm: 0.0,
            angle_lower_bound: AngleRadians::ZERO,
            observed,
        });
    };
    let h = perp.frame().transpose() * u.frame();
    let target = perp.dim();
    let sigma = linalg::singular_values(&h);
    let onto = sigma.len() >= target && sigma[target - 1] > DEFAULT_TRANSVERSALITY_TOL;
    if !onto {
        return Ok(BridgeBound {
            theta_norm: f64::INFINITY,
            angle_lower_bound: AngleRadians::ZERO,
            observed,
        });
    }
    let gamma = sigma[target - 1];
    Ok(BridgeBound {
        theta_norm: 1.0 / gamma,
        angle_lower_bound: AngleRadians::clamped(gamma),
        observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn vacuous_when_far() {
        let a = Subspace::coordinate(4, &[0, 1]).unwrap();
        let s = TransversalitySample::new(2.0, a.clone(), a).unwrap();
        let check = check_sigma_transverse(&[s], 1.0, 1e-9).unwrap();
        assert!(check.transverse);
    }

    #[test]
    fn orthogonal_planes_pass_equal_planes_fail() {
        let a = Subspace::coordinate(4, &[0, 1]).unwrap();
        let b = Subspace::coordinate(4, &[2, 3]).unwrap();
        let good = TransversalitySample::new(0.0, a.clone(), b).unwrap();
        assert!(check_sigma_transverse(&[good.clone()], 1.0, 1e-9).unwrap().transverse);
        let bad = TransversalitySample::new(0.0, a.clone(), a).unwrap();
        let check = check_sigma_transverse(&[bad.clone()], 0.1, 1e-9).unwrap();
        assert_eq!(check, SigmaCheck { transverse: false, first_violation: Some(0) });
        let check = check_sigma_transverse(&[good, bad], 0.1, 1e-9).unwrap();
        assert_eq!(check.first_violation, Some(1));
        assert!(check_sigma_transverse(&[], 0.0, 1e-9).is_err());
    }

    #[test]
    fn sample_ambient_dims_must_agree() {
        let a = Subspace::coordinate(4, &[0]).unwrap();
        let b = Subspace::coordinate(3, &[0]).unwrap();
        assert!(TransversalitySample::new(0.0, a, b).is_err());
    }

    #[test]
    fn bridge_on_orthogonal_complement() {
        let v = Subspace::coordinate(5, &[0, 1]).unwrap();
        let u = v.complement().unwrap();
        let b = bridge_angle_bound(&u, &v).unwrap();
        assert!((b.theta_norm - 1.0).abs() < 1e-12);
        assert!((b.angle_lower_bound.value() - 1.0).abs() < 1e-12);
        assert!((b.observed.value() - FRAC_PI_2).abs() < 1e-12);
        assert!(b.observed > b.angle_lower_bound);
    }

    #[test]
    fn bridge_without_right_inverse() {
        let v = Subspace::coordinate(4, &[0, 1]).unwrap();
        let b = bridge_angle_bound(&v, &v).unwrap();
        assert!(b.theta_norm.is_infinite());
        assert_eq!(b.angle_lower_bound.value(), 0.0);
        assert_eq!(b.observed.value(), 0.0);
    }
}
