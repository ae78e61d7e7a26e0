use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::TrialRecord;
use crate::angles::{
    angle_between_vectors, bridge_angle_bound, is_transversal, max_angle, min_angle, min_angle_perp,
    transversal_decomposition, Subspace, DEFAULT_TRANSVERSALITY_TOL,
};
use crate::random;
use crate::reference;

/// Lower bound on `∠_m(U, V)` for the stability suite.
pub const GEOMETRIC_EPSILON: f64 = 0.3;
/// Perturbation size for the stability suite.
pub const GEOMETRIC_GAMMA: f64 = 0.01;
/// Agreement required between the closed forms and the grid oracle.
pub const ORACLE_TOL: f64 = 1e-3;

const TT: f64 = DEFAULT_TRANSVERSALITY_TOL;

fn columns(m: &DMatrix<f64>) -> Value {
    json!(m.column_iter().map(|c| c.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn frame(s: &Subspace) -> Value {
    columns(s.frame())
}

fn vector(v: &DVector<f64>) -> Value {
    json!(v.iter().copied().collect::<Vec<_>>())
}

fn subspace(rng: &mut ChaCha8Rng, n: usize) -> Subspace {
    let d = rng.random_range(1..=n);
    random::subspace(rng, n, d)
}

fn ma(u: &Subspace, v: &Subspace) -> f64 {
    max_angle(u, v).expect("same ambient").value()
}

fn mi(u: &Subspace, v: &Subspace) -> f64 {
    min_angle(u, v, TT).expect("same ambient").value()
}

/// `U' = span(A + XΘ)` with `X` a frame of `U^⊥` and `σ_max(Θ) = tan(size·ρ)`,
/// `ρ` uniform in (0, 1), so that `∠_M(U, U') = size·ρ < size`.
fn perturb(rng: &mut ChaCha8Rng, u: &Subspace, size: f64) -> Subspace {
    let Some(perp) = u.complement() else {
        return u.clone();
    };
    let theta = random::gaussian_matrix(rng, perp.dim(), u.dim());
    let rho: f64 = rng.random_range(0.0..1.0);
    let top = crate::linalg::singular_values(&theta)[0];
    let theta = theta * ((size * rho).tan() / top);
    Subspace::from_columns(&(u.frame() + perp.frame() * theta)).expect("perturbation keeps full rank")
}

pub fn sub_add(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let (u, v, w) = (subspace(rng, n), subspace(rng, n), subspace(rng, n));
    let lhs = ma(&u, &w);
    let rhs = ma(&u, &v) + ma(&v, &w);
    TrialRecord {
        margin: rhs + tol - lhs,
        inputs: json!({"u": frame(&u), "v": frame(&v), "w": frame(&w)}),
        values: json!({"max_uw": lhs, "max_uv_plus_max_vw": rhs}),
        statistic: None,
    }
}

pub fn vari_min(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let (u, v, w) = (subspace(rng, n), subspace(rng, n), subspace(rng, n));
    let lhs = mi(&u, &v);
    let rhs = ma(&u, &w) + mi(&w, &v);
    TrialRecord {
        margin: rhs + tol - lhs,
        inputs: json!({"u": frame(&u), "v": frame(&v), "w": frame(&w)}),
        values: json!({"min_uv": lhs, "max_uw_plus_min_wv": rhs}),
        statistic: None,
    }
}

pub fn angle_perp(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let (u, v) = (subspace(rng, n), subspace(rng, n));
    let direct = mi(&u, &v);
    let dual = min_angle_perp(&u, &v).expect("same ambient").value();
    TrialRecord {
        margin: tol - (direct - dual).abs(),
        inputs: json!({"u": frame(&u), "v": frame(&v)}),
        values: json!({"min_angle": direct, "perp_route": dual}),
        statistic: None,
    }
}

pub fn vari_min_cor(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let (u, v) = (subspace(rng, n), subspace(rng, n));
    let size = rng.random_range(0.0..0.2);
    let u2 = perturb(rng, &u, size);
    let eps = mi(&u, &v);
    let delta = ma(&u, &u2);
    let lhs = mi(&u2, &v);
    TrialRecord {
        margin: lhs - (eps - delta) + tol,
        inputs: json!({"u": frame(&u), "u_prime": frame(&u2), "v": frame(&v)}),
        values: json!({"epsilon": eps, "delta": delta, "min_u_prime_v": lhs}),
        statistic: None,
    }
}

pub fn bridge(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = 6;
    let q = rng.random_range(1..=n);
    let p = rng.random_range(n - q..=n).max(1);
    let u = random::subspace(rng, n, p);
    let v = random::subspace(rng, n, q);
    let b = bridge_angle_bound(&u, &v).expect("same ambient");
    let margin = if b.theta_norm.is_finite() {
        b.observed.value() - b.angle_lower_bound.value() + tol
    } else {
        tol
    };
    TrialRecord {
        margin,
        inputs: json!({"u": frame(&u), "v": frame(&v)}),
        values: json!({
            "theta_norm": b.theta_norm.is_finite().then_some(b.theta_norm),
            "bound": b.angle_lower_bound.value(),
            "observed": b.observed.value(),
        }),
        statistic: None,
    }
}

pub fn symmetry(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let d = rng.random_range(1..=n);
    let (u, v) = (random::subspace(rng, n, d), random::subspace(rng, n, d));
    let (a, b) = (ma(&u, &v), ma(&v, &u));
    TrialRecord {
        margin: tol - (a - b).abs(),
        inputs: json!({"u": frame(&u), "v": frame(&v)}),
        values: json!({"max_uv": a, "max_vu": b}),
        statistic: None,
    }
}

pub fn triangle(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let mut draw = || DVector::from_column_slice(random::gaussian_matrix(rng, n, 1).as_slice());
    let (u, v, w) = (draw(), draw(), draw());
    let a = |x: &DVector<f64>, y: &DVector<f64>| angle_between_vectors(x, y).expect("nonzero").value();
    let lhs = a(&u, &w);
    let rhs = a(&u, &v) + a(&v, &w);
    TrialRecord {
        margin: rhs + tol - lhs,
        inputs: json!({"u": vector(&u), "v": vector(&v), "w": vector(&w)}),
        values: json!({"uw": lhs, "uv_plus_vw": rhs}),
        statistic: None,
    }
}

pub fn orthogonal_invariance(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(2..=8);
    let (u, v) = (subspace(rng, n), subspace(rng, n));
    let q = random::orthogonal(rng, n);
    let (qu, qv) = (u.transformed(&q).expect("invertible"), v.transformed(&q).expect("invertible"));
    let pairs = [
        (ma(&u, &v), ma(&qu, &qv)),
        (ma(&v, &u), ma(&qv, &qu)),
        (mi(&u, &v), mi(&qu, &qv)),
        (
            min_angle_perp(&u, &v).expect("same ambient").value(),
            min_angle_perp(&qu, &qv).expect("same ambient").value(),
        ),
    ];
    let err = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    TrialRecord {
        margin: tol - err,
        inputs: json!({"u": frame(&u), "v": frame(&v), "q": columns(&q)}),
        values: json!({"pairs": pairs, "max_error": err}),
        statistic: None,
    }
}

pub fn geometric(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let n = rng.random_range(3..=8);
    let m = rng.random_range(1..n);
    let r = rng.random_range((n - m).max(1)..n);
    let (u, v) = loop {
        let u = random::subspace(rng, n, m);
        let v = random::subspace(rng, n, r);
        if mi(&u, &v) > GEOMETRIC_EPSILON {
            break (u, v);
        }
    };
    let u2 = perturb(rng, &u, GEOMETRIC_GAMMA);
    let v2 = perturb(rng, &v, GEOMETRIC_GAMMA);
    let transversal = is_transversal(&u2, &v2, TT).expect("same ambient");
    let (w, _, _) = transversal_decomposition(&u, &v);
    let (w2, _, _) = transversal_decomposition(&u2, &v2);
    let ratio = match (&w, &w2) {
        (Some(a), Some(b)) => ma(a, b) / GEOMETRIC_GAMMA,
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    let min_perturbed = mi(&u2, &v2);
    let margin = if transversal && ratio.is_finite() {
        min_perturbed - tol
    } else {
        -1.0
    };
    TrialRecord {
        margin,
        inputs: json!({"u": frame(&u), "v": frame(&v), "u_prime": frame(&u2), "v_prime": frame(&v2)}),
        values: json!({
            "min_uv": mi(&u, &v),
            "max_u_u_prime": ma(&u, &u2),
            "max_v_v_prime": ma(&v, &v2),
            "min_perturbed": min_perturbed,
            "transversal": transversal,
            "ratio": ratio.is_finite().then_some(ratio),
        }),
        statistic: Some(ratio),
    }
}

fn oracle_pair(rng: &mut ChaCha8Rng) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = rng.random_range(2..=4);
    let p = rng.random_range(1..=2.min(n));
    let q = rng.random_range(1..=2.min(n));
    (random::gaussian_matrix(rng, n, p), random::gaussian_matrix(rng, n, q))
}

pub fn oracle_max_angle(rng: &mut ChaCha8Rng) -> TrialRecord {
    let (a, b) = oracle_pair(rng);
    let fast = ma(&Subspace::from_columns(&a).unwrap(), &Subspace::from_columns(&b).unwrap());
    let slow = reference::grid_max_angle(&a, &b);
    TrialRecord {
        margin: ORACLE_TOL - (fast - slow).abs(),
        inputs: json!({"a": columns(&a), "b": columns(&b)}),
        values: json!({"max_angle": fast, "oracle": slow}),
        statistic: None,
    }
}

pub fn oracle_min_angle(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let (a, b) = oracle_pair(rng);
    let fast = mi(&Subspace::from_columns(&a).unwrap(), &Subspace::from_columns(&b).unwrap());
    let slow = reference::grid_min_angle(&a, &b, tol);
    TrialRecord {
        margin: ORACLE_TOL - (fast - slow).abs(),
        inputs: json!({"a": columns(&a), "b": columns(&b)}),
        values: json!({"min_angle": fast, "oracle": slow}),
        statistic: None,
    }
}
