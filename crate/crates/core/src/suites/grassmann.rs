use nalgebra::DMatrix;
use num::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::TrialRecord;
use crate::grassmann::{
    compound_matrix, curvature_sample, decomposable_cone_dim, exact_rank, fs_distance, pluecker_embed_exact,
    qc_is_zero, random_unit_tangent, rank_variety_tangent_rank, GrassmannPoint, MatrixJson, MorphismSample,
    RationalGrassmannPoint, QC,
};
use crate::random;

pub const CHART_ISOMETRY_TOL: f64 = 1e-6;
pub const CURVATURE_EIGEN_TOL: f64 = 1e-10;
pub const CHART_SHAPES: [(usize, usize); 3] = [(1, 2), (2, 4), (2, 5)];
pub const CURVATURE_SHAPES: [(usize, usize); 2] = [(2, 4), (2, 5)];
/// `(m, n)`: `φ` is `n × m`.
pub const RANK_VARIETY_SHAPES: [(usize, usize); 4] = [(2, 1), (3, 2), (4, 2), (4, 3)];

const ENTRY_BOUND: i64 = 3;

fn exact_product(a: &DMatrix<QC>, b: &DMatrix<QC>) -> DMatrix<QC> {
    DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        (0..a.ncols()).fold(QC::zero(), |acc, k| acc + a[(i, k)].clone() * b[(k, j)].clone())
    })
}

fn exact_matrix(m: &DMatrix<QC>) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_exact(m)).expect("serializable")
}

fn float_matrix(m: &DMatrix<crate::grassmann::C64>) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_float(m)).expect("serializable")
}

fn shape(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let r = rng.random_range(1..=3);
    (r, rng.random_range(r + 1..=6))
}

pub fn pluecker_relations(rng: &mut ChaCha8Rng) -> TrialRecord {
    let (r, n) = shape(rng);
    let m = loop {
        let m = random::integer_complex_matrix(rng, r, n, ENTRY_BOUND);
        if exact_rank(&m) == r {
            break m;
        }
    };
    let p = pluecker_embed_exact(&RationalGrassmannPoint::new(m.clone()).expect("full rank"));
    let residuals = p.relation_residuals();
    let bad = residuals.iter().filter(|x| !qc_is_zero(x)).count();
    TrialRecord {
        margin: 0.0 - bad as f64,
        inputs: json!({"point": exact_matrix(&m)}),
        values: json!({"relations": residuals.len(), "nonzero": bad}),
        statistic: None,
    }
}

pub fn cauchy_binet(rng: &mut ChaCha8Rng) -> TrialRecord {
    let p = rng.random_range(1..=4);
    let q = rng.random_range(1..=4);
    let s = rng.random_range(1..=4);
    let l = rng.random_range(1..=p.min(q).min(s));
    let a = random::integer_complex_matrix(rng, p, q, ENTRY_BOUND);
    let b = random::integer_complex_matrix(rng, q, s, ENTRY_BOUND);
    let lhs = compound_matrix(&exact_product(&a, &b), l).expect("order in range");
    let rhs = exact_product(
        &compound_matrix(&a, l).expect("order in range"),
        &compound_matrix(&b, l).expect("order in range"),
    );
    let bad = lhs.iter().zip(rhs.iter()).filter(|(x, y)| x != y).count();
    TrialRecord {
        margin: 0.0 - bad as f64,
        inputs: json!({"a": exact_matrix(&a), "b": exact_matrix(&b), "order": l}),
        values: json!({"mismatched_entries": bad}),
        statistic: None,
    }
}

pub fn fs_triangle(rng: &mut ChaCha8Rng, tol: f64) -> TrialRecord {
    let (r, n) = shape(rng);
    let mut point = || loop {
        if let Ok(p) = GrassmannPoint::new(random::complex_gaussian(rng, r, n)) {
            break p;
        }
    };
    let (a, b, c) = (point(), point(), point());
    let d = |x: &GrassmannPoint, y: &GrassmannPoint| fs_distance(x, y).expect("same Grassmannian");
    let lhs = d(&a, &c);
    let rhs = d(&a, &b) + d(&b, &c);
    TrialRecord {
        margin: rhs + tol - lhs,
        inputs: json!({"p": float_matrix(a.matrix()), "q": float_matrix(b.matrix()), "s": float_matrix(c.matrix())}),
        values: json!({"d_ps": lhs, "d_pq_plus_d_qs": rhs}),
        statistic: None,
    }
}

pub fn chart_isometry(index: u64) -> TrialRecord {
    let (r, n) = CHART_SHAPES[(index % CHART_SHAPES.len() as u64) as usize];
    let defect = crate::grassmann::chart_isometry_defect(r, n).expect("valid shape");
    TrialRecord {
        margin: CHART_ISOMETRY_TOL - defect,
        inputs: json!({"r": r, "n": n}),
        values: json!({"defect": defect}),
        statistic: None,
    }
}

pub fn curvature_sign(rng: &mut ChaCha8Rng, index: u64) -> TrialRecord {
    let (r, n) = CURVATURE_SHAPES[(index % CURVATURE_SHAPES.len() as u64) as usize];
    let u = random_unit_tangent(rng, r, n);
    let s = curvature_sample(&u);
    let top = s.spectrum.last().copied().unwrap_or(f64::NAN);
    TrialRecord {
        margin: (CURVATURE_EIGEN_TOL - top).min(-s.determinant_curvature),
        inputs: json!({"r": r, "n": n, "tangent": float_matrix(&u)}),
        values: json!({"spectrum": s.spectrum, "determinant_curvature": s.determinant_curvature}),
        statistic: None,
    }
}

pub fn rank_variety(rng: &mut ChaCha8Rng, index: u64) -> TrialRecord {
    let (m, n) = RANK_VARIETY_SHAPES[(index % RANK_VARIETY_SHAPES.len() as u64) as usize];
    let phi = random::complex_gaussian(rng, n, m);
    let rank = MorphismSample::new(phi.clone())
        .and_then(|s| rank_variety_tangent_rank(&s))
        .expect("gaussian samples have full rank");
    let expected = decomposable_cone_dim(m, n);
    TrialRecord {
        margin: 0.0 - rank.abs_diff(expected) as f64,
        inputs: json!({"m": m, "n": n, "phi": float_matrix(&phi)}),
        values: json!({"tangent_rank": rank, "cone_dim": expected}),
        statistic: None,
    }
}
