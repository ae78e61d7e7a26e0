use num::{BigInt, BigRational, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::TrialRecord;
use crate::chern::{
    binomial, difference_chern, dual_chern, twist_by_k, BundleSpec, DeterminantalProblem, QPoly, VolumeMultiple,
};
use crate::reference::{naive_harris_tu, naive_leading_difference, NaiveProblem};

fn verdict(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        -1.0
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.random_range(-5i64..=5)),
        BigInt::from(rng.random_range(1i64..=3)),
    )
}

fn classes(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<BigRational> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| small_rational(rng)).collect()
}

fn texts(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn random_bundle(rng: &mut ChaCha8Rng, n: usize) -> (BundleSpec, serde_json::Value) {
    let rank = rng.random_range(1..=4);
    let c = classes(rng, rank.min(n));
    let twist = rng.random_range(-1i64..=1);
    let b = BundleSpec::from_rationals(rank, n, &c).expect("valid classes");
    let b = twist_by_k(&b, twist).expect("valid twist");
    (b, json!({"rank": rank, "classes": texts(&c), "twist": twist}))
}

/// Leading `k^p` coefficient of `c_p(F⊗L^k − E⊗L^{−k})` against the
/// closed-form sum and an independent power-series expansion.
pub fn cp_leading(rng: &mut ChaCha8Rng) -> TrialRecord {
    let n = rng.random_range(1..=8);
    let p = rng.random_range(0..=n);
    let r_e = rng.random_range(1..=6);
    let r_f = rng.random_range(1..=6);
    let (lead, closed, naive) = cp_leading_values(n, p, r_e, r_f);
    TrialRecord {
        margin: verdict(lead == closed && closed == naive),
        inputs: json!({"n": n, "p": p, "r_e": r_e, "r_f": r_f}),
        values: json!({"engine": lead.to_string(), "closed_form": closed.to_string(), "series": naive.to_string()}),
        statistic: None,
    }
}

/// `(engine, closed form, series)` leading coefficients; shared with the
/// exhaustive acceptance check.
pub fn cp_leading_values(n: usize, p: usize, r_e: usize, r_f: usize) -> (BigRational, BigRational, BigRational) {
    let e = twist_by_k(&BundleSpec::trivial(r_e, n).expect("rank ≥ 1"), -1).expect("twist");
    let f = twist_by_k(&BundleSpec::trivial(r_f, n).expect("rank ≥ 1"), 1).expect("twist");
    let c = difference_chern(&f, &e).expect("same truncation");
    let part = c.part(p);
    let lead = if part.degree().is_some_and(|d| d > p) {
        // A term above k^p would contradict the degree count; make it visible.
        BigRational::from_integer(BigInt::from(-1_000_000))
    } else {
        part.coeff(p)
    };
    let closed: BigInt = (0..=r_f.min(p))
        .map(|i| binomial(r_f, i) * binomial(r_e + p - i - 1, p - i))
        .sum();
    (
        lead,
        BigRational::from_integer(closed),
        BigRational::from_integer(naive_leading_difference(r_e, r_f, p)),
    )
}

pub fn whitney(rng: &mut ChaCha8Rng) -> TrialRecord {
    let n = rng.random_range(1..=6);
    let (e, ej) = random_bundle(rng, n);
    let (f, fj) = random_bundle(rng, n);
    let c = difference_chern(&f, &e).expect("same truncation");
    let ok = &c * e.total() == *f.total();
    TrialRecord {
        margin: verdict(ok),
        inputs: json!({"n": n, "e": ej, "f": fj}),
        values: json!({"difference": c.to_string()}),
        statistic: None,
    }
}

pub fn duality(rng: &mut ChaCha8Rng) -> TrialRecord {
    let n = rng.random_range(1..=6);
    let (b, bj) = random_bundle(rng, n);
    let ok = dual_chern(&dual_chern(&b)) == b;
    TrialRecord {
        margin: verdict(ok),
        inputs: json!({"n": n, "bundle": bj}),
        values: json!({"dual": dual_chern(&b).total().to_string()}),
        statistic: None,
    }
}

fn padded(v: &QPoly, len: usize) -> Vec<BigRational> {
    (0..len).map(|i| v.coeff(i)).collect()
}

fn same(engine: Option<&VolumeMultiple>, naive: Option<&Vec<BigRational>>, len: usize) -> bool {
    match (engine, naive) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            let mut b = b.clone();
            b.resize(len, BigRational::zero());
            padded(a.raw(), len) == b
        }
        _ => false,
    }
}

/// Random small problem of locus dimension 1 or 2, evaluated by the
/// engine and by the naive table expansion.
pub fn dual_engine(rng: &mut ChaCha8Rng) -> TrialRecord {
    let (r, a, b, dim) = loop {
        let a = rng.random_range(1..=3usize);
        let b = rng.random_range(1..=3usize);
        if a * b <= 5 {
            break (rng.random_range(0..=2usize), a, b, rng.random_range(1..=2usize));
        }
    };
    let (r_e, r_f) = (r + a, r + b);
    let n = a * b + dim;
    let naive = NaiveProblem {
        n,
        r_e,
        r_f,
        r,
        c_tm: classes(rng, n.min(3)),
        c_e: classes(rng, r_e.min(3).min(n)),
        c_f: classes(rng, r_f.min(3).min(n)),
    };
    let problem = DeterminantalProblem::new(
        r,
        BundleSpec::from_rationals(n, n, &naive.c_tm).expect("valid"),
        BundleSpec::from_rationals(r_e, n, &naive.c_e).expect("valid"),
        BundleSpec::from_rationals(r_f, n, &naive.c_f).expect("valid"),
    )
    .expect("valid problem");
    let engine = problem.solve();
    let slow = naive_harris_tu(&naive);
    let len = n + 1;
    let ok = same(Some(&engine.vol), Some(&slow.vol), len)
        && same(engine.n1.as_ref(), slow.n1.as_ref(), len)
        && same(engine.n11.as_ref(), slow.n11.as_ref(), len)
        && same(engine.n2.as_ref(), slow.n2.as_ref(), len);
    TrialRecord {
        margin: verdict(ok),
        inputs: json!({
            "n": n, "r_e": r_e, "r_f": r_f, "r": r,
            "cTM": texts(&naive.c_tm), "cE": texts(&naive.c_e), "cF": texts(&naive.c_f),
        }),
        values: json!({"engine": engine}),
        statistic: None,
    }
}
