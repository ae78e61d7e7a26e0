//! Seeded randomized property suites.
//!
//! Trial `i` of a run with seed `s` draws everything from
//! [`random::stream`]`(s, i)`, so any trial can be recomputed alone. A run
//! may be split across threads; the partial tallies merge by summing counts,
//! taking the least margin and keeping the counterexample with the smallest
//! trial index, which makes the report independent of the split.

mod angles;
mod chern;
mod grassmann;

use std::fmt;
use std::str::FromStr;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::random::{self, DEFAULT_SEED};

pub use angles::{GEOMETRIC_EPSILON, GEOMETRIC_GAMMA, ORACLE_TOL};
pub(crate) use chern::cp_leading_values;
pub use grassmann::{CHART_SHAPES, CURVATURE_SHAPES, RANK_VARIETY_SHAPES};

/// Version of the counterexample blob layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    SubAdd,
    VariMin,
    AnglePerp,
    VariMinCor,
    Bridge,
    Symmetry,
    Triangle,
    OrthogonalInvariance,
    Geometric,
    OracleMaxAngle,
    OracleMinAngle,
    PlueckerRelations,
    CauchyBinet,
    FsTriangle,
    ChartIsometry,
    CurvatureSign,
    RankVariety,
    CpLeading,
    Whitney,
    Duality,
    DualEngine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Angles,
    Grassmann,
    Chern,
}

impl Suite {
    pub const ALL: [Suite; 21] = [
        Suite::SubAdd,
        Suite::VariMin,
        Suite::AnglePerp,
        Suite::VariMinCor,
        Suite::Bridge,
        Suite::Symmetry,
        Suite::Triangle,
        Suite::OrthogonalInvariance,
        Suite::Geometric,
        Suite::OracleMaxAngle,
        Suite::OracleMinAngle,
        Suite::PlueckerRelations,
        Suite::CauchyBinet,
        Suite::FsTriangle,
        Suite::ChartIsometry,
        Suite::CurvatureSign,
        Suite::RankVariety,
        Suite::CpLeading,
        Suite::Whitney,
        Suite::Duality,
        Suite::DualEngine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubAdd => "sub_add",
            Suite::VariMin => "vari_min",
            Suite::AnglePerp => "angle_perp",
            Suite::VariMinCor => "vari_min_cor",
            Suite::Bridge => "bridge",
            Suite::Symmetry => "symmetry",
            Suite::Triangle => "triangle",
            Suite::OrthogonalInvariance => "orthogonal_invariance",
            Suite::Geometric => "geometric",
            Suite::OracleMaxAngle => "oracle_max_angle",
            Suite::OracleMinAngle => "oracle_min_angle",
            Suite::PlueckerRelations => "pluecker_relations",
            Suite::CauchyBinet => "cauchy_binet",
            Suite::FsTriangle => "fs_triangle",
            Suite::ChartIsometry => "chart_isometry",
            Suite::CurvatureSign => "curvature_sign",
            Suite::RankVariety => "rank_variety",
            Suite::CpLeading => "cp_leading",
            Suite::Whitney => "whitney",
            Suite::Duality => "duality",
            Suite::DualEngine => "dual_engine",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Suite::SubAdd
            | Suite::VariMin
            | Suite::AnglePerp
            | Suite::VariMinCor
            | Suite::Bridge
            | Suite::Symmetry
            | Suite::Triangle
            | Suite::OrthogonalInvariance
            | Suite::Geometric
            | Suite::OracleMaxAngle
            | Suite::OracleMinAngle => Family::Angles,
            Suite::PlueckerRelations
            | Suite::CauchyBinet
            | Suite::FsTriangle
            | Suite::ChartIsometry
            | Suite::CurvatureSign
            | Suite::RankVariety => Family::Grassmann,
            Suite::CpLeading | Suite::Whitney | Suite::Duality | Suite::DualEngine => Family::Chern,
        }
    }

    /// Trial count used by `verify` when none is given; expensive or
    /// exhaustive-in-spirit suites run fewer trials.
    pub fn default_trials(self) -> u64 {
        match self {
            Suite::OracleMaxAngle | Suite::OracleMinAngle => 200,
            Suite::PlueckerRelations | Suite::CauchyBinet | Suite::FsTriangle | Suite::CurvatureSign => 1000,
            Suite::ChartIsometry => 3,
            Suite::RankVariety => 400,
            Suite::CpLeading | Suite::Whitney | Suite::Duality => 500,
            Suite::DualEngine => 50,
            _ => 10_000,
        }
    }

    pub fn in_family(family: Family) -> impl Iterator<Item = Suite> {
        Suite::ALL.into_iter().filter(move |s| s.family() == family)
    }

    fn trial(self, rng: &mut rand_chacha::ChaCha8Rng, tol: f64, index: u64) -> TrialRecord {
        match self {
            Suite::SubAdd => angles::sub_add(rng, tol),
            Suite::VariMin => angles::vari_min(rng, tol),
            Suite::AnglePerp => angles::angle_perp(rng, tol),
            Suite::VariMinCor => angles::vari_min_cor(rng, tol),
            Suite::Bridge => angles::bridge(rng, tol),
            Suite::Symmetry => angles::symmetry(rng, tol),
            Suite::Triangle => angles::triangle(rng, tol),
            Suite::OrthogonalInvariance => angles::orthogonal_invariance(rng, tol),
            Suite::Geometric => angles::geometric(rng, tol),
            Suite::OracleMaxAngle => angles::oracle_max_angle(rng),
            Suite::OracleMinAngle => angles::oracle_min_angle(rng, tol),
            Suite::PlueckerRelations => grassmann::pluecker_relations(rng),
            Suite::CauchyBinet => grassmann::cauchy_binet(rng),
            Suite::FsTriangle => grassmann::fs_triangle(rng, tol),
            Suite::ChartIsometry => grassmann::chart_isometry(index),
            Suite::CurvatureSign => grassmann::curvature_sign(rng, index),
            Suite::RankVariety => grassmann::rank_variety(rng, index),
            Suite::CpLeading => chern::cp_leading(rng),
            Suite::Whitney => chern::whitney(rng),
            Suite::Duality => chern::duality(rng),
            Suite::DualEngine => chern::dual_engine(rng),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one trial. The trial passes iff `margin ≥ 0`; `margin` is
/// the slack of the checked inequality (tolerance included) or
/// `tol − error` for equalities.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub margin: f64,
    pub inputs: Value,
    pub values: Value,
    /// Suite-specific quantity maximized over the run (the empirical
    /// constant of the geometric suite).
    pub statistic: Option<f64>,
}

impl TrialRecord {
    fn passed(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Everything needed to recompute one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub schema_version: u32,
    pub suite: Suite,
    pub seed: u64,
    pub trial: u64,
    pub tol: f64,
    #[serde(default)]
    pub injected: bool,
    pub margin: Option<f64>,
    pub inputs: Value,
    pub values: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub worst_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    pub first_counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: u64,
    pub tol: f64,
    pub jobs: usize,
    /// Trial index forced to fail, for exercising the replay path.
    pub inject_failure: Option<u64>,
    pub timestamps: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            trials: 10_000,
            tol: 1e-9,
            jobs: 1,
            inject_failure: None,
            timestamps: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
struct Tally {
    trials: u64,
    failures: u64,
    worst_margin: Option<f64>,
    statistic: Option<f64>,
    first: Option<Counterexample>,
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.is_nan() || y.is_nan() { f64::NAN } else { x.min(y) }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        let first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if a.trial <= b.trial { a } else { b }),
            (a, b) => a.or(b),
        };
        Tally {
            trials: self.trials + other.trials,
            failures: self.failures + other.failures,
            worst_margin: min_opt(self.worst_margin, other.worst_margin),
            statistic: max_opt(self.statistic, other.statistic),
            first,
        }
    }
}

fn evaluate(suite: Suite, seed: u64, trial: u64, tol: f64, injected: bool) -> (TrialRecord, Counterexample) {
    let mut rng = random::stream(seed, trial);
    let mut record = suite.trial(&mut rng, tol, trial);
    if injected {
        record.margin = -1.0;
    }
    let blob = Counterexample {
        schema_version: SCHEMA_VERSION,
        suite,
        seed,
        trial,
        tol,
        injected,
        margin: Some(record.margin).filter(|m| m.is_finite()),
        inputs: record.inputs.clone(),
        values: record.values.clone(),
    };
    (record, blob)
}

fn run_range(suite: Suite, config: &SuiteConfig, range: std::ops::Range<u64>) -> Tally {
    let mut tally = Tally::default();
    for trial in range {
        let injected = config.inject_failure == Some(trial);
        let (record, blob) = evaluate(suite, config.seed, trial, config.tol, injected);
        tally.trials += 1;
        tally.worst_margin = min_opt(tally.worst_margin, Some(record.margin));
        tally.statistic = max_opt(tally.statistic, record.statistic);
        if !record.passed() {
            tally.failures += 1;
            if tally.first.is_none() {
                tally.first = Some(blob);
            }
        }
    }
    tally
}

/// Runs `config.trials` trials, split into `config.jobs` contiguous shards.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    if !(config.tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let start = Instant::now();
    let jobs = config.jobs.max(1) as u64;
    let n = config.trials;
    let chunk = n.div_ceil(jobs).max(1);
    let tally = if jobs == 1 || n < 2 {
        run_range(suite, config, 0..n)
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk as usize)
                .map(|lo| {
                    let hi = (lo + chunk).min(n);
                    s.spawn(move || run_range(suite, config, lo..hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("suite worker panicked"))
                .fold(Tally::default(), Tally::merge)
        })
    };
    Ok(SuiteReport {
        suite,
        seed: config.seed,
        trials: tally.trials,
        failures: tally.failures,
        worst_margin: tally.worst_margin.filter(|m| m.is_finite()),
        statistic: tally.statistic,
        first_counterexample: tally.first,
        duration_ms: config.timestamps.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Blob for one trial, whether it passes or not.
pub fn trial_blob(suite: Suite, seed: u64, trial: u64, tol: f64) -> Counterexample {
    evaluate(suite, seed, trial, tol, false).1
}

/// Recomputes the trial a blob describes. The recomputed inputs must equal
/// the recorded ones; a blob whose seed, trial or inputs were altered is
/// rejected.
pub fn replay(blob: &Counterexample) -> Result<SuiteReport> {
    if blob.schema_version != SCHEMA_VERSION {
        return Err(Error::Precondition(format!(
            "counterexample schema version {} (expected {SCHEMA_VERSION})",
            blob.schema_version
        )));
    }
    let (record, fresh) = evaluate(blob.suite, blob.seed, blob.trial, blob.tol, blob.injected);
    if fresh.inputs != blob.inputs {
        return Err(Error::Precondition(
            "recorded inputs do not match the trial generated from (seed, trial)".into(),
        ));
    }
    let failed = !record.passed();
    Ok(SuiteReport {
        suite: blob.suite,
        seed: blob.seed,
        trials: 1,
        failures: failed as u64,
        worst_margin: Some(record.margin).filter(|m| m.is_finite()),
        statistic: record.statistic,
        first_counterexample: failed.then_some(fresh),
        duration_ms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: u64, jobs: usize) -> SuiteConfig {
        SuiteConfig {
            trials,
            jobs,
            timestamps: false,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), Value::String(s.name().into()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for s in Suite::ALL {
            let r = run_suite(s, &cfg(3, 1)).unwrap();
            assert_eq!(r.failures, 0, "{s}: {:?}", r.first_counterexample);
        }
    }

    #[test]
    fn sharding_does_not_change_the_report() {
        let mut c = cfg(40, 1);
        c.inject_failure = Some(23);
        let one = run_suite(Suite::SubAdd, &c).unwrap();
        c.jobs = 3;
        let three = run_suite(Suite::SubAdd, &c).unwrap();
        assert_eq!(one, three);
        assert_eq!(one.failures, 1);
        assert_eq!(one.first_counterexample.as_ref().unwrap().trial, 23);
    }

    #[test]
    fn replay_reproduces_and_rejects() {
        let mut c = cfg(10, 2);
        c.inject_failure = Some(4);
        let report = run_suite(Suite::VariMin, &c).unwrap();
        let blob = report.first_counterexample.unwrap();
        let text = serde_json::to_string(&blob).unwrap();
        let parsed: Counterexample = serde_json::from_str(&text).unwrap();
        let again = replay(&parsed).unwrap();
        assert_eq!(again.failures, 1);
        assert_eq!(again.first_counterexample.unwrap(), blob);

        let mut altered = parsed.clone();
        altered.seed ^= 1;
        assert!(replay(&altered).is_err());
        let mut old = parsed;
        old.schema_version = 0;
        assert!(replay(&old).is_err());

        let passing = trial_blob(Suite::VariMin, 5, 2, 1e-9);
        assert_eq!(replay(&passing).unwrap().failures, 0);
    }
}
