//! The ten end-to-end acceptance checks.
//!
//! Criteria 1 to 4 are exact rational comparisons against closed forms.
//! Criteria 5 to 9 run property suites at fixed trial counts and require
//! zero failures. Criterion 10 compares the numerical Jacobian rank of
//! `φ ↦ ⋀ⁿφ` with `m − n + 1`.

use std::fmt;
use std::time::Instant;

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::chern::{ExampleFamily, ExampleRow};
use crate::grassmann::{rank_variety_tangent_rank, MorphismSample};
use crate::random::{self, DEFAULT_SEED};
use crate::suites::{cp_leading_values, run_suite, Suite, SuiteConfig, RANK_VARIETY_SHAPES};

pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} criterion {}: {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub jobs: usize,
    pub timestamps: bool,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: DEFAULT_SEED,
            jobs: 1,
            timestamps: true,
        }
    }
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "example 1 invariants",
        2 => "example 2 invariants",
        3 => "cross-k matching",
        4 => "leading twisted Chern coefficients",
        5 => "angle inequalities",
        6 => "geometric stability",
        7 => "grid oracle agreement",
        8 => "grassmannian identities",
        9 => "curvature signs",
        10 => "rank variety tangent dimension",
        _ => "unknown",
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow2(e: usize) -> i64 {
    1i64 << e
}

/// Collects mismatches as `what (n=..): got .., want ..` strings.
#[derive(Default)]
struct Mismatches(Vec<String>);

impl Mismatches {
    fn check<T: PartialEq + fmt::Display>(&mut self, what: &str, n: usize, got: Option<T>, want: T) {
        match got {
            Some(g) if g == want => {}
            Some(g) => self.0.push(format!("{what} (n={n}): got {g}, want {want}")),
            None => self.0.push(format!("{what} (n={n}): missing, want {want}")),
        }
    }

    fn flag(&mut self, what: &str, n: usize, ok: bool) {
        if !ok {
            self.0.push(format!("{what} (n={n})"));
        }
    }

    fn verdict(self, summary: String) -> (bool, String) {
        match self.0.first() {
            None => (true, summary),
            Some(first) => (false, format!("{} mismatches; first: {first}", self.0.len())),
        }
    }
}

fn example_one() -> (bool, String) {
    let mut bad = Mismatches::default();
    for n in 2..=10 {
        let row = match ExampleRow::compute(ExampleFamily::Curves, n) {
            Ok(r) => r,
            Err(e) => return (false, format!("n={n}: {e}")),
        };
        let ni = n as i64;
        let d = &row.determinantal;
        bad.check("vol", n, Some(d.vol.limit()), int(ni * pow2(n - 1)));
        bad.check("n1/vol", n, d.n1_over_vol(), int(-2 - 2 * ni) + BigRational::new(4.into(), ni.into()));
        bad.check("zero-locus n1/vol", n, row.zero_locus.n1_over_vol(), int(1 - ni));
    }
    bad.verdict("n = 2..10 exact".into())
}

fn example_two() -> (bool, String) {
    let mut bad = Mismatches::default();
    for n in 3..=10 {
        let row = match ExampleRow::compute(ExampleFamily::Surfaces, n) {
            Ok(r) => r,
            Err(e) => return (false, format!("n={n}: {e}")),
        };
        let ni = n as i64;
        let scale = pow2(n - 2);
        let d = &row.determinantal;
        let z = &row.zero_locus;
        bad.check("vol", n, Some(d.vol.limit()), int((ni - 1) * scale));
        bad.check("n11", n, d.n11.as_ref().map(|v| v.limit()), int(4 * (ni - 1) * (ni * ni - 5) * scale));
        bad.check("n2", n, d.n2.as_ref().map(|v| v.limit()), int(2 * (ni * ni + ni - 4) * (ni - 1) * scale));
        bad.check(
            "n2/n11",
            n,
            d.n2_over_n11(),
            BigRational::new((ni * ni + ni - 4).into(), (2 * (ni * ni - 5)).into()),
        );
        bad.check("zero-locus n11/vol", n, z.n11_over_vol(), int((ni - 2) * (ni - 2)));
        bad.check(
            "zero-locus n2/vol",
            n,
            z.n2_over_vol(),
            BigRational::new(((ni - 1) * (ni - 2)).into(), 2.into()),
        );
        bad.check(
            "zero-locus n2/n11",
            n,
            z.n2_over_n11(),
            BigRational::new((ni - 1).into(), (2 * (ni - 2)).into()),
        );
        bad.flag("distinct flag", n, row.distinct);
    }
    bad.verdict("n = 3..10 exact, distinct for every n".into())
}

fn cross_k() -> (bool, String) {
    let mut bad = Mismatches::default();
    let mut holds = Vec::new();
    for n in 2..=10usize {
        let ni = n as i64;
        let lhs = int((1 - ni) * ni * pow2(n - 1));
        let rhs = int(-2 - 2 * ni) + BigRational::new(4.into(), ni.into());
        let exact = lhs == rhs;
        let engine = ExampleRow::compute(ExampleFamily::Curves, n).ok().and_then(|r| r.cross_k_match);
        bad.check("engine flag", n, engine, exact);
        bad.flag("holds iff n = 2", n, exact == (n == 2));
        if exact {
            holds.push(n);
        }
    }
    bad.verdict(format!("holds for n in {holds:?} over 2..10"))
}

fn cp_leading() -> (bool, String) {
    let mut bad = Mismatches::default();
    let mut cases = 0;
    for n in 1..=8 {
        for p in 0..=n {
            for r_e in 1..=6 {
                for r_f in 1..=6 {
                    cases += 1;
                    let (engine, closed, series) = cp_leading_values(n, p, r_e, r_f);
                    if engine != closed || series != closed {
                        bad.0.push(format!(
                            "n={n} p={p} r_e={r_e} r_f={r_f}: engine {engine}, series {series}, want {closed}"
                        ));
                    }
                }
            }
        }
    }
    bad.verdict(format!("{cases} cases exact"))
}

fn suites(config: &AcceptanceConfig, plan: &[(Suite, u64)]) -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for &(suite, trials) in plan {
        let sc = SuiteConfig {
            seed: config.seed,
            trials,
            jobs: config.jobs,
            timestamps: false,
            ..SuiteConfig::default()
        };
        match run_suite(suite, &sc) {
            Ok(report) => {
                ok &= report.passed();
                let mut part = format!("{suite} {}/{} failed", report.failures, report.trials);
                if let Some(s) = report.statistic {
                    part.push_str(&format!(", max statistic {s:.4}"));
                }
                parts.push(part);
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{suite}: {e}"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn geometric(config: &AcceptanceConfig) -> (bool, String) {
    let sc = SuiteConfig {
        seed: config.seed,
        trials: 10_000,
        jobs: config.jobs,
        timestamps: false,
        ..SuiteConfig::default()
    };
    match run_suite(Suite::Geometric, &sc) {
        Ok(r) => {
            let c = r.statistic.filter(|s| s.is_finite());
            let detail = match c {
                Some(c) => format!("{}/{} failed, max ∠_M(W,W')/γ = {c:.4}", r.failures, r.trials),
                None => format!("{}/{} failed, ratio not finite", r.failures, r.trials),
            };
            (r.passed() && c.is_some(), detail)
        }
        Err(e) => (false, e.to_string()),
    }
}

/// Per shape `(m, n)`, 100 samples on streams disjoint from the suite's,
/// each required to have tangent rank `m − n + 1`.
fn rank_variety(config: &AcceptanceConfig) -> (bool, String) {
    const SAMPLES: u64 = 100;
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, &(m, n)) in RANK_VARIETY_SHAPES.iter().enumerate() {
        let expected = m - n + 1;
        let mut observed = std::collections::BTreeMap::<usize, u64>::new();
        for i in 0..SAMPLES {
            let mut rng = random::stream(config.seed, (k as u64) << 32 | i);
            let phi = random::complex_gaussian(&mut rng, n, m);
            let rank = MorphismSample::new(phi).and_then(|s| rank_variety_tangent_rank(&s));
            match rank {
                Ok(r) => *observed.entry(r).or_default() += 1,
                Err(_) => *observed.entry(usize::MAX).or_default() += 1,
            }
        }
        let matched = observed.get(&expected).copied().unwrap_or(0);
        ok &= matched == SAMPLES;
        let seen: Vec<String> = observed
            .iter()
            .map(|(r, c)| if *r == usize::MAX { format!("error x{c}") } else { format!("{r} x{c}") })
            .collect();
        parts.push(format!("(m={m},n={n}) want {expected}, observed [{}]", seen.join(", ")));
    }
    (ok, parts.join("; "))
}

/// Runs one criterion; unknown ids fail.
pub fn run_criterion(id: u8, config: &AcceptanceConfig) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => example_one(),
        2 => example_two(),
        3 => cross_k(),
        4 => cp_leading(),
        5 => suites(
            config,
            &[
                (Suite::SubAdd, 10_000),
                (Suite::VariMin, 10_000),
                (Suite::AnglePerp, 10_000),
                (Suite::VariMinCor, 10_000),
                (Suite::Bridge, 10_000),
                (Suite::Symmetry, 10_000),
            ],
        ),
        6 => geometric(config),
        7 => suites(config, &[(Suite::OracleMaxAngle, 200), (Suite::OracleMinAngle, 200)]),
        8 => suites(
            config,
            &[
                (Suite::PlueckerRelations, 1_000),
                (Suite::CauchyBinet, 1_000),
                (Suite::ChartIsometry, 3),
                (Suite::FsTriangle, 1_000),
            ],
        ),
        // Shapes alternate by trial index, so 2000 trials give 1000 per shape.
        9 => suites(config, &[(Suite::CurvatureSign, 2_000)]),
        10 => rank_variety(config),
        _ => (false, format!("no criterion {id}")),
    };
    CriterionResult {
        id,
        name: name(id),
        passed,
        detail,
        duration_ms: config.timestamps.then(|| start.elapsed().as_millis() as u64),
    }
}

pub fn run_all(config: &AcceptanceConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&id| run_criterion(id, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_criteria_pass() {
        let config = AcceptanceConfig::default();
        for id in 1..=4 {
            let r = run_criterion(id, &config);
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(11, &AcceptanceConfig::default()).passed);
    }

    #[test]
    fn display_line() {
        let r = CriterionResult {
            id: 3,
            name: name(3),
            passed: true,
            detail: "ok".into(),
            duration_ms: None,
        };
        assert_eq!(r.to_string(), "PASS criterion 3: cross-k matching: ok");
    }
}
