use serde::Deserialize;

use super::bundle::BundleSpec;
use super::invariants::DeterminantalProblem;
use crate::error::{Error, Result};
use crate::grassmann::JsonScalar;

/// `{"n", "r_e", "r_f", "r", "cTM", "cE", "cF"}`. Each class list holds
/// the multiples of `h^i` for `c_1, c_2, …` in order; omitted lists mean
/// trivial bundles.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    pub n: usize,
    pub r_e: usize,
    pub r_f: usize,
    pub r: usize,
    #[serde(rename = "cTM", default)]
    pub c_tm: Vec<JsonScalar>,
    #[serde(rename = "cE", default)]
    pub c_e: Vec<JsonScalar>,
    #[serde(rename = "cF", default)]
    pub c_f: Vec<JsonScalar>,
}

fn bundle(name: &str, rank: usize, n: usize, values: &[JsonScalar]) -> Result<BundleSpec> {
    let values = values.iter().map(JsonScalar::to_rational).collect::<Result<Vec<_>>>()?;
    BundleSpec::from_rationals(rank, n, &values).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

impl TryFrom<ProblemJson> for DeterminantalProblem {
    type Error = Error;

    fn try_from(j: ProblemJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        let tm = bundle("cTM", j.n, j.n, &j.c_tm)?;
        let e = bundle("cE", j.r_e, j.n, &j.c_e)?;
        let f = bundle("cF", j.r_f, j.n, &j.c_f)?;
        DeterminantalProblem::new(j.r, tm, e, f)
    }
}

impl std::str::FromStr for DeterminantalProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let j: ProblemJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.try_into()
    }
}
