use std::thread;

use num::BigRational;
use serde::Serialize;

use super::bundle::BundleSpec;
use super::invariants::{auroux_invariants, harris_tu_n1, harris_tu_n11_n2, DeterminantalProblem, InvariantReport};
use crate::error::{domain, Result};

/// The two example families: `r = 1`, `r_e = 2`, and `r_f = n` (curves) or
/// `r_f = n − 1` (surfaces).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExampleFamily {
    #[serde(rename = "example1")]
    Curves,
    #[serde(rename = "example2")]
    Surfaces,
}

impl ExampleFamily {
    pub fn from_index(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Self::Curves),
            2 => Ok(Self::Surfaces),
            _ => domain(format!("unknown example family {which}")),
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Self::Curves => 2,
            Self::Surfaces => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Curves => "example1",
            Self::Surfaces => "example2",
        }
    }

    pub fn problem(self, n: usize) -> Result<DeterminantalProblem> {
        if n < self.min_n() {
            return domain(format!("{} needs n ≥ {}", self.label(), self.min_n()));
        }
        match self {
            Self::Curves => DeterminantalProblem::trivial(n, 2, n, 1),
            Self::Surfaces => DeterminantalProblem::trivial(n, 2, n - 1, 1),
        }
    }

    /// Rank of the bundle whose zero sets have the same dimension.
    fn comparison_rank(self, n: usize) -> usize {
        match self {
            Self::Curves => n - 1,
            Self::Surfaces => n - 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleRow {
    pub n: usize,
    pub family: ExampleFamily,
    pub determinantal: InvariantReport,
    pub zero_locus: InvariantReport,
    /// The determinantal loci differ from the zero-locus family: for curves,
    /// no pair of twists matches both volume and `n₁` at leading order; for
    /// surfaces, the volume-normalized `(n₁₁, n₂)` differ.
    pub distinct: bool,
    /// For curves, whether the leading-order matching equation has a solution.
    pub cross_k_match: Option<bool>,
}

impl ExampleRow {
    pub fn compute(family: ExampleFamily, n: usize) -> Result<Self> {
        let p = family.problem(n)?;
        let determinantal = match family {
            ExampleFamily::Curves => harris_tu_n1(&p)?,
            ExampleFamily::Surfaces => harris_tu_n11_n2(&p)?,
        };
        let zero_locus = auroux_invariants(p.tangent(), &BundleSpec::trivial(family.comparison_rank(n), n)?)?;
        let (distinct, cross_k_match) = match family {
            ExampleFamily::Curves => {
                let m = cross_k_matches(&determinantal, &zero_locus);
                (!m, Some(m))
            }
            ExampleFamily::Surfaces => {
                let d = (determinantal.n11_over_vol(), determinantal.n2_over_vol());
                let z = (zero_locus.n11_over_vol(), zero_locus.n2_over_vol());
                (d != z, None)
            }
        };
        Ok(ExampleRow {
            n,
            family,
            determinantal,
            zero_locus,
            distinct,
            cross_k_match,
        })
    }

    pub const CSV_HEADER: [&'static str; 20] = [
        "n",
        "case",
        "vol_lead",
        "n1_lead",
        "n11_lead",
        "n2_lead",
        "ratio_n1_vol",
        "ratio_n11_vol",
        "ratio_n2_vol",
        "ratio_n2_n11",
        "auroux_vol_lead",
        "auroux_n1_lead",
        "auroux_n11_lead",
        "auroux_n2_lead",
        "auroux_ratio_n1_vol",
        "auroux_ratio_n11_vol",
        "auroux_ratio_n2_vol",
        "auroux_ratio_n2_n11",
        "distinct_flag",
        "cross_k_match",
    ];

    /// One CSV record matching [`Self::CSV_HEADER`]; rationals as `p/q`,
    /// undefined cells empty.
    pub fn csv_record(&self) -> Vec<String> {
        fn cell(q: Option<BigRational>) -> String {
            q.map(|q| q.to_string()).unwrap_or_default()
        }
        fn report(r: &InvariantReport) -> Vec<String> {
            vec![
                r.vol.limit().to_string(),
                cell(r.n1.as_ref().map(|v| v.limit())),
                cell(r.n11.as_ref().map(|v| v.limit())),
                cell(r.n2.as_ref().map(|v| v.limit())),
                cell(r.n1_over_vol()),
                cell(r.n11_over_vol()),
                cell(r.n2_over_vol()),
                cell(r.n2_over_n11()),
            ]
        }
        let mut out = vec![self.n.to_string(), self.family.label().to_string()];
        out.extend(report(&self.determinantal));
        out.extend(report(&self.zero_locus));
        out.push(self.distinct.to_string());
        out.push(self.cross_k_match.map(|b| b.to_string()).unwrap_or_default());
        out
    }
}

fn cross_k_matches(det: &InvariantReport, zero: &InvariantReport) -> bool {
    // Equal classes force k₂ = vol·k₁ at leading order, so equal n₁ needs
    // (n₁/vol)(Z)·vol(D) = (n₁/vol)(D).
    match (zero.n1_over_vol(), det.n1_over_vol()) {
        (Some(z), Some(d)) => z * det.vol.limit() == d,
        _ => false,
    }
}

/// Rows for `n_min..=n_max`, one worker per `n`.
pub fn example_tables(family: ExampleFamily, n_min: usize, n_max: usize) -> Result<Vec<ExampleRow>> {
    if n_min < family.min_n() {
        return domain(format!("{} needs n ≥ {}", family.label(), family.min_n()));
    }
    if n_max < n_min {
        return domain(format!("empty range {n_min}..={n_max}"));
    }
    thread::scope(|s| {
        let handles: Vec<_> = (n_min..=n_max)
            .map(|n| s.spawn(move || ExampleRow::compute(family, n)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("example worker panicked"))
            .collect()
    })
}

/// Whether a curve-family locus can match a zero-locus curve at leading
/// order for some pair of twists.
pub fn cross_k_isotopy_check(which: u8, n: usize) -> Result<bool> {
    if which != 1 {
        return domain("the twist-matching check applies to the curve family only");
    }
    let row = ExampleRow::compute(ExampleFamily::Curves, n)?;
    Ok(row.cross_k_match == Some(true))
}

#[cfg(test)]
mod tests {
    use super::super::poly::{int, rat};
    use super::*;

    #[test]
    fn curves_at_three() {
        let row = ExampleRow::compute(ExampleFamily::Curves, 3).unwrap();
        assert_eq!(row.determinantal.vol.limit(), int(12));
        assert_eq!(row.determinantal.n1_over_vol(), Some(rat(-20, 3)));
        assert_eq!(row.zero_locus.n1_over_vol(), Some(int(-2)));
        assert!(row.distinct);
        assert_eq!(row.cross_k_match, Some(false));
    }

    #[test]
    fn curves_at_two_coincide() {
        let row = ExampleRow::compute(ExampleFamily::Curves, 2).unwrap();
        assert_eq!(row.cross_k_match, Some(true));
        assert!(!row.distinct);
    }

    #[test]
    fn surfaces_at_three() {
        let row = ExampleRow::compute(ExampleFamily::Surfaces, 3).unwrap();
        let d = &row.determinantal;
        assert_eq!(d.vol.limit(), int(4));
        assert_eq!(d.n11.as_ref().unwrap().limit(), int(64));
        assert_eq!(d.n2.as_ref().unwrap().limit(), int(64));
        let z = &row.zero_locus;
        assert_eq!(z.vol.limit(), int(1));
        assert_eq!(z.n11.as_ref().unwrap().limit(), int(1));
        assert_eq!(z.n2.as_ref().unwrap().limit(), int(1));
        assert_eq!(d.n2_over_n11(), z.n2_over_n11());
        assert!(row.distinct);
        assert_eq!(row.csv_record().len(), ExampleRow::CSV_HEADER.len());
    }

    #[test]
    fn matching_only_at_two() {
        assert!(cross_k_isotopy_check(1, 2).unwrap());
        for n in 3..=10 {
            assert!(!cross_k_isotopy_check(1, n).unwrap());
        }
        assert!(cross_k_isotopy_check(2, 3).is_err());
    }

    #[test]
    fn table_ranges() {
        let rows = example_tables(ExampleFamily::Curves, 2, 5).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        assert!(example_tables(ExampleFamily::Surfaces, 2, 4).is_err());
        assert!(example_tables(ExampleFamily::Curves, 5, 4).is_err());
    }
}
