use std::fs;
use std::io::Write;
use std::path::Path;

use detloci_core::acceptance::{self, AcceptanceConfig, CriterionResult};
use detloci_core::angles::{
    intersect, is_transversal, max_angle, min_angle, min_angle_perp, principal_angles, Subspace, SubspaceJson,
    DEFAULT_TRANSVERSALITY_TOL,
};
use detloci_core::chern::{example_tables, ExampleFamily, ExampleRow, ProblemJson};
use detloci_core::grassmann::{
    chart_psi0, compound_matrix, curvature_sample, fs_distance, pluecker_embed, pluecker_embed_exact, qc_is_zero,
    subsets, GrassmannPoint, MatrixJson, RationalGrassmannPoint,
};
use detloci_core::suites::{self, Family, Suite, SuiteConfig, SuiteReport};
use detloci_core::DeterminantalProblem;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{ChernAction, Cli, Command, Format, Global, GrassmannAction};

/// Exit code 2: bad usage or unreadable input.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

pub fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Angles { suite, input } => match input {
            Some(path) => angles_measure(g, &path),
            None => run_suites(g, &select(suite.as_deref(), Family::Angles)?),
        },
        Command::Grassmann { action } => grassmann(g, action),
        Command::Chern { action } => chern(g, action),
        Command::Verify => verify(g),
        Command::Replay { input } => replay(g, &input),
    }
}

fn select(name: Option<&str>, family: Family) -> Result<Vec<Suite>, UsageError> {
    match name {
        None => Ok(Suite::in_family(family).collect()),
        Some(n) => {
            let s: Suite = n.parse()?;
            if s.family() != family {
                return Err(UsageError(format!("suite {s} belongs to a different subcommand")));
            }
            Ok(vec![s])
        }
    }
}

fn emit(g: &Global, text: &str) -> Result<(), UsageError> {
    match &g.out {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(g: &Global, value: &T) -> Result<(), UsageError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(g, &text)
}

fn json_only(g: &Global) -> Result<(), UsageError> {
    match g.format {
        Format::Json => Ok(()),
        Format::Csv => Err(UsageError("this command only produces JSON".into())),
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, UsageError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| UsageError(e.to_string()))?)?)
}

/// Floats in CSV cells: 17 significant digits.
pub fn float_cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        Some(v) => v.to_string(),
        None => String::new(),
    }
}

/// Reads and parses a JSON file; syntax errors carry line and column.
fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
        UsageError(format!("{}:{}:{}: malformed input: {msg}", path.display(), e.line(), e.column()))
    })
}

fn suite_config(g: &Global, suite: Suite, verify: bool) -> SuiteConfig {
    let trials = match g.trials {
        Some(t) => t,
        None if verify => suite.default_trials(),
        None => 10_000,
    };
    SuiteConfig {
        seed: g.seed,
        trials,
        tol: g.tol,
        jobs: g.jobs as usize,
        inject_failure: g.inject_failure,
        timestamps: !g.no_timestamp,
    }
}

const SUITE_HEADER: [&str; 8] =
    ["suite", "seed", "trials", "failures", "worst_margin", "statistic", "duration_ms", "first_failing_trial"];

fn suite_row(r: &SuiteReport) -> Vec<String> {
    vec![
        r.suite.to_string(),
        r.seed.to_string(),
        r.trials.to_string(),
        r.failures.to_string(),
        float_cell(r.worst_margin),
        float_cell(r.statistic),
        r.duration_ms.map(|d| d.to_string()).unwrap_or_default(),
        r.first_counterexample.as_ref().map(|c| c.trial.to_string()).unwrap_or_default(),
    ]
}

fn execute(g: &Global, list: &[Suite], verify: bool) -> Result<Vec<SuiteReport>, UsageError> {
    list.iter()
        .map(|&s| {
            let r = suites::run_suite(s, &suite_config(g, s, verify))?;
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            eprintln!("{verdict} {s}: {}/{} failed", r.failures, r.trials);
            Ok(r)
        })
        .collect()
}

fn run_suites(g: &Global, list: &[Suite]) -> Outcome {
    let reports = execute(g, list, false)?;
    let passed = reports.iter().all(SuiteReport::passed);
    match g.format {
        Format::Json if reports.len() == 1 => emit_json(g, &reports[0])?,
        Format::Json => emit_json(g, &reports)?,
        Format::Csv => emit(g, &csv_text(&SUITE_HEADER, &reports.iter().map(suite_row).collect::<Vec<_>>())?)?,
    }
    Ok(passed)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    u: SubspaceJson,
    v: SubspaceJson,
}

fn angles_measure(g: &Global, path: &Path) -> Outcome {
    json_only(g)?;
    let pair: PairJson = read_json(path)?;
    let u = Subspace::try_from(pair.u)?;
    let v = Subspace::try_from(pair.v)?;
    let tt = DEFAULT_TRANSVERSALITY_TOL;
    let report = json!({
        "dim_u": u.dim(),
        "dim_v": v.dim(),
        "ambient_dim": u.ambient_dim(),
        "max_angle_uv": max_angle(&u, &v)?.value(),
        "max_angle_vu": max_angle(&v, &u)?.value(),
        "min_angle": min_angle(&u, &v, tt)?.value(),
        "min_angle_perp": min_angle_perp(&u, &v)?.value(),
        "principal_angles": principal_angles(&u, &v)?.iter().map(|a| a.value()).collect::<Vec<_>>(),
        "transversal": is_transversal(&u, &v, tt)?,
        "intersection_dim": intersect(&u, &v, g.tol)?.map_or(0, |w| w.dim()),
    });
    emit_json(g, &report)?;
    Ok(true)
}

fn exact_cell(z: &detloci_core::grassmann::QC) -> [String; 2] {
    [z.re.to_string(), z.im.to_string()]
}

fn grassmann(g: &Global, action: GrassmannAction) -> Outcome {
    if let GrassmannAction::Suite { suite } = &action {
        return run_suites(g, &select(suite.as_deref(), Family::Grassmann)?);
    }
    json_only(g)?;
    let report = match action {
        GrassmannAction::Pluecker { input, rational } => {
            let m: MatrixJson = read_json(&input)?;
            let labels = subsets(m.cols, m.rows);
            if rational {
                let p = pluecker_embed_exact(&RationalGrassmannPoint::new(m.to_exact()?)?);
                let residuals = p.relation_residuals();
                json!({
                    "r": p.r, "n": p.n, "subsets": labels,
                    "coords": p.coords.iter().map(exact_cell).collect::<Vec<_>>(),
                    "relations": residuals.len(),
                    "nonzero_relations": residuals.iter().filter(|x| !qc_is_zero(x)).count(),
                })
            } else {
                let p = pluecker_embed(&GrassmannPoint::new(m.to_float()?)?);
                let residuals = p.relation_residuals();
                json!({
                    "r": p.r, "n": p.n, "subsets": labels,
                    "coords": p.coords.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "relations": residuals.len(),
                    "max_relation_residual": residuals.iter().map(|z| z.norm()).fold(0.0, f64::max),
                })
            }
        }
        GrassmannAction::Chart { input } => {
            let m: MatrixJson = read_json(&input)?;
            let z = chart_psi0(&GrassmannPoint::new(m.to_float()?)?)?;
            serde_json::to_value(MatrixJson::from_float(&z))?
        }
        GrassmannAction::Distance { input } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Points {
                p: MatrixJson,
                q: MatrixJson,
            }
            let pts: Points = read_json(&input)?;
            let p = GrassmannPoint::new(pts.p.to_float()?)?;
            let q = GrassmannPoint::new(pts.q.to_float()?)?;
            json!({"distance": fs_distance(&p, &q)?})
        }
        GrassmannAction::Curvature { input } => {
            let m: MatrixJson = read_json(&input)?;
            let u = m.to_float()?;
            if u.norm() == 0.0 {
                return Err(UsageError("tangent vector must be nonzero".into()));
            }
            let u = &u / detloci_core::grassmann::C64::new(u.norm(), 0.0);
            json!({
                "r": u.nrows(),
                "n": u.nrows() + u.ncols(),
                "sample": curvature_sample(&u),
            })
        }
        GrassmannAction::Compound { input, order, rational } => {
            let m: MatrixJson = read_json(&input)?;
            if rational {
                serde_json::to_value(MatrixJson::from_exact(&compound_matrix(&m.to_exact()?, order)?))?
            } else {
                serde_json::to_value(MatrixJson::from_float(&compound_matrix(&m.to_float()?, order)?))?
            }
        }
        GrassmannAction::Suite { .. } => unreachable!("handled above"),
    };
    emit_json(g, &report)?;
    Ok(true)
}

fn chern(g: &Global, action: ChernAction) -> Outcome {
    match action {
        ChernAction::Examples { which, n_min, n_max } => {
            let family = ExampleFamily::from_index(which)?;
            let rows = example_tables(family, n_min, n_max)?;
            match g.format {
                Format::Json => emit_json(g, &rows)?,
                Format::Csv => emit(
                    g,
                    &csv_text(&ExampleRow::CSV_HEADER, &rows.iter().map(ExampleRow::csv_record).collect::<Vec<_>>())?,
                )?,
            }
            Ok(true)
        }
        ChernAction::Solve { input } => {
            json_only(g)?;
            let raw: ProblemJson = read_json(&input)?;
            let problem = DeterminantalProblem::try_from(raw)?;
            emit_json(g, &json!({"problem": problem, "invariants": problem.solve()}))?;
            Ok(true)
        }
        ChernAction::Suite { suite } => run_suites(g, &select(suite.as_deref(), Family::Chern)?),
    }
}

const VERIFY_HEADER: [&str; 7] = ["item", "passed", "trials", "failures", "worst_margin", "statistic", "detail"];

fn verify(g: &Global) -> Outcome {
    let reports = execute(g, &Suite::ALL, true)?;
    let config = AcceptanceConfig {
        seed: g.seed,
        jobs: g.jobs as usize,
        timestamps: !g.no_timestamp,
    };
    let criteria: Vec<CriterionResult> = acceptance::CRITERIA
        .iter()
        .map(|&id| {
            let r = acceptance::run_criterion(id, &config);
            eprintln!("{r}");
            r
        })
        .collect();
    let passed = reports.iter().all(SuiteReport::passed) && criteria.iter().all(|c| c.passed);
    match g.format {
        Format::Json => emit_json(g, &json!({"passed": passed, "suites": reports, "acceptance": criteria}))?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.suite.to_string(),
                        r.passed().to_string(),
                        r.trials.to_string(),
                        r.failures.to_string(),
                        float_cell(r.worst_margin),
                        float_cell(r.statistic),
                        String::new(),
                    ]
                })
                .collect();
            rows.extend(criteria.iter().map(|c| {
                let mut row = vec![format!("criterion {}", c.id), c.passed.to_string()];
                row.extend(std::iter::repeat_n(String::new(), 4));
                row.push(c.detail.clone());
                row
            }));
            emit(g, &csv_text(&VERIFY_HEADER, &rows)?)?
        }
    }
    Ok(passed)
}

fn replay(g: &Global, path: &Path) -> Outcome {
    let value: Value = read_json(path)?;
    let blob = match value.get("first_counterexample") {
        // A whole suite report is accepted too.
        Some(inner) if value.get("schema_version").is_none() => inner.clone(),
        _ => value,
    };
    if blob.is_null() {
        return Err(UsageError("report holds no counterexample".into()));
    }
    let blob: suites::Counterexample = serde_json::from_value(blob)?;
    let report = suites::replay(&blob)?;
    match g.format {
        Format::Json => emit_json(g, &report)?,
        Format::Csv => emit(g, &csv_text(&SUITE_HEADER, &[suite_row(&report)])?)?,
    }
    Ok(report.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells_have_seventeen_digits() {
        assert_eq!(float_cell(Some(0.1)), "1.0000000000000001e-1");
        assert_eq!(float_cell(None), "");
    }

    #[test]
    fn suite_selection_respects_family() {
        assert_eq!(select(Some("sub_add"), Family::Angles).unwrap(), vec![Suite::SubAdd]);
        assert!(select(Some("whitney"), Family::Angles).is_err());
        assert!(select(Some("bogus"), Family::Chern).is_err());
        assert_eq!(select(None, Family::Chern).unwrap().len(), 4);
    }
}
