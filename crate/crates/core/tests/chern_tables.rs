use detloci_core::chern::{example_tables, int, rat, ExampleFamily, ExampleRow};
use detloci_core::DeterminantalProblem;

#[test]
fn example_one_from_json_matches_the_table() {
    // The curve family at n = 4: trivial bundles of ranks 2 and n, r = 1.
    let problem: DeterminantalProblem = r#"{"n": 4, "r_e": 2, "r_f": 4, "r": 1}"#.parse().unwrap();
    let from_json = problem.solve();
    let row = ExampleRow::compute(ExampleFamily::Curves, 4).unwrap();
    assert_eq!(row.determinantal, from_json);
    assert_eq!(from_json.vol.limit(), int(32));
    assert_eq!(from_json.n1_over_vol(), Some(int(-9)));
}

#[test]
fn tables_are_ordered_and_consistent() {
    let rows = example_tables(ExampleFamily::Surfaces, 3, 7).unwrap();
    assert_eq!(rows.len(), 5);
    for (row, n) in rows.iter().zip(3i64..) {
        assert_eq!(row.n as i64, n);
        assert_eq!(row.determinantal.n2_over_n11(), Some(rat(n * n + n - 4, 2 * (n * n - 5))));
        assert_eq!(row.csv_record().len(), ExampleRow::CSV_HEADER.len());
    }
}

#[test]
fn twisted_problem_keeps_leading_terms() {
    // Nontrivial lower classes change only subleading powers of k.
    let plain: DeterminantalProblem = r#"{"n": 4, "r_e": 2, "r_f": 3, "r": 1}"#.parse().unwrap();
    let twisted: DeterminantalProblem =
        r#"{"n": 4, "r_e": 2, "r_f": 3, "r": 1, "cTM": ["4", "6", "4"], "cE": ["1/2"], "cF": [-1, 2]}"#
            .parse()
            .unwrap();
    let (a, b) = (plain.solve(), twisted.solve());
    assert_eq!(a.vol.limit(), b.vol.limit());
    assert_eq!(a.n11_over_vol(), b.n11_over_vol());
    assert_eq!(a.n2_over_vol(), b.n2_over_vol());
    assert_ne!(a.n2.as_ref().unwrap().raw(), b.n2.as_ref().unwrap().raw());
}
