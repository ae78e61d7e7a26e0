use itertools::Itertools;
use nalgebra::DMatrix;

use super::scalar::{determinant, FieldScalar};
use crate::error::{domain, Result};

/// Increasing `l`-subsets of `{0, …, n−1}` in lexicographic order. This is the
/// fixed basis order for `⋀ˡ` throughout the crate.
pub fn subsets(n: usize, l: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(l).collect()
}

/// Determinant of the submatrix with the given rows and columns.
pub fn minor<T: FieldScalar>(a: &DMatrix<T>, rows: &[usize], cols: &[usize]) -> T {
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])].clone());
    determinant(&sub)
}

/// The `l`-th compound matrix `⋀ˡA`: entry `(S, T)` is the minor on rows `S`
/// and columns `T`, both indexed lexicographically.
pub fn compound_matrix<T: FieldScalar>(a: &DMatrix<T>, l: usize) -> Result<DMatrix<T>> {
    let (n, m) = a.shape();
    if l == 0 || l > n.min(m) {
        return domain(format!("compound order {l} outside 1..={}", n.min(m)));
    }
    let row_sets = subsets(n, l);
    let col_sets = subsets(m, l);
    Ok(DMatrix::from_fn(row_sets.len(), col_sets.len(), |i, j| {
        minor(a, &row_sets[i], &col_sets[j])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::scalar::{qc_int, QC, C64};

    fn q(rows: usize, cols: usize, xs: &[i64]) -> DMatrix<QC> {
        DMatrix::from_row_slice(rows, cols, &xs.iter().map(|&x| qc_int(x, 0)).collect::<Vec<_>>())
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn first_compound_is_identity_map() {
        let a = q(2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(compound_matrix(&a, 1).unwrap(), a);
    }

    #[test]
    fn top_compound_is_determinant() {
        let a = q(2, 2, &[1, 2, 3, 4]);
        assert_eq!(compound_matrix(&a, 2).unwrap(), q(1, 1, &[-2]));
        let f = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(4.0, 0.0)]);
        assert!((compound_matrix(&f, 2).unwrap()[(0, 0)] - C64::new(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn order_out_of_range() {
        let a = q(2, 3, &[1, 2, 3, 4, 5, 6]);
        assert!(compound_matrix(&a, 0).is_err());
        assert!(compound_matrix(&a, 3).is_err());
    }
}
