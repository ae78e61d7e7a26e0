use super::class::CohomologyClass;
use crate::error::{domain, Result};

/// Determinant of a square matrix of classes by cofactor expansion along
/// the first row. Exact, so no pivoting is needed.
pub fn class_determinant(m: &[Vec<CohomologyClass>], n: usize) -> CohomologyClass {
    let size = m.len();
    if size == 0 {
        return CohomologyClass::one(n);
    }
    if size == 1 {
        return m[0][0].clone();
    }
    let mut det = CohomologyClass::zero(n);
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<CohomologyClass>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = entry * &class_determinant(&minor, n);
        det = if col % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

/// `Δ_{i₁,…,i_a}` with `a = r_e − r`: the `a×a` determinant whose `(row,
/// col)` entry is `c_{r_f−r+i_row+col−row}`, using `c_0 = 1` and `c_j = 0`
/// for `j < 0`.
///
/// Short index lists are padded with zeros. A list with more than `a`
/// nonzero entries gives zero: such a Schur determinant has no room in an
/// `a`-row matrix.
pub fn porteous_delta(
    c: &CohomologyClass,
    r_e: usize,
    r_f: usize,
    r: usize,
    indices: &[usize],
) -> Result<CohomologyClass> {
    if r >= r_e || r >= r_f {
        return domain(format!("Porteous determinant needs r < r_e, r_f (r = {r}, r_e = {r_e}, r_f = {r_f})"));
    }
    if indices.windows(2).any(|w| w[0] < w[1]) {
        return domain("Porteous indices must be non-increasing");
    }
    let a = r_e - r;
    let q = (r_f - r) as isize;
    let n = c.n();
    if indices.iter().filter(|&&i| i > 0).count() > a {
        return Ok(CohomologyClass::zero(n));
    }
    let mut idx: Vec<usize> = indices.iter().copied().filter(|&i| i > 0).collect();
    idx.resize(a, 0);
    let entry = |j: isize| {
        if j < 0 {
            CohomologyClass::zero(n)
        } else {
            c.component(j as usize)
        }
    };
    let m: Vec<Vec<CohomologyClass>> = (0..a)
        .map(|row| {
            (0..a)
                .map(|col| entry(q + idx[row] as isize + col as isize - row as isize))
                .collect()
        })
        .collect();
    Ok(class_determinant(&m, n))
}

#[cfg(test)]
mod tests {
    use super::super::poly::{int, QPoly};
    use super::*;

    /// `1 + 2h + 3h² + 5h³ + 7h⁴ + 11h⁵`, distinct enough to see every entry.
    fn sample(n: usize) -> CohomologyClass {
        let vals = [2, 3, 5, 7, 11, 13, 17, 19];
        CohomologyClass::total_from_rationals(n, &vals[..n].iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn one_by_one() {
        let c = sample(6);
        for i in 0..3 {
            assert_eq!(porteous_delta(&c, 3, 4, 2, &[i]).unwrap(), c.component(2 + i));
        }
    }

    #[test]
    fn two_by_two_expansion() {
        // a = 2, q = 2: Δ = c₂² − c₃c₁.
        let c = sample(6);
        let d = porteous_delta(&c, 3, 3, 1, &[]).unwrap();
        let expect = &(&c.component(2) * &c.component(2)) - &(&c.component(3) * &c.component(1));
        assert_eq!(d, expect);
        assert_eq!(d.part(4), QPoly::from_int(9 - 10));
    }

    #[test]
    fn negative_indices_vanish() {
        // a = 3, q = 1: the (2, 0) entry is c_{-1} = 0.
        let c = sample(6);
        let d = porteous_delta(&c, 4, 2, 1, &[]).unwrap();
        let cc = |j: usize| c.component(j);
        let m = vec![
            vec![cc(1), cc(2), cc(3)],
            vec![cc(0), cc(1), cc(2)],
            vec![CohomologyClass::zero(6), cc(0), cc(1)],
        ];
        assert_eq!(d, class_determinant(&m, 6));
    }

    #[test]
    fn degree_law() {
        let c = sample(8);
        for (r_e, r_f, r) in [(2, 3, 1), (3, 3, 1), (3, 2, 0)] {
            for idx in [vec![], vec![1], vec![2, 1], vec![1, 1]] {
                let a = r_e - r;
                if idx.len() > a {
                    continue;
                }
                let d = porteous_delta(&c, r_e, r_f, r, &idx).unwrap();
                let deg = a * (r_f - r) + idx.iter().sum::<usize>();
                assert!(d.is_homogeneous(deg), "{r_e} {r_f} {r} {idx:?}");
            }
        }
    }

    #[test]
    fn too_many_indices_and_bad_input() {
        let c = sample(4);
        assert!(porteous_delta(&c, 2, 3, 1, &[1, 1]).unwrap().is_zero());
        assert!(porteous_delta(&c, 2, 3, 2, &[]).is_err());
        assert!(porteous_delta(&c, 3, 3, 1, &[1, 2]).is_err());
    }
}
