//! Slow, independent re-implementations used as test oracles.
//!
//! Nothing here calls into [`crate::angles`] or [`crate::chern`]: the angle
//! oracle works from raw spanning vectors with Gram–Schmidt, row reduction
//! and a refined grid over unit circles, and the Chern engine stores classes
//! as dense `[h-degree][k-power]` tables with its own twist, division and
//! determinant routines.

use std::f64::consts::{FRAC_PI_2, PI};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num::{BigInt, BigRational, One, Zero};

// ---------------------------------------------------------------- angles

const GS_TOL: f64 = 1e-10;
const GRID: usize = 2048;
const REFINE_ROUNDS: usize = 8;
const REFINE_GRID: usize = 32;

/// Orthonormal basis of the span of the given vectors (classical
/// Gram–Schmidt with reorthogonalization).
pub fn gram_schmidt(vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                w -= b * b.dot(&w);
            }
        }
        let norm = w.norm();
        if norm > GS_TOL * v.norm().max(1.0) {
            basis.push(w / norm);
        }
    }
    basis
}

fn columns(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    m.column_iter().map(|c| c.into_owned()).collect()
}

/// Angle between `u` and the span of the orthonormal `basis`.
fn angle_to_span(u: &DVector<f64>, basis: &[DVector<f64>]) -> f64 {
    let mut proj = DVector::zeros(u.len());
    for b in basis {
        proj += b * b.dot(u);
    }
    let perp = u - &proj;
    perp.norm().atan2(proj.norm())
}

/// Extremum of `f(cos t·a + sin t·b)` over `t ∈ [0, π)` by a uniform grid
/// followed by repeated zooming around the best sample.
fn circle_extremum(f: &dyn Fn(f64) -> f64, maximize: bool) -> f64 {
    let better = |x: f64, y: f64| if maximize { x > y } else { x < y };
    let mut best_t = 0.0;
    let mut best = f(0.0);
    let step = PI / GRID as f64;
    for i in 1..GRID {
        let t = i as f64 * step;
        let v = f(t);
        if better(v, best) {
            best = v;
            best_t = t;
        }
    }
    let mut width = step;
    for _ in 0..REFINE_ROUNDS {
        let lo = best_t - width;
        let h = 2.0 * width / REFINE_GRID as f64;
        for i in 0..=REFINE_GRID {
            let t = lo + i as f64 * h;
            let v = f(t);
            if better(v, best) {
                best = v;
                best_t = t;
            }
        }
        width = 2.0 * h;
    }
    best
}

/// Extremum of `angle_to_span(u, target)` over unit `u` in the span of the
/// orthonormal `source` (dimension 1 or 2).
fn sphere_extremum(source: &[DVector<f64>], target: &[DVector<f64>], maximize: bool) -> f64 {
    match source.len() {
        1 => angle_to_span(&source[0], target),
        2 => {
            let (a, b) = (&source[0], &source[1]);
            circle_extremum(&|t: f64| angle_to_span(&(a * t.cos() + b * t.sin()), target), maximize)
        }
        d => panic!("grid oracle supports subspaces of dimension 1 or 2, got {d}"),
    }
}

/// `max_{u ∈ U, |u|=1} ∠(u, V)` by grid search; `U`, `V` given by spanning
/// columns, `dim U ≤ 2`.
pub fn grid_max_angle(u: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
    let (bu, bv) = (gram_schmidt(&columns(u)), gram_schmidt(&columns(v)));
    sphere_extremum(&bu, &bv, true)
}

/// Reduced row echelon form with partial pivoting; returns pivot columns.
fn rref(m: &mut DMatrix<f64>, tol: f64) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let scale = m.amax().max(1.0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best, val) = (row..rows)
            .map(|i| (i, m[(i, col)].abs()))
            .fold((row, -1.0), |a, x| if x.1 > a.1 { x } else { a });
        if val <= tol * scale {
            continue;
        }
        m.swap_rows(best, row);
        let p = m[(row, col)];
        for j in 0..cols {
            m[(row, j)] /= p;
        }
        for i in 0..rows {
            if i != row {
                let f = m[(i, col)];
                if f != 0.0 {
                    for j in 0..cols {
                        m[(i, j)] -= f * m[(row, j)];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the null space of `m` from its reduced row echelon form.
fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let mut r = m.clone();
    let pivots = rref(&mut r, tol);
    let cols = m.ncols();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = DVector::zeros(cols);
            x[free] = 1.0;
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r[(i, free)];
            }
            x
        })
        .collect()
}

/// `∠_m(U, V)` from the definition: zero unless `U + V = ℝⁿ`; otherwise the
/// least angle between unit vectors of the complements of `U ∩ V` inside
/// `U` and `V` (π/2 when a complement is zero). `U ∩ V` comes from the null
/// space of `[A | −B]`. Complements must have dimension ≤ 2.
pub fn grid_min_angle(u: &DMatrix<f64>, v: &DMatrix<f64>, tol: f64) -> f64 {
    let n = u.nrows();
    let (p, q) = (u.ncols(), v.ncols());
    let mut stacked = DMatrix::zeros(n, p + q);
    stacked.columns_mut(0, p).copy_from(u);
    stacked.columns_mut(p, q).copy_from(v);
    let mut echelon = stacked.clone();
    if p + q < n || rref(&mut echelon, tol).len() < n {
        return 0.0;
    }
    let mut signed = stacked;
    signed.columns_mut(p, q).neg_mut();
    let w: Vec<DVector<f64>> = null_space(&signed, tol)
        .iter()
        .map(|x| u * x.rows(0, p))
        .collect();
    let w = gram_schmidt(&w);
    let complement = |span: &DMatrix<f64>| -> Vec<DVector<f64>> {
        let mut all = w.clone();
        all.extend(columns(span));
        gram_schmidt(&all).split_off(w.len())
    };
    let (uc, vc) = (complement(u), complement(v));
    if uc.is_empty() || vc.is_empty() {
        return FRAC_PI_2;
    }
    // The least angle between U_c and V_c is attained on the smaller one.
    if uc.len() <= vc.len() {
        sphere_extremum(&uc, &vc, false)
    } else {
        sphere_extremum(&vc, &uc, false)
    }
}

// ------------------------------------------------------------ Chern classes

/// Dense class table: `t[d][j]` is the coefficient of `h^d k^j`.
pub type Table = Vec<Vec<BigRational>>;

fn zero_table(n: usize) -> Table {
    vec![vec![BigRational::zero(); n + 1]; n + 1]
}

fn unit_table(n: usize) -> Table {
    let mut t = zero_table(n);
    t[0][0] = BigRational::one();
    t
}

fn table_add(a: &Table, b: &Table) -> Table {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect()
}

fn table_scale(a: &Table, s: &BigRational) -> Table {
    a.iter().map(|x| x.iter().map(|p| p * s).collect()).collect()
}

fn table_mul(a: &Table, b: &Table) -> Table {
    let n = a.len() - 1;
    let mut out = zero_table(n);
    for d1 in 0..=n {
        for d2 in 0..=n - d1 {
            for j1 in 0..=n {
                if a[d1][j1].is_zero() {
                    continue;
                }
                for j2 in 0..=n - j1 {
                    if !b[d2][j2].is_zero() {
                        out[d1 + d2][j1 + j2] += &a[d1][j1] * &b[d2][j2];
                    }
                }
            }
        }
    }
    out
}

fn table_component(a: &Table, d: usize) -> Table {
    let mut out = zero_table(a.len() - 1);
    if d < a.len() {
        out[d] = a[d].clone();
    }
    out
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `c(E ⊗ L^{sign·k}) = Σ_i c_i(E) (1 + sign·k·h)^{rank−i}`, with
/// `c_i(E) = values[i−1]·h^i`.
fn naive_twist(n: usize, rank: usize, values: &[BigRational], sign: i64) -> Table {
    let mut t = zero_table(n);
    if n >= 1 {
        t[1][1] = q(sign);
    }
    let one_plus_t = table_add(&unit_table(n), &t);
    let mut total = zero_table(n);
    for i in 0..=rank {
        let ci = if i == 0 {
            unit_table(n)
        } else {
            let mut c = zero_table(n);
            if i <= n {
                c[i][0] = values.get(i - 1).cloned().unwrap_or_else(BigRational::zero);
            }
            c
        };
        let mut power = unit_table(n);
        for _ in 0..rank - i {
            power = table_mul(&power, &one_plus_t);
        }
        total = table_add(&total, &table_mul(&ci, &power));
    }
    total
}

/// `x` with `e·x = f`, solved degree by degree (`e` has constant term 1).
fn naive_divide(f: &Table, e: &Table) -> Table {
    let n = f.len() - 1;
    let mut x = zero_table(n);
    for d in 0..=n {
        let mut row = f[d].clone();
        for i in 1..=d {
            for j1 in 0..=n {
                if e[i][j1].is_zero() {
                    continue;
                }
                for j2 in 0..=n - j1 {
                    row[j1 + j2] -= &e[i][j1] * &x[d - i][j2];
                }
            }
        }
        x[d] = row;
    }
    x
}

fn permutation_sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[Vec<Table>], n: usize) -> Table {
    let size = m.len();
    let mut total = zero_table(n);
    for perm in (0..size).permutations(size) {
        let term = perm
            .iter()
            .enumerate()
            .fold(unit_table(n), |acc, (row, &col)| table_mul(&acc, &m[row][col]));
        total = table_add(&total, &table_scale(&term, &q(permutation_sign(&perm))));
    }
    total
}

/// Plain description of a determinantal problem for the naive engine.
#[derive(Clone, Debug, PartialEq)]
pub struct NaiveProblem {
    pub n: usize,
    pub r_e: usize,
    pub r_f: usize,
    pub r: usize,
    pub c_tm: Vec<BigRational>,
    pub c_e: Vec<BigRational>,
    pub c_f: Vec<BigRational>,
}

/// Integrated invariants as `k`-coefficient vectors of the `h^n` part.
#[derive(Clone, Debug, PartialEq)]
pub struct NaiveInvariants {
    pub vol: Vec<BigRational>,
    pub n1: Option<Vec<BigRational>>,
    pub n11: Option<Vec<BigRational>>,
    pub n2: Option<Vec<BigRational>>,
}

/// Harris–Tu numbers of `D_r` by direct expansion.
pub fn naive_harris_tu(p: &NaiveProblem) -> NaiveInvariants {
    let n = p.n;
    let a = p.r_e - p.r;
    let b = p.r_f - p.r;
    let dim = n - a * b;
    let ce = naive_twist(n, p.r_e, &p.c_e, -1);
    let cf = naive_twist(n, p.r_f, &p.c_f, 1);
    let ctm = naive_twist(n, n, &p.c_tm, 0);
    let c = naive_divide(&cf, &ce);

    let delta = |idx: &[usize]| -> Table {
        let nonzero: Vec<usize> = idx.iter().copied().filter(|&i| i > 0).collect();
        if nonzero.len() > a {
            return zero_table(n);
        }
        let mut full = nonzero;
        full.resize(a, 0);
        let m: Vec<Vec<Table>> = (0..a)
            .map(|i| {
                (0..a)
                    .map(|j| {
                        let deg = b as i64 + full[i] as i64 + j as i64 - i as i64;
                        if deg < 0 || deg > n as i64 {
                            zero_table(n)
                        } else {
                            table_component(&c, deg as usize)
                        }
                    })
                    .collect()
            })
            .collect();
        leibniz(&m, n)
    };

    let mut omega = zero_table(n);
    if n >= 1 {
        omega[1][1] = BigRational::one();
    }
    let top = |t: &Table| t[n].clone();
    let d0 = delta(&[]);
    let mut vol_class = d0.clone();
    for _ in 0..dim {
        vol_class = table_mul(&vol_class, &omega);
    }
    let mut out = NaiveInvariants {
        vol: top(&vol_class),
        n1: None,
        n11: None,
        n2: None,
    };

    let (e1, e2) = (table_component(&ce, 1), table_component(&ce, 2));
    let (f1, f2) = (table_component(&cf, 1), table_component(&cf, 2));
    let (m1, m2) = (table_component(&ctm, 1), table_component(&ctm, 2));
    let ef = table_add(&e1, &table_scale(&f1, &q(-1)));
    let ai = a as i64;
    let diff = p.r_e as i64 - p.r_f as i64;
    // λ = c₁(M) + a·c₁(E − F)
    let lambda = table_add(&m1, &table_scale(&ef, &q(ai)));

    if dim == 1 {
        let n1 = table_add(&table_mul(&lambda, &d0), &table_scale(&delta(&[1]), &q(diff)));
        out.n1 = Some(top(&n1));
    } else if dim == 2 {
        let (d1, d2, d11) = (delta(&[1]), delta(&[2]), delta(&[1, 1]));
        let mut n11 = table_mul(&table_mul(&lambda, &lambda), &d0);
        n11 = table_add(&n11, &table_scale(&table_mul(&lambda, &d1), &q(2 * diff)));
        n11 = table_add(&n11, &table_scale(&table_add(&d2, &d11), &q(diff * diff)));
        out.n11 = Some(top(&n11));

        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut inner = m2.clone();
        inner = table_add(&inner, &table_scale(&table_mul(&m1, &ef), &q(ai)));
        inner = table_add(&inner, &table_scale(&table_add(&e2, &table_scale(&f2, &q(-1))), &q(ai)));
        inner = table_add(&inner, &table_scale(&table_mul(&e1, &e1), &q(ai * (ai - 1) / 2)));
        inner = table_add(&inner, &table_scale(&table_mul(&e1, &f1), &q(-ai * ai)));
        inner = table_add(&inner, &table_scale(&table_mul(&f1, &f1), &q((ai + 1) * ai / 2)));
        let mut n2 = table_mul(&inner, &d0);
        let second = table_add(&table_scale(&m1, &q(ai)), &table_scale(&ef, &q(ai * diff - 1)));
        n2 = table_add(&n2, &table_mul(&second, &d1));
        let bi = b as i64;
        n2 = table_add(&n2, &table_scale(&d2, &(q(diff * diff + ai + bi - 2) * &half)));
        n2 = table_add(&n2, &table_scale(&d11, &(q(diff * diff - ai - bi - 2) * &half)));
        out.n2 = Some(top(&n2));
    }
    out
}

/// Coefficient of `x^p` in `(1+x)^{r_f}/(1−x)^{r_e}` by multiplying
/// truncated power series.
pub fn naive_leading_difference(r_e: usize, r_f: usize, p: usize) -> BigInt {
    let mut series = vec![BigInt::zero(); p + 1];
    series[0] = BigInt::one();
    for _ in 0..r_f {
        for i in (1..=p).rev() {
            let prev = series[i - 1].clone();
            series[i] += prev;
        }
    }
    for _ in 0..r_e {
        for i in 1..=p {
            let prev = series[i - 1].clone();
            series[i] += prev;
        }
    }
    series[p].clone()
}
