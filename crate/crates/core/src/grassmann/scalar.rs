//! Scalars for the two arithmetic backends: double-precision complex numbers
//! for geometry, and exact rational complex numbers for identity checks.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num::{BigInt, BigRational, Complex, One, ToPrimitive, Zero};

pub type C64 = Complex<f64>;
/// Complex number with arbitrary-precision rational parts.
pub type QC = Complex<BigRational>;

/// A field usable by the elimination-based routines in this module.
pub trait FieldScalar:
    nalgebra::Scalar
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Debug
{
    /// Pivot preference; zero exactly when the value must not be used as a
    /// pivot.
    fn pivot_weight(&self) -> f64;

    fn conj(&self) -> Self;
}

impl FieldScalar for C64 {
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl FieldScalar for QC {
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

pub fn qc_int(re: i64, im: i64) -> QC {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

pub fn qc_to_c64(x: &QC) -> C64 {
    let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
    Complex::new(f(&x.re), f(&x.im))
}

pub fn qc_is_zero(x: &QC) -> bool {
    x.re.is_zero() && x.im.is_zero()
}

/// Row-echelon reduction with row swaps, returning the reduced matrix, the
/// pivot columns and the parity of the swaps. Entries with
/// `pivot_weight ≤ threshold` are treated as zero.
fn eliminate<T: FieldScalar>(m: &DMatrix<T>, threshold: f64) -> (DMatrix<T>, Vec<usize>, bool) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best, weight) = (row..rows)
            .map(|i| (i, a[(i, col)].pivot_weight()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if weight <= threshold {
            continue;
        }
        if best != row {
            a.swap_rows(best, row);
            odd = !odd;
        }
        let p = a[(row, col)].clone();
        for i in row + 1..rows {
            if a[(i, col)].pivot_weight() == 0.0 {
                continue;
            }
            let f = a[(i, col)].clone() / p.clone();
            for j in col..cols {
                let v = a[(i, j)].clone() - f.clone() * a[(row, j)].clone();
                a[(i, j)] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots, odd)
}

/// Determinant by Gaussian elimination (partial pivoting by magnitude for
/// floating point, first nonzero pivot for exact arithmetic).
pub fn determinant<T: FieldScalar>(m: &DMatrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return T::one();
    }
    let (a, pivots, odd) = eliminate(m, 0.0);
    if pivots.len() < n {
        return T::zero();
    }
    let mut det = T::one();
    for i in 0..n {
        det = det * a[(i, i)].clone();
    }
    if odd {
        -det
    } else {
        det
    }
}

/// Exact rank of a rational matrix.
pub fn exact_rank(m: &DMatrix<QC>) -> usize {
    eliminate(m, 0.0).1.len()
}

pub fn to_float_matrix(m: &DMatrix<QC>) -> DMatrix<C64> {
    m.map(|x| qc_to_c64(&x))
}

pub fn adjoint<T: FieldScalar>(m: &DMatrix<T>) -> DMatrix<T> {
    m.transpose().map(|x| x.conj())
}

/// Exact Frobenius norm squared.
pub fn exact_norm_sqr(m: &DMatrix<QC>) -> BigRational {
    m.iter()
        .fold(BigRational::zero(), |acc, x| acc + x.re.clone() * x.re.clone() + x.im.clone() * x.im.clone())
}
