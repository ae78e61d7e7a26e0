use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num::Zero;

use super::compound::{minor, subsets};
use super::scalar::{exact_rank, FieldScalar, C64, QC};
use crate::error::{domain, Error, Result};
use crate::linalg;

/// Relative rank threshold for floating-point Grassmannian points.
pub const POINT_RANK_RTOL: f64 = 1e-10;
/// Largest accepted condition number of the leading block in [`chart_psi0`].
pub const CHART_MAX_CONDITION: f64 = 1e12;

/// An `r`-plane in ℂᴺ given by the row space of a full-rank `r × N` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPoint {
    matrix: DMatrix<C64>,
}

impl GrassmannPoint {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let (r, n) = matrix.shape();
        if r == 0 || r > n {
            return domain(format!("a {r}×{n} matrix does not define a point of Gr(r, N) with 1 ≤ r ≤ N"));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("matrix has non-finite entries");
        }
        let sigma = linalg::singular_values(&matrix);
        let rank = sigma.iter().filter(|&&s| s > POINT_RANK_RTOL * sigma[0]).count();
        if sigma[0] == 0.0 || rank < r {
            return Err(Error::RankDeficient { rank, expected: r });
        }
        Ok(Self { matrix })
    }

    /// The base point `Π₀ = [I | 0]`.
    pub fn base(r: usize, n: usize) -> Result<Self> {
        Self::new(DMatrix::from_fn(r, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::zero() }))
    }

    pub fn r(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Row-space equality, via the Plücker distance.
    pub fn span_eq(&self, other: &Self, tol: f64) -> bool {
        self.matrix.shape() == other.matrix.shape()
            && fs_distance(self, other).map(|d| d <= tol).unwrap_or(false)
    }
}

/// Exact counterpart of [`GrassmannPoint`] over `ℚ(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalGrassmannPoint {
    matrix: DMatrix<QC>,
}

impl RationalGrassmannPoint {
    pub fn new(matrix: DMatrix<QC>) -> Result<Self> {
        let (r, n) = matrix.shape();
        if r == 0 || r > n {
            return domain(format!("a {r}×{n} matrix does not define a point of Gr(r, N) with 1 ≤ r ≤ N"));
        }
        let rank = exact_rank(&matrix);
        if rank < r {
            return Err(Error::RankDeficient { rank, expected: r });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<QC> {
        &self.matrix
    }

    pub fn to_float(&self) -> GrassmannPoint {
        GrassmannPoint {
            matrix: super::scalar::to_float_matrix(&self.matrix),
        }
    }
}

/// Plücker coordinates: the `r × r` minors indexed by increasing column
/// subsets in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerCoords<T> {
    pub r: usize,
    pub n: usize,
    pub coords: Vec<T>,
}

fn pluecker_of<T: FieldScalar>(m: &DMatrix<T>) -> PlueckerCoords<T> {
    let (r, n) = m.shape();
    let rows: Vec<usize> = (0..r).collect();
    let coords = subsets(n, r).iter().map(|cols| minor(m, &rows, cols)).collect();
    PlueckerCoords { r, n, coords }
}

/// `p_S = det(P[:, S])` for every increasing `r`-subset `S`.
pub fn pluecker_embed(p: &GrassmannPoint) -> PlueckerCoords<C64> {
    pluecker_of(&p.matrix)
}

pub fn pluecker_embed_exact(p: &RationalGrassmannPoint) -> PlueckerCoords<QC> {
    pluecker_of(&p.matrix)
}

impl<T: FieldScalar> PlueckerCoords<T> {
    /// Coordinate at an arbitrary index sequence: the sign of the sorting
    /// permutation times the sorted coordinate, zero on repeated indices.
    fn signed(&self, seq: &[usize], index: &HashMap<Vec<usize>, usize>) -> T {
        let mut sorted = seq.to_vec();
        let mut odd = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                match sorted[j].cmp(&sorted[j + 1]) {
                    Ordering::Greater => {
                        sorted.swap(j, j + 1);
                        odd = !odd;
                    }
                    Ordering::Equal => return T::zero(),
                    Ordering::Less => {}
                }
            }
        }
        let v = self.coords[index[&sorted]].clone();
        if odd {
            -v
        } else {
            v
        }
    }

    /// Values of the quadratic Plücker relations
    /// `Σₗ (−1)ˡ p_{I·jₗ} p_{J∖jₗ}` over all `(r−1)`-subsets `I` and
    /// `(r+1)`-subsets `J`. All vanish on the image of the embedding.
    pub fn relation_residuals(&self) -> Vec<T> {
        let index: HashMap<Vec<usize>, usize> = subsets(self.n, self.r)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut out = Vec::new();
        if self.r == 0 || self.r >= self.n {
            return out;
        }
        for i_set in subsets(self.n, self.r - 1) {
            for j_set in subsets(self.n, self.r + 1) {
                let mut acc = T::zero();
                for l in 0..j_set.len() {
                    let mut left = i_set.clone();
                    left.push(j_set[l]);
                    let right: Vec<usize> =
                        j_set.iter().enumerate().filter(|&(m, _)| m != l).map(|(_, &x)| x).collect();
                    let term = self.signed(&left, &index) * self.signed(&right, &index);
                    acc = if l % 2 == 0 { acc + term } else { acc - term };
                }
                out.push(acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.pivot_weight() == 0.0)
    }
}

impl PlueckerCoords<C64> {
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn lexicographic(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if c != Ordering::Equal {
            return c;
        }
    }
    Ordering::Equal
}

/// Fubini–Study distance `arccos(|⟨p, q⟩| / |p||q|)` between Plücker vectors.
///
/// Evaluated as `2·asin(|p̂ − e^{iα} q̂| / 2)` with the phase `α` aligning the
/// unit vectors, which agrees with the arccosine form and stays accurate for
/// nearby points. Arguments are put in a canonical order first, so the result
/// is exactly symmetric.
pub fn fs_distance(p: &GrassmannPoint, q: &GrassmannPoint) -> Result<f64> {
    if p.matrix.shape() != q.matrix.shape() {
        return domain("points lie in different Grassmannians");
    }
    let a = pluecker_embed(p);
    let b = pluecker_embed(q);
    let (a, b) = if lexicographic(&a.coords, &b.coords) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    Ok(projective_distance(&a.coords, &b.coords))
}

pub(crate) fn projective_distance(a: &[C64], b: &[C64]) -> f64 {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let inner: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() / (na * nb);
    let modulus = inner.norm();
    if modulus == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let phase = inner.conj() / modulus;
    let chord = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x / na - y * phase / nb).norm_sqr())
        .sum::<f64>()
        .sqrt();
    2.0 * (chord / 2.0).min(1.0).asin()
}

/// The standard chart `Ψ₀([A | B]) = A⁻¹B` around `Π₀`.
pub fn chart_psi0(p: &GrassmannPoint) -> Result<DMatrix<C64>> {
    let (r, n) = p.matrix.shape();
    let a = p.matrix.columns(0, r).into_owned();
    let b = p.matrix.columns(r, n - r).into_owned();
    let sigma = linalg::singular_values(&a);
    let smallest = *sigma.last().expect("r ≥ 1");
    let cond = if smallest == 0.0 { f64::INFINITY } else { sigma[0] / smallest };
    if !(cond < CHART_MAX_CONDITION) {
        return Err(Error::OutsideChart(cond));
    }
    a.lu().solve(&b).ok_or(Error::OutsideChart(f64::INFINITY))
}

/// `[I | Z]`, the point with chart coordinates `Z`.
pub fn chart_inverse(z: &DMatrix<C64>) -> GrassmannPoint {
    let (r, k) = z.shape();
    let mut m = DMatrix::zeros(r, r + k);
    for i in 0..r {
        m[(i, i)] = C64::new(1.0, 0.0);
    }
    m.columns_mut(r, k).copy_from(z);
    GrassmannPoint { matrix: m }
}

/// Real coordinate direction `a` of the chart: entry `(a/2) / (N−r)`,
/// `(a/2) % (N−r)`, real part for even `a`, imaginary for odd.
fn chart_direction(r: usize, k: usize, a: usize) -> DMatrix<C64> {
    let mut z = DMatrix::zeros(r, k);
    let e = a / 2;
    z[(e / k, e % k)] = if a % 2 == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
    z
}

/// Step used by [`chart_isometry_defect`].
pub const METRIC_FD_STEP: f64 = 1e-5;

/// Operator-norm deviation from the identity of the metric Gram matrix that
/// `fs_distance` induces on the real coordinates of `Ψ₀` at `Π₀`.
///
/// Each `g(v, v)` is the central second difference `(d(tv)² + d(−tv)²)/2t²`
/// of the squared distance from `Π₀`; off-diagonal entries follow by
/// polarization.
pub fn chart_isometry_defect(r: usize, n: usize) -> Result<f64> {
    if r == 0 || r >= n {
        return domain(format!("chart isometry needs 1 ≤ r < N, got r = {r}, N = {n}"));
    }
    let k = n - r;
    let base = pluecker_embed(&GrassmannPoint::base(r, n)?).coords;
    let t = METRIC_FD_STEP;
    let quad = |v: &DMatrix<C64>| {
        let d = |s: f64| projective_distance(&base, &pluecker_embed(&chart_inverse(&(v * C64::new(s, 0.0)))).coords);
        (d(t).powi(2) + d(-t).powi(2)) / (2.0 * t * t)
    };
    let dim = 2 * r * k;
    let dirs: Vec<_> = (0..dim).map(|a| chart_direction(r, k, a)).collect();
    let mut gram = DMatrix::<f64>::zeros(dim, dim);
    for a in 0..dim {
        gram[(a, a)] = quad(&dirs[a]);
        for b in 0..a {
            let g = (quad(&(&dirs[a] + &dirs[b])) - quad(&(&dirs[a] - &dirs[b]))) / 4.0;
            gram[(a, b)] = g;
            gram[(b, a)] = g;
        }
    }
    let deviation = gram - DMatrix::identity(dim, dim);
    let eig = SymmetricEigen::new(deviation);
    Ok(eig.eigenvalues.amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::scalar::qc_int;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn point(r: usize, n: usize, xs: &[f64]) -> GrassmannPoint {
        GrassmannPoint::new(DMatrix::from_row_slice(r, n, &xs.iter().map(|&x| c(x)).collect::<Vec<_>>())).unwrap()
    }

    #[test]
    fn pluecker_of_a_line() {
        let p = GrassmannPoint::new(DMatrix::from_row_slice(1, 2, &[C64::new(2.0, 1.0), c(-3.0)])).unwrap();
        assert_eq!(pluecker_embed(&p).coords, vec![C64::new(2.0, 1.0), c(-3.0)]);
    }

    #[test]
    fn pluecker_of_base_point() {
        let p = pluecker_embed(&GrassmannPoint::base(2, 4).unwrap());
        assert_eq!(p.coords[0], c(1.0));
        assert!(p.coords[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn pluecker_hand_computed() {
        let m: Vec<QC> = [1, 0, 1, 0, 0, 1, 0, 1].iter().map(|&x| qc_int(x, 0)).collect();
        let p = RationalGrassmannPoint::new(DMatrix::from_row_slice(2, 4, &m)).unwrap();
        let coords = pluecker_embed_exact(&p).coords;
        let expected: Vec<QC> = [1, 0, 1, -1, 0, 1].iter().map(|&x| qc_int(x, 0)).collect();
        assert_eq!(coords, expected);
        // p12 p34 − p13 p24 + p14 p23
        let rel = coords[0].clone() * coords[5].clone() - coords[1].clone() * coords[4].clone()
            + coords[2].clone() * coords[3].clone();
        assert!(rel.re.is_zero() && rel.im.is_zero());
        let residuals = pluecker_embed_exact(&p).relation_residuals();
        assert!(!residuals.is_empty());
        assert!(residuals.iter().all(|x| x.re.is_zero() && x.im.is_zero()));
    }

    #[test]
    fn relations_detect_non_decomposable_vectors() {
        let mut coords = vec![qc_int(0, 0); 6];
        coords[0] = qc_int(1, 0); // e1∧e2 + e3∧e4
        coords[5] = qc_int(1, 0);
        let p = PlueckerCoords { r: 2, n: 4, coords };
        assert!(p.relation_residuals().iter().any(|x| !x.re.is_zero()));
    }

    #[test]
    fn rank_deficient_points_are_rejected() {
        let m = DMatrix::from_row_slice(2, 3, &[c(1.0), c(2.0), c(3.0), c(2.0), c(4.0), c(6.0)]);
        assert!(GrassmannPoint::new(m).is_err());
        let q: Vec<QC> = [1, 2, 3, 2, 4, 6].iter().map(|&x| qc_int(x, 0)).collect();
        assert!(RationalGrassmannPoint::new(DMatrix::from_row_slice(2, 3, &q)).is_err());
    }

    #[test]
    fn distances() {
        let p = GrassmannPoint::base(2, 4).unwrap();
        assert_eq!(fs_distance(&p, &p).unwrap(), 0.0);
        let q = point(2, 4, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!((fs_distance(&p, &q).unwrap() - FRAC_PI_2).abs() < 1e-15);
        for &t in &[0.0, 0.1, 0.7, 1.2, FRAC_PI_2] {
            let a = point(1, 2, &[1.0, 0.0]);
            let b = point(1, 2, &[t.cos(), t.sin()]);
            assert!((fs_distance(&a, &b).unwrap() - t).abs() < 1e-14);
        }
    }

    #[test]
    fn row_operations_preserve_the_point() {
        let p = point(2, 4, &[1.0, 2.0, 0.0, 1.0, 0.0, 1.0, 3.0, -1.0]);
        let g = DMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), C64::new(0.0, 1.0), c(1.0)]);
        let q = GrassmannPoint::new(g * p.matrix()).unwrap();
        assert!(p.span_eq(&q, 1e-7));
        assert!(fs_distance(&p, &q).unwrap() < 1e-7);
    }

    #[test]
    fn chart_examples() {
        let z = DMatrix::from_row_slice(2, 1, &[c(2.0), c(5.0)]);
        let p = point(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, 5.0]);
        assert_eq!(chart_psi0(&p).unwrap(), z);
        let p = point(2, 3, &[2.0, 0.0, 4.0, 0.0, 1.0, 5.0]);
        assert!((chart_psi0(&p).unwrap() - &z).norm() < 1e-15);
        let back = chart_inverse(&chart_psi0(&p).unwrap());
        assert!(back.span_eq(&p, 1e-7));
        let outside = point(2, 4, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(chart_psi0(&outside), Err(Error::OutsideChart(_))));
    }

    #[test]
    fn chart_is_isometric_at_base() {
        for (r, n) in [(1, 2), (2, 4), (2, 5), (1, 3)] {
            let defect = chart_isometry_defect(r, n).unwrap();
            assert!(defect <= 1e-6, "Gr({r},{n}) defect {defect:e}");
        }
        assert!(chart_isometry_defect(2, 2).is_err());
    }
}
