use num::{BigInt, BigRational, One};
use serde::Serialize;

use super::class::CohomologyClass;
use super::poly::QPoly;
use crate::error::{domain, Result};

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

pub fn binomial_q(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(binomial(n, k))
}

/// A complex vector bundle, recorded by its rank and total Chern class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    rank: usize,
    total: CohomologyClass,
}

impl BundleSpec {
    pub fn new(rank: usize, total: CohomologyClass) -> Result<Self> {
        if rank == 0 {
            return domain("bundle rank must be positive");
        }
        if total.part(0) != QPoly::one() {
            return domain("total Chern class must start with 1");
        }
        if total.top_degree().is_some_and(|d| d > rank) {
            return domain(format!("Chern classes above the rank {rank} must vanish"));
        }
        Ok(Self { rank, total })
    }

    pub fn trivial(rank: usize, n: usize) -> Result<Self> {
        Self::new(rank, CohomologyClass::one(n))
    }

    /// Bundle with `c_i = values[i−1]·h^i`.
    pub fn from_rationals(rank: usize, n: usize, values: &[BigRational]) -> Result<Self> {
        if values.len() > rank {
            return domain(format!(
                "{} Chern classes given for a bundle of rank {rank}",
                values.len()
            ));
        }
        Self::new(rank, CohomologyClass::total_from_rationals(n, values)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.total.n()
    }

    pub fn total(&self) -> &CohomologyClass {
        &self.total
    }

    /// `c_p` as a class (homogeneous of degree `p`).
    pub fn chern(&self, p: usize) -> CohomologyClass {
        self.total.component(p)
    }
}

/// `c(E⊗L)` for a line bundle with first Chern class `line_c1`:
/// `c_p = Σ_{i≤p} C(rank−i, p−i)·c_i·t^{p−i}`.
pub fn twist_chern(bundle: &BundleSpec, line_c1: &CohomologyClass) -> Result<BundleSpec> {
    if !line_c1.is_homogeneous(1) {
        return domain("line bundle class must be homogeneous of degree 1");
    }
    let n = bundle.n();
    if line_c1.n() != n {
        return domain("line bundle class lives in a different truncation");
    }
    let rank = bundle.rank;
    let mut total = CohomologyClass::zero(n);
    for p in 0..=rank.min(n) {
        for i in 0..=p {
            let coeff = binomial_q(rank - i, p - i);
            let term = &bundle.chern(i) * &line_c1.pow((p - i) as u32);
            total = &total + &term.scale_rational(&coeff);
        }
    }
    BundleSpec::new(rank, total)
}

/// `c(E*)`: `c_p ↦ (−1)^p c_p`.
pub fn dual_chern(bundle: &BundleSpec) -> BundleSpec {
    let parts = bundle
        .total
        .parts()
        .iter()
        .enumerate()
        .map(|(p, c)| if p % 2 == 1 { -c } else { c.clone() })
        .collect();
    let total = CohomologyClass::from_parts(bundle.n(), parts).expect("same truncation");
    BundleSpec {
        rank: bundle.rank,
        total,
    }
}

/// Total class of the virtual bundle `F − E`, i.e. `c(F)/c(E)`.
pub fn difference_chern(f: &BundleSpec, e: &BundleSpec) -> Result<CohomologyClass> {
    if f.n() != e.n() {
        return domain("bundles live in different truncations");
    }
    Ok(f.total() * &e.total().inverse()?)
}

/// `c(E ⊗ L^{⊗sign·k})` with `c₁(L) = h`.
pub fn twist_by_k(bundle: &BundleSpec, sign: i64) -> Result<BundleSpec> {
    let t = CohomologyClass::omega_k(bundle.n()).scale_rational(&BigRational::from_integer(sign.into()));
    twist_chern(bundle, &t)
}

/// Serialized form: rank and the coefficient of each `h^d`.
#[derive(Serialize)]
pub struct BundleJson {
    pub rank: usize,
    pub total: Vec<String>,
}

impl From<&BundleSpec> for BundleJson {
    fn from(b: &BundleSpec) -> Self {
        BundleJson {
            rank: b.rank,
            total: b.total.parts().iter().map(ToString::to_string).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly::int;
    use super::*;

    fn sym(n: usize, d: usize, c: i64) -> CohomologyClass {
        CohomologyClass::monomial(n, QPoly::from_int(c), d)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn line_bundle_twist() {
        let n = 3;
        let e = BundleSpec::from_rationals(1, n, &[int(2)]).unwrap();
        let t = sym(n, 1, 5);
        let tw = twist_chern(&e, &t).unwrap();
        assert_eq!(tw.chern(1), sym(n, 1, 7));
        assert_eq!(tw.chern(2), CohomologyClass::zero(n));
    }

    #[test]
    fn rank_two_twist_matches_splitting() {
        // x₁ = 1, x₂ = 2 so e₁ = 3, e₂ = 2; t = 5: (1+6)(1+7) → c₁ = 13, c₂ = 42.
        let n = 4;
        let e = BundleSpec::from_rationals(2, n, &[int(3), int(2)]).unwrap();
        let tw = twist_chern(&e, &sym(n, 1, 5)).unwrap();
        assert_eq!(tw.chern(1), sym(n, 1, 13));
        assert_eq!(tw.chern(2), sym(n, 2, 2 + 3 * 5 + 25));
        assert!(twist_chern(&e, &sym(n, 2, 1)).is_err());
    }

    #[test]
    fn twist_leading_coefficients() {
        let n = 5;
        let f = BundleSpec::from_rationals(3, n, &[int(1), int(-2), int(7)]).unwrap();
        let tw = twist_by_k(&f, 1).unwrap();
        let dual = twist_by_k(&f, -1).unwrap();
        for p in 0..=3 {
            let lead = tw.chern(p).part(p);
            assert_eq!(lead.degree(), Some(p));
            assert_eq!(lead.coeff(p), binomial_q(3, p));
            let sign = if p % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(dual.chern(p).part(p).coeff(p), binomial_q(3, p) * sign);
        }
    }

    #[test]
    fn duality_and_difference() {
        let n = 4;
        let e = BundleSpec::from_rationals(2, n, &[int(1), int(3)]).unwrap();
        assert_eq!(dual_chern(&dual_chern(&e)), e);
        assert_eq!(dual_chern(&e).chern(1), sym(n, 1, -1));
        let triv = BundleSpec::trivial(2, n).unwrap();
        assert_eq!(dual_chern(&triv), triv);
        assert_eq!(difference_chern(&e, &triv).unwrap(), *e.total());

        let line = BundleSpec::from_rationals(1, n, &[int(-1)]).unwrap();
        let geo = difference_chern(&BundleSpec::trivial(1, n).unwrap(), &line).unwrap();
        for d in 0..=n {
            assert_eq!(geo.part(d), QPoly::one());
        }
        let c = difference_chern(&e, &line).unwrap();
        assert_eq!(&c * line.total(), *e.total());
    }

    #[test]
    fn validation() {
        assert!(BundleSpec::trivial(0, 3).is_err());
        assert!(BundleSpec::from_rationals(1, 3, &[int(1), int(1)]).is_err());
        assert!(BundleSpec::new(2, sym(3, 1, 1)).is_err());
    }
}
