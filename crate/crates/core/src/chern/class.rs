use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigRational, Zero};

use super::poly::QPoly;
use crate::error::{domain, Error, Result};

/// An element `Σ_d a_d(k)·h^d` of `ℚ[k][h]/(h^{n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomologyClass {
    n: usize,
    /// `parts[d]` is the coefficient of `h^d`; always `n + 1` entries.
    parts: Vec<QPoly>,
}

impl CohomologyClass {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            parts: vec![QPoly::zero(); n + 1],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, QPoly::one())
    }

    pub fn constant(n: usize, c: QPoly) -> Self {
        Self::monomial(n, c, 0)
    }

    /// `c·h^d`, zero when `d > n`.
    pub fn monomial(n: usize, c: QPoly, degree: usize) -> Self {
        let mut out = Self::zero(n);
        if degree <= n {
            out.parts[degree] = c;
        }
        out
    }

    /// The hyperplane generator `h`.
    pub fn h(n: usize) -> Self {
        Self::monomial(n, QPoly::one(), 1)
    }

    /// `ω_k = k·h`.
    pub fn omega_k(n: usize) -> Self {
        Self::monomial(n, QPoly::k(), 1)
    }

    /// Builds a class from its coefficients by degree; degrees above `n`
    /// must vanish.
    pub fn from_parts(n: usize, mut parts: Vec<QPoly>) -> Result<Self> {
        if parts.iter().skip(n + 1).any(|p| !p.is_zero()) {
            return domain(format!("class has nonzero terms above degree {n}"));
        }
        parts.resize(n + 1, QPoly::zero());
        parts.truncate(n + 1);
        Ok(Self { n, parts })
    }

    /// `1 + Σ c_i h^i` from rational multiples of `h^i`, `i = 1, 2, …`.
    pub fn total_from_rationals(n: usize, c: &[BigRational]) -> Result<Self> {
        let mut parts = vec![QPoly::one()];
        parts.extend(c.iter().map(|x| QPoly::constant(x.clone())));
        Self::from_parts(n, parts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of `h^d` (zero above `n`).
    pub fn part(&self, d: usize) -> QPoly {
        self.parts.get(d).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> &[QPoly] {
        &self.parts
    }

    /// The degree-`d` component as a class.
    pub fn component(&self, d: usize) -> Self {
        Self::monomial(self.n, self.part(d), d)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(QPoly::is_zero)
    }

    /// True when every nonzero term has degree `d` (the zero class counts).
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.parts.iter().enumerate().all(|(i, p)| i == d || p.is_zero())
    }

    /// Highest degree with a nonzero coefficient.
    pub fn top_degree(&self) -> Option<usize> {
        self.parts.iter().rposition(|p| !p.is_zero())
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        Self {
            n: self.n,
            parts: self.parts.iter().map(|p| p * c).collect(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.scale(&QPoly::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.n), |acc, _| &acc * self)
    }

    /// Multiplicative inverse as a truncated power series. The degree-0
    /// term must be a nonzero rational constant.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self
            .parts[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Domain("series inverse needs an invertible constant term".into()))?;
        let inv0 = QPoly::constant(a0.recip());
        let mut b = vec![QPoly::zero(); self.n + 1];
        b[0] = inv0.clone();
        for d in 1..=self.n {
            let mut acc = QPoly::zero();
            for i in 1..=d {
                acc = &acc + &(&self.parts[i] * &b[d - i]);
            }
            b[d] = -(&acc * &inv0);
        }
        Ok(Self { n: self.n, parts: b })
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.n, other.n, "classes live in different truncations");
    }
}

impl Add for &CohomologyClass {
    type Output = CohomologyClass;
    fn add(self, rhs: &CohomologyClass) -> CohomologyClass {
        self.check_same(rhs);
        CohomologyClass {
            n: self.n,
            parts: self.parts.iter().zip(&rhs.parts).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CohomologyClass {
    type Output = CohomologyClass;
    fn sub(self, rhs: &CohomologyClass) -> CohomologyClass {
        self.check_same(rhs);
        CohomologyClass {
            n: self.n,
            parts: self.parts.iter().zip(&rhs.parts).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CohomologyClass {
    type Output = CohomologyClass;
    fn mul(self, rhs: &CohomologyClass) -> CohomologyClass {
        self.check_same(rhs);
        let n = self.n;
        let mut parts = vec![QPoly::zero(); n + 1];
        for (i, a) in self.parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.parts.iter().enumerate().take(n + 1 - i) {
                parts[i + j] = &parts[i + j] + &(a * b);
            }
        }
        CohomologyClass { n, parts }
    }
}

impl Neg for &CohomologyClass {
    type Output = CohomologyClass;
    fn neg(self) -> CohomologyClass {
        CohomologyClass {
            n: self.n,
            parts: self.parts.iter().map(|p| -p).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CohomologyClass {
            type Output = CohomologyClass;
            fn $m(self, rhs: CohomologyClass) -> CohomologyClass {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CohomologyClass {
    type Output = CohomologyClass;
    fn neg(self) -> CohomologyClass {
        -&self
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .parts
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(d, p)| match d {
                0 => format!("({p})"),
                1 => format!("({p})*h"),
                _ => format!("({p})*h^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
