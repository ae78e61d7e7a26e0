use num::{BigInt, BigRational, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::bundle::{binomial_q, difference_chern, twist_by_k, BundleJson, BundleSpec};
use super::class::CohomologyClass;
use super::poly::{rat, QPoly};
use super::porteous::porteous_delta;
use crate::error::{domain, Error, Result};

/// An integrated class. `raw` is the coefficient `a_n(k)` of `h^n`; since
/// `vol_{ω_k}(M) = k^n`, the multiple of the volume is `a_n(k)/k^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeMultiple {
    n: usize,
    raw: QPoly,
}

impl VolumeMultiple {
    pub fn raw(&self) -> &QPoly {
        &self.raw
    }

    /// The `k → ∞` limit of `a_n(k)/k^n`.
    pub fn limit(&self) -> BigRational {
        self.raw.coeff(self.n)
    }

    /// Terms `(e, c)` of the Laurent expansion `Σ c·k^e`, highest first.
    pub fn expansion(&self) -> Vec<(i64, BigRational)> {
        self.raw
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 - self.n as i64, c.clone()))
            .collect()
    }

    /// `(power, coefficient)` of the highest nonzero power of `k` in `raw`.
    pub fn leading(&self) -> Option<(usize, BigRational)> {
        self.raw.leading().map(|(d, c)| (d, c.clone()))
    }
}

impl Serialize for VolumeMultiple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VolumeMultiple", 4)?;
        st.serialize_field("raw", &self.raw.to_string())?;
        st.serialize_field("leading_power", &self.leading().map(|l| l.0))?;
        st.serialize_field("per_unit_vol", &self.limit().to_string())?;
        let terms: Vec<(i64, String)> = self.expansion().into_iter().map(|(e, c)| (e, c.to_string())).collect();
        st.serialize_field("expansion", &terms)?;
        st.end()
    }
}

/// `∫_M cls`, reported per unit `vol_{ω_k}(M)`.
pub fn integrate(cls: &CohomologyClass) -> VolumeMultiple {
    VolumeMultiple {
        n: cls.n(),
        raw: cls.part(cls.n()),
    }
}

/// Invariants of a locus of complex dimension `locus_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub locus_dim: usize,
    pub vol: VolumeMultiple,
    pub n1: Option<VolumeMultiple>,
    pub n11: Option<VolumeMultiple>,
    pub n2: Option<VolumeMultiple>,
}

fn quotient(a: Option<&VolumeMultiple>, b: Option<&VolumeMultiple>) -> Option<BigRational> {
    let den = b?.limit();
    if den.is_zero() {
        None
    } else {
        Some(a?.limit() / den)
    }
}

impl InvariantReport {
    pub fn n1_over_vol(&self) -> Option<BigRational> {
        quotient(self.n1.as_ref(), Some(&self.vol))
    }

    pub fn n11_over_vol(&self) -> Option<BigRational> {
        quotient(self.n11.as_ref(), Some(&self.vol))
    }

    pub fn n2_over_vol(&self) -> Option<BigRational> {
        quotient(self.n2.as_ref(), Some(&self.vol))
    }

    pub fn n2_over_n11(&self) -> Option<BigRational> {
        quotient(self.n2.as_ref(), self.n11.as_ref())
    }
}

impl Serialize for InvariantReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let txt = |q: Option<BigRational>| q.map(|q| q.to_string());
        let mut st = s.serialize_struct("InvariantReport", 9)?;
        st.serialize_field("locus_dim", &self.locus_dim)?;
        st.serialize_field("vol", &self.vol)?;
        st.serialize_field("n1", &self.n1)?;
        st.serialize_field("n11", &self.n11)?;
        st.serialize_field("n2", &self.n2)?;
        st.serialize_field("n1_over_vol", &txt(self.n1_over_vol()))?;
        st.serialize_field("n11_over_vol", &txt(self.n11_over_vol()))?;
        st.serialize_field("n2_over_vol", &txt(self.n2_over_vol()))?;
        st.serialize_field("n2_over_n11", &txt(self.n2_over_n11()))?;
        st.end()
    }
}

/// Degeneracy locus `D_r` of a generic morphism `E⊗(L*)^{⊗k} → F⊗L^{⊗k}`
/// over a manifold of complex dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminantalProblem {
    n: usize,
    r: usize,
    tm: BundleSpec,
    e: BundleSpec,
    f: BundleSpec,
}

impl DeterminantalProblem {
    pub fn new(r: usize, tm: BundleSpec, e: BundleSpec, f: BundleSpec) -> Result<Self> {
        let n = tm.rank();
        if tm.n() != n || e.n() != n || f.n() != n {
            return domain(format!("all classes must be truncated at the manifold dimension {n}"));
        }
        let (r_e, r_f) = (e.rank(), f.rank());
        if r >= r_e.min(r_f) {
            return domain(format!("target rank r = {r} must be below min(r_e, r_f) = {}", r_e.min(r_f)));
        }
        let codim = (r_e - r) * (r_f - r);
        if codim > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: codim,
            });
        }
        Ok(Self { n, r, tm, e, f })
    }

    /// All input classes trivial.
    pub fn trivial(n: usize, r_e: usize, r_f: usize, r: usize) -> Result<Self> {
        Self::new(
            r,
            BundleSpec::trivial(n, n)?,
            BundleSpec::trivial(r_e, n)?,
            BundleSpec::trivial(r_f, n)?,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn r_e(&self) -> usize {
        self.e.rank()
    }
    pub fn r_f(&self) -> usize {
        self.f.rank()
    }
    pub fn tangent(&self) -> &BundleSpec {
        &self.tm
    }
    pub fn e(&self) -> &BundleSpec {
        &self.e
    }
    pub fn f(&self) -> &BundleSpec {
        &self.f
    }

    pub fn codimension(&self) -> usize {
        (self.r_e() - self.r) * (self.r_f() - self.r)
    }

    pub fn locus_dim(&self) -> usize {
        self.n - self.codimension()
    }

    /// `E⊗(L*)^{⊗k}`.
    pub fn twisted_e(&self) -> BundleSpec {
        twist_by_k(&self.e, -1).expect("valid twist")
    }

    /// `F⊗L^{⊗k}`.
    pub fn twisted_f(&self) -> BundleSpec {
        twist_by_k(&self.f, 1).expect("valid twist")
    }

    /// `c(F⊗L^{⊗k} − E⊗(L*)^{⊗k})`.
    pub fn difference_class(&self) -> CohomologyClass {
        difference_chern(&self.twisted_f(), &self.twisted_e()).expect("c(E) starts with 1")
    }

    pub fn delta(&self, indices: &[usize]) -> CohomologyClass {
        porteous_delta(&self.difference_class(), self.r_e(), self.r_f(), self.r, indices)
            .expect("problem validated")
    }

    pub fn volume(&self) -> VolumeMultiple {
        integrate(&(&self.delta(&[]) * &CohomologyClass::omega_k(self.n).pow(self.locus_dim() as u32)))
    }

    /// Whatever Harris–Tu numbers apply to the locus dimension; only the
    /// volume for dimensions other than 1 and 2.
    pub fn solve(&self) -> InvariantReport {
        match self.locus_dim() {
            1 => harris_tu_n1(self).expect("dimension checked"),
            2 => harris_tu_n11_n2(self).expect("dimension checked"),
            d => InvariantReport {
                locus_dim: d,
                vol: self.volume(),
                n1: None,
                n11: None,
                n2: None,
            },
        }
    }
}

impl Serialize for DeterminantalProblem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DeterminantalProblem", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("r_e", &self.r_e())?;
        st.serialize_field("r_f", &self.r_f())?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("tangent", &BundleJson::from(&self.tm))?;
        st.serialize_field("e", &BundleJson::from(&self.e))?;
        st.serialize_field("f", &BundleJson::from(&self.f))?;
        st.end()
    }
}

fn signed(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Shared pieces of the Harris–Tu formulas.
struct Terms {
    n: usize,
    a: usize,
    q: usize,
    d: i64,
    c1m: CohomologyClass,
    c2m: CohomologyClass,
    c1e: CohomologyClass,
    c2e: CohomologyClass,
    c1f: CohomologyClass,
    c2f: CohomologyClass,
    /// `c₁(E) − c₁(F)` of the twisted bundles.
    c1ef: CohomologyClass,
    /// `c₁(M) + a·c₁(E − F)`.
    base: CohomologyClass,
}

impl Terms {
    fn new(p: &DeterminantalProblem) -> Self {
        let (e, f) = (p.twisted_e(), p.twisted_f());
        let a = p.r_e() - p.r;
        let c1ef = &e.chern(1) - &f.chern(1);
        let c1m = p.tm.chern(1);
        let base = &c1m + &c1ef.scale_rational(&signed(a as i64));
        Terms {
            n: p.n,
            a,
            q: p.r_f() - p.r,
            d: p.r_e() as i64 - p.r_f() as i64,
            c2m: p.tm.chern(2),
            c1e: e.chern(1),
            c2e: e.chern(2),
            c1f: f.chern(1),
            c2f: f.chern(2),
            c1m,
            c1ef,
            base,
        }
    }

    fn constant(&self, q: BigRational) -> CohomologyClass {
        CohomologyClass::constant(self.n, QPoly::constant(q))
    }
}

fn require_dim(p: &DeterminantalProblem, dim: usize) -> Result<()> {
    let expected = p.codimension() + dim;
    if p.n != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: p.n,
        });
    }
    Ok(())
}

/// `n₁ = ⟨(c₁(M) + (r_e−r)c₁(E−F))Δ + (r_e−r_f)Δ₁, [M]⟩` for a curve.
pub fn harris_tu_n1(p: &DeterminantalProblem) -> Result<InvariantReport> {
    require_dim(p, 1)?;
    let t = Terms::new(p);
    let delta = p.delta(&[]);
    let delta1 = p.delta(&[1]);
    let n1 = &(&t.base * &delta) + &delta1.scale_rational(&signed(t.d));
    Ok(InvariantReport {
        locus_dim: 1,
        vol: p.volume(),
        n1: Some(integrate(&n1)),
        n11: None,
        n2: None,
    })
}

/// `n₁₁` and `n₂` for a surface.
pub fn harris_tu_n11_n2(p: &DeterminantalProblem) -> Result<InvariantReport> {
    require_dim(p, 2)?;
    let t = Terms::new(p);
    let delta = p.delta(&[]);
    let d1 = p.delta(&[1]);
    let d2 = p.delta(&[2]);
    let d11 = p.delta(&[1, 1]);
    let (a, d) = (t.a as i64, t.d);

    let n11 = &(&(&t.base * &t.base) * &delta)
        + &(&(&t.base * &d1).scale_rational(&signed(2 * d))
            + &(&d2 + &d11).scale_rational(&signed(d * d)));

    let c2_block = [
        t.c2m.clone(),
        (&t.c1m * &t.c1ef).scale_rational(&signed(a)),
        (&t.c2e - &t.c2f).scale_rational(&signed(a)),
        (&t.c1e * &t.c1e).scale_rational(&binomial_q(t.a, 2)),
        (&t.c1e * &t.c1f).scale_rational(&signed(-a * a)),
        (&t.c1f * &t.c1f).scale_rational(&binomial_q(t.a + 1, 2)),
    ]
    .iter()
    .fold(CohomologyClass::zero(t.n), |acc, x| &acc + x);
    let d1_block = &t.c1m.scale_rational(&signed(a)) + &t.c1ef.scale_rational(&signed(a * d - 1));
    let (aq, qq) = (a + t.q as i64, d * d);
    let n2 = [
        &c2_block * &delta,
        &d1_block * &d1,
        &d2 * &t.constant(rat(qq + aq - 2, 2)),
        &d11 * &t.constant(rat(qq - aq - 2, 2)),
    ]
    .iter()
    .fold(CohomologyClass::zero(t.n), |acc, x| &acc + x);

    Ok(InvariantReport {
        locus_dim: 2,
        vol: p.volume(),
        n1: None,
        n11: Some(integrate(&n11)),
        n2: Some(integrate(&n2)),
    })
}

/// Invariants of the zero set `Z` of a transverse section of `g` (already
/// twisted), or of `M` itself when `g` is `None`. With `d = dim Z`:
/// `vol = ⟨c_top(G) ω_k^d⟩`, `n₁ = ⟨c₁(TM−G) ω_k^{d−1} c_top(G)⟩`,
/// `n₁₁ = ⟨c₁(TM−G)² ω_k^{d−2} c_top(G)⟩`, `n₂ = ⟨c₂(TM−G) ω_k^{d−2} c_top(G)⟩`.
pub fn zero_locus_invariants(tm: &BundleSpec, g: Option<&BundleSpec>) -> Result<InvariantReport> {
    let n = tm.rank();
    if tm.n() != n {
        return domain("tangent bundle rank must equal the manifold dimension");
    }
    let (rank, top, tz) = match g {
        None => (0, CohomologyClass::one(n), tm.total().clone()),
        Some(g) => {
            if g.n() != n {
                return domain("bundle truncated at a different dimension");
            }
            (g.rank(), g.chern(g.rank()), difference_chern(tm, g)?)
        }
    };
    if rank >= n {
        return domain(format!("zero locus of a rank {rank} bundle on a {n}-fold is not positive-dimensional"));
    }
    let d = n - rank;
    let w = CohomologyClass::omega_k(n);
    let on_z = |cls: &CohomologyClass, w_power: usize| integrate(&(&(cls * &w.pow(w_power as u32)) * &top));
    let c1 = tz.component(1);
    let c2 = tz.component(2);
    Ok(InvariantReport {
        locus_dim: d,
        vol: on_z(&CohomologyClass::one(n), d),
        n1: Some(on_z(&c1, d - 1)),
        n11: (d >= 2).then(|| on_z(&(&c1 * &c1), d - 2)),
        n2: (d >= 2).then(|| on_z(&c2, d - 2)),
    })
}

/// Zero-locus invariants of `E⊗L^{⊗k}`.
pub fn auroux_invariants(tm: &BundleSpec, e: &BundleSpec) -> Result<InvariantReport> {
    zero_locus_invariants(tm, Some(&twist_by_k(e, 1)?))
}
