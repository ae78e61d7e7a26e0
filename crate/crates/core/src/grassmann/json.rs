use nalgebra::DMatrix;
use num::{BigInt, BigRational, Complex, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::scalar::{C64, QC};
use crate::error::{Error, Result};

/// A real number in JSON: a number, or a string holding an integer or `p/q`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum JsonScalar {
    Number(serde_json::Number),
    Text(String),
}

impl JsonScalar {
    /// Exact value; floating-point literals are converted exactly.
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            JsonScalar::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigRational::from_integer(BigInt::from(i)))
                } else if let Some(u) = n.as_u64() {
                    Ok(BigRational::from_integer(BigInt::from(u)))
                } else {
                    let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                    BigRational::from_float(f).ok_or_else(|| Error::Parse(format!("non-finite number {n}")))
                }
            }
            JsonScalar::Text(s) => parse_rational(s),
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            JsonScalar::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            JsonScalar::Text(s) => parse_rational(s)?
                .to_f64()
                .ok_or_else(|| Error::Parse(format!("rational {s} does not fit a double"))),
        }
    }
}

/// Parses `"p/q"` or `"p"` with integer `p`, `q` (`q ≠ 0`).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if den == BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// `{"rows": r, "cols": N, "entries": [[re, im], ...]}` in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[JsonScalar; 2]>,
}

impl MatrixJson {
    fn check(&self) -> Result<()> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "{}×{} matrix needs {} entries, found {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        Ok(())
    }

    pub fn to_float(&self) -> Result<DMatrix<C64>> {
        self.check()?;
        let values = self
            .entries
            .iter()
            .map(|[re, im]| Ok(Complex::new(re.to_f64()?, im.to_f64()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &values))
    }

    pub fn to_exact(&self) -> Result<DMatrix<QC>> {
        self.check()?;
        let values = self
            .entries
            .iter()
            .map(|[re, im]| Ok(Complex::new(re.to_rational()?, im.to_rational()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &values))
    }

    pub fn from_float(m: &DMatrix<C64>) -> Self {
        let entries = m
            .transpose()
            .iter()
            .map(|z| [float_scalar(z.re), float_scalar(z.im)])
            .collect();
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    pub fn from_exact(m: &DMatrix<QC>) -> Self {
        let entries = m
            .transpose()
            .iter()
            .map(|z| [JsonScalar::Text(z.re.to_string()), JsonScalar::Text(z.im.to_string())])
            .collect();
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

fn float_scalar(x: f64) -> JsonScalar {
    serde_json::Number::from_f64(x)
        .map(JsonScalar::Number)
        .unwrap_or_else(|| JsonScalar::Text(x.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_entries() {
        let j: MatrixJson =
            serde_json::from_str(r#"{"rows": 1, "cols": 2, "entries": [[1, 0], ["-3/6", 0.5]]}"#).unwrap();
        let exact = j.to_exact().unwrap();
        assert_eq!(exact[(0, 1)].re, BigRational::new((-1).into(), 2.into()));
        assert_eq!(exact[(0, 1)].im, BigRational::new(1.into(), 2.into()));
        let float = j.to_float().unwrap();
        assert_eq!(float[(0, 1)], C64::new(-0.5, 0.5));
        let back = MatrixJson::from_exact(&exact).to_exact().unwrap();
        assert_eq!(back, exact);
    }

    #[test]
    fn rejects_bad_shapes_and_rationals() {
        let j: MatrixJson = serde_json::from_str(r#"{"rows": 2, "cols": 2, "entries": [[1, 0]]}"#).unwrap();
        assert!(j.to_float().is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational(" 4 / 6 ").unwrap(), BigRational::new(2.into(), 3.into()));
    }
}
