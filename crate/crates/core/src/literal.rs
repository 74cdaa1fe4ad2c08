//! JSON literals for matrices, cocharacters, Springer coefficients and
//! additive homomorphisms.
//!
//! Matrix: `{"domain": "Fp"|"Q", "p": 5, "rows": 2, "cols": 2, "entries": [[1, 0], [0, 1]]}`.
//! Entries are integers or `"a/b"` strings.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{format_rational, parse_rational, Field, Fp, Prime, Rational};
use crate::springer::{AdditiveHom, SpringerCoeffs};
use crate::torus::Cocharacter;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Value>>,
}

/// A matrix over either supported field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMat {
    Fp(Mat<Fp>),
    Q(Mat<Rational>),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn scalar_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_i64(&(), i))
            .ok_or_else(|| parse_err(format!("entry {n} is not an integer"))),
        Value::String(s) => parse_rational(s),
        other => Err(parse_err(format!("entry {other} is neither an integer nor a string"))),
    }
}

fn scalar_fp(v: &Value, p: Prime) -> Result<Fp> {
    let q = scalar_rational(v)?;
    let num = Fp::new(residue(q.numer(), p), p);
    let den = Fp::new(residue(q.denom(), p), p);
    let inv = den
        .inverse()
        .ok_or_else(|| parse_err(format!("denominator of {} vanishes mod {p}", format_rational(&q))))?;
    Ok(num * inv)
}

fn residue(b: &num_bigint::BigInt, p: Prime) -> i64 {
    let r = b.mod_floor(&num_bigint::BigInt::from(p.get()));
    i64::try_from(r).expect("residue below p")
}

impl MatrixLiteral {
    pub fn parse(&self) -> Result<AnyMat> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(parse_err(format!(
                "entries do not form a {}x{} array",
                self.rows, self.cols
            )));
        }
        let flat = self.entries.iter().flatten();
        match self.domain.as_str() {
            "Fp" => {
                let p = Prime::new(
                    self.p
                        .ok_or_else(|| parse_err("domain Fp needs a prime \"p\""))?,
                )?;
                let data = flat.map(|v| scalar_fp(v, p)).collect::<Result<Vec<_>>>()?;
                Ok(AnyMat::Fp(Mat::from_vec(&p, self.rows, self.cols, data)?))
            }
            "Q" => {
                let data = flat.map(scalar_rational).collect::<Result<Vec<_>>>()?;
                Ok(AnyMat::Q(Mat::from_vec(&(), self.rows, self.cols, data)?))
            }
            other => Err(parse_err(format!("unknown domain {other:?}"))),
        }
    }
}

impl AnyMat {
    pub fn from_json(s: &str) -> Result<Self> {
        let lit: MatrixLiteral = serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?;
        lit.parse()
    }

    pub fn to_literal(&self) -> MatrixLiteral {
        match self {
            AnyMat::Fp(m) => fp_literal(m),
            AnyMat::Q(m) => q_literal(m),
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            AnyMat::Fp(m) => m.rows(),
            AnyMat::Q(m) => m.rows(),
        }
    }
}

pub fn fp_literal(m: &Mat<Fp>) -> MatrixLiteral {
    MatrixLiteral {
        domain: "Fp".into(),
        p: Some(m.domain().get()),
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| Value::from(x.residue())).collect())
            .collect(),
    }
}

pub fn q_literal(m: &Mat<Rational>) -> MatrixLiteral {
    MatrixLiteral {
        domain: "Q".into(),
        p: None,
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            i64::try_from(x.numer().clone())
                                .map(Value::from)
                                .unwrap_or_else(|_| Value::from(format_rational(x)))
                        } else {
                            Value::from(format_rational(x))
                        }
                    })
                    .collect()
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisLiteral {
    Named(String),
    Matrix(MatrixLiteral),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocharacterLiteral {
    pub weights: Vec<i64>,
    pub basis: BasisLiteral,
}

impl CocharacterLiteral {
    /// Over `F_p`; an `"identity"` basis takes the prime from the caller.
    pub fn parse_fp(&self, p: Prime) -> Result<Cocharacter<Fp>> {
        let basis = match &self.basis {
            BasisLiteral::Named(s) if s == "identity" => Mat::identity(&p, self.weights.len()),
            BasisLiteral::Named(s) => return Err(parse_err(format!("unknown basis {s:?}"))),
            BasisLiteral::Matrix(m) => match m.parse()? {
                AnyMat::Fp(b) if *b.domain() == p => b,
                _ => return Err(Error::Domain(format!("basis is not a matrix over F_{p}"))),
            },
        };
        Cocharacter::new(basis, self.weights.clone())
    }

    pub fn parse_q(&self) -> Result<Cocharacter<Rational>> {
        let basis = match &self.basis {
            BasisLiteral::Named(s) if s == "identity" => Mat::identity(&(), self.weights.len()),
            BasisLiteral::Named(s) => return Err(parse_err(format!("unknown basis {s:?}"))),
            BasisLiteral::Matrix(m) => match m.parse()? {
                AnyMat::Q(b) => b,
                AnyMat::Fp(_) => return Err(Error::Domain("basis is not a matrix over Q".into())),
            },
        };
        Cocharacter::new(basis, self.weights.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpringerLiteral {
    pub p: Value,
    pub a: Vec<Value>,
}

/// Springer coefficients over either field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySpringer {
    Fp(SpringerCoeffs<Fp>),
    Q(SpringerCoeffs<Rational>),
}

impl SpringerLiteral {
    pub fn parse(&self) -> Result<AnySpringer> {
        match &self.p {
            Value::String(s) if s == "Q" => {
                let a = self.a.iter().map(scalar_rational).collect::<Result<Vec<_>>>()?;
                Ok(AnySpringer::Q(SpringerCoeffs::new(&(), a)?))
            }
            Value::Number(n) => {
                let p = Prime::new(
                    n.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| parse_err(format!("bad prime {n}")))?,
                )?;
                let a = self.a.iter().map(|v| scalar_fp(v, p)).collect::<Result<Vec<_>>>()?;
                Ok(AnySpringer::Fp(SpringerCoeffs::new(&p, a)?))
            }
            other => Err(parse_err(format!("\"p\" must be a prime or \"Q\", got {other}"))),
        }
    }
}

/// An additive homomorphism from a JSON list of matrix literals over one `F_p`.
pub fn parse_additive_hom(s: &str) -> Result<AdditiveHom> {
    let lits: Vec<MatrixLiteral> = serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?;
    let mut coeffs = Vec::with_capacity(lits.len());
    for lit in &lits {
        match lit.parse()? {
            AnyMat::Fp(m) => coeffs.push(m),
            AnyMat::Q(_) => return Err(Error::Domain("additive homomorphisms live over F_p".into())),
        }
    }
    let first = coeffs
        .first()
        .ok_or_else(|| parse_err("an additive homomorphism needs at least one coefficient"))?;
    let (p, n) = (*first.domain(), first.rows());
    AdditiveHom::new(p, n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let s = r#"{"domain":"Fp","p":5,"rows":2,"cols":2,"entries":[[1,7],[-1,"1/2"]]}"#;
        let AnyMat::Fp(m) = AnyMat::from_json(s).unwrap() else {
            panic!("expected F_p")
        };
        let p = Prime::new(5).unwrap();
        assert_eq!(m, Mat::from_ints(&p, 2, 2, &[1, 2, 4, 3]));
        let back = serde_json::to_string(&fp_literal(&m)).unwrap();
        assert_eq!(AnyMat::from_json(&back).unwrap(), AnyMat::Fp(m));

        let s = r#"{"domain":"Q","rows":1,"cols":2,"entries":[["3/6",-4]]}"#;
        let q = AnyMat::from_json(s).unwrap();
        let lit = q.to_literal();
        assert_eq!(lit.entries[0], vec![Value::from("1/2"), Value::from(-4)]);
    }

    #[test]
    fn malformed_literals() {
        assert!(AnyMat::from_json(r#"{"domain":"Fp","rows":1,"cols":1,"entries":[[1]]}"#).is_err());
        assert!(AnyMat::from_json(r#"{"domain":"Fp","p":4,"rows":1,"cols":1,"entries":[[1]]}"#).is_err());
        assert!(AnyMat::from_json(r#"{"domain":"Q","rows":2,"cols":1,"entries":[[1]]}"#).is_err());
        assert!(AnyMat::from_json(r#"{"domain":"Fp","p":3,"rows":1,"cols":1,"entries":[["1/3"]]}"#).is_err());
        assert!(AnyMat::from_json(r#"{"domain":"R","rows":1,"cols":1,"entries":[[1]]}"#).is_err());
    }

    #[test]
    fn cocharacter_and_springer_literals() {
        let c: CocharacterLiteral = serde_json::from_str(r#"{"weights":[1,0,-1],"basis":"identity"}"#).unwrap();
        let p = Prime::new(3).unwrap();
        assert_eq!(c.parse_fp(p).unwrap().weights(), &[1, 0, -1]);

        let s: SpringerLiteral = serde_json::from_str(r#"{"p":"Q","a":[1,"1/2"]}"#).unwrap();
        assert!(matches!(s.parse().unwrap(), AnySpringer::Q(_)));
        let s: SpringerLiteral = serde_json::from_str(r#"{"p":5,"a":[0,1]}"#).unwrap();
        assert!(s.parse().is_err());

        let h = parse_additive_hom(
            r#"[{"domain":"Fp","p":2,"rows":2,"cols":2,"entries":[[0,0],[0,0]]},
                {"domain":"Fp","p":2,"rows":2,"cols":2,"entries":[[0,1],[0,0]]}]"#,
        )
        .unwrap();
        assert_eq!(h.coeffs().len(), 2);
    }
}
