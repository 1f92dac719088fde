//! JSON form `{ "terms": [ { "rate": "p/q", "coeffs": [[re, im], ...] } ] }`
//! with every scalar written as a decimal string at full precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GaussianPolySum, GaussianTerm};
use crate::error::{Error, Result};
use crate::scalar::{c_parse_decimal, c_to_decimal, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianTermJson {
    pub rate: String,
    pub coeffs: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPolySumJson {
    pub terms: Vec<GaussianTermJson>,
}

fn parse_rate(s: &str) -> Result<BigRational> {
    let bad = || Error::Serialization(format!("rate {s:?} is not of the form p/q"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl<R: Real> GaussianPolySum<R> {
    pub fn to_json_repr(&self) -> GaussianPolySumJson {
        GaussianPolySumJson {
            terms: self
                .terms
                .iter()
                .map(|t| GaussianTermJson {
                    rate: format!("{}/{}", t.rate.numer(), t.rate.denom()),
                    coeffs: t.coeffs.iter().map(c_to_decimal).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json_repr(repr: &GaussianPolySumJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in &repr.terms {
            let rate = parse_rate(&t.rate)?;
            let coeffs = t
                .coeffs
                .iter()
                .map(|pair| {
                    c_parse_decimal(pair).ok_or_else(|| {
                        Error::Serialization(format!("bad coefficient {pair:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push(GaussianTerm::new(rate, coeffs)?);
        }
        Ok(Self::from_terms(terms))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("plain strings serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_repr(&serde_json::from_str(s)?)
    }
}

impl<R: Real> Serialize for GaussianPolySum<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_repr().serialize(serializer)
    }
}

impl<'de, R: Real> Deserialize<'de> for GaussianPolySum<R> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GaussianPolySumJson::deserialize(deserializer)?;
        Self::from_json_repr(&repr).map_err(serde::de::Error::custom)
    }
}
