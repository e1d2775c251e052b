//! Nonnegative exact rational vertex weights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};

pub type Rational = BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `"3"`, `"-2/5"` or `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Vertex weights; `normal` means they sum to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFn {
    values: Vec<Rational>,
}

impl WeightFn {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().position(|w| w.is_negative()) {
            return Err(Error::input(format!("negative weight at vertex {v}")));
        }
        Ok(WeightFn { values })
    }

    pub fn zero(n: usize) -> Self {
        WeightFn {
            values: vec![Rational::zero(); n],
        }
    }

    pub fn uniform(n: usize) -> Self {
        WeightFn {
            values: vec![ratio(1, n as i64); n],
        }
    }

    pub fn dirac(n: usize, v: Vertex) -> Self {
        let mut w = Self::zero(n);
        w.values[v] = Rational::one();
        w
    }

    /// Uniform on `support`, zero elsewhere; all zero (not normal) if `support` is empty.
    pub fn uniform_on(n: usize, support: &VertexSet) -> Self {
        let mut w = Self::zero(n);
        if support.is_empty() {
            return w;
        }
        let share = ratio(1, support.len() as i64);
        for &v in support {
            w.values[v] = share.clone();
        }
        w
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, v: Vertex) -> &Rational {
        &self.values[v]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn weight(&self, xs: &VertexSet) -> Rational {
        xs.iter()
            .fold(Rational::zero(), |acc, &v| acc + &self.values[v])
    }

    pub fn total(&self) -> Rational {
        self.values.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn is_normal(&self) -> bool {
        self.total().is_one()
    }
}

impl Serialize for WeightFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.values.iter().map(format_rational).collect();
        strs.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWeight {
    Int(i64),
    Float(f64),
    Text(String),
}

impl<'de> Deserialize<'de> for WeightFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<RawWeight> = Vec::deserialize(d)?;
        let values = raw
            .into_iter()
            .map(|r| match r {
                RawWeight::Int(i) => Ok(Rational::from_integer(BigInt::from(i))),
                RawWeight::Float(f) => parse_rational(&f.to_string()),
                RawWeight::Text(s) => parse_rational(&s),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        WeightFn::new(values).map_err(D::Error::custom)
    }
}

/// `#[serde(with = ...)]` helpers that write rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        use serde::de::Error as _;
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            r: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            r.iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            use serde::de::Error as _;
            let raw: Vec<String> = Vec::deserialize(d)?;
            raw.iter()
                .map(|x| parse_rational(x).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::set;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn normality_is_exact() {
        assert!(WeightFn::uniform(3).is_normal());
        assert!(WeightFn::uniform(7).is_normal());
        assert!(WeightFn::dirac(4, 2).is_normal());
        assert!(WeightFn::uniform_on(6, &set([1, 4, 5])).is_normal());
        assert!(!WeightFn::zero(3).is_normal());
        assert!(WeightFn::new(vec![ratio(-1, 2)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let w = WeightFn::new(vec![ratio(1, 3), ratio(2, 3), ratio(0, 1)]).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"["1/3","2/3","0"]"#);
        let back: WeightFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let mixed: WeightFn = serde_json::from_str(r#"[1, "1/2", 0.5]"#).unwrap();
        assert_eq!(mixed.total(), ratio(2, 1));
    }
}
