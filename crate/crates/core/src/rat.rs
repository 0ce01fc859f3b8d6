//! Exact rational arithmetic. Every valuation, degree, slope and exponent in
//! this crate is a [`Rat`]; nothing is ever rounded to floating point.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<BigInt>;

/// `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num/den` as a reduced rational. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Floor of a rational as BigInt.
pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Parse "a/b" or "a". Whitespace is trimmed.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let mk = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer `{t}`: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(mk(s)?)),
        Some((a, b)) => {
            let den = mk(b)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Rat::new(mk(a)?, den))
        }
    }
}

/// Render as "a/b" ("a" when the denominator is 1). Inverse of [`parse_rat`].
pub fn format_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// p^k as a rational, k possibly negative.
pub fn pow_rat(p: u64, k: i64) -> Rat {
    let base = Rat::from_integer(BigInt::from(p));
    if k >= 0 {
        let mut r = Rat::one();
        for _ in 0..k {
            r *= base.clone();
        }
        r
    } else {
        Rat::one() / pow_rat(p, -k)
    }
}

/// Serde adaptor: rationals on the wire are "num/den" strings, never floats.
pub mod rat_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Serde adaptor for `Vec<Rat>`.
pub mod rat_vec_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rat(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adaptor for `Option<Vec<Rat>>`.
pub mod rat_opt_vec_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(list) => {
                let strs: Vec<String> = list.iter().map(format_rat).collect();
                s.serialize_some(&strs)
            }
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rat>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|list| {
            list.iter()
                .map(|s| parse_rat(s).map_err(de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

/// Serde adaptor for `Option<Rat>`.
pub mod rat_opt_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&format_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|s| parse_rat(&s).map_err(de::Error::custom))
            .transpose()
    }
}

/// An exponent that is affine in an integer parameter n: `coeff * n + constant`.
/// Used to reason about families of norm bounds without fixing n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExp {
    pub n_coeff: Rat,
    pub constant: Rat,
}

impl AffineExp {
    pub fn new(n_coeff: Rat, constant: Rat) -> Self {
        AffineExp { n_coeff, constant }
    }

    pub fn eval(&self, n: i64) -> Rat {
        self.n_coeff.clone() * rat_int(n) + self.constant.clone()
    }

    /// Tends to negative infinity as n grows.
    pub fn tends_to_neg_infinity(&self) -> bool {
        self.n_coeff.is_negative()
    }

    /// Bounded above over n >= 1.
    pub fn bounded_above(&self) -> bool {
        !self.n_coeff.is_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/5", "0", "12", "-3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
        assert_eq!(parse_rat("6/8").unwrap(), rat(3, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn affine_eval() {
        let a = AffineExp::new(rat(-3, 1), rat(5, 2));
        assert_eq!(a.eval(2), rat(-7, 2));
        assert!(a.tends_to_neg_infinity());
        assert!(a.bounded_above());
        assert!(!AffineExp::new(rat_int(0), rat_int(1)).tends_to_neg_infinity());
    }
}
