//! Exact rational arithmetic helpers. All quantities in the crate (densities,
//! radii, margins) are `Rat`; no floating point anywhere in the core.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders as "num/den", always with an explicit denominator.
pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "num/den" or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad rational {s:?}")))?;
    let denom: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad rational {s:?}")))?;
    if denom.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

/// Serde helper: rationals cross the JSON boundary as "num/den" strings.
pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_str(r))
}

pub fn deserialize_rat<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
    let s = <String as serde::Deserialize>::deserialize(d)?;
    parse_rat(&s).map_err(serde::de::Error::custom)
}

/// Reduces into [0, 1).
pub fn frac_mod1(r: &Rat) -> Rat {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

/// The circle metric d(x, y) = min{|x-y|, 1-|x-y|} for x, y in [0, 1).
pub fn circle_dist(x: &Rat, y: &Rat) -> Rat {
    let d = (x - y).abs();
    let d = frac_mod1(&d);
    let alt = Rat::one() - &d;
    if d <= alt {
        d
    } else {
        alt
    }
}
