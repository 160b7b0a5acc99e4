//! Scalar abstractions shared by the exact and floating-point layers.
//!
//! All exact lattice code is written against [`IntScalar`], which is
//! implemented for `i64`, `i128` and `BigInt`. The everyday aliases at the
//! crate root pick `i64` (small coordinates, enumeration-heavy code) and
//! `BigInt` (products of long random walks).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as a lattice coordinate.
pub trait IntScalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;

    /// `None` when the value does not fit.
    fn from_bigint(value: &BigInt) -> Option<Self>;

    fn from_int(value: i64) -> Self {
        <Self as FromPrimitive>::from_i64(value).expect("every IntScalar holds i64")
    }
}

impl IntScalar for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        value.to_i64()
    }
}

impl IntScalar for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        value.to_i128()
    }
}

impl IntScalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

/// Exact rational over an integer scalar.
pub type Rat<T> = Ratio<T>;

/// Widen a rational to arbitrary precision.
pub fn rat_to_big<T: IntScalar>(q: &Ratio<T>) -> Ratio<BigInt> {
    Ratio::new(q.numer().to_bigint(), q.denom().to_bigint())
}

/// Lowest-terms string: `"3/2"`, `"-1"`, `"0"`.
pub fn rat_to_string<T: IntScalar>(q: &Ratio<T>) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rat<T: IntScalar>(s: &str) -> Option<Ratio<T>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse::<T>().ok()?;
            let q = q.trim().parse::<T>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Ratio::new(p, q))
            }
        }
        None => s.parse::<T>().ok().map(Ratio::from_integer),
    }
}

/// Floating-point view of a big rational, correct to roughly double precision.
pub fn big_rat_to_f64(q: &Ratio<BigInt>) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale down huge numerator/denominator pairs before converting.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        let q: Ratio<i64> = parse_rat("6/4").unwrap();
        assert_eq!(rat_to_string(&q), "3/2");
        let z: Ratio<BigInt> = parse_rat("-0").unwrap();
        assert_eq!(rat_to_string(&z), "0");
        assert!(parse_rat::<i64>("1/0").is_none());
        assert!(parse_rat::<i64>("x").is_none());
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigInt::from(3) << 4000usize;
        let q = Ratio::new(big.clone(), big * 2);
        assert!((big_rat_to_f64(&q) - 0.5).abs() < 1e-15);
    }
}
