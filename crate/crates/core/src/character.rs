//! Characters of `Z^r`, i.e. points of the dual torus `T^r`, and the
//! canonical pairing `⟨ξ, v⟩ = Σ ξ_i v_i mod 1`.
//!
//! A torus coordinate is stored symbolically as a rational part plus an
//! integer combination of named irrational basis numbers. Two kinds of basis
//! number exist:
//!
//! * `sqrtK` for square-free `K > 1`. These are linearly independent over
//!   `Q` together with 1, so rationality of any combination is decided
//!   exactly, and numeric values are computed to any requested precision with
//!   integer square roots (the error does not grow with the coefficient).
//! * named constants given by a tag and a finite decimal expansion. Distinct
//!   tags are treated as independent; numeric error grows linearly with the
//!   coefficient and is reported.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Matrix, Vector};
use crate::scalar::{big_rat_to_f64, IntScalar};

/// Decimal digits carried by irrational coordinates unless asked otherwise.
pub const DEFAULT_DIGITS: u32 = 64;

/// Binary precision equivalent to `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32
}

#[derive(Clone, Debug)]
pub enum BasisKind {
    /// `√k`, `k` square-free and `> 1`.
    Sqrt(u64),
    /// A constant known through a truncated decimal expansion in `[0, 1)`.
    Digits { approx: BigRational, digits: u32 },
}

/// Irrational basis number. Identity (equality, order, hashing) is by tag.
#[derive(Clone, Debug)]
pub struct Basis {
    tag: String,
    kind: BasisKind,
}

impl Basis {
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}
impl Eq for Basis {}
impl PartialOrd for Basis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Basis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag.cmp(&other.tag)
    }
}
impl Hash for Basis {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tag.hash(state);
    }
}

/// Split `n = s²·k` with `k` square-free.
fn square_free_split(n: u64) -> (u64, u64) {
    let (mut s, mut k) = (1u64, 1u64);
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            k *= p;
        }
        p += 1;
    }
    (s, k * rest)
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

static SQRT_CACHE: Mutex<BTreeMap<u64, (u32, Arc<BigInt>)>> = Mutex::new(BTreeMap::new());

/// `(P', floor(√k·2^P'))` for some `P' >= p`, cached per `k`.
fn sqrt_fixed(k: u64, p: u32) -> (u32, Arc<BigInt>) {
    if let Some((cp, s)) = SQRT_CACHE.lock().expect("sqrt cache").get(&k) {
        if *cp >= p {
            return (*cp, s.clone());
        }
    }
    // Round up so that slowly growing coefficients rarely trigger a recompute.
    let p = p.div_ceil(4096) * 4096;
    let s = Arc::new((BigInt::from(k) << (2 * p as usize)).sqrt());
    SQRT_CACHE.lock().expect("sqrt cache").insert(k, (p, s.clone()));
    (p, s)
}

/// Point of the circle `R/Z` with exact symbolic structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusValue {
    rational: BigRational,
    terms: BTreeMap<Basis, BigInt>,
}

impl TorusValue {
    pub fn zero() -> Self {
        TorusValue { rational: BigRational::zero(), terms: BTreeMap::new() }
    }

    pub fn rational(q: BigRational) -> Self {
        TorusValue { rational: frac(&q), terms: BTreeMap::new() }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(p.into(), q.into()))
    }

    /// `frac(√n)`. Perfect squares give the rational value 0.
    pub fn frac_sqrt(n: u64) -> Self {
        let (s, k) = square_free_split(n);
        if k == 1 {
            return Self::zero();
        }
        let basis = Basis { tag: format!("sqrt{k}"), kind: BasisKind::Sqrt(k) };
        // frac(√n) = s·√k - floor(√n) ≡ s·√k mod 1.
        let mut terms = BTreeMap::new();
        terms.insert(basis, BigInt::from(s));
        TorusValue { rational: BigRational::zero(), terms }
    }

    /// An irrational given by tag and decimal digits. Tags of the form
    /// `sqrtN` are recognised and their digits, when given, are checked.
    pub fn irrational(tag: &str, digits: Option<&str>) -> Result<Self> {
        if let Some(n) = tag.strip_prefix("sqrt").and_then(|s| s.parse::<u64>().ok()) {
            let v = Self::frac_sqrt(n);
            if v.is_rational() {
                return Err(Error::Parse(format!("tag {tag} names a rational number")));
            }
            if let Some(d) = digits {
                let (approx, nd) = parse_decimal_fraction(d)?;
                let exact = v.approx(digits_to_bits(nd) + 8);
                let diff = (exact.to_rational() - &approx).abs();
                let tol = BigRational::new(BigInt::from(2), BigInt::from(10).pow(nd));
                if diff > tol {
                    return Err(Error::Parse(format!("digits {d} do not match frac of sqrt{n}")));
                }
            }
            return Ok(v);
        }
        let d = digits.ok_or_else(|| Error::Parse(format!("irrational tag {tag} needs digits")))?;
        let (approx, nd) = parse_decimal_fraction(d)?;
        let basis = Basis { tag: tag.to_string(), kind: BasisKind::Digits { approx, digits: nd } };
        let mut terms = BTreeMap::new();
        terms.insert(basis, BigInt::one());
        Ok(TorusValue { rational: BigRational::zero(), terms })
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational.is_zero()
    }

    /// Exact value in `[0, 1)` when rational.
    pub fn exact(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            let e = terms.entry(b.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(b);
            }
        }
        TorusValue { rational: frac(&(&self.rational + &other.rational)), terms }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        TorusValue {
            rational: frac(&(&self.rational * BigRational::from_integer(k.clone()))),
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    /// Fixed-point approximation with `bits` fractional bits.
    pub fn approx(&self, bits: u32) -> Approx {
        let scale = BigInt::one() << bits;
        let mut numer = (&self.rational * BigRational::from_integer(scale.clone())).floor().to_integer();
        let mut err = BigRational::new(BigInt::one(), scale.clone());
        for (basis, c) in &self.terms {
            match &basis.kind {
                BasisKind::Sqrt(k) => {
                    // c·S >> (P - bits) with S = floor(√k·2^P) and P large
                    // enough that the truncation of S costs under one ulp.
                    let p = bits + c.bits() as u32 + 2;
                    let (cached_p, s) = sqrt_fixed(*k, p);
                    numer += (c * s.as_ref()) >> (cached_p - bits) as usize;
                    err += BigRational::new(BigInt::from(2), scale.clone());
                }
                BasisKind::Digits { approx, digits } => {
                    let v = approx * BigRational::from_integer(c.clone()) * BigRational::from_integer(scale.clone());
                    numer += v.floor().to_integer();
                    err += BigRational::new(BigInt::one(), scale.clone())
                        + BigRational::new(c.abs(), BigInt::from(10).pow(*digits));
                }
            }
        }
        Approx { numer: numer.mod_floor(&scale), bits, err }
    }

    /// Nearest double, using the default precision.
    pub fn to_f64(&self) -> f64 {
        match self.exact() {
            Some(q) => big_rat_to_f64(q),
            None => self.approx(digits_to_bits(DEFAULT_DIGITS)).to_f64(),
        }
    }
}

impl fmt::Display for TorusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        for (b, c) in &self.terms {
            write!(f, " + {}*{}", c, b.tag)?;
        }
        Ok(())
    }
}

/// Fixed-point value `numer / 2^bits` in `[0, 1)` with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    pub numer: BigInt,
    pub bits: u32,
    pub err: BigRational,
}

impl Approx {
    pub fn exact(q: &BigRational, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let numer = (frac(q) * BigRational::from_integer(scale)).floor().to_integer();
        Approx { numer, bits, err: BigRational::zero() }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numer.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_fixed64() as f64 / 18446744073709551616.0
    }

    /// The top 64 fractional bits, i.e. `floor(value · 2^64)`.
    pub fn to_fixed64(&self) -> u64 {
        let v = if self.bits >= 64 {
            &self.numer >> (self.bits - 64)
        } else {
            &self.numer << (64 - self.bits)
        };
        v.to_u64().unwrap_or(u64::MAX)
    }

    pub fn err_f64(&self) -> f64 {
        big_rat_to_f64(&self.err)
    }
}

/// Parse `"0.4142…"` (trailing non-digits ignored) into an exact rational
/// in `[0, 1)` and its number of digits.
pub fn parse_decimal_fraction(s: &str) -> Result<(BigRational, u32)> {
    let s = s.trim();
    let body = s.strip_prefix("0.").or_else(|| s.strip_prefix('.')).ok_or_else(|| {
        Error::Parse(format!("expected a decimal fraction in [0,1), got {s:?}"))
    })?;
    let digits: String = body.chars().take_while(char::is_ascii_digit).collect();
    if digits.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    let n = digits.len() as u32;
    let numer: BigInt = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
    Ok((BigRational::new(numer, BigInt::from(10).pow(n)), n))
}

/// Index of a character's kernel in `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelIndex {
    Finite(BigInt),
    Infinite,
}

/// Element of the dual torus `T^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    coords: Vec<TorusValue>,
}

impl Character {
    pub fn new(coords: Vec<TorusValue>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Rank("character rank must be at least 1".into()));
        }
        Ok(Character { coords })
    }

    pub fn zero(rank: usize) -> Self {
        Character { coords: vec![TorusValue::zero(); rank.max(1)] }
    }

    /// Rational character from `(p, q)` pairs.
    pub fn rational(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(p, q)| TorusValue::ratio(p, q)).collect())
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TorusValue] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(TorusValue::is_zero)
    }

    pub fn has_irrational_coordinate(&self) -> bool {
        self.coords.iter().any(|c| !c.is_rational())
    }

    /// Whether `ker ξ` has finite index, and that index. For a rational
    /// character the image of `v ↦ ⟨ξ, v⟩` is the cyclic subgroup of `Q/Z`
    /// of order `lcm` of the reduced denominators.
    pub fn is_rational_character(&self) -> (bool, KernelIndex) {
        if self.has_irrational_coordinate() {
            return (false, KernelIndex::Infinite);
        }
        let idx = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.rational.denom()));
        (true, KernelIndex::Finite(idx))
    }

    pub fn pair<T: IntScalar>(&self, v: &Vector<T>) -> TorusValue {
        assert_eq!(self.rank(), v.rank(), "pairing of mismatched ranks");
        self.coords
            .iter()
            .zip(v.coords())
            .fold(TorusValue::zero(), |acc, (x, c)| acc.add(&x.scale(&c.to_bigint())))
    }

    /// Dual action `γ*ξ` with `⟨γ*ξ, v⟩ = ⟨ξ, γ v⟩`, i.e. `γ^T ξ`.
    pub fn dual_action<T: IntScalar>(&self, gamma: &Matrix<T>) -> Character {
        let n = gamma.dim();
        assert_eq!(n, self.rank(), "dual action of mismatched ranks");
        let coords = (0..n)
            .map(|j| {
                (0..n).fold(TorusValue::zero(), |acc, i| acc.add(&self.coords[i].scale(&gamma.get(i, j).to_bigint())))
            })
            .collect();
        Character { coords }
    }

    /// `k·ξ`.
    pub fn scale(&self, k: &BigInt) -> Character {
        Character { coords: self.coords.iter().map(|c| c.scale(k)).collect() }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Magnitude helper used when comparing torus values numerically.
pub fn circle_distance(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    y.min(1.0 - y)
}
