//! Exact elements of `Q(ζ_m)`, `ζ_m = e(1/m)`, kept as group-ring vectors
//! `Σ_k a_k ζ^k` and reduced modulo the cyclotomic polynomial on demand.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::QPoly;
use crate::scalar::big_rat_to_f64;

static PHI: Mutex<BTreeMap<usize, QPoly>> = Mutex::new(BTreeMap::new());

/// `Φ_m`, via `x^m - 1 = Π_{d | m} Φ_d`.
pub fn cyclotomic_polynomial(m: usize) -> QPoly {
    assert!(m >= 1);
    if let Some(p) = PHI.lock().expect("phi cache").get(&m) {
        return p.clone();
    }
    let mut p = QPoly::x_pow_minus_one(m);
    for d in (1..m).filter(|d| m % d == 0) {
        p = p.div_rem(&cyclotomic_polynomial(d)).0;
    }
    PHI.lock().expect("phi cache").insert(m, p.clone());
    p
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(m: usize) -> Self {
        Cyclotomic { coeffs: vec![BigRational::zero(); m] }
    }

    pub fn rational(m: usize, q: BigRational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = q;
        z
    }

    /// `Σ_k coeffs[k]·ζ^k`; `coeffs.len()` is the order `m`.
    pub fn from_group_ring(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        Cyclotomic { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        Cyclotomic { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        Cyclotomic { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// Multiply by `ζ^k`.
    pub fn rotate(&self, k: i64) -> Self {
        let m = self.order();
        let k = k.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + k) % m] = c.clone();
        }
        Cyclotomic { coeffs }
    }

    /// Canonical representative of degree `< φ(m)`.
    pub fn reduced(&self) -> QPoly {
        QPoly::new(self.coeffs.clone()).div_rem(&cyclotomic_polynomial(self.order())).1
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        let r = self.reduced();
        match r.coeffs().len() {
            0 => Some(BigRational::zero()),
            1 => Some(r.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Complex64::from_polar(big_rat_to_f64(c), 2.0 * std::f64::consts::PI * k as f64 / m))
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.sub(other).is_zero()
    }
}

/// `|Σ_j n_j ζ^{-j}|^2` as a group-ring element: coefficient of `ζ^k` is
/// `Σ_{j2 - j1 ≡ k} n_{j1} n_{j2}`.
pub fn abs_squared_of_counts(counts: &[u64]) -> Vec<BigInt> {
    let m = counts.len();
    let mut out = vec![BigInt::zero(); m];
    for (j1, a) in counts.iter().enumerate().filter(|(_, a)| **a > 0) {
        for (j2, b) in counts.iter().enumerate().filter(|(_, b)| **b > 0) {
            out[(j2 + m - j1) % m] += BigInt::from(a * b);
        }
    }
    out
}

pub fn one(m: usize) -> Cyclotomic {
    Cyclotomic::rational(m, BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> QPoly {
        QPoly::from_ints(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for m in 2..20 {
            let z = Cyclotomic::from_group_ring(vec![BigRational::one(); m]);
            assert!(z.is_zero(), "m = {m}");
            assert!(z.to_complex().norm() < 1e-12);
        }
    }

    #[test]
    fn rational_detection() {
        // ζ + ζ^{-1} for m = 6 is 1.
        let mut c = vec![BigRational::zero(); 6];
        c[1] = BigRational::one();
        c[5] = BigRational::one();
        assert_eq!(Cyclotomic::from_group_ring(c).to_rational(), Some(BigRational::one()));
        let mut c = vec![BigRational::zero(); 5];
        c[1] = BigRational::one();
        assert_eq!(Cyclotomic::from_group_ring(c).to_rational(), None);
    }

    #[test]
    fn abs_squared_matches_complex() {
        let counts = [2u64, 0, 1, 3, 0, 1, 1];
        let m = counts.len();
        let exact = Cyclotomic::from_group_ring(abs_squared_of_counts(&counts).into_iter().map(BigRational::from_integer).collect());
        let direct: Complex64 = counts
            .iter()
            .enumerate()
            .map(|(j, &n)| Complex64::from_polar(n as f64, -2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .sum();
        assert!((exact.to_complex().re - direct.norm_sqr()).abs() < 1e-9);
        assert!(exact.to_complex().im.abs() < 1e-9);
    }
}
