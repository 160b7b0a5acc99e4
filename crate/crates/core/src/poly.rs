//! Dense univariate polynomials over `Q`, just enough for characteristic
//! polynomials, square-free factorisation and cyclotomic reduction.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::scalar::big_rat_to_f64;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![BigRational::one()] }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigRational::zero(); n + 1];
        c[0] = -BigRational::one();
        c[n] = BigRational::one();
        QPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        QPoly { coeffs: self.coeffs.iter().map(|c| c / &l).collect() }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's algorithm: `p = c · Π_i f_i^i` with each `f_i` square-free and
    /// pairwise coprime. Returns `(f_i, i)` for nonconstant factors.
    pub fn square_free_factors(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn eval_complex<F: Float + FromPrimitive>(&self, z: Complex<F>) -> Complex<F> {
        self.coeffs.iter().rev().fold(Complex::new(F::zero(), F::zero()), |acc, c| {
            acc * z + Complex::new(F::from_f64(big_rat_to_f64(c)).unwrap_or_else(F::nan), F::zero())
        })
    }

    /// All complex roots by the Aberth–Ehrlich iteration.
    pub fn roots<F: Float + FromPrimitive>(&self, tol: F, max_iter: usize) -> Vec<Complex<F>> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let p = self.monic();
        let dp = p.derivative();
        let coef: Vec<F> = p.coeffs.iter().map(|c| F::from_f64(big_rat_to_f64(c)).unwrap_or_else(F::nan)).collect();
        // Cauchy bound for the initial circle.
        let radius = F::one() + coef[..n].iter().fold(F::zero(), |m, c| m.max(c.abs()));
        let mut z: Vec<Complex<F>> = (0..n)
            .map(|k| {
                let angle = F::from_f64(2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64).unwrap();
                Complex::from_polar(radius * F::from_f64(0.5).unwrap(), angle)
            })
            .collect();
        for _ in 0..max_iter {
            let mut max_step = F::zero();
            for k in 0..n {
                let pk = p.eval_complex(z[k]);
                let dpk = dp.eval_complex(z[k]);
                if pk.norm() == F::zero() {
                    continue;
                }
                let ratio = pk / dpk;
                let sum = (0..n)
                    .filter(|&j| j != k)
                    .fold(Complex::new(F::zero(), F::zero()), |acc, j| acc + (z[k] - z[j]).inv());
                let step = ratio / (Complex::new(F::one(), F::zero()) - ratio * sum);
                if step.norm().is_finite() {
                    z[k] = z[k] - step;
                    max_step = max_step.max(step.norm() / (F::one() + z[k].norm()));
                }
            }
            if max_step < tol {
                break;
            }
        }
        z
    }
}

/// Characteristic polynomial `det(xI - A)` of an integer matrix by the
/// Faddeev–LeVerrier recursion (all divisions are exact).
pub fn characteristic_polynomial(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = rows.len();
    let mul = |a: &Vec<Vec<BigInt>>, b: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
            .collect()
    };
    let a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mul(&a, &m);
        let trace = (0..n).fold(BigInt::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -trace / BigInt::from(k);
    }
    coeffs
}

/// Relative magnitude helper shared by callers comparing root moduli.
pub fn relative_gap<F: Float>(top: F, next: F) -> F {
    if top == F::zero() {
        F::zero()
    } else {
        (top - next) / top
    }
}

pub fn to_f64_lossy(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let m = vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(1)]];
        assert_eq!(characteristic_polynomial(&m), vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)]);
        let id = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        assert_eq!(characteristic_polynomial(&id), vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 1])), QPoly::one());
    }

    #[test]
    fn yun_factorisation() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let fac = f.square_free_factors();
        assert_eq!(fac, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn roots_of_quadratic() {
        let roots = p(&[1, -3, 1]).roots::<f64>(1e-15, 200);
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((re[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let r32 = p(&[1, 0, 1]).roots::<f32>(1e-6, 200);
        assert!(r32.iter().all(|z| (z.norm() - 1.0).abs() < 1e-4));
    }
}
