//! Generating random walks on `SL_r(Z)`: seeded sampling, Cesàro hit
//! densities, Weyl averages of characters, proximality and a few exact
//! helpers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::character::{digits_to_bits, Character, DEFAULT_DIGITS};
use crate::error::{Error, Result};
use crate::lattice::{elementary_generators, Matrix, SparseMatrix, Unimodular, Vector};
use crate::poly::{characteristic_polynomial, QPoly};

/// Finitely supported probability measure on `SL_r(Z)`.
#[derive(Clone, Debug)]
pub struct GeneratingMeasure {
    support: Vec<Unimodular<i64>>,
    weights: Vec<Ratio<u64>>,
    sparse: Vec<SparseMatrix<BigInt>>,
    // Integer weights over a common denominator, for exact sampling.
    cumulative: Vec<u64>,
    denominator: u64,
}

impl GeneratingMeasure {
    pub fn new(support: Vec<Unimodular<i64>>, weights: Vec<Ratio<u64>>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::Precondition("measure needs matching nonempty support and weights".into()));
        }
        let r = support[0].dim();
        if support.iter().any(|g| g.dim() != r) {
            return Err(Error::DimensionMismatch("support matrices have different sizes".into()));
        }
        if weights.iter().any(Zero::is_zero) {
            return Err(Error::Precondition("weights must be positive".into()));
        }
        let total = weights.iter().fold(Ratio::zero(), |a: Ratio<u64>, w| a + w);
        if !total.is_one() {
            return Err(Error::Precondition(format!("weights sum to {total}, not 1")));
        }
        let denominator = weights.iter().fold(1u64, |d, w| d.lcm(w.denom()));
        let mut acc = 0u64;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w.numer() * (denominator / w.denom());
                acc
            })
            .collect();
        let sparse = support.iter().map(|g| SparseMatrix::from(&g.matrix().cast::<BigInt>().expect("i64 fits"))).collect();
        Ok(GeneratingMeasure { support, weights, sparse, cumulative, denominator })
    }

    pub fn uniform(support: Vec<Unimodular<i64>>) -> Result<Self> {
        let n = support.len() as u64;
        if n == 0 {
            return Err(Error::Precondition("empty support".into()));
        }
        Self::new(support, vec![Ratio::new(1, n); n as usize])
    }

    pub fn rank(&self) -> usize {
        self.support[0].dim()
    }

    pub fn support(&self) -> &[Unimodular<i64>] {
        &self.support
    }

    pub fn weights(&self) -> &[Ratio<u64>] {
        &self.weights
    }

    /// Draw a support index with exactly the prescribed probabilities.
    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.gen_range(0..self.denominator);
        self.cumulative.partition_point(|&c| c <= u)
    }
}

/// Uniform measure on the elementary matrices `I ± E_ij`.
pub fn default_measure(r: usize) -> Result<GeneratingMeasure> {
    if r < 2 {
        return Err(Error::Rank(format!("a generating walk needs r >= 2, got {r}")));
    }
    GeneratingMeasure::uniform(elementary_generators(r))
}

/// SplitMix64 finaliser, used to derive independent per-trial seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under master seed `seed`.
pub fn derive_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ splitmix64(trial))
}

/// One realisation `g_1, g_2, …` of the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSample {
    pub seed: u64,
    pub steps: Vec<usize>,
}

impl WalkSample {
    /// Iterator over `γ_1, …, γ_n` (`γ_n = g_1 ⋯ g_n`).
    pub fn products<'a>(&'a self, p: &'a GeneratingMeasure) -> impl Iterator<Item = Matrix<BigInt>> + 'a {
        let mut gamma = Matrix::<BigInt>::identity(p.rank());
        self.steps.iter().map(move |&s| {
            gamma = gamma.mul_sparse(&p.sparse[s]);
            gamma.clone()
        })
    }

    /// `γ_n`; `γ_0` is the identity.
    pub fn product(&self, n: usize, p: &GeneratingMeasure) -> Matrix<BigInt> {
        self.steps[..n].iter().fold(Matrix::identity(p.rank()), |g, &s| g.mul_sparse(&p.sparse[s]))
    }
}

pub fn sample_walk(p: &GeneratingMeasure, n: usize, seed: u64) -> WalkSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WalkSample { seed, steps: (0..n).map(|_| p.sample_index(&mut rng)).collect() }
}

/// Cesàro averages of hit frequencies, one value per horizon `N' = 1..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub cesaro: Vec<Ratio<u64>>,
    /// Standard error of the per-walk Cesàro average across trials.
    pub stderr: Vec<f64>,
}

impl DensityReport {
    pub fn final_value(&self) -> Ratio<u64> {
        *self.cesaro.last().expect("horizon >= 1")
    }
}

/// Per-trial hit indicators `[γ_n(v) ∈ E]` for `n = 1..N`.
fn hit_matrix(
    p: &GeneratingMeasure,
    v: &Vector<BigInt>,
    membership: &(dyn Fn(&Vector<BigInt>) -> bool + Sync),
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Vec<Vec<bool>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let walk = sample_walk(p, horizon, derive_seed(seed, t as u64));
            walk.products(p).map(|g| membership(&g.apply(v))).collect()
        })
        .collect()
}

/// Upper `(p, v)`-density estimate by Monte Carlo over `trials` walks.
pub fn upper_pv_density(
    p: &GeneratingMeasure,
    v: &Vector<i64>,
    membership: &(dyn Fn(&Vector<BigInt>) -> bool + Sync),
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<DensityReport> {
    v.check_rank(p.rank())?;
    if v.is_zero() {
        return Err(Error::Precondition("v must be nonzero".into()));
    }
    if horizon == 0 || trials == 0 {
        return Err(Error::Precondition("N and M must be at least 1".into()));
    }
    let vb = v.cast::<BigInt>().expect("i64 fits");
    let hits = hit_matrix(p, &vb, membership, horizon, trials, seed);
    Ok(cesaro_report(&hits, horizon, trials, seed))
}

fn cesaro_report(hits: &[Vec<bool>], horizon: usize, trials: usize, seed: u64) -> DensityReport {
    let mut cum = vec![0u64; trials];
    let mut total = 0u64;
    let mut cesaro = Vec::with_capacity(horizon);
    let mut stderr = Vec::with_capacity(horizon);
    for n in 0..horizon {
        for (t, row) in hits.iter().enumerate() {
            if row[n] {
                cum[t] += 1;
                total += 1;
            }
        }
        let np = (n + 1) as u64;
        cesaro.push(Ratio::new(total, np * trials as u64));
        stderr.push(standard_error(cum.iter().map(|&c| c as f64 / np as f64)));
    }
    DensityReport { horizon, trials, seed, cesaro, stderr }
}

pub(crate) fn standard_error(xs: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.collect();
    let m = xs.len();
    if m < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / m as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (var / m as f64).sqrt()
}

/// Magnitudes `|(1/N') Σ_{n ≤ N'} mean_walks e(⟨γ_nᵀ ξ, v⟩)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylReport {
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub magnitudes: Vec<f64>,
    /// Bound on the accumulated rounding in every magnitude.
    pub error_bound: f64,
}

pub fn weyl_equidistribution(
    p: &GeneratingMeasure,
    xi: &Character,
    v: &Vector<i64>,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<WeylReport> {
    if !xi.has_irrational_coordinate() {
        return Err(Error::Precondition(
            "ξ must have an irrational coordinate: a rational character has finite-index kernel (rational spectrum)".into(),
        ));
    }
    if xi.rank() != p.rank() {
        return Err(Error::DimensionMismatch(format!("character rank {} vs walk rank {}", xi.rank(), p.rank())));
    }
    v.check_rank(p.rank())?;
    if v.is_zero() {
        return Err(Error::Precondition("v must be nonzero".into()));
    }
    if horizon == 0 || trials == 0 {
        return Err(Error::Precondition("N and M must be at least 1".into()));
    }
    let bits = digits_to_bits(DEFAULT_DIGITS);
    let vb = v.cast::<BigInt>().expect("i64 fits");
    let per_trial: Vec<(Vec<(f64, f64)>, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let walk = sample_walk(p, horizon, derive_seed(seed, t as u64));
            let mut err: f64 = 0.0;
            let terms = walk
                .products(p)
                .map(|g| {
                    // ⟨γᵀξ, v⟩ = ⟨ξ, γv⟩
                    let a = xi.pair(&g.apply(&vb)).approx(bits);
                    err = err.max(a.err_f64());
                    let x = a.to_f64();
                    let th = 2.0 * std::f64::consts::PI * x;
                    (th.cos(), th.sin())
                })
                .collect();
            (terms, err)
        })
        .collect();
    let mut magnitudes = Vec::with_capacity(horizon);
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for n in 0..horizon {
        for (terms, _) in &per_trial {
            re += terms[n].0;
            im += terms[n].1;
        }
        let denom = ((n + 1) * trials) as f64;
        magnitudes.push((re / denom).hypot(im / denom));
    }
    let approx_err = per_trial.iter().map(|(_, e)| *e).fold(0.0, f64::max);
    // Phase error 2π·ε from the torus approximation, plus f64 rounding of
    // x, cos/sin and the running sums.
    let error_bound = 2.0 * std::f64::consts::PI * (approx_err + f64::EPSILON) + (horizon * trials) as f64 * 4.0 * f64::EPSILON;
    Ok(WeylReport { horizon, trials, seed, magnitudes, error_bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proximality {
    Proximal,
    NotProximal,
    Borderline,
}

/// Details behind a proximality verdict.
#[derive(Clone, Debug)]
pub struct ProximalityReport<F> {
    pub verdict: Proximality,
    /// Characteristic polynomial, ascending coefficients.
    pub charpoly: Vec<BigInt>,
    /// Roots with multiplicities, sorted by decreasing modulus.
    pub roots: Vec<(Complex<F>, usize)>,
    pub relative_gap: F,
}

/// Decide whether `γ` has a unique, simple eigenvalue of largest modulus.
///
/// Multiplicities come from an exact square-free factorisation, so a
/// repeated top eigenvalue is always rejected exactly. A non-real top root
/// shares its modulus with its conjugate; a real top root `z` is matched
/// against `-z` through `gcd(p(x), p(-x))`. Anything else closer than `tol`
/// is reported as borderline.
pub fn proximality_check<F: Float + FromPrimitive>(gamma: &Matrix<i64>, tol: F, max_iter: usize) -> ProximalityReport<F> {
    let rows: Vec<Vec<BigInt>> = gamma.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let charpoly = characteristic_polynomial(&rows);
    let p = QPoly::from_ints(&charpoly);
    let root_tol = F::epsilon() * F::from_f64(16.0).unwrap();
    let mut roots: Vec<(Complex<F>, usize)> = Vec::new();
    for (f, mult) in p.square_free_factors() {
        for z in f.roots::<F>(root_tol, max_iter.max(1)) {
            roots.push((z, mult));
        }
    }
    roots.sort_by(|a, b| b.0.norm().partial_cmp(&a.0.norm()).unwrap_or(std::cmp::Ordering::Equal));
    let (top, top_mult) = roots[0];
    let top_mod = top.norm();
    let second = roots.get(1).map(|r| r.0.norm()).unwrap_or_else(F::zero);
    let gap = if top_mod == F::zero() { F::zero() } else { (top_mod - second) / top_mod };
    let slack = F::from_f64(1e3).unwrap() * F::epsilon().sqrt() * (F::one() + top_mod);
    let verdict = if top_mult > 1 {
        Proximality::NotProximal
    } else if top.im.abs() > slack {
        Proximality::NotProximal
    } else if gap > tol {
        Proximality::Proximal
    } else if has_opposite_root(&p, top.re, slack) {
        Proximality::NotProximal
    } else {
        Proximality::Borderline
    };
    ProximalityReport { verdict, charpoly, roots, relative_gap: gap }
}

fn has_opposite_root<F: Float + FromPrimitive>(p: &QPoly, z: F, slack: F) -> bool {
    let mirrored = QPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect(),
    );
    let g = p.gcd(&mirrored);
    g.degree() > 0 && g.roots::<F>(F::epsilon(), 500).iter().any(|w| (w.re + z).abs() < slack && w.im.abs() < slack)
}

/// `(mean - c)/(sup - c)`, the lower bound on `P(f > c)` for a random
/// variable `0 <= f <= sup` with the given mean.
pub fn markov_lower_bound<Q: Num + PartialOrd + Clone>(mean: Q, c: Q, sup: Q) -> Result<Q> {
    if !(Q::zero() < c) {
        return Err(Error::Precondition("need 0 < c".into()));
    }
    if !(c < mean) {
        return Err(Error::Precondition("need c < mean".into()));
    }
    if !(mean <= sup) {
        return Err(Error::Precondition("need mean <= sup".into()));
    }
    Ok((mean - c.clone()) / (sup - c))
}

/// Finite-horizon lower density: the minimum over `N' ∈ [⌈N/2⌉, N]` of
/// `|{n <= N' : indices[n]}| / N'`.
pub fn lower_density(indices: &[bool]) -> Result<Ratio<u64>> {
    let n = indices.len();
    if n == 0 {
        return Err(Error::Precondition("lower density needs N >= 1".into()));
    }
    let start = n.div_ceil(2).max(1);
    let mut count = 0u64;
    let mut best: Option<Ratio<u64>> = None;
    for (i, &b) in indices.iter().enumerate() {
        count += u64::from(b);
        let np = i + 1;
        if np >= start {
            let q = Ratio::new(count, np as u64);
            best = Some(best.map_or(q, |m| m.min(q)));
        }
    }
    Ok(best.expect("window is nonempty"))
}

/// Exact law of `γ_n` for `r = 2`, `n <= 6`.
pub fn exact_convolution(p: &GeneratingMeasure, n: usize) -> Result<BTreeMap<Matrix<i64>, BigRational>> {
    if p.rank() != 2 || n > 6 {
        return Err(Error::Precondition("exact convolution is limited to r = 2 and n <= 6".into()));
    }
    let mut law = BTreeMap::new();
    law.insert(Matrix::identity(2), BigRational::one());
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (g, w) in &law {
            for (h, q) in p.support.iter().zip(&p.weights) {
                let q = BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()));
                *next.entry(g.mul(h.matrix())).or_insert_with(BigRational::zero) += w * q;
            }
        }
        law = next;
    }
    Ok(law)
}

/// `P(γ_n(v) ∈ E)` from the exact law.
pub fn exact_hit_probability(
    p: &GeneratingMeasure,
    v: &Vector<i64>,
    membership: &dyn Fn(&Vector<BigInt>) -> bool,
    n: usize,
) -> Result<BigRational> {
    let vb = v.cast::<BigInt>().expect("i64 fits");
    Ok(exact_convolution(p, n)?
        .into_iter()
        .filter(|(g, _)| membership(&g.cast::<BigInt>().expect("i64 fits").apply(&vb)))
        .fold(BigRational::zero(), |a, (_, w)| a + w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Hyperplane;

    #[test]
    fn default_measures() {
        let p2 = default_measure(2).unwrap();
        assert_eq!(p2.support().len(), 4);
        assert!(p2.weights().iter().all(|w| *w == Ratio::new(1, 4)));
        let p3 = default_measure(3).unwrap();
        assert_eq!(p3.support().len(), 12);
        assert_eq!(p3.weights().iter().fold(Ratio::zero(), |a, w| a + w), Ratio::one());
        assert_eq!(default_measure(1).unwrap_err().code(), "E_RANK");
    }

    #[test]
    fn weights_must_sum_to_one() {
        let g = elementary_generators::<i64>(2);
        assert!(GeneratingMeasure::new(g[..2].to_vec(), vec![Ratio::new(1, 2), Ratio::new(1, 3)]).is_err());
        assert!(GeneratingMeasure::new(g[..2].to_vec(), vec![Ratio::new(1, 3), Ratio::new(2, 3)]).is_ok());
    }

    #[test]
    fn walks_are_reproducible_and_start_at_identity() {
        let p = default_measure(2).unwrap();
        let a = sample_walk(&p, 50, 11);
        assert_eq!(a, sample_walk(&p, 50, 11));
        assert_ne!(a, sample_walk(&p, 50, 12));
        assert!(a.product(0, &p).is_identity());
        let last = a.products(&p).last().unwrap();
        assert_eq!(last, a.product(50, &p));
    }

    #[test]
    fn deterministic_walk_is_a_power() {
        let g = Unimodular::new(Matrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap()).unwrap();
        let p = GeneratingMeasure::uniform(vec![g.clone()]).unwrap();
        let w = sample_walk(&p, 3, 0);
        assert_eq!(w.product(3, &p), g.pow(3).matrix().cast::<BigInt>().unwrap());
    }

    #[test]
    fn constant_memberships() {
        let p = default_measure(2).unwrap();
        let v = Vector::from_i64s(&[1, 0]).unwrap();
        let one = upper_pv_density(&p, &v, &|_| true, 30, 5, 1).unwrap();
        assert!(one.cesaro.iter().all(|q| q.is_one()));
        let zero = upper_pv_density(&p, &v, &|_| false, 30, 5, 1).unwrap();
        assert!(zero.cesaro.iter().all(|q| q.is_zero()));
    }

    #[test]
    fn density_matches_exact_convolution_in_mean() {
        // Cesàro value at N=4 vs the exact average of P(γ_n v ∈ L), n=1..4.
        let p = default_measure(2).unwrap();
        let v = Vector::from_i64s(&[1, 0]).unwrap();
        let axis = Hyperplane::<BigInt>::coordinate(2, 1);
        let member = |w: &Vector<BigInt>| axis.contains(w);
        let exact: BigRational = (1..=4).map(|n| exact_hit_probability(&p, &v, &member, n).unwrap()).sum::<BigRational>()
            / BigRational::from_integer(4.into());
        let rep = upper_pv_density(&p, &v, &member, 4, 4000, 3).unwrap();
        let est = *rep.final_value().numer() as f64 / *rep.final_value().denom() as f64;
        let exact = crate::scalar::big_rat_to_f64(&exact);
        assert!((est - exact).abs() < 4.0 * rep.stderr[3] + 1e-3, "{est} vs {exact}");
    }

    #[test]
    fn weyl_rejects_rational_and_is_constant_without_mixing() {
        let p = default_measure(2).unwrap();
        let v = Vector::from_i64s(&[1, 0]).unwrap();
        let e = weyl_equidistribution(&p, &Character::zero(2), &v, 5, 2, 0).unwrap_err();
        assert_eq!(e.code(), "E_PRECONDITION");
        let id = GeneratingMeasure::uniform(vec![Unimodular::identity(2)]).unwrap();
        let xi = Character::new(vec![crate::character::TorusValue::frac_sqrt(2), crate::character::TorusValue::frac_sqrt(3)]).unwrap();
        let rep = weyl_equidistribution(&id, &xi, &v, 20, 3, 0).unwrap();
        assert!(rep.magnitudes.iter().all(|m| (m - 1.0).abs() < 1e-12));
    }

    #[test]
    fn proximality_examples() {
        let m = |rows: &[&[i64]]| Matrix::from_i64_rows(rows).unwrap();
        let rep = proximality_check::<f64>(&m(&[&[2, 1], &[1, 1]]), 1e-9, 200);
        assert_eq!(rep.verdict, Proximality::Proximal);
        let top = rep.roots[0].0.re;
        assert!((top - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(proximality_check::<f64>(&m(&[&[1, 0], &[0, 1]]), 1e-9, 200).verdict, Proximality::NotProximal);
        assert_eq!(proximality_check::<f64>(&m(&[&[0, -1], &[1, 0]]), 1e-9, 200).verdict, Proximality::NotProximal);
        // Parabolic: (x-1)^2, repeated.
        assert_eq!(proximality_check::<f64>(&m(&[&[1, 1], &[0, 1]]), 1e-9, 200).verdict, Proximality::NotProximal);
        // -I has a repeated eigenvalue; diag-like [[-1,0],[0,-1]].
        assert_eq!(proximality_check::<f32>(&m(&[&[-1, 0], &[0, -1]]), 1e-4, 200).verdict, Proximality::NotProximal);
        // Huge gap requirement turns a proximal element borderline.
        assert_eq!(proximality_check::<f64>(&m(&[&[2, 1], &[1, 1]]), 0.99, 200).verdict, Proximality::Borderline);
    }

    #[test]
    fn markov_examples() {
        let q = |a: i64, b: i64| Ratio::new(a, b);
        assert_eq!(markov_lower_bound(q(1, 2), q(1, 4), q(1, 1)).unwrap(), q(1, 3));
        assert_eq!(markov_lower_bound(q(1, 1), q(1, 4), q(1, 1)).unwrap(), q(1, 1));
        assert_eq!(markov_lower_bound(q(26, 100), q(1, 4), q(1, 1)).unwrap(), q(1, 75));
        assert!(markov_lower_bound(q(1, 4), q(1, 2), q(1, 1)).is_err());
        assert!((markov_lower_bound(0.5f64, 0.25, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lower_density_examples() {
        assert_eq!(lower_density(&[true; 10]).unwrap(), Ratio::one());
        assert_eq!(lower_density(&[false; 10]).unwrap(), Ratio::zero());
        let alt: Vec<bool> = (1..=1000).map(|n| n % 2 == 1).collect();
        let d = lower_density(&alt).unwrap();
        assert!(d >= Ratio::new(499, 1000) && d <= Ratio::new(501, 1000));
        assert!(lower_density(&[]).is_err());
    }

    #[test]
    fn convolution_is_a_probability() {
        let p = default_measure(2).unwrap();
        for n in 0..=4 {
            let law = exact_convolution(&p, n).unwrap();
            assert_eq!(law.values().sum::<BigRational>(), BigRational::one());
        }
        assert!(exact_convolution(&default_measure(3).unwrap(), 1).is_err());
    }
}
