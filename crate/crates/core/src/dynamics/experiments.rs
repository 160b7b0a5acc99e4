//! Random-walk experiments on correlations, and the search for `γ` with a
//! positive multiple correlation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::spectral::{rational_bound, MassSum};
use super::system::{MeasurableSet, Measured, Prepared, System};
use crate::error::{Error, Result};
use crate::lattice::{multi_shear, Matrix, Unimodular, Vector};
use crate::random_walk::{derive_seed, lower_density, sample_walk, standard_error, GeneratingMeasure};
use crate::scalar::big_rat_to_f64;
use crate::words::enumerate_words;

/// Truncation used for the rational-part bound of circle rotations; the
/// bound only counts atoms at rational characters, so any `K` gives the
/// same value there.
pub const BOUND_TRUNCATION: u64 = 64;

/// Per-walk correlation sequences `μ(B ∩ γ_n(v).B)`, `n = 1..N`.
fn correlation_paths(
    prepared: &Prepared<'_>,
    v: &Vector<i64>,
    p: &GeneratingMeasure,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Vec<Vec<(f64, f64)>> {
    let vb = v.cast::<BigInt>().expect("i64 fits");
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let walk = sample_walk(p, horizon, derive_seed(seed, t as u64));
            walk.products(p)
                .map(|g| {
                    let c = prepared.correlation(&g.apply(&vb));
                    (c.to_f64(), c.err)
                })
                .collect()
        })
        .collect()
}

fn check_common(system: &System, v: &Vector<i64>, p: &GeneratingMeasure, horizon: usize, trials: usize) -> Result<()> {
    v.check_rank(system.r())?;
    if p.rank() != system.r() {
        return Err(Error::DimensionMismatch(format!("walk rank {} vs system rank {}", p.rank(), system.r())));
    }
    if v.is_zero() {
        return Err(Error::Precondition("v must be nonzero".into()));
    }
    if horizon == 0 || trials == 0 {
        return Err(Error::Precondition("N and M must be at least 1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CesaroReport {
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    /// `(1/N') Σ_{n <= N'} mean_walks μ(B ∩ γ_n(v).B)`.
    pub cesaro: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Bound on the rounding carried by every Cesàro value.
    pub err: f64,
    pub measure: BigRational,
    /// `μ(B)²`.
    pub target: BigRational,
    /// `σ_B(Rat Λ ∖ {0})`.
    pub bound: MassSum,
    pub deviation: f64,
}

pub fn cesaro_correlation_experiment(
    system: &System,
    set: &MeasurableSet,
    v: &Vector<i64>,
    p: &GeneratingMeasure,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<CesaroReport> {
    check_common(system, v, p, horizon, trials)?;
    let prepared = Prepared::new(system, set)?;
    let measure = prepared.measure();
    let target = &measure * &measure;
    let bound = rational_bound(system, set, BOUND_TRUNCATION)?;
    let paths = correlation_paths(&prepared, v, p, horizon, trials, seed);
    let mut cesaro = Vec::with_capacity(horizon);
    let mut stderr = Vec::with_capacity(horizon);
    let mut per_walk = vec![0.0f64; trials];
    let mut total = 0.0;
    let mut err: f64 = 0.0;
    for n in 0..horizon {
        for (t, path) in paths.iter().enumerate() {
            per_walk[t] += path[n].0;
            total += path[n].0;
            err = err.max(path[n].1);
        }
        let np = (n + 1) as f64;
        cesaro.push(total / (np * trials as f64));
        stderr.push(standard_error(per_walk.iter().map(|s| s / np)));
    }
    let err = err + (horizon * trials) as f64 * f64::EPSILON;
    let deviation = (cesaro[horizon - 1] - big_rat_to_f64(&target)).abs();
    Ok(CesaroReport { horizon, trials, seed, cesaro, stderr, err, measure, target, bound, deviation })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CSetReport {
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub c: BigRational,
    pub c_prime: BigRational,
    pub delta: BigRational,
    pub bound: MassSum,
    /// Empirical `P(μ(B ∩ γ_n(v).B) > c)` for each `n`.
    pub probabilities: Vec<BigRational>,
    pub indicators: Vec<bool>,
    pub lower_density: BigRational,
    /// Comparisons with `c` that the rounding bound could not decide; they
    /// are counted as not exceeding `c`.
    pub ambiguous: u64,
}

/// The set `C = {n : P(μ(B ∩ γ_n(v).B) > c) > δ}` with the midpoint
/// `c' = (c + μ(B)² - σ_B(Rat Λ∖{0}))/2` and `δ = (c' - c)/(μ(B) - c)`.
#[allow(clippy::too_many_arguments)]
pub fn c_set_experiment(
    system: &System,
    set: &MeasurableSet,
    v: &Vector<i64>,
    p: &GeneratingMeasure,
    c: &BigRational,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<CSetReport> {
    check_common(system, v, p, horizon, trials)?;
    let prepared = Prepared::new(system, set)?;
    let mu = prepared.measure();
    let bound = rational_bound(system, set, BOUND_TRUNCATION)?;
    let Some(b) = bound.exact.clone() else {
        return Err(Error::Precondition("rational-part mass is not known exactly".into()));
    };
    let ceiling = &mu * &mu - &b;
    if !c.is_positive() {
        return Err(Error::Precondition("need 0 < c".into()));
    }
    if *c >= ceiling {
        return Err(Error::Precondition(format!(
            "need c < μ(B)² - σ_B(Rat∖{{0}}) = {ceiling}, got c = {c}"
        )));
    }
    let two = BigRational::from_integer(2.into());
    let c_prime = (c + &ceiling) / &two;
    let delta = (&c_prime - c) / (&mu - c);
    let paths = correlation_paths(&prepared, v, p, horizon, trials, seed);
    let cf = big_rat_to_f64(c);
    let mut ambiguous = 0u64;
    let mut probabilities = Vec::with_capacity(horizon);
    let mut indicators = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let mut hits = 0u64;
        for path in &paths {
            let (x, e) = path[n];
            if (x - cf).abs() <= e + 4.0 * f64::EPSILON {
                ambiguous += 1;
            } else if x > cf {
                hits += 1;
            }
        }
        let prob = BigRational::new(BigInt::from(hits), BigInt::from(trials));
        indicators.push(prob > delta);
        probabilities.push(prob);
    }
    let ld = lower_density(&indicators)?;
    let lower_density = BigRational::new(BigInt::from(*ld.numer()), BigInt::from(*ld.denom()));
    Ok(CSetReport {
        horizon,
        trials,
        seed,
        c: c.clone(),
        c_prime,
        delta,
        bound,
        probabilities,
        indicators,
        lower_density,
        ambiguous,
    })
}

#[derive(Clone, Debug)]
pub struct GammaBudget {
    pub max_word_len: usize,
    /// Shear exponents range over `[-M*, M*]`.
    pub shear_range: i64,
    /// Extra `γ_0` candidates for the guided strategy, drawn from the
    /// default walk; 0 disables sampling.
    pub walk_candidates: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaHit {
    pub gamma: Unimodular<i64>,
    pub word: Option<Vec<usize>>,
    pub images: Vec<Vector<i64>>,
    pub value: Measured,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrategyOutcome {
    pub hit: Option<GammaHit>,
    pub tried: u64,
    /// Guided strategy only: exponent tuples skipped because the shear does
    /// not extend to an integral map.
    pub non_integral: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSearchReport {
    pub words: StrategyOutcome,
    pub guided: StrategyOutcome,
    /// The `γ_0` picked by the guided strategy and its correlation.
    pub gamma0: Option<(Unimodular<i64>, Measured)>,
}

impl GammaSearchReport {
    pub fn found(&self) -> Option<&GammaHit> {
        self.words.hit.as_ref().or(self.guided.hit.as_ref())
    }
}

fn images(gamma: &Unimodular<i64>, basis: &[Vector<i64>]) -> Vec<Vector<i64>> {
    basis.iter().map(|b| gamma.apply(b)).collect()
}

fn big(vs: &[Vector<i64>]) -> Vec<Vector<BigInt>> {
    vs.iter().map(|v| v.cast::<BigInt>().expect("i64 fits")).collect()
}

/// Look for `γ` with `μ(B ∩ γ(v_1).B ∩ ⋯ ∩ γ(v_r).B) > 0` two ways: (a)
/// words of length `<= L` in breadth-first order; (b) pick `γ_0` maximising
/// `μ(B ∩ γ_0(v_1).B)`, then try shear exponents `m_2, …, m_r` (lexicographic
/// in `[-M*, M*]`) on the basis `u_k = γ_0(v_k)`, keeping only integral shears.
pub fn gamma_search(system: &System, set: &MeasurableSet, basis: &[Vector<i64>], budget: &GammaBudget) -> Result<GammaSearchReport> {
    let r = system.r();
    if basis.len() != r {
        return Err(Error::DimensionMismatch(format!("need {r} vectors, got {}", basis.len())));
    }
    for b in basis {
        b.check_rank(r)?;
    }
    if Matrix::from_columns(basis)?.determinant().is_zero() {
        return Err(Error::SingularBasis);
    }
    let prepared = Prepared::new(system, set)?;
    let words = enumerate_words::<i64>(r, if r >= 2 { budget.max_word_len } else { 0 });

    // (a) direct enumeration, first hit in BFS order.
    let found = words.par_iter().enumerate().find_map_first(|(i, w)| {
        let imgs = images(&w.element, basis);
        let value = prepared.multi_correlation(&big(&imgs));
        value.certainly_positive().then(|| (i, GammaHit { gamma: w.element.clone(), word: Some(w.letters.clone()), images: imgs, value }))
    });
    let direct = match found {
        Some((i, hit)) => StrategyOutcome { hit: Some(hit), tried: i as u64 + 1, non_integral: 0 },
        None => StrategyOutcome { hit: None, tried: words.len() as u64, non_integral: 0 },
    };

    // (b) guided by the shear argument.
    let mut candidates: Vec<(Unimodular<i64>, Option<Vec<usize>>)> =
        words.iter().map(|w| (w.element.clone(), Some(w.letters.clone()))).collect();
    if budget.walk_candidates > 0 && r >= 2 {
        let p = crate::random_walk::default_measure(r)?;
        let walk = sample_walk(&p, budget.walk_candidates, budget.seed);
        for g in walk.products(&p) {
            if let Some(g) = g.cast::<i64>() {
                candidates.push((Unimodular::new(g).expect("unimodular product"), None));
            }
        }
    }
    let v1 = basis[0].cast::<BigInt>().expect("i64 fits");
    let scored: Vec<Measured> = candidates
        .par_iter()
        .map(|(g, _)| prepared.correlation(&g.matrix().cast::<BigInt>().expect("fits").apply(&v1)))
        .collect();
    let best = (0..scored.len()).fold(0, |b, i| if scored[i].value > scored[b].value { i } else { b });
    let (gamma0, _) = candidates[best].clone();
    let gamma0_value = scored[best].clone();
    let u = images(&gamma0, basis);
    let mut guided = StrategyOutcome { hit: None, tried: 0, non_integral: 0 };
    let m = budget.shear_range.max(0);
    let mut exps = vec![-m; r - 1];
    loop {
        let sh = multi_shear(&u, &exps)?;
        match &sh.extension {
            None => guided.non_integral += 1,
            Some(s) => {
                guided.tried += 1;
                let gamma = s.compose(&gamma0);
                let imgs = images(&gamma, basis);
                let value = prepared.multi_correlation(&big(&imgs));
                if value.certainly_positive() {
                    guided.hit = Some(GammaHit { gamma, word: None, images: imgs, value });
                    break;
                }
            }
        }
        // Odometer over [-m, m]^{r-1}; r = 1 has a single empty tuple.
        let mut k = exps.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if exps[k] < m {
                exps[k] += 1;
                break;
            }
            exps[k] = -m;
            if k == 0 {
                k = usize::MAX;
                break;
            }
        }
        if exps.is_empty() || k == usize::MAX {
            break;
        }
    }
    Ok(GammaSearchReport { words: direct, guided, gamma0: Some((gamma0, gamma0_value)) })
}

/// A seeded random basis with entries in `[-bound, bound]`.
pub fn random_basis(r: usize, bound: i64, seed: u64) -> Vec<Vector<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range: Vec<i64> = (-bound..=bound).collect();
    loop {
        let basis: Vec<Vector<i64>> = (0..r)
            .map(|_| Vector::new((0..r).map(|_| *range.choose(&mut rng).expect("nonempty")).collect()).expect("r >= 1"))
            .collect();
        if !Matrix::from_columns(&basis).expect("square").determinant().is_zero() {
            return basis;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::{Character, TorusValue};
    use crate::dynamics::system::{CyclicSystem, IntervalSet, TorusSystem};
    use crate::random_walk::default_measure;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn v(c: &[i64]) -> Vector<i64> {
        Vector::from_i64s(c).unwrap()
    }

    fn torus() -> System {
        System::Torus(TorusSystem::new(Character::new(vec![TorusValue::frac_sqrt(2), TorusValue::frac_sqrt(3)]).unwrap()))
    }

    fn interval(a: BigRational, b: BigRational) -> MeasurableSet {
        MeasurableSet::Intervals(IntervalSet::new(vec![(a, b)]).unwrap())
    }

    #[test]
    fn cesaro_trivial_cases() {
        let s = torus();
        let whole = MeasurableSet::whole(&s);
        let p = default_measure(2).unwrap();
        let rep = cesaro_correlation_experiment(&s, &whole, &v(&[1, 0]), &p, 20, 3, 1).unwrap();
        assert!(rep.cesaro.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!(rep.deviation < 1e-12);

        let b = interval(q(0, 1), q(3, 10));
        let id = GeneratingMeasure::uniform(vec![Unimodular::identity(2)]).unwrap();
        let rep = cesaro_correlation_experiment(&s, &b, &v(&[1, 0]), &id, 10, 2, 1).unwrap();
        let c = super::super::system::correlation(&s, &b, &v(&[1, 0])).unwrap().to_f64();
        assert!(rep.cesaro.iter().all(|x| (x - c).abs() < 1e-12));
        assert_eq!(rep.bound.exact, Some(q(0, 1)));
    }

    #[test]
    fn c_set_cases() {
        let s = torus();
        let p = default_measure(2).unwrap();
        let whole = MeasurableSet::whole(&s);
        let rep = c_set_experiment(&s, &whole, &v(&[1, 0]), &p, &q(1, 2), 30, 4, 2).unwrap();
        assert!(rep.indicators.iter().all(|&b| b));
        assert_eq!(rep.lower_density, q(1, 1));
        let b = interval(q(0, 1), q(3, 10));
        let e = c_set_experiment(&s, &b, &v(&[1, 0]), &p, &q(9, 100), 10, 2, 2).unwrap_err();
        assert_eq!(e.code(), "E_PRECONDITION");
        let rep = c_set_experiment(&s, &b, &v(&[1, 0]), &p, &q(1, 20), 10, 2, 2).unwrap();
        assert_eq!(rep.c_prime, q(7, 100));
        assert_eq!(rep.delta, q(2, 25));
    }

    #[test]
    fn gamma_search_cases() {
        let s = torus();
        let whole = MeasurableSet::whole(&s);
        let budget = GammaBudget { max_word_len: 1, shear_range: 2, walk_candidates: 0, seed: 0 };
        let basis = vec![v(&[1, 0]), v(&[0, 1])];
        let rep = gamma_search(&s, &whole, &basis, &budget).unwrap();
        let hit = rep.words.hit.as_ref().unwrap();
        assert!(hit.gamma.matrix().is_identity());
        assert_eq!(hit.value.value, q(1, 1));

        let big_b = interval(q(0, 1), q(9, 10));
        let rep = gamma_search(&s, &big_b, &[v(&[2, 1]), v(&[-1, 3])], &budget).unwrap();
        let hit = rep.words.hit.as_ref().unwrap();
        assert!(hit.gamma.matrix().is_identity());
        assert!(hit.value.to_f64() >= 0.7);

        let c = CyclicSystem::new(7, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let tiny = MeasurableSet::residues(&c, vec![vec![0, 0]]).unwrap();
        let sys = System::Cyclic(c);
        let rep = gamma_search(&sys, &tiny, &basis, &GammaBudget { max_word_len: 0, shear_range: 0, walk_candidates: 0, seed: 0 })
            .unwrap();
        assert!(rep.words.hit.is_none() && rep.guided.hit.is_none());
        assert_eq!(rep.words.tried, 1);
    }
}
