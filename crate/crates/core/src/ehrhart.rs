//! Lattice simplices and their Ehrhart polynomials.
//!
//! `count_lattice_points` enumerates the bounding box of `t·Δ` and tests
//! each point with the adjugate of the edge matrix, so membership is a
//! handful of integer multiply-adds and no division. The polynomial is the
//! exact interpolant through the counts at `t = 0..r`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{affinely_independent, Matrix, Unimodular, Vector};
use crate::scalar::{rat_to_string, IntScalar};

/// Cap on the number of lattice lines one count may sweep; each line
/// parallel to the last axis is solved in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_points: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_points: 100_000_000 }
    }
}

/// Convex hull of `r+1` affinely independent lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex<T> {
    vertices: Vec<Vector<T>>,
}

impl<T: IntScalar> Simplex<T> {
    pub fn new(vertices: Vec<Vector<T>>) -> Result<Self> {
        if !affinely_independent(&vertices)? {
            return Err(Error::DegenerateSimplex);
        }
        Ok(Simplex { vertices })
    }

    pub fn from_i64s(vertices: &[&[i64]]) -> Result<Self> {
        Self::new(vertices.iter().map(|v| Vector::from_i64s(v)).collect::<Result<_>>()?)
    }

    /// `conv{0, e_1, …, e_r}`.
    pub fn standard(rank: usize) -> Self {
        let mut vertices = vec![Vector::zeros(rank)];
        vertices.extend((0..rank).map(|i| Vector::unit(rank, i)));
        Simplex { vertices }
    }

    pub fn rank(&self) -> usize {
        self.vertices[0].rank()
    }

    pub fn vertices(&self) -> &[Vector<T>] {
        &self.vertices
    }

    /// `v_k - v_0` for `k = 1..r`.
    pub fn edges(&self) -> Vec<Vector<T>> {
        self.vertices[1..].iter().map(|v| v - &self.vertices[0]).collect()
    }

    fn edge_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(&self.edges()).expect("a simplex has r edges of rank r")
    }

    /// `w + γ(Δ)`.
    pub fn transform(&self, gamma: &Unimodular<T>, shift: &Vector<T>) -> Self {
        let vertices = self.vertices.iter().map(|v| &gamma.apply(v) + shift).collect();
        Simplex { vertices }
    }

    /// `n·Δ` (dilation about the origin).
    pub fn dilate(&self, n: &T) -> Self {
        Simplex { vertices: self.vertices.iter().map(|v| v.scale(n)).collect() }
    }

    /// `|det(v_1 - v_0, …, v_r - v_0)| = r!·Vol(Δ)`.
    pub fn volume_times_rfact(&self) -> T {
        self.edge_matrix().determinant().abs()
    }

    /// `|t·Δ ∩ Z^r|`.
    pub fn count_lattice_points(&self, t: u64, budget: &EnumerationBudget) -> Result<u64> {
        if t == 0 {
            return Ok(1);
        }
        let r = self.rank();
        let tt = T::from_u64(t).ok_or_else(|| Error::Precondition("dilation factor too large".into()))?;
        let scaled: Vec<Vector<T>> = self.vertices.iter().map(|v| v.scale(&tt)).collect();
        let mut lo = Vec::with_capacity(r);
        let mut hi = Vec::with_capacity(r);
        for j in 0..r {
            let column = scaled.iter().map(|v| v.coords()[j].clone());
            let a = column.clone().min().expect("nonempty").to_i64();
            let b = column.max().expect("nonempty").to_i64();
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::Budget { what: "lattice point count".into(), needed: "overflow".into(), cap: budget.max_points });
            };
            lo.push(a);
            hi.push(b);
        }
        // Points are counted a whole line (last coordinate free) at a time.
        let last = r - 1;
        let lines: u128 = (0..last).map(|j| (hi[j] - lo[j] + 1) as u128).product();
        if lines > u128::from(budget.max_points) {
            return Err(Error::Budget {
                what: format!("lattice point count of {t}-fold dilate"),
                needed: lines.to_string(),
                cap: budget.max_points,
            });
        }

        let edges = self.edge_matrix();
        let det = edges.determinant();
        let adj = edges.adjugate();
        // Orient so every barycentric numerator must be nonnegative.
        let adj = if det.is_negative() { adj.scale(&-T::one()) } else { adj };
        let bound = det.abs() * tt;
        let base = scaled[0].clone();
        let slope: Vec<T> = adj.column(last).into_coords();
        let slope_sum = slope.iter().fold(T::zero(), |acc, c| acc + c.clone());
        let width = T::from_int(hi[last] - lo[last]);

        // Number of d in [0, width] with c0 + c1·d >= 0 for every (c0, c1).
        let solutions = |constraints: &mut dyn Iterator<Item = (T, T)>| -> u64 {
            let (mut dlo, mut dhi) = (T::zero(), width.clone());
            for (c0, c1) in constraints {
                if c1.is_zero() {
                    if c0.is_negative() {
                        return 0;
                    }
                } else if c1.is_positive() {
                    let need = -(c0.div_floor(&c1));
                    dlo = dlo.max(need);
                } else {
                    dhi = dhi.min(c0.div_floor(&-c1));
                }
            }
            if dlo > dhi {
                0
            } else {
                (dhi - dlo + T::one()).to_u64().expect("line length fits u64")
            }
        };

        let count_line = |prefix: &[i64]| -> u64 {
            // y = adj · (x - t·v_0) at the start of the line.
            let diff: Vec<T> = (0..r)
                .map(|j| T::from_int(if j < last { prefix[j] } else { lo[last] }) - base.coords()[j].clone())
                .collect();
            let y: Vec<T> = (0..r)
                .map(|k| (0..r).fold(T::zero(), |acc, j| acc + adj.get(k, j).clone() * diff[j].clone()))
                .collect();
            let total = y.iter().fold(T::zero(), |acc, c| acc + c.clone());
            let mut constraints = y
                .iter()
                .cloned()
                .zip(slope.iter().cloned())
                .chain(std::iter::once((bound.clone() - total, -slope_sum.clone())));
            solutions(&mut constraints)
        };

        if r == 1 {
            return Ok(count_line(&[]));
        }
        let count_slab = |x0: i64| -> u64 {
            let mut prefix: Vec<i64> = lo[..last].to_vec();
            prefix[0] = x0;
            let mut count = 0u64;
            loop {
                count += count_line(&prefix);
                // Odometer over the coordinates 1..last.
                let mut j = last;
                loop {
                    if j <= 1 {
                        return count;
                    }
                    j -= 1;
                    if prefix[j] < hi[j] {
                        prefix[j] += 1;
                        for k in j + 1..last {
                            prefix[k] = lo[k];
                        }
                        break;
                    }
                }
            }
        };
        Ok((lo[0]..=hi[0]).into_par_iter().map(count_slab).sum())
    }

    pub fn ehrhart_polynomial(&self, budget: &EnumerationBudget) -> Result<EhrhartPolynomial<T>> {
        let r = self.rank() as u64;
        let values = (0..=r)
            .map(|t| {
                let c = self.count_lattice_points(t, budget)?;
                T::from_u64(c).ok_or_else(|| Error::Precondition("count does not fit the scalar type".into()))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(EhrhartPolynomial::interpolate(&values))
    }
}

/// `Σ_k L(Δ,k) t^k` with exact rational coefficients in ascending degree.
/// Equality and order are exact sequence comparison.
#[derive(Clone, Debug)]
pub struct EhrhartPolynomial<T> {
    coeffs: Vec<Ratio<T>>,
}

impl<T: IntScalar> PartialEq for EhrhartPolynomial<T> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl<T: IntScalar> Eq for EhrhartPolynomial<T> {}
impl<T: IntScalar> PartialOrd for EhrhartPolynomial<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: IntScalar> Ord for EhrhartPolynomial<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}
impl<T: IntScalar> std::hash::Hash for EhrhartPolynomial<T> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<T: IntScalar> EhrhartPolynomial<T> {
    pub fn new(coeffs: Vec<Ratio<T>>) -> Self {
        EhrhartPolynomial { coeffs }
    }

    /// Interpolant through `(t, values[t])` for `t = 0..values.len()`, built in
    /// Newton form on the binomial basis and expanded to monomials.
    pub fn interpolate(values: &[T]) -> Self {
        let n = values.len();
        // Forward differences Δ^k y_0.
        let mut diffs: Vec<T> = values.to_vec();
        let mut leading = Vec::with_capacity(n);
        for k in 0..n {
            leading.push(diffs[0].clone());
            for i in 0..n - k - 1 {
                diffs[i] = diffs[i + 1].clone() - diffs[i].clone();
            }
        }
        let mut coeffs = vec![Ratio::zero(); n];
        // falling = t(t-1)…(t-k+1), ascending coefficients.
        let mut falling: Vec<T> = vec![T::one()];
        let mut kfact = T::one();
        for (k, d) in leading.into_iter().enumerate() {
            if k > 0 {
                kfact = kfact * T::from_int(k as i64);
                let shift = T::from_int(k as i64 - 1);
                let mut next = vec![T::zero(); falling.len() + 1];
                for (i, c) in falling.iter().enumerate() {
                    next[i + 1] = next[i + 1].clone() + c.clone();
                    next[i] = next[i].clone() - c.clone() * shift.clone();
                }
                falling = next;
            }
            for (i, c) in falling.iter().enumerate() {
                coeffs[i] = coeffs[i].clone() + Ratio::new(d.clone() * c.clone(), kfact.clone());
            }
        }
        EhrhartPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Ratio<T>] {
        &self.coeffs
    }

    /// `L(Δ, k)`.
    pub fn coefficient(&self, k: usize) -> Ratio<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Ratio<T> {
        self.coeffs.last().cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn eval(&self, t: &T) -> Ratio<T> {
        let t = Ratio::from_integer(t.clone());
        self.coeffs.iter().rev().fold(Ratio::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// `t ↦ P(n·t)`.
    pub fn dilate(&self, n: &T) -> Self {
        let mut p = T::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.clone() * Ratio::from_integer(p.clone());
                p = p.clone() * n.clone();
                out
            })
            .collect();
        EhrhartPolynomial { coeffs }
    }

    /// `L(0) = 1`, `L(r) > 0` and `r!·L(r)` integral.
    pub fn satisfies_invariants(&self) -> bool {
        let r = self.degree() as u32;
        let rfact = crate::lattice::factorial::<T>(r);
        self.coefficient(0).is_one()
            && self.leading() > Ratio::zero()
            && (self.leading() * Ratio::from_integer(rfact)).is_integer()
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }
}

impl<T: IntScalar> fmt::Display for EhrhartPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff_strings().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::elementary_generators;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type S = Simplex<i64>;

    fn q(p: i64, d: i64) -> Ratio<i64> {
        Ratio::new(p, d)
    }

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    /// Membership by solving the barycentric system in exact rationals,
    /// one point at a time: independent of the adjugate fast path.
    fn brute_count(s: &S, t: i64) -> u64 {
        if t == 0 {
            return 1;
        }
        let r = s.rank();
        let pts: Vec<Vec<Ratio<i64>>> = s
            .vertices()
            .iter()
            .map(|v| v.coords().iter().map(|&c| Ratio::from_integer(c * t)).collect())
            .collect();
        let lo: Vec<i64> = (0..r).map(|j| s.vertices().iter().map(|v| v.coords()[j] * t).min().unwrap()).collect();
        let hi: Vec<i64> = (0..r).map(|j| s.vertices().iter().map(|v| v.coords()[j] * t).max().unwrap()).collect();
        let mut count = 0;
        let mut x = lo.clone();
        loop {
            // Solve Σ λ_i p_i = x, Σ λ_i = 1 by Gaussian elimination.
            let n = r + 1;
            let mut a: Vec<Vec<Ratio<i64>>> = (0..n)
                .map(|row| {
                    let mut line: Vec<Ratio<i64>> = (0..n)
                        .map(|col| if row < r { pts[col][row] } else { Ratio::one() })
                        .collect();
                    line.push(if row < r { Ratio::from_integer(x[row]) } else { Ratio::one() });
                    line
                })
                .collect();
            for c in 0..n {
                let p = (c..n).find(|&i| !a[i][c].is_zero()).unwrap();
                a.swap(c, p);
                let piv = a[c][c];
                for k in c..=n {
                    a[c][k] /= piv;
                }
                for i in 0..n {
                    if i != c && !a[i][c].is_zero() {
                        let f = a[i][c];
                        for k in c..=n {
                            let sub = f * a[c][k];
                            a[i][k] -= sub;
                        }
                    }
                }
            }
            if (0..n).all(|i| a[i][n] >= Ratio::zero()) {
                count += 1;
            }
            let mut j = r;
            loop {
                if j == 0 {
                    return count;
                }
                j -= 1;
                if x[j] < hi[j] {
                    x[j] += 1;
                    for k in j + 1..r {
                        x[k] = lo[k];
                    }
                    break;
                }
            }
        }
    }

    fn random_simplex(rng: &mut ChaCha8Rng, r: usize, range: i64) -> S {
        loop {
            let vs: Vec<Vector<i64>> = (0..=r)
                .map(|_| Vector::new((0..r).map(|_| rng.gen_range(-range..=range)).collect()).unwrap())
                .collect();
            if let Ok(s) = S::new(vs) {
                return s;
            }
        }
    }

    #[test]
    fn count_examples() {
        let unit = S::standard(2);
        assert_eq!(unit.count_lattice_points(2, &budget()).unwrap(), 6);
        assert_eq!(unit.count_lattice_points(0, &budget()).unwrap(), 1);
        let big = S::from_i64s(&[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        assert_eq!(big.count_lattice_points(1, &budget()).unwrap(), 6);
        assert_eq!(brute_count(&unit, 2), 6);
        assert_eq!(brute_count(&big, 1), 6);
    }

    #[test]
    fn count_matches_rational_solve_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..60 {
            let r = rng.gen_range(1..=3);
            let s = random_simplex(&mut rng, r, 4);
            let t = rng.gen_range(0..=3);
            assert_eq!(s.count_lattice_points(t as u64, &budget()).unwrap(), brute_count(&s, t), "{s:?} t={t}");
        }
    }

    #[test]
    fn budget_error_names_the_cap() {
        let s = S::from_i64s(&[&[0, 0], &[1000, 0], &[0, 1000]]).unwrap();
        let err = s.count_lattice_points(10, &EnumerationBudget { max_points: 1000 }).unwrap_err();
        assert!(matches!(err, Error::Budget { cap: 1000, .. }));
        assert!(s.ehrhart_polynomial(&EnumerationBudget { max_points: 10 }).is_err());
    }

    #[test]
    fn polynomial_examples() {
        let p = S::standard(2).ehrhart_polynomial(&budget()).unwrap();
        assert_eq!(p.coeffs(), &[q(1, 1), q(3, 2), q(1, 2)]);
        let seg = S::standard(1).ehrhart_polynomial(&budget()).unwrap();
        assert_eq!(seg.coeffs(), &[q(1, 1), q(1, 1)]);
        let shear = Unimodular::elementary(2, 0, 1, 1);
        let sheared = S::standard(2).transform(&shear, &Vector::zeros(2));
        assert_eq!(sheared.ehrhart_polynomial(&budget()).unwrap(), p);
        assert_eq!(p.to_string(), "(1, 3/2, 1/2)");
    }

    #[test]
    fn interpolation_of_known_polynomial() {
        // (t+1)(t+2)(t+3)/6 at t = 0..3.
        let p = EhrhartPolynomial::<i64>::interpolate(&[1, 4, 10, 20]);
        assert_eq!(p.coeffs(), &[q(1, 1), q(11, 6), q(1, 1), q(1, 6)]);
        assert_eq!(p.eval(&4), q(35, 1));
    }

    #[test]
    fn transform_examples() {
        let unit = S::standard(2);
        assert_eq!(unit.transform(&Unimodular::identity(2), &Vector::zeros(2)), unit);
        let shifted = unit.transform(&Unimodular::identity(2), &Vector::from_i64s(&[5, -3]).unwrap());
        assert_eq!(shifted, S::from_i64s(&[&[5, -3], &[6, -3], &[5, -2]]).unwrap());
        let g = Unimodular::new(Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap()).unwrap();
        assert_eq!(unit.transform(&g, &Vector::zeros(2)), S::from_i64s(&[&[0, 0], &[1, 0], &[1, 1]]).unwrap());
    }

    #[test]
    fn volume_examples() {
        assert_eq!(S::standard(2).volume_times_rfact(), 1);
        assert_eq!(S::from_i64s(&[&[0, 0], &[2, 0], &[0, 2]]).unwrap().volume_times_rfact(), 4);
        assert_eq!(S::from_i64s(&[&[1, 1], &[3, 2], &[2, 4]]).unwrap().volume_times_rfact(), 5);
    }

    #[test]
    fn degenerate_simplex_rejected() {
        assert_eq!(S::from_i64s(&[&[0, 0], &[1, 1], &[2, 2]]), Err(Error::DegenerateSimplex));
    }

    #[test]
    fn extrapolation_leading_coefficient_and_dilation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let r = rng.gen_range(2..=3);
            let s = random_simplex(&mut rng, r, 3);
            let p = s.ehrhart_polynomial(&budget()).unwrap();
            assert!(p.satisfies_invariants(), "{p}");
            for t in r + 1..=r + 2 {
                let c = s.count_lattice_points(t as u64, &budget()).unwrap() as i64;
                assert_eq!(p.eval(&(t as i64)), Ratio::from_integer(c));
            }
            let rfact = (1..=r as i64).product::<i64>();
            assert_eq!(p.leading() * rfact, Ratio::from_integer(s.volume_times_rfact()));
            for n in [2, 3] {
                assert_eq!(s.dilate(&n).ehrhart_polynomial(&budget()).unwrap(), p.dilate(&n));
            }
        }
    }

    #[test]
    fn unimodular_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gens = elementary_generators::<i64>(2);
        for _ in 0..20 {
            let s = random_simplex(&mut rng, 2, 4);
            let p = s.ehrhart_polynomial(&budget()).unwrap();
            let mut g = Unimodular::identity(2);
            for _ in 0..rng.gen_range(0..=8) {
                g = g.compose(&gens[rng.gen_range(0..gens.len())]);
            }
            let w = Vector::from_i64s(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)]).unwrap();
            assert_eq!(s.transform(&g, &w).ehrhart_polynomial(&budget()).unwrap(), p);
        }
    }

    #[test]
    fn big_integer_scalar_agrees() {
        let s = Simplex::<BigInt>::from_i64s(&[&[1, 1], &[3, 2], &[2, 4]]).unwrap();
        let small = S::from_i64s(&[&[1, 1], &[3, 2], &[2, 4]]).unwrap();
        let pb = s.ehrhart_polynomial(&budget()).unwrap();
        let ps = small.ehrhart_polynomial(&budget()).unwrap();
        assert_eq!(pb.coeff_strings(), ps.coeff_strings());
    }
}
