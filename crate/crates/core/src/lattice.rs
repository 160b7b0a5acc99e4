//! Exact integer linear algebra on `Z^r`: vectors, square matrices,
//! unimodular maps, the sublattices `n!·Z^r`, hyperplanes through the
//! origin and shear maps attached to an ordered basis.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// Element of `Z^r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vector<T> {
    coords: Vec<T>,
}

impl<T: IntScalar> Vector<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Rank("lattice rank must be at least 1".into()));
        }
        Ok(Vector { coords })
    }

    pub fn from_i64s(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zeros(rank: usize) -> Self {
        Vector { coords: vec![T::zero(); rank.max(1)] }
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zeros(rank);
        v.coords[i] = T::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.rank(), other.rank());
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Vector { coords: self.coords.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn sup_norm(&self) -> T {
        self.coords.iter().map(Signed::abs).max().unwrap_or_else(T::zero)
    }

    /// Greatest common divisor of the coordinates (0 for the zero vector).
    pub fn content(&self) -> T {
        self.coords.iter().fold(T::zero(), |g, c| g.gcd(c))
    }

    pub fn cast<U: IntScalar>(&self) -> Option<Vector<U>> {
        let coords = self
            .coords
            .iter()
            .map(|c| U::from_bigint(&c.to_bigint()))
            .collect::<Option<Vec<_>>>()?;
        Some(Vector { coords })
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::DimensionMismatch(format!(
                "vector of rank {} where rank {} was expected",
                self.rank(),
                rank
            )));
        }
        Ok(())
    }
}

impl<T: IntScalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        Vector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: IntScalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        Vector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: IntScalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        Vector { coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = T::one();
        }
        Matrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix { n, entries: vec![T::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Rank("matrix must be at least 1x1".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("matrix is not square ({n} rows)")));
        }
        Ok(Matrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::from_int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<T>]) -> Result<Self> {
        let n = cols.len();
        if n == 0 {
            return Err(Error::Rank("need at least one column".into()));
        }
        if cols.iter().any(|c| c.rank() != n) {
            return Err(Error::DimensionMismatch(format!("{n} columns must each have rank {n}")));
        }
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.entries[i * n + j] = c.coords[i].clone();
            }
        }
        Ok(m)
    }

    /// `I + c·E_ij`.
    pub fn elementary(n: usize, i: usize, j: usize, c: T) -> Self {
        let mut m = Self::identity(n);
        m.entries[i * n + j] = m.entries[i * n + j].clone() + c;
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector { coords: (0..self.n).map(|i| self.get(i, j).clone()).collect() }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "matrix product of mismatched sizes");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] = out.entries[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    /// `self · rhs` where `rhs` is given by its off-zero entries; used by
    /// random walks whose steps are sparse.
    pub fn mul_sparse(&self, rhs: &SparseMatrix<T>) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for &(k, j, ref c) in &rhs.entries {
            for i in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let term = if c.is_one() {
                    a.clone()
                } else if (-c.clone()).is_one() {
                    -a.clone()
                } else {
                    a.clone() * c.clone()
                };
                out.entries[i * n + j] = out.entries[i * n + j].clone() + term;
            }
        }
        out
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        assert_eq!(self.n, v.rank(), "matrix-vector product of mismatched sizes");
        Vector {
            coords: (0..self.n)
                .map(|i| {
                    (0..self.n).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v.coords[j].clone())
                })
                .collect(),
        }
    }

    /// Fraction-free (Bareiss) elimination; every intermediate value is a
    /// minor of the input, so no rounding and no blow-up beyond those minors.
    pub fn determinant(&self) -> T {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return T::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let aik = a[i * n + k].clone();
                for j in k + 1..n {
                    let val = a[i * n + j].clone() * pivot.clone() - aik.clone() * a[k * n + j].clone();
                    a[i * n + j] = val / prev.clone();
                }
            }
            prev = pivot;
        }
        sign * a[n * n - 1].clone()
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let entries = (0..n)
            .filter(|&i| i != row)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix { n: n - 1, entries }
    }

    /// Classical adjugate: `self · adj = det · I`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).determinant();
                let c = if (i + j) % 2 == 0 { c } else { -c };
                adj.entries[j * n + i] = c;
            }
        }
        adj
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn cast<U: IntScalar>(&self) -> Option<Matrix<U>> {
        let entries = self
            .entries
            .iter()
            .map(|c| U::from_bigint(&c.to_bigint()))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix { n: self.n, entries })
    }

    pub fn scale(&self, k: &T) -> Self {
        Matrix { n: self.n, entries: self.entries.iter().map(|e| e.clone() * k.clone()).collect() }
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries.iter().map(Signed::abs).max().unwrap_or_else(T::zero)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Off-zero entries `(row, col, value)` of a square matrix.
#[derive(Clone, Debug)]
pub struct SparseMatrix<T> {
    pub entries: Vec<(usize, usize, T)>,
}

impl<T: IntScalar> From<&Matrix<T>> for SparseMatrix<T> {
    fn from(m: &Matrix<T>) -> Self {
        let n = m.dim();
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !m.get(i, j).is_zero())
            .map(|(i, j)| (i, j, m.get(i, j).clone()))
            .collect();
        SparseMatrix { entries }
    }
}

/// Element of `SL_r(Z)`: an integer matrix of determinant exactly `+1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Unimodular<T>(Matrix<T>);

impl<T: IntScalar> Unimodular<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        let det = m.determinant();
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Unimodular(m))
    }

    pub fn identity(n: usize) -> Self {
        Unimodular(Matrix::identity(n))
    }

    /// `I + c·E_ij` with `i != j`.
    pub fn elementary(n: usize, i: usize, j: usize, c: T) -> Self {
        assert_ne!(i, j, "elementary shear needs i != j");
        Unimodular(Matrix::elementary(n, i, j, c))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Unimodular(self.0.mul(&rhs.0))
    }

    /// The adjugate is the inverse when the determinant is 1.
    pub fn inverse(&self) -> Self {
        Unimodular(self.0.adjugate())
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        self.0.apply(v)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim()), |acc, _| acc.compose(self))
    }

    pub fn cast<U: IntScalar>(&self) -> Option<Unimodular<U>> {
        self.0.cast().map(Unimodular)
    }
}

impl<T: fmt::Display> fmt::Display for Unimodular<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `I ± E_ij` for all `i != j`, ordered by `(i, j)` and `+` before `-`.
/// These `2r(r-1)` matrices generate `SL_r(Z)`.
pub fn elementary_generators<T: IntScalar>(rank: usize) -> Vec<Unimodular<T>> {
    let mut gens = Vec::with_capacity(2 * rank * rank.saturating_sub(1));
    for i in 0..rank {
        for j in 0..rank {
            if i != j {
                gens.push(Unimodular::elementary(rank, i, j, T::one()));
                gens.push(Unimodular::elementary(rank, i, j, -T::one()));
            }
        }
    }
    gens
}

/// Rank of a list of vectors via fraction-free elimination.
pub fn rank_of<T: IntScalar>(vectors: &[Vector<T>]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let cols = first.rank();
    let mut rows: Vec<Vec<T>> = vectors.iter().map(|v| v.coords.clone()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..cols {
                row[k] = row[k].clone() * pivot_row[c].clone() - f.clone() * pivot_row[k].clone();
            }
            let g = row.iter().fold(T::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x = x.clone() / g.clone();
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// True iff `v_1 - v_0, …, v_r - v_0` have nonzero determinant.
pub fn affinely_independent<T: IntScalar>(points: &[Vector<T>]) -> Result<bool> {
    let Some(v0) = points.first() else {
        return Err(Error::DimensionMismatch("need r+1 points, got 0".into()));
    };
    let r = v0.rank();
    if points.len() != r + 1 {
        return Err(Error::DimensionMismatch(format!("need {} points in rank {r}, got {}", r + 1, points.len())));
    }
    for p in points {
        p.check_rank(r)?;
    }
    let edges: Vec<_> = points[1..].iter().map(|p| p - v0).collect();
    Ok(!Matrix::from_columns(&edges)?.determinant().is_zero())
}

/// `Λ(n) = n!·Z^r` with its canonical generator matrix `n!·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice<T> {
    scale: u32,
    generators: Matrix<T>,
}

impl<T: IntScalar> Sublattice<T> {
    pub fn factorial(rank: usize, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("sublattice scale must be positive".into()));
        }
        let f = factorial::<T>(n);
        Ok(Sublattice { scale: n, generators: Matrix::identity(rank).scale(&f) })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn generators(&self) -> &Matrix<T> {
        &self.generators
    }

    /// Index in `Z^r`, i.e. `|det|` of the generator matrix.
    pub fn index(&self) -> T {
        self.generators.determinant().abs()
    }

    pub fn contains(&self, v: &Vector<T>) -> bool {
        let f = self.generators.get(0, 0);
        v.coords.iter().all(|c| c.is_multiple_of(f))
    }
}

pub fn factorial<T: IntScalar>(n: u32) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_int(k as i64))
}

/// Linear hyperplane `{x : x·normal = 0}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Hyperplane<T> {
    normal: Vector<T>,
}

impl<T: IntScalar> Hyperplane<T> {
    pub fn new(normal: Vector<T>) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::Precondition("hyperplane normal must be nonzero".into()));
        }
        Ok(Hyperplane { normal })
    }

    /// Coordinate hyperplane `x_i = 0`.
    pub fn coordinate(rank: usize, i: usize) -> Self {
        Hyperplane { normal: Vector::unit(rank, i) }
    }

    /// Hyperplane spanned by `r-1` vectors, with a primitive normal whose
    /// first nonzero coordinate is positive. `None` when they are dependent.
    pub fn spanned_by(vectors: &[Vector<T>]) -> Option<Self> {
        let r = vectors.first().map(Vector::rank)?;
        if vectors.len() + 1 != r {
            return None;
        }
        // Normal by cofactor expansion along a formal last column.
        let mut normal = Vec::with_capacity(r);
        for i in 0..r {
            let rows: Vec<Vec<T>> = (0..r)
                .filter(|&k| k != i)
                .map(|k| vectors.iter().map(|v| v.coords[k].clone()).collect())
                .collect();
            let d = if r == 1 { T::one() } else { Matrix::from_rows(rows).ok()?.determinant() };
            normal.push(if (i + r - 1) % 2 == 0 { d } else { -d });
        }
        let normal = Vector { coords: normal };
        if normal.is_zero() {
            return None;
        }
        Some(Hyperplane { normal: primitive_normalized(&normal) })
    }

    pub fn normal(&self) -> &Vector<T> {
        &self.normal
    }

    pub fn contains(&self, v: &Vector<T>) -> bool {
        self.normal.dot(v).is_zero()
    }
}

/// Divide out the content and make the first nonzero coordinate positive.
pub fn primitive_normalized<T: IntScalar>(v: &Vector<T>) -> Vector<T> {
    let g = v.content();
    if g.is_zero() {
        return v.clone();
    }
    let mut out = Vector { coords: v.coords.iter().map(|c| c.clone() / g.clone()).collect() };
    if out.coords.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
        out = -&out;
    }
    out
}

/// Shear `S` on an ordered basis `(v_1, …, v_r)`: `v_l ↦ v_l + m·v_1`, all
/// other basis vectors fixed.
#[derive(Clone, Debug)]
pub struct Shear<T> {
    /// The map in basis coordinates: `I + m·E_{1l}`.
    pub on_basis: Matrix<T>,
    /// Extension to all of `Z^r` as an exact rational matrix
    /// `B (I + m E_{1l}) B^{-1}`, stored as integer numerators over a
    /// common denominator `det B` (not reduced).
    pub numerators: Matrix<T>,
    pub denominator: T,
    /// `Some` exactly when every extension entry is an integer.
    pub extension: Option<Unimodular<T>>,
}

impl<T: IntScalar> Shear<T> {
    /// Entry `(i, j)` of the extension as a reduced rational.
    pub fn extension_entry(&self, i: usize, j: usize) -> Ratio<T> {
        Ratio::new(self.numerators.get(i, j).clone(), self.denominator.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.extension.is_some()
    }
}

/// Build the shear `S^β_l` raised to the power `m`. `l` is 1-based, `2 ≤ l ≤ r`.
pub fn shear<T: IntScalar>(basis: &[Vector<T>], l: usize, m: T) -> Result<Shear<T>> {
    let r = basis.len();
    let b = Matrix::from_columns(basis)?;
    if !(2..=r).contains(&l) {
        return Err(Error::Precondition(format!("shear index l = {l} must lie in 2..={r}")));
    }
    let det = b.determinant();
    if det.is_zero() {
        return Err(Error::SingularBasis);
    }
    let on_basis = Matrix::elementary(r, 0, l - 1, m);
    let numerators = b.mul(&on_basis).mul(&b.adjugate());
    let extension = if numerators.entries.iter().all(|e| e.is_multiple_of(&det)) {
        let m = Matrix { n: r, entries: numerators.entries.iter().map(|e| e.clone() / det.clone()).collect() };
        Some(Unimodular::new(m).expect("conjugate of a unipotent matrix has determinant 1"))
    } else {
        None
    };
    Ok(Shear { on_basis, numerators, denominator: det, extension })
}

/// Product of shears `S_2^{m_2} ⋯ S_r^{m_r}` on one basis, i.e. the map
/// `v_1 ↦ v_1`, `v_k ↦ v_k + m_k v_1`.
pub fn multi_shear<T: IntScalar>(basis: &[Vector<T>], exponents: &[T]) -> Result<Shear<T>> {
    let r = basis.len();
    if exponents.len() + 1 != r {
        return Err(Error::DimensionMismatch(format!("need {} shear exponents, got {}", r - 1, exponents.len())));
    }
    let b = Matrix::from_columns(basis)?;
    let det = b.determinant();
    if det.is_zero() {
        return Err(Error::SingularBasis);
    }
    let mut on_basis = Matrix::identity(r);
    for (k, m) in exponents.iter().enumerate() {
        on_basis.set(0, k + 1, m.clone());
    }
    let numerators = b.mul(&on_basis).mul(&b.adjugate());
    let extension = if numerators.entries.iter().all(|e| e.is_multiple_of(&det)) {
        let m = Matrix { n: r, entries: numerators.entries.iter().map(|e| e.clone() / det.clone()).collect() };
        Some(Unimodular::new(m).expect("conjugate of a unipotent matrix has determinant 1"))
    } else {
        None
    };
    Ok(Shear { on_basis, numerators, denominator: det, extension })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = Matrix<i64>;
    type V = Vector<i64>;

    fn v(c: &[i64]) -> V {
        V::from_i64s(c).unwrap()
    }

    /// Cofactor expansion; independent of the elimination route.
    fn det_cofactor(m: &M) -> i64 {
        let n = m.dim();
        if n == 1 {
            return *m.get(0, 0);
        }
        (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m.get(0, j) * det_cofactor(&m.minor(0, j))
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(M::identity(2).determinant(), 1);
        assert_eq!(M::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap().determinant(), 1);
        assert_eq!(M::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap().determinant(), -1);
        assert_eq!(M::from_i64_rows(&[&[0, 0], &[1, 0]]).unwrap().determinant(), 0);
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let m = M::from_rows(rows).unwrap();
            assert_eq!(m.determinant(), det_cofactor(&m), "{m}");
            let big: Matrix<BigInt> = m.cast().unwrap();
            assert_eq!(big.determinant(), BigInt::from(det_cofactor(&m)));
        }
    }

    #[test]
    fn unimodular_adjugate_is_integral_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let gens = elementary_generators::<i64>(n);
            let mut g = Unimodular::identity(n);
            for _ in 0..rng.gen_range(0..12) {
                g = g.compose(&gens[rng.gen_range(0..gens.len())]);
            }
            let adj = g.matrix().adjugate();
            assert_eq!(g.matrix().mul(&adj), M::identity(n).scale(&g.matrix().determinant()));
            assert_eq!(g.matrix().determinant(), 1);
            assert!(g.compose(&g.inverse()).matrix().is_identity());
        }
    }

    #[test]
    fn unimodular_rejects_other_determinants() {
        let m = M::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(Unimodular::new(m), Err(Error::NotUnimodular("-1".into())));
    }

    #[test]
    fn affine_independence_examples() {
        assert!(affinely_independent(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap());
        assert!(!affinely_independent(&[v(&[0, 0]), v(&[1, 0]), v(&[2, 0])]).unwrap());
        assert!(affinely_independent(&[v(&[1, 1]), v(&[3, 2]), v(&[2, 4])]).unwrap());
        assert!(matches!(
            affinely_independent(&[v(&[0, 0]), v(&[1, 0])]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn shear_on_standard_basis() {
        let s = shear(&[v(&[1, 0]), v(&[0, 1])], 2, 1).unwrap();
        let ext = s.extension.unwrap();
        assert_eq!(ext.apply(&v(&[0, 1])), v(&[1, 1]));
        assert_eq!(ext.apply(&v(&[1, 0])), v(&[1, 0]));
    }

    #[test]
    fn shear_zero_power_is_identity() {
        let s = shear(&[v(&[2, 1]), v(&[1, 3])], 2, 0).unwrap();
        assert!(s.on_basis.is_identity());
        assert!(s.extension.unwrap().matrix().is_identity());
    }

    #[test]
    fn shear_extension_can_be_non_integral() {
        let s = shear(&[v(&[1, 1]), v(&[0, 2])], 2, 1).unwrap();
        assert!(!s.is_integral());
        let half = Ratio::new(1, 2);
        let entries: Vec<_> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| s.extension_entry(i, j)).collect();
        assert!(entries.contains(&half), "{entries:?}");
        // On the span of the basis the map is still exact: B·(I+E_12)·B^{-1}·v_2 = v_1 + v_2.
        let image = s.numerators.apply(&v(&[0, 2]));
        assert_eq!(image, v(&[1, 3]).scale(&s.denominator));
    }

    #[test]
    fn shear_rejects_dependent_basis_and_bad_index() {
        assert_eq!(shear(&[v(&[1, 2]), v(&[2, 4])], 2, 1).unwrap_err(), Error::SingularBasis);
        assert!(matches!(shear(&[v(&[1, 0]), v(&[0, 1])], 1, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn shear_powers_add_and_are_unipotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let r = rng.gen_range(2..=4);
            let basis: Vec<V> = loop {
                let b: Vec<V> = (0..r).map(|_| V::new((0..r).map(|_| rng.gen_range(-4..=4)).collect()).unwrap()).collect();
                if M::from_columns(&b).unwrap().determinant() != 0 {
                    break b;
                }
            };
            let l = rng.gen_range(2..=r);
            let (a, b) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            let sa = shear(&basis, l, a).unwrap();
            let sb = shear(&basis, l, b).unwrap();
            let sab = shear(&basis, l, a + b).unwrap();
            assert_eq!(sa.on_basis.mul(&sb.on_basis), sab.on_basis);
            assert_eq!(sa.on_basis.determinant(), 1);
            // Same identity on the rational extension: (N_a/d)(N_b/d) = N_{a+b}/d.
            let d = sa.denominator;
            assert_eq!(sa.numerators.mul(&sb.numerators), sab.numerators.scale(&d));
        }
    }

    #[test]
    fn sublattice_index_is_factorial_power() {
        let s = Sublattice::<i64>::factorial(3, 3).unwrap();
        assert_eq!(s.index(), 216);
        assert!(s.contains(&v(&[6, -12, 0])));
        assert!(!s.contains(&v(&[6, 3, 0])));
        assert!(Sublattice::<i64>::factorial(2, 0).is_err());
    }

    #[test]
    fn hyperplane_through_vectors() {
        let h = Hyperplane::spanned_by(&[v(&[2, 4])]).unwrap();
        assert_eq!(h.normal(), &v(&[2, -1]));
        assert!(h.contains(&v(&[-1, -2])));
        let h3 = Hyperplane::spanned_by(&[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(h3.normal(), &v(&[0, 0, 1]));
        assert!(Hyperplane::spanned_by(&[v(&[1, 1, 0]), v(&[2, 2, 0])]).is_none());
        assert!(Hyperplane::new(v(&[0, 0])).is_err());
    }

    #[test]
    fn rank_counts_independent_vectors() {
        assert_eq!(rank_of(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 0])]), 2);
        assert_eq!(rank_of::<i64>(&[]), 0);
        assert_eq!(rank_of(&[v(&[0, 0])]), 0);
        assert_eq!(rank_of(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]), 2);
    }

    #[test]
    fn generators_count() {
        assert_eq!(elementary_generators::<i64>(2).len(), 4);
        assert_eq!(elementary_generators::<i64>(3).len(), 12);
    }
}
