//! The two exactly solvable families of measure-preserving `Z^r`-actions:
//! translations of `(Z/m)^d` through an integer matrix, and rotations of
//! the circle by `v·α`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::character::{Character, TorusValue};
use crate::error::{Error, Result};
use crate::lattice::{rank_of, Vector};
use crate::scalar::IntScalar;
use crate::spectra::BoxRegion;

/// Precision of the shifts `v·α` used for interval arithmetic.
pub const SHIFT_BITS: u32 = 128;

/// `(Z/m)^d` with `v` acting by `x ↦ x + A v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSystem {
    m: i64,
    /// `d × r`, entries reduced into `[0, m)`.
    a: Vec<Vec<i64>>,
    r: usize,
}

impl CyclicSystem {
    pub fn new(m: i64, a: Vec<Vec<i64>>) -> Result<Self> {
        if m < 1 {
            return Err(Error::Precondition("modulus must be positive".into()));
        }
        let r = a.first().map(Vec::len).unwrap_or(0);
        if a.is_empty() || r == 0 || a.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("action matrix must be a nonempty d×r array".into()));
        }
        let a = a.into_iter().map(|row| row.into_iter().map(|x| x.rem_euclid(m)).collect()).collect();
        Ok(CyclicSystem { m, a, r })
    }

    pub fn modulus(&self) -> i64 {
        self.m
    }

    pub fn d(&self) -> usize {
        self.a.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn size(&self) -> u64 {
        (self.m as u64).pow(self.d() as u32)
    }

    /// `A v mod m`.
    pub fn translation<T: IntScalar>(&self, v: &Vector<T>) -> Vec<i64> {
        let m = T::from_int(self.m);
        let vm: Vec<i64> = v.coords().iter().map(|x| x.mod_floor(&m).to_i64().expect("residue fits")).collect();
        self.a
            .iter()
            .map(|row| row.iter().zip(&vm).fold(0i128, |acc, (a, b)| acc + *a as i128 * *b as i128).rem_euclid(self.m as i128) as i64)
            .collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        BoxRegion::cube(self.d(), 0, self.m - 1).expect("m >= 1").points().map(Vector::into_coords).collect::<Vec<_>>().into_iter()
    }

    pub fn index(&self, x: &[i64]) -> usize {
        x.iter().fold(0usize, |acc, &c| acc * self.m as usize + c as usize)
    }

    /// Subgroup of `(Z/m)^d` generated by `gens`.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let mut group = BTreeSet::from([vec![0; self.d()]]);
        let mut frontier = vec![vec![0; self.d()]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(self.m)).collect();
                if group.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        group
    }

    /// Columns of `A` generate `(Z/m)^d`.
    pub fn is_ergodic(&self) -> bool {
        self.subgroup(&self.columns()).len() as u64 == self.size()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.r).map(|j| self.a.iter().map(|row| row[j]).collect()).collect()
    }
}

/// The circle with `v` acting by `x ↦ x + ⟨α, v⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSystem {
    alpha: Character,
}

impl TorusSystem {
    pub fn new(alpha: Character) -> Self {
        TorusSystem { alpha }
    }

    pub fn alpha(&self) -> &Character {
        &self.alpha
    }

    pub fn r(&self) -> usize {
        self.alpha.rank()
    }

    pub fn shift<T: IntScalar>(&self, v: &Vector<T>) -> TorusValue {
        self.alpha.pair(v)
    }

    /// The action is ergodic iff `{⟨α, v⟩}` is dense, i.e. some `α_i` is irrational.
    pub fn is_ergodic(&self) -> bool {
        self.alpha.has_irrational_coordinate()
    }

    /// `1, α_1, …, α_r` rationally independent (the action is free). Basis
    /// irrationals are taken to be independent of each other and of 1.
    pub fn is_free(&self) -> bool {
        let bases: BTreeSet<String> =
            self.alpha.coords().iter().flat_map(|c| c.terms().map(|(b, _)| b.tag().to_string())).collect();
        if bases.is_empty() {
            return false;
        }
        let rows: Vec<Vector<BigInt>> = self
            .alpha
            .coords()
            .iter()
            .map(|c| {
                let coeffs = bases
                    .iter()
                    .map(|tag| c.terms().find(|(b, _)| b.tag() == tag).map(|(_, k)| k.clone()).unwrap_or_default())
                    .collect();
                Vector::new(coeffs).expect("nonempty")
            })
            .collect();
        rank_of(&rows) == self.r()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum System {
    Cyclic(CyclicSystem),
    Torus(TorusSystem),
}

impl System {
    pub fn r(&self) -> usize {
        match self {
            System::Cyclic(c) => c.r(),
            System::Torus(t) => t.r(),
        }
    }

    pub fn is_ergodic(&self) -> bool {
        match self {
            System::Cyclic(c) => c.is_ergodic(),
            System::Torus(t) => t.is_ergodic(),
        }
    }
}

/// Finite union of half-open intervals `[a, b)` in `[0, 1)`, rational
/// endpoints, kept sorted, disjoint and non-adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalSet {
    pub fn new(raw: Vec<(BigRational, BigRational)>) -> Result<Self> {
        for (a, b) in &raw {
            if a.is_negative() || *b > BigRational::one() || a > b {
                return Err(Error::Precondition(format!("interval [{a}, {b}) must satisfy 0 <= a <= b <= 1")));
            }
        }
        Ok(Self::normalized(raw))
    }

    fn normalized(mut raw: Vec<(BigRational, BigRational)>) -> Self {
        raw.retain(|(a, b)| a < b);
        raw.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::new();
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn full() -> Self {
        IntervalSet { intervals: vec![(BigRational::zero(), BigRational::one())] }
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn measure(&self) -> BigRational {
        self.intervals.iter().fold(BigRational::zero(), |acc, (a, b)| acc + b - a)
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `B + s mod 1`.
    pub fn shift(&self, s: &BigRational) -> Self {
        let s = s - s.floor();
        let one = BigRational::one();
        let mut raw = Vec::new();
        for (a, b) in &self.intervals {
            let (a, b) = (a + &s, b + &s);
            if b <= one {
                raw.push((a, b));
            } else if a >= one {
                raw.push((a - &one, b - &one));
            } else {
                raw.push((a, one.clone()));
                raw.push((BigRational::zero(), b - &one));
            }
        }
        Self::normalized(raw)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalized(self.intervals.iter().chain(&other.intervals).cloned().collect())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = &self.intervals[i];
            let (a2, b2) = &other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x < b)
    }

    /// Least common denominator of the endpoints.
    pub fn denominator(&self) -> BigInt {
        self.intervals.iter().fold(BigInt::one(), |acc, (a, b)| acc.lcm(a.denom()).lcm(b.denom()))
    }
}

/// Subset `B` of the phase space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasurableSet {
    /// Elements of `(Z/m)^d`, reduced.
    Residues(BTreeSet<Vec<i64>>),
    Intervals(IntervalSet),
}

impl MeasurableSet {
    /// Residue set for a cyclic system; entries are reduced mod `m`.
    pub fn residues(system: &CyclicSystem, points: Vec<Vec<i64>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != system.d() {
                return Err(Error::DimensionMismatch(format!("residue of length {} in dimension {}", p.len(), system.d())));
            }
            set.insert(p.into_iter().map(|x| x.rem_euclid(system.modulus())).collect());
        }
        Ok(MeasurableSet::Residues(set))
    }

    pub fn whole(system: &System) -> Self {
        match system {
            System::Cyclic(c) => MeasurableSet::Residues(c.points().collect()),
            System::Torus(_) => MeasurableSet::Intervals(IntervalSet::full()),
        }
    }
}

/// An exact rational together with an absolute error bound; `err = 0`
/// means the value is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Measured {
    pub value: BigRational,
    pub err: f64,
}

impl Measured {
    pub fn exact(value: BigRational) -> Self {
        Measured { value, err: 0.0 }
    }

    pub fn to_f64(&self) -> f64 {
        crate::scalar::big_rat_to_f64(&self.value)
    }

    /// Positive beyond the error bound.
    pub fn certainly_positive(&self) -> bool {
        self.value.is_positive() && (self.err == 0.0 || self.to_f64() > self.err)
    }
}

/// A system paired with one of its sets, preprocessed for repeated
/// correlation queries.
#[derive(Clone, Debug)]
pub struct Prepared<'a> {
    pub system: &'a System,
    pub set: &'a MeasurableSet,
    kind: PreparedKind,
}

#[derive(Clone, Debug)]
enum PreparedKind {
    Cyclic { member: Vec<bool>, list: Vec<Vec<i64>> },
    /// Endpoints scaled to integers on the grid `1/(q·2^SHIFT_BITS)`.
    Torus { q: BigInt, grid: Vec<(BigInt, BigInt)>, unit: BigInt },
}

impl<'a> Prepared<'a> {
    pub fn new(system: &'a System, set: &'a MeasurableSet) -> Result<Self> {
        let kind = match (system, set) {
            (System::Cyclic(c), MeasurableSet::Residues(pts)) => {
                let mut member = vec![false; c.size() as usize];
                for p in pts {
                    if p.len() != c.d() || p.iter().any(|&x| x < 0 || x >= c.modulus()) {
                        return Err(Error::Precondition(format!("residue {p:?} is not an element of (Z/m)^d")));
                    }
                    member[c.index(p)] = true;
                }
                PreparedKind::Cyclic { member, list: pts.iter().cloned().collect() }
            }
            (System::Torus(t), MeasurableSet::Intervals(iv)) => {
                // Rational parts of shifts then land on the grid exactly.
                let q = t
                    .alpha()
                    .coords()
                    .iter()
                    .fold(iv.denominator(), |q, a| q.lcm(a.rational_part().denom()));
                let unit = &q << SHIFT_BITS as usize;
                let scale = BigRational::from_integer(unit.clone());
                let grid = iv
                    .intervals()
                    .iter()
                    .map(|(a, b)| ((a * &scale).to_integer(), (b * &scale).to_integer()))
                    .collect();
                PreparedKind::Torus { q, grid, unit }
            }
            _ => return Err(Error::UnsupportedSystem("set kind does not match the system".into())),
        };
        Ok(Prepared { system, set, kind })
    }

    pub fn measure(&self) -> BigRational {
        match (&self.kind, self.set) {
            (PreparedKind::Cyclic { list, .. }, _) => {
                let System::Cyclic(c) = self.system else { unreachable!() };
                BigRational::new(BigInt::from(list.len()), BigInt::from(c.size()))
            }
            (_, MeasurableSet::Intervals(iv)) => iv.measure(),
            _ => unreachable!(),
        }
    }

    /// Number of interval endpoints (0 for cyclic sets).
    fn endpoints(&self) -> usize {
        match &self.kind {
            PreparedKind::Torus { grid, .. } => 2 * grid.len(),
            PreparedKind::Cyclic { .. } => 0,
        }
    }

    /// Grid shift for `⟨α, w⟩` and its error in units of 1.
    fn grid_shift(&self, w: &Vector<BigInt>) -> (BigInt, f64) {
        let (System::Torus(t), PreparedKind::Torus { q, .. }) = (self.system, &self.kind) else { unreachable!() };
        let shift = t.shift(w);
        let rational = shift.rational_part().clone();
        let unit = BigRational::from_integer(q << SHIFT_BITS as usize);
        let exact = (&rational * unit).to_integer();
        if shift.is_rational() {
            return (exact, 0.0);
        }
        let s = shift.add(&TorusValue::rational(-rational)).approx(SHIFT_BITS);
        (exact + &s.numer * q, s.err_f64() + 2f64.powi(-(SHIFT_BITS as i32)))
    }

    /// `μ(B ∩ w_1.B ∩ ⋯ ∩ w_k.B)`.
    pub fn multi_correlation(&self, ws: &[Vector<BigInt>]) -> Measured {
        match (&self.kind, self.system) {
            (PreparedKind::Cyclic { member, list }, System::Cyclic(c)) => {
                let shifts: Vec<Vec<i64>> = ws.iter().map(|w| c.translation(w)).collect();
                let m = c.modulus();
                let count = list
                    .iter()
                    .filter(|x| {
                        shifts.iter().all(|a| {
                            let y: Vec<i64> = x.iter().zip(a).map(|(xi, ai)| (xi - ai).rem_euclid(m)).collect();
                            member[c.index(&y)]
                        })
                    })
                    .count();
                Measured::exact(BigRational::new(BigInt::from(count), BigInt::from(c.size())))
            }
            (PreparedKind::Torus { grid, unit, .. }, System::Torus(_)) => {
                let mut acc = grid.clone();
                let mut err = 0.0;
                for w in ws {
                    let (s, e) = self.grid_shift(w);
                    err += e;
                    acc = grid_intersect(&acc, &grid_shift(grid, &s, unit));
                }
                let len = acc.iter().fold(BigInt::zero(), |a, (x, y)| a + y - x);
                Measured { value: BigRational::new(len, unit.clone()), err: self.endpoints() as f64 * err }
            }
            _ => unreachable!(),
        }
    }

    /// `μ(B ∩ w.B)`.
    pub fn correlation(&self, w: &Vector<BigInt>) -> Measured {
        self.multi_correlation(std::slice::from_ref(w))
    }
}

fn grid_shift(grid: &[(BigInt, BigInt)], s: &BigInt, unit: &BigInt) -> Vec<(BigInt, BigInt)> {
    let s = s.mod_floor(unit);
    let mut out = Vec::with_capacity(grid.len() + 1);
    for (a, b) in grid {
        let (a, b) = (a + &s, b + &s);
        if &b <= unit {
            out.push((a, b));
        } else if &a >= unit {
            out.push((a - unit, b - unit));
        } else {
            out.push((BigInt::zero(), b - unit));
            out.push((a, unit.clone()));
        }
    }
    out.sort();
    out
}

fn grid_intersect(x: &[(BigInt, BigInt)], y: &[(BigInt, BigInt)]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let lo = (&x[i].0).max(&y[j].0);
        let hi = (&x[i].1).min(&y[j].1);
        if lo < hi {
            out.push((lo.clone(), hi.clone()));
        }
        if x[i].1 < y[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn to_big<T: IntScalar>(v: &Vector<T>) -> Vector<BigInt> {
    Vector::new(v.coords().iter().map(IntScalar::to_bigint).collect()).expect("rank >= 1")
}

fn check_vector<T: IntScalar>(system: &System, v: &Vector<T>) -> Result<()> {
    v.check_rank(system.r())
}

/// `μ(B ∩ v.B)`: exact for cyclic systems; for the circle, exact on the
/// rounded shift with error at most `2J·ε` (`J` intervals, shift error `ε`).
pub fn correlation<T: IntScalar>(system: &System, set: &MeasurableSet, v: &Vector<T>) -> Result<Measured> {
    check_vector(system, v)?;
    Ok(Prepared::new(system, set)?.correlation(&to_big(v)))
}

/// `μ(B ∩ w_1.B ∩ ⋯ ∩ w_k.B)`, `k >= 1`.
pub fn multi_correlation<T: IntScalar>(system: &System, set: &MeasurableSet, ws: &[Vector<T>]) -> Result<Measured> {
    if ws.is_empty() {
        return Err(Error::Precondition("need at least one vector".into()));
    }
    for w in ws {
        check_vector(system, w)?;
    }
    let ws: Vec<Vector<BigInt>> = ws.iter().map(to_big).collect();
    Ok(Prepared::new(system, set)?.multi_correlation(&ws))
}

/// `μ(v.B)`; equals `μ(B)` for every `v` since both actions preserve measure.
pub fn translate_measure<T: IntScalar>(system: &System, set: &MeasurableSet, v: &Vector<T>) -> Result<BigRational> {
    check_vector(system, v)?;
    match (system, set) {
        (System::Cyclic(c), MeasurableSet::Residues(pts)) => {
            let a = c.translation(v);
            let moved: BTreeSet<Vec<i64>> =
                pts.iter().map(|x| x.iter().zip(&a).map(|(xi, ai)| (xi + ai).rem_euclid(c.modulus())).collect()).collect();
            Ok(BigRational::new(BigInt::from(moved.len()), BigInt::from(c.size())))
        }
        (System::Torus(t), MeasurableSet::Intervals(iv)) => {
            Ok(iv.shift(&t.shift(v).approx(SHIFT_BITS).to_rational()).measure())
        }
        _ => Err(Error::UnsupportedSystem("set kind does not match the system".into())),
    }
}

/// Measure of `∪_{k ∈ Z} kλ.B`.
pub fn orbit_union_measure<T: IntScalar>(system: &System, set: &MeasurableSet, lambda: &Vector<T>) -> Result<BigRational> {
    check_vector(system, lambda)?;
    match (system, set) {
        (System::Cyclic(c), MeasurableSet::Residues(pts)) => {
            let orbit = c.subgroup(&[c.translation(lambda)]);
            let union: BTreeSet<Vec<i64>> = pts
                .iter()
                .flat_map(|x| orbit.iter().map(move |h| x.iter().zip(h).map(|(a, b)| (a + b).rem_euclid(c.modulus())).collect()))
                .collect();
            Ok(BigRational::new(BigInt::from(union.len()), BigInt::from(c.size())))
        }
        (System::Torus(t), MeasurableSet::Intervals(iv)) => {
            if iv.is_empty() {
                return Ok(BigRational::zero());
            }
            let s = t.shift(lambda);
            match s.exact() {
                // Dense orbit: the saturation of a set of positive measure is conull.
                None => Ok(BigRational::one()),
                Some(q) => {
                    let den = q.denom().to_u64().ok_or_else(|| Error::Precondition("rotation denominator too large".into()))?;
                    let mut u = iv.clone();
                    for j in 1..den {
                        u = u.union(&iv.shift(&BigRational::new(BigInt::from(j), BigInt::from(den))));
                    }
                    Ok(u.measure())
                }
            }
        }
        _ => Err(Error::UnsupportedSystem("set kind does not match the system".into())),
    }
}

/// One coset of the subgroup generated by `A(n!·e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub members: Vec<Vec<i64>>,
    pub measure: BigRational,
    /// `ν(B) = |B ∩ coset| / |coset|`.
    pub conditional: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    pub best: usize,
    /// Whether the best component has `ν(B) > μ(B)/3`; reported, never asserted.
    pub exceeds_third: bool,
}

/// Ergodic components of the `n!·Z^r` action on a cyclic system.
pub fn ergodic_components(system: &System, set: &MeasurableSet, n: u32) -> Result<ComponentReport> {
    let (System::Cyclic(c), MeasurableSet::Residues(pts)) = (system, set) else {
        return Err(Error::UnsupportedSystem("ergodic components are computed for cyclic systems only".into()));
    };
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let m = c.modulus();
    let fact = (1..=n as i64).fold(1i64 % m, |acc, k| ((acc as i128 * k as i128) % m as i128) as i64);
    let gens: Vec<Vec<i64>> = c.columns().into_iter().map(|col| col.into_iter().map(|x| (x * fact).rem_euclid(m)).collect()).collect();
    let h = c.subgroup(&gens);
    let mut assigned = BTreeSet::new();
    let mut components = Vec::new();
    let total = BigInt::from(c.size());
    for x in c.points() {
        if assigned.contains(&x) {
            continue;
        }
        let members: Vec<Vec<i64>> = h.iter().map(|g| x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(m)).collect()).collect();
        let mut members = members;
        members.sort();
        let inside = members.iter().filter(|p| pts.contains(*p)).count();
        assigned.extend(members.iter().cloned());
        components.push(Component {
            measure: BigRational::new(BigInt::from(members.len()), total.clone()),
            conditional: BigRational::new(BigInt::from(inside), BigInt::from(members.len())),
            members,
        });
    }
    let best = (0..components.len()).fold(0, |b, i| if components[i].conditional > components[b].conditional { i } else { b });
    let mu = BigRational::new(BigInt::from(pts.len()), total);
    let exceeds_third = components[best].conditional > mu / BigRational::from_integer(3.into());
    Ok(ComponentReport { components, best, exceeds_third })
}
