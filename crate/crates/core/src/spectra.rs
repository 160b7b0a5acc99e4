//! Subsets of `Z^r`, their density and their volume/Ehrhart spectra, and
//! the search for configurations `v_0 + n·γ(v_k)` inside a set.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;

use crate::ehrhart::{EhrhartPolynomial, EnumerationBudget, Simplex};
use crate::error::{Error, Result};
use crate::lattice::{Matrix, Unimodular, Vector};
use crate::random_walk::{derive_seed, sample_walk, GeneratingMeasure};
use crate::scalar::IntScalar;
use crate::words::enumerate_words;

/// Axis-parallel integer box `[lo_1, hi_1] × ⋯ × [lo_r, hi_r]`, inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRegion {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::DimensionMismatch(format!("box corners of lengths {} and {}", lo.len(), hi.len())));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Window("box has lo > hi in some coordinate".into()));
        }
        Ok(BoxRegion { lo, hi })
    }

    /// `[a, b]^r`.
    pub fn cube(rank: usize, a: i64, b: i64) -> Result<Self> {
        Self::new(vec![a; rank], vec![b; rank])
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn side(&self, j: usize) -> u64 {
        (self.hi[j] - self.lo[j] + 1) as u64
    }

    pub fn volume(&self) -> u128 {
        (0..self.rank()).map(|j| self.side(j) as u128).product()
    }

    pub fn contains(&self, v: &Vector<i64>) -> bool {
        v.rank() == self.rank() && v.coords().iter().enumerate().all(|(j, x)| (self.lo[j]..=self.hi[j]).contains(x))
    }

    /// Points in row-major order: the last coordinate varies fastest.
    pub fn points(&self) -> impl Iterator<Item = Vector<i64>> + '_ {
        let mut cur = Some(self.lo.clone());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut j = next.len();
            cur = loop {
                if j == 0 {
                    break None;
                }
                j -= 1;
                if next[j] < self.hi[j] {
                    next[j] += 1;
                    break Some(next);
                }
                next[j] = self.lo[j];
            };
            Some(Vector::new(out).expect("rank >= 1"))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSetKind {
    /// Finitely many points, all inside `window`; nothing outside is known.
    Explicit { points: BTreeSet<Vector<i64>>, window: BoxRegion },
    /// `{x : x mod m ∈ residues}`, residues reduced into `[0, m)^r`.
    Periodic { modulus: i64, residues: BTreeSet<Vector<i64>>, rank: usize },
    /// `n·Z^r`.
    Sublattice { n: i64, rank: usize },
}

/// A set `E ⊆ Z^r` with an exact membership oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    kind: PointSetKind,
}

impl PointSet {
    pub fn explicit(points: Vec<Vector<i64>>, window: BoxRegion) -> Result<Self> {
        let r = window.rank();
        for p in &points {
            p.check_rank(r)?;
            if !window.contains(p) {
                return Err(Error::Window(format!("point {p} lies outside the window")));
            }
        }
        Ok(PointSet { kind: PointSetKind::Explicit { points: points.into_iter().collect(), window } })
    }

    /// Periodic set; residues are reduced mod `m` on construction.
    pub fn periodic(modulus: i64, residues: Vec<Vector<i64>>, rank: usize) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::Precondition("modulus must be positive".into()));
        }
        if rank == 0 {
            return Err(Error::Rank("rank must be at least 1".into()));
        }
        let mut set = BTreeSet::new();
        for v in residues {
            v.check_rank(rank)?;
            set.insert(Vector::new(v.coords().iter().map(|x| x.rem_euclid(modulus)).collect()).expect("rank >= 1"));
        }
        Ok(PointSet { kind: PointSetKind::Periodic { modulus, residues: set, rank } })
    }

    pub fn sublattice(rank: usize, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Precondition("sublattice scale must be positive".into()));
        }
        if rank == 0 {
            return Err(Error::Rank("rank must be at least 1".into()));
        }
        Ok(PointSet { kind: PointSetKind::Sublattice { n, rank } })
    }

    pub fn full(rank: usize) -> Result<Self> {
        Self::sublattice(rank, 1)
    }

    pub fn kind(&self) -> &PointSetKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        match &self.kind {
            PointSetKind::Explicit { window, .. } => window.rank(),
            PointSetKind::Periodic { rank, .. } | PointSetKind::Sublattice { rank, .. } => *rank,
        }
    }

    pub fn contains<T: IntScalar>(&self, v: &Vector<T>) -> bool {
        if v.rank() != self.rank() {
            return false;
        }
        match &self.kind {
            PointSetKind::Explicit { points, .. } => v.cast::<i64>().is_some_and(|w| points.contains(&w)),
            PointSetKind::Periodic { modulus, residues, .. } => {
                let m = T::from_int(*modulus);
                let reduced: Vec<i64> = v.coords().iter().map(|x| x.mod_floor(&m).to_i64().expect("residue fits")).collect();
                residues.contains(&Vector::new(reduced).expect("rank >= 1"))
            }
            PointSetKind::Sublattice { n, .. } => {
                let n = T::from_int(*n);
                v.coords().iter().all(|x| x.is_multiple_of(&n))
            }
        }
    }

    /// `E ∩ region`, in row-major order.
    pub fn points_in(&self, region: &BoxRegion) -> Vec<Vector<i64>> {
        match &self.kind {
            PointSetKind::Explicit { points, .. } => {
                let mut v: Vec<_> = points.iter().filter(|p| region.contains(p)).cloned().collect();
                v.sort();
                v
            }
            _ => region.points().filter(|p| self.contains(p)).collect(),
        }
    }
}

/// `#{x ∈ [a, a+n-1] : x ≡ rho (mod m)}`.
fn residue_count(a: i64, n: i64, rho: i64, m: i64) -> i64 {
    (a + n - 1 - rho).div_euclid(m) - (a - 1 - rho).div_euclid(m)
}

/// Best box fraction `sup_v |E ∩ (v + [0, n-1]^r)| / n^r` for each size.
pub fn density_estimate(e: &PointSet, sizes: &[u64]) -> Result<Vec<(u64, Ratio<u64>)>> {
    if sizes.iter().any(|&s| s == 0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("box sizes must be positive and increasing".into()));
    }
    let r = e.rank() as u32;
    let counts: Vec<u64> = match &e.kind {
        PointSetKind::Sublattice { n: step, .. } => {
            sizes.iter().map(|&n| (n.div_ceil(*step as u64)).pow(r)).collect()
        }
        PointSetKind::Periodic { modulus, residues, .. } => {
            let m = *modulus;
            let positions = BoxRegion::cube(r as usize, 0, m - 1)?;
            sizes
                .iter()
                .map(|&n| {
                    let n = n as i64;
                    positions
                        .points()
                        .map(|v| {
                            residues
                                .iter()
                                .map(|rho| {
                                    (0..r as usize)
                                        .map(|j| residue_count(v.coords()[j], n, rho.coords()[j], m) as u64)
                                        .product::<u64>()
                                })
                                .sum::<u64>()
                        })
                        .max()
                        .unwrap_or(0)
                })
                .collect()
        }
        PointSetKind::Explicit { points, window } => explicit_box_maxima(points, window, sizes)?,
    };
    Ok(sizes.iter().zip(counts).map(|(&n, c)| (n, Ratio::new(c, n.pow(r)))).collect())
}

const PREFIX_CAP: u128 = 50_000_000;

fn explicit_box_maxima(points: &BTreeSet<Vector<i64>>, window: &BoxRegion, sizes: &[u64]) -> Result<Vec<u64>> {
    let r = window.rank();
    for &n in sizes {
        if (0..r).any(|j| n > window.side(j)) {
            return Err(Error::Window(format!("box size {n} exceeds the window")));
        }
    }
    let dims: Vec<usize> = (0..r).map(|j| window.side(j) as usize + 1).collect();
    let cells: u128 = dims.iter().map(|&d| d as u128).product();
    if cells > PREFIX_CAP {
        return Err(Error::Budget { what: "prefix-sum table".into(), needed: cells.to_string(), cap: PREFIX_CAP as u64 });
    }
    let mut strides = vec![1usize; r];
    for j in (0..r - 1).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    // table[i_1+1, …, i_r+1] counts points at offset i; then prefix-sum each axis.
    let mut table = vec![0u64; cells as usize];
    for p in points {
        let idx: usize = (0..r).map(|j| (p.coords()[j] - window.lo()[j] + 1) as usize * strides[j]).sum();
        table[idx] += 1;
    }
    for j in 0..r {
        for idx in 0..table.len() {
            if (idx / strides[j]) % dims[j] > 0 {
                table[idx] += table[idx - strides[j]];
            }
        }
    }
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let n = n as usize;
        let positions = BoxRegion::new(vec![0; r], (0..r).map(|j| (dims[j] - 1 - n) as i64).collect())?;
        let best = positions
            .points()
            .map(|v| {
                let mut sum = 0i64;
                for mask in 0u32..(1 << r) {
                    let mut idx = 0;
                    for j in 0..r {
                        let c = v.coords()[j] as usize + if mask >> j & 1 == 1 { n } else { 0 };
                        idx += c * strides[j];
                    }
                    let sign = if (r as u32 - mask.count_ones()) % 2 == 0 { 1 } else { -1 };
                    sum += sign * table[idx] as i64;
                }
                sum as u64
            })
            .max()
            .unwrap_or(0);
        out.push(best);
    }
    Ok(out)
}

/// Caps for spectrum computations.
#[derive(Clone, Debug)]
pub struct SpectrumBudget {
    pub max_subsets: u64,
    /// Return the entries found in the first `max_subsets` subsets (in
    /// lexicographic order) instead of failing.
    pub allow_partial: bool,
    pub enumeration: EnumerationBudget,
}

impl Default for SpectrumBudget {
    fn default() -> Self {
        SpectrumBudget { max_subsets: 50_000_000, allow_partial: false, enumeration: EnumerationBudget::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum<S: Ord> {
    pub entries: BTreeSet<S>,
    /// False when the subset budget cut the enumeration short.
    pub complete: bool,
    pub subsets_examined: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Visit every `k`-subset of `0..n` whose smallest element is `first`, in
/// lexicographic order; stops early when `f` returns false.
fn subsets_with_first(first: usize, n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(idx: &mut Vec<usize>, n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if idx.len() == k {
            return f(idx);
        }
        let start = idx.last().map_or(0, |&l| l + 1);
        for i in start..n {
            if n - i < k - idx.len() {
                break;
            }
            idx.push(i);
            let go = rec(idx, n, k, f);
            idx.pop();
            if !go {
                return false;
            }
        }
        true
    }
    let mut idx = vec![first];
    rec(&mut idx, n, k, f)
}

/// Run `value` over all `k`-subsets of `points`, collecting `Some` results.
fn collect_over_subsets<S, F>(points: &[Vector<i64>], k: usize, budget: &SpectrumBudget, value: F) -> Result<Spectrum<S>>
where
    S: Ord + Send,
    F: Fn(&[&Vector<i64>]) -> Result<Option<S>> + Sync,
{
    let n = points.len();
    let total = binomial(n, k);
    if total > u128::from(budget.max_subsets) && !budget.allow_partial {
        return Err(Error::Budget { what: format!("{k}-subsets of {n} points"), needed: total.to_string(), cap: budget.max_subsets });
    }
    if total <= u128::from(budget.max_subsets) {
        let parts: Vec<Result<BTreeSet<S>>> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut set = BTreeSet::new();
                let mut err = None;
                subsets_with_first(first, n, k, &mut |idx| {
                    let verts: Vec<&Vector<i64>> = idx.iter().map(|&i| &points[i]).collect();
                    match value(&verts) {
                        Ok(Some(s)) => {
                            set.insert(s);
                            true
                        }
                        Ok(None) => true,
                        Err(e) => {
                            err = Some(e);
                            false
                        }
                    }
                });
                err.map_or(Ok(set), Err)
            })
            .collect();
        let mut entries = BTreeSet::new();
        for p in parts {
            entries.append(&mut p?);
        }
        return Ok(Spectrum { entries, complete: true, subsets_examined: total as u64 });
    }
    let mut entries = BTreeSet::new();
    let mut seen = 0u64;
    let mut err = None;
    for first in 0..n {
        let go = subsets_with_first(first, n, k, &mut |idx| {
            if seen == budget.max_subsets {
                return false;
            }
            seen += 1;
            let verts: Vec<&Vector<i64>> = idx.iter().map(|&i| &points[i]).collect();
            match value(&verts) {
                Ok(Some(s)) => {
                    entries.insert(s);
                    true
                }
                Ok(None) => true,
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !go {
            break;
        }
    }
    Ok(Spectrum { entries, complete: false, subsets_examined: seen })
}

fn edge_determinant(verts: &[&Vector<i64>]) -> i64 {
    let edges: Vec<Vector<i64>> = verts[1..].iter().map(|v| *v - verts[0]).collect();
    Matrix::from_columns(&edges).expect("consistent ranks").determinant()
}

/// `{r!·Vol(Δ)}` over simplices with vertices in `E ∩ region`.
pub fn volume_spectrum(e: &PointSet, region: &BoxRegion, budget: &SpectrumBudget) -> Result<Spectrum<i64>> {
    let r = e.rank();
    let points = e.points_in(region);
    collect_over_subsets(&points, r + 1, budget, |verts| {
        let d = edge_determinant(verts).abs();
        Ok((d != 0).then_some(d))
    })
}

/// Ehrhart polynomials of all simplices with vertices in `E ∩ region`.
pub fn ehrhart_spectrum(
    e: &PointSet,
    region: &BoxRegion,
    budget: &SpectrumBudget,
) -> Result<Spectrum<EhrhartPolynomial<i64>>> {
    let r = e.rank();
    let points = e.points_in(region);
    // Translation-invariant cache keyed by the vertex set moved to the origin.
    let cache: std::sync::Mutex<HashMap<Vec<Vector<i64>>, EhrhartPolynomial<i64>>> = Default::default();
    collect_over_subsets(&points, r + 1, budget, |verts| {
        if edge_determinant(verts) == 0 {
            return Ok(None);
        }
        let base = verts[0];
        let key: Vec<Vector<i64>> = verts.iter().map(|v| *v - base).collect();
        if let Some(p) = cache.lock().expect("cache lock").get(&key) {
            return Ok(Some(p.clone()));
        }
        let poly = Simplex::new(key.clone())?.ehrhart_polynomial(&budget.enumeration)?;
        cache.lock().expect("cache lock").insert(key, poly.clone());
        Ok(Some(poly))
    })
}

/// Optional random-walk source of candidate maps `γ`.
#[derive(Clone, Debug)]
pub struct WalkSampler {
    pub measure: GeneratingMeasure,
    pub walks: usize,
    pub horizon: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct WitnessBudget {
    pub max_word_len: usize,
    pub min_n: u64,
    pub max_n: u64,
    pub v0_box: BoxRegion,
    pub sampler: Option<WalkSampler>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Words,
    Walk,
}

/// `v_0` and `v_0 + n·γ(v_k)` all inside `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: u64,
    pub gamma: Unimodular<i64>,
    /// Generator indices when found by word enumeration.
    pub word: Option<Vec<usize>>,
    pub v0: Vector<i64>,
    pub images: Vec<Vector<i64>>,
    pub strategy: Strategy,
}

impl Witness {
    /// Recompute the images from `(n, γ, v0)` and test each against `E`.
    pub fn verify(&self, e: &PointSet, basis: &[Vector<i64>]) -> bool {
        if self.gamma.matrix().determinant() != 1 || basis.len() + 1 != self.images.len() {
            return false;
        }
        let mut expected = vec![self.v0.clone()];
        for b in basis {
            match image(&self.v0, self.n as i64, &self.gamma.apply(b)) {
                Some(w) => expected.push(w),
                None => return false,
            }
        }
        expected == self.images && expected.iter().all(|w| e.contains(w))
    }

    /// Simplex spanned by the images.
    pub fn simplex(&self) -> Result<Simplex<i64>> {
        Simplex::new(self.images.clone())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    pub gammas: u64,
    pub n_values: u64,
    pub v0_candidates: u64,
    pub triples_examined: u128,
    pub walk_gammas: u64,
    pub walk_triples_examined: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found { witness: Witness, report: SearchReport },
    NotFound(SearchReport),
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessOutcome::Found { witness, .. } => Some(witness),
            WitnessOutcome::NotFound(_) => None,
        }
    }
}

/// `v0 + n·w` with overflow detection.
fn image(v0: &Vector<i64>, n: i64, w: &Vector<i64>) -> Option<Vector<i64>> {
    let coords: Option<Vec<i64>> =
        v0.coords().iter().zip(w.coords()).map(|(a, b)| b.checked_mul(n).and_then(|x| x.checked_add(*a))).collect();
    coords.map(|c| Vector::new(c).expect("rank >= 1"))
}

/// First `v0` (in candidate order) for which all images land in `E`.
fn first_v0(e: &PointSet, candidates: &[Vector<i64>], n: i64, gv: &[Vector<i64>]) -> Option<(usize, Vec<Vector<i64>>)> {
    'v0: for (i, v0) in candidates.iter().enumerate() {
        let mut images = Vec::with_capacity(gv.len() + 1);
        images.push(v0.clone());
        for w in gv {
            match image(v0, n, w) {
                Some(x) if e.contains(&x) => images.push(x),
                _ => continue 'v0,
            }
        }
        return Some((i, images));
    }
    None
}

/// Search for `n, γ, v0` with `v0 + n·γ(v_k) ∈ E` for all `k` (and `v0 ∈ E`).
///
/// Deterministic order: `n` ascending, then words by (length, lexicographic
/// generator indices), then `v0` over `E ∩ box` in row-major order. Words
/// are scanned in parallel but the reported witness is always the first in
/// this order. If a walk sampler is configured it runs only after the
/// deterministic search fails, scanning walks, then steps, then `n`, then `v0`.
pub fn witness_search(e: &PointSet, basis: &[Vector<i64>], budget: &WitnessBudget) -> Result<WitnessOutcome> {
    let r = e.rank();
    if basis.len() != r {
        return Err(Error::DimensionMismatch(format!("need {r} basis vectors, got {}", basis.len())));
    }
    for b in basis {
        b.check_rank(r)?;
    }
    if budget.v0_box.rank() != r {
        return Err(Error::DimensionMismatch("v0 box rank differs from the set rank".into()));
    }
    if Matrix::from_columns(basis)?.determinant().is_zero() {
        return Err(Error::SingularBasis);
    }
    if budget.min_n < 1 || budget.min_n > budget.max_n {
        return Err(Error::Precondition("need 1 <= min n <= max n".into()));
    }
    let words = if r >= 2 { enumerate_words::<i64>(r, budget.max_word_len) } else { enumerate_words::<i64>(r, 0) };
    let candidates = e.points_in(&budget.v0_box);
    let mut report = SearchReport {
        gammas: words.len() as u64,
        n_values: budget.max_n - budget.min_n + 1,
        v0_candidates: candidates.len() as u64,
        ..Default::default()
    };
    let images_of: Vec<Vec<Vector<i64>>> = words.iter().map(|w| basis.iter().map(|b| w.element.apply(b)).collect()).collect();
    let per_cell = candidates.len() as u128;
    for (ni, n) in (budget.min_n..=budget.max_n).enumerate() {
        let hit = images_of
            .par_iter()
            .enumerate()
            .find_map_first(|(wi, gv)| first_v0(e, &candidates, n as i64, gv).map(|(vi, imgs)| (wi, vi, imgs)));
        if let Some((wi, vi, images)) = hit {
            report.triples_examined = (ni as u128 * words.len() as u128 + wi as u128) * per_cell + vi as u128 + 1;
            let w = &words[wi];
            let witness = Witness {
                n,
                gamma: w.element.clone(),
                word: Some(w.letters.clone()),
                v0: candidates[vi].clone(),
                images,
                strategy: Strategy::Words,
            };
            debug_assert!(witness.verify(e, basis));
            return Ok(WitnessOutcome::Found { witness, report });
        }
    }
    report.triples_examined = report.n_values as u128 * words.len() as u128 * per_cell;

    if let Some(s) = &budget.sampler {
        if s.measure.rank() != r {
            return Err(Error::DimensionMismatch("sampler measure rank differs from the set rank".into()));
        }
        for t in 0..s.walks {
            let walk = sample_walk(&s.measure, s.horizon, derive_seed(s.seed, t as u64));
            for g in walk.products(&s.measure) {
                let Some(g) = g.cast::<i64>() else { continue };
                report.walk_gammas += 1;
                let gamma = Unimodular::new(g).expect("products of unimodular maps");
                let gv: Vec<Vector<i64>> = basis.iter().map(|b| gamma.apply(b)).collect();
                for n in budget.min_n..=budget.max_n {
                    if let Some((vi, images)) = first_v0(e, &candidates, n as i64, &gv) {
                        report.walk_triples_examined += vi as u128 + 1;
                        let witness =
                            Witness { n, gamma, word: None, v0: candidates[vi].clone(), images, strategy: Strategy::Walk };
                        return Ok(WitnessOutcome::Found { witness, report });
                    }
                    report.walk_triples_examined += per_cell;
                }
            }
        }
    }
    Ok(WitnessOutcome::NotFound(report))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InclusionStatus {
    Verified { witness: Witness, polynomial: EhrhartPolynomial<i64> },
    /// A witness whose polynomial disagreed; never expected.
    Mismatch { witness: Witness, expected: EhrhartPolynomial<i64>, found: EhrhartPolynomial<i64> },
    Unverified { report: SearchReport },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionEntry {
    /// The sample simplex translated so that its first vertex is the origin.
    pub simplex: Simplex<i64>,
    pub status: InclusionStatus,
}

impl InclusionEntry {
    pub fn is_verified(&self) -> bool {
        matches!(self.status, InclusionStatus::Verified { .. })
    }
}

/// Compare the polynomial of the witness images with that of `n·Δ`, `n`
/// taken from the witness. `Ok(Some(p))` when they agree.
pub fn verify_inclusion(
    witness: &Witness,
    simplex: &Simplex<i64>,
    enumeration: &EnumerationBudget,
) -> Result<std::result::Result<EhrhartPolynomial<i64>, (EhrhartPolynomial<i64>, EhrhartPolynomial<i64>)>> {
    let expected = simplex.dilate(&(witness.n as i64)).ehrhart_polynomial(enumeration)?;
    let found = witness.simplex()?.ehrhart_polynomial(enumeration)?;
    Ok(if expected == found { Ok(found) } else { Err((expected, found)) })
}

/// For each sample simplex `Δ = conv(u_0, …, u_r)`, translate `u_0` to the
/// origin, search for a witness with the fixed `n` on the edge basis
/// `v_k = u_k - u_0`, and check `P(witness images) = P(n·Δ)`.
pub fn inclusion_check(
    n: u64,
    e: &PointSet,
    simplices: &[Simplex<i64>],
    budget: &WitnessBudget,
    enumeration: &EnumerationBudget,
) -> Result<Vec<InclusionEntry>> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let fixed = WitnessBudget { min_n: n, max_n: n, ..budget.clone() };
    simplices
        .iter()
        .map(|s| {
            let u0 = s.vertices()[0].clone();
            let normalized = Simplex::new(s.vertices().iter().map(|v| v - &u0).collect())?;
            let status = match witness_search(e, &normalized.edges(), &fixed)? {
                WitnessOutcome::NotFound(report) => InclusionStatus::Unverified { report },
                WitnessOutcome::Found { witness, .. } => match verify_inclusion(&witness, &normalized, enumeration)? {
                    Ok(polynomial) => InclusionStatus::Verified { witness, polynomial },
                    Err((expected, found)) => InclusionStatus::Mismatch { witness, expected, found },
                },
            };
            Ok(InclusionEntry { simplex: normalized, status })
        })
        .collect()
}
