//! Finite haystacks: sets in which every `r` vectors are linearly
//! independent, built greedily by avoiding the hyperplanes spanned by
//! `r - 1` earlier members.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{rank_of, Hyperplane, Matrix, Vector};
use crate::scalar::IntScalar;
use crate::spectra::{BoxRegion, PointSet};

pub const DEFAULT_ORACLE_CAP: usize = 14;
pub const MAX_ORACLE_K: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Haystack<T> {
    members: Vec<Vector<T>>,
}

impl<T: IntScalar> Haystack<T> {
    /// Checks the defining property.
    pub fn new(members: Vec<Vector<T>>) -> Result<Self> {
        if let Some(bad) = first_violation(&members)? {
            return Err(Error::Precondition(format!("members {bad:?} are linearly dependent")));
        }
        Ok(Haystack { members })
    }

    pub fn members(&self) -> &[Vector<T>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn common_rank<T: IntScalar>(points: &[Vector<T>]) -> Result<Option<usize>> {
    let Some(first) = points.first() else { return Ok(None) };
    for p in points {
        p.check_rank(first.rank())?;
    }
    Ok(Some(first.rank()))
}

/// First `r`-subset (as indices, lexicographic order) with zero determinant.
pub fn first_violation<T: IntScalar>(points: &[Vector<T>]) -> Result<Option<Vec<usize>>> {
    let Some(r) = common_rank(points)? else { return Ok(None) };
    Ok((0..points.len()).combinations(r).find(|idx| {
        let cols: Vec<Vector<T>> = idx.iter().map(|&i| points[i].clone()).collect();
        Matrix::from_columns(&cols).expect("same rank").determinant().is_zero()
    }))
}

pub fn is_haystack<T: IntScalar>(points: &[Vector<T>]) -> Result<bool> {
    Ok(first_violation(points)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    Zero,
    /// Indices into the haystack of a subset whose span contains the candidate.
    InSpan(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry<T> {
    /// Position in the candidate stream.
    pub index: usize,
    pub candidate: Vector<T>,
    pub rejection: Option<Rejection>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyResult<T> {
    pub haystack: Haystack<T>,
    pub target: usize,
    pub rejected: usize,
    pub trace: Vec<TraceEntry<T>>,
}

impl<T> GreedyResult<T> {
    /// True when the stream ran out before the target size was reached.
    pub fn insufficient(&self) -> bool {
        self.haystack.members.len() < self.target
    }
}

/// Greedy haystack: accept a candidate iff, for every subset `S` of the
/// current members with `|S| = min(|H|, r - 1)`, it lies outside `span S`.
/// Stops at `target` members or at the end of the stream.
pub fn greedy_extend<T: IntScalar>(
    rank: usize,
    candidates: impl IntoIterator<Item = Vector<T>>,
    target: usize,
) -> Result<GreedyResult<T>> {
    if rank == 0 {
        return Err(Error::Rank("rank must be at least 1".into()));
    }
    let mut members: Vec<Vector<T>> = Vec::new();
    // Normals of the hyperplanes spanned by (r-1)-subsets of `members`.
    let mut walls: Vec<(Vec<usize>, Hyperplane<T>)> = Vec::new();
    let mut trace = Vec::new();
    let mut rejected = 0;
    for (index, c) in candidates.into_iter().enumerate() {
        if members.len() >= target {
            break;
        }
        c.check_rank(rank)?;
        let rejection = if c.is_zero() {
            Some(Rejection::Zero)
        } else if members.len() >= rank - 1 {
            walls.par_iter().find_first(|(_, h)| h.contains(&c)).map(|(s, _)| Rejection::InSpan(s.clone()))
        } else {
            let s = members.len();
            (0..s).combinations(s).find(|idx| {
                let mut vs: Vec<Vector<T>> = idx.iter().map(|&i| members[i].clone()).collect();
                vs.push(c.clone());
                rank_of(&vs) <= s
            })
            .map(Rejection::InSpan)
        };
        match rejection {
            Some(_) => rejected += 1,
            None => {
                members.push(c.clone());
                let k = members.len() - 1;
                if rank >= 2 && members.len() >= rank - 1 {
                    for rest in (0..k).combinations(rank - 2) {
                        let mut idx = rest.clone();
                        idx.push(k);
                        let vs: Vec<Vector<T>> = idx.iter().map(|&i| members[i].clone()).collect();
                        let h = Hyperplane::spanned_by(&vs).expect("members are independent");
                        walls.push((idx, h));
                    }
                }
            }
        }
        trace.push(TraceEntry { index, candidate: c, rejection });
    }
    let haystack = Haystack { members };
    // Certificate check, always on.
    if let Some(bad) = first_violation(&haystack.members)? {
        panic!("greedy haystack failed its certificate at {bad:?}");
    }
    Ok(GreedyResult { haystack, target, rejected, trace })
}

/// Points of `E` with sup-norm at most `max_norm`, nonzero, ordered by
/// sup-norm then lexicographically.
pub fn candidate_stream(e: &PointSet, max_norm: i64) -> Result<Vec<Vector<i64>>> {
    let region = BoxRegion::cube(e.rank(), -max_norm, max_norm)?;
    let mut pts: Vec<Vector<i64>> = e.points_in(&region).into_iter().filter(|p| !p.is_zero()).collect();
    pts.sort_by(|a, b| a.sup_norm().cmp(&b.sup_norm()).then_with(|| a.cmp(b)));
    Ok(pts)
}

/// Whether `K` hyperplanes through the origin cover `points`, choosing
/// from the spans of `(r-1)`-subsets of `points` and the coordinate
/// hyperplanes.
pub fn hyperplane_cover_oracle<T: IntScalar>(points: &[Vector<T>], k: usize, cap: usize) -> Result<bool> {
    if points.len() > cap {
        return Err(Error::OracleCap { size: points.len(), cap });
    }
    if k > MAX_ORACLE_K {
        return Err(Error::Precondition(format!("K = {k} exceeds the oracle limit {MAX_ORACLE_K}")));
    }
    let Some(r) = common_rank(points)? else { return Ok(true) };
    if k == 0 {
        return Ok(false);
    }
    let pts: Vec<&Vector<T>> = points.iter().filter(|p| !p.is_zero()).collect();
    if pts.is_empty() {
        return Ok(true);
    }
    if r == 1 {
        return Ok(false);
    }
    let mut normals: BTreeSet<Vector<T>> = (0..r).map(|i| Hyperplane::<T>::coordinate(r, i).normal().clone()).collect();
    for idx in (0..pts.len()).combinations(r - 1) {
        let vs: Vec<Vector<T>> = idx.iter().map(|&i| pts[i].clone()).collect();
        if let Some(h) = Hyperplane::spanned_by(&vs) {
            normals.insert(h.normal().clone());
        }
    }
    let masks: Vec<u32> = normals
        .iter()
        .map(|n| pts.iter().enumerate().filter(|(_, p)| n.dot(p).is_zero()).fold(0u32, |m, (i, _)| m | 1 << i))
        .collect();
    let full = if pts.len() == 32 { u32::MAX } else { (1u32 << pts.len()) - 1 };
    fn cover(covered: u32, full: u32, k: usize, masks: &[u32]) -> bool {
        if covered == full {
            return true;
        }
        if k == 0 {
            return false;
        }
        let first = (!covered & full).trailing_zeros();
        masks.iter().filter(|&&m| m >> first & 1 == 1).any(|&m| cover(covered | m, full, k - 1, masks))
    }
    Ok(cover(0, full, k, &masks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(c: &[&[i64]]) -> Vec<Vector<i64>> {
        c.iter().map(|x| Vector::from_i64s(x).unwrap()).collect()
    }

    #[test]
    fn haystack_examples() {
        assert!(is_haystack(&vs(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap());
        assert_eq!(first_violation(&vs(&[&[1, 0], &[2, 0]])).unwrap(), Some(vec![0, 1]));
        assert!(is_haystack(&vs(&[&[3, 4]])).unwrap());
        assert!(is_haystack::<i64>(&[]).unwrap());
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_extend(2, vs(&[&[1, 0], &[2, 0], &[0, 1], &[1, 1]]), 3).unwrap();
        assert_eq!(g.haystack.members(), vs(&[&[1, 0], &[0, 1], &[1, 1]]).as_slice());
        assert_eq!(g.rejected, 1);
        assert_eq!(g.trace[1].rejection, Some(Rejection::InSpan(vec![0])));
        let axis = greedy_extend(2, vs(&[&[1, 0], &[2, 0], &[-3, 0]]), 2).unwrap();
        assert!(axis.insufficient());
        assert_eq!(axis.haystack.len(), 1);
        let empty = greedy_extend::<i64>(2, vec![], 1).unwrap();
        assert!(empty.insufficient() && empty.haystack.is_empty());
    }

    #[test]
    fn greedy_rank_three_avoids_small_dependencies() {
        // (2,0,0) is parallel to (1,0,0) and must be rejected early.
        let g = greedy_extend(3, vs(&[&[1, 0, 0], &[2, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1], &[1, 1, 1]]), 5).unwrap();
        assert_eq!(g.haystack.members(), vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]).as_slice());
    }

    #[test]
    fn candidate_order() {
        let e = PointSet::full(2).unwrap();
        let c = candidate_stream(&e, 1).unwrap();
        assert_eq!(c, vs(&[&[-1, -1], &[-1, 0], &[-1, 1], &[0, -1], &[0, 1], &[1, -1], &[1, 0], &[1, 1]]));
    }

    #[test]
    fn oracle_examples() {
        assert!(hyperplane_cover_oracle(&vs(&[&[1, 0], &[2, 0], &[0, 1], &[0, 2]]), 2, 14).unwrap());
        assert!(!hyperplane_cover_oracle(&vs(&[&[1, 0], &[0, 1], &[1, 1]]), 1, 14).unwrap());
        assert!(hyperplane_cover_oracle(&vs(&[&[1, 0], &[0, 1], &[1, 1]]), 3, 14).unwrap());
        assert!(!hyperplane_cover_oracle(&vs(&[&[1, 2]]), 0, 14).unwrap());
        assert!(hyperplane_cover_oracle::<i64>(&[], 0, 14).unwrap());
        let many: Vec<Vector<i64>> = (1..=15).map(|i| Vector::from_i64s(&[i, 1]).unwrap()).collect();
        assert_eq!(hyperplane_cover_oracle(&many, 2, 14).unwrap_err().code(), "E_ORACLE_CAP");
    }
}
