//! Spectral measures `σ_B` with `μ(B ∩ v.B) = ∫ e(⟨ξ, v⟩) dσ_B(ξ)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::cyclotomic::{abs_squared_of_counts, Cyclotomic};
use super::system::{correlation, CyclicSystem, MeasurableSet, Prepared, System, SHIFT_BITS};
use crate::character::{Character, TorusValue};
use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::scalar::{big_rat_to_f64, IntScalar};

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub enum Mass {
    /// An algebraic number in `Q(ζ_m)`.
    Exact(Cyclotomic),
    Approx { value: f64, err: f64 },
}

impl Mass {
    pub fn to_f64(&self) -> f64 {
        match self {
            Mass::Exact(c) => c.to_complex().re,
            Mass::Approx { value, .. } => *value,
        }
    }

    pub fn err(&self) -> f64 {
        match self {
            Mass::Exact(_) => 0.0,
            Mass::Approx { err, .. } => *err,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub xi: Character,
    pub mass: Mass,
    /// Frequency `k` for circle rotations (`ξ = k·α`); for cyclic systems
    /// the numerators of `ξ = Aᵀχ/m`.
    pub label: Vec<i64>,
}

/// Atomic description of `σ_B`, truncated for circle rotations.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMeasureAtoms {
    pub atoms: Vec<Atom>,
    pub truncation: Option<u64>,
    /// `μ(B)`.
    pub total: BigRational,
    /// `μ(B) - Σ retained masses` (0 for cyclic systems).
    pub tail: f64,
    /// Bound on the rounding in `tail` and in the retained masses together.
    pub tail_err: f64,
    modulus: Option<i64>,
}

impl SpectralMeasureAtoms {
    pub fn retained_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass.to_f64()).sum()
    }

    pub fn mass_at_zero(&self) -> Option<&Mass> {
        self.atoms.iter().find(|a| a.xi.is_zero()).map(|a| &a.mass)
    }
}

/// Build `σ_B`. Cyclic systems: exact finite Fourier transform, atoms at
/// `ξ = Aᵀχ/m` merged. Circle rotations: atoms at `k·α`, `|k| <= K`, with
/// the closed-form coefficients of a union of intervals.
pub fn spectral_measure(system: &System, set: &MeasurableSet, k: u64) -> Result<SpectralMeasureAtoms> {
    match (system, set) {
        (System::Cyclic(c), MeasurableSet::Residues(pts)) => Ok(cyclic_measure(c, pts.iter())),
        (System::Torus(t), MeasurableSet::Intervals(iv)) => {
            if k < 1 {
                return Err(Error::Precondition("truncation K must be at least 1".into()));
            }
            let total = iv.measure();
            let mu = big_rat_to_f64(&total);
            let j = iv.intervals().len() as f64;
            // Endpoints as reduced fractions p/q for exact phase reduction.
            let ends: Vec<(i128, i128, i128, i128)> = iv
                .intervals()
                .iter()
                .map(|(a, b)| {
                    let f = |x: &BigRational| (x.numer().to_i128().unwrap_or(0), x.denom().to_i128().unwrap_or(1));
                    let (pa, qa) = f(a);
                    let (pb, qb) = f(b);
                    (pa, qa, pb, qb)
                })
                .collect();
            let phase = |kk: i64, p: i128, q: i128| -> Complex64 {
                let num = (-(kk as i128) * p).rem_euclid(q);
                Complex64::from_polar(1.0, TAU * num as f64 / q as f64)
            };
            let mut atoms = Vec::with_capacity(2 * k as usize + 1);
            let mut err_sum = 0.0;
            for kk in -(k as i64)..=(k as i64) {
                let xi = t.alpha().scale(&BigInt::from(kk));
                let mass = if kk == 0 {
                    Mass::Approx { value: mu * mu, err: 2.0 * f64::EPSILON * mu * mu }
                } else {
                    let s: Complex64 = ends.iter().map(|&(pa, qa, pb, qb)| phase(kk, pb, qb) - phase(kk, pa, qa)).sum();
                    let denom = TAU * TAU * (kk as f64) * (kk as f64);
                    let value = s.norm_sqr() / denom;
                    let err = (16.0 * j * j + 8.0) * f64::EPSILON / denom;
                    Mass::Approx { value, err }
                };
                err_sum += mass.err();
                atoms.push(Atom { xi, mass, label: vec![kk] });
            }
            let retained: f64 = atoms.iter().map(|a| a.mass.to_f64()).sum();
            let tail = mu - retained;
            let tail_err = err_sum + (atoms.len() as f64 + 2.0) * f64::EPSILON * mu;
            Ok(SpectralMeasureAtoms { atoms, truncation: Some(k), total, tail, tail_err, modulus: None })
        }
        _ => Err(Error::UnsupportedSystem("set kind does not match the system".into())),
    }
}

fn cyclic_measure<'a>(c: &CyclicSystem, pts: impl Iterator<Item = &'a Vec<i64>> + Clone) -> SpectralMeasureAtoms {
    let m = c.modulus();
    let mu_usize = m as usize;
    let size = BigInt::from(c.size());
    let norm = BigRational::from_integer(&size * &size);
    let cols = c.columns();
    let mut merged: BTreeMap<Vec<i64>, Cyclotomic> = BTreeMap::new();
    let mut count = 0usize;
    for chi in c.points() {
        let mut counts = vec![0u64; mu_usize];
        count = 0;
        for x in pts.clone() {
            let j = chi.iter().zip(x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m);
            counts[j as usize] += 1;
            count += 1;
        }
        let mass = Cyclotomic::from_group_ring(
            abs_squared_of_counts(&counts).into_iter().map(|z| BigRational::from_integer(z) / &norm).collect(),
        );
        // ξ = Aᵀχ / m, numerators reduced mod m.
        let key: Vec<i64> = cols.iter().map(|col| col.iter().zip(&chi).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m)).collect();
        let e = merged.entry(key).or_insert_with(|| Cyclotomic::zero(mu_usize));
        *e = e.add(&mass);
    }
    let atoms = merged
        .into_iter()
        .map(|(key, mass)| {
            let xi = Character::new(key.iter().map(|&p| TorusValue::ratio(p, m)).collect()).expect("r >= 1");
            Atom { xi, mass: Mass::Exact(mass), label: key }
        })
        .collect();
    SpectralMeasureAtoms {
        atoms,
        truncation: None,
        total: BigRational::new(BigInt::from(count), size),
        tail: 0.0,
        tail_err: 0.0,
        modulus: Some(m),
    }
}

/// `|Σ mass·e(⟨ξ, v⟩) - μ(B ∩ v.B)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct BochnerResult {
    pub residual: f64,
    /// `Some(true)` when the residual was shown to vanish in exact arithmetic.
    pub exact_zero: Option<bool>,
    /// What the residual may not exceed: the tail mass plus rounding bounds.
    pub bound: f64,
    pub tail: f64,
}

pub fn bochner_check<T: IntScalar>(system: &System, set: &MeasurableSet, v: &Vector<T>, k: u64) -> Result<BochnerResult> {
    let atoms = spectral_measure(system, set, k)?;
    bochner_residual(system, set, &atoms, v)
}

/// Residual against precomputed atoms.
pub fn bochner_residual<T: IntScalar>(
    system: &System,
    set: &MeasurableSet,
    atoms: &SpectralMeasureAtoms,
    v: &Vector<T>,
) -> Result<BochnerResult> {
    let corr = correlation(system, set, v)?;
    match system {
        System::Cyclic(c) => {
            let m = atoms.modulus.expect("cyclic atoms");
            let vm: Vec<i64> = v.coords().iter().map(|x| x.mod_floor(&T::from_int(m)).to_i64().expect("fits")).collect();
            let mut sum = Cyclotomic::zero(m as usize);
            for a in &atoms.atoms {
                let Mass::Exact(mass) = &a.mass else { unreachable!() };
                let e = a.label.iter().zip(&vm).map(|(p, x)| p * x).sum::<i64>();
                sum = sum.add(&mass.rotate(e));
            }
            let diff = sum.sub(&Cyclotomic::rational(c.modulus() as usize, corr.value));
            let zero = diff.is_zero();
            let residual = if zero { 0.0 } else { diff.to_complex().norm() };
            Ok(BochnerResult { residual, exact_zero: Some(zero), bound: 0.0, tail: 0.0 })
        }
        System::Torus(t) => {
            // e(k·s) with s on a 128-bit grid: exact wrapping multiply.
            let s = t.shift(v).approx(SHIFT_BITS);
            let s_fixed = (&s.numer >> (SHIFT_BITS - 128) as usize).to_u128().unwrap_or(0);
            let mut sum = Complex64::new(0.0, 0.0);
            for a in &atoms.atoms {
                let kk = a.label[0];
                let ph = s_fixed.wrapping_mul(kk as u128);
                let x = (ph >> 64) as f64 / 18446744073709551616.0;
                sum += Complex64::from_polar(a.mass.to_f64(), TAU * x);
            }
            let residual = (sum - Complex64::new(corr.to_f64(), 0.0)).norm();
            let kmax = atoms.truncation.unwrap_or(0) as f64;
            let phase_err = TAU * kmax * (s.err_f64() + 2f64.powi(-128)) * big_rat_to_f64(&atoms.total);
            let bound = atoms.tail + atoms.tail_err + corr.err + phase_err + (atoms.atoms.len() as f64) * 4.0 * f64::EPSILON;
            Ok(BochnerResult { residual, exact_zero: None, bound, tail: atoms.tail })
        }
    }
}

/// `σ_B(Rat Λ ∖ {0})` restricted to the retained atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct MassSum {
    /// Exact value when every contribution is exact and the sum is rational.
    pub exact: Option<BigRational>,
    pub value: f64,
    pub err: f64,
}

pub fn rational_part_mass(atoms: &SpectralMeasureAtoms) -> MassSum {
    let picked: Vec<&Atom> =
        atoms.atoms.iter().filter(|a| !a.xi.is_zero() && a.xi.is_rational_character().0).collect();
    let value = picked.iter().map(|a| a.mass.to_f64()).sum();
    let err = picked.iter().map(|a| a.mass.err()).sum();
    let exact = match atoms.modulus {
        Some(m) if picked.iter().all(|a| matches!(a.mass, Mass::Exact(_))) => picked
            .iter()
            .fold(Cyclotomic::zero(m as usize), |acc, a| match &a.mass {
                Mass::Exact(c) => acc.add(c),
                Mass::Approx { .. } => unreachable!(),
            })
            .to_rational(),
        _ if picked.is_empty() => Some(BigRational::zero()),
        _ => None,
    };
    MassSum { exact, value, err }
}

/// Convenience: spectral mass bound for Cesàro and C-set experiments.
pub fn rational_bound(system: &System, set: &MeasurableSet, k: u64) -> Result<MassSum> {
    Ok(rational_part_mass(&spectral_measure(system, set, k)?))
}

/// Exact `μ(B)`.
pub fn set_measure(system: &System, set: &MeasurableSet) -> Result<BigRational> {
    Ok(Prepared::new(system, set)?.measure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::system::{CyclicSystem, IntervalSet, TorusSystem};
    use num_traits::One;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn cyc(m: i64, a: Vec<Vec<i64>>, pts: &[&[i64]]) -> (System, MeasurableSet) {
        let c = CyclicSystem::new(m, a).unwrap();
        let b = MeasurableSet::residues(&c, pts.iter().map(|p| p.to_vec()).collect()).unwrap();
        (System::Cyclic(c), b)
    }

    #[test]
    fn cyclic_examples() {
        let (s, b) = cyc(3, vec![vec![1]], &[&[0], &[1], &[2]]);
        let at = spectral_measure(&s, &b, 0).unwrap();
        let nonzero: Vec<_> = at.atoms.iter().filter(|a| a.mass.to_f64().abs() > 1e-12).collect();
        assert_eq!(nonzero.len(), 1);
        assert!(nonzero[0].xi.is_zero());
        let Mass::Exact(m0) = &nonzero[0].mass else { panic!() };
        assert_eq!(m0.to_rational(), Some(BigRational::one()));

        let (s, b) = cyc(2, vec![vec![1]], &[&[0]]);
        let at = spectral_measure(&s, &b, 0).unwrap();
        assert_eq!(at.atoms.len(), 2);
        for a in &at.atoms {
            let Mass::Exact(m) = &a.mass else { panic!() };
            assert_eq!(m.to_rational(), Some(q(1, 4)));
        }
        assert_eq!(at.atoms[1].xi, Character::rational(&[(1, 2)]).unwrap());
    }

    #[test]
    fn torus_half_interval() {
        let s = System::Torus(TorusSystem::new(Character::new(vec![TorusValue::frac_sqrt(2)]).unwrap()));
        let b = MeasurableSet::Intervals(IntervalSet::new(vec![(q(0, 1), q(1, 2))]).unwrap());
        let at = spectral_measure(&s, &b, 3).unwrap();
        assert_eq!(at.atoms.len(), 7);
        let pi2 = std::f64::consts::PI.powi(2);
        for a in &at.atoms {
            let k = a.label[0];
            let want = if k == 0 { 0.25 } else if k % 2 != 0 { 1.0 / (pi2 * (k * k) as f64) } else { 0.0 };
            assert!((a.mass.to_f64() - want).abs() < 1e-15, "k = {k}");
        }
        assert!(at.tail > 0.0);
        assert!((at.tail + at.retained_mass() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bochner_cyclic_is_exact() {
        let (s, b) = cyc(5, vec![vec![1, 2]], &[&[0], &[1]]);
        for v in [[1, 0], [3, -7], [0, 0], [12, 5]] {
            let r = bochner_check(&s, &b, &Vector::<i64>::from_i64s(&v).unwrap(), 0).unwrap();
            assert_eq!(r.exact_zero, Some(true));
            assert_eq!(r.residual, 0.0);
        }
    }

    #[test]
    fn bochner_torus_within_tail() {
        let s = System::Torus(TorusSystem::new(
            Character::new(vec![TorusValue::frac_sqrt(2), TorusValue::frac_sqrt(3)]).unwrap(),
        ));
        let b = MeasurableSet::Intervals(IntervalSet::new(vec![(q(0, 1), q(3, 10))]).unwrap());
        let at = spectral_measure(&s, &b, 2000).unwrap();
        for v in [[1, 0], [3, -7], [40, 5]] {
            let r = bochner_residual(&s, &b, &at, &Vector::<i64>::from_i64s(&v).unwrap()).unwrap();
            assert!(r.residual <= r.bound, "{r:?}");
        }
        let r0 = bochner_residual(&s, &b, &at, &Vector::<i64>::from_i64s(&[0, 0]).unwrap()).unwrap();
        assert!((r0.residual - at.tail).abs() < 1e-12);
    }

    #[test]
    fn rational_part_examples() {
        let (s, b) = cyc(5, vec![vec![1, 2]], &[&[0], &[1]]);
        let at = spectral_measure(&s, &b, 0).unwrap();
        // Ergodic: total - μ(B)² = 2/5 - 4/25.
        assert_eq!(rational_part_mass(&at).exact, Some(q(6, 25)));
        let Mass::Exact(m0) = at.mass_at_zero().unwrap() else { panic!() };
        assert_eq!(m0.to_rational(), Some(q(4, 25)));
        let t = System::Torus(TorusSystem::new(Character::new(vec![TorusValue::frac_sqrt(2)]).unwrap()));
        let bt = MeasurableSet::Intervals(IntervalSet::new(vec![(q(0, 1), q(3, 10))]).unwrap());
        let mt = rational_part_mass(&spectral_measure(&t, &bt, 50).unwrap());
        assert_eq!((mt.exact, mt.value), (Some(q(0, 1)), 0.0));
        let empty = SpectralMeasureAtoms { atoms: vec![], truncation: None, total: q(0, 1), tail: 0.0, tail_err: 0.0, modulus: None };
        assert_eq!(rational_part_mass(&empty).value, 0.0);
    }
}
