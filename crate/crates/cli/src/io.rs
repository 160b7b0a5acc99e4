//! JSON input formats and their conversion to library types.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use ehrlab::character::{Character, TorusValue};
use ehrlab::dynamics::{CyclicSystem, IntervalSet, MeasurableSet, System, TorusSystem};
use ehrlab::ehrhart::{EhrhartPolynomial, Simplex};
use ehrlab::lattice::{Matrix, Unimodular, Vector};
use ehrlab::random_walk::{default_measure, GeneratingMeasure};
use ehrlab::scalar::parse_rat;
use ehrlab::spectra::{BoxRegion, PointSet, PointSetKind};

use crate::error::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub r: usize,
    pub entries: Vec<Vec<i64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix<i64>) -> Self {
        MatrixJson { r: m.rows().len(), entries: m.rows() }
    }

    fn checked_rows(&self) -> CliResult<&[Vec<i64>]> {
        if self.entries.len() != self.r || self.entries.iter().any(|row| row.len() != self.r) {
            return Err(CliError::Parse(format!("matrix literal is not {}x{}", self.r, self.r)));
        }
        Ok(&self.entries)
    }

    pub fn to_matrix(&self) -> CliResult<Matrix<i64>> {
        Ok(matrix_from_rows(self.checked_rows()?)?)
    }

    pub fn to_unimodular(&self) -> CliResult<Unimodular<i64>> {
        Ok(Unimodular::new(self.to_matrix()?)?)
    }

    /// Rows read as vectors, e.g. a basis `v_1, …, v_r`.
    pub fn to_vectors(&self) -> CliResult<Vec<Vector<i64>>> {
        self.checked_rows()?.iter().map(|row| Ok(Vector::from_i64s(row)?)).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexJson {
    pub vertices: Vec<Vec<i64>>,
}

impl SimplexJson {
    pub fn from_simplex(s: &Simplex<i64>) -> Self {
        SimplexJson { vertices: s.vertices().iter().map(|v| v.coords().to_vec()).collect() }
    }

    pub fn to_simplex(&self) -> CliResult<Simplex<i64>> {
        let vs = self.vertices.iter().map(|v| Vector::from_i64s(v)).collect::<ehrlab::Result<Vec<_>>>()?;
        Ok(Simplex::new(vs)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub coeffs: Vec<String>,
}

impl PolynomialJson {
    pub fn from_poly(p: &EhrhartPolynomial<i64>) -> Self {
        PolynomialJson { coeffs: p.coeff_strings() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowJson {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PointSetJson {
    Periodic {
        m: i64,
        residues: Vec<Vec<i64>>,
        /// Needed only when `residues` is empty.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<usize>,
    },
    Explicit {
        points: Vec<Vec<i64>>,
        window: WindowJson,
    },
    Sublattice {
        n: i64,
        r: usize,
    },
}

impl PointSetJson {
    pub fn to_pointset(&self) -> CliResult<PointSet> {
        Ok(match self {
            PointSetJson::Periodic { m, residues, r } => {
                let rank = match (residues.first(), r) {
                    (Some(x), _) => x.len(),
                    (None, Some(r)) => *r,
                    (None, None) => return Err(CliError::Parse("periodic set with no residues needs \"r\"".into())),
                };
                let res = residues.iter().map(|x| Vector::from_i64s(x)).collect::<ehrlab::Result<Vec<_>>>()?;
                PointSet::periodic(*m, res, rank)?
            }
            PointSetJson::Explicit { points, window } => {
                let pts = points.iter().map(|x| Vector::from_i64s(x)).collect::<ehrlab::Result<Vec<_>>>()?;
                PointSet::explicit(pts, BoxRegion::new(window.lo.clone(), window.hi.clone())?)?
            }
            PointSetJson::Sublattice { n, r } => PointSet::sublattice(*r, *n)?,
        })
    }

    pub fn from_pointset(e: &PointSet) -> Self {
        match e.kind() {
            PointSetKind::Periodic { modulus, residues, rank } => PointSetJson::Periodic {
                m: *modulus,
                residues: residues.iter().map(|v| v.coords().to_vec()).collect(),
                r: residues.is_empty().then_some(*rank),
            },
            PointSetKind::Explicit { points, window } => PointSetJson::Explicit {
                points: points.iter().map(|v| v.coords().to_vec()).collect(),
                window: WindowJson { lo: window.lo().to_vec(), hi: window.hi().to_vec() },
            },
            PointSetKind::Sublattice { n, rank } => PointSetJson::Sublattice { n: *n, r: *rank },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrationalJson {
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<String>,
}

/// A torus coordinate: `{"rat": "1/3"}`, `{"irr": {"tag", "digits"}}`, or
/// the bare `{"tag", "digits"}` used in system files.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordJson {
    Rat {
        rat: String,
    },
    Irr {
        irr: IrrationalJson,
    },
    Bare(IrrationalJson),
}

impl CoordJson {
    pub fn to_value(&self) -> CliResult<TorusValue> {
        match self {
            CoordJson::Rat { rat } => Ok(TorusValue::rational(parse_rational(rat)?)),
            CoordJson::Irr { irr } | CoordJson::Bare(irr) => Ok(TorusValue::irrational(&irr.tag, irr.digits.as_deref())?),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterJson {
    pub coords: Vec<CoordJson>,
}

impl CharacterJson {
    pub fn to_character(&self) -> CliResult<Character> {
        Ok(Character::new(self.coords.iter().map(CoordJson::to_value).collect::<CliResult<_>>()?)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclicJson {
    pub m: i64,
    pub d: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusJson {
    pub alpha: Vec<CoordJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemJson {
    Cyclic(CyclicJson),
    Torus(TorusJson),
}

impl SystemJson {
    pub fn to_system(&self) -> CliResult<System> {
        match self {
            SystemJson::Cyclic(c) => {
                if c.a.len() != c.d {
                    return Err(CliError::Parse(format!("\"A\" has {} rows, expected d = {}", c.a.len(), c.d)));
                }
                Ok(System::Cyclic(CyclicSystem::new(c.m, c.a.clone())?))
            }
            SystemJson::Torus(t) => {
                let alpha = t.alpha.iter().map(CoordJson::to_value).collect::<CliResult<_>>()?;
                Ok(System::Torus(TorusSystem::new(Character::new(alpha)?)))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetJson {
    Residues { residues: Vec<Vec<i64>> },
    Intervals { intervals: Vec<(String, String)> },
}

impl SetJson {
    pub fn to_set(&self, system: &System) -> CliResult<MeasurableSet> {
        match (self, system) {
            (SetJson::Residues { residues }, System::Cyclic(c)) => Ok(MeasurableSet::residues(c, residues.clone())?),
            (SetJson::Intervals { intervals }, System::Torus(_)) => {
                let raw = intervals
                    .iter()
                    .map(|(a, b)| Ok((parse_rational(a)?, parse_rational(b)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(MeasurableSet::Intervals(IntervalSet::new(raw)?))
            }
            _ => Err(CliError::Core(ehrlab::Error::UnsupportedSystem(
                "residue sets go with cyclic systems, interval sets with the circle".into(),
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaystackJson {
    pub members: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitMeasureJson {
    pub support: Vec<MatrixJson>,
    pub weights: Vec<String>,
}

/// `"default"` or an explicit finitely supported measure.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureJson {
    Named(String),
    Explicit(ExplicitMeasureJson),
}

impl Default for MeasureJson {
    fn default() -> Self {
        MeasureJson::Named("default".into())
    }
}

impl MeasureJson {
    pub fn to_measure(&self, r: usize) -> CliResult<GeneratingMeasure> {
        match self {
            MeasureJson::Named(n) if n == "default" => Ok(default_measure(r)?),
            MeasureJson::Named(n) => Err(CliError::Parse(format!("unknown measure {n:?}"))),
            MeasureJson::Explicit(m) => {
                let support = m.support.iter().map(MatrixJson::to_unimodular).collect::<CliResult<Vec<_>>>()?;
                let weights = m
                    .weights
                    .iter()
                    .map(|w| {
                        let q = parse_rational(w)?;
                        match (q.numer().to_u64(), q.denom().to_u64()) {
                            (Some(a), Some(b)) => Ok(Ratio::new(a, b)),
                            _ => Err(CliError::Parse(format!("weight {w:?} is not a small nonnegative rational"))),
                        }
                    })
                    .collect::<CliResult<Vec<Ratio<u64>>>>()?;
                let measure = GeneratingMeasure::new(support, weights)?;
                if measure.rank() != r {
                    return Err(CliError::Core(ehrlab::Error::DimensionMismatch(format!(
                        "measure has rank {}, expected {r}",
                        measure.rank()
                    ))));
                }
                Ok(measure)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MembershipJson {
    Hyperplane(Vec<i64>),
    Pointset(PointSetJson),
}

/// Random-walk experiment configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentJson {
    #[serde(default)]
    pub measure: MeasureJson,
    pub v: Vec<i64>,
    #[serde(rename = "N")]
    pub horizon: usize,
    #[serde(rename = "M")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<CharacterJson>,
}

pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    parse_rat::<BigInt>(s).ok_or_else(|| CliError::Parse(format!("not a rational number: {s:?}")))
}

/// `"1,0"` as a vector.
pub fn parse_vector(s: &str) -> CliResult<Vector<i64>> {
    let coords = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Parse(format!("not an integer vector: {s:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Vector::from_i64s(&coords)?)
}

/// A list of vectors, either inline (`"1,0;0,1"`) or a matrix literal file
/// whose rows are the vectors.
pub fn parse_vectors(s: &str) -> CliResult<Vec<Vector<i64>>> {
    let path = Path::new(s);
    if path.is_file() {
        return read_json::<MatrixJson>(path)?.to_vectors();
    }
    s.split(';').map(parse_vector).collect()
}

/// A square matrix, inline by rows (`"2,1;1,1"`) or as a matrix literal file.
pub fn parse_matrix(s: &str) -> CliResult<Matrix<i64>> {
    let path = Path::new(s);
    if path.is_file() {
        return read_json::<MatrixJson>(path)?.to_matrix();
    }
    let rows: Vec<Vec<i64>> = parse_vectors(s)?.into_iter().map(Vector::into_coords).collect();
    Ok(matrix_from_rows(&rows)?)
}

fn matrix_from_rows(rows: &[Vec<i64>]) -> ehrlab::Result<Matrix<i64>> {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_i64_rows(&refs)
}

pub fn vector_json(v: &Vector<i64>) -> serde_json::Value {
    serde_json::json!(v.coords())
}

pub fn rat_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ratio_string(q: &Ratio<u64>) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal string with an explicit number of places.
pub fn dec(x: f64) -> String {
    format!("{x:.12}")
}

pub fn sci(x: f64) -> String {
    format!("{x:.6e}")
}
