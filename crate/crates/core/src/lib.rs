pub mod character;
pub mod dynamics;
pub mod ehrhart;
pub mod error;
pub mod haystack;
pub mod lattice;
pub mod poly;
pub mod random_walk;
pub mod scalar;
pub mod spectra;
pub mod words;

pub use error::{Error, Result};

use num_bigint::BigInt;

pub type LatticeVector = lattice::Vector<i64>;
pub type IntegerMatrix = lattice::Matrix<i64>;
pub type UnimodularMap = lattice::Unimodular<i64>;
pub type BigVector = lattice::Vector<BigInt>;
pub type BigMatrix = lattice::Matrix<BigInt>;
pub type LatticeSimplex = ehrhart::Simplex<i64>;
pub type Ehrhart = ehrhart::EhrhartPolynomial<i64>;
