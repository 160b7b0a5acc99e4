//! Measure-preserving `Z^r` actions: cyclic groups and circle rotations.

pub mod cyclotomic;
pub mod experiments;
pub mod spectral;
pub mod system;

pub use experiments::{
    c_set_experiment, cesaro_correlation_experiment, gamma_search, CSetReport, CesaroReport, GammaBudget, GammaHit,
    GammaSearchReport, StrategyOutcome,
};
pub use spectral::{
    bochner_check, bochner_residual, rational_bound, rational_part_mass, set_measure, spectral_measure, Atom, BochnerResult, Mass, MassSum,
    SpectralMeasureAtoms,
};
pub use system::{
    correlation, ergodic_components, multi_correlation, orbit_union_measure, translate_measure, Component,
    ComponentReport, CyclicSystem, IntervalSet, MeasurableSet, Measured, Prepared, System, TorusSystem,
};
