//! Simulation of spin-measurement experiments on the two-particle singlet.
//!
//! [`observables`] holds the exact density-matrix algebra, [`projection`]
//! the three post-measurement state rules (Lüders, Von Neumann, none),
//! [`sampling`] the seeded random source, and [`experiment`] the Monte-Carlo
//! trial loops and angle sweeps built on top of them.

pub mod error;
pub mod experiment;
pub mod matrix;
pub mod observables;
pub mod projection;
pub mod sampling;

pub use error::{Error, Result};
pub use experiment::{
    estimate_correlation, run_experiment, run_joint_trial, run_separated_trial, sweep_b,
    ExperimentConfig, ExperimentRun, MeasurementOrder, Mode, Side, SweepResult, TrialRecord,
};
pub use matrix::{Mat2, Mat4};
pub use observables::{
    binary_probabilities, expectation, joint_expectation, joint_probabilities,
    make_measurement_operator, singlet_density, tensor_product, Angle, DensityMatrix2,
    DensityMatrix4, JointDistribution, Ket2, MeasurementOperator, TOLERANCE,
};
pub use projection::{
    apply_rule, eigenket, luders_project, null_project, von_neumann_project, Outcome,
    ProjectionRule,
};
pub use sampling::{sample_binary, sample_joint, CountingSource, RandomSource, UniformSource};
