//! Monte-Carlo EPR experiments in joint or separated mode, and angle sweeps.
//!
//! A joint trial draws the outcome pair once from the four-category
//! distribution built from both angles. A separated trial draws twice: the
//! first station samples a fair ±1 knowing nothing but its own randomness,
//! the projection rule turns that outcome into the second station's state,
//! and the second station samples its own observable on that state.
//!
//! Trials are split into fixed-size chunks, each with its own ChaCha stream
//! `(seed, chunk index)`, so the record list does not depend on how many
//! threads rayon uses.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::observables::{
    binary_probabilities, joint_expectation, joint_probabilities, second_side_expectation, Angle,
    DensityMatrix4,
};
use crate::projection::{apply_rule, Outcome, ProjectionRule};
use crate::sampling::{derive_seed, sample_binary, sample_joint, RandomSource, UniformSource};

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SWEEP_STEPS: usize = 65;

/// Trials per random stream.
const CHUNK_TRIALS: u64 = 4096;

/// Expectation of either station's spin on the singlet; both marginals vanish.
const SINGLET_MARGINAL: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Which station measures first in separated mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementOrder {
    AFirst,
    BFirst,
    /// A fair bit drawn from the trial's stream picks the first side.
    RandomPerTrial,
}

impl MeasurementOrder {
    pub const ALL: [MeasurementOrder; 3] = [
        MeasurementOrder::AFirst,
        MeasurementOrder::BFirst,
        MeasurementOrder::RandomPerTrial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasurementOrder::AFirst => "afirst",
            MeasurementOrder::BFirst => "bfirst",
            MeasurementOrder::RandomPerTrial => "random",
        }
    }
}

impl fmt::Display for MeasurementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasurementOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasurementOrder::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::UnknownOrder(s.to_owned()))
    }
}

/// Joint sampling, or separated sampling under a projection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Joint,
    Separated {
        rule: ProjectionRule,
        order: MeasurementOrder,
    },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Joint => "joint",
            Mode::Separated { .. } => "separated",
        }
    }

    pub fn rule(&self) -> Option<ProjectionRule> {
        match self {
            Mode::Joint => None,
            Mode::Separated { rule, .. } => Some(*rule),
        }
    }

    /// Closed-form correlation `E[o_a · o_b]` this mode converges to.
    pub fn predicted_correlation(&self, a: Angle, b: Angle) -> f64 {
        match self.rule() {
            None | Some(ProjectionRule::Luders) => -(a.radians() - b.radians()).cos(),
            Some(ProjectionRule::VonNeumann | ProjectionRule::Null) => 0.0,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Joint => f.write_str("joint"),
            Mode::Separated { rule, order } => write!(f, "separated/{rule}/{order}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub a: Angle,
    pub b: Angle,
    pub n_trials: u64,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn joint(a: Angle, b: Angle, n_trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            mode: Mode::Joint,
            a,
            b,
            n_trials,
            seed,
        }
    }

    pub fn separated(
        rule: ProjectionRule,
        order: MeasurementOrder,
        a: Angle,
        b: Angle,
        n_trials: u64,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            mode: Mode::Separated { rule, order },
            a,
            b,
            n_trials,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
        }
        Angle::new(self.a.radians())?;
        Angle::new(self.b.radians())?;
        Ok(())
    }

    pub fn predicted_correlation(&self) -> f64 {
        self.mode.predicted_correlation(self.a, self.b)
    }
}

/// One emission: settings, which side measured first, and both outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub a: Angle,
    pub b: Angle,
    /// `None` for joint trials, which have no measurement order.
    pub first_side: Option<Side>,
    pub o_a: Outcome,
    pub o_b: Outcome,
}

impl TrialRecord {
    pub fn product(&self) -> i8 {
        self.o_a.value() * self.o_b.value()
    }
}

/// One draw from the joint distribution built from `⟨AB⟩ = Tr((M(a) ⊗ M(b)) ρ)`.
pub fn run_joint_trial<R: UniformSource + ?Sized>(
    index: u64,
    a: Angle,
    b: Angle,
    rng: &mut R,
) -> TrialRecord {
    let dist = joint_probabilities(joint_expectation(a, b))
        .expect("trace of a ±1 observable product lies in [-1, 1]");
    let (o_a, o_b) = sample_joint(&dist, rng);
    TrialRecord {
        index,
        a,
        b,
        first_side: None,
        o_a,
        o_b,
    }
}

/// First station's sample. It sees neither angle: the singlet marginal is
/// zero along every axis, so the outcome is a fair coin.
pub fn measure_first_side<R: UniformSource + ?Sized>(rng: &mut R) -> Outcome {
    let (p_plus, _) = binary_probabilities(SINGLET_MARGINAL).expect("zero marginal");
    sample_binary(p_plus, rng).expect("fair probability")
}

/// Second station's sample of `I ⊗ M(angle)` on the post-projection state.
pub fn measure_second_side<R: UniformSource + ?Sized>(
    state: &DensityMatrix4,
    angle: Angle,
    rng: &mut R,
) -> Outcome {
    let (p_plus, _) = binary_probabilities(second_side_expectation(angle, state))
        .expect("expectation of a ±1 observable on a state lies in [-1, 1]");
    sample_binary(p_plus, rng).expect("probability from a clamped expectation")
}

/// Two private samplings linked only by the projected state.
///
/// With B first the roles swap: B samples fair, A measures the projected state.
pub fn run_separated_trial<R: UniformSource + ?Sized>(
    index: u64,
    a: Angle,
    b: Angle,
    rule: ProjectionRule,
    order: MeasurementOrder,
    rng: &mut R,
) -> TrialRecord {
    let first = match order {
        MeasurementOrder::AFirst => Side::A,
        MeasurementOrder::BFirst => Side::B,
        MeasurementOrder::RandomPerTrial => {
            if rng.next_bit() {
                Side::B
            } else {
                Side::A
            }
        }
    };
    let (first_angle, second_angle) = match first {
        Side::A => (a, b),
        Side::B => (b, a),
    };

    let first_outcome = measure_first_side(rng);
    let state = apply_rule(rule, first_angle, first_outcome);
    let second_outcome = measure_second_side(&state, second_angle, rng);

    let (o_a, o_b) = match first {
        Side::A => (first_outcome, second_outcome),
        Side::B => (second_outcome, first_outcome),
    };
    TrialRecord {
        index,
        a,
        b,
        first_side: Some(first),
        o_a,
        o_b,
    }
}

fn run_trial<R: UniformSource + ?Sized>(
    config: &ExperimentConfig,
    index: u64,
    rng: &mut R,
) -> TrialRecord {
    match config.mode {
        Mode::Joint => run_joint_trial(index, config.a, config.b, rng),
        Mode::Separated { rule, order } => {
            run_separated_trial(index, config.a, config.b, rule, order, rng)
        }
    }
}

/// `(1/N) Σ o_a · o_b`.
pub fn estimate_correlation(records: &[TrialRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let sum: i64 = records.iter().map(|r| i64::from(r.product())).sum();
    Ok(sum as f64 / records.len() as f64)
}

fn mean_outcome(records: &[TrialRecord], pick: impl Fn(&TrialRecord) -> Outcome) -> f64 {
    let sum: i64 = records.iter().map(|r| i64::from(pick(r).value())).sum();
    sum as f64 / records.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub records: Vec<TrialRecord>,
    pub correlation: f64,
    pub marginal_a: f64,
    pub marginal_b: f64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    config.validate()?;
    let n = config.n_trials;
    let chunks = n.div_ceil(CHUNK_TRIALS);

    let records: Vec<TrialRecord> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = RandomSource::with_stream(config.seed, chunk);
            let start = chunk * CHUNK_TRIALS;
            let end = (start + CHUNK_TRIALS).min(n);
            (start..end)
                .map(|i| run_trial(config, i, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat();

    Ok(ExperimentRun {
        correlation: estimate_correlation(&records)?,
        marginal_a: mean_outcome(&records, |r| r.o_a),
        marginal_b: mean_outcome(&records, |r| r.o_b),
        records,
    })
}

/// Estimated and predicted correlation across a sweep of `b` with `a` fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub a: Angle,
    pub b_values: Vec<Angle>,
    pub estimates: Vec<f64>,
    pub predictions: Vec<f64>,
    pub n_trials: u64,
    pub mode: Mode,
    pub seed: u64,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.b_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b_values.is_empty()
    }

    /// `max |estimate − prediction|` over the sweep.
    pub fn max_abs_deviation(&self) -> f64 {
        self.estimates
            .iter()
            .zip(&self.predictions)
            .map(|(e, p)| (e - p).abs())
            .fold(0.0, f64::max)
    }
}

/// `steps` evenly spaced values from `start` to `end`, both included.
pub fn linspace(start: Angle, end: Angle, steps: usize) -> Vec<Angle> {
    let (s, e) = (start.radians(), end.radians());
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| Angle::new(s + (e - s) * i as f64 / last).expect("finite endpoints"))
        .collect()
}

/// Full-circle default sweep range.
pub fn full_turn() -> (Angle, Angle) {
    (Angle::ZERO, Angle::new(2.0 * PI).expect("finite"))
}

/// Runs the experiment at each of `steps` values of `b` in `[b_start, b_end]`.
///
/// Point `i` is seeded with `derive_seed(config.seed, i)`; `config.b` is ignored.
pub fn sweep_b(
    config: &ExperimentConfig,
    b_start: Angle,
    b_end: Angle,
    steps: usize,
) -> Result<SweepResult> {
    if steps < 2 {
        return Err(Error::InvalidConfig(format!(
            "a sweep needs at least 2 steps, got {steps}"
        )));
    }
    config.validate()?;
    let b_values = linspace(b_start, b_end, steps);

    let estimates = b_values
        .par_iter()
        .enumerate()
        .map(|(i, &b)| {
            let point = ExperimentConfig {
                b,
                seed: derive_seed(config.seed, i as u64),
                ..*config
            };
            run_experiment(&point).map(|run| run.correlation)
        })
        .collect::<Result<Vec<f64>>>()?;
    let predictions = b_values
        .iter()
        .map(|&b| config.mode.predicted_correlation(config.a, b))
        .collect();

    Ok(SweepResult {
        a: config.a,
        b_values,
        estimates,
        predictions,
        n_trials: config.n_trials,
        mode: config.mode,
        seed: config.seed,
    })
}
