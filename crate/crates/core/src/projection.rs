//! Post-measurement state rules.
//!
//! After the first station measures its particle, the second station sees a
//! two-spin state produced by one of three rules. The measured particle
//! always occupies the first tensor factor and the unmeasured particle the
//! second, so the second station's observable is `I ⊗ M(angle)` whichever
//! physical side measured first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::observables::{singlet_density, tensor_product, Angle, DensityMatrix4, Ket2};

/// How the source state is updated once the first station has an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjectionRule {
    /// Pure conditional state: the partner collapses onto the opposite eigenket.
    Luders,
    /// Equal mixture of both conditional states, `I₄/4`.
    VonNeumann,
    /// No update; the second station measures the singlet itself.
    Null,
}

impl ProjectionRule {
    pub const ALL: [ProjectionRule; 3] = [
        ProjectionRule::Luders,
        ProjectionRule::VonNeumann,
        ProjectionRule::Null,
    ];

    /// Canonical serialized identifier.
    pub fn name(self) -> &'static str {
        match self {
            ProjectionRule::Luders => "luders",
            ProjectionRule::VonNeumann => "vonneumann",
            ProjectionRule::Null => "null",
        }
    }
}

impl fmt::Display for ProjectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProjectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProjectionRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::UnknownRule(s.to_owned()))
    }
}

/// A single spin measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Minus,
    Plus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Minus => -1,
            Outcome::Plus => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Minus => Outcome::Plus,
            Outcome::Plus => Outcome::Minus,
        }
    }
}

impl TryFrom<i64> for Outcome {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Outcome::Minus),
            1 => Ok(Outcome::Plus),
            other => Err(Error::InvalidOutcome(other)),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// Eigenvector of `M(a)` for eigenvalue `sign`.
///
/// `+1 → (cos(a/2), sin(a/2))`, `−1 → (−sin(a/2), cos(a/2))`.
pub fn eigenket(a: Angle, sign: Outcome) -> Ket2 {
    let (s, c) = (0.5 * a.radians()).sin_cos();
    match sign {
        Outcome::Plus => Ket2::new_unchecked(c, s),
        Outcome::Minus => Ket2::new_unchecked(-s, c),
    }
}

/// Lüders update: outcome `o_a` along `a` leaves the partner in `|(−o_a)_a⟩`,
/// embedded as `½ (I ⊗ |(−o_a)_a⟩⟨(−o_a)_a|)`.
pub fn luders_project(a: Angle, o_a: Outcome) -> DensityMatrix4 {
    let partner = eigenket(a, o_a.flipped()).projector();
    let embedded = tensor_product(&Mat2::identity(), partner.matrix()).scale(0.5);
    DensityMatrix4::new_unchecked(embedded)
}

/// Von Neumann update: the mixture of both Lüders branches, which is `I₄/4`
/// for every setting and outcome.
pub fn von_neumann_project() -> DensityMatrix4 {
    DensityMatrix4::maximally_mixed()
}

pub fn null_project() -> DensityMatrix4 {
    singlet_density()
}

/// State presented to the second station under `rule`.
pub fn apply_rule(rule: ProjectionRule, a: Angle, o_a: Outcome) -> DensityMatrix4 {
    match rule {
        ProjectionRule::Luders => luders_project(a, o_a),
        ProjectionRule::VonNeumann => von_neumann_project(),
        ProjectionRule::Null => null_project(),
    }
}
