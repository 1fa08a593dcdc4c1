//! States and observables for a pair of spin-1/2 particles measured in the
//! X-Z plane, in the Z representation.
//!
//! Every quantity here is real: measurement axes lie in the X-Z plane, so
//! the observables and the singlet density matrix have no imaginary part.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Mat4};

/// Tolerance for exact algebraic identities and state validation.
pub const TOLERANCE: f64 = 1e-12;

/// A measurement angle in radians, measured from the Z axis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() {
            Ok(Angle(radians))
        } else {
            Err(Error::NonFiniteAngle(radians))
        }
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::new(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// Value reduced to `[0, 2π)`.
    pub fn normalized(self) -> Angle {
        Angle(self.0.rem_euclid(2.0 * PI))
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// Spin observable along an axis in the X-Z plane; eigenvalues ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOperator(Mat2);

impl MeasurementOperator {
    /// `[[cos θ, sin θ], [sin θ, −cos θ]]`.
    pub fn along(angle: Angle) -> Self {
        let (s, c) = angle.radians().sin_cos();
        MeasurementOperator(Mat2::new(c, s, s, -c))
    }

    /// Accepts an arbitrary matrix if it is a reflection: symmetric, traceless,
    /// determinant −1 and squaring to the identity.
    pub fn try_from_matrix(m: Mat2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidOperator("non-finite entries".into()));
        }
        if !m.is_symmetric(TOLERANCE) {
            return Err(Error::InvalidOperator("not symmetric".into()));
        }
        if m.trace().abs() > TOLERANCE {
            return Err(Error::InvalidOperator(format!(
                "trace {} is not 0",
                m.trace()
            )));
        }
        if (m.determinant() + 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidOperator(format!(
                "determinant {} is not -1",
                m.determinant()
            )));
        }
        if (m * m).max_abs_diff(&Mat2::identity()) > TOLERANCE {
            return Err(Error::InvalidOperator("M·M is not the identity".into()));
        }
        Ok(MeasurementOperator(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }
}

/// Builds the spin observable for a measurement angle.
pub fn make_measurement_operator(angle: Angle) -> MeasurementOperator {
    MeasurementOperator::along(angle)
}

/// A real unit 2-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ket2([f64; 2]);

impl Ket2 {
    pub fn new(up: f64, down: f64) -> Result<Self> {
        let norm = up.hypot(down);
        if (norm - 1.0).abs() > TOLERANCE || !norm.is_finite() {
            return Err(Error::UnnormalizedKet(norm));
        }
        Ok(Ket2([up, down]))
    }

    pub(crate) fn new_unchecked(up: f64, down: f64) -> Self {
        Ket2([up, down])
    }

    pub fn amplitudes(&self) -> [f64; 2] {
        self.0
    }

    /// Pure-state density matrix `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix2 {
        let [x, y] = self.0;
        DensityMatrix2(Mat2::new(x * x, x * y, y * x, y * y))
    }
}

fn check_density<const N: usize>(
    symmetric: bool,
    finite: bool,
    trace: f64,
    eigenvalues: [f64; N],
) -> Result<()> {
    if !finite {
        return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
    }
    if !symmetric {
        return Err(Error::InvalidDensityMatrix("not symmetric".into()));
    }
    if (trace - 1.0).abs() > TOLERANCE {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace {trace} is not 1"
        )));
    }
    if let Some(&low) = eigenvalues.iter().find(|&&e| e < -TOLERANCE) {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {low}"
        )));
    }
    Ok(())
}

/// Single-spin state: real symmetric, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(Mat2);

impl DensityMatrix2 {
    pub fn new(m: Mat2) -> Result<Self> {
        check_density(
            m.is_symmetric(TOLERANCE),
            m.is_finite(),
            m.trace(),
            m.symmetric_eigenvalues(),
        )?;
        Ok(DensityMatrix2(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn expectation(&self, op: &MeasurementOperator) -> f64 {
        op.matrix().trace_of_product(&self.0)
    }
}

/// Two-spin state: real symmetric, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(Mat4);

impl DensityMatrix4 {
    pub fn new(m: Mat4) -> Result<Self> {
        check_density(
            m.is_symmetric(TOLERANCE),
            m.is_finite(),
            m.trace(),
            m.symmetric_eigenvalues(),
        )?;
        Ok(DensityMatrix4(m))
    }

    pub(crate) const fn new_unchecked(m: Mat4) -> Self {
        DensityMatrix4(m)
    }

    /// Maximally mixed two-spin state `I₄/4`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix4(Mat4::identity().scale(0.25))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

const SINGLET: Mat4 = Mat4([
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.5, -0.5, 0.0],
    [0.0, -0.5, 0.5, 0.0],
    [0.0, 0.0, 0.0, 0.0],
]);

/// Density matrix of the anticorrelated singlet, `(|01⟩ − |10⟩)(⟨01| − ⟨10|)/2`.
pub fn singlet_density() -> DensityMatrix4 {
    DensityMatrix4::new_unchecked(SINGLET)
}

/// Kronecker product with `left` supplying the block structure.
pub fn tensor_product(left: &Mat2, right: &Mat2) -> Mat4 {
    left.kron(right)
}

/// `Tr(observable · state)`.
pub fn expectation(observable: &Mat4, state: &DensityMatrix4) -> f64 {
    observable.trace_of_product(state.matrix())
}

/// Expectation of `M(a) ⊗ I`, the first particle's spin along `a`.
pub fn first_side_expectation(a: Angle, state: &DensityMatrix4) -> f64 {
    let obs = tensor_product(MeasurementOperator::along(a).matrix(), &Mat2::identity());
    expectation(&obs, state)
}

/// Expectation of `I ⊗ M(b)`, the second particle's spin along `b`.
pub fn second_side_expectation(b: Angle, state: &DensityMatrix4) -> f64 {
    let obs = tensor_product(&Mat2::identity(), MeasurementOperator::along(b).matrix());
    expectation(&obs, state)
}

/// Expectation of the outcome product on the singlet, `Tr((M(a) ⊗ M(b)) ρ)`.
pub fn joint_expectation(a: Angle, b: Angle) -> f64 {
    let obs = tensor_product(
        MeasurementOperator::along(a).matrix(),
        MeasurementOperator::along(b).matrix(),
    );
    expectation(&obs, &singlet_density())
}

/// Accepts `x` within `TOLERANCE` of `[-1, 1]` and clamps it.
fn clamp_expectation(x: f64) -> Result<f64> {
    if x.is_finite() && x.abs() <= 1.0 + TOLERANCE {
        Ok(x.clamp(-1.0, 1.0))
    } else {
        Err(Error::ExpectationOutOfRange(x))
    }
}

/// Probabilities of the four outcome pairs.
///
/// Fields are named by sign: `p_mp` is the probability of A = −1, B = +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    pub p_mm: f64,
    pub p_mp: f64,
    pub p_pm: f64,
    pub p_pp: f64,
}

impl JointDistribution {
    pub fn new(p_mm: f64, p_mp: f64, p_pm: f64, p_pp: f64) -> Result<Self> {
        let probs = [p_mm, p_mp, p_pm, p_pp];
        if let Some(&bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::ProbabilityOutOfRange(bad));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(JointDistribution {
            p_mm,
            p_mp,
            p_pm,
            p_pp,
        })
    }

    /// In sampling order: (−1,−1), (−1,+1), (+1,−1), (+1,+1).
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_mm, self.p_mp, self.p_pm, self.p_pp]
    }

    /// `E[o_a · o_b]` under this distribution.
    pub fn correlation(&self) -> f64 {
        self.p_mm + self.p_pp - self.p_mp - self.p_pm
    }
}

/// Outcome-pair probabilities from the product expectation `⟨AB⟩` when both
/// marginals vanish: `(1 ± ⟨AB⟩)/4`.
pub fn joint_probabilities(ab_expectation: f64) -> Result<JointDistribution> {
    let ab = clamp_expectation(ab_expectation)?;
    let same = (1.0 + ab) / 4.0;
    let differ = (1.0 - ab) / 4.0;
    Ok(JointDistribution {
        p_mm: same,
        p_mp: differ,
        p_pm: differ,
        p_pp: same,
    })
}

/// `(p_plus, p_minus) = ((1 + ⟨·⟩)/2, (1 − ⟨·⟩)/2)` for a ±1 observable.
pub fn binary_probabilities(expectation_value: f64) -> Result<(f64, f64)> {
    let e = clamp_expectation(expectation_value)?;
    Ok(((1.0 + e) / 2.0, (1.0 - e) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn ang(x: f64) -> Angle {
        Angle::new(x).unwrap()
    }

    #[test]
    fn angle_rejects_non_finite() {
        assert!(Angle::new(f64::NAN)
            .unwrap_err()
            .to_string()
            .contains("finite"));
        assert!(Angle::new(f64::INFINITY).is_err());
        assert!(Angle::from_degrees(f64::NEG_INFINITY).is_err());
        assert_abs_diff_eq!(Angle::from_degrees(180.0).unwrap().radians(), PI);
    }

    #[test]
    fn operator_examples() {
        assert_eq!(
            *make_measurement_operator(ang(0.0)).matrix(),
            Mat2::new(1.0, 0.0, 0.0, -1.0)
        );
        let m = make_measurement_operator(ang(FRAC_PI_2));
        assert!(m.matrix().max_abs_diff(&Mat2::new(0.0, 1.0, 1.0, 0.0)) < 1e-15);
        let m = make_measurement_operator(ang(FRAC_PI_3));
        let r3 = 3f64.sqrt() / 2.0;
        assert!(m.matrix().max_abs_diff(&Mat2::new(0.5, r3, r3, -0.5)) < 1e-15);
    }

    #[test]
    fn operator_validation() {
        assert!(MeasurementOperator::try_from_matrix(Mat2::new(0.0, 1.0, 1.0, 0.0)).is_ok());
        assert!(MeasurementOperator::try_from_matrix(Mat2::identity()).is_err());
        assert!(MeasurementOperator::try_from_matrix(Mat2::new(1.0, 1.0, 0.0, -1.0)).is_err());
        assert!(MeasurementOperator::try_from_matrix(Mat2::new(2.0, 0.0, 0.0, -0.5)).is_err());
    }

    #[test]
    fn singlet_matches_closed_form() {
        let s = singlet_density();
        let expected = Mat4::from_fn(|i, j| match (i, j) {
            (1, 1) | (2, 2) => 0.5,
            (1, 2) | (2, 1) => -0.5,
            _ => 0.0,
        });
        assert_eq!(*s.matrix(), expected);
        assert_eq!(s.trace(), 1.0);
        assert!(DensityMatrix4::new(*s.matrix()).is_ok());
    }

    #[test]
    fn singlet_spectrum_is_pure() {
        // characteristic polynomial λ³(λ − 1): only the |01⟩,|10⟩ block is nonzero
        // and that block [[½, −½], [−½, ½]] has eigenvalues 0 and 1.
        let e = singlet_density().matrix().symmetric_eigenvalues();
        for (got, want) in e.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn tensor_product_of_z_operators() {
        let z = make_measurement_operator(Angle::ZERO);
        let zz = tensor_product(z.matrix(), z.matrix());
        let expected = Mat4::from_fn(|i, j| {
            if i == j {
                [1.0, -1.0, -1.0, 1.0][i]
            } else {
                0.0
            }
        });
        assert_eq!(zz, expected);
    }

    #[test]
    fn tensor_with_identity_is_block_diagonal() {
        let rho = Ket2::new(0.6, 0.8).unwrap().projector();
        let m = tensor_product(&Mat2::identity(), rho.matrix()).scale(0.5);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[(i, j)], 0.5 * rho.matrix()[(i, j)]);
                assert_eq!(m[(i + 2, j + 2)], 0.5 * rho.matrix()[(i, j)]);
                assert_eq!(m[(i, j + 2)], 0.0);
                assert_eq!(m[(i + 2, j)], 0.0);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let s = singlet_density();
        let z = make_measurement_operator(Angle::ZERO);
        assert_abs_diff_eq!(
            expectation(&tensor_product(z.matrix(), z.matrix()), &s),
            -1.0
        );
        for k in 0..16 {
            let a = ang(k as f64 * 0.41);
            assert!(first_side_expectation(a, &s).abs() < TOLERANCE);
            assert!(second_side_expectation(a, &s).abs() < TOLERANCE);
        }
        // brute force: full 4×4 product, then sum the diagonal
        let obs = tensor_product(
            make_measurement_operator(ang(FRAC_PI_4)).matrix(),
            make_measurement_operator(ang(FRAC_PI_2)).matrix(),
        );
        let full = obs * *s.matrix();
        let brute: f64 = (0..4).map(|i| full[(i, i)]).sum();
        assert_abs_diff_eq!(brute, -FRAC_PI_4.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(expectation(&obs, &s), brute, epsilon = 1e-15);
    }

    #[test]
    fn joint_expectation_examples() {
        assert_abs_diff_eq!(joint_expectation(ang(0.0), ang(0.0)), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            joint_expectation(ang(0.0), ang(FRAC_PI_2)),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(joint_expectation(ang(0.0), ang(PI)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn joint_probability_examples() {
        let d = joint_probabilities(-1.0).unwrap();
        assert_eq!(d.as_array(), [0.0, 0.5, 0.5, 0.0]);
        assert_eq!(joint_probabilities(0.0).unwrap().as_array(), [0.25; 4]);
        assert_eq!(
            joint_probabilities(1.0).unwrap().as_array(),
            [0.5, 0.0, 0.0, 0.5]
        );
        assert!(joint_probabilities(1.5).is_err());
        assert!(joint_probabilities(f64::NAN).is_err());
        // rounding noise just past ±1 is clamped rather than rejected
        assert_eq!(joint_probabilities(-1.0 - 1e-15).unwrap().p_mm, 0.0);
    }

    #[test]
    fn binary_probability_examples() {
        assert_eq!(binary_probabilities(0.0).unwrap(), (0.5, 0.5));
        assert_eq!(binary_probabilities(1.0).unwrap(), (1.0, 0.0));
        assert_eq!(binary_probabilities(-0.5).unwrap(), (0.25, 0.75));
        assert!(binary_probabilities(-1.01).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(JointDistribution::new(0.25, 0.25, 0.25, 0.25).is_ok());
        assert!(JointDistribution::new(0.5, 0.5, 0.5, 0.0).is_err());
        assert!(JointDistribution::new(-0.1, 0.6, 0.25, 0.25).is_err());
        assert_abs_diff_eq!(
            joint_probabilities(-0.3).unwrap().correlation(),
            -0.3,
            epsilon = 1e-15
        );
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix2::new(Mat2::new(0.5, 0.0, 0.0, 0.5)).is_ok());
        assert!(DensityMatrix2::new(Mat2::new(1.5, 0.0, 0.0, -0.5)).is_err());
        assert!(DensityMatrix2::new(Mat2::new(0.5, 0.1, 0.0, 0.5)).is_err());
        assert!(DensityMatrix4::new(Mat4::identity()).is_err());
        assert!(DensityMatrix4::new(*DensityMatrix4::maximally_mixed().matrix()).is_ok());
        // unit trace but indefinite
        let indefinite = Mat4::from_fn(|i, j| {
            if i == j {
                [1.0, 0.5, -0.5, 0.0][i]
            } else {
                0.0
            }
        });
        assert!(matches!(
            DensityMatrix4::new(indefinite),
            Err(Error::InvalidDensityMatrix(msg)) if msg.contains("eigenvalue")
        ));
    }

    #[test]
    fn ket_validation() {
        assert!(Ket2::new(0.6, 0.8).is_ok());
        assert!(matches!(
            Ket2::new(1.0, 1.0),
            Err(Error::UnnormalizedKet(_))
        ));
    }
}
