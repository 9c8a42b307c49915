//! The generic utilitarian emotion formula over a goal-function change.
//!
//! A situation is summarized by two positive readings of an integral
//! resource: the prior value and the current one. The signed emotional
//! power is the logarithm of their ratio, positive when the resource grew
//! and negative when it shrank. The chord power formula is this rule
//! specialized to the geometric mean of a main proportion's terms.
//!
//! Older formulations of the same idea score the raw difference (or the
//! time derivative) of the resource, which equates quantities of
//! different units and weights a fixed gain the same for a pauper and a
//! millionaire. The log-ratio form is dimensionless and scale-free and
//! supersedes them here; only a need-strength factor, fixed to 1, is
//! left out of the product.

use std::fmt;

/// Error for non-positive resource values or gain.
#[derive(Copy, Clone, PartialEq, Debug)]
pub struct InvalidGoalSample;

impl fmt::Display for InvalidGoalSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "goal samples need positive resource values and gain")
    }
}

impl std::error::Error for InvalidGoalSample {}

/// Two readings of a goal function plus the gain applied to their log-ratio.
#[derive(Copy, Clone, Debug)]
pub struct GoalSample {
    r0: f64,
    r1: f64,
    gain: f64,
}

impl GoalSample {
    /// Prior and current resource value, with gain 1.
    pub fn new(r0: f64, r1: f64) -> Result<GoalSample, InvalidGoalSample> {
        GoalSample::with_gain(r0, r1, 1.0)
    }

    pub fn with_gain(r0: f64, r1: f64, gain: f64) -> Result<GoalSample, InvalidGoalSample> {
        if r0 <= 0.0 || r1 <= 0.0 || gain <= 0.0 || r0.is_nan() || r1.is_nan() || gain.is_nan() {
            return Err(InvalidGoalSample);
        }
        Ok(GoalSample { r0, r1, gain })
    }

    /// The relative goal value `L = r1/r0`.
    pub fn relative_goal(&self) -> f64 {
        self.r1 / self.r0
    }
}

/// Signed emotional power `k * log2(r1/r0)`.
///
/// Positive when the goal function rose, zero when it held, negative when
/// it fell.
pub fn utilitarian_power(sample: &GoalSample) -> f64 {
    sample.gain * sample.relative_goal().log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affect::emotional_power;
    use crate::proportion::Proportion;
    use proptest::prelude::*;

    #[test]
    fn doubling_gives_unit_power() {
        let s = GoalSample::new(1.0, 2.0).unwrap();
        assert_eq!(utilitarian_power(&s), 1.0);
    }

    #[test]
    fn no_change_is_neutral() {
        let s = GoalSample::new(3.5, 3.5).unwrap();
        assert_eq!(utilitarian_power(&s), 0.0);
    }

    #[test]
    fn halving_gives_negative_unit_power() {
        let s = GoalSample::new(2.0, 1.0).unwrap();
        assert_eq!(utilitarian_power(&s), -1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GoalSample::new(0.0, 1.0).is_err());
        assert!(GoalSample::new(1.0, -2.0).is_err());
        assert!(GoalSample::with_gain(1.0, 1.0, 0.0).is_err());
        assert!(GoalSample::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn matches_chord_power_through_the_geometric_mean() {
        // For a major chord, L is the geometric mean of the direct terms.
        for terms in [&[4u64, 5, 6][..], &[3, 4, 5], &[2, 3, 4, 5], &[1, 2, 3]] {
            let p = Proportion::from_terms(terms).unwrap();
            let product: f64 = terms.iter().map(|&t| t as f64).product();
            let geo_mean = product.powf(1.0 / terms.len() as f64);
            let s = GoalSample::new(1.0, geo_mean).unwrap();
            let diff = (utilitarian_power(&s) - emotional_power(&p).pwe_main).abs();
            assert!(diff < 1e-12, "{terms:?}: {diff}");
        }
    }

    proptest! {
        #[test]
        fn antisymmetric(r0 in 1e-3f64..1e3, r1 in 1e-3f64..1e3) {
            let a = utilitarian_power(&GoalSample::new(r0, r1).unwrap());
            let b = utilitarian_power(&GoalSample::new(r1, r0).unwrap());
            prop_assert!((a + b).abs() < 1e-12);
        }

        #[test]
        fn scale_invariant(r0 in 1e-3f64..1e3, r1 in 1e-3f64..1e3, c in 1e-3f64..1e3) {
            let a = utilitarian_power(&GoalSample::new(r0, r1).unwrap());
            let b = utilitarian_power(&GoalSample::new(c * r0, c * r1).unwrap());
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn sign_follows_direction(r0 in 1e-3f64..1e3, r1 in 1e-3f64..1e3) {
            let power = utilitarian_power(&GoalSample::new(r0, r1).unwrap());
            if r1 > r0 {
                prop_assert!(power > 0.0);
            } else if r1 < r0 {
                prop_assert!(power < 0.0);
            } else {
                prop_assert_eq!(power, 0.0);
            }
        }
    }
}
