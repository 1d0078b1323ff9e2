//! Preference types, lotteries over treatments, and the statement response.
//!
//! Preferences over the two treatments are strict, so exactly two types
//! exist: type 1 strictly prefers treatment 1 and type 0 strictly prefers
//! treatment 0. A lottery `(p1, p0)` gives treatment 1 with probability
//! `p1` and treatment 0 otherwise. Preferences extend to lotteries by
//! comparing the probability of receiving the preferred treatment, which
//! is equivalent to expected-utility maximization for any utility function
//! representing the underlying strict preference.
//!
//! [`stated_preference`] is the behavioural core: an individual who knows
//! the announced rule states whichever type yields the better lottery, so
//! truth-telling survives exactly when the rule treats a stated type 1 at
//! least as generously as a stated type 0.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::splitmix64;
use crate::rule::Itr;

/// A strict preference type: which of the two treatments the individual
/// genuinely prefers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreferenceType {
    /// Strictly prefers treatment 0.
    Prefers0,
    /// Strictly prefers treatment 1.
    Prefers1,
}

impl PreferenceType {
    /// The opposite type.
    pub fn other(self) -> Self {
        match self {
            Self::Prefers0 => Self::Prefers1,
            Self::Prefers1 => Self::Prefers0,
        }
    }

    /// The conventional 0/1 encoding.
    pub fn bit(self) -> u8 {
        match self {
            Self::Prefers0 => 0,
            Self::Prefers1 => 1,
        }
    }

    /// Decode the conventional 0/1 encoding.
    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(Self::Prefers0),
            1 => Ok(Self::Prefers1),
            other => Err(Error::InvalidArgument(format!(
                "preference type must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for PreferenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// A lottery over the two treatments.
///
/// Constructed from the treatment-1 probability alone; the treatment-0
/// probability is derived, so the two components sum to one by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lottery {
    p1: f64,
}

impl Lottery {
    /// Build a lottery from the probability of treatment 1.
    pub fn new(p1: f64) -> Result<Self> {
        if !p1.is_finite() {
            return Err(Error::NonFinite {
                name: "lottery p1",
                value: p1,
            });
        }
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::ProbabilityOutOfRange {
                name: "lottery p1",
                value: p1,
            });
        }
        Ok(Self { p1 })
    }

    /// Probability of treatment 1.
    pub fn p1(&self) -> f64 {
        self.p1
    }

    /// Probability of treatment 0.
    pub fn p0(&self) -> f64 {
        1.0 - self.p1
    }

    /// Probability that this lottery delivers the treatment preferred by
    /// type `t`.
    pub fn preferred_prob(&self, t: PreferenceType) -> f64 {
        match t {
            PreferenceType::Prefers1 => self.p1(),
            PreferenceType::Prefers0 => self.p0(),
        }
    }
}

/// How an individual of a given type ranks one lottery against another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LotteryOrdering {
    /// The first lottery is strictly better for this type.
    StrictlyPrefers,
    /// The two lotteries give the preferred treatment with equal probability.
    Indifferent,
    /// The first lottery is strictly worse for this type.
    StrictlyDisprefers,
}

/// Rank lottery `p` against lottery `q` for an individual of type `t`.
///
/// The comparison is first-order: only the probability of the preferred
/// treatment matters, and indifference holds exactly when those
/// probabilities are equal.
pub fn lottery_prefers(p: &Lottery, q: &Lottery, t: PreferenceType) -> LotteryOrdering {
    let a = p.preferred_prob(t);
    let b = q.preferred_prob(t);
    if a > b {
        LotteryOrdering::StrictlyPrefers
    } else if a < b {
        LotteryOrdering::StrictlyDisprefers
    } else {
        LotteryOrdering::Indifferent
    }
}

/// Behaviour when the announced rule makes both statements equivalent,
/// i.e. delta(1) == delta(0).
///
/// The induced lotteries are identical in that case, so the choice never
/// affects welfare; it only pins down which label gets recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// State the true type.
    #[default]
    Truthful,
    /// State the opposite type.
    Lie,
    /// Resolve from a caller-supplied seed, so simulations stay reproducible.
    Random { seed: u64 },
}

/// The type an expected-utility maximizer states when the announced rule
/// is `itr` and their true type is `t`.
///
/// Truth if the rule rewards a stated 1 more than a stated 0, the lie if
/// it rewards it less, and the tie policy otherwise.
pub fn stated_preference(itr: &Itr, t: PreferenceType, tie: TiePolicy) -> PreferenceType {
    if itr.delta1() > itr.delta0() {
        t
    } else if itr.delta1() < itr.delta0() {
        t.other()
    } else {
        match tie {
            TiePolicy::Truthful => t,
            TiePolicy::Lie => t.other(),
            TiePolicy::Random { seed } => {
                if splitmix64(seed) & 1 == 0 {
                    t
                } else {
                    t.other()
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lot(p1: f64) -> Lottery {
        Lottery::new(p1).unwrap()
    }

    #[test]
    fn lottery_components_sum_to_one() {
        let l = lot(0.3);
        assert_eq!(l.p1() + l.p0(), 1.0);
        assert_eq!(lot(0.0).p0(), 1.0);
        assert_eq!(lot(1.0).p0(), 0.0);
    }

    #[test]
    fn lottery_rejects_invalid_probability() {
        assert!(matches!(
            Lottery::new(1.5),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(
            Lottery::new(-0.1),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(
            Lottery::new(f64::NAN),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn lottery_comparison_is_first_order() {
        // Type 1 ranks lotteries by their treatment-1 probability.
        assert_eq!(
            lottery_prefers(&lot(0.7), &lot(0.4), PreferenceType::Prefers1),
            LotteryOrdering::StrictlyPrefers
        );
        assert_eq!(
            lottery_prefers(&lot(0.5), &lot(0.5), PreferenceType::Prefers0),
            LotteryOrdering::Indifferent
        );
        assert_eq!(
            lottery_prefers(&lot(0.2), &lot(0.6), PreferenceType::Prefers1),
            LotteryOrdering::StrictlyDisprefers
        );
        // The same pair flips for the opposite type.
        assert_eq!(
            lottery_prefers(&lot(0.2), &lot(0.6), PreferenceType::Prefers0),
            LotteryOrdering::StrictlyPrefers
        );
    }

    #[test]
    fn statement_tracks_the_rewarded_label() {
        let truthful_rule = Itr::new(0.7, 0.2).unwrap();
        let lying_rule = Itr::new(0.2, 0.7).unwrap();
        for t in [PreferenceType::Prefers0, PreferenceType::Prefers1] {
            assert_eq!(stated_preference(&truthful_rule, t, TiePolicy::Truthful), t);
            assert_eq!(
                stated_preference(&lying_rule, t, TiePolicy::Truthful),
                t.other()
            );
        }
    }

    #[test]
    fn tie_policy_only_matters_on_the_diagonal() {
        let tied = Itr::new(0.5, 0.5).unwrap();
        let t = PreferenceType::Prefers0;
        assert_eq!(stated_preference(&tied, t, TiePolicy::Truthful), t);
        assert_eq!(stated_preference(&tied, t, TiePolicy::Lie), t.other());
        // Random resolution is deterministic per seed.
        let r1 = stated_preference(&tied, t, TiePolicy::Random { seed: 7 });
        let r2 = stated_preference(&tied, t, TiePolicy::Random { seed: 7 });
        assert_eq!(r1, r2);
        // Off the diagonal the policy is ignored.
        let strict = Itr::new(0.9, 0.1).unwrap();
        assert_eq!(stated_preference(&strict, t, TiePolicy::Lie), t);
    }

    #[test]
    fn preference_type_round_trips_bits() {
        assert_eq!(PreferenceType::from_bit(0).unwrap(), PreferenceType::Prefers0);
        assert_eq!(PreferenceType::from_bit(1).unwrap(), PreferenceType::Prefers1);
        assert!(PreferenceType::from_bit(2).is_err());
    }
}
