//! Individualized treatment rules and the sign tables that select them.
//!
//! An individualized treatment rule (ITR) maps a stated preference type to
//! a probability of receiving treatment 1, written `(delta(1), delta(0))`.
//! Everything about rule choice reduces to three determinants of the
//! outcome distribution:
//!
//! ```text
//! beta1 = P(T = 1) * tau(1)      beta0 = P(T = 0) * tau(0)
//! beta1 + beta0 = average treatment effect
//! ```
//!
//! where `tau(t)` is the average effect of treatment 1 over treatment 0
//! among individuals who truly prefer treatment `t`.
//!
//! [`naive_itr`] maximizes welfare assuming types are observed truthfully:
//! a componentwise sign rule. [`optimal_itr`] maximizes welfare when
//! individuals state types strategically; it deviates from the naive rule
//! exactly when `beta1 < 0 < beta0`, where individualizing would reward
//! lying, and it is always strategy-proof (`delta(1) >= delta(0)`).
//!
//! Sign tests are exact comparisons of the stored values. Tolerances
//! belong to tests and estimators, not to the rule itself.

use std::fmt;

use crate::error::{Error, Result};
use crate::pref::PreferenceType;
use crate::welfare::DerivedParams;

/// An individualized treatment rule: treatment-1 probabilities for stated
/// types 1 and 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Itr {
    delta1: f64,
    delta0: f64,
}

impl Itr {
    /// Build a rule, validating that both components are probabilities.
    pub fn new(delta1: f64, delta0: f64) -> Result<Self> {
        for (name, value) in [("delta(1)", delta1), ("delta(0)", delta0)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ProbabilityOutOfRange { name, value });
            }
        }
        Ok(Self { delta1, delta0 })
    }

    /// Treatment-1 probability for a stated type 1.
    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    /// Treatment-1 probability for a stated type 0.
    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// Treatment-1 probability for an arbitrary stated type.
    pub fn delta(&self, stated: PreferenceType) -> f64 {
        match stated {
            PreferenceType::Prefers1 => self.delta1,
            PreferenceType::Prefers0 => self.delta0,
        }
    }

    /// The lottery an individual faces after stating type `stated`.
    pub fn lottery(&self, stated: PreferenceType) -> crate::pref::Lottery {
        crate::pref::Lottery::new(self.delta(stated)).expect("rule components are probabilities")
    }

    /// The rule with the two components exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            delta1: self.delta0,
            delta0: self.delta1,
        }
    }
}

impl fmt::Display for Itr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.delta1, self.delta0)
    }
}

/// Strategy-proofness classification of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyProofness {
    /// Truth-telling is the unique best response: `delta(1) > delta(0)`.
    Strict,
    /// Both statements induce the same lottery: `delta(1) == delta(0)`.
    Weak,
    /// Lying is the unique best response: `delta(1) < delta(0)`.
    LyingStrictlyOptimal,
}

impl fmt::Display for StrategyProofness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Strict => "strict strategy-proof",
            Self::Weak => "weakly strategy-proof",
            Self::LyingStrictlyOptimal => "lying strictly optimal",
        };
        f.write_str(s)
    }
}

/// Classify a rule by comparing its two components.
pub fn strategy_proofness(itr: &Itr) -> StrategyProofness {
    if itr.delta1() > itr.delta0() {
        StrategyProofness::Strict
    } else if itr.delta1() == itr.delta0() {
        StrategyProofness::Weak
    } else {
        StrategyProofness::LyingStrictlyOptimal
    }
}

/// Exact sign of a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// Exact sign of a finite value.
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Self::Positive
        } else if x < 0.0 {
            Self::Negative
        } else {
            Self::Zero
        }
    }

    fn short(self) -> &'static str {
        match self {
            Self::Negative => "neg",
            Self::Zero => "zero",
            Self::Positive => "pos",
        }
    }
}

/// The sign pattern `(sign beta1, sign beta0, sign(beta1 + beta0))` that
/// determines both rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterminantSigns {
    pub beta1: Sign,
    pub beta0: Sign,
    pub sum: Sign,
}

impl DeterminantSigns {
    /// Read the sign pattern off a parameter set.
    pub fn of(params: &DerivedParams) -> Self {
        Self {
            beta1: Sign::of(params.beta1()),
            beta0: Sign::of(params.beta0()),
            sum: Sign::of(params.ate()),
        }
    }

    /// Row index (1..=11) in the canonical case table ordered by
    /// `(sign beta1, sign beta0)` with the `beta1 < 0 < beta0` block split
    /// by the sign of the sum.
    pub fn table_row(&self) -> u8 {
        use Sign::*;
        match (self.beta1, self.beta0, self.sum) {
            (Positive, Positive, _) => 1,
            (Positive, Zero, _) => 2,
            (Positive, Negative, _) => 3,
            (Zero, Positive, _) => 4,
            (Zero, Zero, _) => 5,
            (Zero, Negative, _) => 6,
            (Negative, Positive, Negative) => 7,
            (Negative, Positive, Zero) => 8,
            (Negative, Positive, Positive) => 9,
            (Negative, Zero, _) => 10,
            (Negative, Negative, _) => 11,
        }
    }

    /// Compact label, e.g. `pos-neg` or `neg-pos-pos`. The sum component
    /// only appears where it disambiguates the rule.
    pub fn label(&self) -> String {
        if self.beta1 == Sign::Negative && self.beta0 == Sign::Positive {
            format!(
                "{}-{}-{}",
                self.beta1.short(),
                self.beta0.short(),
                self.sum.short()
            )
        } else {
            format!("{}-{}", self.beta1.short(), self.beta0.short())
        }
    }
}

impl fmt::Display for DeterminantSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The welfare-maximizing rule when true types are observable.
///
/// Componentwise sign rule: `delta(t) = 1` if `beta_t > 0`, `epsilon` if
/// `beta_t == 0`, and `0` if `beta_t < 0`. The tie parameter `epsilon` is
/// explicit because welfare does not pin it down.
pub fn naive_itr(params: &DerivedParams, epsilon: f64) -> Result<Itr> {
    if !epsilon.is_finite() || !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let component = |beta: f64| match Sign::of(beta) {
        Sign::Positive => 1.0,
        Sign::Zero => epsilon,
        Sign::Negative => 0.0,
    };
    Itr::new(component(params.beta1()), component(params.beta0()))
}

/// The welfare-maximizing rule when individuals state types strategically.
///
/// Eleven cases by the sign pattern of `(beta1, beta0, beta1 + beta0)`,
/// with the free tie parameter fixed at 0 so the two welfare-indifferent
/// cases return `(0, 0)`:
///
/// ```text
/// beta1  beta0  sum | rule
///  >0     >0       | (1,1)
///  >0     =0       | (1,1)
///  >0     <0       | (1,0)
///  =0     >0       | (1,1)
///  =0     =0       | (0,0)
///  =0     <0       | (0,0)
///  <0     >0    <0 | (0,0)
///  <0     >0    =0 | (0,0)
///  <0     >0    >0 | (1,1)
///  <0     =0       | (0,0)
///  <0     <0       | (0,0)
/// ```
///
/// The output always satisfies `delta(1) >= delta(0)`, so it is
/// strategy-proof, and it individualizes (is strict) exactly when
/// `beta1 > 0 > beta0`.
pub fn optimal_itr(params: &DerivedParams) -> Itr {
    let (delta1, delta0) = match DeterminantSigns::of(params).table_row() {
        1 | 2 | 4 | 9 => (1.0, 1.0),
        3 => (1.0, 0.0),
        _ => (0.0, 0.0),
    };
    Itr::new(delta1, delta0).expect("table entries are probabilities")
}
