//! Experimental designs that identify preference-conditional effects.
//!
//! Two designs are supported. The survey design announces a propensity
//! pair `0 < p(0) < p(1) < 1` before asking for the preferred treatment,
//! which makes truthful statement the strictly dominant strategy and so
//! turns stated types into true types. The three-arm design randomizes
//! individuals into forced treatment 0, forced treatment 1, or free
//! choice, and reads preferences off the choice arm.
//!
//! Both carry the class constants used by the regret bound: an outcome
//! bound `M` and an overlap constant `kappa` keeping every assignment
//! probability inside `[kappa, 1 - kappa]`.

use std::fmt;

use crate::error::{Error, Result};

/// A named way a design can fail validation.
#[derive(Debug, Clone, PartialEq)]
pub enum DesignViolation {
    /// The propensity pair is not strictly increasing in the stated type.
    NotStrictlyOrdered { p0: f64, p1: f64 },
    /// An assignment probability escapes `[kappa, 1 - kappa]`.
    OverlapViolated { name: &'static str, value: f64, kappa: f64 },
    /// A constant is outside its admissible range (probabilities in
    /// `(0, 1)`, `kappa` in `(0, 1/2)`, `M > 0`, group probabilities
    /// summing to one).
    BoundsViolated { reason: String },
}

impl fmt::Display for DesignViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotStrictlyOrdered { p0, p1 } => {
                write!(f, "propensities must satisfy 0 < p(0) < p(1) < 1, got p(0)={p0}, p(1)={p1}")
            }
            Self::OverlapViolated { name, value, kappa } => {
                write!(f, "{name}={value} escapes the overlap band [{kappa}, {}]", 1.0 - kappa)
            }
            Self::BoundsViolated { reason } => f.write_str(reason),
        }
    }
}

fn check_class_constants(m: f64, kappa: f64, violations: &mut Vec<DesignViolation>) {
    if !m.is_finite() || m <= 0.0 {
        violations.push(DesignViolation::BoundsViolated {
            reason: format!("outcome bound M must be finite and positive, got {m}"),
        });
    }
    if !kappa.is_finite() || kappa <= 0.0 || kappa >= 0.5 {
        violations.push(DesignViolation::BoundsViolated {
            reason: format!("kappa must lie in (0, 1/2), got {kappa}"),
        });
    }
}

/// Survey design: propensity pair, outcome bound, and overlap constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SspRctDesign {
    /// `P(D = 1 | S = 1)`.
    pub p1: f64,
    /// `P(D = 1 | S = 0)`.
    pub p0: f64,
    /// Outcome bound: every `|Y(d)|` is at most `m`.
    pub m: f64,
    /// Overlap constant in `(0, 1/2)`.
    pub kappa: f64,
}

impl SspRctDesign {
    /// Build and validate in one step.
    pub fn new(p0: f64, p1: f64, m: f64, kappa: f64) -> Result<Self> {
        let design = Self { p1, p0, m, kappa };
        design.validate()?;
        Ok(design)
    }

    /// All violations, empty when the design is admissible.
    pub fn violations(&self) -> Vec<DesignViolation> {
        let mut v = Vec::new();
        check_class_constants(self.m, self.kappa, &mut v);
        for (name, p) in [("p(0)", self.p0), ("p(1)", self.p1)] {
            if !p.is_finite() || p <= 0.0 || p >= 1.0 {
                v.push(DesignViolation::BoundsViolated {
                    reason: format!("{name} must lie strictly inside (0, 1), got {p}"),
                });
            }
        }
        // NaN propensities also land here; the bounds check above flags them.
        if self.p0 >= self.p1 || self.p0.is_nan() || self.p1.is_nan() {
            v.push(DesignViolation::NotStrictlyOrdered {
                p0: self.p0,
                p1: self.p1,
            });
        }
        if self.kappa.is_finite() && self.kappa > 0.0 && self.kappa < 0.5 {
            for (name, p) in [("p(0)", self.p0), ("p(1)", self.p1)] {
                if p.is_finite() && !(self.kappa <= p && p <= 1.0 - self.kappa) {
                    v.push(DesignViolation::OverlapViolated {
                        name,
                        value: p,
                        kappa: self.kappa,
                    });
                }
            }
        }
        v
    }

    /// Validate; an admissible design makes truthful statement strictly
    /// dominant, so simulated stated types always equal true types.
    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDesign(v))
        }
    }

    /// Propensity for a stated type given as a 0/1 bit.
    pub fn propensity(&self, stated_bit: u8) -> f64 {
        if stated_bit == 1 {
            self.p1
        } else {
            self.p0
        }
    }
}

/// Three-arm design: group probabilities, outcome bound, overlap constant.
///
/// Group 0 forces treatment 0, group 1 forces treatment 1, group 2 lets
/// individuals choose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrptDesign {
    /// `P(Z = z)` for z = 0, 1, 2; sums to one.
    pub q: [f64; 3],
    /// Outcome bound: every `|Y(d)|` is at most `m`.
    pub m: f64,
    /// Overlap constant in `(0, 1/2)`.
    pub kappa: f64,
}

impl DrptDesign {
    /// Build and validate in one step.
    pub fn new(q: [f64; 3], m: f64, kappa: f64) -> Result<Self> {
        let design = Self { q, m, kappa };
        design.validate()?;
        Ok(design)
    }

    /// All violations, empty when the design is admissible.
    pub fn violations(&self) -> Vec<DesignViolation> {
        let mut v = Vec::new();
        check_class_constants(self.m, self.kappa, &mut v);
        let sum: f64 = self.q.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > 1e-12 {
            v.push(DesignViolation::BoundsViolated {
                reason: format!("group probabilities must sum to 1, got {sum}"),
            });
        }
        if self.kappa.is_finite() && self.kappa > 0.0 && self.kappa < 0.5 {
            for (z, &qz) in self.q.iter().enumerate() {
                if !qz.is_finite() || !(self.kappa <= qz && qz <= 1.0 - self.kappa) {
                    v.push(DesignViolation::OverlapViolated {
                        name: ["q(0)", "q(1)", "q(2)"][z],
                        value: qz,
                        kappa: self.kappa,
                    });
                }
            }
        }
        v
    }

    /// Validate against the class constraints.
    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDesign(v))
        }
    }
}
