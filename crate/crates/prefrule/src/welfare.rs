//! Welfare under truthful and strategic preference statements.
//!
//! With determinants `beta1`, `beta0` and baseline `E[Y(0)]`, welfare when
//! true types are observed is linear in the rule:
//!
//! ```text
//! W_true(delta) = beta1 * delta(1) + beta0 * delta(0) + E[Y(0)]
//! ```
//!
//! When individuals state types strategically, the statement response
//! folds into the welfare function and produces three branches:
//!
//! ```text
//!                 | beta1*delta(1) + beta0*delta(0) + E[Y(0)]   if delta(1) > delta(0)
//! W_stated(delta) | (beta1+beta0)*d + E[Y(0)]                   if delta(1) == delta(0) == d
//!                 | beta1*delta(0) + beta0*delta(1) + E[Y(0)]   if delta(1) < delta(0)
//! ```
//!
//! The third branch swaps the roles of the two components: when lying is
//! the unique best response, every individual receives the lottery meant
//! for the opposite type. Crossing the diagonal changes the slope from
//! `beta1` to `beta0`, so `W_stated` is piecewise linear with a kink and
//! is not directionally differentiable there in general;
//! [`welfare_kink_probe`] measures the two one-sided slopes.

use crate::error::{Error, Result};
use crate::rule::Itr;

/// Population-level decision parameters.
///
/// `share1 = P(T = 1)`, the conditional effects `tau(1)` and `tau(0)`
/// (absent when the corresponding type has no mass, leaving that effect
/// undefined), the baseline `E[Y(0)]`, and the induced determinants
/// `beta1 = share1 * tau(1)` and `beta0 = (1 - share1) * tau(0)`, which
/// hold by construction. A type with no mass contributes `beta_t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    share1: f64,
    tau1: Option<f64>,
    tau0: Option<f64>,
    ey0: f64,
    beta1: f64,
    beta0: f64,
}

impl DerivedParams {
    /// Build from the primitive moments. Pass `None` for a conditional
    /// effect whose type has zero mass.
    pub fn new(share1: f64, tau1: Option<f64>, tau0: Option<f64>, ey0: f64) -> Result<Self> {
        if !share1.is_finite() {
            return Err(Error::NonFinite {
                name: "share1",
                value: share1,
            });
        }
        if !(0.0..=1.0).contains(&share1) {
            return Err(Error::ProbabilityOutOfRange {
                name: "share1",
                value: share1,
            });
        }
        for (name, value) in [("tau(1)", tau1), ("tau(0)", tau0)] {
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(Error::NonFinite { name, value: v });
                }
            }
        }
        if !ey0.is_finite() {
            return Err(Error::NonFinite {
                name: "E[Y(0)]",
                value: ey0,
            });
        }
        let beta1 = tau1.map_or(0.0, |t| share1 * t);
        let beta0 = tau0.map_or(0.0, |t| (1.0 - share1) * t);
        Ok(Self {
            share1,
            tau1,
            tau0,
            ey0,
            beta1,
            beta0,
        })
    }

    /// Build from both conditional effects.
    pub fn from_moments(share1: f64, tau1: f64, tau0: f64, ey0: f64) -> Result<Self> {
        Self::new(share1, Some(tau1), Some(tau0), ey0)
    }

    /// Build directly from the determinants, realized with equal type
    /// shares. Division by the 0.5 share is exact, so `beta1` and `beta0`
    /// are stored bit-for-bit as given.
    pub fn from_betas(beta1: f64, beta0: f64, ey0: f64) -> Result<Self> {
        for (name, value) in [("beta1", beta1), ("beta0", beta0)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        Self::new(0.5, Some(2.0 * beta1), Some(2.0 * beta0), ey0)
    }

    /// `P(T = 1)`.
    pub fn share1(&self) -> f64 {
        self.share1
    }

    /// `tau(1)`, absent when type 1 has no mass.
    pub fn tau1(&self) -> Option<f64> {
        self.tau1
    }

    /// `tau(0)`, absent when type 0 has no mass.
    pub fn tau0(&self) -> Option<f64> {
        self.tau0
    }

    /// Baseline expected outcome `E[Y(0)]`.
    pub fn ey0(&self) -> f64 {
        self.ey0
    }

    /// `beta1 = P(T = 1) * tau(1)`.
    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    /// `beta0 = P(T = 0) * tau(0)`.
    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// Average treatment effect `beta1 + beta0`.
    pub fn ate(&self) -> f64 {
        self.beta1 + self.beta0
    }
}

/// Welfare when true types are observed and the rule is applied to them.
pub fn welfare_true(params: &DerivedParams, itr: &Itr) -> f64 {
    params.beta1() * itr.delta1() + params.beta0() * itr.delta0() + params.ey0()
}

/// Welfare when individuals state types strategically under the announced
/// rule. See the module docs for the three branches.
pub fn welfare_stated(params: &DerivedParams, itr: &Itr) -> f64 {
    let (d1, d0) = (itr.delta1(), itr.delta0());
    if d1 > d0 {
        params.beta1() * d1 + params.beta0() * d0 + params.ey0()
    } else if d1 < d0 {
        params.beta1() * d0 + params.beta0() * d1 + params.ey0()
    } else {
        params.ate() * d1 + params.ey0()
    }
}

/// Exhaustive grid search for the best rule under strategic statements.
///
/// Evaluates [`welfare_stated`] on `{0, step, 2*step, ..., 1}^2` and
/// returns an argmax with its welfare. Ties break to the lexicographically
/// largest `(delta(1), delta(0))`, so the result is deterministic (and a
/// welfare-tied mirror pair like `(1,0)` vs `(0,1)` resolves to the
/// strategy-proof member). This is the slow independent check for the
/// closed-form rule; the grid gap bounds the welfare shortfall by
/// `(|beta1| + |beta0|) * step`.
pub fn grid_welfare_oracle(params: &DerivedParams, step: f64) -> Result<(Itr, f64)> {
    if !step.is_finite() || step <= 0.0 || step > 0.5 {
        return Err(Error::StepOutOfRange(step));
    }
    let mut points = Vec::new();
    let mut k = 0u64;
    loop {
        let v = k as f64 * step;
        if v >= 1.0 {
            break;
        }
        points.push(v);
        k += 1;
    }
    points.push(1.0);

    let mut best: Option<(Itr, f64)> = None;
    for &d1 in &points {
        for &d0 in &points {
            let itr = Itr::new(d1, d0).expect("grid points are probabilities");
            let w = welfare_stated(params, &itr);
            match &best {
                Some((_, w_best)) if w < *w_best => {}
                _ => best = Some((itr, w)),
            }
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// One-sided slopes of [`welfare_stated`] across a point on the diagonal.
///
/// Probes `base + alpha * direction` and `base - alpha * direction` for
/// each step size in `alphas` (all must be finite and positive) and
/// returns `(left_slope, right_slope)`, each averaged over the step
/// sizes. Welfare is piecewise linear, so for exact arithmetic every step
/// size yields the same slope; at `base = (0.5, 0.5)` with direction
/// `(1, 0)` the result is `(beta0, beta1)` — unequal slopes are the kink
/// left by the mass of individuals switching statements.
pub fn welfare_kink_probe(
    params: &DerivedParams,
    base: &Itr,
    direction: (f64, f64),
    alphas: &[f64],
) -> Result<(f64, f64)> {
    if base.delta1() != base.delta0() {
        return Err(Error::ProbeBaseNotTied(base.delta1(), base.delta0()));
    }
    if alphas.is_empty() {
        return Err(Error::EmptyProbe);
    }
    for &alpha in alphas {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::EmptyProbe);
        }
    }
    let probe = |alpha: f64| -> Result<Itr> {
        let d1 = base.delta1() + alpha * direction.0;
        let d0 = base.delta0() + alpha * direction.1;
        if !(0.0..=1.0).contains(&d1) || !(0.0..=1.0).contains(&d0) {
            return Err(Error::ProbeOutOfDomain {
                base1: base.delta1(),
                base0: base.delta0(),
                off1: alpha * direction.0,
                off0: alpha * direction.1,
            });
        }
        Itr::new(d1, d0)
    };

    let w_base = welfare_stated(params, base);
    let mut right_sum = 0.0;
    let mut left_sum = 0.0;
    for &alpha in alphas {
        let above = probe(alpha)?;
        let below = probe(-alpha)?;
        right_sum += (welfare_stated(params, &above) - w_base) / alpha;
        left_sum += (welfare_stated(params, &below) - w_base) / -alpha;
    }
    let n = alphas.len() as f64;
    Ok((left_sum / n, right_sum / n))
}
