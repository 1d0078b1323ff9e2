//! Identification formulas, unbiased estimators, and the plug-in rule.
//!
//! Survey design: truthful statement makes `S = T`, so
//! `P(T = 1) = P(S = 1)` and `tau(t) = E[Y|D=1,S=t] - E[Y|D=0,S=t]`;
//! the inverse-propensity estimator of the determinants is
//!
//! ```text
//! beta_t^ = (1/n) * sum_i [ y_i 1{d_i=1, s_i=t} / p(t)
//!                         - y_i 1{d_i=0, s_i=t} / (1 - p(t)) ]
//! ```
//!
//! Three-arm design: the choice arm reveals preferences
//! (`P(T = 1) = P(D = 1 | Z = 2)`), and contrasting arm means gives the
//! complier effects `tau(1) = (E[Y|Z=2] - E[Y|Z=0]) / P(D=1|Z=2)` and
//! `tau(0) = (E[Y|Z=1] - E[Y|Z=2]) / P(D=0|Z=2)`. The intention-to-treat
//! contrasts estimate the determinants directly:
//!
//! ```text
//! beta_1^ = (1/n) * sum_i [ y_i 1{z_i=2}/q2 - y_i 1{z_i=0}/q0 ]
//! beta_0^ = (1/n) * sum_i [ y_i 1{z_i=1}/q1 - y_i 1{z_i=2}/q2 ]
//! ```
//!
//! Assignment probabilities are design constants, not estimated. Both
//! estimators fold records strictly in dataset order, so results are
//! bit-reproducible. Empty cells (no record with a given arm/type
//! combination) simply contribute nothing to the sums.

use crate::data::{DrptDataset, Group, SspRctDataset, Treatment};
use crate::error::{Error, Result};
use crate::rule::{optimal_itr, Itr};
use crate::welfare::DerivedParams;

/// Population quantities recovered by either design: the type-1 share and
/// the two conditional effects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentifiedParams {
    /// `P(T = 1)`.
    pub share1: f64,
    /// `tau(1)`.
    pub tau1: f64,
    /// `tau(0)`.
    pub tau0: f64,
}

/// Identification from survey-design population moments.
///
/// `m_dt` denotes `E[Y | D = d, S = t]`.
pub fn identify_ssprct(
    p_s1: f64,
    m11: f64,
    m01: f64,
    m10: f64,
    m00: f64,
) -> Result<IdentifiedParams> {
    if !p_s1.is_finite() || !(0.0..=1.0).contains(&p_s1) {
        return Err(Error::ProbabilityOutOfRange {
            name: "P(S=1)",
            value: p_s1,
        });
    }
    for (name, v) in [
        ("E[Y|D=1,S=1]", m11),
        ("E[Y|D=0,S=1]", m01),
        ("E[Y|D=1,S=0]", m10),
        ("E[Y|D=0,S=0]", m00),
    ] {
        if !v.is_finite() {
            return Err(Error::NonFinite { name, value: v });
        }
    }
    Ok(IdentifiedParams {
        share1: p_s1,
        tau1: m11 - m01,
        tau0: m10 - m00,
    })
}

/// Identification from three-arm population moments.
///
/// Errors when the choice arm is unanimous (`P(D=1|Z=2)` equal to 0 or
/// 1): one preference type is absent and its effect is unidentified.
pub fn identify_drpt(
    ey_z0: f64,
    ey_z1: f64,
    ey_z2: f64,
    p_d1_z2: f64,
) -> Result<IdentifiedParams> {
    if !p_d1_z2.is_finite() || !(0.0..=1.0).contains(&p_d1_z2) {
        return Err(Error::ProbabilityOutOfRange {
            name: "P(D=1|Z=2)",
            value: p_d1_z2,
        });
    }
    if p_d1_z2 == 0.0 || p_d1_z2 == 1.0 {
        return Err(Error::DegeneratePreference(p_d1_z2));
    }
    for (name, v) in [
        ("E[Y|Z=0]", ey_z0),
        ("E[Y|Z=1]", ey_z1),
        ("E[Y|Z=2]", ey_z2),
    ] {
        if !v.is_finite() {
            return Err(Error::NonFinite { name, value: v });
        }
    }
    Ok(IdentifiedParams {
        share1: p_d1_z2,
        tau1: (ey_z2 - ey_z0) / p_d1_z2,
        tau0: (ey_z1 - ey_z2) / (1.0 - p_d1_z2),
    })
}

/// Unbiased estimates of the two determinants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEstimates {
    pub beta1_hat: f64,
    pub beta0_hat: f64,
}

/// Per-record contribution to the survey-design estimator, before the
/// `1/n` average. Each lies in `[-M/kappa, M/kappa]`, which is what the
/// concentration argument behind the regret bound uses.
fn ssprct_term(y: f64, d: Treatment, s_bit: u8, design: &crate::design::SspRctDesign) -> (f64, f64) {
    let p = design.propensity(s_bit);
    let signed = match d {
        Treatment::One => y / p,
        Treatment::Zero => -y / (1.0 - p),
    };
    if s_bit == 1 {
        (signed, 0.0)
    } else {
        (0.0, signed)
    }
}

/// Inverse-propensity estimator of `(beta1, beta0)` from survey data.
pub fn estimate_beta_ssprct(data: &SspRctDataset) -> BetaEstimates {
    let mut sum1 = 0.0;
    let mut sum0 = 0.0;
    for r in data.records() {
        let (t1, t0) = ssprct_term(r.y, r.d, r.s.bit(), data.design());
        sum1 += t1;
        sum0 += t0;
    }
    let n = data.len() as f64;
    BetaEstimates {
        beta1_hat: sum1 / n,
        beta0_hat: sum0 / n,
    }
}

/// Intention-to-treat estimator of `(beta1, beta0)` from three-arm data.
pub fn estimate_beta_drpt(data: &DrptDataset) -> BetaEstimates {
    let [q0, q1, q2] = data.design().q;
    let mut sum1 = 0.0;
    let mut sum0 = 0.0;
    for r in data.records() {
        match r.z {
            Group::Forced0 => sum1 -= r.y / q0,
            Group::Forced1 => sum0 += r.y / q1,
            Group::Choice => {
                sum1 += r.y / q2;
                sum0 -= r.y / q2;
            }
        }
    }
    let n = data.len() as f64;
    BetaEstimates {
        beta1_hat: sum1 / n,
        beta0_hat: sum0 / n,
    }
}

/// The plug-in statistical treatment rule: substitute the estimates into
/// the optimal rule.
///
/// Ties (`beta1^ = beta0^ = 0`, or `beta1^ < 0 < beta0^` with zero sum)
/// resolve to `(0, 0)`, matching the fixed tie parameter of
/// [`optimal_itr`]. Sign tests are exact; with continuous outcomes exact
/// ties occur with probability zero.
pub fn str_decide(est: &BetaEstimates) -> Result<Itr> {
    let params = DerivedParams::from_betas(est.beta1_hat, est.beta0_hat, 0.0)?;
    Ok(optimal_itr(&params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{DrptRecord, SspRctRecord};
    use crate::design::{DrptDesign, SspRctDesign};
    use crate::pref::PreferenceType;

    fn survey_design() -> SspRctDesign {
        SspRctDesign::new(0.25, 0.5, 3.0, 0.25).unwrap()
    }

    fn ssprct_record(y: f64, d: u8, s: u8) -> SspRctRecord {
        SspRctRecord {
            y,
            d: Treatment::from_bit(d).unwrap(),
            s: PreferenceType::from_bit(s).unwrap(),
        }
    }

    fn drpt_record(y: f64, d: u8, z: u8) -> DrptRecord {
        DrptRecord {
            y,
            d: Treatment::from_bit(d).unwrap(),
            z: Group::from_index(z).unwrap(),
        }
    }

    #[test]
    fn survey_identification_contrasts_arm_means() {
        let id = identify_ssprct(0.62, 8.5, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(id.share1, 0.62);
        assert_eq!(id.tau1, 8.5);

        let id = identify_ssprct(0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!((id.tau1, id.tau0), (0.0, 0.0));

        let id = identify_ssprct(0.6, 2.0, 1.0, 0.0, 2.0).unwrap();
        assert_eq!((id.share1, id.tau1, id.tau0), (0.6, 1.0, -2.0));
    }

    #[test]
    fn three_arm_identification_rescales_itt_contrasts() {
        let id = identify_drpt(1.4, 1.2, 2.0, 0.6).unwrap();
        assert_eq!(id.share1, 0.6);
        assert!((id.tau1 - 1.0).abs() <= 1e-12);
        assert!((id.tau0 - -2.0).abs() <= 1e-12);

        let id = identify_drpt(1.0, 1.0, 1.0, 0.5).unwrap();
        assert_eq!((id.tau1, id.tau0), (0.0, 0.0));

        assert!(matches!(
            identify_drpt(0.0, 0.0, 0.0, 1.0),
            Err(Error::DegeneratePreference(_))
        ));
    }

    #[test]
    fn survey_estimator_matches_the_hand_example() {
        let records = vec![
            ssprct_record(2.0, 1, 1),
            ssprct_record(1.0, 0, 1),
            ssprct_record(3.0, 1, 0),
            ssprct_record(1.0, 0, 0),
        ];
        let data = SspRctDataset::new(survey_design(), records).unwrap();
        let est = estimate_beta_ssprct(&data);
        assert!((est.beta1_hat - 0.5).abs() <= 1e-12);
        assert!((est.beta0_hat - 8.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn three_arm_estimator_matches_the_hand_example() {
        let design = DrptDesign::new([1.0 / 3.0; 3], 3.0, 0.25).unwrap();
        let records = vec![
            drpt_record(3.0, 1, 2),
            drpt_record(1.0, 0, 0),
            drpt_record(2.0, 1, 1),
        ];
        let data = DrptDataset::new(design, records).unwrap();
        let est = estimate_beta_drpt(&data);
        assert!((est.beta1_hat - 2.0).abs() <= 1e-12);
        assert!((est.beta0_hat - -1.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_outcomes_estimate_zero() {
        let records = vec![ssprct_record(0.0, 1, 1), ssprct_record(0.0, 0, 0)];
        let data = SspRctDataset::new(survey_design(), records).unwrap();
        let est = estimate_beta_ssprct(&data);
        assert_eq!((est.beta1_hat, est.beta0_hat), (0.0, 0.0));
    }

    #[test]
    fn survey_summands_respect_the_concentration_range() {
        // A singleton dataset exposes the raw summand: n = 1.
        let design = survey_design();
        let bound = design.m / design.kappa;
        for y in [-3.0, -1.5, 0.0, 2.0, 3.0] {
            for d in [0u8, 1] {
                for s in [0u8, 1] {
                    let data =
                        SspRctDataset::new(design, vec![ssprct_record(y, d, s)]).unwrap();
                    let est = estimate_beta_ssprct(&data);
                    assert!(est.beta1_hat.abs() <= bound + 1e-12);
                    assert!(est.beta0_hat.abs() <= bound + 1e-12);
                }
            }
        }
    }

    #[test]
    fn plug_in_rule_follows_the_case_table() {
        let dec = |b1, b0| {
            str_decide(&BetaEstimates {
                beta1_hat: b1,
                beta0_hat: b0,
            })
            .unwrap()
        };
        assert_eq!(dec(0.5, -0.3).to_string(), "(1,0)");
        assert_eq!(dec(0.0, 0.0).to_string(), "(0,0)");
        assert_eq!(dec(-1.0, 2.0).to_string(), "(1,1)");
        // The boundary tie resolves to (0,0).
        assert_eq!(dec(-1.0, 1.0).to_string(), "(0,0)");

        assert!(str_decide(&BetaEstimates {
            beta1_hat: f64::NAN,
            beta0_hat: 0.0,
        })
        .is_err());
    }
}
