//! Weighted two-score application: sweep the outcome weight and track the
//! recommended rule.
//!
//! Inputs are summary estimates from a two-treatment study with two
//! scored outcomes (vocabulary and mathematics test scores): the share
//! preferring each training and, per preference group, the average effect
//! of vocabulary training relative to mathematics training on each score.
//! The analysis outcome blends the scores,
//!
//! ```text
//! Y(d) = (1 - w) * V(d) + w * Mth(d),        w in [0, 1],
//! ```
//!
//! so each group's effect — and hence each determinant — is linear in
//! `w`. Regime changes are the zero crossings of `beta1(w)`, `beta0(w)`,
//! and their sum, and are computed analytically; the grid exists only for
//! plotting. Which training counts as treatment 1 is a mapping switch,
//! since relabeling flips every determinant's sign.

use crate::error::{Error, Result};
use crate::rule::{optimal_itr, DeterminantSigns};
use crate::welfare::DerivedParams;

/// Summary estimates from the two-score study. Standard errors are
/// carried as metadata only; decisions never read them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VocabMathEffects {
    /// Share preferring vocabulary training.
    pub share_v: f64,
    /// Effect of vocabulary training on the vocabulary score, among those
    /// preferring vocabulary training.
    pub cate_v_on_vocab: f64,
    /// Same group, mathematics score.
    pub cate_v_on_math: f64,
    /// Effect on the vocabulary score among those preferring mathematics
    /// training.
    pub cate_m_on_vocab: f64,
    /// Same group, mathematics score.
    pub cate_m_on_math: f64,
    pub se_v_on_vocab: Option<f64>,
    pub se_v_on_math: Option<f64>,
    pub se_m_on_vocab: Option<f64>,
    pub se_m_on_math: Option<f64>,
}

impl VocabMathEffects {
    /// The bundled reference estimates: 62% prefer vocabulary training;
    /// vocabulary-preferrers gain 8.5 vocabulary points and lose 3.4
    /// mathematics points from vocabulary training, mathematics-preferrers
    /// gain 7.4 and lose 5.5.
    pub fn bundled() -> Self {
        Self {
            share_v: 0.62,
            cate_v_on_vocab: 8.5,
            cate_v_on_math: -3.4,
            cate_m_on_vocab: 7.4,
            cate_m_on_math: -5.5,
            se_v_on_vocab: Some(0.6),
            se_v_on_math: Some(0.6),
            se_m_on_vocab: Some(1.1),
            se_m_on_math: Some(1.2),
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.share_v.is_finite() || !(0.0..=1.0).contains(&self.share_v) {
            return Err(Error::ProbabilityOutOfRange {
                name: "share_v",
                value: self.share_v,
            });
        }
        for (name, v) in [
            ("cate_v_on_vocab", self.cate_v_on_vocab),
            ("cate_v_on_math", self.cate_v_on_math),
            ("cate_m_on_vocab", self.cate_m_on_vocab),
            ("cate_m_on_math", self.cate_m_on_math),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
        }
        Ok(())
    }
}

/// Which training plays the role of treatment 1 (and so which preference
/// group is type 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TypeMapping {
    /// Vocabulary training is treatment 1.
    #[default]
    VocabAsType1,
    /// Mathematics training is treatment 1; every effect flips sign.
    MathAsType1,
}

/// Per-group effect coefficients `tau(w) = a + (b - a) w` under a mapping:
/// `(share1, a1, b1, a0, b0)` with `a` the weight-0 (vocabulary score)
/// effect and `b` the weight-1 (mathematics score) effect.
fn mapped_coefficients(eff: &VocabMathEffects, mapping: TypeMapping) -> (f64, f64, f64, f64, f64) {
    match mapping {
        TypeMapping::VocabAsType1 => (
            eff.share_v,
            eff.cate_v_on_vocab,
            eff.cate_v_on_math,
            eff.cate_m_on_vocab,
            eff.cate_m_on_math,
        ),
        TypeMapping::MathAsType1 => (
            1.0 - eff.share_v,
            -eff.cate_m_on_vocab,
            -eff.cate_m_on_math,
            -eff.cate_v_on_vocab,
            -eff.cate_v_on_math,
        ),
    }
}

/// Decision parameters at one weight. The baseline `E[Y(0)]` is set to 0:
/// the summary table does not report baseline means, and decisions depend
/// only on the determinants, so the choice shifts welfare levels without
/// ever changing a rule.
pub fn weighted_params(
    eff: &VocabMathEffects,
    w: f64,
    mapping: TypeMapping,
) -> Result<DerivedParams> {
    eff.validate()?;
    if !w.is_finite() || !(0.0..=1.0).contains(&w) {
        return Err(Error::ProbabilityOutOfRange {
            name: "weight",
            value: w,
        });
    }
    let (share1, a1, b1, a0, b0) = mapped_coefficients(eff, mapping);
    let tau1 = (1.0 - w) * a1 + w * b1;
    let tau0 = (1.0 - w) * a0 + w * b0;
    DerivedParams::from_moments(share1, tau1, tau0, 0.0)
}

/// Which determinant crosses zero at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakpointKind {
    Beta1Zero,
    Beta0Zero,
    SumZero,
}

/// An analytic zero crossing of one determinant inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub kind: BreakpointKind,
    pub w: f64,
}

/// One grid row of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub w: f64,
    pub beta1: f64,
    pub beta0: f64,
    pub sum: f64,
    /// Sign-pattern label of the rule case at this weight.
    pub regime: String,
    pub delta1: f64,
    pub delta0: f64,
}

/// Sweep output: grid rows sorted by weight, plus the analytic
/// breakpoints sorted by weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub breakpoints: Vec<Breakpoint>,
}

impl SweepTable {
    /// Plot-table CSV with columns `w,beta1,beta0,sum,regime,delta1,delta0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,beta1,beta0,sum,regime,delta1,delta0\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.w, r.beta1, r.beta0, r.sum, r.regime, r.delta1, r.delta0
            ));
        }
        out
    }
}

/// Root of the linear determinant `share * (a + (b - a) w)` in `[0, 1]`,
/// if any. The share factor cancels.
fn linear_root_in_unit(a: f64, b: f64) -> Option<f64> {
    let slope = b - a;
    if slope == 0.0 {
        return None;
    }
    let w = a / (a - b);
    (0.0..=1.0).contains(&w).then_some(w)
}

/// Evaluate the sweep on an even grid of `grid >= 2` weights and attach
/// the analytic breakpoints.
pub fn sweep_weights(
    eff: &VocabMathEffects,
    grid: usize,
    mapping: TypeMapping,
) -> Result<SweepTable> {
    eff.validate()?;
    if grid < 2 {
        return Err(Error::InvalidArgument(
            "sweep grid needs at least 2 points".into(),
        ));
    }

    let mut rows = Vec::with_capacity(grid);
    for j in 0..grid {
        let w = j as f64 / (grid - 1) as f64;
        let params = weighted_params(eff, w, mapping)?;
        let rule = optimal_itr(&params);
        rows.push(SweepRow {
            w,
            beta1: params.beta1(),
            beta0: params.beta0(),
            sum: params.ate(),
            regime: DeterminantSigns::of(&params).label(),
            delta1: rule.delta1(),
            delta0: rule.delta0(),
        });
    }

    let (share1, a1, b1, a0, b0) = mapped_coefficients(eff, mapping);
    let share0 = 1.0 - share1;
    let mut breakpoints = Vec::new();
    if let Some(w) = linear_root_in_unit(a1, b1) {
        breakpoints.push(Breakpoint {
            kind: BreakpointKind::Beta1Zero,
            w,
        });
    }
    if let Some(w) = linear_root_in_unit(a0, b0) {
        breakpoints.push(Breakpoint {
            kind: BreakpointKind::Beta0Zero,
            w,
        });
    }
    let sum_a = share1 * a1 + share0 * a0;
    let sum_b = share1 * b1 + share0 * b0;
    if let Some(w) = linear_root_in_unit(sum_a, sum_b) {
        breakpoints.push(Breakpoint {
            kind: BreakpointKind::SumZero,
            w,
        });
    }
    breakpoints.sort_by(|x, y| x.w.total_cmp(&y.w));

    Ok(SweepTable { rows, breakpoints })
}
