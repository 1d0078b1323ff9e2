//! Monte Carlo regret harness for the plug-in rules.
//!
//! Regret of a data-dependent rule is the gap between the best achievable
//! welfare under strategic statements and the welfare its decision
//! actually attains, averaged over datasets. Over every data-generating
//! process admitted by a design class with outcome bound `M` and overlap
//! `kappa`, the maximum regret of the plug-in rule obeys the
//! finite-sample ceiling
//!
//! ```text
//! 2 e^(-1/2) M / (kappa * sqrt(n))        for n >= kappa^-2,
//! ```
//!
//! which this module verifies empirically: simulate replications, decide,
//! measure regret against the closed-form oracle, and compare the worst
//! family member against the bound with a Monte Carlo margin.
//!
//! The bound's derivation splits parameter space into three regions —
//! individualize (`beta1 > 0 > beta0`), uniform treatment 1 (positive
//! average effect without the individualizing signs), and uniform
//! treatment 0 — and the sign-flip probabilities that drive regret are
//! largest when determinants sit at scale `M / (kappa sqrt(n))`.
//! [`adversarial_family`] populates all three regions on a grid around
//! that scale.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{DrptDesign, SspRctDesign};
use crate::error::{Error, Result};
use crate::identify::{estimate_beta_drpt, estimate_beta_ssprct, str_decide};
use crate::pref::PreferenceType;
use crate::rng::replication_rng;
use crate::simulate::{simulate_drpt_with, simulate_ssprct_with, PopAtom, PopulationSpec};
use crate::welfare::{welfare_stated, DerivedParams};

/// Best achievable welfare under strategic statements, in closed form.
///
/// Three cases: `beta1 + E[Y(0)]` when individualizing is optimal
/// (`beta1 > 0` and `beta0 < 0`); `beta1 + beta0 + E[Y(0)]` when a
/// uniform treatment 1 is (`beta1 <= 0` or `beta0 >= 0`, positive sum);
/// `E[Y(0)]` otherwise. Kept independent of the rule table so the two
/// routes can check each other.
pub fn oracle_welfare(params: &DerivedParams) -> f64 {
    let (b1, b0) = (params.beta1(), params.beta0());
    if b1 > 0.0 && b0 < 0.0 {
        b1 + params.ey0()
    } else if params.ate() > 0.0 {
        params.ate() + params.ey0()
    } else {
        params.ey0()
    }
}

/// The finite-sample maximum-regret ceiling `2 e^(-1/2) M / (kappa sqrt n)`.
///
/// Only valid for `n >= kappa^-2`; smaller samples are an error.
pub fn hoeffding_bound(m: f64, kappa: f64, n: usize) -> Result<f64> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "outcome bound M must be finite and positive, got {m}"
        )));
    }
    if !kappa.is_finite() || kappa <= 0.0 || kappa >= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "kappa must lie in (0, 1/2), got {kappa}"
        )));
    }
    let min_n = kappa.powi(-2);
    if (n as f64) * kappa * kappa < 1.0 {
        return Err(Error::BoundOutOfValidity { n, min_n });
    }
    Ok(2.0 * (-0.5f64).exp() * m / (kappa * (n as f64).sqrt()))
}

/// Which design the experiment simulates and estimates under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignSpec {
    SspRct(SspRctDesign),
    Drpt(DrptDesign),
}

impl DesignSpec {
    /// Outcome bound of the class.
    pub fn m(&self) -> f64 {
        match self {
            Self::SspRct(d) => d.m,
            Self::Drpt(d) => d.m,
        }
    }

    /// Overlap constant of the class.
    pub fn kappa(&self) -> f64 {
        match self {
            Self::SspRct(d) => d.kappa,
            Self::Drpt(d) => d.kappa,
        }
    }

    /// Validate the underlying design.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::SspRct(d) => d.validate(),
            Self::Drpt(d) => d.validate(),
        }
    }
}

/// A named data-generating process.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpEntry {
    pub id: String,
    pub pop: PopulationSpec,
}

/// The family of data-generating processes to sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum DgpFamily {
    /// An explicit list of populations.
    List(Vec<DgpEntry>),
    /// The three-region adversarial grid, regenerated per sample size
    /// from the design's `(M, kappa)`.
    Adversarial,
}

/// Full experiment description: design, family, sample sizes,
/// replications, root seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretExperimentConfig {
    pub design: DesignSpec,
    pub dgps: DgpFamily,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
}

impl RegretExperimentConfig {
    fn validate(&self) -> Result<()> {
        self.design.validate()?;
        if self.replications == 0 {
            return Err(Error::InvalidArgument(
                "replication count must be at least 1".into(),
            ));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one sample size is required".into(),
            ));
        }
        for &n in &self.sample_sizes {
            // Bound validity region; also rejects n = 0.
            hoeffding_bound(self.design.m(), self.design.kappa(), n)?;
        }
        if let DgpFamily::List(entries) = &self.dgps {
            if entries.is_empty() {
                return Err(Error::InvalidArgument(
                    "the DGP family must be nonempty".into(),
                ));
            }
            for e in entries {
                if e.pop.m() > self.design.m() {
                    return Err(Error::InvalidArgument(format!(
                        "population '{}' declares M = {} above the design class bound {}",
                        e.id,
                        e.pop.m(),
                        self.design.m()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Mean regret of one `(DGP, n)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretRow {
    pub dgp_id: String,
    pub n: usize,
    pub mean_regret: f64,
    pub se: f64,
    pub replications: usize,
}

/// Worst cell per sample size, against the bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSummary {
    pub n: usize,
    pub max_mean_regret: f64,
    /// DGP attaining the maximum.
    pub worst_dgp: String,
    /// Monte Carlo standard error of the maximizing cell.
    pub se_at_max: f64,
    pub bound: f64,
    /// `max_mean_regret <= bound + 3 * se_at_max`.
    pub pass: bool,
}

/// Full report: one row per `(DGP, n)`, one summary per `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub rows: Vec<RegretRow>,
    pub summaries: Vec<RegretSummary>,
}

impl RegretReport {
    /// Flat CSV with columns `dgp_id,n,mean_regret,se,bound,pass`; the
    /// per-row pass compares that row against the bound with its own
    /// three-standard-error margin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dgp_id,n,mean_regret,se,bound,pass\n");
        for row in &self.rows {
            let bound = self
                .summaries
                .iter()
                .find(|s| s.n == row.n)
                .map(|s| s.bound)
                .unwrap_or(f64::NAN);
            let pass = row.mean_regret <= bound + 3.0 * row.se;
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.dgp_id, row.n, row.mean_regret, row.se, bound, pass
            ));
        }
        out
    }
}

/// Two-atom population realizing the requested determinants with equal
/// type shares: the type-`t` atom carries outcome gap `2 * beta_t`,
/// centered so both potential outcomes stay within `M`.
///
/// Halving and doubling are exact, so the population's recomputed
/// determinants equal the request bit-for-bit. Requires `|beta_t| <= M`,
/// the realizable range under equal shares.
pub fn two_point_population(beta1: f64, beta0: f64, m: f64) -> Result<PopulationSpec> {
    for (name, b) in [("beta1", beta1), ("beta0", beta0)] {
        if b.abs() > m {
            return Err(Error::InvalidArgument(format!(
                "{name} = {b} is not realizable under equal shares with M = {m}"
            )));
        }
    }
    PopulationSpec::new(
        vec![
            PopAtom {
                y0: -beta1,
                y1: beta1,
                t: PreferenceType::Prefers1,
                w: 0.5,
            },
            PopAtom {
                y0: -beta0,
                y1: beta0,
                t: PreferenceType::Prefers0,
                w: 0.5,
            },
        ],
        m,
    )
}

/// The adversarial grid for sample size `n`: determinant pairs tracing
/// the three regions of the bound's case split, with magnitudes spanning
/// `[0, min(2M/(kappa sqrt n), M)]` around the worst-case scale
/// `M/(kappa sqrt n)`. The `M` cap is the realizable range under equal
/// type shares; the worst-case scale always stays inside it for
/// `n >= kappa^-2`.
pub fn adversarial_family(m: f64, kappa: f64, n: usize) -> Vec<DgpEntry> {
    const STEPS: usize = 5;
    let span = (2.0 * m / (kappa * (n as f64).sqrt())).min(m);
    let mags: Vec<f64> = (1..=STEPS).map(|j| span * j as f64 / STEPS as f64).collect();
    let with_zero: Vec<f64> = std::iter::once(0.0).chain(mags.iter().copied()).collect();

    let mut family = Vec::new();
    let mut push = |label: &str, i: usize, j: usize, beta1: f64, beta0: f64| {
        let pop = two_point_population(beta1, beta0, m)
            .expect("grid magnitudes are clamped to the realizable range");
        // Ids stay comma-free so the flat report CSV needs no quoting.
        family.push(DgpEntry {
            id: format!("{label}[{i}.{j}]:b1={beta1:.6};b0={beta0:.6}"),
            pop,
        });
    };

    // Individualize region: beta1 > 0 > beta0.
    for (i, &a) in mags.iter().enumerate() {
        for (j, &b) in mags.iter().enumerate() {
            push("indiv", i, j, a, -b);
        }
    }
    // Uniform-treat-1 region: positive sum without the individualizing
    // signs. Parameterized by (sum, beta0) with beta1 = sum - beta0 <= sum.
    for (i, &s) in mags.iter().enumerate() {
        for (j, &b) in with_zero.iter().enumerate() {
            push("unif1", i, j, s - b, b);
        }
    }
    // Uniform-treat-0 region: nonpositive sum. Includes the boundary
    // pairs beta1 = -beta0 (sum exactly zero, the tie convention) and the
    // all-negative quadrant.
    for (i, s) in std::iter::once(0.0).chain(mags.iter().map(|&v| -v)).enumerate() {
        for (j, &b) in with_zero.iter().enumerate() {
            let beta1 = s - b;
            if beta1 >= -m {
                push("unif0", i, j, beta1, b);
            }
        }
    }
    for (i, &a) in mags.iter().enumerate() {
        for (j, &b) in mags.iter().enumerate() {
            push("allneg", i, j, -a, -b);
        }
    }
    family
}

/// Run the experiment: for each `(DGP, n)` simulate, estimate, decide,
/// and measure regret against the closed-form oracle; summarize each
/// sample size by its worst family member against the bound.
///
/// Replications run in parallel on independent counter-derived streams
/// and reduce in replication order, so the report is byte-deterministic
/// for a given config. Any simulation or design error aborts the run;
/// partial reports are never produced.
pub fn run_regret_experiment(config: &RegretExperimentConfig) -> Result<RegretReport> {
    config.validate()?;
    let reps = config.replications;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut stream_base = 0u64;

    for &n in &config.sample_sizes {
        let family: Vec<DgpEntry> = match &config.dgps {
            DgpFamily::List(entries) => entries.clone(),
            DgpFamily::Adversarial => {
                adversarial_family(config.design.m(), config.design.kappa(), n)
            }
        };
        let bound = hoeffding_bound(config.design.m(), config.design.kappa(), n)?;

        let mut best: Option<RegretSummary> = None;
        for entry in &family {
            let params = entry.pop.derived_params();
            let w_star = oracle_welfare(&params);
            let base = stream_base;
            let regrets: Vec<f64> = (0..reps)
                .into_par_iter()
                .map(|rep| -> Result<f64> {
                    let mut rng = replication_rng(config.seed, base + rep as u64);
                    let decision = match &config.design {
                        DesignSpec::SspRct(d) => {
                            let data = simulate_ssprct_with(&entry.pop, d, n, &mut rng)?;
                            str_decide(&estimate_beta_ssprct(&data))?
                        }
                        DesignSpec::Drpt(d) => {
                            let data = simulate_drpt_with(&entry.pop, d, n, &mut rng)?;
                            str_decide(&estimate_beta_drpt(&data))?
                        }
                    };
                    let regret = w_star - welfare_stated(&params, &decision);
                    debug_assert!(regret >= -1e-12, "oracle welfare is a maximum");
                    Ok(regret)
                })
                .collect::<Result<Vec<f64>>>()?;
            stream_base += reps as u64;

            // Reduce strictly in replication order.
            let mean = regrets.iter().sum::<f64>() / reps as f64;
            let var = if reps > 1 {
                regrets.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0)
            } else {
                0.0
            };
            let se = (var / reps as f64).sqrt();

            rows.push(RegretRow {
                dgp_id: entry.id.clone(),
                n,
                mean_regret: mean,
                se,
                replications: reps,
            });
            let better = match &best {
                Some(s) => mean > s.max_mean_regret,
                None => true,
            };
            if better {
                best = Some(RegretSummary {
                    n,
                    max_mean_regret: mean,
                    worst_dgp: entry.id.clone(),
                    se_at_max: se,
                    bound,
                    pass: mean <= bound + 3.0 * se,
                });
            }
        }
        summaries.push(best.expect("family is nonempty"));
    }

    Ok(RegretReport { rows, summaries })
}
