//! Individualized treatment rules under strategically stated preferences.
//!
//! Two treatments, two strict preference types, and a policymaker who can
//! only ask individuals which treatment they prefer. Because everyone
//! sees the announced rule before answering, a rule that pays to lie gets
//! lied to — and the welfare-maximizing rule must price that in.
//!
//! The crate provides the full pipeline:
//!
//! - the decision kernel: lotteries, rules, strategy-proofness, welfare
//!   under truthful and strategic statements, the naive and optimal
//!   rules, and brute-force oracles ([`pref`], [`rule`], [`welfare`]);
//! - two experimental designs that identify the decision parameters even
//!   though true preferences are private — a survey design with strictly
//!   truth-rewarding propensities and a three-arm design with a
//!   free-choice arm — plus unbiased estimators and the plug-in rule
//!   ([`design`], [`data`], [`identify`]);
//! - reproducible trial simulation from discrete populations
//!   ([`simulate`], [`rng`]);
//! - a Monte Carlo harness verifying the finite-sample maximum-regret
//!   ceiling `2 e^(-1/2) M / (kappa sqrt n)` ([`regret`]);
//! - a weighted two-score application and plot-table export ([`sweep`]);
//! - JSON/CSV wire formats ([`io`]).
//!
//! ```
//! use prefrule::{optimal_itr, strategy_proofness, DerivedParams, StrategyProofness};
//!
//! // Treating against stated preference would pay here (beta1 < 0 < beta0),
//! // so the optimal rule refuses to individualize.
//! let params = DerivedParams::from_betas(-0.5, 0.4, 0.0).unwrap();
//! let rule = optimal_itr(&params);
//! assert_eq!((rule.delta1(), rule.delta0()), (0.0, 0.0));
//! assert_ne!(
//!     strategy_proofness(&rule),
//!     StrategyProofness::LyingStrictlyOptimal
//! );
//! ```

pub mod data;
pub mod design;
pub mod error;
pub mod identify;
pub mod io;
pub mod pref;
pub mod regret;
pub mod rng;
pub mod rule;
pub mod simulate;
pub mod sweep;
pub mod welfare;

pub use data::{DrptDataset, DrptRecord, Group, SspRctDataset, SspRctRecord, Treatment};
pub use design::{DesignViolation, DrptDesign, SspRctDesign};
pub use error::{Error, Result};
pub use identify::{
    estimate_beta_drpt, estimate_beta_ssprct, identify_drpt, identify_ssprct, str_decide,
    BetaEstimates, IdentifiedParams,
};
pub use pref::{
    lottery_prefers, stated_preference, Lottery, LotteryOrdering, PreferenceType, TiePolicy,
};
pub use regret::{
    adversarial_family, hoeffding_bound, oracle_welfare, run_regret_experiment,
    two_point_population, DesignSpec, DgpEntry, DgpFamily, RegretExperimentConfig, RegretReport,
    RegretRow, RegretSummary,
};
pub use rng::replication_rng;
pub use rule::{
    naive_itr, optimal_itr, strategy_proofness, DeterminantSigns, Itr, Sign, StrategyProofness,
};
pub use simulate::{
    sample_agent, simulate_drpt, simulate_drpt_with, simulate_ssprct, simulate_ssprct_with,
    AgentDraw, PopAtom, PopulationSpec,
};
pub use sweep::{
    sweep_weights, weighted_params, Breakpoint, BreakpointKind, SweepRow, SweepTable,
    TypeMapping, VocabMathEffects,
};
pub use welfare::{
    grid_welfare_oracle, welfare_kink_probe, welfare_stated, welfare_true, DerivedParams,
};

// Book chapters double as doctests, so the narrative guide and the crate
// cannot drift apart.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(dead_code)]
            struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(RulesAndIncentives, "../../../book/src/rules-and-incentives.md");
    chapter!(Welfare, "../../../book/src/welfare.md");
    chapter!(Experiments, "../../../book/src/experiments.md");
    chapter!(Regret, "../../../book/src/regret.md");
    chapter!(WeightedApplication, "../../../book/src/weighted-application.md");
    chapter!(Cli, "../../../book/src/cli.md");
}
