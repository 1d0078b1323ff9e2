//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see them live).
//!
//! Every tolerance is pinned here, in code. Monte Carlo checks use fixed
//! seeds and three-standard-error margins.

use std::sync::LazyLock;
use std::time::Instant;

use rayon::prelude::*;

use prefrule::{
    estimate_beta_drpt, estimate_beta_ssprct, grid_welfare_oracle, naive_itr,
    optimal_itr, run_regret_experiment, simulate_drpt_with, simulate_ssprct_with,
    simulate_ssprct, sweep_weights, welfare_kink_probe, welfare_stated, BetaEstimates,
    DerivedParams, DesignSpec, DgpFamily, DrptDesign, Itr, PopAtom, PopulationSpec,
    PreferenceType, RegretExperimentConfig, RegretReport, SspRctDesign, Treatment, TypeMapping,
    VocabMathEffects, replication_rng, str_decide, identify_drpt, identify_ssprct,
};
use rand_core::RngCore;

fn pass(criterion: u32, detail: &str) {
    println!("[acceptance] criterion {criterion}: PASS — {detail}");
}

fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// 10^4 determinant pairs drawn uniformly from [-1, 1]^2, shared by
/// criteria 1 and 2.
static DRAWS: LazyLock<Vec<(f64, f64)>> = LazyLock::new(|| {
    let mut rng = replication_rng(0xacce97, 0);
    (0..10_000)
        .map(|_| (2.0 * unit(&mut rng) - 1.0, 2.0 * unit(&mut rng) - 1.0))
        .collect()
});

#[test]
fn c01_optimal_rule_dominates_the_grid_oracle() {
    let start = Instant::now();
    let worst_gap = DRAWS
        .par_iter()
        .map(|&(b1, b0)| {
            let params = DerivedParams::from_betas(b1, b0, 0.0).unwrap();
            let at_optimum = welfare_stated(&params, &optimal_itr(&params));
            let (_, grid_best) = grid_welfare_oracle(&params, 0.01).unwrap();
            grid_best - at_optimum
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let elapsed = start.elapsed();
    assert!(
        worst_gap <= 0.02,
        "grid oracle beat the closed-form rule by {worst_gap}"
    );
    assert!(
        elapsed.as_secs_f64() <= 60.0,
        "criterion 1 overran its budget: {elapsed:?}"
    );
    pass(
        1,
        &format!(
            "10^4 draws, worst (grid - optimum) gap {worst_gap:.3e} <= 0.02, {:.1}s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c02_optimum_is_strategy_proof_and_strict_only_when_individualizing() {
    let mut strict_count = 0usize;
    for &(b1, b0) in DRAWS.iter() {
        let params = DerivedParams::from_betas(b1, b0, 0.0).unwrap();
        let rule = optimal_itr(&params);
        assert!(
            rule.delta1() >= rule.delta0(),
            "rule rewards lying at betas ({b1}, {b0})"
        );
        let strict = rule.delta1() > rule.delta0();
        assert_eq!(
            strict,
            b1 > 0.0 && b0 < 0.0,
            "strictness mismatch at betas ({b1}, {b0})"
        );
        strict_count += strict as usize;
    }
    pass(
        2,
        &format!(
            "delta(1) >= delta(0) on 100% of 10^4 draws; strict on {strict_count} \
             (exactly the beta1>0>beta0 draws)"
        ),
    );
}

/// One case-table row: determinants, the matched tie value for the naive
/// rule, and the expected (naive, optimal) entries.
type TableRow = ((f64, f64), f64, (f64, f64), (f64, f64));

#[test]
fn c03_case_table_reproduction() {
    let rows: [TableRow; 11] = [
        ((1.0, 1.0), 0.0, (1.0, 1.0), (1.0, 1.0)),
        ((1.0, 0.0), 1.0, (1.0, 1.0), (1.0, 1.0)),
        ((1.0, -1.0), 0.0, (1.0, 0.0), (1.0, 0.0)),
        ((0.0, 1.0), 1.0, (1.0, 1.0), (1.0, 1.0)),
        ((0.0, 0.0), 0.0, (0.0, 0.0), (0.0, 0.0)),
        ((0.0, -1.0), 0.0, (0.0, 0.0), (0.0, 0.0)),
        ((-2.0, 1.0), 0.0, (0.0, 1.0), (0.0, 0.0)),
        ((-1.0, 1.0), 0.0, (0.0, 1.0), (0.0, 0.0)),
        ((-1.0, 2.0), 0.0, (0.0, 1.0), (1.0, 1.0)),
        ((-1.0, 0.0), 0.0, (0.0, 0.0), (0.0, 0.0)),
        ((-1.0, -1.0), 0.0, (0.0, 0.0), (0.0, 0.0)),
    ];
    for (i, ((b1, b0), eps, want_naive, want_optimal)) in rows.into_iter().enumerate() {
        let params = DerivedParams::from_betas(b1, b0, 0.0).unwrap();
        let naive = naive_itr(&params, eps).unwrap();
        let optimal = optimal_itr(&params);
        assert_eq!(
            (naive.delta1(), naive.delta0()),
            want_naive,
            "row {}: naive mismatch",
            i + 1
        );
        assert_eq!(
            (optimal.delta1(), optimal.delta0()),
            want_optimal,
            "row {}: optimal mismatch",
            i + 1
        );
    }
    pass(3, "all 11 rows match the naive and optimal columns exactly");
}

/// The two-atom population with determinants (0.6, -0.8) and bound 2.
fn benchmark_population() -> PopulationSpec {
    PopulationSpec::new(
        vec![
            PopAtom {
                y0: 1.0,
                y1: 2.0,
                t: PreferenceType::Prefers1,
                w: 0.6,
            },
            PopAtom {
                y0: 2.0,
                y1: 0.0,
                t: PreferenceType::Prefers0,
                w: 0.4,
            },
        ],
        2.0,
    )
    .unwrap()
}

#[test]
fn c04_estimators_are_unbiased() {
    let start = Instant::now();
    let pop = benchmark_population();
    let truth = pop.derived_params();
    assert!((truth.beta1() - 0.6).abs() <= 1e-12);
    assert!((truth.beta0() - -0.8).abs() <= 1e-12);

    let survey = SspRctDesign::new(0.25, 0.5, 2.0, 0.25).unwrap();
    let three_arm = DrptDesign::new([1.0 / 3.0; 3], 2.0, 0.25).unwrap();
    let reps = 100_000usize;
    let n = 50usize;

    let mut details = Vec::new();
    for (label, seed) in [("ssprct", 0x5eed_0401u64), ("drpt", 0x5eed_0402u64)] {
        let estimates: Vec<(f64, f64)> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng = replication_rng(seed, rep as u64);
                let est = if label == "ssprct" {
                    let data = simulate_ssprct_with(&pop, &survey, n, &mut rng).unwrap();
                    estimate_beta_ssprct(&data)
                } else {
                    let data = simulate_drpt_with(&pop, &three_arm, n, &mut rng).unwrap();
                    estimate_beta_drpt(&data)
                };
                (est.beta1_hat, est.beta0_hat)
            })
            .collect();

        for (name, truth_beta, pick) in [
            ("beta1", truth.beta1(), 0usize),
            ("beta0", truth.beta0(), 1usize),
        ] {
            let values: Vec<f64> = estimates
                .iter()
                .map(|&(b1, b0)| if pick == 0 { b1 } else { b0 })
                .collect();
            let mean = values.iter().sum::<f64>() / reps as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
            let se = (var / reps as f64).sqrt();
            let gap = (mean - truth_beta).abs();
            assert!(
                gap <= 3.0 * se,
                "{label} {name}: |{mean} - {truth_beta}| = {gap} > 3 * {se}"
            );
            details.push(format!("{label} {name} gap {gap:.2e} <= 3se {:.2e}", 3.0 * se));
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() <= 120.0,
        "criterion 4 overran its budget: {elapsed:?}"
    );
    pass(
        4,
        &format!("R=10^5, n=50: {}; {:.1}s", details.join("; "), elapsed.as_secs_f64()),
    );
}

/// Random discrete population with both types present.
fn random_population(rng: &mut impl RngCore, m: f64) -> PopulationSpec {
    let n_type1 = 1 + (rng.next_u64() % 3) as usize;
    let n_type0 = 1 + (rng.next_u64() % 3) as usize;
    let total = n_type1 + n_type0;
    let raw: Vec<f64> = (0..total).map(|_| 0.05 + unit(rng)).collect();
    let sum: f64 = raw.iter().sum();
    let mut atoms = Vec::with_capacity(total);
    let mut acc = 0.0;
    for (i, r) in raw.iter().enumerate() {
        let w = if i + 1 == total { 1.0 - acc } else { r / sum };
        acc += w;
        atoms.push(PopAtom {
            y0: m * (2.0 * unit(rng) - 1.0),
            y1: m * (2.0 * unit(rng) - 1.0),
            t: if i < n_type1 {
                PreferenceType::Prefers1
            } else {
                PreferenceType::Prefers0
            },
            w,
        });
    }
    PopulationSpec::new(atoms, m).unwrap()
}

#[test]
fn c05_identification_round_trip() {
    let mut rng = replication_rng(0x0505, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let pop = random_population(&mut rng, 2.0);
        let truth = pop.derived_params();

        // Analytic survey moments.
        let (mut w1, mut s11, mut s01, mut s10, mut s00) = (0.0, 0.0, 0.0, 0.0, 0.0);
        // Analytic three-arm moments.
        let (mut ey0, mut ey1, mut ey2) = (0.0, 0.0, 0.0);
        for a in pop.atoms() {
            ey0 += a.w * a.y0;
            ey1 += a.w * a.y1;
            match a.t {
                PreferenceType::Prefers1 => {
                    w1 += a.w;
                    s11 += a.w * a.y1;
                    s01 += a.w * a.y0;
                    ey2 += a.w * a.y1;
                }
                PreferenceType::Prefers0 => {
                    s10 += a.w * a.y1;
                    s00 += a.w * a.y0;
                    ey2 += a.w * a.y0;
                }
            }
        }
        let w0 = 1.0 - w1;
        let survey = identify_ssprct(w1, s11 / w1, s01 / w1, s10 / w0, s00 / w0).unwrap();
        let three = identify_drpt(ey0, ey1, ey2, w1).unwrap();

        for (got, want) in [
            (survey.share1, truth.share1()),
            (survey.tau1, truth.tau1().unwrap()),
            (survey.tau0, truth.tau0().unwrap()),
            (three.share1, truth.share1()),
            (three.tau1, truth.tau1().unwrap()),
            (three.tau0, truth.tau0().unwrap()),
            (survey.tau1, three.tau1),
            (survey.tau0, three.tau0),
        ] {
            let gap = (got - want).abs();
            worst = worst.max(gap);
            assert!(gap <= 1e-12, "round-trip gap {gap}");
        }
    }
    pass(
        5,
        &format!("100 random populations, both designs; worst gap {worst:.2e} <= 1e-12"),
    );
}

/// Both adversarial regret experiments (shared by criteria 6 and 7).
static REGRET_REPORTS: LazyLock<Vec<(&'static str, RegretReport)>> = LazyLock::new(|| {
    let survey = DesignSpec::SspRct(SspRctDesign::new(0.25, 0.5, 1.0, 0.25).unwrap());
    let three_arm = DesignSpec::Drpt(DrptDesign::new([1.0 / 3.0; 3], 1.0, 0.25).unwrap());
    [("ssprct", survey, 0xb0061u64), ("drpt", three_arm, 0xb0062u64)]
        .into_iter()
        .map(|(label, design, seed)| {
            let config = RegretExperimentConfig {
                design,
                dgps: DgpFamily::Adversarial,
                sample_sizes: vec![16, 100, 400],
                replications: 10_000,
                seed,
            };
            (label, run_regret_experiment(&config).unwrap())
        })
        .collect()
});

#[test]
fn c06_regret_bound_holds_on_the_adversarial_grid() {
    let start = Instant::now();
    let expected_bounds = [(16usize, 1.2131), (100, 0.4852), (400, 0.2426)];
    let mut details = Vec::new();
    for (label, report) in REGRET_REPORTS.iter() {
        for summary in &report.summaries {
            let (_, expected) = expected_bounds
                .iter()
                .find(|(n, _)| *n == summary.n)
                .unwrap();
            assert!(
                (summary.bound - expected).abs() <= 1e-4,
                "{label} n={}: bound {} far from {expected}",
                summary.n,
                summary.bound
            );
            assert!(
                summary.pass,
                "{label} n={}: max regret {} (dgp {}) exceeds {} + 3*{}",
                summary.n,
                summary.max_mean_regret,
                summary.worst_dgp,
                summary.bound,
                summary.se_at_max
            );
            details.push(format!(
                "{label} n={}: {:.4} <= {:.4}",
                summary.n, summary.max_mean_regret, summary.bound
            ));
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() <= 600.0,
        "criterion 6 overran its budget: {elapsed:?}"
    );
    pass(
        6,
        &format!(
            "R=10^4 per cell, >=25 DGPs per case family: {}; {:.0}s",
            details.join("; "),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c07_regret_decays_at_the_root_n_rate() {
    let mut details = Vec::new();
    for (label, report) in REGRET_REPORTS.iter() {
        let at = |n: usize| {
            report
                .summaries
                .iter()
                .find(|s| s.n == n)
                .expect("summary for n")
        };
        let (s100, s400) = (at(100), at(400));
        let margin = 3.0 * (s400.se_at_max + s100.se_at_max);
        assert!(
            s400.max_mean_regret <= 0.6 * s100.max_mean_regret + margin,
            "{label}: max regret {} at n=400 not below 0.6 * {} + {margin}",
            s400.max_mean_regret,
            s100.max_mean_regret
        );
        details.push(format!(
            "{label}: {:.4} <= 0.6*{:.4}+{:.1e}",
            s400.max_mean_regret, s100.max_mean_regret, margin
        ));
    }
    pass(7, &details.join("; "));
}

#[test]
fn c08_truthfulness_invariant_and_design_rejection() {
    // Distinct outcome values identify the drawn atom, hence the true type.
    let true_type_of = |d: Treatment, y: f64| {
        let support = match d {
            Treatment::One => [
                (2.0, PreferenceType::Prefers1),
                (0.0, PreferenceType::Prefers0),
            ],
            Treatment::Zero => [
                (1.0, PreferenceType::Prefers1),
                (2.0, PreferenceType::Prefers0),
            ],
        };
        support
            .iter()
            .find(|(v, _)| *v == y)
            .map(|(_, t)| *t)
            .unwrap_or_else(|| panic!("outcome {y} outside population support"))
    };
    let pop = benchmark_population();
    let design = SspRctDesign::new(0.25, 0.5, 2.0, 0.25).unwrap();
    let data = simulate_ssprct(&pop, &design, 1_000_000, 0x0808).unwrap();
    let mut truthful = 0usize;
    for r in data.records() {
        assert_eq!(r.s, true_type_of(r.d, r.y), "a record misreported its type");
        truthful += 1;
    }
    assert_eq!(truthful, 1_000_000);

    // Reversed propensities must be rejected up front.
    let lying_design = SspRctDesign {
        p0: 0.5,
        p1: 0.25,
        m: 2.0,
        kappa: 0.25,
    };
    assert!(simulate_ssprct(&pop, &lying_design, 10, 0).is_err());
    let tied_design = SspRctDesign {
        p0: 0.5,
        p1: 0.5,
        m: 2.0,
        kappa: 0.25,
    };
    assert!(simulate_ssprct(&pop, &tied_design, 10, 0).is_err());
    pass(
        8,
        "10^6 records all truthful; p0 >= p1 designs rejected by validation",
    );
}

#[test]
fn c09_weighted_sweep_breakpoints_and_determinism() {
    let eff = VocabMathEffects::bundled();
    let table = sweep_weights(&eff, 1001, TypeMapping::VocabAsType1).unwrap();

    let expected = [0.57364, 0.65814, 0.71428];
    assert_eq!(table.breakpoints.len(), 3);
    for (bp, want) in table.breakpoints.iter().zip(expected) {
        assert!(
            (bp.w - want).abs() <= 1e-4,
            "breakpoint {} far from {want}",
            bp.w
        );
    }

    // Regimes are contiguous blocks as the weight increases.
    let mut seen: Vec<String> = Vec::new();
    for row in &table.rows {
        if seen.last() != Some(&row.regime) {
            assert!(!seen.contains(&row.regime), "regime {} reappears", row.regime);
            seen.push(row.regime.clone());
        }
    }
    // Each analytic breakpoint sits inside a grid cell where the
    // corresponding determinant changes sign.
    for bp in &table.breakpoints {
        let i = table.rows.partition_point(|r| r.w < bp.w);
        let (lo, hi) = (&table.rows[i - 1], &table.rows[i]);
        let value = |r: &prefrule::SweepRow| match bp.kind {
            prefrule::BreakpointKind::Beta1Zero => r.beta1,
            prefrule::BreakpointKind::Beta0Zero => r.beta0,
            prefrule::BreakpointKind::SumZero => r.sum,
        };
        assert!(
            value(lo) * value(hi) <= 0.0,
            "no sign change around breakpoint at {}",
            bp.w
        );
    }

    let again = sweep_weights(&eff, 1001, TypeMapping::VocabAsType1).unwrap();
    assert_eq!(table.to_csv(), again.to_csv(), "sweep CSV is not reproducible");
    pass(
        9,
        &format!(
            "breakpoints ({:.5}, {:.5}, {:.5}) within 1e-4; regimes {}; CSV byte-identical",
            table.breakpoints[0].w,
            table.breakpoints[1].w,
            table.breakpoints[2].w,
            seen.join(" -> ")
        ),
    );
}

#[test]
fn c10_hand_example_goldens() {
    // Survey estimator on the four-record dataset.
    let survey = SspRctDesign::new(0.25, 0.5, 3.0, 0.25).unwrap();
    let records = vec![
        prefrule::SspRctRecord {
            y: 2.0,
            d: Treatment::One,
            s: PreferenceType::Prefers1,
        },
        prefrule::SspRctRecord {
            y: 1.0,
            d: Treatment::Zero,
            s: PreferenceType::Prefers1,
        },
        prefrule::SspRctRecord {
            y: 3.0,
            d: Treatment::One,
            s: PreferenceType::Prefers0,
        },
        prefrule::SspRctRecord {
            y: 1.0,
            d: Treatment::Zero,
            s: PreferenceType::Prefers0,
        },
    ];
    let data = prefrule::SspRctDataset::new(survey, records).unwrap();
    let est = estimate_beta_ssprct(&data);
    assert!((est.beta1_hat - 0.5).abs() <= 1e-12);
    assert!((est.beta0_hat - 8.0 / 3.0).abs() <= 1e-12);
    let decision = str_decide(&est).unwrap();
    assert_eq!((decision.delta1(), decision.delta0()), (1.0, 1.0));

    // Three-arm estimator on the three-record dataset.
    let three_arm = DrptDesign::new([1.0 / 3.0; 3], 3.0, 0.25).unwrap();
    let records = vec![
        prefrule::DrptRecord {
            y: 3.0,
            d: Treatment::One,
            z: prefrule::Group::Choice,
        },
        prefrule::DrptRecord {
            y: 1.0,
            d: Treatment::Zero,
            z: prefrule::Group::Forced0,
        },
        prefrule::DrptRecord {
            y: 2.0,
            d: Treatment::One,
            z: prefrule::Group::Forced1,
        },
    ];
    let data = prefrule::DrptDataset::new(three_arm, records).unwrap();
    let est = estimate_beta_drpt(&data);
    assert!((est.beta1_hat - 2.0).abs() <= 1e-12);
    assert!((est.beta0_hat - -1.0).abs() <= 1e-12);

    // Kink probe at the diagonal recovers (beta0, beta1) exactly.
    let params = DerivedParams::from_betas(-1.0, 2.0, 0.0).unwrap();
    let base = Itr::new(0.5, 0.5).unwrap();
    let (left, right) =
        welfare_kink_probe(&params, &base, (1.0, 0.0), &[0.25, 0.125, 0.0625]).unwrap();
    assert!((left - 2.0).abs() <= 1e-12);
    assert!((right - -1.0).abs() <= 1e-12);

    // An exactly-zero estimate pair decides (0, 0).
    let zero = str_decide(&BetaEstimates {
        beta1_hat: 0.0,
        beta0_hat: 0.0,
    })
    .unwrap();
    assert_eq!((zero.delta1(), zero.delta0()), (0.0, 0.0));

    pass(
        10,
        "survey (0.5, 8/3), three-arm (2, -1), kink slopes (2, -1): all within 1e-12",
    );
}
