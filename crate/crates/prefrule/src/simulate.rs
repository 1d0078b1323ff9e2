//! Synthetic populations and samplers for the two designs.
//!
//! Populations are finite lists of atoms `(y0, y1, t, w)`: every moment
//! is an exact weighted sum, which is what identification round-trips
//! and the regret oracle need. Continuous distributions can be
//! approximated by fine atom grids.
//!
//! Agents are expected-utility maximizers. Under a validated survey
//! design the announced propensities strictly reward truth, so stated
//! types equal true types by construction rather than by assumption.
//! Each record consumes the stream in a fixed order — atom draw, then
//! assignment draw — so datasets are bit-identical given `(population,
//! design, n, seed)`.

use rand_core::RngCore;

use crate::data::{
    DrptDataset, DrptRecord, Group, SspRctDataset, SspRctRecord, Treatment,
};
use crate::design::{DrptDesign, SspRctDesign};
use crate::error::{Error, Result};
use crate::pref::{stated_preference, PreferenceType, TiePolicy};
use crate::rng::{replication_rng, unit_f64};
use crate::rule::Itr;
use crate::welfare::DerivedParams;

/// One population atom: potential outcomes, true type, probability mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopAtom {
    pub y0: f64,
    pub y1: f64,
    pub t: PreferenceType,
    pub w: f64,
}

/// A finite discrete population with a declared outcome bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSpec {
    atoms: Vec<PopAtom>,
    m: f64,
}

impl PopulationSpec {
    /// Validate masses (positive, summing to one) and the outcome bound.
    pub fn new(atoms: Vec<PopAtom>, m: f64) -> Result<Self> {
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::InvalidPopulation(format!(
                "outcome bound M must be finite and positive, got {m}"
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidPopulation("no atoms".into()));
        }
        let mut total = 0.0;
        for (i, a) in atoms.iter().enumerate() {
            if !a.w.is_finite() || a.w <= 0.0 {
                return Err(Error::InvalidPopulation(format!(
                    "atom {i}: mass must be positive, got {}",
                    a.w
                )));
            }
            for (name, y) in [("y0", a.y0), ("y1", a.y1)] {
                if !y.is_finite() || y.abs() > m {
                    return Err(Error::InvalidPopulation(format!(
                        "atom {i}: |{name}| = |{y}| exceeds the outcome bound M = {m}"
                    )));
                }
            }
            total += a.w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPopulation(format!(
                "masses must sum to 1, got {total}"
            )));
        }
        Ok(Self { atoms, m })
    }

    pub fn atoms(&self) -> &[PopAtom] {
        &self.atoms
    }

    /// Declared outcome bound.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Exact population moments: type-1 share, conditional effects (absent
    /// for a massless type, with the corresponding determinant set to
    /// zero), baseline mean, and the determinants.
    pub fn derived_params(&self) -> DerivedParams {
        let mut share1 = 0.0;
        let mut gap1 = 0.0; // sum of w * (y1 - y0) over type-1 atoms
        let mut gap0 = 0.0;
        let mut ey0 = 0.0;
        for a in &self.atoms {
            ey0 += a.w * a.y0;
            match a.t {
                PreferenceType::Prefers1 => {
                    share1 += a.w;
                    gap1 += a.w * (a.y1 - a.y0);
                }
                PreferenceType::Prefers0 => {
                    gap0 += a.w * (a.y1 - a.y0);
                }
            }
        }
        let share0 = 1.0 - share1;
        let tau1 = (share1 > 0.0).then(|| gap1 / share1);
        let tau0 = (share0 > 0.0).then(|| gap0 / share0);
        DerivedParams::new(share1.clamp(0.0, 1.0), tau1, tau0, ey0)
            .expect("validated population moments are admissible")
    }
}

/// One sampled agent: potential outcomes and true type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentDraw {
    pub y0: f64,
    pub y1: f64,
    pub t: PreferenceType,
}

impl AgentDraw {
    /// Outcome under a treatment.
    pub fn outcome(&self, d: Treatment) -> f64 {
        match d {
            Treatment::Zero => self.y0,
            Treatment::One => self.y1,
        }
    }

    /// Potential treatment by arm: forced in arms 0 and 1, the preferred
    /// treatment in the choice arm (free choice reveals the true type).
    pub fn potential_treatment(&self, z: Group) -> Treatment {
        match z {
            Group::Forced0 => Treatment::Zero,
            Group::Forced1 => Treatment::One,
            Group::Choice => Treatment::preferred_by(self.t),
        }
    }
}

/// Draw one agent from the population (one uniform).
pub fn sample_agent(pop: &PopulationSpec, rng: &mut impl RngCore) -> AgentDraw {
    let u = unit_f64(rng);
    let mut acc = 0.0;
    let atoms = pop.atoms();
    for a in atoms {
        acc += a.w;
        if u < acc {
            return AgentDraw {
                y0: a.y0,
                y1: a.y1,
                t: a.t,
            };
        }
    }
    // Mass rounding can leave acc marginally below 1; the residue belongs
    // to the last atom.
    let a = atoms[atoms.len() - 1];
    AgentDraw {
        y0: a.y0,
        y1: a.y1,
        t: a.t,
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample size must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Simulate a survey-design trial with an explicit stream.
///
/// The announced propensity pair acts as the rule each agent responds
/// to; validation guarantees `p(1) > p(0)`, so every statement is
/// truthful. Per record: atom draw, then assignment draw.
pub fn simulate_ssprct_with(
    pop: &PopulationSpec,
    design: &SspRctDesign,
    n: usize,
    rng: &mut impl RngCore,
) -> Result<SspRctDataset> {
    design.validate()?;
    check_n(n)?;
    let announced = Itr::new(design.p1, design.p0)?;
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let agent = sample_agent(pop, rng);
        let s = stated_preference(&announced, agent.t, TiePolicy::Truthful);
        let u = unit_f64(rng);
        let d = if u < design.propensity(s.bit()) {
            Treatment::One
        } else {
            Treatment::Zero
        };
        records.push(SspRctRecord {
            y: agent.outcome(d),
            d,
            s,
        });
    }
    SspRctDataset::new(*design, records)
}

/// Simulate a survey-design trial; deterministic given the seed.
pub fn simulate_ssprct(
    pop: &PopulationSpec,
    design: &SspRctDesign,
    n: usize,
    seed: u64,
) -> Result<SspRctDataset> {
    let mut rng = replication_rng(seed, 0);
    simulate_ssprct_with(pop, design, n, &mut rng)
}

/// Simulate a three-arm trial with an explicit stream.
///
/// Per record: atom draw, then group draw. Forced arms comply perfectly;
/// the choice arm takes the agent's preferred treatment. The outcome
/// depends on the arm only through the treatment received.
pub fn simulate_drpt_with(
    pop: &PopulationSpec,
    design: &DrptDesign,
    n: usize,
    rng: &mut impl RngCore,
) -> Result<DrptDataset> {
    design.validate()?;
    check_n(n)?;
    let [q0, q1, _] = design.q;
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let agent = sample_agent(pop, rng);
        let u = unit_f64(rng);
        let z = if u < q0 {
            Group::Forced0
        } else if u < q0 + q1 {
            Group::Forced1
        } else {
            Group::Choice
        };
        let d = agent.potential_treatment(z);
        records.push(DrptRecord {
            y: agent.outcome(d),
            d,
            z,
        });
    }
    DrptDataset::new(*design, records)
}

/// Simulate a three-arm trial; deterministic given the seed.
pub fn simulate_drpt(
    pop: &PopulationSpec,
    design: &DrptDesign,
    n: usize,
    seed: u64,
) -> Result<DrptDataset> {
    let mut rng = replication_rng(seed, 0);
    simulate_drpt_with(pop, design, n, &mut rng)
}
