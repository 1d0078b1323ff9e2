//! Wire formats: JSON documents and CSV dataset schemas.
//!
//! Populations: `{ "M": 2.0, "atoms": [ {"y0": 1.0, "y1": 2.0, "t": 1, "w": 0.6} ] }`.
//!
//! Designs (tagged by `type`, `M` optional where a fallback bound exists):
//! `{ "type": "ssprct", "p0": 0.25, "p1": 0.5, "kappa": 0.25, "M": 2.0 }` or
//! `{ "type": "drpt", "q": [0.25, 0.25, 0.5], "kappa": 0.25, "M": 2.0 }`.
//!
//! Datasets: header-mandatory UTF-8 CSV, decimal points, no thousands
//! separators. Survey data uses columns `y,d,s` (float, 0/1, 0/1);
//! three-arm data uses `y,d,z` (float, 0/1, 0/1/2). Floats are written
//! with shortest round-trip formatting, so write-then-read reproduces
//! records exactly.
//!
//! All functions parse from and render to in-memory strings; opening and
//! reading files is the caller's concern, which keeps filesystem failures
//! separable from malformed content.

use serde::Deserialize;
use thiserror::Error;

use crate::data::{
    DrptDataset, DrptRecord, Group, SspRctDataset, SspRctRecord, Treatment,
};
use crate::design::{DrptDesign, SspRctDesign};
use crate::error::Error;
use crate::pref::PreferenceType;
use crate::regret::{
    DesignSpec, DgpEntry, DgpFamily, RegretExperimentConfig, RegretReport,
};
use crate::simulate::{PopAtom, PopulationSpec};
use crate::sweep::VocabMathEffects;

/// Errors from parsing or rendering wire formats.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("schema: {0}")]
    Schema(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    y0: f64,
    y1: f64,
    t: u8,
    w: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PopulationDoc {
    #[serde(rename = "M")]
    m: f64,
    atoms: Vec<AtomDoc>,
}

impl PopulationDoc {
    fn build(self) -> Result<PopulationSpec, IoError> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for a in self.atoms {
            atoms.push(PopAtom {
                y0: a.y0,
                y1: a.y1,
                t: PreferenceType::from_bit(a.t)?,
                w: a.w,
            });
        }
        Ok(PopulationSpec::new(atoms, self.m)?)
    }
}

/// Parse and validate a population document.
pub fn parse_population(json: &str) -> Result<PopulationSpec, IoError> {
    serde_json::from_str::<PopulationDoc>(json)?.build()
}

/// A parsed design document; the outcome bound may still be absent.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DesignDoc {
    Ssprct {
        p0: f64,
        p1: f64,
        kappa: f64,
        #[serde(rename = "M")]
        m: Option<f64>,
    },
    Drpt {
        q: [f64; 3],
        kappa: f64,
        #[serde(rename = "M")]
        m: Option<f64>,
    },
}

impl DesignDoc {
    /// Resolve into a validated design, using `fallback_m` when the
    /// document does not declare an outcome bound.
    pub fn resolve(&self, fallback_m: Option<f64>) -> Result<DesignSpec, IoError> {
        let pick_m = |m: &Option<f64>| {
            m.or(fallback_m).ok_or_else(|| {
                IoError::Schema(
                    "design document needs an outcome bound M and no fallback is available"
                        .into(),
                )
            })
        };
        match self {
            Self::Ssprct { p0, p1, kappa, m } => Ok(DesignSpec::SspRct(SspRctDesign::new(
                *p0,
                *p1,
                pick_m(m)?,
                *kappa,
            )?)),
            Self::Drpt { q, kappa, m } => {
                Ok(DesignSpec::Drpt(DrptDesign::new(*q, pick_m(m)?, *kappa)?))
            }
        }
    }
}

/// Parse a design document without resolving the outcome bound.
pub fn parse_design(json: &str) -> Result<DesignDoc, IoError> {
    Ok(serde_json::from_str::<DesignDoc>(json)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EffectsDoc {
    share_v: f64,
    cate_v_on_vocab: f64,
    cate_v_on_math: f64,
    cate_m_on_vocab: f64,
    cate_m_on_math: f64,
    #[serde(default)]
    se_v_on_vocab: Option<f64>,
    #[serde(default)]
    se_v_on_math: Option<f64>,
    #[serde(default)]
    se_m_on_vocab: Option<f64>,
    #[serde(default)]
    se_m_on_math: Option<f64>,
}

/// Parse a two-score effects document.
pub fn parse_effects(json: &str) -> Result<VocabMathEffects, IoError> {
    let d = serde_json::from_str::<EffectsDoc>(json)?;
    Ok(VocabMathEffects {
        share_v: d.share_v,
        cate_v_on_vocab: d.cate_v_on_vocab,
        cate_v_on_math: d.cate_v_on_math,
        cate_m_on_vocab: d.cate_m_on_vocab,
        cate_m_on_math: d.cate_m_on_math,
        se_v_on_vocab: d.se_v_on_vocab,
        se_v_on_math: d.se_v_on_math,
        se_m_on_vocab: d.se_m_on_vocab,
        se_m_on_math: d.se_m_on_math,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedPopulationDoc {
    id: String,
    #[serde(rename = "M")]
    m: f64,
    atoms: Vec<AtomDoc>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DgpsDoc {
    Adversarial,
    List { populations: Vec<NamedPopulationDoc> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegretConfigDoc {
    design: DesignDoc,
    dgps: DgpsDoc,
    sample_sizes: Vec<usize>,
    replications: usize,
    seed: u64,
}

/// Parse a regret experiment config. The design must declare its outcome
/// bound, since the bound under test depends on it.
pub fn parse_regret_config(json: &str) -> Result<RegretExperimentConfig, IoError> {
    let doc = serde_json::from_str::<RegretConfigDoc>(json)?;
    let design = doc.design.resolve(None)?;
    let dgps = match doc.dgps {
        DgpsDoc::Adversarial => DgpFamily::Adversarial,
        DgpsDoc::List { populations } => {
            let mut entries = Vec::with_capacity(populations.len());
            for p in populations {
                let doc = PopulationDoc {
                    m: p.m,
                    atoms: p.atoms,
                };
                entries.push(DgpEntry {
                    id: p.id,
                    pop: doc.build()?,
                });
            }
            DgpFamily::List(entries)
        }
    };
    Ok(RegretExperimentConfig {
        design,
        dgps,
        sample_sizes: doc.sample_sizes,
        replications: doc.replications,
        seed: doc.seed,
    })
}

/// Render a regret report as pretty JSON (deterministic bytes).
pub fn report_to_json(report: &RegretReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization is total");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Dataset CSV
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct SspRow {
    y: f64,
    d: u8,
    s: u8,
}

#[derive(Deserialize)]
struct DrptRow {
    y: f64,
    d: u8,
    z: u8,
}

/// Render survey data as `y,d,s` CSV.
pub fn ssprct_to_csv(data: &SspRctDataset) -> String {
    let mut out = String::from("y,d,s\n");
    for r in data.records() {
        out.push_str(&format!("{},{},{}\n", r.y, r.d, r.s));
    }
    out
}

/// Parse `y,d,s` rows without attaching a design.
pub fn ssprct_csv_rows(text: &str) -> Result<Vec<(f64, u8, u8)>, IoError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in rdr.deserialize::<SspRow>() {
        let row = row?;
        rows.push((row.y, row.d, row.s));
    }
    Ok(rows)
}

/// Parse survey CSV and validate it against a design.
pub fn parse_ssprct_csv(text: &str, design: SspRctDesign) -> Result<SspRctDataset, IoError> {
    let mut records = Vec::new();
    for (y, d, s) in ssprct_csv_rows(text)? {
        records.push(SspRctRecord {
            y,
            d: Treatment::from_bit(d)?,
            s: PreferenceType::from_bit(s)?,
        });
    }
    Ok(SspRctDataset::new(design, records)?)
}

/// Render three-arm data as `y,d,z` CSV.
pub fn drpt_to_csv(data: &DrptDataset) -> String {
    let mut out = String::from("y,d,z\n");
    for r in data.records() {
        out.push_str(&format!("{},{},{}\n", r.y, r.d, r.z));
    }
    out
}

/// Parse `y,d,z` rows without attaching a design.
pub fn drpt_csv_rows(text: &str) -> Result<Vec<(f64, u8, u8)>, IoError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in rdr.deserialize::<DrptRow>() {
        let row = row?;
        rows.push((row.y, row.d, row.z));
    }
    Ok(rows)
}

/// Parse three-arm CSV and validate it against a design.
pub fn parse_drpt_csv(text: &str, design: DrptDesign) -> Result<DrptDataset, IoError> {
    let mut records = Vec::new();
    for (y, d, z) in drpt_csv_rows(text)? {
        records.push(DrptRecord {
            y,
            d: Treatment::from_bit(d)?,
            z: Group::from_index(z)?,
        });
    }
    Ok(DrptDataset::new(design, records)?)
}
