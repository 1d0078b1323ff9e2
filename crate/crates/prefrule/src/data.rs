//! Trial records and validated datasets.
//!
//! Datasets validate every invariant at construction (outcome bound,
//! arm compliance, nonemptiness), so estimators downstream can assume
//! clean inputs and stay total. Records are immutable after load.

use std::fmt;

use crate::design::{DrptDesign, SspRctDesign};
use crate::error::{Error, Result};
use crate::pref::PreferenceType;

/// One of the two treatments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Treatment {
    Zero,
    One,
}

impl Treatment {
    /// The conventional 0/1 encoding.
    pub fn bit(self) -> u8 {
        match self {
            Self::Zero => 0,
            Self::One => 1,
        }
    }

    /// Decode the conventional 0/1 encoding.
    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(Self::Zero),
            1 => Ok(Self::One),
            other => Err(Error::InvalidArgument(format!(
                "treatment must be 0 or 1, got {other}"
            ))),
        }
    }

    /// The treatment preferred by the given type.
    pub fn preferred_by(t: PreferenceType) -> Self {
        match t {
            PreferenceType::Prefers0 => Self::Zero,
            PreferenceType::Prefers1 => Self::One,
        }
    }
}

impl fmt::Display for Treatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// Experimental arm of the three-arm design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    /// Forced treatment 0.
    Forced0,
    /// Forced treatment 1.
    Forced1,
    /// Free choice of treatment.
    Choice,
}

impl Group {
    /// The conventional 0/1/2 encoding.
    pub fn index(self) -> u8 {
        match self {
            Self::Forced0 => 0,
            Self::Forced1 => 1,
            Self::Choice => 2,
        }
    }

    /// Decode the conventional 0/1/2 encoding.
    pub fn from_index(z: u8) -> Result<Self> {
        match z {
            0 => Ok(Self::Forced0),
            1 => Ok(Self::Forced1),
            2 => Ok(Self::Choice),
            other => Err(Error::InvalidArgument(format!(
                "group must be 0, 1, or 2, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// One observation from the survey design: outcome, treatment received,
/// stated type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SspRctRecord {
    pub y: f64,
    pub d: Treatment,
    pub s: PreferenceType,
}

/// A validated survey-design dataset together with its design constants.
#[derive(Debug, Clone, PartialEq)]
pub struct SspRctDataset {
    design: SspRctDesign,
    records: Vec<SspRctRecord>,
}

impl SspRctDataset {
    /// Validate the design and every record (`|y| <= M`, at least one
    /// record) and take ownership.
    pub fn new(design: SspRctDesign, records: Vec<SspRctRecord>) -> Result<Self> {
        design.validate()?;
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, r) in records.iter().enumerate() {
            if !r.y.is_finite() || r.y.abs() > design.m {
                return Err(Error::InvalidDataset(format!(
                    "record {i}: |y| = |{}| exceeds the outcome bound M = {}",
                    r.y, design.m
                )));
            }
        }
        Ok(Self { design, records })
    }

    pub fn design(&self) -> &SspRctDesign {
        &self.design
    }

    pub fn records(&self) -> &[SspRctRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// One observation from the three-arm design: outcome, treatment
/// received, assigned group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrptRecord {
    pub y: f64,
    pub d: Treatment,
    pub z: Group,
}

/// A validated three-arm dataset together with its design constants.
#[derive(Debug, Clone, PartialEq)]
pub struct DrptDataset {
    design: DrptDesign,
    records: Vec<DrptRecord>,
}

impl DrptDataset {
    /// Validate the design, the outcome bound, and perfect compliance in
    /// the forced arms (`z = 0` implies `d = 0`, `z = 1` implies `d = 1`).
    pub fn new(design: DrptDesign, records: Vec<DrptRecord>) -> Result<Self> {
        design.validate()?;
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, r) in records.iter().enumerate() {
            if !r.y.is_finite() || r.y.abs() > design.m {
                return Err(Error::InvalidDataset(format!(
                    "record {i}: |y| = |{}| exceeds the outcome bound M = {}",
                    r.y, design.m
                )));
            }
            let compliant = match r.z {
                Group::Forced0 => r.d == Treatment::Zero,
                Group::Forced1 => r.d == Treatment::One,
                Group::Choice => true,
            };
            if !compliant {
                return Err(Error::InvalidDataset(format!(
                    "record {i}: treatment {} violates compliance in forced group {}",
                    r.d, r.z
                )));
            }
        }
        Ok(Self { design, records })
    }

    pub fn design(&self) -> &DrptDesign {
        &self.design
    }

    pub fn records(&self) -> &[DrptRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}
