//! Randomized trial runners that compare each decision procedure with a
//! brute-force oracle on seeded instances.

pub mod gen;
mod suites;

use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gen::{gen_algebra, gen_spec, gen_unitary, Constraint, Gen};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Diagonal,
    Circulant,
    Poly,
    Explicit,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 4] = [Self::Diagonal, Self::Circulant, Self::Poly, Self::Explicit];

    pub fn name(self) -> &'static str {
        match self {
            Self::Diagonal => "diagonal",
            Self::Circulant => "circulant",
            Self::Poly => "poly",
            Self::Explicit => "explicit",
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::UnknownAlgebraKind(s.to_string()))
    }
}

/// The result each suite can check. Labels are the ids accepted on the
/// command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "L2.1")]
    DisplacementReconstruction,
    #[serde(rename = "L2.2")]
    DisplacementForm,
    #[serde(rename = "L3.1")]
    ProductDisplacement,
    #[serde(rename = "T3.2i")]
    DifferenceToeplitz,
    #[serde(rename = "T3.2ii")]
    ProductEquality,
    #[serde(rename = "C3.3")]
    SingleProduct,
    #[serde(rename = "C3.4")]
    ReversedProduct,
    #[serde(rename = "T3.5")]
    ProductsCommute,
    #[serde(rename = "P4.1")]
    SxDisplacementForm,
    #[serde(rename = "R4.2")]
    SxGram,
    #[serde(rename = "T4.4")]
    ShiftCommutant,
    #[serde(rename = "T4.5")]
    SxCommutant,
    #[serde(rename = "C4.6")]
    SxClosure,
    #[serde(rename = "L5.1")]
    DefectSums,
    #[serde(rename = "T5.2")]
    NormalityCriterion,
    #[serde(rename = "C5.3")]
    CirculantNormality,
}

impl Theorem {
    pub const ALL: [Theorem; 16] = [
        Self::DisplacementReconstruction,
        Self::DisplacementForm,
        Self::ProductDisplacement,
        Self::DifferenceToeplitz,
        Self::ProductEquality,
        Self::SingleProduct,
        Self::ReversedProduct,
        Self::ProductsCommute,
        Self::SxDisplacementForm,
        Self::SxGram,
        Self::ShiftCommutant,
        Self::SxCommutant,
        Self::SxClosure,
        Self::DefectSums,
        Self::NormalityCriterion,
        Self::CirculantNormality,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::DisplacementReconstruction => "L2.1",
            Self::DisplacementForm => "L2.2",
            Self::ProductDisplacement => "L3.1",
            Self::DifferenceToeplitz => "T3.2i",
            Self::ProductEquality => "T3.2ii",
            Self::SingleProduct => "C3.3",
            Self::ReversedProduct => "C3.4",
            Self::ProductsCommute => "T3.5",
            Self::SxDisplacementForm => "P4.1",
            Self::SxGram => "R4.2",
            Self::ShiftCommutant => "T4.4",
            Self::SxCommutant => "T4.5",
            Self::SxClosure => "C4.6",
            Self::DefectSums => "L5.1",
            Self::NormalityCriterion => "T5.2",
            Self::CirculantNormality => "C5.3",
        }
    }

    /// Suites whose criterion is an equivalence; their trials alternate
    /// between satisfying and violating instances.
    pub fn is_equivalence(self) -> bool {
        matches!(
            self,
            Self::DisplacementForm
                | Self::DifferenceToeplitz
                | Self::ProductEquality
                | Self::SingleProduct
                | Self::ReversedProduct
                | Self::SxDisplacementForm
                | Self::ShiftCommutant
                | Self::SxCommutant
                | Self::DefectSums
                | Self::NormalityCriterion
        )
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_range: RangeInclusive<usize>,
    pub d_range: RangeInclusive<usize>,
    pub algebra_kinds: Vec<AlgebraKind>,
    pub coefficient_bound: i64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 100,
            n_range: 2..=5,
            d_range: 1..=3,
            algebra_kinds: AlgebraKind::ALL.to_vec(),
            coefficient_bound: 8,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::PreconditionViolation(msg.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n_range.is_empty() || *self.n_range.start() == 0 {
            return bad("n range must be nonempty and start at 1 or more");
        }
        if self.d_range.is_empty() || *self.d_range.start() == 0 {
            return bad("d range must be nonempty and start at 1 or more");
        }
        if self.algebra_kinds.is_empty() {
            return bad("at least one algebra kind is required");
        }
        if self.coefficient_bound < 1 {
            return bad("coefficient bound must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Verdict {
    Bool(bool),
    Label(String),
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        Self::Bool(b)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bool(b) => write!(f, "{b}"),
            Self::Label(l) => f.write_str(l),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub theorem: Theorem,
    pub trial: usize,
    pub instance: serde_json::Value,
    pub criterion: Verdict,
    pub oracle: Verdict,
    pub agreement: bool,
}

impl TrialOutcome {
    fn new(theorem: Theorem, trial: usize, instance: serde_json::Value, criterion: Verdict, oracle: Verdict) -> Self {
        let agreement = criterion == oracle;
        Self { theorem, trial, instance, criterion, oracle, agreement }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one trial, a pure function of the run seed, the suite and the
/// trial index.
pub fn trial_seed(seed: u64, theorem: Theorem, trial: usize) -> u64 {
    let tag =
        theorem.id().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
    splitmix64(splitmix64(seed ^ splitmix64(tag)) ^ trial as u64)
}

/// Run every trial of one suite. Trials run in parallel; the output is in
/// trial order and depends only on `config`.
pub fn run_theorem_suite(theorem: Theorem, config: &TrialConfig) -> Result<Vec<TrialOutcome>> {
    config.validate()?;
    Ok((0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut g = Gen::new(trial_seed(config.seed, theorem, trial), config.coefficient_bound);
            suites::run_trial(theorem, trial, config, &mut g)
        })
        .collect())
}

/// Same as [`run_theorem_suite`] with the id given as text.
pub fn run_theorem_suite_by_id(id: &str, config: &TrialConfig) -> Result<Vec<TrialOutcome>> {
    run_theorem_suite(id.parse()?, config)
}

/// One JSON object per line.
pub fn write_jsonl<'a, W: Write>(mut out: W, outcomes: impl IntoIterator<Item = &'a TrialOutcome>) -> Result<()> {
    for o in outcomes {
        serde_json::to_writer(&mut out, o)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
