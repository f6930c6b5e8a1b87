//! Versioned test data: seeds, fixture triples and the suspected-misprint list.

use serde::{Deserialize, Serialize};

use crate::atlas::ChartIndex;
use crate::error::Result;
use crate::grassmann::Params;
use crate::identities::IdentityRecord;
use crate::lattice::{level_and_regime, Regime};

const FIXTURES_JSON: &str = include_str!("../fixtures/fixtures.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub default: u64,
    pub atlas_points: u64,
    pub transition: u64,
    pub rho: u64,
    pub golden: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub transition_points_per_pair: usize,
    pub rho_points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub s: usize,
    pub p: usize,
    pub n: usize,
    #[serde(default)]
    pub regime: Option<Regime>,
    #[serde(default)]
    pub l: Option<usize>,
}

impl Triple {
    pub fn params(&self) -> Params {
        Params::new(self.s, self.p, self.n).expect("fixture triple is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenChart {
    pub s: usize,
    pub p: usize,
    pub n: usize,
    pub l: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl GoldenChart {
    pub fn params(&self) -> Params {
        Params::new(self.s, self.p, self.n).expect("fixture triple is valid")
    }

    pub fn chart(&self) -> ChartIndex {
        ChartIndex {
            l: self.l,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
        }
    }
}

/// Component selector: the literal index, or "r" for the last component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentSelector {
    Index(usize),
    Last(String),
}

impl ComponentSelector {
    pub fn resolve(&self, r: usize) -> usize {
        match self {
            ComponentSelector::Index(j) => *j,
            ComponentSelector::Last(_) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspectedTypo {
    pub id: String,
    pub regimes: Vec<Regime>,
    pub j: ComponentSelector,
    pub corrected_reading: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    pub version: u32,
    pub seeds: Seeds,
    pub sample_counts: SampleCounts,
    pub certificate_triples: Vec<Triple>,
    pub transition_cases: Vec<Triple>,
    pub golden_chart: GoldenChart,
    pub suspected_typos: Vec<SuspectedTypo>,
}

impl Fixtures {
    pub fn load() -> Fixtures {
        serde_json::from_str(FIXTURES_JSON).expect("bundled fixtures parse")
    }

    /// Whether the record's id and component are on the suspected-misprint list for this triple.
    pub fn is_suspected(&self, params: &Params, record: &IdentityRecord) -> Result<bool> {
        let (r, regime) = level_and_regime(params)?;
        Ok(self.suspected_typos.iter().any(|t| {
            t.id == record.id && t.regimes.contains(&regime) && t.j.resolve(r) == record.j
        }))
    }
}
