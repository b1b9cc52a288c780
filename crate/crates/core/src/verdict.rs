use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Block, DistinguishingPair};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Accept,
    Reject,
}

/// Result of one tester run.
///
/// On `Reject`, `witness` holds at least `k + 1` pairwise disjoint blocks,
/// each with a full-length distinguishing pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Vec<DistinguishingPair>,
    /// Black-box queries, sampling-oracle labels included.
    pub queries: u64,
    /// Sampling-oracle draws.
    pub samples: u64,
}

impl Verdict {
    pub fn is_reject(&self) -> bool {
        self.outcome == Outcome::Reject
    }

    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            outcome: self.outcome,
            queries: self.queries,
            samples: self.samples,
            witness: self
                .witness
                .iter()
                .map(|p| WitnessEntryJson {
                    block: p.block.coords().to_vec(),
                    x: p.x.to_hex(),
                    y: p.y.to_hex(),
                })
                .collect(),
        }
    }
}

/// Wire form: `{"outcome", "queries", "samples", "witness": [{"block", "x", "y"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub outcome: Outcome,
    pub queries: u64,
    pub samples: u64,
    pub witness: Vec<WitnessEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntryJson {
    pub block: Vec<usize>,
    pub x: String,
    pub y: String,
}

impl VerdictJson {
    /// Decodes the witness strings for a function of arity `n`.
    pub fn witness_pairs(&self, n: usize) -> Result<Vec<DistinguishingPair>> {
        self.witness
            .iter()
            .map(|w| {
                Ok(DistinguishingPair {
                    x: BitString::from_hex(n, &w.x)?,
                    y: BitString::from_hex(n, &w.y)?,
                    block: Block::new(w.block.iter().copied())
                        .map_err(|e| Error::Parse(e.to_string()))?,
                })
            })
            .collect()
    }

    pub fn into_verdict(self, n: usize) -> Result<Verdict> {
        Ok(Verdict {
            outcome: self.outcome,
            witness: self.witness_pairs(n)?,
            queries: self.queries,
            samples: self.samples,
        })
    }
}
