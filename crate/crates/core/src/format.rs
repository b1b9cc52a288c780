//! JSON files for instances and distributions.
//!
//! Strings are hex-encoded with `x_1` as the least significant bit. A truth
//! table is the string whose bit `p + 1` is the value at point `p`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::dist::FiniteDistribution;
use crate::error::{Error, Result};
use crate::lbgen::{gen_no, NoInstance};
use crate::oracle::{FunctionOracle, JuntaSpec, TruthTable, MAX_TABLE_ARITY};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionFile {
    UniformCube {
        n: usize,
    },
    Support {
        n: usize,
        points: Vec<String>,
        /// Omitted means uniform over `points`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
}

impl DistributionFile {
    pub fn from_distribution(d: &FiniteDistribution) -> Self {
        match d {
            FiniteDistribution::UniformCube(n) => DistributionFile::UniformCube { n: *n },
            FiniteDistribution::Support(s) => DistributionFile::Support {
                n: d.arity(),
                points: s.points().iter().map(BitString::to_hex).collect(),
                weights: (!s.is_uniform()).then(|| s.weights().to_vec()),
            },
        }
    }

    pub fn build(&self) -> Result<FiniteDistribution> {
        match self {
            DistributionFile::UniformCube { n } => Ok(FiniteDistribution::uniform_cube(*n)),
            DistributionFile::Support { n, points, weights } => {
                let pts = points
                    .iter()
                    .map(|h| BitString::from_hex(*n, h))
                    .collect::<Result<Vec<_>>>()?;
                match weights {
                    None => FiniteDistribution::uniform_over(pts),
                    Some(w) => FiniteDistribution::weighted(pts, w.clone()),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoParams {
    pub k: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFile {
    TruthTable {
        n: usize,
        table: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        distribution: Option<DistributionFile>,
    },
    Junta {
        n: usize,
        junta_vars: Vec<usize>,
        table: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        distribution: Option<DistributionFile>,
    },
    /// Either regenerated from `params` alone or fully materialized.
    NoConstruction {
        n: usize,
        params: NoParams,
        #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
        vars: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        junta_table: Option<String>,
        #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
        support: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<usize>,
    },
}

/// A function under test, plus the distribution stored with it if any.
#[derive(Clone, Debug)]
pub enum LoadedFunction {
    Table(TruthTable),
    Junta(JuntaSpec),
    No(NoInstance),
}

#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub function: LoadedFunction,
    pub distribution: Option<FiniteDistribution>,
}

impl LoadedInstance {
    pub fn arity(&self) -> usize {
        match &self.function {
            LoadedFunction::Table(t) => crate::oracle::BooleanFunction::arity(t),
            LoadedFunction::Junta(j) => crate::oracle::BooleanFunction::arity(j),
            LoadedFunction::No(g) => g.arity(),
        }
    }

    /// A fresh oracle with its own tally.
    pub fn oracle(&self) -> FunctionOracle {
        match &self.function {
            LoadedFunction::Table(t) => FunctionOracle::new(t.clone()),
            LoadedFunction::Junta(j) => FunctionOracle::new(j.clone()),
            LoadedFunction::No(g) => FunctionOracle::new(g.clone()),
        }
    }
}

impl InstanceFile {
    pub fn junta(spec: &JuntaSpec, n: usize, distribution: Option<&FiniteDistribution>) -> Self {
        InstanceFile::Junta {
            n,
            junta_vars: spec.vars().to_vec(),
            table: spec.table().to_hex(),
            distribution: distribution.map(DistributionFile::from_distribution),
        }
    }

    pub fn no_construction(g: &NoInstance, params: NoParams) -> Self {
        InstanceFile::NoConstruction {
            n: g.arity(),
            params,
            vars: Some(g.vars().to_vec()),
            junta_table: Some(g.junta_table().to_hex()),
            support: Some(g.support().iter().map(BitString::to_hex).collect()),
            labels: Some(g.labels().to_hex()),
            radius: Some(g.radius()),
        }
    }

    pub fn load(&self) -> Result<LoadedInstance> {
        let dist = |d: &Option<DistributionFile>, n: usize| -> Result<Option<FiniteDistribution>> {
            d.as_ref()
                .map(|d| {
                    let d = d.build()?;
                    Error::check_dim(n, d.arity())?;
                    Ok(d)
                })
                .transpose()
        };
        match self {
            InstanceFile::TruthTable { n, table, distribution } => {
                if *n > MAX_TABLE_ARITY {
                    return Err(Error::Size(format!("truth table over {n} variables")));
                }
                let bits = BitString::from_hex(1 << n, table)?;
                Ok(LoadedInstance {
                    function: LoadedFunction::Table(TruthTable::new(*n, bits)?),
                    distribution: dist(distribution, *n)?,
                })
            }
            InstanceFile::Junta {
                n,
                junta_vars,
                table,
                distribution,
            } => {
                if junta_vars.len() > MAX_TABLE_ARITY {
                    return Err(Error::Size(format!("junta table over {} variables", junta_vars.len())));
                }
                let bits = BitString::from_hex(1 << junta_vars.len(), table)?;
                Ok(LoadedInstance {
                    function: LoadedFunction::Junta(JuntaSpec::new(*n, junta_vars.clone(), bits)?),
                    distribution: dist(distribution, *n)?,
                })
            }
            InstanceFile::NoConstruction {
                n,
                params,
                vars,
                junta_table,
                support,
                labels,
                radius,
            } => {
                let g = match (vars, junta_table, support, labels, radius) {
                    (None, None, None, None, None) => {
                        gen_no(*n, params.k, &mut ChaCha8Rng::seed_from_u64(params.seed))?
                    }
                    (Some(v), Some(t), Some(s), Some(l), Some(r)) => {
                        let pts = s
                            .iter()
                            .map(|h| BitString::from_hex(*n, h))
                            .collect::<Result<Vec<_>>>()?;
                        let labels = BitString::from_hex(pts.len(), l)?;
                        if v.len() > MAX_TABLE_ARITY {
                            return Err(Error::Size(format!("junta table over {} variables", v.len())));
                        }
                        let table = BitString::from_hex(1 << v.len(), t)?;
                        NoInstance::from_parts(*n, v.clone(), table, pts, labels, *r)?
                    }
                    _ => {
                        return Err(Error::Parse(
                            "no_construction needs either params only or all of J, junta_table, S, labels, radius".into(),
                        ))
                    }
                };
                let d = g.distribution();
                Ok(LoadedInstance {
                    function: LoadedFunction::No(g),
                    distribution: Some(d),
                })
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
