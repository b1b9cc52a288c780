//! Brute-force ground truth for small instances.

use itertools::Itertools;
use rand::Rng;

use crate::bits::{pairwise_disjoint, BitString, Block, DistinguishingPair};
use crate::dist::FiniteDistribution;
use crate::error::{Error, Result};
use crate::oracle::{FunctionOracle, MAX_TABLE_ARITY};

/// Work guard for [`exact_distance_to_kjuntas`]: `C(n, k) · |support|`.
pub const DISTANCE_STEP_LIMIT: u128 = 100_000_000;

/// Largest arity [`is_kjunta`] will tabulate.
pub const MAX_JUNTA_CHECK_ARITY: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    pub distance: f64,
    /// `distance` as `num / den` when every mass is a multiple of `1/den`
    /// (uniform cube or uniform over a set).
    pub exact: Option<(u64, u64)>,
    pub best_junta_vars: Vec<usize>,
    /// Section-majority table over `best_junta_vars`, first variable least
    /// significant.
    pub best_table: BitString,
}

impl DistanceReport {
    /// `distance >= num/den`, compared exactly when possible.
    pub fn at_least(&self, num: u64, den: u64) -> bool {
        match self.exact {
            Some((a, b)) => a as u128 * den as u128 >= num as u128 * b as u128,
            None => self.distance >= num as f64 / den as f64,
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t as u128 + 1))
}

/// Points of the support with their masses, either as integer counts over a
/// common denominator or as floats.
enum Masses {
    Counts { den: u64 },
    Weights(Vec<f64>),
}

/// Exact `min_g Pr_{x~D}[f(x) != g(x)]` over k-juntas `g`. Every junta on
/// fewer variables is also a junta on a superset, so only sets of size
/// exactly `min(k, n)` are enumerated (lexicographically); each section gets
/// its D-majority label, ties to 0. Evaluations are not charged.
pub fn exact_distance_to_kjuntas(
    f: &FunctionOracle,
    d: &FiniteDistribution,
    k: usize,
) -> Result<DistanceReport> {
    let n = f.arity();
    Error::check_dim(n, d.arity())?;
    let kk = k.min(n);
    let support_len: u128 = match d {
        FiniteDistribution::UniformCube(n) => {
            if *n >= 64 {
                u128::MAX
            } else {
                1u128 << n
            }
        }
        FiniteDistribution::Support(s) => s.points().len() as u128,
    };
    let needed = binomial(n, kk).saturating_mul(support_len);
    if needed > DISTANCE_STEP_LIMIT || kk > MAX_TABLE_ARITY {
        return Err(Error::Budget {
            needed,
            limit: DISTANCE_STEP_LIMIT,
        });
    }

    let (points, masses): (Vec<BitString>, Masses) = match d {
        FiniteDistribution::UniformCube(n) => (
            (0..1u64 << n).map(|p| BitString::from_index(*n, p)).collect(),
            Masses::Counts { den: 1 << n },
        ),
        FiniteDistribution::Support(s) if s.is_uniform() => (
            s.points().to_vec(),
            Masses::Counts {
                den: s.points().len() as u64,
            },
        ),
        FiniteDistribution::Support(s) => (s.points().to_vec(), Masses::Weights(s.weights().to_vec())),
    };
    let func = f.function();
    let labels: Vec<bool> = points.iter().map(|x| func.value(x)).collect();

    let sections = 1usize << kk;
    let mut best: Option<(f64, Option<u64>, Vec<usize>, BitString)> = None;
    for vars in (1..=n).combinations(kk) {
        let (dist, count, table) = match &masses {
            Masses::Counts { .. } => {
                let mut w = vec![[0u64; 2]; sections];
                for (x, &l) in points.iter().zip(&labels) {
                    w[x.section_key(&vars) as usize][l as usize] += 1;
                }
                let table: Vec<bool> = w.iter().map(|[a, b]| b > a).collect();
                let errs: u64 = w.iter().map(|[a, b]| *a.min(b)).sum();
                (errs as f64, Some(errs), table)
            }
            Masses::Weights(ws) => {
                let mut w = vec![[0f64; 2]; sections];
                for ((x, &l), &m) in points.iter().zip(&labels).zip(ws) {
                    w[x.section_key(&vars) as usize][l as usize] += m;
                }
                let table: Vec<bool> = w.iter().map(|[a, b]| b > a).collect();
                let errs: f64 = w.iter().map(|[a, b]| a.min(*b)).sum();
                (errs, None, table)
            }
        };
        let better = match &best {
            None => true,
            Some((b, bc, ..)) => match (count, bc) {
                (Some(c), Some(bc)) => c < *bc,
                _ => dist < *b,
            },
        };
        if better {
            let zero = dist == 0.0;
            best = Some((dist, count, vars, BitString::from_bools(&table)));
            if zero {
                break;
            }
        }
    }
    let (dist, count, vars, table) = best.expect("at least one variable set");
    Ok(match masses {
        Masses::Counts { den } => DistanceReport {
            distance: count.unwrap() as f64 / den as f64,
            exact: Some((count.unwrap(), den)),
            best_junta_vars: vars,
            best_table: table,
        },
        Masses::Weights(_) => DistanceReport {
            distance: dist,
            exact: None,
            best_junta_vars: vars,
            best_table: table,
        },
    })
}

/// Coordinates `i` with `f(x) != f(x^({i}))` for some `x`, by full
/// enumeration (uncharged).
pub fn relevant_coordinates(f: &FunctionOracle) -> Result<Vec<usize>> {
    let n = f.arity();
    if n > MAX_JUNTA_CHECK_ARITY {
        return Err(Error::Budget {
            needed: 1u128 << n,
            limit: 1u128 << MAX_JUNTA_CHECK_ARITY,
        });
    }
    let func = f.function();
    let values: Vec<bool> = (0..1u64 << n)
        .map(|p| func.value(&BitString::from_index(n, p)))
        .collect();
    Ok((1..=n)
        .filter(|&i| {
            let bit = 1usize << (i - 1);
            (0..values.len()).any(|p| p & bit == 0 && values[p] != values[p | bit])
        })
        .collect())
}

pub fn is_kjunta(f: &FunctionOracle, k: usize) -> Result<bool> {
    Ok(relevant_coordinates(f)?.len() <= k)
}

/// Blocks pairwise disjoint, each pair well-formed for its block, and `f`
/// separating every pair on re-query. Re-queries go to an untracked copy.
pub fn verify_witness(f: &FunctionOracle, witness: &[DistinguishingPair]) -> bool {
    if !pairwise_disjoint(witness.iter().map(|p| &p.block)) {
        return false;
    }
    let probe = f.with_fresh_counter();
    witness.iter().all(|p| {
        p.x.len() == f.arity() && p.check_shape().is_ok() && probe.distinguishes(p).unwrap_or(false)
    })
}

/// Empirical `Pr[f(x) != f(x_I ∘ w_Ī)]` with `x ~ D`, `w` uniform.
pub fn influence_lemma_estimate<R: Rng + ?Sized>(
    f: &FunctionOracle,
    d: &FiniteDistribution,
    kept: &[usize],
    trials: u64,
    rng: &mut R,
) -> Result<f64> {
    let n = f.arity();
    Error::check_dim(n, d.arity())?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let mask = match Block::new(kept.iter().copied()) {
        Ok(b) => b.to_mask(n)?,
        Err(_) if kept.is_empty() => BitString::zeros(n),
        Err(e) => return Err(e),
    };
    let mut hits = 0u64;
    for _ in 0..trials {
        let x = d.sample(rng);
        let mut z = BitString::random(n, rng);
        z.merge_from(&x, &mask);
        hits += (f.eval(&x)? != f.eval(&z)?) as u64;
    }
    Ok(hits as f64 / trials as f64)
}
