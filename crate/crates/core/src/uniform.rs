//! Uniform-distribution k-junta tester.
//!
//! The coordinates are split into `num_blocks` random blocks. Each round draws
//! a uniform `x` and a `y` that agrees with `x` on every block already known
//! to be relevant and is uniform elsewhere. A disagreement `f(x) != f(y)` is
//! narrowed by block binary search to one new relevant block. Finding `k + 1`
//! of them proves `f` is not a k-junta; otherwise the tester accepts when the
//! round budget runs out.

use rand::Rng;

use crate::bits::{BitString, Block, LabeledPair};
use crate::error::{Error, Result};
use crate::oracle::FunctionOracle;
use crate::search::{block_binary_search, ceil_log2};
use crate::verdict::{Outcome, Verdict};

/// Largest arity `literal_distance_uniform` will enumerate.
pub const MAX_ENUMERATION_ARITY: usize = 20;

/// `ceil(x)` for budget formulas such as `64k/ε`, forgiving the float error
/// of expressions that are exact integers (`128 / (1/3)` evaluates to
/// `384.00000000000006`).
pub fn round_budget(x: f64) -> u64 {
    (x - 1e-9).ceil().max(1.0) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformTesterConfig {
    pub k: usize,
    pub epsilon: f64,
    pub num_blocks: usize,
    pub rounds: u64,
}

impl UniformTesterConfig {
    /// `num_blocks = 10k²`, `rounds = ceil(16(k+1)/ε)`.
    pub fn new(k: usize, epsilon: f64) -> Result<Self> {
        let cfg = Self {
            k,
            epsilon,
            num_blocks: 10 * k * k,
            rounds: round_budget(16.0 * (k as f64 + 1.0) / epsilon),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!("epsilon {} outside (0, 1]", self.epsilon)));
        }
        if self.num_blocks < 2 * self.k * self.k {
            return Err(Error::Config(format!(
                "num_blocks {} below 2k² = {}",
                self.num_blocks,
                2 * self.k * self.k
            )));
        }
        if self.rounds < 1 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        Ok(())
    }

    /// Worst-case queries of one run: two per round plus at most `k + 1`
    /// block searches over at most `num_blocks` blocks.
    pub fn query_ceiling(&self) -> u64 {
        2 * self.rounds + (self.k as u64 + 1) * ceil_log2(self.num_blocks) as u64
    }
}

pub fn uniform_junta<R: Rng + ?Sized>(
    f: &FunctionOracle,
    cfg: &UniformTesterConfig,
    rng: &mut R,
) -> Result<Verdict> {
    let start = f.queries();
    let (outcome, found) = uniform_junta_labeled(f, cfg, rng)?;
    Ok(Verdict {
        outcome,
        witness: found.into_iter().map(|lp| lp.pair).collect(),
        queries: f.queries() - start,
        samples: 0,
    })
}

/// As [`uniform_junta`], keeping `f` at each witness pair's `x`.
pub(crate) fn uniform_junta_labeled<R: Rng + ?Sized>(
    f: &FunctionOracle,
    cfg: &UniformTesterConfig,
    rng: &mut R,
) -> Result<(Outcome, Vec<LabeledPair>)> {
    cfg.validate()?;
    let n = f.arity();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); cfg.num_blocks];
    for i in 1..=n {
        members[rng.random_range(0..cfg.num_blocks)].push(i);
    }
    let blocks: Vec<Block> = members
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|m| Block::new(m).expect("nonempty"))
        .collect();
    let masks: Vec<BitString> = blocks
        .iter()
        .map(|b| b.to_mask(n))
        .collect::<Result<_>>()?;

    let mut relevant = vec![false; blocks.len()];
    let mut pinned = BitString::zeros(n);
    let mut found = Vec::new();

    for _ in 0..cfg.rounds {
        let x = BitString::random(n, rng);
        let mut y = BitString::random(n, rng);
        y.merge_from(&x, &pinned);
        let fx = f.eval(&x)?;
        if fx == f.eval(&y)? {
            continue;
        }
        let mut delta = x.clone();
        delta.xor_assign(&y);
        assert!(
            !delta.intersects(&pinned),
            "resampled pair touches a relevant block"
        );
        let candidates: Vec<usize> = (0..blocks.len())
            .filter(|&t| !relevant[t] && masks[t].intersects(&delta))
            .collect();
        let list: Vec<Block> = candidates.iter().map(|&t| blocks[t].clone()).collect();
        let hit = block_binary_search(f, &x, &y, fx, &list)?;
        let t = candidates[hit.block_index];
        relevant[t] = true;
        pinned.or_assign(&masks[t]);
        found.push(hit.labeled(fx));
        if found.len() > cfg.k {
            return Ok((Outcome::Reject, found));
        }
    }
    Ok((Outcome::Accept, found))
}

/// A function of at most one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneJunta {
    Constant(bool),
    /// `x_var`, or its negation.
    Literal { var: usize, negated: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiteralDistance {
    pub to_literal: f64,
    pub best_literal: OneJunta,
    pub to_one_junta: f64,
    pub best_one_junta: OneJunta,
}

/// Exact uniform-distribution distance from `f` to the nearest literal and to
/// the nearest 1-junta, by enumerating the whole cube (uncounted).
pub fn literal_distance_uniform(f: &FunctionOracle) -> Result<LiteralDistance> {
    let m = f.arity();
    if m > MAX_ENUMERATION_ARITY {
        return Err(Error::Budget {
            needed: 1u128 << m,
            limit: 1u128 << MAX_ENUMERATION_ARITY,
        });
    }
    let func = f.function();
    let size = 1u64 << m;
    let mut ones = 0u64;
    // agree[i] = #{p : f(p) == p_i}
    let mut agree = vec![0u64; m];
    for p in 0..size {
        let v = func.value(&BitString::from_index(m, p));
        ones += v as u64;
        for (i, a) in agree.iter_mut().enumerate() {
            *a += (((p >> i) & 1 == 1) == v) as u64;
        }
    }
    let total = size as f64;
    let mut best_literal = (u64::MAX, OneJunta::Constant(false));
    for (i, &a) in agree.iter().enumerate() {
        for (errors, negated) in [(size - a, false), (a, true)] {
            if errors < best_literal.0 {
                best_literal = (errors, OneJunta::Literal { var: i + 1, negated });
            }
        }
    }
    let mut best_junta = (ones, OneJunta::Constant(false));
    if size - ones < best_junta.0 {
        best_junta = (size - ones, OneJunta::Constant(true));
    }
    if best_literal.0 < best_junta.0 {
        best_junta = best_literal;
    }
    Ok(LiteralDistance {
        to_literal: best_literal.0 as f64 / total,
        best_literal: best_literal.1,
        to_one_junta: best_junta.0 as f64 / total,
        best_one_junta: best_junta.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{JuntaSpec, TruthTable};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_budgets() {
        let c = UniformTesterConfig::new(2, 0.25).unwrap();
        assert_eq!(c.num_blocks, 40);
        assert_eq!(c.rounds, 192);
        assert_eq!(round_budget(128.0 / (1.0 / 3.0)), 384);
        assert!(UniformTesterConfig::new(0, 0.5).is_err());
        assert!(UniformTesterConfig::new(1, 0.0).is_err());
        let mut bad = c.clone();
        bad.num_blocks = 7;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn never_rejects_juntas() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for trial in 0..500 {
            let k = 1 + trial % 6;
            let n = rng.random_range(k..=64);
            let vars: Vec<usize> = rand::seq::index::sample(&mut rng, n, k)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            let salt: u64 = rng.random();
            let f = FunctionOracle::new(
                JuntaSpec::from_fn(n, vars, |s| (s.wrapping_mul(salt) >> 17) & 1 == 1).unwrap(),
            );
            let cfg = UniformTesterConfig::new(k, 0.5).unwrap();
            let v = uniform_junta(&f, &cfg, &mut rng).unwrap();
            assert_eq!(v.outcome, Outcome::Accept);
            assert!(v.queries <= cfg.query_ceiling());
        }
    }

    #[test]
    fn constant_is_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = FunctionOracle::new(JuntaSpec::constant(30, false));
        for k in 1..4 {
            let cfg = UniformTesterConfig::new(k, 0.1).unwrap();
            assert_eq!(uniform_junta(&f, &cfg, &mut rng).unwrap().outcome, Outcome::Accept);
        }
    }

    #[test]
    fn parity_of_k_plus_one_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [1usize, 2, 3] {
            let n = 12;
            let vars: Vec<usize> = (1..=k + 1).map(|t| t * 3).collect();
            let f = FunctionOracle::new(JuntaSpec::parity(n, vars).unwrap());
            let cfg = UniformTesterConfig::new(k, 0.25).unwrap();
            let mut rejects = 0;
            for _ in 0..300 {
                let g = f.with_fresh_counter();
                let v = uniform_junta(&g, &cfg, &mut rng).unwrap();
                assert!(v.queries <= cfg.query_ceiling());
                if v.is_reject() {
                    rejects += 1;
                    assert_eq!(v.witness.len(), k + 1);
                    assert!(crate::bits::pairwise_disjoint(v.witness.iter().map(|p| &p.block)));
                    for p in &v.witness {
                        assert!(g.distinguishes(p).unwrap());
                    }
                }
            }
            assert!(rejects * 3 >= 2 * 300, "k = {k}: {rejects}/300");
        }
    }

    #[test]
    fn literal_distance_examples() {
        let lit = FunctionOracle::new(JuntaSpec::literal(3, 2).unwrap());
        let d = literal_distance_uniform(&lit).unwrap();
        assert_eq!(d.to_literal, 0.0);
        assert_eq!(d.best_literal, OneJunta::Literal { var: 2, negated: false });

        let and = FunctionOracle::new(JuntaSpec::and(2, vec![1, 2]).unwrap());
        let d = literal_distance_uniform(&and).unwrap();
        assert_eq!(d.to_one_junta, 0.25);
        assert_eq!(d.best_one_junta, OneJunta::Constant(false));
        assert_eq!(d.to_literal, 0.25);

        let one = FunctionOracle::new(TruthTable::constant(3, true).unwrap());
        let d = literal_distance_uniform(&one).unwrap();
        assert_eq!(d.to_one_junta, 0.0);
        assert_eq!(d.to_literal, 0.5);
        assert_eq!(one.queries(), 0);

        let big = FunctionOracle::new(JuntaSpec::constant(21, true));
        assert_eq!(literal_distance_uniform(&big).unwrap_err().code(), "BUDGET");
    }
}
