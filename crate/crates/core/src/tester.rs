//! Distribution-free k-junta testers.
//!
//! [`simple_djunta`] finds relevant coordinates one at a time with ordinary
//! binary search and so pays `O(log n)` per discovery. [`main_djunta`] works
//! with blocks instead: it keeps *verified* blocks, whose restrictions look
//! like a single literal, and *unverified* ones, and only ever searches over
//! at most `k + 1` blocks, which makes its query count independent of `n`.
//!
//! Both are one-sided: they reject only after exhibiting `k + 1` pairwise
//! disjoint blocks, each with a distinguishing pair.

use std::collections::VecDeque;

use rand::Rng;

use crate::bits::{pairwise_disjoint, BitString, Block, DistinguishingPair, LabeledPair};
use crate::dist::{labeled_sample, FiniteDistribution};
use crate::error::{Error, Result};
use crate::oracle::{Embedding, FunctionOracle};
use crate::search::{binary_search, block_binary_search, ceil_log2};
use crate::uniform::{round_budget, uniform_junta_labeled, UniformTesterConfig};
use crate::verdict::{Outcome, Verdict};

/// Budgets for the distribution-free testers.
#[derive(Clone, Debug, PartialEq)]
pub struct DFTesterConfig {
    pub k: usize,
    pub epsilon: f64,
    /// Rounds of [`simple_djunta`].
    pub simple_rounds: u64,
    /// Rounds of [`main_djunta`] with no unverified block.
    pub r1: u64,
    /// Rounds of [`main_djunta`] that examine an unverified block.
    pub r2: u64,
    /// Closeness-to-a-literal threshold for verified blocks.
    pub gamma: f64,
    /// The uniform tester run inside [`literal`] (`k = 1`, `ε = gamma`).
    pub literal_tester: UniformTesterConfig,
}

impl DFTesterConfig {
    /// `simple_rounds = ceil(8(k+1)/ε)`, `r1 = ceil(64k/ε)`, `r2 = 3(k+1)`,
    /// `gamma = 1/(8k)`.
    pub fn new(k: usize, epsilon: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon {epsilon} must be positive")));
        }
        let kf = k as f64;
        let gamma = 1.0 / (8.0 * kf);
        Ok(Self {
            k,
            epsilon,
            simple_rounds: round_budget(8.0 * (kf + 1.0) / epsilon),
            r1: round_budget(64.0 * kf / epsilon),
            r2: 3 * (k as u64 + 1),
            gamma,
            literal_tester: UniformTesterConfig::new(1, gamma)?,
        })
    }

    /// Repetitions of the uniform test in [`literal`]: `ceil(log2 k) + 6`.
    pub fn literal_uniform_reps(&self) -> u64 {
        ceil_log2(self.k) as u64 + 6
    }

    /// Repetitions of the random-split check in [`literal`]: `ceil(log2 k) + 3`.
    pub fn literal_split_reps(&self) -> u64 {
        ceil_log2(self.k) as u64 + 3
    }

    pub fn simple_query_ceiling(&self, n: usize) -> u64 {
        2 * self.simple_rounds + (self.k as u64 + 1) * ceil_log2(n.max(1)) as u64
    }

    pub fn literal_query_ceiling(&self) -> u64 {
        self.literal_uniform_reps() * self.literal_tester.query_ceiling()
            + 4 * self.literal_split_reps()
    }

    /// `r1·(4k + 2 + ceil(log2(k+1))) + r2·(cost of one literal call)`.
    pub fn main_query_ceiling(&self) -> u64 {
        let k = self.k as u64;
        self.r1 * (4 * k + 2 + ceil_log2(self.k + 1) as u64)
            + self.r2 * self.literal_query_ceiling()
    }
}

pub fn simple_djunta<R: Rng + ?Sized>(
    f: &FunctionOracle,
    d: &FiniteDistribution,
    cfg: &DFTesterConfig,
    rng: &mut R,
) -> Result<Verdict> {
    let n = f.arity();
    Error::check_dim(n, d.arity())?;
    let start = f.queries();
    let mut samples = 0;
    let mut found = BitString::zeros(n);
    let mut witness = Vec::new();
    for _ in 0..cfg.simple_rounds {
        let s = labeled_sample(d, f, rng)?;
        samples += 1;
        // R uniform over the coordinates outside I
        let mut flip = BitString::random(n, rng);
        flip.and_not_assign(&found);
        let mut y = s.x.clone();
        y.xor_assign(&flip);
        if f.eval(&y)? == s.label {
            continue;
        }
        let pair = binary_search(f, &s.x, &y, s.label)?;
        let i = pair.block.coords()[0];
        debug_assert!(!found.get(i), "coordinate {i} found twice");
        found.set(i, true);
        witness.push(pair);
        if witness.len() > cfg.k {
            return Ok(Verdict {
                outcome: Outcome::Reject,
                witness,
                queries: f.queries() - start,
                samples,
            });
        }
    }
    Ok(Verdict {
        outcome: Outcome::Accept,
        witness: Vec::new(),
        queries: f.queries() - start,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WhereResult {
    PairForP(LabeledPair),
    PairForQ(LabeledPair),
    Fail,
}

/// Decides which side of the partition `(P, Q)` of `g`'s domain holds the
/// variable `g` is close to, with at most four queries. Pairs are over `g`'s
/// own (local) coordinates. Either side may be empty; flipping an empty side
/// changes nothing, so that check cannot succeed.
pub fn where_is_the_literal<R: Rng + ?Sized>(
    g: &FunctionOracle,
    p: &[usize],
    q: &[usize],
    rng: &mut R,
) -> Result<WhereResult> {
    let m = g.arity();
    let mut seen = vec![false; m + 1];
    for &i in p.iter().chain(q) {
        if i == 0 || i > m {
            return Err(Error::CoordinateOutOfRange { index: i, n: m });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Contract(format!("P and Q overlap at {i}")));
        }
    }
    if p.len() + q.len() != m {
        return Err(Error::Contract("P and Q must cover the domain".into()));
    }

    for (side, is_p) in [(p, true), (q, false)] {
        let a = BitString::random(m, rng);
        let b = a.flipped(side)?;
        let ga = g.eval(&a)?;
        if ga != g.eval(&b)? {
            let lp = LabeledPair {
                pair: DistinguishingPair {
                    x: a,
                    y: b,
                    block: Block::new(side.iter().copied())?,
                },
                x_value: ga,
            };
            return Ok(if is_p {
                WhereResult::PairForP(lp)
            } else {
                WhereResult::PairForQ(lp)
            });
        }
    }
    Ok(WhereResult::Fail)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiteralResult {
    True,
    /// Two disjoint nonempty sub-blocks, each with a pair (local coordinates).
    Split(LabeledPair, LabeledPair),
}

/// Checks whether `g` (over its local domain `C`, with distinguishing pair
/// `pair`) is close to a literal; otherwise splits `C` into two disjoint
/// relevant sub-blocks.
pub fn literal<R: Rng + ?Sized>(
    g: &FunctionOracle,
    pair: &LabeledPair,
    cfg: &DFTesterConfig,
    rng: &mut R,
) -> Result<LiteralResult> {
    let m = g.arity();
    Error::check_dim(m, pair.pair.x.len())?;
    if m == 1 {
        return Ok(LiteralResult::True);
    }
    for _ in 0..cfg.literal_uniform_reps() {
        let (outcome, mut found) = uniform_junta_labeled(g, &cfg.literal_tester, rng)?;
        if outcome == Outcome::Reject {
            let second = found.pop().expect("two blocks on reject");
            let first = found.pop().expect("two blocks on reject");
            return Ok(LiteralResult::Split(first, second));
        }
    }

    let (x, y) = (&pair.pair.x, &pair.pair.y);
    let (gx, gy) = (pair.x_value, !pair.x_value);
    for _ in 0..cfg.literal_split_reps() {
        let (mut c1, mut c2) = (Vec::new(), Vec::new());
        for i in 1..=m {
            if rng.random_bool(0.5) {
                c1.push(i);
            } else {
                c2.push(i);
            }
        }
        let x1 = x.flipped(&c1)?;
        let x2 = x.flipped(&c2)?;
        let y1 = y.flipped(&c1)?;
        let y2 = y.flipped(&c2)?;
        let (gx1, gx2) = (g.eval(&x1)?, g.eval(&x2)?);
        let (gy1, gy2) = (g.eval(&y1)?, g.eval(&y2)?);
        for (base, value, (b1, v1), (b2, v2)) in
            [(x, gx, (x1, gx1), (x2, gx2)), (y, gy, (y1, gy1), (y2, gy2))]
        {
            if v1 == v2 && v1 != value {
                // both flips changed g, so both halves are nonempty
                let half = |flipped: BitString, coords: &[usize]| -> Result<LabeledPair> {
                    Ok(LabeledPair {
                        pair: DistinguishingPair::new(
                            base.clone(),
                            flipped,
                            Block::new(coords.iter().copied())?,
                        )?,
                        x_value: value,
                    })
                };
                return Ok(LiteralResult::Split(half(b1, &c1)?, half(b2, &c2)?));
            }
        }
    }
    Ok(LiteralResult::True)
}

/// A block of the main tester with its full-length distinguishing pair. The
/// restriction context `w` is the pair's common value outside the block.
#[derive(Clone, Debug)]
struct Entry {
    pair: LabeledPair,
}

impl Entry {
    fn block(&self) -> &Block {
        &self.pair.pair.block
    }

    fn embedding(&self) -> Result<Embedding> {
        Embedding::around(self.block(), &self.pair.pair.x)
    }

    /// The pair re-indexed over the block's own coordinates.
    fn local_pair(&self) -> Result<LabeledPair> {
        let c = self.block().coords();
        Ok(LabeledPair {
            pair: DistinguishingPair {
                x: self.pair.pair.x.project(c)?,
                y: self.pair.pair.y.project(c)?,
                block: Block::full(c.len()),
            },
            x_value: self.pair.x_value,
        })
    }
}

fn embed_labeled(emb: &Embedding, lp: &LabeledPair) -> LabeledPair {
    LabeledPair {
        pair: emb.embed_pair(&lp.pair),
        x_value: lp.x_value,
    }
}

/// Conditions (A) and (B): disjoint blocks, each with a pair that still
/// distinguishes. Re-queries run on an untracked copy of `f`.
fn check_good_condition(f: &FunctionOracle, verified: &[Entry], unverified: &VecDeque<Entry>) -> Result<()> {
    let all: Vec<&Entry> = verified.iter().chain(unverified).collect();
    if !pairwise_disjoint(all.iter().map(|e| e.block())) {
        return Err(Error::Contract("blocks of V ∪ U overlap".into()));
    }
    let probe = f.with_fresh_counter();
    for e in all {
        e.pair.pair.check_shape()?;
        if probe.eval(&e.pair.pair.x)? != e.pair.x_value
            || probe.eval(&e.pair.pair.y)? == e.pair.x_value
        {
            return Err(Error::Contract(format!(
                "stored pair for block {} no longer distinguishes",
                e.block()
            )));
        }
    }
    Ok(())
}

fn potential(v: usize, u: usize) -> usize {
    3 * v + 2 * u
}

enum SearchBlock {
    Fresh,
    SplitOf(usize),
}

pub fn main_djunta<R: Rng + ?Sized>(
    f: &FunctionOracle,
    d: &FiniteDistribution,
    cfg: &DFTesterConfig,
    rng: &mut R,
) -> Result<Verdict> {
    let n = f.arity();
    Error::check_dim(n, d.arity())?;
    let start = f.queries();
    let mut samples = 0u64;
    let mut verified: Vec<Entry> = Vec::new();
    let mut unverified: VecDeque<Entry> = VecDeque::new();
    let (mut r1, mut r2) = (cfg.r1, cfg.r2);

    'rounds: while r1 > 0 && r2 > 0 {
        let before = (verified.len(), unverified.len());
        if unverified.is_empty() {
            r1 -= 1;
            // (S_j, T_j, pair of f for S_j) per verified block
            let mut splits: Vec<(Block, Option<Block>, LabeledPair)> = Vec::new();
            for entry in &verified {
                let emb = entry.embedding()?;
                let g = f.restricted(&emb);
                let (mut p, mut q) = (Vec::new(), Vec::new());
                for l in 1..=emb.local_arity() {
                    if rng.random_bool(0.5) {
                        p.push(l);
                    } else {
                        q.push(l);
                    }
                }
                let (found, other) = match where_is_the_literal(&g, &p, &q, rng)? {
                    WhereResult::PairForP(lp) => (lp, q),
                    WhereResult::PairForQ(lp) => (lp, p),
                    WhereResult::Fail => continue 'rounds,
                };
                let s_pair = embed_labeled(&emb, &found);
                let t_block = if other.is_empty() {
                    None
                } else {
                    Some(emb.to_ambient(&Block::new(other)?))
                };
                splits.push((s_pair.pair.block.clone(), t_block, s_pair));
            }

            let s = labeled_sample(d, f, rng)?;
            samples += 1;
            let mut covered = BitString::zeros(n);
            for e in &verified {
                covered.or_assign(&e.block().to_mask(n)?);
            }
            let mut t_mask = BitString::random(n, rng);
            t_mask.and_not_assign(&covered);
            let mut flip = t_mask.clone();
            let mut search: Vec<(SearchBlock, Block)> = Vec::new();
            if t_mask.count_ones() > 0 {
                search.push((SearchBlock::Fresh, Block::new(t_mask.ones_iter())?));
            }
            for (j, (_, t_block, _)) in splits.iter().enumerate() {
                if let Some(t) = t_block {
                    flip.or_assign(&t.to_mask(n)?);
                    search.push((SearchBlock::SplitOf(j), t.clone()));
                }
            }
            let mut y = s.x.clone();
            y.xor_assign(&flip);
            if f.eval(&y)? != s.label {
                let blocks: Vec<Block> = search.iter().map(|(_, b)| b.clone()).collect();
                let hit = block_binary_search(f, &s.x, &y, s.label, &blocks)?;
                match search[hit.block_index].0 {
                    SearchBlock::Fresh => unverified.push_back(Entry {
                        pair: hit.labeled(s.label),
                    }),
                    SearchBlock::SplitOf(j) => {
                        verified.remove(j);
                        let (_, _, s_pair) = splits.swap_remove(j);
                        unverified.push_back(Entry { pair: s_pair });
                        unverified.push_back(Entry {
                            pair: hit.labeled(s.label),
                        });
                    }
                }
            }
        } else {
            r2 -= 1;
            let c = unverified.pop_front().expect("u > 0");
            let emb = c.embedding()?;
            let g = f.restricted(&emb);
            match literal(&g, &c.local_pair()?, cfg, rng)? {
                LiteralResult::True => verified.push(c),
                LiteralResult::Split(a, b) => {
                    unverified.push_back(Entry {
                        pair: embed_labeled(&emb, &a),
                    });
                    unverified.push_back(Entry {
                        pair: embed_labeled(&emb, &b),
                    });
                }
            }
        }

        if cfg!(debug_assertions) {
            check_good_condition(f, &verified, &unverified)?;
            let after = (verified.len(), unverified.len());
            if after != before && potential(after.0, after.1) < potential(before.0, before.1) {
                return Err(Error::Contract("potential 3|V| + 2|U| decreased".into()));
            }
        }

        if verified.len() + unverified.len() > cfg.k {
            let witness = verified
                .iter()
                .chain(&unverified)
                .map(|e| e.pair.pair.clone())
                .collect();
            return Ok(Verdict {
                outcome: Outcome::Reject,
                witness,
                queries: f.queries() - start,
                samples,
            });
        }
    }
    Ok(Verdict {
        outcome: Outcome::Accept,
        witness: Vec::new(),
        queries: f.queries() - start,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{JuntaSpec, TruthTable};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_support(n: usize, m: usize, rng: &mut ChaCha8Rng) -> FiniteDistribution {
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < m {
            pts.insert(BitString::random(n, rng));
        }
        FiniteDistribution::uniform_over(pts.into_iter().collect()).unwrap()
    }

    fn random_junta(n: usize, k: usize, rng: &mut ChaCha8Rng) -> FunctionOracle {
        let vars: Vec<usize> = rand::seq::index::sample(rng, n, k)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        let salt: u64 = rng.random();
        FunctionOracle::new(
            JuntaSpec::from_fn(n, vars, |s| (s.wrapping_add(salt).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40) & 1 == 1)
                .unwrap(),
        )
    }

    #[test]
    fn default_budgets_follow_the_formulas() {
        let c = DFTesterConfig::new(2, 1.0 / 3.0).unwrap();
        assert_eq!(c.simple_rounds, 72);
        assert_eq!(c.r1, 384);
        assert_eq!(c.r2, 9);
        assert_eq!(c.gamma, 1.0 / 16.0);
        assert_eq!(c.literal_uniform_reps(), 7);
        assert_eq!(c.literal_split_reps(), 4);
        let one = DFTesterConfig::new(1, 0.5).unwrap();
        assert_eq!((one.literal_uniform_reps(), one.literal_split_reps()), (6, 3));
        assert!(DFTesterConfig::new(0, 0.5).is_err());
        assert!(DFTesterConfig::new(2, 0.0).is_err());
    }

    #[test]
    fn where_finds_exact_literal_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = FunctionOracle::new(JuntaSpec::literal(6, 4).unwrap());
        for _ in 0..200 {
            let r = where_is_the_literal(&g, &[1, 2, 3], &[4, 5, 6], &mut rng).unwrap();
            match r {
                WhereResult::PairForQ(lp) => {
                    assert!(g.distinguishes(&lp.pair).unwrap());
                    assert_eq!(lp.pair.block.coords(), &[4, 5, 6]);
                }
                other => panic!("expected Q, got {other:?}"),
            }
            let r = where_is_the_literal(&g, &[4, 2], &[1, 3, 5, 6], &mut rng).unwrap();
            assert!(matches!(r, WhereResult::PairForP(_)));
        }
        let before = g.queries();
        let r = where_is_the_literal(&g, &[], &[1, 2, 3, 4, 5, 6], &mut rng).unwrap();
        assert!(matches!(r, WhereResult::PairForQ(_)));
        assert!(g.queries() - before <= 4);
    }

    #[test]
    fn where_fails_on_constants_and_checks_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = FunctionOracle::new(JuntaSpec::constant(4, true));
        for _ in 0..50 {
            assert_eq!(
                where_is_the_literal(&g, &[1, 3], &[2, 4], &mut rng).unwrap(),
                WhereResult::Fail
            );
        }
        assert!(where_is_the_literal(&g, &[1, 2], &[2, 3, 4], &mut rng).is_err());
        assert!(where_is_the_literal(&g, &[1], &[2, 3], &mut rng).is_err());
    }

    fn labeled(g: &FunctionOracle, x: &str, y: &str, block: Block) -> LabeledPair {
        let x: BitString = x.parse().unwrap();
        let pair = DistinguishingPair::new(x.clone(), y.parse().unwrap(), block).unwrap();
        LabeledPair {
            x_value: g.with_fresh_counter().eval(&x).unwrap(),
            pair,
        }
    }

    #[test]
    fn literal_accepts_exact_literals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = DFTesterConfig::new(3, 0.5).unwrap();
        let g = FunctionOracle::new(JuntaSpec::literal(5, 2).unwrap());
        let lp = labeled(&g, "01000", "00000", Block::full(5));
        for _ in 0..20 {
            assert_eq!(literal(&g, &lp, &cfg, &mut rng).unwrap(), LiteralResult::True);
        }
        let single = FunctionOracle::new(JuntaSpec::literal(1, 1).unwrap());
        let lp = labeled(&single, "1", "0", Block::singleton(1));
        assert_eq!(literal(&single, &lp, &cfg, &mut rng).unwrap(), LiteralResult::True);
        assert_eq!(single.queries(), 0);
    }

    #[test]
    fn literal_splits_and() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = DFTesterConfig::new(2, 0.5).unwrap();
        let g = FunctionOracle::new(JuntaSpec::and(2, vec![1, 2]).unwrap());
        let lp = labeled(&g, "11", "01", Block::full(2));
        let mut splits = 0;
        for _ in 0..200 {
            match literal(&g, &lp, &cfg, &mut rng).unwrap() {
                LiteralResult::True => {}
                LiteralResult::Split(a, b) => {
                    splits += 1;
                    assert!(a.pair.block.is_disjoint(&b.pair.block));
                    assert!(g.distinguishes(&a.pair).unwrap());
                    assert!(g.distinguishes(&b.pair).unwrap());
                }
            }
        }
        assert_eq!(splits, 200);
    }

    #[test]
    fn literal_splits_near_constant_through_the_pair_check() {
        // OR of 6 variables is 1/64-close to the constant 1; uniform tests
        // rarely see a 0, so the random-split check is what catches it.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = DFTesterConfig::new(2, 0.5).unwrap();
        let g = FunctionOracle::new(
            TruthTable::from_index_fn(6, |p| p != 0).unwrap(),
        );
        let lp = labeled(&g, "000000", "000100", Block::full(6));
        let mut splits = 0;
        for _ in 0..100 {
            if let LiteralResult::Split(a, b) = literal(&g, &lp, &cfg, &mut rng).unwrap() {
                splits += 1;
                assert!(g.distinguishes(&a.pair).unwrap() && g.distinguishes(&b.pair).unwrap());
            }
        }
        assert!(splits >= 95, "{splits}");
    }

    #[test]
    fn simple_accepts_juntas_on_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cfg = DFTesterConfig::new(3, 0.25).unwrap();
        for _ in 0..300 {
            let f = random_junta(32, 3, &mut rng);
            let d = random_support(32, 50, &mut rng);
            let v = simple_djunta(&f, &d, &cfg, &mut rng).unwrap();
            assert_eq!(v.outcome, Outcome::Accept);
            assert!(v.queries <= cfg.simple_query_ceiling(32));
            assert_eq!(v.samples, cfg.simple_rounds);
        }
    }

    #[test]
    fn simple_rejects_full_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = DFTesterConfig::new(3, 0.25).unwrap();
        let f = FunctionOracle::new(JuntaSpec::parity(10, (1..=10).collect()).unwrap());
        let d = FiniteDistribution::uniform_cube(10);
        let mut rejects = 0;
        for _ in 0..300 {
            let g = f.with_fresh_counter();
            let v = simple_djunta(&g, &d, &cfg, &mut rng).unwrap();
            assert!(v.queries <= cfg.simple_query_ceiling(10));
            if v.is_reject() {
                rejects += 1;
                assert_eq!(v.witness.len(), 4);
                for p in &v.witness {
                    assert_eq!(p.block.len(), 1);
                    assert!(g.distinguishes(p).unwrap());
                }
            }
        }
        assert!(rejects >= 200, "{rejects}");
    }

    #[test]
    fn simple_on_constant_never_searches() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = DFTesterConfig::new(2, 0.5).unwrap();
        let f = FunctionOracle::new(JuntaSpec::constant(16, false));
        let d = random_support(16, 20, &mut rng);
        let v = simple_djunta(&f, &d, &cfg, &mut rng).unwrap();
        assert_eq!(v.outcome, Outcome::Accept);
        assert_eq!(v.queries, 2 * cfg.simple_rounds);
    }

    #[test]
    fn main_accepts_juntas() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..60 {
            let k = 1 + trial % 4;
            let n = if trial % 2 == 0 { 64 } else { 256 };
            let cfg = DFTesterConfig::new(k, 0.5).unwrap();
            let f = random_junta(n, k, &mut rng);
            let d = random_support(n, 100, &mut rng);
            let v = main_djunta(&f, &d, &cfg, &mut rng).unwrap();
            assert_eq!(v.outcome, Outcome::Accept);
            assert!(v.queries <= cfg.main_query_ceiling());
        }
    }

    #[test]
    fn main_rejects_parity_with_valid_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let k = 3;
        let cfg = DFTesterConfig::new(k, 0.25).unwrap();
        let f = FunctionOracle::new(JuntaSpec::parity(40, vec![2, 9, 17, 33]).unwrap());
        let d = FiniteDistribution::uniform_cube(40);
        let mut rejects = 0;
        for _ in 0..60 {
            let g = f.with_fresh_counter();
            let v = main_djunta(&g, &d, &cfg, &mut rng).unwrap();
            assert!(v.queries <= cfg.main_query_ceiling());
            if v.is_reject() {
                rejects += 1;
                assert!(v.witness.len() > k);
                assert!(pairwise_disjoint(v.witness.iter().map(|p| &p.block)));
                for p in &v.witness {
                    assert_eq!(p.x.len(), 40);
                    assert!(g.distinguishes(p).unwrap());
                }
            }
        }
        assert!(rejects >= 50, "{rejects}");
    }

    #[test]
    fn k_at_least_n_always_accepts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = FunctionOracle::new(JuntaSpec::parity(3, vec![1, 2, 3]).unwrap());
        let d = FiniteDistribution::uniform_cube(3);
        let cfg = DFTesterConfig::new(3, 1.0).unwrap();
        for _ in 0..20 {
            assert_eq!(main_djunta(&f, &d, &cfg, &mut rng).unwrap().outcome, Outcome::Accept);
            assert_eq!(simple_djunta(&f, &d, &cfg, &mut rng).unwrap().outcome, Outcome::Accept);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = FunctionOracle::new(JuntaSpec::literal(5, 1).unwrap());
        let d = FiniteDistribution::uniform_cube(6);
        let cfg = DFTesterConfig::new(1, 0.5).unwrap();
        assert_eq!(main_djunta(&f, &d, &cfg, &mut rng).unwrap_err().code(), "DIMENSION");
        assert_eq!(simple_djunta(&f, &d, &cfg, &mut rng).unwrap_err().code(), "DIMENSION");
    }
}
