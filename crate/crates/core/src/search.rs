//! Binary search over coordinates and over blocks.
//!
//! Both procedures start from a violating pair `f(x) != f(y)` whose values
//! the caller has already paid for, so they take `f(x)` as an argument. The
//! returned pair keeps that orientation: its `x` side still evaluates to the
//! supplied `fx`.

use crate::bits::{BitString, Block, DistinguishingPair, LabeledPair};
use crate::error::{Error, Result};
use crate::oracle::FunctionOracle;

/// `ceil(log2(m))` for `m >= 1`.
pub fn ceil_log2(m: usize) -> u32 {
    assert!(m >= 1);
    usize::BITS - (m - 1).leading_zeros()
}

fn check_violating(f: &FunctionOracle, x: &BitString, y: &BitString, fx: bool) -> Result<()> {
    if cfg!(debug_assertions) {
        let probe = f.with_fresh_counter();
        if probe.eval(x)? != fx || probe.eval(y)? == fx {
            return Err(Error::Contract("input pair is not violating: f(x) = f(y)".into()));
        }
    }
    Ok(())
}

/// Finds a coordinate `i ∈ diff(x, y)` and a pair differing exactly in `i`
/// on which `f` disagrees, using at most `ceil(log2 |diff(x, y)|)` queries.
///
/// Each step flips the lower half (by index) of the live difference set.
pub fn binary_search(
    f: &FunctionOracle,
    x: &BitString,
    y: &BitString,
    fx: bool,
) -> Result<DistinguishingPair> {
    let mut live = x.diff(y)?;
    if live.is_empty() {
        return Err(Error::Contract("binary search needs x != y".into()));
    }
    check_violating(f, x, y, fx)?;
    let (mut a, mut b) = (x.clone(), y.clone());
    while live.len() > 1 {
        let (lower, upper) = live.split_at(live.len() / 2);
        let mid = a.flipped(lower)?;
        if f.eval(&mid)? != fx {
            b = mid;
            live = lower.to_vec();
        } else {
            a = mid;
            live = upper.to_vec();
        }
    }
    Ok(DistinguishingPair {
        x: a,
        y: b,
        block: Block::singleton(live[0]),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSearchResult {
    pub pair: DistinguishingPair,
    /// 0-based position of the confining block in the input list.
    pub block_index: usize,
}

impl BlockSearchResult {
    pub fn labeled(self, fx: bool) -> LabeledPair {
        LabeledPair {
            pair: self.pair,
            x_value: fx,
        }
    }
}

/// Narrows a violating pair down to one of `blocks` with at most
/// `ceil(log2 r)` queries, `r = blocks.len()`.
///
/// `diff(x, y)` must lie inside the union of the (pairwise disjoint) blocks.
/// When the first half of the live blocks misses `diff(x, y)` entirely the
/// step is decided without a query: flipping nothing leaves `f(x)` unchanged.
pub fn block_binary_search(
    f: &FunctionOracle,
    x: &BitString,
    y: &BitString,
    fx: bool,
    blocks: &[Block],
) -> Result<BlockSearchResult> {
    let n = f.arity();
    if blocks.is_empty() {
        return Err(Error::Contract("block search needs at least one block".into()));
    }
    let mut owner = vec![usize::MAX; n + 1];
    for (t, b) in blocks.iter().enumerate() {
        b.check_within(n)?;
        for i in b.iter() {
            if owner[i] != usize::MAX {
                return Err(Error::Contract(format!(
                    "blocks {} and {t} overlap at coordinate {i}",
                    owner[i]
                )));
            }
            owner[i] = t;
        }
    }
    let d = x.diff(y)?;
    if d.is_empty() {
        return Err(Error::Contract("block search needs x != y".into()));
    }
    if let Some(&i) = d.iter().find(|&&i| owner[i] == usize::MAX) {
        return Err(Error::Contract(format!(
            "diff(x, y) contains coordinate {i}, covered by no block"
        )));
    }
    check_violating(f, x, y, fx)?;

    let (mut a, mut b) = (x.clone(), y.clone());
    let (mut lo, mut hi) = (0usize, blocks.len());
    while hi - lo > 1 {
        let t = (hi - lo) / 2;
        let split = lo + t;
        let flip: Vec<usize> = a
            .diff(&b)?
            .into_iter()
            .filter(|&i| owner[i] >= lo && owner[i] < split)
            .collect();
        if flip.is_empty() {
            lo = split;
            continue;
        }
        let mid = a.flipped(&flip)?;
        if f.eval(&mid)? != fx {
            b = mid;
            hi = split;
        } else {
            a = mid;
            lo = split;
        }
    }
    Ok(BlockSearchResult {
        pair: DistinguishingPair {
            x: a,
            y: b,
            block: blocks[lo].clone(),
        },
        block_index: lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{JuntaSpec, TruthTable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn ceil_log2_values() {
        let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (1024, 10)];
        for (m, l) in expect {
            assert_eq!(ceil_log2(m), l, "m = {m}");
        }
    }

    #[test]
    fn binary_search_hand_trace() {
        let f = FunctionOracle::new(JuntaSpec::literal(4, 3).unwrap());
        let pair = binary_search(&f, &bs("1111"), &bs("0000"), true).unwrap();
        assert_eq!(pair.x, bs("0011"));
        assert_eq!(pair.y, bs("0001"));
        assert_eq!(pair.block, Block::singleton(3));
        assert_eq!(f.queries(), 2);
    }

    #[test]
    fn binary_search_base_case_is_free() {
        let f = FunctionOracle::new(JuntaSpec::literal(4, 2).unwrap());
        let pair = binary_search(&f, &bs("0100"), &bs("0000"), true).unwrap();
        assert_eq!((pair.x, pair.y), (bs("0100"), bs("0000")));
        assert_eq!(f.queries(), 0);
    }

    #[test]
    fn binary_search_rejects_non_violating_input() {
        let f = FunctionOracle::new(JuntaSpec::literal(4, 2).unwrap());
        let err = binary_search(&f, &bs("1000"), &bs("0001"), false).unwrap_err();
        assert_eq!(err.code(), "CONTRACT");
    }

    #[test]
    fn block_search_hand_trace() {
        let f = FunctionOracle::new(JuntaSpec::literal(6, 5).unwrap());
        let blocks = [
            Block::new([1, 2]).unwrap(),
            Block::new([3, 4]).unwrap(),
            Block::new([5, 6]).unwrap(),
        ];
        let r = block_binary_search(&f, &bs("111111"), &bs("000000"), true, &blocks).unwrap();
        assert_eq!(r.pair.x, bs("000011"));
        assert_eq!(r.pair.y, bs("000000"));
        assert_eq!(r.block_index, 2);
        assert_eq!(f.queries(), 2);
    }

    #[test]
    fn block_search_single_block_is_free() {
        let f = FunctionOracle::new(JuntaSpec::literal(4, 1).unwrap());
        let blocks = [Block::new([1, 2, 3, 4]).unwrap()];
        let r = block_binary_search(&f, &bs("1010"), &bs("0000"), true, &blocks).unwrap();
        assert_eq!(r.block_index, 0);
        assert_eq!((r.pair.x, r.pair.y), (bs("1010"), bs("0000")));
        assert_eq!(f.queries(), 0);
    }

    #[test]
    fn block_search_contract_errors() {
        let f = FunctionOracle::new(JuntaSpec::literal(4, 1).unwrap());
        let overlapping = [Block::new([1, 2]).unwrap(), Block::new([2, 3, 4]).unwrap()];
        let e = block_binary_search(&f, &bs("1111"), &bs("0000"), true, &overlapping);
        assert_eq!(e.unwrap_err().code(), "CONTRACT");
        let uncovered = [Block::new([1, 2]).unwrap(), Block::new([3]).unwrap()];
        let e = block_binary_search(&f, &bs("1111"), &bs("0000"), true, &uncovered);
        assert_eq!(e.unwrap_err().code(), "CONTRACT");
    }

    #[test]
    fn empty_first_half_routes_right_without_a_query() {
        let f = FunctionOracle::new(JuntaSpec::literal(6, 6).unwrap());
        let blocks = [
            Block::new([1, 2]).unwrap(),
            Block::new([3, 4]).unwrap(),
            Block::new([5, 6]).unwrap(),
        ];
        // diff = {6}: both halving steps miss the first half
        let r = block_binary_search(&f, &bs("000001"), &bs("000000"), true, &blocks).unwrap();
        assert_eq!(r.block_index, 2);
        assert_eq!(f.queries(), 0);
    }

    /// Random truth tables, random violating pairs: postconditions are
    /// re-checked against the table itself.
    #[test]
    fn random_instances_satisfy_postconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut done = 0;
        while done < 500 {
            let n = rng.random_range(2..=12);
            let salt: u64 = rng.random();
            let table =
                TruthTable::from_index_fn(n, |p| (p ^ salt).wrapping_mul(salt | 1) >> 63 == 1)
                    .unwrap();
            let f = FunctionOracle::new(table.clone());
            let x = BitString::random(n, &mut rng);
            let y = BitString::random(n, &mut rng);
            let fx = table.value_at_index(x.to_index());
            if fx == table.value_at_index(y.to_index()) {
                continue;
            }
            let before = f.queries();
            let pair = binary_search(&f, &x, &y, fx).unwrap();
            let used = f.queries() - before;
            let d = x.diff(&y).unwrap();
            assert!(used <= ceil_log2(d.len()) as u64);
            let i = pair.block.coords()[0];
            assert!(d.contains(&i));
            assert_eq!(pair.x.flipped(&[i]).unwrap(), pair.y);
            assert_eq!(table.value_at_index(pair.x.to_index()), fx);
            assert_ne!(table.value_at_index(pair.y.to_index()), fx);
            done += 1;
        }
    }
}
