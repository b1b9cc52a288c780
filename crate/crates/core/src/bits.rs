//! Bit strings over `{0,1}^n`, coordinate blocks and distinguishing pairs.
//!
//! Coordinates are 1-based throughout: a string over `n` variables has
//! coordinates `1..=n`. Internally bits are packed little-endian into `u64`
//! words, coordinate `i` living at bit `i - 1`. The same layout defines the
//! integer value of a string (`x_1` is the least significant bit), which is
//! what truth tables index by and what the hex encoding prints.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A fixed-length binary string, also used as a coordinate mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    // Bits past `len` are always zero so derived Eq/Hash stay sound.
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        Self {
            len: n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut s = Self {
            len: n,
            words: vec![u64::MAX; words_for(n)],
        };
        s.clear_tail();
        s
    }

    /// Uniformly random string of length `n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut s = Self {
            len: n,
            words: (0..words_for(n)).map(|_| rng.random::<u64>()).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        s
    }

    /// String whose integer value is `value`; requires `n <= 64`.
    pub fn from_index(n: usize, value: u64) -> Self {
        assert!(n <= 64, "from_index supports at most 64 coordinates");
        let mut s = Self::zeros(n);
        if n > 0 {
            s.words[0] = value;
            s.clear_tail();
        }
        s
    }

    /// Mask with exactly the given coordinates set.
    pub fn from_coords(n: usize, coords: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(n);
        for &i in coords {
            s.check_coord(i)?;
            s.set(i, true);
        }
        Ok(s)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Integer value of the string; only meaningful for `n <= 64`.
    #[inline]
    pub fn to_index(&self) -> u64 {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    fn check_coord(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len {
            Err(Error::CoordinateOutOfRange {
                index: i,
                n: self.len,
            })
        } else {
            Ok(())
        }
    }

    /// Value of coordinate `i` (1-based). Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "coordinate {i} outside 1..={}", self.len);
        (self.words[(i - 1) / WORD] >> ((i - 1) % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i >= 1 && i <= self.len, "coordinate {i} outside 1..={}", self.len);
        let (w, b) = ((i - 1) / WORD, (i - 1) % WORD);
        if bit {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i >= 1 && i <= self.len, "coordinate {i} outside 1..={}", self.len);
        self.words[(i - 1) / WORD] ^= 1 << ((i - 1) % WORD);
    }

    /// `x^(R)`: a copy of `self` with every coordinate in `coords` flipped.
    /// Repeated coordinates are treated as a set.
    pub fn flipped(&self, coords: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        let mut mask = Self::zeros(self.len);
        for &i in coords {
            self.check_coord(i)?;
            mask.set(i, true);
        }
        out.xor_assign(&mask);
        Ok(out)
    }

    /// `{i : x_i != y_i}` in ascending order.
    pub fn diff(&self, other: &Self) -> Result<Vec<usize>> {
        Error::check_dim(self.len, other.len)?;
        let mut mask = self.clone();
        mask.xor_assign(other);
        Ok(mask.ones_iter().collect())
    }

    pub fn hamming(&self, other: &Self) -> Result<usize> {
        Error::check_dim(self.len, other.len)?;
        Ok(self.hamming_unchecked(other))
    }

    #[inline]
    pub(crate) fn hamming_unchecked(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Ascending 1-based indices of the set coordinates.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b + 1)
                }
            })
        })
    }

    /// The sub-string `x_coords` over the listed coordinates, re-indexed
    /// `1..=coords.len()` in the order given.
    pub fn project(&self, coords: &[usize]) -> Result<Self> {
        let mut out = Self::zeros(coords.len());
        for (local, &i) in coords.iter().enumerate() {
            self.check_coord(i)?;
            if self.get(i) {
                out.words[local / WORD] |= 1 << (local % WORD);
            }
        }
        Ok(out)
    }

    /// Integer key of the projection onto `coords` (at most 64 of them).
    #[inline]
    pub(crate) fn section_key(&self, coords: &[usize]) -> u64 {
        debug_assert!(coords.len() <= 64);
        coords
            .iter()
            .enumerate()
            .fold(0u64, |acc, (t, &i)| acc | ((self.get(i) as u64) << t))
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    /// True when every set coordinate of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Overwrite the coordinates selected by `mask` with the bits of `src`.
    pub fn merge_from(&mut self, src: &Self, mask: &Self) {
        debug_assert_eq!(self.len, src.len);
        debug_assert_eq!(self.len, mask.len);
        for ((a, s), m) in self.words.iter_mut().zip(&src.words).zip(&mask.words) {
            *a = (*a & !m) | (s & m);
        }
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Big-endian hex of the integer value, `ceil(n/4)` digits (at least one).
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let w = bit / WORD;
            let nibble = if w < self.words.len() {
                (self.words[w] >> (bit % WORD)) & 0xf
            } else {
                0
            };
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Inverse of [`BitString::to_hex`]. Leading zero digits may be omitted;
    /// set bits at or beyond `n` are rejected.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let hex = hex.trim().trim_start_matches("0x");
        let mut s = Self::zeros(n);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?
                as u64;
            for b in 0..4 {
                if (nibble >> b) & 1 == 1 {
                    let idx = d * 4 + b;
                    if idx >= n {
                        return Err(Error::Parse(format!(
                            "hex value has bit {idx} set but length is {n}"
                        )));
                    }
                    s.words[idx / WORD] |= 1 << (idx % WORD);
                }
            }
        }
        Ok(s)
    }
}

impl fmt::Display for BitString {
    /// Writes `x_1 x_2 ... x_n` as a run of `0`/`1` characters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses `"0110"` as `x_1 = 0, x_2 = 1, x_3 = 1, x_4 = 0`.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

/// A nonempty set of coordinates, stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Block(Vec<usize>);

impl Block {
    pub fn new(coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = coords.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::Contract("a block must be nonempty".into()));
        }
        if v[0] == 0 {
            return Err(Error::CoordinateOutOfRange { index: 0, n: 0 });
        }
        Ok(Self(v))
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i >= 1, "coordinates are 1-based");
        Self(vec![i])
    }

    /// All of `1..=n`.
    pub fn full(n: usize) -> Self {
        assert!(n >= 1);
        Self((1..=n).collect())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_coord(&self) -> usize {
        *self.0.last().expect("blocks are nonempty")
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        if self.max_coord() > n {
            Err(Error::CoordinateOutOfRange {
                index: self.max_coord(),
                n,
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_disjoint(&self, other: &Block) -> bool {
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn to_mask(&self, n: usize) -> Result<BitString> {
        BitString::from_coords(n, &self.0)
    }

    /// Coordinates of `1..=n` not in this block.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&i| !self.contains(i)).collect()
    }
}

impl TryFrom<Vec<usize>> for Block {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Block::new(v)
    }
}

impl From<Block> for Vec<usize> {
    fn from(b: Block) -> Self {
        b.0
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (t, i) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// True when no two blocks share a coordinate.
pub fn pairwise_disjoint<'a>(blocks: impl IntoIterator<Item = &'a Block>) -> bool {
    let mut seen = std::collections::HashSet::new();
    blocks
        .into_iter()
        .all(|b| b.iter().all(|i| seen.insert(i)))
}

/// Two strings that differ only inside `block` (and somewhere inside it).
///
/// Whether `f(x) != f(y)` holds is a property relative to an oracle; see
/// [`crate::oracle::FunctionOracle::distinguishes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishingPair {
    pub x: BitString,
    pub y: BitString,
    pub block: Block,
}

impl DistinguishingPair {
    pub fn new(x: BitString, y: BitString, block: Block) -> Result<Self> {
        let pair = Self { x, y, block };
        pair.check_shape()?;
        Ok(pair)
    }

    /// Structural check: equal lengths, block in range, and a nonempty
    /// `diff(x, y)` contained in the block.
    pub fn check_shape(&self) -> Result<()> {
        Error::check_dim(self.x.len(), self.y.len())?;
        self.block.check_within(self.x.len())?;
        let d = self.x.diff(&self.y)?;
        if d.is_empty() {
            return Err(Error::Contract("pair strings are identical".into()));
        }
        if let Some(&i) = d.iter().find(|&&i| !self.block.contains(i)) {
            return Err(Error::Contract(format!(
                "pair differs at coordinate {i} outside block {}",
                self.block
            )));
        }
        Ok(())
    }
}

/// A distinguishing pair together with the oracle's value at `pair.x`
/// (so `!x_value` is its value at `pair.y`). Producers always know this
/// value, and consumers such as the literal check need it without paying a
/// second query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPair {
    pub pair: DistinguishingPair,
    pub x_value: bool,
}
