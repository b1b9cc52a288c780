//! Black-box Boolean functions with query accounting.
//!
//! A [`FunctionOracle`] pairs a shared, immutable [`BooleanFunction`] with a
//! query tally. Restriction views created from an oracle keep pointing at the
//! parent's tally, so every evaluation made through any view is charged to the
//! function under test exactly once.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::bits::{BitString, Block, DistinguishingPair};
use crate::error::{Error, Result};

/// Largest arity for which a full truth table is materialized.
pub const MAX_TABLE_ARITY: usize = 24;

/// A Boolean function `{0,1}^n -> {0,1}`.
///
/// `value` may assume `x.len() == self.arity()`; the oracle wrapper checks it.
pub trait BooleanFunction: Send + Sync + fmt::Debug {
    fn arity(&self) -> usize;
    fn value(&self, x: &BitString) -> bool;
}

#[derive(Clone)]
pub struct FunctionOracle {
    func: Arc<dyn BooleanFunction>,
    counter: Arc<AtomicU64>,
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("func", &self.func)
            .field("queries", &self.queries())
            .finish()
    }
}

impl FunctionOracle {
    pub fn new<F: BooleanFunction + 'static>(f: F) -> Self {
        Self::from_arc(Arc::new(f))
    }

    pub fn from_arc(func: Arc<dyn BooleanFunction>) -> Self {
        Self {
            func,
            counter: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn arity(&self) -> usize {
        self.func.arity()
    }

    pub fn function(&self) -> &Arc<dyn BooleanFunction> {
        &self.func
    }

    /// `f(x)`, charging one query. Repeated points are charged again.
    pub fn eval(&self, x: &BitString) -> Result<bool> {
        Error::check_dim(self.func.arity(), x.len())?;
        self.counter.fetch_add(1, Ordering::Relaxed);
        Ok(self.func.value(x))
    }

    /// Queries charged to this oracle's tally so far.
    pub fn queries(&self) -> u64 {
        self.counter.load(Ordering::Relaxed)
    }

    /// Same function, new zeroed tally. Used to give each trial its own
    /// count and by the verification oracles, which must not disturb the
    /// count of the run they check.
    pub fn with_fresh_counter(&self) -> Self {
        Self::from_arc(Arc::clone(&self.func))
    }

    /// Re-queries both ends of `pair` and reports whether the values differ.
    pub fn distinguishes(&self, pair: &DistinguishingPair) -> Result<bool> {
        pair.check_shape()?;
        Ok(self.eval(&pair.x)? != self.eval(&pair.y)?)
    }

    /// `f` restricted by fixing the coordinates of `fixed` to `w`
    /// (`w` indexed by the ascending coordinates of `fixed`). The result is
    /// an oracle over the complement of `fixed`, re-indexed `1..=n-|fixed|`,
    /// that evaluates `f(x ∘ w)` and charges this oracle's tally.
    pub fn restrict(&self, fixed: &Block, w: &BitString) -> Result<Self> {
        let n = self.arity();
        fixed.check_within(n)?;
        Error::check_dim(fixed.len(), w.len())?;
        if fixed.len() == n {
            return Err(Error::EmptyDomain);
        }
        let mut base = BitString::zeros(n);
        for (t, i) in fixed.iter().enumerate() {
            base.set(i, w.get(t + 1));
        }
        let emb = Embedding {
            free: fixed.complement(n),
            base,
        };
        Ok(self.restricted(&emb))
    }

    /// The view `f↾` over `emb`'s free coordinates.
    pub fn restricted(&self, emb: &Embedding) -> Self {
        debug_assert_eq!(emb.base.len(), self.arity());
        Self {
            func: Arc::new(Restriction {
                parent: Arc::clone(&self.func),
                emb: emb.clone(),
            }),
            counter: Arc::clone(&self.counter),
        }
    }
}

/// The coordinate map behind a restriction: a local string over the free
/// coordinates is concatenated with a fixed assignment of the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    free: Vec<usize>,
    // Fixed assignment on the complement of `free`; zero on `free`.
    base: BitString,
}

impl Embedding {
    /// Free coordinates `block`, everything else taken from `context`
    /// (a full-length string; its bits inside `block` are ignored).
    pub fn around(block: &Block, context: &BitString) -> Result<Self> {
        block.check_within(context.len())?;
        let mut base = context.clone();
        for i in block.iter() {
            base.set(i, false);
        }
        Ok(Self {
            free: block.coords().to_vec(),
            base,
        })
    }

    pub fn free_coords(&self) -> &[usize] {
        &self.free
    }

    pub fn local_arity(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_arity(&self) -> usize {
        self.base.len()
    }

    /// `x ∘ w` as a full-length string.
    pub fn embed(&self, local: &BitString) -> BitString {
        debug_assert_eq!(local.len(), self.free.len());
        let mut z = self.base.clone();
        for l in local.ones_iter() {
            z.set(self.free[l - 1], true);
        }
        z
    }

    /// Maps local coordinates back to ambient ones.
    pub fn to_ambient(&self, local: &Block) -> Block {
        Block::new(local.iter().map(|l| self.free[l - 1])).expect("nonempty by construction")
    }

    /// Expands a pair over the local domain into a pair of full-length strings.
    pub fn embed_pair(&self, pair: &DistinguishingPair) -> DistinguishingPair {
        DistinguishingPair {
            x: self.embed(&pair.x),
            y: self.embed(&pair.y),
            block: self.to_ambient(&pair.block),
        }
    }
}

#[derive(Debug)]
struct Restriction {
    parent: Arc<dyn BooleanFunction>,
    emb: Embedding,
}

impl BooleanFunction for Restriction {
    fn arity(&self) -> usize {
        self.emb.free.len()
    }

    fn value(&self, x: &BitString) -> bool {
        self.parent.value(&self.emb.embed(x))
    }
}

/// Explicit table of all `2^n` values, indexed by the integer value of the
/// point (`x_1` least significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    table: BitString,
}

impl TruthTable {
    pub fn new(n: usize, table: BitString) -> Result<Self> {
        if n > MAX_TABLE_ARITY {
            return Err(Error::Size(format!(
                "truth tables are capped at {MAX_TABLE_ARITY} variables, got {n}"
            )));
        }
        Error::check_dim(1 << n, table.len())?;
        Ok(Self { n, table })
    }

    /// Tabulates `f` over point indices `0..2^n`.
    pub fn from_index_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        if n > MAX_TABLE_ARITY {
            return Err(Error::Size(format!(
                "truth tables are capped at {MAX_TABLE_ARITY} variables, got {n}"
            )));
        }
        let bits: Vec<bool> = (0..1u64 << n).map(f).collect();
        Self::new(n, BitString::from_bools(&bits))
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_index_fn(n, |_| value)
    }

    /// Tabulates an oracle without charging its tally.
    pub fn tabulate(f: &FunctionOracle) -> Result<Self> {
        let n = f.arity();
        let func = f.function();
        Self::from_index_fn(n, |p| func.value(&BitString::from_index(n, p)))
    }

    pub fn table(&self) -> &BitString {
        &self.table
    }

    pub fn value_at_index(&self, p: u64) -> bool {
        self.table.get(p as usize + 1)
    }
}

impl BooleanFunction for TruthTable {
    fn arity(&self) -> usize {
        self.n
    }

    fn value(&self, x: &BitString) -> bool {
        self.value_at_index(x.to_index())
    }
}

/// A function of the coordinates `vars` only, given by a table over
/// `{0,1}^vars` (first listed variable least significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuntaSpec {
    n: usize,
    vars: Vec<usize>,
    table: BitString,
}

impl JuntaSpec {
    pub fn new(n: usize, vars: Vec<usize>, table: BitString) -> Result<Self> {
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vars.len() || sorted != vars {
            return Err(Error::Contract(
                "junta variables must be distinct and ascending".into(),
            ));
        }
        if let Some(&bad) = vars.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::CoordinateOutOfRange { index: bad, n });
        }
        if vars.len() > MAX_TABLE_ARITY {
            return Err(Error::Size(format!(
                "junta tables are capped at {MAX_TABLE_ARITY} variables"
            )));
        }
        Error::check_dim(1 << vars.len(), table.len())?;
        Ok(Self { n, vars, table })
    }

    /// `f(x) = g(x_vars)` where `g` receives the section index.
    pub fn from_fn(n: usize, mut vars: Vec<usize>, g: impl Fn(u64) -> bool) -> Result<Self> {
        vars.sort_unstable();
        if vars.len() > MAX_TABLE_ARITY {
            return Err(Error::Size(format!(
                "junta tables are capped at {MAX_TABLE_ARITY} variables"
            )));
        }
        let bits: Vec<bool> = (0..1u64 << vars.len()).map(g).collect();
        Self::new(n, vars, BitString::from_bools(&bits))
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Self::from_fn(n, vec![], |_| value).expect("valid")
    }

    pub fn literal(n: usize, i: usize) -> Result<Self> {
        Self::from_fn(n, vec![i], |s| s == 1)
    }

    pub fn parity(n: usize, vars: Vec<usize>) -> Result<Self> {
        Self::from_fn(n, vars, |s| s.count_ones() % 2 == 1)
    }

    pub fn and(n: usize, vars: Vec<usize>) -> Result<Self> {
        let full = (1u64 << vars.len()) - 1;
        Self::from_fn(n, vars, move |s| s == full)
    }

    pub fn majority(n: usize, vars: Vec<usize>) -> Result<Self> {
        let half = vars.len() as u32;
        Self::from_fn(n, vars, move |s| 2 * s.count_ones() > half)
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn table(&self) -> &BitString {
        &self.table
    }
}

impl BooleanFunction for JuntaSpec {
    fn arity(&self) -> usize {
        self.n
    }

    fn value(&self, x: &BitString) -> bool {
        let key = x.section_key(&self.vars);
        self.table.get(key as usize + 1)
    }
}
