//! Random YES/NO instance pairs.
//!
//! Both draw a hidden variable set `J` of size `k` and a support `S` of
//! `m = ceil(36 · 2^k · ln n)` uniform points; `D` is uniform over `S`. The
//! YES function is a random junta `h` on `J`. The NO function gives each
//! point of `S` an independent random label and spreads that label over the
//! points of the same `J`-section within Hamming distance `radius`; every
//! other point falls back to `h`.

use std::collections::{HashMap, HashSet};

use rand::Rng;

use crate::bits::{BitString, Block};
use crate::dist::FiniteDistribution;
use crate::error::{Error, Result};
use crate::oracle::{BooleanFunction, JuntaSpec};

/// `ceil(36 · 2^k · ln n)`.
pub fn support_size(n: usize, k: usize) -> u64 {
    (36.0 * (k as f64).exp2() * (n as f64).ln()).ceil() as u64
}

/// `floor(0.4 n)`.
pub fn no_radius(n: usize) -> usize {
    2 * n / 5
}

#[derive(Clone, Debug)]
pub struct YesInstance {
    pub junta: JuntaSpec,
    pub support: Vec<BitString>,
}

impl YesInstance {
    pub fn vars(&self) -> &[usize] {
        self.junta.vars()
    }

    pub fn distribution(&self) -> FiniteDistribution {
        FiniteDistribution::uniform_over(self.support.clone()).expect("distinct nonempty support")
    }
}

#[derive(Clone, Debug)]
pub struct NoInstance {
    n: usize,
    vars: Vec<usize>,
    junta_table: BitString,
    points: Vec<BitString>,
    labels: BitString,
    radius: usize,
    position: HashMap<BitString, usize>,
    by_section: HashMap<u64, Vec<usize>>,
}

impl NoInstance {
    /// Assembles an instance from explicit parts; `labels[t]` belongs to
    /// `points[t]`.
    pub fn from_parts(
        n: usize,
        vars: Vec<usize>,
        junta_table: BitString,
        points: Vec<BitString>,
        labels: BitString,
        radius: usize,
    ) -> Result<Self> {
        // validates vars and table size
        JuntaSpec::new(n, vars.clone(), junta_table.clone())?;
        if vars.len() > 64 {
            return Err(Error::Size("at most 64 hidden variables".into()));
        }
        Error::check_dim(points.len(), labels.len())?;
        let mut position = HashMap::with_capacity(points.len());
        let mut by_section: HashMap<u64, Vec<usize>> = HashMap::new();
        for (t, p) in points.iter().enumerate() {
            Error::check_dim(n, p.len())?;
            if position.insert(p.clone(), t).is_some() {
                return Err(Error::Distribution(format!("duplicate support point {p}")));
            }
            by_section.entry(p.section_key(&vars)).or_default().push(t);
        }
        Ok(Self {
            n,
            vars,
            junta_table,
            points,
            labels,
            radius,
            position,
            by_section,
        })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn junta_table(&self) -> &BitString {
        &self.junta_table
    }

    pub fn support(&self) -> &[BitString] {
        &self.points
    }

    /// Label bitmap, one bit per support point in order.
    pub fn labels(&self) -> &BitString {
        &self.labels
    }

    pub fn label_of(&self, t: usize) -> bool {
        self.labels.get(t + 1)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn background(&self) -> JuntaSpec {
        JuntaSpec::new(self.n, self.vars.clone(), self.junta_table.clone()).expect("validated")
    }

    pub fn distribution(&self) -> FiniteDistribution {
        FiniteDistribution::uniform_over(self.points.clone()).expect("distinct nonempty support")
    }

    pub fn eval_no(&self, x: &BitString) -> bool {
        if let Some(&t) = self.position.get(x) {
            return self.label_of(t);
        }
        let key = x.section_key(&self.vars);
        let mut near = false;
        if let Some(members) = self.by_section.get(&key) {
            for &t in members {
                if x.hamming_unchecked(&self.points[t]) <= self.radius {
                    if self.label_of(t) {
                        return true;
                    }
                    near = true;
                }
            }
        }
        if near {
            false
        } else {
            self.junta_table.get(key as usize + 1)
        }
    }
}

impl BooleanFunction for NoInstance {
    fn arity(&self) -> usize {
        self.n
    }

    fn value(&self, x: &BitString) -> bool {
        self.eval_no(x)
    }
}

fn draw_common<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<BitString>, BitString)> {
    if k < 1 || k > n {
        return Err(Error::Config(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if k > 24 {
        return Err(Error::Size(format!("junta table for k = {k} too large")));
    }
    let m = support_size(n, k);
    if m == 0 || (n < 64 && m > 1u64 << n) {
        return Err(Error::Size(format!("support size {m} not realizable in {{0,1}}^{n}")));
    }
    let mut vars: Vec<usize> = rand::seq::index::sample(rng, n, k)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    vars.sort_unstable();
    let mut seen = HashSet::with_capacity(m as usize);
    let mut points = Vec::with_capacity(m as usize);
    while points.len() < m as usize {
        let p = BitString::random(n, rng);
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    let table = BitString::random(1 << k, rng);
    Ok((vars, points, table))
}

pub fn gen_yes<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<YesInstance> {
    let (vars, support, table) = draw_common(n, k, rng)?;
    Ok(YesInstance {
        junta: JuntaSpec::new(n, vars, table)?,
        support,
    })
}

/// Same stream as [`gen_yes`] up to the labels, so equal seeds give equal
/// `J`, `S` and background table.
pub fn gen_no<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<NoInstance> {
    let (vars, points, table) = draw_common(n, k, rng)?;
    let labels = BitString::random(points.len(), rng);
    NoInstance::from_parts(n, vars, table, points, labels, no_radius(n))
}

/// Whether the projections of `ys` onto `vars` are pairwise distinct.
pub fn is_scattered(ys: &[BitString], vars: &Block) -> Result<bool> {
    let mut seen = HashSet::with_capacity(ys.len());
    for y in ys {
        if !seen.insert(y.project(vars.coords())?) {
            return Ok(false);
        }
    }
    Ok(true)
}
