//! Finite distributions over `{0,1}^n` and the labeled sampling oracle.

use std::collections::HashMap;

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oracle::FunctionOracle;

const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum FiniteDistribution {
    UniformCube(usize),
    Support(Support),
}

/// Explicit finite support with weights.
#[derive(Clone, Debug)]
pub struct Support {
    n: usize,
    points: Vec<BitString>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    uniform: bool,
    index: HashMap<BitString, usize>,
}

impl Support {
    pub fn points(&self) -> &[BitString] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True when built as the uniform distribution over its points, in which
    /// case every mass is exactly `1/|S|`.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }
}

impl FiniteDistribution {
    pub fn uniform_cube(n: usize) -> Self {
        FiniteDistribution::UniformCube(n)
    }

    /// Uniform over `points`, which must be distinct and nonempty.
    pub fn uniform_over(points: Vec<BitString>) -> Result<Self> {
        let m = points.len();
        if m == 0 {
            return Err(Error::Distribution("empty support".into()));
        }
        let w = 1.0 / m as f64;
        Self::build(points, vec![w; m], true)
    }

    pub fn weighted(points: Vec<BitString>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Distribution(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.is_empty() {
            return Err(Error::Distribution("empty support".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Distribution(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::Distribution(format!("weights sum to {total}, not 1")));
        }
        Self::build(points, weights, false)
    }

    fn build(points: Vec<BitString>, weights: Vec<f64>, uniform: bool) -> Result<Self> {
        let n = points[0].len();
        let mut index = HashMap::with_capacity(points.len());
        for (t, p) in points.iter().enumerate() {
            Error::check_dim(n, p.len())?;
            if index.insert(p.clone(), t).is_some() {
                return Err(Error::Distribution(format!("duplicate support point {p}")));
            }
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(FiniteDistribution::Support(Support {
            n,
            points,
            weights,
            cumulative,
            uniform,
            index,
        }))
    }

    pub fn arity(&self) -> usize {
        match self {
            FiniteDistribution::UniformCube(n) => *n,
            FiniteDistribution::Support(s) => s.n,
        }
    }

    pub fn support(&self) -> Option<&Support> {
        match self {
            FiniteDistribution::Support(s) => Some(s),
            FiniteDistribution::UniformCube(_) => None,
        }
    }

    /// Draws `x ~ D`. Weighted supports use cumulative-weight inversion on a
    /// single `f64` draw; uniform supports draw an index directly.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        match self {
            FiniteDistribution::UniformCube(n) => BitString::random(*n, rng),
            FiniteDistribution::Support(s) if s.uniform => {
                s.points[rng.random_range(0..s.points.len())].clone()
            }
            FiniteDistribution::Support(s) => {
                let u: f64 = rng.random();
                let t = s
                    .cumulative
                    .partition_point(|&c| c <= u)
                    .min(s.points.len() - 1);
                s.points[t].clone()
            }
        }
    }

    /// Exact probability of `x`.
    pub fn mass(&self, x: &BitString) -> Result<f64> {
        Error::check_dim(self.arity(), x.len())?;
        Ok(match self {
            FiniteDistribution::UniformCube(n) => 0.5f64.powi(*n as i32),
            FiniteDistribution::Support(s) => s.index.get(x).map_or(0.0, |&t| s.weights[t]),
        })
    }
}

/// A draw from the sampling oracle: `(x, f(x))` with `x ~ D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSample {
    pub x: BitString,
    pub label: bool,
}

/// One call to the sampling oracle. The label costs one query on `f`.
pub fn labeled_sample<R: Rng + ?Sized>(
    d: &FiniteDistribution,
    f: &FunctionOracle,
    rng: &mut R,
) -> Result<LabeledSample> {
    Error::check_dim(f.arity(), d.arity())?;
    let x = d.sample(rng);
    let label = f.eval(&x)?;
    Ok(LabeledSample { x, label })
}
