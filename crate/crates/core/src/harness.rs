//! Repeated seeded trials, rejection rates with Wilson intervals, and
//! query-count profiles.
//!
//! Trial `i` of a run with master seed `s` uses `ChaCha8Rng::seed_from_u64(s)`
//! moved to stream `i`. Streams are independent, so trials may run in any
//! order or in parallel and still produce the same report.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::FiniteDistribution;
use crate::error::{Error, Result};
use crate::exact::verify_witness;
use crate::oracle::{BooleanFunction, FunctionOracle, JuntaSpec};
use crate::tester::{main_djunta, simple_djunta, DFTesterConfig};
use crate::uniform::{uniform_junta, UniformTesterConfig};
use crate::verdict::Verdict;

/// Separates instance streams from tester streams under one master seed.
const FAMILY_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TesterKind {
    Simple,
    Main,
    Uniform,
}

impl fmt::Display for TesterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TesterKind::Simple => "simple",
            TesterKind::Main => "main",
            TesterKind::Uniform => "uniform",
        })
    }
}

impl FromStr for TesterKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(TesterKind::Simple),
            "main" => Ok(TesterKind::Main),
            "uniform" => Ok(TesterKind::Uniform),
            _ => Err(Error::Config(format!("unknown tester {s:?}"))),
        }
    }
}

/// A tester with its budgets fixed.
#[derive(Clone, Debug, PartialEq)]
pub enum TesterSpec {
    Simple(DFTesterConfig),
    Main(DFTesterConfig),
    Uniform(UniformTesterConfig),
}

impl TesterSpec {
    pub fn new(kind: TesterKind, k: usize, epsilon: f64) -> Result<Self> {
        Ok(match kind {
            TesterKind::Simple => TesterSpec::Simple(DFTesterConfig::new(k, epsilon)?),
            TesterKind::Main => TesterSpec::Main(DFTesterConfig::new(k, epsilon)?),
            TesterKind::Uniform => TesterSpec::Uniform(UniformTesterConfig::new(k, epsilon)?),
        })
    }

    pub fn kind(&self) -> TesterKind {
        match self {
            TesterSpec::Simple(_) => TesterKind::Simple,
            TesterSpec::Main(_) => TesterKind::Main,
            TesterSpec::Uniform(_) => TesterKind::Uniform,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            TesterSpec::Simple(c) | TesterSpec::Main(c) => c.k,
            TesterSpec::Uniform(c) => c.k,
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            TesterSpec::Simple(c) | TesterSpec::Main(c) => c.epsilon,
            TesterSpec::Uniform(c) => c.epsilon,
        }
    }

    pub fn query_ceiling(&self, n: usize) -> u64 {
        match self {
            TesterSpec::Simple(c) => c.simple_query_ceiling(n),
            TesterSpec::Main(c) => c.main_query_ceiling(),
            TesterSpec::Uniform(c) => c.query_ceiling(),
        }
    }

    /// One run; the uniform tester ignores `d`. A run above the analytic
    /// query ceiling is a contract error.
    pub fn run<R: Rng + ?Sized>(
        &self,
        f: &FunctionOracle,
        d: &FiniteDistribution,
        rng: &mut R,
    ) -> Result<Verdict> {
        let v = match self {
            TesterSpec::Simple(c) => simple_djunta(f, d, c, rng)?,
            TesterSpec::Main(c) => main_djunta(f, d, c, rng)?,
            TesterSpec::Uniform(c) => uniform_junta(f, c, rng)?,
        };
        let ceiling = self.query_ceiling(f.arity());
        if v.queries > ceiling {
            return Err(Error::Contract(format!(
                "{} tester used {} queries, ceiling {ceiling}",
                self.kind(),
                v.queries
            )));
        }
        Ok(v)
    }
}

/// A function and the distribution it is tested under.
#[derive(Clone, Debug)]
pub struct Instance {
    pub function: Arc<dyn BooleanFunction>,
    pub distribution: FiniteDistribution,
}

impl Instance {
    pub fn new<F: BooleanFunction + 'static>(f: F, d: FiniteDistribution) -> Self {
        Self {
            function: Arc::new(f),
            distribution: d,
        }
    }
}

pub type InstanceFamily<'a> = dyn Fn(u64) -> Result<Instance> + Sync + 'a;

pub enum InstanceSource<'a> {
    Fixed(&'a Instance),
    /// Called with the trial index; must be deterministic in it.
    Family(&'a InstanceFamily<'a>),
}

/// The generator for trial `index` under master seed `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = Z95 * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub min: u64,
    pub max: u64,
    pub mean: f64,
    /// Nearest-rank 95th percentile.
    pub p95: u64,
}

impl Stats {
    pub fn of(values: &[u64]) -> Self {
        if values.is_empty() {
            return Stats { min: 0, max: 0, mean: 0.0, p95: 0 };
        }
        let mut v = values.to_vec();
        v.sort_unstable();
        let rank = ((0.95 * v.len() as f64).ceil() as usize).clamp(1, v.len());
        Stats {
            min: v[0],
            max: v[v.len() - 1],
            mean: v.iter().sum::<u64>() as f64 / v.len() as f64,
            p95: v[rank - 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: u64,
    pub rejections: u64,
    pub rate: f64,
    pub wilson_ci: (f64, f64),
    pub query_stats: Stats,
    pub sample_stats: Stats,
}

struct TrialOutcome {
    reject: bool,
    queries: u64,
    samples: u64,
}

fn one_trial(
    source: &InstanceSource<'_>,
    tester: &TesterSpec,
    seed: u64,
    index: u64,
) -> Result<TrialOutcome> {
    let generated;
    let inst = match source {
        InstanceSource::Fixed(i) => *i,
        InstanceSource::Family(g) => {
            generated = g(index)?;
            &generated
        }
    };
    let f = FunctionOracle::from_arc(inst.function.clone());
    let mut rng = trial_rng(seed, index);
    let v = tester.run(&f, &inst.distribution, &mut rng)?;
    if v.is_reject() {
        if v.witness.len() <= tester.k() {
            return Err(Error::Witness(format!(
                "trial {index}: {} blocks for k = {}",
                v.witness.len(),
                tester.k()
            )));
        }
        if !verify_witness(&f, &v.witness) {
            return Err(Error::Witness(format!("trial {index}: witness does not re-verify")));
        }
    }
    Ok(TrialOutcome {
        reject: v.is_reject(),
        queries: v.queries,
        samples: v.samples,
    })
}

/// Runs `trials` independent tester invocations and aggregates them. Every
/// rejection's witness is re-verified; a bad witness is an error.
pub fn run_trials(
    source: &InstanceSource<'_>,
    tester: &TesterSpec,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| one_trial(source, tester, seed, i))
        .collect::<Result<_>>()?;
    let rejections = outcomes.iter().filter(|o| o.reject).count() as u64;
    let q: Vec<u64> = outcomes.iter().map(|o| o.queries).collect();
    let s: Vec<u64> = outcomes.iter().map(|o| o.samples).collect();
    Ok(TrialReport {
        trials,
        rejections,
        rate: rejections as f64 / trials as f64,
        wilson_ci: wilson_interval(rejections, trials),
        query_stats: Stats::of(&q),
        sample_stats: Stats::of(&s),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub tester: TesterKind,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub report: TrialReport,
}

/// Parity of `k + 1` random coordinates under the uniform cube: `1/2`-far
/// from every k-junta.
pub fn parity_family(n: usize, k: usize, seed: u64) -> impl Fn(u64) -> Result<Instance> + Sync {
    move |i| {
        if k + 1 > n {
            return Err(Error::Config(format!("parity of {} variables needs n > k", k + 1)));
        }
        let mut rng = trial_rng(seed, i);
        let mut vars: Vec<usize> = rand::seq::index::sample(&mut rng, n, k + 1)
            .into_iter()
            .map(|v| v + 1)
            .collect();
        vars.sort_unstable();
        Ok(Instance::new(
            JuntaSpec::parity(n, vars)?,
            FiniteDistribution::uniform_cube(n),
        ))
    }
}

/// Query statistics of the simple and main testers on [`parity_family`] for
/// each `n`, in the order given (simple first within each `n`).
pub fn query_scaling_profile(
    k: usize,
    epsilon: f64,
    n_list: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<ProfileRow>> {
    tester_profile(&[TesterKind::Simple, TesterKind::Main], k, epsilon, n_list, trials, seed)
}

/// As [`query_scaling_profile`] for an arbitrary list of testers.
pub fn tester_profile(
    kinds: &[TesterKind],
    k: usize,
    epsilon: f64,
    n_list: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<ProfileRow>> {
    if n_list.is_empty() {
        return Err(Error::Config("empty list of n".into()));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let family = parity_family(n, k, seed ^ FAMILY_SALT);
        for &kind in kinds {
            let tester = TesterSpec::new(kind, k, epsilon)?;
            let report = run_trials(&InstanceSource::Family(&family), &tester, trials, seed)?;
            rows.push(ProfileRow {
                tester: kind,
                n,
                k,
                epsilon,
                report,
            });
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct CsvRow {
    tester: TesterKind,
    n: usize,
    k: usize,
    epsilon: f64,
    trials: u64,
    reject_rate: f64,
    ci_lo: f64,
    ci_hi: f64,
    q_max: u64,
    q_mean: f64,
    s_max: u64,
    s_mean: f64,
}

/// One CSV line per row, with a header.
pub fn profile_csv(rows: &[ProfileRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            tester: r.tester,
            n: r.n,
            k: r.k,
            epsilon: r.epsilon,
            trials: r.report.trials,
            reject_rate: r.report.rate,
            ci_lo: r.report.wilson_ci.0,
            ci_hi: r.report.wilson_ci.1,
            q_max: r.report.query_stats.max,
            q_mean: r.report.query_stats.mean,
            s_max: r.report.sample_stats.max,
            s_mean: r.report.sample_stats.mean,
        })
        .map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036994).abs() < 1e-5, "{hi}");
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403832).abs() < 1e-5 && (hi - 0.596168).abs() < 1e-5);
        let (lo, hi) = wilson_interval(100, 100);
        assert!((lo - 0.963006).abs() < 1e-5 && hi == 1.0);
    }

    #[test]
    fn stats_nearest_rank() {
        let v: Vec<u64> = (1..=20).collect();
        let s = Stats::of(&v);
        assert_eq!((s.min, s.max, s.p95), (1, 20, 19));
        assert_eq!(s.mean, 10.5);
    }

    #[test]
    fn trial_streams_are_distinct_and_stable() {
        let a: u64 = trial_rng(1, 0).random();
        let b: u64 = trial_rng(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(1, 0).random::<u64>());
    }

    #[test]
    fn junta_family_never_rejects() {
        let fam = |i: u64| {
            let mut rng = trial_rng(99, i);
            let vars = rand::seq::index::sample(&mut rng, 20, 2).into_iter().map(|v| v + 1).collect();
            let salt: u64 = rng.random();
            Ok(Instance::new(
                JuntaSpec::from_fn(20, vars, move |s| (salt >> s) & 1 == 1)?,
                FiniteDistribution::uniform_cube(20),
            ))
        };
        for kind in [TesterKind::Simple, TesterKind::Main, TesterKind::Uniform] {
            let t = TesterSpec::new(kind, 2, 0.5).unwrap();
            let r = run_trials(&InstanceSource::Family(&fam), &t, 40, 3).unwrap();
            assert_eq!(r.rejections, 0);
            assert_eq!(r.rate, 0.0);
        }
    }

    #[test]
    fn fixed_instance_reports_are_reproducible() {
        let inst = Instance::new(
            JuntaSpec::parity(12, vec![1, 4, 7, 10]).unwrap(),
            FiniteDistribution::uniform_cube(12),
        );
        let t = TesterSpec::new(TesterKind::Main, 3, 1.0 / 3.0).unwrap();
        let a = run_trials(&InstanceSource::Fixed(&inst), &t, 30, 17).unwrap();
        let b = run_trials(&InstanceSource::Fixed(&inst), &t, 30, 17).unwrap();
        assert_eq!(a, b);
        assert!(a.rejections > 20);
        assert!(a.wilson_ci.0 <= a.rate && a.rate <= a.wilson_ci.1);
    }

    #[derive(Debug)]
    struct Liar;

    impl BooleanFunction for Liar {
        fn arity(&self) -> usize {
            4
        }
        // answers change between calls, so no witness can re-verify
        fn value(&self, x: &BitString) -> bool {
            use std::sync::atomic::{AtomicU64, Ordering};
            static CALLS: AtomicU64 = AtomicU64::new(0);
            (CALLS.fetch_add(1, Ordering::Relaxed) + x.count_ones() as u64).is_multiple_of(2)
        }
    }

    #[test]
    fn unverifiable_rejections_are_errors() {
        let inst = Instance::new(Liar, FiniteDistribution::uniform_cube(4));
        let t = TesterSpec::new(TesterKind::Simple, 1, 0.5).unwrap();
        let r = run_trials(&InstanceSource::Fixed(&inst), &t, 50, 1);
        assert!(matches!(r, Err(Error::Witness(_)) | Err(Error::Contract(_))), "{r:?}");
    }

    #[test]
    fn csv_shape() {
        let rows = query_scaling_profile(1, 0.5, &[8, 16], 5, 2).unwrap();
        let csv = profile_csv(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "tester,n,k,epsilon,trials,reject_rate,ci_lo,ci_hi,q_max,q_mean,s_max,s_mean"
        );
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("simple,8,1,0.5,5,"));
        assert!(lines[2].starts_with("main,8,1,0.5,5,"));
    }
}
