//! `djunta`: generate instances, run testers, compute exact distances.
//!
//! Exit codes: 0 success (and Accept), 3 Reject, 2 usage error, 4 budget or
//! size error, 1 anything else, including a witness that fails `verify`.
//! Errors print one line to stderr: `error: code=<CODE> message=<text>`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use djunta::bits::BitString;
use djunta::dist::FiniteDistribution;
use djunta::exact::{exact_distance_to_kjuntas, verify_witness};
use djunta::format::{DistributionFile, InstanceFile, LoadedFunction, LoadedInstance, NoParams};
use djunta::harness::{profile_csv, tester_profile, TesterKind, TesterSpec};
use djunta::lbgen::{gen_no, gen_yes};
use djunta::oracle::JuntaSpec;
use djunta::verdict::VerdictJson;
use djunta::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "djunta", version, about = "Distribution-free k-junta testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random k-junta with a uniform support distribution (YES instance).
    GenYes(GenArgs),
    /// Random NO instance: relabeled support around a background junta.
    GenNo(GenArgs),
    /// Random k-junta with no stored distribution.
    GenJunta(GenArgs),
    /// Run a tester once and print its verdict.
    Test(TestArgs),
    /// Exact distance to k-juntas under the instance's distribution.
    Dist(DistArgs),
    /// Query profile on parity instances across several n.
    Bench(BenchArgs),
    /// Re-check a verdict's witness against an instance.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TesterArg {
    Simple,
    Main,
    Uniform,
}

impl From<TesterArg> for TesterKind {
    fn from(t: TesterArg) -> Self {
        match t {
            TesterArg::Simple => TesterKind::Simple,
            TesterArg::Main => TesterKind::Main,
            TesterArg::Uniform => TesterKind::Uniform,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long, value_enum)]
    tester: TesterArg,
    /// Defaults to the junta size or generation parameter stored in the file.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    /// `uniform` for the uniform cube, or a distribution file. Defaults to
    /// the distribution stored in the instance, else the uniform cube.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    k: usize,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    trials: u64,
    /// Defaults to both the simple and the main tester.
    #[arg(long, value_enum)]
    tester: Option<TesterArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Verdict JSON as printed by `test`.
    #[arg(long)]
    witness: PathBuf,
    /// Also require more than `k` blocks.
    #[arg(long)]
    k: Option<usize>,
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &PathBuf) -> Result<(InstanceFile, LoadedInstance)> {
    let file = InstanceFile::from_json(&read(path)?)?;
    let loaded = file.load()?;
    Ok((file, loaded))
}

fn pick_distribution(inst: &LoadedInstance, choice: &Option<String>) -> Result<FiniteDistribution> {
    let d = match choice.as_deref() {
        Some("uniform") => FiniteDistribution::uniform_cube(inst.arity()),
        Some(path) => {
            let text = read(&PathBuf::from(path))?;
            let file: DistributionFile =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            file.build()?
        }
        None => inst
            .distribution
            .clone()
            .unwrap_or_else(|| FiniteDistribution::uniform_cube(inst.arity())),
    };
    if d.arity() != inst.arity() {
        return Err(Error::Dimension {
            expected: inst.arity(),
            found: d.arity(),
        });
    }
    Ok(d)
}

fn default_k(file: &InstanceFile, inst: &LoadedInstance) -> Option<usize> {
    match (file, &inst.function) {
        (InstanceFile::NoConstruction { params, .. }, _) => Some(params.k),
        (_, LoadedFunction::Junta(j)) => Some(j.vars().len().max(1)),
        _ => None,
    }
}

fn random_junta(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<JuntaSpec> {
    if k < 1 || k > n {
        return Err(Error::Config(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut vars: Vec<usize> = rand::seq::index::sample(rng, n, k)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    vars.sort_unstable();
    JuntaSpec::new(n, vars, BitString::random(1 << k, rng))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::GenYes(a) => {
            let y = gen_yes(a.n, a.k, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
            let file = InstanceFile::junta(&y.junta, a.n, Some(&y.distribution()));
            emit(&a.out, &file.to_json())?;
        }
        Command::GenNo(a) => {
            let g = gen_no(a.n, a.k, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
            let file = InstanceFile::no_construction(&g, NoParams { k: a.k, seed: a.seed });
            emit(&a.out, &file.to_json())?;
        }
        Command::GenJunta(a) => {
            let j = random_junta(a.n, a.k, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
            emit(&a.out, &InstanceFile::junta(&j, a.n, None).to_json())?;
        }
        Command::Test(a) => {
            let (file, inst) = load_instance(&a.input)?;
            let k = a
                .k
                .or_else(|| default_k(&file, &inst))
                .ok_or_else(|| Error::Config("--k is required for this instance".into()))?;
            let d = pick_distribution(&inst, &a.dist)?;
            let tester = TesterSpec::new(a.tester.into(), k, a.epsilon)?;
            let f = inst.oracle();
            let v = tester.run(&f, &d, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
            let text = serde_json::to_string_pretty(&v.to_json()).expect("serializable");
            emit(&a.out, &text)?;
            return Ok(if v.is_reject() { 3 } else { 0 });
        }
        Command::Dist(a) => {
            let (_, inst) = load_instance(&a.input)?;
            let d = pick_distribution(&inst, &a.dist)?;
            let r = exact_distance_to_kjuntas(&inst.oracle(), &d, a.k)?;
            let report = json!({
                "k": a.k,
                "distance": r.distance,
                "exact": r.exact.map(|(num, den)| format!("{num}/{den}")),
                "at_least_one_third": r.at_least(1, 3),
                "best_junta_vars": r.best_junta_vars,
                "best_table": r.best_table.to_hex(),
            });
            emit(&a.out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
        }
        Command::Bench(a) => {
            let kinds: Vec<TesterKind> = match a.tester {
                Some(t) => vec![t.into()],
                None => vec![TesterKind::Simple, TesterKind::Main],
            };
            let rows = tester_profile(&kinds, a.k, a.epsilon, &a.n, a.trials, a.seed)?;
            let text = match a.format {
                FormatArg::Csv => profile_csv(&rows)?,
                FormatArg::Json => serde_json::to_string_pretty(&rows).expect("serializable"),
            };
            emit(&a.out, &text)?;
        }
        Command::Verify(a) => {
            let (_, inst) = load_instance(&a.input)?;
            let verdict: VerdictJson = serde_json::from_str(&read(&a.witness)?)
                .map_err(|e| Error::Parse(e.to_string()))?;
            let pairs = verdict.witness_pairs(inst.arity())?;
            let enough = a.k.is_none_or(|k| pairs.len() > k);
            if pairs.is_empty() || !enough || !verify_witness(&inst.oracle(), &pairs) {
                return Err(Error::Witness(format!(
                    "{} pair(s) do not certify the instance",
                    pairs.len()
                )));
            }
            println!("witness ok: {} disjoint relevant blocks", pairs.len());
        }
    }
    Ok(0)
}

fn one_line(s: &str) -> String {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim().to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = one_line(&e.to_string());
            let msg = msg.strip_prefix("error: ").unwrap_or(&msg);
            eprintln!("error: code=USAGE message={msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: code={} message={}", e.code(), one_line(&e.to_string()));
            ExitCode::from(match e {
                Error::Budget { .. } | Error::Size(_) => 4,
                _ => 1,
            })
        }
    }
}
