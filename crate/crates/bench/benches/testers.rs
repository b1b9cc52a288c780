use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use djunta::bits::{BitString, Block};
use djunta::dist::FiniteDistribution;
use djunta::harness::trial_rng;
use djunta::lbgen::gen_no;
use djunta::oracle::{BooleanFunction, FunctionOracle, JuntaSpec};
use djunta::search::block_binary_search;
use djunta::{main_djunta, simple_djunta, DFTesterConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const K: usize = 2;
const EPS: f64 = 0.5;

// parity on k+1 variables is 1/2-far from every k-junta under the uniform cube
fn far_parity(n: usize) -> FunctionOracle {
    FunctionOracle::new(JuntaSpec::parity(n, vec![1, n / 2, n]).unwrap())
}

fn testers(c: &mut Criterion) {
    let cfg = DFTesterConfig::new(K, EPS).unwrap();
    let mut group = c.benchmark_group("reject_parity");
    group.sample_size(20);
    for n in [64, 256, 1024] {
        let f = far_parity(n);
        let d = FiniteDistribution::uniform_cube(n);
        let mut i = 0;
        group.bench_with_input(BenchmarkId::new("main", n), &n, |b, _| {
            b.iter(|| {
                i += 1;
                main_djunta(&f, &d, &cfg, &mut trial_rng(1, i)).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("simple", n), &n, |b, _| {
            b.iter(|| {
                i += 1;
                simple_djunta(&f, &d, &cfg, &mut trial_rng(2, i)).unwrap()
            })
        });
    }
    group.finish();
}

fn block_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("block_binary_search");
    for r in [16, 256, 4096] {
        let n = r * 4;
        let f = FunctionOracle::new(JuntaSpec::literal(n, n).unwrap());
        let blocks: Vec<Block> = (0..r).map(|t| Block::new(4 * t + 1..=4 * t + 4).unwrap()).collect();
        let x = BitString::zeros(n);
        let y = BitString::ones(n);
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, _| {
            b.iter(|| block_binary_search(&f, black_box(&x), &y, false, &blocks).unwrap())
        });
    }
    group.finish();
}

fn no_instance_eval(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = gen_no(1000, 3, &mut rng).unwrap();
    let points: Vec<BitString> = (0..256).map(|_| BitString::random(1000, &mut rng)).collect();
    c.bench_function("no_instance_eval_256", |b| {
        b.iter(|| points.iter().filter(|x| g.value(black_box(x))).count())
    });
}

criterion_group!(benches, testers, block_search, no_instance_eval);
criterion_main!(benches);
