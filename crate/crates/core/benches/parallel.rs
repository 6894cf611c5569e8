//! Sequential versus rayon execution of the batch workloads.
//!
//! Build with `--no-default-features` to see the fallback path: both
//! variants then run sequentially.

use blockade::generate::{erdos_renyi, lattice, random_weights};
use blockade::oracle::{mwis_exact, OracleConfig};
use blockade::rydberg::{
    compile_register, evolve, measure_shots, parameter_sweep, AnnealParams, QuantumState, SimConfig,
};
use blockade::sampling::{gibbs_sample_chains, SamplerConfig};
use blockade::{par, rng, Exec, Graph};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn mwis_batch(c: &mut Criterion) {
    let mut r = rng::substream(7, "bench");
    let graphs: Vec<Graph> = (0..32)
        .map(|_| {
            let g = erdos_renyi(36, 0.2, &mut r).unwrap();
            let w = random_weights(36, 1.0, 10.0, &mut r);
            g.set_weights(&w).unwrap()
        })
        .collect();
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("mwis_batch");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::map_slice(exec, &graphs, |g| mwis_exact(g, &cfg).unwrap().objective))
        });
    }
    group.finish();
}

fn gibbs_chains(c: &mut Criterion) {
    let g = lattice(6, 6, 1.0, 1.5).unwrap();
    let cfg = SamplerConfig::new(3, 1.0);
    let mut group = c.benchmark_group("gibbs_chains");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| gibbs_sample_chains(&g, &cfg, 16, 200, exec).unwrap())
        });
    }
    group.finish();
}

fn shots(c: &mut Criterion) {
    let g = lattice(3, 4, 1.0, 1.5).unwrap();
    let (register, schedule) = compile_register(&g, &AnnealParams::default()).unwrap();
    let sim = SimConfig::default();
    let state = evolve(&QuantumState::ground(&register, &sim).unwrap(), &register, &schedule, &sim).unwrap();
    let mut group = c.benchmark_group("measure_shots");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| measure_shots(&state, 100_000, 11, exec).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let g = lattice(2, 4, 1.0, 1.5).unwrap();
    let grid: Vec<AnnealParams> = [5.0, 10.0, 15.0, 20.0]
        .iter()
        .flat_map(|&duration| {
            [2.0, 3.0].map(|delta_final| AnnealParams {
                duration,
                delta_final,
                ..AnnealParams::default()
            })
        })
        .collect();
    let (sim, oracle) = (SimConfig::default(), OracleConfig::default());
    let mut group = c.benchmark_group("parameter_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| parameter_sweep(&g, &grid, 200, 5, 1.0, &sim, &oracle, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, mwis_batch, gibbs_chains, shots, sweep);
criterion_main!(benches);
