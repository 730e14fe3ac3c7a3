use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lwi_core::exec::Execution;
use lwi_core::gain::{sweep_regimes, Axis, RegimeSource};
use lwi_core::{integrate_bare, Basis, DensityMatrix, ParamName, StepControl, SystemParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn regime_sweep(c: &mut Criterion) {
    let base = SystemParams::default();
    let mut group = c.benchmark_group("sweep_regimes_32x32");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                sweep_regimes(
                    &base,
                    Axis::linspace(ParamName::LambdaPump, 0.1, 5.0, 32),
                    Axis::linspace(ParamName::GammaB, 0.2, 4.0, 32),
                    RegimeSource::Numeric,
                    exec,
                )
            })
        });
    }
    group.finish();
}

fn batch_integration(c: &mut Criterion) {
    let p = SystemParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let states: Vec<DensityMatrix> = (0..32)
        .map(|_| DensityMatrix::random(Basis::Bare, &mut rng))
        .collect();
    let ctrl = StepControl::default().with_sample_interval(0.1);
    let mut group = c.benchmark_group("integrate_bare_32_states");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map(&states, |rho| {
                    integrate_bare(rho, &p, 5.0, &ctrl).unwrap().samples.len()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, regime_sweep, batch_integration);
criterion_main!(benches);
