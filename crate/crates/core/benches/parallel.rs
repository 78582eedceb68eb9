use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use magbound::bounds;
use magbound::fields::MagneticField;
use magbound::geometry::Domain;
use magbound::par::{self, Mode};
use magbound::spectral::{self, BoundaryCondition, SolverOptions};

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn eigensolve(c: &mut Criterion) {
    let disc = Domain::unit_disc();
    let field = MagneticField::Constant(8.0);
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("disc_b8_h64");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::with_mode(mode, || {
                    spectral::solve_magnetic(&disc, &field, BoundaryCondition::Dirichlet, 1.0 / 64.0, &opts).unwrap()
                })
            })
        });
    }
    g.finish();
}

fn second_type(c: &mut Criterion) {
    let sq = Domain::unit_square();
    let nm = spectral::solve_nonmagnetic(&sq, BoundaryCondition::Dirichlet, 1.0 / 32.0, &SolverOptions::default())
        .unwrap();
    let ys = bounds::base_points(&sq, nm.ground_state.lattice.h);
    let field = MagneticField::Constant(2.0);
    let mut g = c.benchmark_group("second_type_square");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_mode(mode, || bounds::second_type_best(&sq, &field, &ys, &nm)))
        });
    }
    g.finish();
}

criterion_group!(benches, eigensolve, second_type);
criterion_main!(benches);
