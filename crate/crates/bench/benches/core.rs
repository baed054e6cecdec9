use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use farkas_core::exactlp::{solve, LinearProgram, Sense};
use farkas_core::farkas::check_consequence;
use farkas_core::oracle::{gen, stream_rng};
use farkas_core::ratgeom::{HRep, Polyhedron, Repr};
use farkas_core::rational::int;
use rand::Rng;

fn h_to_v(c: &mut Criterion) {
    let mut group = c.benchmark_group("h_to_v");
    for n in [2usize, 3, 4] {
        let mut rng = stream_rng(11, n as u64);
        let through = gen::int_vec(&mut rng, n, -2, 2);
        let p = gen::polyhedron_through(&mut rng, &through, 2 * n + 2);
        let h = p.h().unwrap().clone();
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| Polyhedron::from_h(black_box(h.clone())).unwrap().convert(Repr::V).unwrap())
        });
    }
    group.finish();
}

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("simplex");
    for n in [3usize, 6] {
        let mut rng = stream_rng(12, n as u64);
        let mut h = HRep::new(n);
        for _ in 0..3 * n {
            h.push_ineq(gen::int_vec(&mut rng, n, -4, 4), int(rng.gen_range(1..=6)));
        }
        let lp = LinearProgram::new(gen::int_vec(&mut rng, n, -3, 3), Sense::Max, h);
        group.bench_with_input(BenchmarkId::from_parameter(n), &lp, |b, lp| b.iter(|| solve(black_box(lp)).unwrap()));
    }
    group.finish();
}

fn consequence(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_consequence");
    group.sample_size(20);
    for n in [2usize, 3] {
        let mut rng = stream_rng(13, n as u64);
        let inst = gen::forward_instance(&mut rng, n, 2).unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| check_consequence(&inst.f, &inst.x_star, &inst.s, &inst.sigma).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, h_to_v, lp, consequence);
criterion_main!(benches);
