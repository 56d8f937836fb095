use ccwsim::matcher::{ccw_score_map, top_k};
use ccwsim::simulator::{plan_with, Canvas, Corner, FaciesMode, ScanOrder, SimConfig};
use ccwsim::wavelet::{approx_coefficients, dwt2};
use ccwsim_bench::bench_ti;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn transform(c: &mut Criterion) {
    let plane = bench_ti(256).to_code_plane();
    let mut group = c.benchmark_group("dwt2_256");
    for j in 1..=3 {
        group.bench_with_input(BenchmarkId::new("pyramid", j), &j, |b, &j| {
            b.iter(|| dwt2(black_box(&plane), j).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("apex_only", j), &j, |b, &j| {
            b.iter(|| approx_coefficients(black_box(&plane), j).unwrap())
        });
    }
    group.finish();
}

fn scoring(c: &mut Criterion) {
    let ti = bench_ti(256);
    let (t, ov) = (32, 8);
    let mut group = c.benchmark_group("ccw_score_l_shaped_band");
    for j in 1..=3 {
        let cfg = SimConfig::new(64, t, ov, j);
        let plan = plan_with(&cfg, Corner::TopLeft, ScanOrder::RowMajor).unwrap();
        let mut canvas = Canvas::new(plan.working_width, plan.working_height, 2).unwrap();
        let full = ti.crop(0, 0, plan.working_height, plan.working_width).unwrap();
        canvas.paste(&full, 0, 0).unwrap();
        let p = *plan.placements.last().unwrap();
        let or = canvas.extract_or(&p, t, ov, FaciesMode::RawCodes).unwrap();
        let b = 1 << j;
        let ti_approx = approx_coefficients(&ti.to_code_plane(), j).unwrap();
        let or_approx = approx_coefficients(&or.channels[0], j).unwrap();
        let mask = ccwsim::RealPlane::from_fn(t / b, t / b, |r, c| or.mask.get(r * b, c * b));
        group.bench_with_input(BenchmarkId::from_parameter(j), &j, |bch, _| {
            bch.iter(|| {
                let map = ccw_score_map(black_box(&ti_approx), &or_approx, &mask).unwrap();
                top_k(&map, 10).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, transform, scoring);
criterion_main!(benches);
