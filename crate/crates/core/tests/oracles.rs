mod common;

use ccwsim::matcher::ccw_score_map;
use ccwsim::metrics::*;
use ccwsim::wavelet::{approx_coefficients, dwt2};
use ccwsim::RealPlane;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn key_string(pattern: &[u8]) -> String {
    pattern.iter().map(|c| format!("{c}.")).collect()
}

#[test]
fn apex_matches_block_averaging() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..30 {
        let j = rng.random_range(1..=3);
        let b = 1 << j;
        let (w, h) = (b * rng.random_range(1..8), b * rng.random_range(1..8));
        let plane = common::random_plane(&mut rng, w, h);
        let want = common::haar_apex_oracle(&plane, j);
        assert!(dwt2(&plane, j).unwrap().approx().max_abs_diff(&want) < 1e-12);
        assert!(approx_coefficients(&plane, j).unwrap().max_abs_diff(&want) < 1e-12);
    }
}

#[test]
fn ccw_matches_quadruple_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let (tw, th) = (rng.random_range(4..24), rng.random_range(4..24));
        let (ow, oh) = (rng.random_range(1..=tw.min(6)), rng.random_range(1..=th.min(6)));
        let ti = common::random_plane(&mut rng, tw, th);
        let or = common::random_plane(&mut rng, ow, oh);
        let mask = RealPlane::from_fn(ow, oh, |_, _| rng.random_bool(0.6) as u8 as f64);
        let got = ccw_score_map(&ti, &or, &mask).unwrap();
        let want = common::ccw_oracle(&ti, &or, &mask);
        for (x, row) in want.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                assert!((got.get(x, y) - v).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn variogram_and_connectivity_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let (w, h) = (rng.random_range(2..=16), rng.random_range(2..=16));
        let k = rng.random_range(2..4);
        let g = common::random_grid(&mut rng, w, h, k);
        let f = rng.random_range(0..k) as u8;
        for (dir, ew, extent) in [(Direction::EastWest, true, w), (Direction::NorthSouth, false, h)] {
            let lag = extent - 1;
            let v = indicator_variogram(&g, f, dir, lag).unwrap();
            for (a, b) in v.gamma.iter().zip(common::variogram_oracle(&g, f, ew, lag)) {
                assert!((a - b).abs() < 1e-9);
            }
            let c = connectivity_function(&g, f, dir, lag).unwrap();
            for (a, b) in c.probability.iter().zip(common::connectivity_oracle(&g, f, ew, lag)) {
                match (a, b) {
                    (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9),
                    (None, None) => {}
                    other => panic!("definedness differs: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn component_partition_matches_union_find() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let g = common::random_grid(&mut rng, 16, 16, 2);
        let (labels, count) = label_components(&g, 1);
        let oracle = common::components_oracle(&g, 1);
        let mut roots: Vec<usize> = oracle.iter().flatten().copied().collect();
        roots.sort_unstable();
        roots.dedup();
        assert_eq!(roots.len(), count as usize);
        for i in 0..g.area() {
            for j in 0..g.area() {
                if let (Some(a), Some(b)) = (oracle[i], oracle[j]) {
                    assert_eq!(a == b, labels[i] == labels[j]);
                }
            }
        }
    }
}

#[test]
fn histograms_and_divergence_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..25 {
        let k = rng.random_range(2..4);
        let dims: Vec<usize> = (0..4).map(|_| rng.random_range(4..=16)).collect();
        let a = common::random_grid(&mut rng, dims[0], dims[1], k);
        let b = common::random_grid(&mut rng, dims[2], dims[3], k);
        let w = rng.random_range(1..=3);
        let stride = rng.random_range(1..=2);
        let (ha, hb) = (pattern_histogram(&a, w, stride).unwrap(), pattern_histogram(&b, w, stride).unwrap());
        let (oa, ob) = (common::histogram_oracle(&a, w, stride), common::histogram_oracle(&b, w, stride));
        assert_eq!(ha.distinct(), oa.len());
        assert_eq!(ha.total, oa.values().sum::<u64>());
        for (pat, n) in &ha.counts {
            assert_eq!(oa[&key_string(pat)], *n);
        }
        let js = js_divergence(&ha, &hb).unwrap();
        assert!((js - common::js_oracle(&oa, &ob)).abs() < 1e-9);
    }
}

#[test]
fn anodi_matches_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let ti = common::random_grid(&mut rng, 16, 16, 2);
    let a: Vec<_> = (0..3).map(|_| common::random_grid(&mut rng, 16, 16, 2)).collect();
    let b: Vec<_> = (0..4).map(|_| common::random_grid(&mut rng, 16, 16, 2)).collect();
    let res = anodi(&a, &b, &ti, 1, 3, None).unwrap();
    let hist = |g: &ccwsim::CategoricalGrid| common::histogram_oracle(g, 3, 1);
    let between = |e: &[ccwsim::CategoricalGrid]| {
        let mut s = 0.0;
        let mut n = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                s += common::js_oracle(&hist(&e[i]), &hist(&e[j]));
                n += 1;
            }
        }
        s / n as f64
    };
    let within = |e: &[ccwsim::CategoricalGrid]| {
        e.iter().map(|g| common::js_oracle(&hist(g), &hist(&ti))).sum::<f64>() / e.len() as f64
    };
    let want = (between(&a) / between(&b)) / (within(&a) / within(&b));
    assert!((res.r - want).abs() < 1e-9, "{} vs {want}", res.r);
}

#[test]
fn mds_recovers_planar_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 3..=10 {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect();
        let d = |p: &[f64; 2], q: &[f64; 2]| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        let dist: Vec<Vec<f64>> = pts.iter().map(|p| pts.iter().map(|q| d(p, q)).collect()).collect();
        let emb = classical_mds(&dist).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((d(&emb[i], &emb[j]) - dist[i][j]).abs() < 1e-6);
            }
        }
    }
}

fn distribution(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("all zero", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-9).then(|| v.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #[test]
    fn js_bounds_symmetry_identity((p, q) in (1usize..12).prop_flat_map(|n| (distribution(n), distribution(n)))) {
        let pq = js_divergence_probs(&p, &q).unwrap();
        let qp = js_divergence_probs(&q, &p).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&pq));
        prop_assert!((pq - qp).abs() < 1e-12);
        prop_assert!(js_divergence_probs(&p, &p).unwrap().abs() < 1e-12);
        prop_assert!((pq - common::js_oracle_probs(&p, &q)).abs() < 1e-9);
    }
}
