//! Brute-force reference implementations used by the integration and
//! acceptance tests. They favour the most literal formulation over speed
//! and share no code with the library.
#![allow(dead_code)]

use std::collections::HashMap;

use ccwsim::{CategoricalGrid, RealPlane};
use rand::Rng;

pub fn random_plane<R: Rng>(rng: &mut R, width: usize, height: usize) -> RealPlane {
    RealPlane::from_fn(width, height, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_grid<R: Rng>(rng: &mut R, width: usize, height: usize, k: usize) -> CategoricalGrid {
    let cells = (0..width * height).map(|_| rng.random_range(0..k) as u8).collect();
    CategoricalGrid::new(width, height, k, cells).unwrap()
}

/// Masked cross-correlation evaluated one output cell at a time.
pub fn ccw_oracle(ti: &RealPlane, or: &RealPlane, mask: &RealPlane) -> Vec<Vec<f64>> {
    let rows = ti.height() - or.height() + 1;
    let cols = ti.width() - or.width() + 1;
    let mut out = vec![vec![0.0; cols]; rows];
    for (x, row) in out.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let mut s = 0.0;
            for i in 0..or.height() {
                for j in 0..or.width() {
                    s += mask.get(i, j) * or.get(i, j) * ti.get(x + i, y + j);
                }
            }
            *cell = s;
        }
    }
    out
}

/// Level-`levels` Haar approximation by repeated 2x2 averaging with the
/// orthonormal gain of 2 per level.
pub fn haar_apex_oracle(plane: &RealPlane, levels: usize) -> RealPlane {
    let b = 1 << levels;
    let gain = 2f64.powi(levels as i32);
    RealPlane::from_fn(plane.width() / b, plane.height() / b, |r, c| {
        let mut s = 0.0;
        for i in 0..b {
            for j in 0..b {
                s += plane.get(r * b + i, c * b + j);
            }
        }
        s / gain
    })
}

fn pairs(grid: &CategoricalGrid, h: usize, east_west: bool) -> Vec<((usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for r in 0..grid.height() {
        for c in 0..grid.width() {
            let (r2, c2) = if east_west { (r, c + h) } else { (r + h, c) };
            if r2 < grid.height() && c2 < grid.width() {
                out.push(((r, c), (r2, c2)));
            }
        }
    }
    out
}

pub fn variogram_oracle(grid: &CategoricalGrid, facies: u8, east_west: bool, max_lag: usize) -> Vec<f64> {
    (1..=max_lag)
        .map(|h| {
            let ps = pairs(grid, h, east_west);
            let sum: f64 = ps
                .iter()
                .map(|&(a, b)| {
                    let ia = (grid.get(a.0, a.1) == facies) as i32 as f64;
                    let ib = (grid.get(b.0, b.1) == facies) as i32 as f64;
                    (ia - ib).powi(2)
                })
                .sum();
            0.5 * sum / ps.len() as f64
        })
        .collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Component root per cell (union-find), `None` for other facies.
pub fn components_oracle(grid: &CategoricalGrid, facies: u8) -> Vec<Option<usize>> {
    let (w, h) = (grid.width(), grid.height());
    let mut parent: Vec<usize> = (0..w * h).collect();
    for r in 0..h {
        for c in 0..w {
            if grid.get(r, c) != facies {
                continue;
            }
            for (r2, c2) in [(r + 1, c), (r, c + 1)] {
                if r2 < h && c2 < w && grid.get(r2, c2) == facies {
                    let (a, b) = (find(&mut parent, r * w + c), find(&mut parent, r2 * w + c2));
                    parent[a] = b;
                }
            }
        }
    }
    (0..w * h)
        .map(|i| (grid.cells()[i] == facies).then(|| find(&mut parent, i)))
        .collect()
}

pub fn connectivity_oracle(
    grid: &CategoricalGrid,
    facies: u8,
    east_west: bool,
    max_lag: usize,
) -> Vec<Option<f64>> {
    let comp = components_oracle(grid, facies);
    let w = grid.width();
    (1..=max_lag)
        .map(|h| {
            let (mut both, mut joined) = (0, 0);
            for ((r, c), (r2, c2)) in pairs(grid, h, east_west) {
                if let (Some(a), Some(b)) = (comp[r * w + c], comp[r2 * w + c2]) {
                    both += 1;
                    if a == b {
                        joined += 1;
                    }
                }
            }
            (both > 0).then(|| joined as f64 / both as f64)
        })
        .collect()
}

/// Window pattern counts keyed by a printable encoding of the window.
pub fn histogram_oracle(grid: &CategoricalGrid, w: usize, stride: usize) -> HashMap<String, u64> {
    let mut out = HashMap::new();
    let mut r = 0;
    while r + w <= grid.height() {
        let mut c = 0;
        while c + w <= grid.width() {
            let mut key = String::new();
            for i in 0..w {
                for j in 0..w {
                    key.push_str(&grid.get(r + i, c + j).to_string());
                    key.push('.');
                }
            }
            *out.entry(key).or_insert(0) += 1;
            c += stride;
        }
        r += stride;
    }
    out
}

pub fn js_oracle_probs(p: &[f64], q: &[f64]) -> f64 {
    let kl = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .filter(|(x, _)| **x > 0.0)
            .map(|(x, y)| x * (x / y).log2())
            .sum()
    };
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    0.5 * kl(p, &m) + 0.5 * kl(q, &m)
}

pub fn js_oracle(a: &HashMap<String, u64>, b: &HashMap<String, u64>) -> f64 {
    let mut keys: Vec<&String> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let ta: u64 = a.values().sum();
    let tb: u64 = b.values().sum();
    let p: Vec<f64> = keys.iter().map(|k| *a.get(*k).unwrap_or(&0) as f64 / ta as f64).collect();
    let q: Vec<f64> = keys.iter().map(|k| *b.get(*k).unwrap_or(&0) as f64 / tb as f64).collect();
    js_oracle_probs(&p, &q)
}

/// Every block-aligned `t x t` TI crop, keyed by its top-left corner.
pub fn aligned_crops(ti: &CategoricalGrid, t: usize, block: usize) -> Vec<((usize, usize), CategoricalGrid)> {
    let mut out = Vec::new();
    for r in (0..=ti.height() - t).step_by(block) {
        for c in (0..=ti.width() - t).step_by(block) {
            out.push(((r, c), ti.crop(r, c, t, t).unwrap()));
        }
    }
    out
}
