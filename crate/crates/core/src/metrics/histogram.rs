use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::CategoricalGrid;

/// Multiset of `w x w` windows keyed by their row-major cell bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternHistogram {
    pub window: usize,
    pub counts: BTreeMap<Vec<u8>, u64>,
    pub total: u64,
}

impl PatternHistogram {
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }
}

/// Counts every `w x w` window whose top-left cell lies on the `stride` lattice.
pub fn pattern_histogram(grid: &CategoricalGrid, w: usize, stride: usize) -> Result<PatternHistogram> {
    if w == 0 || w > grid.width() || w > grid.height() {
        return Err(Error::Dimension(format!(
            "window {w} does not fit a {}x{} grid",
            grid.height(),
            grid.width()
        )));
    }
    if stride == 0 {
        return Err(Error::Dimension("stride must be positive".into()));
    }
    let mut counts = BTreeMap::new();
    let mut total = 0;
    let mut key = Vec::with_capacity(w * w);
    for top in (0..=grid.height() - w).step_by(stride) {
        for left in (0..=grid.width() - w).step_by(stride) {
            key.clear();
            for r in top..top + w {
                key.extend_from_slice(&grid.row(r)[left..left + w]);
            }
            *counts.entry(key.clone()).or_insert(0) += 1;
            total += 1;
        }
    }
    Ok(PatternHistogram {
        window: w,
        counts,
        total,
    })
}

fn kl_to_mid(p: f64, m: f64) -> f64 {
    if p > 0.0 {
        p * (p / m).log2()
    } else {
        0.0
    }
}

/// Base-2 Jensen-Shannon divergence of two probability vectors over the same support.
pub fn js_divergence_probs(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Structure("distributions differ in support size".into()));
    }
    let js: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let m = 0.5 * (a + b);
            0.5 * kl_to_mid(a, m) + 0.5 * kl_to_mid(b, m)
        })
        .sum();
    Ok(js.clamp(0.0, 1.0))
}

/// Jensen-Shannon divergence of two pattern histograms over the union of their keys.
pub fn js_divergence(p: &PatternHistogram, q: &PatternHistogram) -> Result<f64> {
    if p.window != q.window {
        return Err(Error::Structure(format!(
            "window sizes differ: {} vs {}",
            p.window, q.window
        )));
    }
    if p.total == 0 || q.total == 0 {
        return Err(Error::EmptyInput("pattern histogram is empty"));
    }
    let (pt, qt) = (p.total as f64, q.total as f64);
    let mut pv = Vec::with_capacity(p.counts.len() + q.counts.len());
    let mut qv = Vec::with_capacity(pv.capacity());
    // merge-walk of the two ordered key sets
    let mut a = p.counts.iter().peekable();
    let mut b = q.counts.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some((ka, &ca)), Some((kb, &cb))) => match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    pv.push(ca as f64 / pt);
                    qv.push(0.0);
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    pv.push(0.0);
                    qv.push(cb as f64 / qt);
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    pv.push(ca as f64 / pt);
                    qv.push(cb as f64 / qt);
                    a.next();
                    b.next();
                }
            },
            (Some((_, &ca)), None) => {
                pv.push(ca as f64 / pt);
                qv.push(0.0);
                a.next();
            }
            (None, Some((_, &cb))) => {
                pv.push(0.0);
                qv.push(cb as f64 / qt);
                b.next();
            }
            (None, None) => break,
        }
    }
    js_divergence_probs(&pv, &qv)
}
