//! Classical (Torgerson) multidimensional scaling.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::histogram::{js_divergence, PatternHistogram};
use crate::error::{Error, Result};

/// Embeds a distance matrix into the plane.
///
/// Double-centres the squared distances, `B = -1/2 J D^2 J`, and scales the
/// two leading eigenvectors of `B` by the square roots of their eigenvalues
/// (negative eigenvalues clamp to zero).
pub fn classical_mds(distances: &[Vec<f64>]) -> Result<Vec<[f64; 2]>> {
    let n = distances.len();
    for (i, row) in distances.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Validation(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, &d) in row.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::Validation(format!("entry ({i}, {j}) = {d} is not a distance")));
            }
            if (d - distances[j][i]).abs() > 1e-12 * d.abs().max(1.0) {
                return Err(Error::Validation(format!("matrix not symmetric at ({i}, {j})")));
            }
        }
        if row[i] != 0.0 {
            return Err(Error::Validation(format!("diagonal entry {i} is non-zero")));
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let d2 = DMatrix::from_fn(n, n, |i, j| distances[i][j] * distances[i][j]);
    let row_means: Vec<f64> = (0..n).map(|i| d2.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (d2[(i, j)] - row_means[i] - row_means[j] + grand));

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));

    let mut coords = vec![[0.0; 2]; n];
    for (axis, &k) in order.iter().take(2).enumerate() {
        let scale = eig.eigenvalues[k].max(0.0).sqrt();
        for (i, c) in coords.iter_mut().enumerate() {
            c[axis] = eig.eigenvectors[(i, k)] * scale;
        }
    }
    Ok(coords)
}

/// Symmetric matrix of pairwise JS divergences.
pub fn js_distance_matrix(hists: &[PatternHistogram]) -> Result<Vec<Vec<f64>>> {
    let n = hists.len();
    let upper = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| js_divergence(&hists[i], &hists[j]))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        for (k, d) in row.into_iter().enumerate() {
            m[i][i + 1 + k] = d;
            m[i + 1 + k][i] = d;
        }
    }
    Ok(m)
}
