use serde::Serialize;

use super::{check_max_lag, Direction};
use crate::error::Result;
use crate::grid::CategoricalGrid;

/// Probability that two facies cells at lag `h` belong to one component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivitySeries {
    pub direction: Direction,
    pub facies: u8,
    pub lags: Vec<usize>,
    /// `None` where no pair at that lag has both ends in the facies.
    pub probability: Vec<Option<f64>>,
}

/// 4-connected component labels of the cells equal to `facies`.
///
/// Label 0 marks other facies; components are numbered from 1 in row-major
/// order of their first cell. Returns the labels and the component count.
pub fn label_components(grid: &CategoricalGrid, facies: u8) -> (Vec<u32>, u32) {
    let (w, h) = (grid.width(), grid.height());
    let cells = grid.cells();
    let mut labels = vec![0u32; w * h];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if cells[start] != facies || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (r, c) = (i / w, i % w);
            let mut visit = |j: usize| {
                if cells[j] == facies && labels[j] == 0 {
                    labels[j] = next;
                    stack.push(j);
                }
            };
            if r > 0 {
                visit(i - w);
            }
            if r + 1 < h {
                visit(i + w);
            }
            if c > 0 {
                visit(i - 1);
            }
            if c + 1 < w {
                visit(i + 1);
            }
        }
    }
    (labels, next)
}

/// Same-component pair fraction per lag under 4-connectivity.
pub fn connectivity_function(
    grid: &CategoricalGrid,
    facies: u8,
    direction: Direction,
    max_lag: usize,
) -> Result<ConnectivitySeries> {
    check_max_lag(grid, direction, max_lag)?;
    let (labels, _) = label_components(grid, facies);
    let probability = (1..=max_lag)
        .map(|h| {
            let (mut both, mut joined) = (0u64, 0u64);
            direction.for_each_pair(grid.width(), grid.height(), h, |a, b| {
                if labels[a] != 0 && labels[b] != 0 {
                    both += 1;
                    joined += (labels[a] == labels[b]) as u64;
                }
            });
            (both > 0).then(|| joined as f64 / both as f64)
        })
        .collect();
    Ok(ConnectivitySeries {
        direction,
        facies,
        lags: (1..=max_lag).collect(),
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, rows: &[&str]) -> CategoricalGrid {
        let cells: Vec<u8> = rows.iter().flat_map(|r| r.bytes().map(|b| b - b'0')).collect();
        CategoricalGrid::new(w, rows.len(), 2, cells).unwrap()
    }

    #[test]
    fn single_channel() {
        let g = grid(6, &["000000", "111111", "111111", "000000"]);
        let s = connectivity_function(&g, 1, Direction::EastWest, 5).unwrap();
        assert!(s.probability.iter().all(|&p| p == Some(1.0)));
    }

    #[test]
    fn separated_columns() {
        // columns 1 and 4 are facies 1, separated by a gap
        let g = grid(6, &["010010"; 6]);
        let (_, n) = label_components(&g, 1);
        assert_eq!(n, 2);
        let s = connectivity_function(&g, 1, Direction::EastWest, 5).unwrap();
        assert_eq!(s.probability[2], Some(0.0));
        assert_eq!(s.probability[0], None);
        let ns = connectivity_function(&g, 1, Direction::NorthSouth, 5).unwrap();
        assert!(ns.probability.iter().all(|&p| p == Some(1.0)));
    }

    #[test]
    fn checkerboard_isolated() {
        let g = grid(4, &["0101", "1010", "0101", "1010"]);
        let (_, n) = label_components(&g, 1);
        assert_eq!(n, 8);
        let s = connectivity_function(&g, 1, Direction::EastWest, 3).unwrap();
        assert_eq!(s.probability[1], Some(0.0));
        assert_eq!(s.probability[0], None);
        assert!(s.probability.iter().all(|p| p.is_none_or(|v| v == 0.0)));
    }

    #[test]
    fn absent_facies_undefined() {
        let g = grid(4, &["0000", "0000"]);
        let s = connectivity_function(&g, 1, Direction::EastWest, 3).unwrap();
        assert!(s.probability.iter().all(Option::is_none));
    }
}
