//! `R = 1` contour on a `(t, x)` grid by marching squares.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::intervals::{bisect, inside, ARG_TOL};
use crate::inequalities::VIOLATION_TOL;

/// Target `|R - 1|` at refined contour vertices.
pub const VALUE_TOL: f64 = 1e-9;

/// A grid edge: `H(i, j)` joins `(t_i, x_j)` and `(t_{i+1}, x_j)`,
/// `V(i, j)` joins `(t_i, x_j)` and `(t_i, x_{j+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Polylines through the refined crossings of `R = 1`.
///
/// `values[j][i]` is `R(t_i, x_j)`. Cells with an undefined corner are
/// skipped. Saddle cells are resolved by evaluating `R` at the cell centre.
/// Closed loops repeat their first vertex at the end.
pub(crate) fn extract_contour<F>(
    f: &F,
    ts: &[f64],
    xs: &[f64],
    values: &[Vec<Option<f64>>],
) -> Vec<Vec<(f64, f64)>>
where
    F: Fn(f64, f64) -> Option<f64> + Sync,
{
    let mut adjacency: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
    let mut link = |a: Edge, b: Edge| {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    };

    for j in 0..xs.len().saturating_sub(1) {
        for i in 0..ts.len().saturating_sub(1) {
            let corners = [
                values[j][i],
                values[j][i + 1],
                values[j + 1][i + 1],
                values[j + 1][i],
            ];
            if corners.iter().any(Option::is_none) {
                continue;
            }
            let side = corners.map(inside);
            // Edge k joins corner k and corner k + 1.
            let edges = [
                Edge::H(i, j),
                Edge::V(i + 1, j),
                Edge::H(i, j + 1),
                Edge::V(i, j),
            ];
            let cut: Vec<usize> = (0..4).filter(|&k| side[k] != side[(k + 1) % 4]).collect();
            match cut.len() {
                2 => link(edges[cut[0]], edges[cut[1]]),
                4 => {
                    let centre = f(0.5 * (ts[i] + ts[i + 1]), 0.5 * (xs[j] + xs[j + 1]));
                    let centre_side = match centre {
                        Some(r) => inside(Some(r)),
                        None => {
                            corners.iter().map(|c| c.unwrap_or(1.0)).sum::<f64>()
                                < 4.0 - 4.0 * VIOLATION_TOL
                        }
                    };
                    if centre_side == side[0] {
                        // Corners 0 and 2 connect through the centre.
                        link(edges[0], edges[1]);
                        link(edges[2], edges[3]);
                    } else {
                        link(edges[3], edges[0]);
                        link(edges[1], edges[2]);
                    }
                }
                _ => {}
            }
        }
    }

    let crossing_edges: Vec<Edge> = adjacency.keys().copied().collect();
    let points: BTreeMap<Edge, (f64, f64)> = crossing_edges
        .par_iter()
        .map(|&e| (e, refine(f, ts, xs, e)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut visited = BTreeSet::new();
    let mut lines = Vec::new();
    let walk = |start: Edge, visited: &mut BTreeSet<Edge>| {
        let mut line = vec![points[&start]];
        visited.insert(start);
        let mut cur = start;
        while let Some(&next) = adjacency[&cur].iter().find(|e| !visited.contains(*e)) {
            visited.insert(next);
            line.push(points[&next]);
            cur = next;
        }
        if cur != start && adjacency[&cur].contains(&start) && adjacency[&start].len() == 2 {
            line.push(points[&start]);
        }
        line
    };
    for (&e, nb) in &adjacency {
        if nb.len() == 1 && !visited.contains(&e) {
            lines.push(walk(e, &mut visited));
        }
    }
    for &e in adjacency.keys() {
        if !visited.contains(&e) {
            lines.push(walk(e, &mut visited));
        }
    }
    lines
}

fn refine<F>(f: &F, ts: &[f64], xs: &[f64], edge: Edge) -> (f64, f64)
where
    F: Fn(f64, f64) -> Option<f64>,
{
    match edge {
        Edge::H(i, j) => {
            let x = xs[j];
            let (t, _) = bisect(&|t| f(t, x), ts[i], ts[i + 1], ARG_TOL, VALUE_TOL);
            (t, x)
        }
        Edge::V(i, j) => {
            let t = ts[i];
            let (x, _) = bisect(&|x| f(t, x), xs[j], xs[j + 1], ARG_TOL, VALUE_TOL);
            (t, x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linspace(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn sample<F: Fn(f64, f64) -> Option<f64>>(
        f: &F,
        ts: &[f64],
        xs: &[f64],
    ) -> Vec<Vec<Option<f64>>> {
        xs.iter()
            .map(|&x| ts.iter().map(|&t| f(t, x)).collect())
            .collect()
    }

    #[test]
    fn circle_is_one_closed_loop() {
        let f = |t: f64, x: f64| Some(0.5 + (t * t + x * x));
        let ts = linspace(21, -1.0, 1.0);
        let xs = linspace(21, -1.0, 1.0);
        let lines = extract_contour(&f, &ts, &xs, &sample(&f, &ts, &xs));
        assert_eq!(lines.len(), 1);
        let line = &lines[0];
        assert_eq!(line.first(), line.last());
        for &(t, x) in line {
            assert!((f(t, x).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn straight_line_is_open() {
        let f = |t: f64, x: f64| Some(1.0 + t - x);
        let ts = linspace(5, 0.0, 1.0);
        let xs = linspace(7, 0.05, 0.95);
        let lines = extract_contour(&f, &ts, &xs, &sample(&f, &ts, &xs));
        assert_eq!(lines.len(), 1);
        assert_ne!(lines[0].first(), lines[0].last());
        for &(t, x) in &lines[0] {
            assert!((t - x).abs() < 1e-9);
        }
    }

    #[test]
    fn no_crossing_no_contour() {
        let f = |_: f64, _: f64| Some(2.0);
        let ts = linspace(3, 0.0, 1.0);
        let xs = linspace(3, 0.0, 1.0);
        assert!(extract_contour(&f, &ts, &xs, &sample(&f, &ts, &xs)).is_empty());
    }

    #[test]
    fn saddle_uses_centre() {
        // R - 1 = t x on a 2x2 grid centred on the saddle; the centre is
        // exactly on the contour, treated as outside.
        let f = |t: f64, x: f64| Some(1.0 + t * x);
        let ts = vec![-1.0, 1.0];
        let xs = vec![-1.0, 1.0];
        let lines = extract_contour(&f, &ts, &xs, &sample(&f, &ts, &xs));
        assert_eq!(lines.len(), 2);
    }
}
