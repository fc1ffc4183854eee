//! Random geometric graphs `G(S; r)` built through a uniform bucket grid.

mod matrix;

pub use matrix::{
    hs_distance, hs_via_neighbour_counts, symmetrize, transition_matrix, DenseMatrix,
    RowStochasticMatrix, SymmetricMatrix,
};

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, PointSet};
use crate::scalar::Scalar;
use crate::spatial::BucketGrid;

/// Undirected, loop-free graph on the indices of a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph<T> {
    dim: usize,
    radius: T,
    adjacency: Vec<Vec<usize>>,
}

impl<T: Scalar> GeometricGraph<T> {
    /// Builds a graph from explicit neighbour lists, symmetrising them and
    /// dropping self-loops and duplicates.
    pub fn from_adjacency(dim: usize, radius: T, lists: Vec<Vec<usize>>) -> Result<Self> {
        let n = lists.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, list) in lists.iter().enumerate() {
            for &v in list {
                if v >= n {
                    return Err(Error::Domain(format!("neighbour {v} out of range 0..{n}")));
                }
                if u != v {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(GeometricGraph {
            dim,
            radius,
            adjacency,
        })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    /// Sorted neighbour indices of `u`.
    pub fn neighbours(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Writes the header line `n d r` followed by one `u v` line per edge, `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {:e}", self.len(), self.dim, self.radius)?;
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let parse_err = |what: &str| Error::Parse(format!("edge list: {what}"));
        let header = lines
            .next()
            .ok_or_else(|| parse_err("missing header"))?
            .map_err(|e| parse_err(&e.to_string()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [n, d, r] = fields[..] else {
            return Err(parse_err("header must be `n d r`"));
        };
        let n: usize = n.parse().map_err(|_| parse_err("bad n"))?;
        let d: usize = d.parse().map_err(|_| parse_err("bad d"))?;
        let r: f64 = r.parse().map_err(|_| parse_err("bad r"))?;
        let mut lists = vec![Vec::new(); n];
        for line in lines {
            let line = line.map_err(|e| parse_err(&e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v))) if u < n => lists[u].push(v),
                _ => return Err(parse_err(&format!("bad edge line `{line}`"))),
            }
        }
        Self::from_adjacency(d, T::of(r), lists)
    }
}

/// `G(S; r)`: edge `uv` iff `u != v` and `|u - v| <= r`.
///
/// Points are bucketed into cubical cells of side at least `r`, and each
/// point is compared only against the `3^d` cells around its own.
pub fn build_rgg<T: Scalar>(points: &PointSet<T>, r: T) -> Result<GeometricGraph<T>> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let buckets = BucketGrid::new(points, r);
    let adjacency = points
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut list = Vec::new();
            buckets.for_each_candidate(p.coords(), |j| {
                if j != i && distance_unchecked(p.coords(), buckets.points().point(j).coords()) <= r
                {
                    list.push(j);
                }
            });
            list.sort_unstable();
            list
        })
        .collect();
    Ok(GeometricGraph {
        dim: points.dim(),
        radius: r,
        adjacency,
    })
}

/// All-pairs construction, quadratic in `n`.
pub fn build_rgg_brute_force<T: Scalar>(points: &PointSet<T>, r: T) -> GeometricGraph<T> {
    let pts = points.points();
    let adjacency = (0..pts.len())
        .map(|i| {
            (0..pts.len())
                .filter(|&j| j != i && distance_unchecked(pts[i].coords(), pts[j].coords()) <= r)
                .collect()
        })
        .collect();
    GeometricGraph {
        dim: points.dim(),
        radius: r,
        adjacency,
    }
}

/// Smallest and largest degree of a graph built on a lattice point set.
pub fn grid_degree_bounds<T: Scalar>(
    g: &GeometricGraph<T>,
    points: &PointSet<T>,
) -> Result<(usize, usize)> {
    if points.grid_side().is_none() {
        return Err(Error::NotGrid);
    }
    if g.len() != points.len() {
        return Err(Error::SizeMismatch {
            left: g.len(),
            right: points.len(),
        });
    }
    let degrees = g.degrees();
    let min = degrees.iter().copied().min().unwrap_or(0);
    let max = degrees.iter().copied().max().unwrap_or(0);
    Ok((min, max))
}
