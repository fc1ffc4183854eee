//! Uniform bucket grid over the unit cube for fixed-radius neighbour queries.

use crate::geometry::PointSet;
use crate::scalar::Scalar;

/// Points counting-sorted into cubical cells of side at least `reach`. Every
/// point within `reach` of a query lies in the `3^d` cells around the query's
/// own cell.
pub(crate) struct BucketGrid<'a, T> {
    points: &'a PointSet<T>,
    cells: usize,
    start: Vec<usize>,
    order: Vec<usize>,
    offsets: Vec<Vec<isize>>,
}

impl<'a, T: Scalar> BucketGrid<'a, T> {
    pub(crate) fn new(points: &'a PointSet<T>, reach: T) -> Self {
        let n = points.len();
        let d = points.dim();
        // Cell side 1 / cells must stay >= reach; the second cap keeps the
        // bucket count near the point count for tiny radii.
        let by_reach = (T::one() / reach)
            .floor()
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(1);
        let by_count = ((n.max(1) as f64).powf(1.0 / d as f64).floor() as usize).max(1) + 1;
        let cells = by_reach.min(by_count);

        let mut grid = BucketGrid {
            points,
            cells,
            start: vec![0; cells.pow(d as u32) + 1],
            order: vec![0; n],
            offsets: (0..3usize.pow(d as u32))
                .map(|mut k| {
                    (0..d)
                        .map(|_| {
                            let o = (k % 3) as isize - 1;
                            k /= 3;
                            o
                        })
                        .collect()
                })
                .collect(),
        };
        let keys: Vec<usize> = points
            .points()
            .iter()
            .map(|p| grid.key(p.coords()))
            .collect();
        for &k in &keys {
            grid.start[k + 1] += 1;
        }
        for i in 1..grid.start.len() {
            grid.start[i] += grid.start[i - 1];
        }
        let mut fill = grid.start.clone();
        for (i, &k) in keys.iter().enumerate() {
            grid.order[fill[k]] = i;
            fill[k] += 1;
        }
        grid
    }

    fn cell(&self, x: T) -> usize {
        (x * T::of_usize(self.cells))
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(self.cells - 1)
    }

    fn key(&self, coords: &[T]) -> usize {
        coords
            .iter()
            .rev()
            .fold(0, |acc, &x| acc * self.cells + self.cell(x))
    }

    /// Calls `f` with the index of every point in the cells adjacent to the
    /// query's cell (the query's own index included, if it is a member).
    pub(crate) fn for_each_candidate(&self, query: &[T], mut f: impl FnMut(usize)) {
        let home: Vec<usize> = query.iter().map(|&x| self.cell(x)).collect();
        'offsets: for off in &self.offsets {
            let mut key = 0usize;
            for (&c, &o) in home.iter().zip(off).rev() {
                let q = c as isize + o;
                if q < 0 || q >= self.cells as isize {
                    continue 'offsets;
                }
                key = key * self.cells + q as usize;
            }
            for &j in &self.order[self.start[key]..self.start[key + 1]] {
                f(j);
            }
        }
    }

    pub(crate) fn points(&self) -> &PointSet<T> {
        self.points
    }
}
