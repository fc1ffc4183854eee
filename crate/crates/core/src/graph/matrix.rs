use crate::error::{Error, Result};
use crate::graph::GeometricGraph;
use crate::scalar::Scalar;

/// Square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                left: n,
                right: row.len(),
            });
        }
        Ok(DenseMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn trace(&self) -> T {
        (0..self.n)
            .map(|i| self.get(i, i))
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Transition matrix of the simple random walk on a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RowStochasticMatrix<T>(DenseMatrix<T>);

impl<T: Scalar> RowStochasticMatrix<T> {
    pub fn as_dense(&self) -> &DenseMatrix<T> {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn into_dense(self) -> DenseMatrix<T> {
        self.0
    }
}

/// Exactly symmetric dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T>(DenseMatrix<T>);

impl<T: Scalar> SymmetricMatrix<T> {
    /// Fails unless `m[i][j] == m[j][i]` for every pair.
    pub fn new(m: DenseMatrix<T>) -> Result<Self> {
        if m.is_symmetric() {
            Ok(SymmetricMatrix(m))
        } else {
            Err(Error::Domain("matrix is not symmetric".into()))
        }
    }

    pub fn as_dense(&self) -> &DenseMatrix<T> {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn into_dense(self) -> DenseMatrix<T> {
        self.0
    }
}

fn check_no_isolated<T: Scalar>(g: &GeometricGraph<T>) -> Result<()> {
    match (0..g.len()).find(|&u| g.degree(u) == 0) {
        Some(u) => Err(Error::IsolatedVertex(u)),
        None => Ok(()),
    }
}

/// `P(G)_{uv} = [u ~ v] / |N(u)|`.
pub fn transition_matrix<T: Scalar>(g: &GeometricGraph<T>) -> Result<RowStochasticMatrix<T>> {
    check_no_isolated(g)?;
    let mut m = DenseMatrix::zeros(g.len());
    for u in 0..g.len() {
        let w = T::one() / T::of_usize(g.degree(u));
        for &v in g.neighbours(u) {
            m.set(u, v, w);
        }
    }
    Ok(RowStochasticMatrix(m))
}

/// `D^{-1/2} A D^{-1/2}`, similar to the transition matrix.
pub fn symmetrize<T: Scalar>(g: &GeometricGraph<T>) -> Result<SymmetricMatrix<T>> {
    check_no_isolated(g)?;
    let mut m = DenseMatrix::zeros(g.len());
    for u in 0..g.len() {
        let du = g.degree(u);
        for &v in g.neighbours(u) {
            let w = T::one() / (T::of_usize(du) * T::of_usize(g.degree(v))).sqrt();
            m.set(u, v, w);
        }
    }
    Ok(SymmetricMatrix(m))
}

pub(crate) fn check_bijection(phi: &[usize], n: usize) -> Result<()> {
    if phi.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: phi.len(),
        });
    }
    let mut hit = vec![false; n];
    for &j in phi {
        if j >= n || std::mem::replace(&mut hit[j], true) {
            return Err(Error::NotBijection(n));
        }
    }
    Ok(())
}

/// Normalised Hilbert-Schmidt distance after relabelling the second matrix
/// through `phi`: `((1/n) sum_{u,v} (P_uv - Q_{phi(u) phi(v)})^2)^{1/2}`.
pub fn hs_distance<T: Scalar>(p: &DenseMatrix<T>, q: &DenseMatrix<T>, phi: &[usize]) -> Result<T> {
    let n = p.order();
    if q.order() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: q.order(),
        });
    }
    check_bijection(phi, n)?;
    let mut total = T::zero();
    for u in 0..n {
        let q_row = q.row(phi[u]);
        let row: T = p
            .row(u)
            .iter()
            .zip(phi)
            .map(|(&a, &pv)| (a - q_row[pv]) * (a - q_row[pv]))
            .fold(T::zero(), |acc, x| acc + x);
        total = total + row;
    }
    if n == 0 {
        return Ok(T::zero());
    }
    Ok((total / T::of_usize(n)).sqrt())
}

/// The same distance as [`hs_distance`] on the walk matrices of `gx` and `gd`,
/// evaluated per vertex from neighbour counts:
/// `1/|N(u)| + 1/|N(u')| - 2 |N(u, u')| / (|N(u)| |N(u')|)`, where
/// `N(u, u')` holds the neighbours of `u` whose images neighbour `u' = phi(u)`.
pub fn hs_via_neighbour_counts<T: Scalar>(
    gx: &GeometricGraph<T>,
    gd: &GeometricGraph<T>,
    phi: &[usize],
) -> Result<T> {
    let n = gx.len();
    if gd.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: gd.len(),
        });
    }
    check_bijection(phi, n)?;
    check_no_isolated(gx)?;
    check_no_isolated(gd)?;
    if n == 0 {
        return Ok(T::zero());
    }
    let mut marked = vec![false; n];
    let mut total = T::zero();
    for u in 0..n {
        let image = phi[u];
        for &w in gd.neighbours(image) {
            marked[w] = true;
        }
        let shared = gx.neighbours(u).iter().filter(|&&v| marked[phi[v]]).count();
        for &w in gd.neighbours(image) {
            marked[w] = false;
        }
        let a = T::of_usize(gx.degree(u));
        let b = T::of_usize(gd.degree(image));
        total = total + T::one() / a + T::one() / b - T::of_usize(2 * shared) / (a * b);
    }
    // Cancellation can leave a tiny negative residue when the graphs coincide.
    Ok((total / T::of_usize(n)).max(T::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_grid, sample_uniform};
    use crate::graph::build_rgg;

    fn graph(n: usize, edges: &[(usize, usize)]) -> GeometricGraph<f64> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            lists[u].push(v);
        }
        GeometricGraph::from_adjacency(2, 1.0, lists).unwrap()
    }

    /// Straight double sum, column-major order.
    fn hs_oracle(p: &DenseMatrix<f64>, q: &DenseMatrix<f64>, phi: &[usize]) -> f64 {
        let n = p.order();
        let mut s = 0.0;
        for v in (0..n).rev() {
            for u in (0..n).rev() {
                let diff = p.get(u, v) - q.get(phi[u], phi[v]);
                s += diff * diff;
            }
        }
        (s / n as f64).sqrt()
    }

    #[test]
    fn triangle_walk() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let p = transition_matrix(&k3).unwrap();
        let s = symmetrize(&k3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 0.5 };
                assert_eq!(p.as_dense().get(i, j), want);
                assert_eq!(s.as_dense().get(i, j), want);
            }
        }
    }

    #[test]
    fn isolated_vertex_is_an_error() {
        let g = graph(3, &[(0, 1)]);
        assert_eq!(transition_matrix(&g), Err(Error::IsolatedVertex(2)));
        assert_eq!(symmetrize(&g), Err(Error::IsolatedVertex(2)));
    }

    #[test]
    fn star_symmetrization() {
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let s = symmetrize(&star).unwrap();
        for leaf in 1..4 {
            assert!((s.as_dense().get(0, leaf) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn random_instance_rows_and_symmetry() {
        let pts = sample_uniform::<f64>(50, 2, 5).unwrap();
        let g = build_rgg(&pts, 0.45).unwrap();
        let p = transition_matrix(&g).unwrap();
        for u in 0..50 {
            let s: f64 = p.as_dense().row(u).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert_eq!(p.as_dense().get(u, u), 0.0);
        }
        let s = symmetrize(&g).unwrap();
        assert!(s.as_dense().is_symmetric());
        assert!(s
            .as_dense()
            .as_slice()
            .iter()
            .all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn hs_trivial_cases() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let p = transition_matrix(&k3).unwrap().into_dense();
        assert_eq!(hs_distance(&p, &p, &[0, 1, 2]).unwrap(), 0.0);
        let k2 = transition_matrix(&graph(2, &[(0, 1)]))
            .unwrap()
            .into_dense();
        assert_eq!(hs_distance(&k2, &k2, &[1, 0]).unwrap(), 0.0);
        assert_eq!(hs_distance(&p, &p, &[0, 0, 2]), Err(Error::NotBijection(3)));
        assert!(hs_distance(&p, &k2, &[0, 1]).is_err());
    }

    #[test]
    fn triangle_vs_path_both_formulas() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let a = transition_matrix(&k3).unwrap().into_dense();
        let b = transition_matrix(&p3).unwrap().into_dense();
        for phi in [[0, 1, 2], [1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let dense = hs_distance(&a, &b, &phi).unwrap();
            let counts = hs_via_neighbour_counts(&k3, &p3, &phi).unwrap();
            assert!((dense - counts).abs() < 1e-14);
            assert!((dense - hs_oracle(&a, &b, &phi)).abs() < 1e-14);
        }
    }

    #[test]
    fn six_vertex_pair_against_oracle() {
        let g1 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        let g2 = graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (3, 4)]);
        let a = transition_matrix(&g1).unwrap().into_dense();
        let b = transition_matrix(&g2).unwrap().into_dense();
        let phi = [3, 5, 0, 1, 4, 2];
        let v = hs_distance(&a, &b, &phi).unwrap();
        assert!((v - hs_oracle(&a, &b, &phi)).abs() < 1e-14);
        assert!((v - hs_via_neighbour_counts(&g1, &g2, &phi).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn rgg_grid_pair_formulas_agree() {
        let grid = make_grid::<f64>(10, 2).unwrap();
        let pts = sample_uniform::<f64>(100, 2, 77).unwrap();
        let gd = build_rgg(&grid, 0.3).unwrap();
        let gx = build_rgg(&pts, 0.3).unwrap();
        let phi: Vec<usize> = (0..100).map(|i| (i * 37) % 100).collect();
        let a = transition_matrix(&gx).unwrap().into_dense();
        let b = transition_matrix(&gd).unwrap().into_dense();
        let dense = hs_distance(&a, &b, &phi).unwrap();
        let counts = hs_via_neighbour_counts(&gx, &gd, &phi).unwrap();
        assert!((dense - counts).abs() < 1e-12);
    }
}
