//! Dense symmetric eigenvalues: Householder tridiagonalisation followed by
//! implicit-shift QL.
//!
//! Only the lower triangle of the input is read. The reduction fuses each
//! rank-two update with the matrix-vector product of the following step, so
//! every step streams the remaining lower triangle once.

use crate::error::{Error, Result};
use crate::graph::SymmetricMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig<T> {
    /// Relative deflation tolerance for off-diagonal entries. Never taken
    /// below the scalar's machine epsilon.
    pub tol: T,
    /// QL iterations allowed per eigenvalue.
    pub max_sweeps: usize,
}

impl<T: Scalar> Default for EigenConfig<T> {
    fn default() -> Self {
        EigenConfig {
            tol: T::of(1e-12),
            max_sweeps: 30,
        }
    }
}

/// Householder vector for row `i` (entries `0..i`), written in place.
/// Sets `off[i]` and returns `h = |u|^2 / 2` when a reflection is needed.
fn prepare_row<T: Scalar>(row: &mut [T], off: &mut [T], i: usize) -> Option<T> {
    let l = i - 1;
    if l == 0 {
        off[i] = row[0];
        return None;
    }
    let scale = row.iter().fold(T::zero(), |acc, &x| acc + x.abs());
    if scale == T::zero() {
        off[i] = row[l];
        return None;
    }
    let mut h = T::zero();
    for x in row.iter_mut() {
        *x = *x / scale;
        h = h + *x * *x;
    }
    let f = row[l];
    let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
    off[i] = scale * g;
    h = h - f * g;
    row[l] = f - g;
    Some(h)
}

const LANES: usize = 8;

/// `row -= uj q + qj u`, then `p += vj row` and returns `row . v`, over
/// equal-length slices. Independent partial sums let the loop vectorise.
#[inline]
fn update_dot_axpy<T: Scalar>(
    row: &mut [T],
    (u, q, v): (&[T], &[T], &[T]),
    p: &mut [T],
    (uj, qj, vj): (T, T, T),
) -> T {
    let len = row.len();
    let split = len - len % LANES;
    let mut acc = [T::zero(); LANES];
    let (row_main, row_tail) = row.split_at_mut(split);
    let (p_main, p_tail) = p[..len].split_at_mut(split);
    for ((((r, p), u), q), v) in row_main
        .chunks_exact_mut(LANES)
        .zip(p_main.chunks_exact_mut(LANES))
        .zip(u[..split].chunks_exact(LANES))
        .zip(q[..split].chunks_exact(LANES))
        .zip(v[..split].chunks_exact(LANES))
    {
        let r: &mut [T; LANES] = r.try_into().unwrap();
        let p: &mut [T; LANES] = p.try_into().unwrap();
        let (u, q, v): (&[T; LANES], &[T; LANES], &[T; LANES]) = (
            u.try_into().unwrap(),
            q.try_into().unwrap(),
            v.try_into().unwrap(),
        );
        for l in 0..LANES {
            let x = r[l] - (uj * q[l] + qj * u[l]);
            r[l] = x;
            acc[l] = acc[l] + x * v[l];
            p[l] = p[l] + x * vj;
        }
    }
    let mut total = acc.iter().fold(T::zero(), |s, &a| s + a);
    for k in 0..row_tail.len() {
        let x = row_tail[k] - (uj * q[split + k] + qj * u[split + k]);
        row_tail[k] = x;
        total = total + x * v[split + k];
        p_tail[k] = p_tail[k] + x * vj;
    }
    total
}

/// `p += uj row` and returns `row . u`.
#[inline]
fn dot_axpy<T: Scalar>(row: &[T], u: &[T], p: &mut [T], uj: T) -> T {
    let len = row.len();
    let split = len - len % LANES;
    let mut acc = [T::zero(); LANES];
    for ((r, p), u) in row[..split]
        .chunks_exact(LANES)
        .zip(p[..split].chunks_exact_mut(LANES))
        .zip(u[..split].chunks_exact(LANES))
    {
        let r: &[T; LANES] = r.try_into().unwrap();
        let p: &mut [T; LANES] = p.try_into().unwrap();
        let u: &[T; LANES] = u.try_into().unwrap();
        for l in 0..LANES {
            acc[l] = acc[l] + r[l] * u[l];
            p[l] = p[l] + r[l] * uj;
        }
    }
    let mut total = acc.iter().fold(T::zero(), |s, &a| s + a);
    for k in split..len {
        total = total + row[k] * u[k];
        p[k] = p[k] + row[k] * uj;
    }
    total
}

/// `p[0..i] = A[0..i, 0..i] u` from the lower triangle.
fn lower_matvec<T: Scalar>(a: &[T], n: usize, u: &[T], p: &mut [T]) {
    let i = u.len();
    p[..i].fill(T::zero());
    for j in 0..i {
        let row = &a[j * n..j * n + j + 1];
        let uj = u[j];
        let acc = dot_axpy(&row[..j], &u[..j], &mut p[..j], uj);
        p[j] = p[j] + acc + row[j] * uj;
    }
}

/// Reduces the lower triangle of `a` (row-major, order `n`) to tridiagonal
/// form. Returns the diagonal and the subdiagonal (`off[i]` couples `i - 1`
/// and `i`; `off[0] = 0`).
pub fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), n * n);
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n];
    if n == 0 {
        return (diag, off);
    }
    let mut p = vec![T::zero(); n];
    let mut q = vec![T::zero(); n];
    // Reflection of the upcoming row, with `p = A u` already accumulated.
    let mut prepared: Option<Option<T>> = None;

    for i in (1..n).rev() {
        let h = match prepared.take() {
            Some(h) => h,
            None => {
                let (upper, lower) = a.split_at_mut(i * n);
                let h = prepare_row(&mut lower[..i], &mut off, i);
                if h.is_some() {
                    lower_matvec(upper, n, &lower[..i], &mut p);
                }
                h
            }
        };
        if let Some(h) = h {
            let (upper, lower) = a.split_at_mut(i * n);
            let u = &lower[..i];
            let mut f = T::zero();
            for j in 0..i {
                p[j] = p[j] / h;
                f = f + p[j] * u[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                q[j] = p[j] - hh * u[j];
            }

            // Row i - 1 first: it carries the next reflection.
            let (rows, next) = upper.split_at_mut((i - 1) * n);
            let next = &mut next[..i];
            let (ul, ql) = (u[i - 1], q[i - 1]);
            for k in 0..i {
                next[k] = next[k] - (ul * q[k] + ql * u[k]);
            }
            if i > 1 {
                let next_h = prepare_row(&mut next[..i - 1], &mut off, i - 1);
                let v = &next[..i - 1];
                if next_h.is_some() {
                    p[..i - 1].fill(T::zero());
                }
                for j in 0..i - 1 {
                    let row = &mut rows[j * n..j * n + j + 1];
                    let (uj, qj) = (u[j], q[j]);
                    if next_h.is_some() {
                        let vj = v[j];
                        let acc = update_dot_axpy(
                            &mut row[..j],
                            (&u[..j], &q[..j], &v[..j]),
                            &mut p[..j],
                            (uj, qj, vj),
                        );
                        let x = row[j] - (uj * q[j] + qj * u[j]);
                        row[j] = x;
                        p[j] = p[j] + acc + x * vj;
                    } else {
                        for k in 0..=j {
                            row[k] = row[k] - (uj * q[k] + qj * u[k]);
                        }
                    }
                }
                prepared = Some(next_h);
            }
        }
        diag[i] = a[i * n + i];
    }
    diag[0] = a[0];
    (diag, off)
}

/// Eigenvalues of a symmetric tridiagonal matrix by QL with implicit shifts.
/// `off[i]` couples `i - 1` and `i`. Returned unsorted.
pub fn tridiagonal_eigenvalues<T: Scalar>(
    mut d: Vec<T>,
    off: &[T],
    cfg: &EigenConfig<T>,
) -> Result<Vec<T>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    let tol = cfg.tol.max(T::epsilon());
    let two = T::of(2.0);
    let mut e: Vec<T> = off[1..].to_vec();
    e.push(T::zero());

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= tol * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == cfg.max_sweeps {
                return Err(Error::NoConvergence(cfg.max_sweeps));
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(d)
}

/// All eigenvalues of `m`, sorted descending.
pub fn symmetric_eigenvalues<T: Scalar>(
    m: &SymmetricMatrix<T>,
    cfg: &EigenConfig<T>,
) -> Result<Vec<T>> {
    let n = m.order();
    let mut a = m.as_dense().as_slice().to_vec();
    let (diag, off) = tridiagonalize(&mut a, n);
    let mut values = tridiagonal_eigenvalues(diag, &off, cfg)?;
    values.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(values)
}
