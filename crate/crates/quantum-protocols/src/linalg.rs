use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

const COLLAPSE: f64 = 1e-10;

pub(crate) fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Modified Gram-Schmidt (two passes) over the listed columns in order.
/// Returns false if a column collapses.
pub(crate) fn orthonormalize_columns(m: &mut DMatrix<C64>, cols: &[usize]) -> bool {
    for (i, &c) in cols.iter().enumerate() {
        for _ in 0..2 {
            for &p in &cols[..i] {
                let cp = m.column(p).clone_owned();
                let proj = cp.dotc(&m.column(c));
                let mut col = m.column_mut(c);
                col -= cp * proj;
            }
        }
        let norm = m.column(c).norm();
        if norm < COLLAPSE {
            return false;
        }
        m.column_mut(c).unscale_mut(norm);
    }
    true
}

/// Component of `v` orthogonal to the span of `others`.
pub(crate) fn project_out(v: &DVector<C64>, others: &[DVector<C64>]) -> DVector<C64> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for o in others {
        let mut w = o.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&w);
                w -= b * p;
            }
        }
        let n = w.norm();
        if n > COLLAPSE {
            basis.push(w.unscale(n));
        }
    }
    let mut out = v.clone();
    for _ in 0..2 {
        for b in &basis {
            let p = b.dotc(&out);
            out -= b * p;
        }
    }
    out
}

/// Real constraint vector: `|x_v|^2 - 1` per vertex, then `Re`, `Im` of
/// `<x_u, x_v>` per edge (0-based endpoints).
fn residual(x: &DMatrix<C64>, edges: &[(usize, usize)]) -> DVector<f64> {
    let n = x.ncols();
    let mut r = DVector::zeros(n + 2 * edges.len());
    for v in 0..n {
        r[v] = x.column(v).norm_squared() - 1.0;
    }
    for (e, &(u, v)) in edges.iter().enumerate() {
        let ip = x.column(u).dotc(&x.column(v));
        r[n + 2 * e] = ip.re;
        r[n + 2 * e + 1] = ip.im;
    }
    r
}

fn jacobian(x: &DMatrix<C64>, edges: &[(usize, usize)]) -> DMatrix<f64> {
    let (d, n) = (x.nrows(), x.ncols());
    let idx = |v: usize, k: usize| 2 * (v * d + k);
    let mut j = DMatrix::zeros(n + 2 * edges.len(), 2 * d * n);
    for v in 0..n {
        for k in 0..d {
            let z = x[(k, v)];
            j[(v, idx(v, k))] = 2.0 * z.re;
            j[(v, idx(v, k) + 1)] = 2.0 * z.im;
        }
    }
    for (e, &(u, v)) in edges.iter().enumerate() {
        let (re, im) = (n + 2 * e, n + 2 * e + 1);
        for k in 0..d {
            let (a, b) = (x[(k, u)].re, x[(k, u)].im);
            let (c, dd) = (x[(k, v)].re, x[(k, v)].im);
            j[(re, idx(u, k))] = c;
            j[(re, idx(u, k) + 1)] = dd;
            j[(re, idx(v, k))] = a;
            j[(re, idx(v, k) + 1)] = b;
            j[(im, idx(u, k))] = dd;
            j[(im, idx(u, k) + 1)] = -c;
            j[(im, idx(v, k))] = -b;
            j[(im, idx(v, k) + 1)] = a;
        }
    }
    j
}

/// Gauss-Newton projection onto unit columns that are orthogonal on
/// `edges`. Returns false if the residual does not drop below `1e-13`.
pub(crate) fn project_to_constraints(
    x: &mut DMatrix<C64>,
    edges: &[(usize, usize)],
    max_iter: usize,
) -> bool {
    for _ in 0..max_iter {
        let r = residual(x, edges);
        if r.amax() < 1e-13 {
            return true;
        }
        let svd = jacobian(x, edges).svd(true, true);
        let Ok(step) = svd.solve(&r, 1e-12) else {
            return false;
        };
        // column-major iteration visits (k, v) at v * d + k, as in `jacobian`
        for (i, z) in x.iter_mut().enumerate() {
            z.re -= step[2 * i];
            z.im -= step[2 * i + 1];
        }
        if !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
    }
    residual(x, edges).amax() < 1e-13
}
