//! Eigenvalues of dense real symmetric matrices.
//!
//! Householder reduction to tridiagonal form followed by the implicit-shift
//! QL iteration. Only eigenvalues are formed; no eigenvector accumulation.

use super::SpectralError;

const MAX_SWEEPS: usize = 60;

/// Reduces the row-major symmetric `a` (order `n`) in place and returns the
/// diagonal and subdiagonal of the similar tridiagonal matrix. `off[i]`
/// couples rows `i` and `i + 1`; `off[n - 1]` is zero.
pub(crate) fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let col = |i: usize| a[(k + 1 + i) * n + k];
        let scale: f64 = (0..m).map(|i| col(i).abs()).sum();
        diag[k] = a[k * n + k];
        if scale == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let mut norm2 = 0.0;
        for (i, vi) in v.iter_mut().enumerate().take(m) {
            *vi = col(i) / scale;
            norm2 += *vi * *vi;
        }
        let norm = norm2.sqrt();
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        off[k] = scale * alpha;
        v[0] -= alpha;
        let vv = norm2 - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;

        // trailing block B <- H B H with H = I - beta v v^T
        let base = (k + 1) * n + (k + 1);
        let mut vp = 0.0;
        for i in 0..m {
            let row = &a[base + i * n..base + i * n + m];
            let s: f64 = row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum();
            p[i] = beta * s;
            vp += v[i] * p[i];
        }
        let half = 0.5 * beta * vp;
        for i in 0..m {
            p[i] -= half * v[i];
        }
        for i in 0..m {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut a[base + i * n..base + i * n + m];
            for j in 0..m {
                row[j] -= vi * p[j] + pi * v[j];
            }
        }
    }
    match n {
        0 => {}
        1 => diag[0] = a[0],
        _ => {
            diag[n - 2] = a[(n - 2) * n + n - 2];
            diag[n - 1] = a[(n - 1) * n + n - 1];
            off[n - 2] = a[(n - 1) * n + n - 2];
        }
    }
    (diag, off)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. Returns the
/// eigenvalues in ascending order.
pub(crate) fn tridiagonal_eigenvalues(
    mut diag: Vec<f64>,
    mut off: Vec<f64>,
) -> Result<Vec<f64>, SpectralError> {
    let n = diag.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(SpectralError::NoConvergence {
                    index: l,
                    iterations: sweeps,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// All eigenvalues of the row-major symmetric matrix `a`, ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>, SpectralError> {
    let mut work = a.to_vec();
    let (diag, off) = tridiagonalize(&mut work, n);
    tridiagonal_eigenvalues(diag, off)
}
