//! Small dense solvers. Matrices are row-major slices.

use alloc::{vec, vec::Vec};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
/// On return `b` holds `x`; `a` is overwritten.
pub fn lu_solve(n: usize, a: &mut [f64], b: &mut [f64]) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() <= 1e-300 + 1e-15 * scale * f64::EPSILON {
            return Err(Error::Breakdown(alloc::format!("singular matrix at column {col}")));
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r * n + c] * b[c];
        }
        b[r] = s / a[r * n + r];
    }
    Ok(())
}

/// In-place Cholesky `A = L L^H` of a Hermitian positive definite matrix.
/// The lower triangle of `a` receives `L`.
pub fn cholesky_c(n: usize, a: &mut [Complex64]) -> Result<()> {
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= a[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::Breakdown(alloc::format!("matrix not positive definite at pivot {j}")));
        }
        let d = d.sqrt();
        a[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k].conj();
            }
            a[i * n + j] = s / d;
        }
    }
    Ok(())
}

/// Solves `L L^H x = b` given the factor from [`cholesky_c`].
pub fn cholesky_solve_c(n: usize, l: &[Complex64], b: &mut [Complex64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i].re;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i].conj() * b[k];
        }
        b[i] = s / l[i * n + i].re;
    }
}

/// Eigen-decomposition of a small real symmetric matrix by cyclic Jacobi.
/// Returns eigenvalues ascending and eigenvectors as columns (row-major `n×n`).
pub fn sym_eig(n: usize, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            diag += m[i * n + i] * m[i * n + i];
            for j in i + 1..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap_or(core::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (c, &o) in order.iter().enumerate() {
        for r in 0..n {
            vecs[r * n + c] = v[r * n + o];
        }
    }
    (vals, vecs)
}

/// Smallest eigenpair of the small symmetric pencil `A x = λ B x`, `B` positive definite.
/// Directions where `B` is numerically singular are dropped first.
pub fn sym_pencil_min(n: usize, a: &[f64], b: &[f64]) -> Option<(f64, Vec<f64>)> {
    // orthonormalize against B through its eigenbasis, discarding tiny directions
    let (bv, bq) = sym_eig(n, b);
    let top = bv.iter().fold(0.0f64, |m, v| m.max(*v));
    let keep: Vec<usize> = (0..n).filter(|&i| bv[i] > 1e-13 * top).collect();
    let m = keep.len();
    if m == 0 {
        return None;
    }
    // T = Q_k diag(1/sqrt(b)) so that T^T B T = I
    let mut t = vec![0.0; n * m];
    for (c, &i) in keep.iter().enumerate() {
        let s = 1.0 / bv[i].sqrt();
        for r in 0..n {
            t[r * m + c] = bq[r * n + i] * s;
        }
    }
    let mut at = vec![0.0; n * m];
    for r in 0..n {
        for c in 0..m {
            let mut s = 0.0;
            for k in 0..n {
                s += a[r * n + k] * t[k * m + c];
            }
            at[r * m + c] = s;
        }
    }
    let mut c_ = vec![0.0; m * m];
    for r in 0..m {
        for c in 0..m {
            let mut s = 0.0;
            for k in 0..n {
                s += t[k * m + r] * at[k * m + c];
            }
            c_[r * m + c] = s;
        }
    }
    for r in 0..m {
        for c in r + 1..m {
            let avg = 0.5 * (c_[r * m + c] + c_[c * m + r]);
            c_[r * m + c] = avg;
            c_[c * m + r] = avg;
        }
    }
    let (vals, vecs) = sym_eig(m, &c_);
    let y: Vec<f64> = (0..m).map(|r| vecs[r * m]).collect();
    let x = (0..n).map(|r| (0..m).map(|c| t[r * m + c] * y[c]).sum()).collect();
    Some((vals[0], x))
}
