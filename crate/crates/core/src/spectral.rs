//! Dirichlet eigenvalue, Hardy constant, Rayleigh quotients and the
//! cutoff test functions built from equilibrium potentials.
//!
//! The Dirichlet Laplacian is the 5-point stencil on masked cells with the
//! boundary placed where each neighbour link actually leaves the domain
//! (ghost-fluid treatment): a link that exits at fraction `θ` of a cell
//! contributes `1/(θh²)` to the diagonal. The matrix stays symmetric and the
//! eigenvalue error is `O(h²)`.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::geom::Domain;
use crate::grid::{rasterize, QuadratureGrid, ScalarField, DIRS};
use crate::linalg::sym_pencil_min;
use crate::potential::{excluded_set, green_equilibrium_curves, EquilibriumResult};
use crate::util::pairwise_map;
use crate::{Error, Point, Result};
use alloc::sync::Arc;

/// Smallest boundary fraction used on a link.
const THETA_MIN: f64 = 1e-2;
const NO: u32 = u32::MAX;

/// `h²·(−Δ_h)` with ghost-fluid Dirichlet links. Entries are O(1).
#[derive(Clone, Debug)]
pub struct Laplacian {
    pub h: f64,
    nb: Vec<[u32; 4]>,
    diag: Vec<f64>,
}

impl Laplacian {
    pub fn new(grid: &QuadratureGrid) -> Self {
        let n = grid.len();
        let mut nb = vec![[NO; 4]; n];
        let mut diag = vec![0.0; n];
        for k in 0..n {
            let c = grid.centers[k];
            for (d, &dir) in DIRS.iter().enumerate() {
                let q = c + crate::pt(dir.0 as f64, dir.1 as f64) * grid.h;
                let exit = grid.domain.first_exit(c, q);
                match (grid.neighbor(k, dir), exit) {
                    (Some(m), None) => {
                        nb[k][d] = m as u32;
                        diag[k] += 1.0;
                    }
                    (_, Some(t)) => diag[k] += 1.0 / t.max(THETA_MIN),
                    // neighbour centre excluded without a crossing (a polar point)
                    (None, None) => diag[k] += 1.0,
                }
            }
        }
        Laplacian { h: grid.h, nb, diag }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `y = (h² A) x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for k in 0..self.len() {
            let mut s = self.diag[k] * x[k];
            for &m in &self.nb[k] {
                if m != NO {
                    s -= x[m as usize];
                }
            }
            y[k] = s;
        }
    }

    /// `xᵀ (h² A) x` as a sum over links, which keeps it nonnegative in floating point.
    pub fn energy(&self, x: &[f64]) -> f64 {
        pairwise_map(self.len(), &|k| {
            let mut s = 0.0;
            let mut off = 0.0;
            for &m in &self.nb[k] {
                if m != NO {
                    let d = x[k] - x[m as usize];
                    s += 0.5 * d * d;
                    off += 1.0;
                }
            }
            s + (self.diag[k] - off) * x[k] * x[k]
        })
    }
}

/// Incomplete Cholesky IC(0) of the Laplacian, in cell order.
struct Ic0 {
    d: Vec<f64>,
    /// factor entries toward the lower-index neighbours, per cell
    low: Vec<[(u32, f64); 2]>,
    up: Vec<Vec<(u32, f64)>>,
}

impl Ic0 {
    fn new(a: &Laplacian) -> Self {
        let n = a.len();
        let mut d = vec![0.0; n];
        let mut low = vec![[(NO, 0.0); 2]; n];
        for k in 0..n {
            let mut s = a.diag[k];
            let mut slot = 0;
            for &m in &a.nb[k] {
                if m != NO && (m as usize) < k {
                    let l = -1.0 / d[m as usize];
                    low[k][slot] = (m, l);
                    slot += 1;
                    s -= l * l;
                }
            }
            d[k] = s.max(1e-3 * a.diag[k]).sqrt();
        }
        let mut up = vec![Vec::new(); n];
        for k in 0..n {
            for &(m, l) in &low[k] {
                if m != NO {
                    up[m as usize].push((k as u32, l));
                }
            }
        }
        Ic0 { d, low, up }
    }

    /// `z = (L Lᵀ)⁻¹ r`.
    fn solve(&self, r: &[f64], z: &mut [f64]) {
        let n = self.d.len();
        for k in 0..n {
            let mut s = r[k];
            for &(m, l) in &self.low[k] {
                if m != NO {
                    s -= l * z[m as usize];
                }
            }
            z[k] = s / self.d[k];
        }
        for k in (0..n).rev() {
            let mut s = z[k];
            for &(m, l) in &self.up[k] {
                s -= l * z[m as usize];
            }
            z[k] = s / self.d[k];
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub value: f64,
    /// Eigenfunction, positive, with `∫ u² = 1` under the grid weights.
    pub field: ScalarField,
    /// `‖A u − λ B u‖ / ‖λ B u‖`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-10, max_iter: 20_000 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    pairwise_map(a.len(), &|k| a[k] * b[k])
}

/// Smallest eigenpair of `A x = λ B x` with `B = diag(b)`, by locally optimal
/// preconditioned conjugate gradients (block size one, IC(0) preconditioner).
fn lopcg(a: &Laplacian, b: &[f64], x0: Vec<f64>, opts: &EigenOptions) -> Result<(f64, Vec<f64>, f64, usize)> {
    let n = a.len();
    let pre = Ic0::new(a);
    let bnorm = |v: &[f64]| pairwise_map(n, &|k| b[k] * v[k] * v[k]).sqrt();
    let mut x = x0;
    let s = bnorm(&x);
    if !(s > 0.0) {
        return Err(Error::invalid("zero starting vector"));
    }
    x.iter_mut().for_each(|v| *v /= s);
    let mut ax = vec![0.0; n];
    a.apply(&x, &mut ax);
    let mut lam = a.energy(&x);
    let mut p: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut aw = vec![0.0; n];
    let mut res = f64::INFINITY;
    for it in 0..opts.max_iter {
        for k in 0..n {
            r[k] = ax[k] - lam * b[k] * x[k];
        }
        let bx: Vec<f64> = (0..n).map(|k| b[k] * x[k]).collect();
        res = dot(&r, &r).sqrt() / (lam.abs() * dot(&bx, &bx).sqrt());
        if res < opts.tol {
            return Ok((lam, x, res, it));
        }
        pre.solve(&r, &mut w);
        let wn = bnorm(&w);
        w.iter_mut().for_each(|v| *v /= wn);
        a.apply(&w, &mut aw);
        // Rayleigh-Ritz on span{x, w, p}
        let mut basis: Vec<(&[f64], &[f64])> = vec![(&x, &ax), (&w, &aw)];
        if let Some((pv, apv)) = &p {
            basis.push((pv, apv));
        }
        let m = basis.len();
        let mut ga = vec![0.0; m * m];
        let mut gb = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let va = dot(basis[i].0, basis[j].1);
                let vb = pairwise_map(n, &|k| b[k] * basis[i].0[k] * basis[j].0[k]);
                ga[i * m + j] = va;
                ga[j * m + i] = va;
                gb[i * m + j] = vb;
                gb[j * m + i] = vb;
            }
        }
        ga[0] = lam;
        gb[0] = 1.0;
        let (mu, c) = match sym_pencil_min(m, &ga, &gb) {
            Some(v) => v,
            None => return Err(Error::Breakdown(alloc::format!("Rayleigh-Ritz failed at iteration {it}"))),
        };
        // p_new = c1 w + c2 p; x_new = c0 x + p_new
        let mut pn = vec![0.0; n];
        let mut apn = vec![0.0; n];
        for k in 0..n {
            pn[k] = c[1] * w[k];
            apn[k] = c[1] * aw[k];
        }
        if let Some((pv, apv)) = &p {
            for k in 0..n {
                pn[k] += c[2] * pv[k];
                apn[k] += c[2] * apv[k];
            }
        }
        for k in 0..n {
            x[k] = c[0] * x[k] + pn[k];
            ax[k] = c[0] * ax[k] + apn[k];
        }
        let s = bnorm(&x);
        x.iter_mut().for_each(|v| *v /= s);
        ax.iter_mut().for_each(|v| *v /= s);
        let pnorm = bnorm(&pn);
        if pnorm > 0.0 {
            pn.iter_mut().for_each(|v| *v /= pnorm);
            apn.iter_mut().for_each(|v| *v /= pnorm);
            p = Some((pn, apn));
        }
        // refresh from scratch now and then to stop drift in A x
        if it % 50 == 49 {
            a.apply(&x, &mut ax);
        }
        lam = if mu.is_finite() { a.energy(&x) } else { mu };
    }
    Err(Error::NotConverged { what: "eigen solver", iterations: opts.max_iter, residual: res })
}

fn finish(grid: &Arc<QuadratureGrid>, lam: f64, mut x: Vec<f64>, res: f64, it: usize) -> EigenResult {
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    let mut field = ScalarField { grid: grid.clone(), values: x };
    let nrm = field.l2_norm();
    field.values.iter_mut().for_each(|v| *v /= nrm);
    EigenResult { value: lam, field, residual: res, iterations: it }
}

/// First Dirichlet eigenvalue of the masked grid.
pub fn dirichlet_lambda1(grid: &Arc<QuadratureGrid>) -> Result<EigenResult> {
    dirichlet_lambda1_with(grid, &EigenOptions::default())
}

pub fn dirichlet_lambda1_with(grid: &Arc<QuadratureGrid>, opts: &EigenOptions) -> Result<EigenResult> {
    let a = Laplacian::new(grid);
    let b = vec![1.0; a.len()];
    let (lam, x, res, it) = lopcg(&a, &b, grid.delta.clone(), opts)?;
    let h2 = grid.h * grid.h;
    Ok(finish(grid, lam / h2, x, res, it))
}

#[derive(Clone, Debug)]
pub struct HardyResult {
    /// `√μ_h`, the square root of the discrete pencil eigenvalue.
    pub value: f64,
    pub eigen: EigenResult,
}

/// Hardy quotient on one grid: the pencil `(−Δ_h, diag(1/δ²))` with `δ`
/// clamped below at `h/2`.
///
/// When the infimum is not attained (convex domains among others) the
/// discrete value approaches `h(Ω)` from above at a logarithmic rate; see
/// [`hardy_extrapolate`].
pub fn hardy_constant(grid: &Arc<QuadratureGrid>) -> Result<HardyResult> {
    hardy_constant_with(grid, &EigenOptions::default())
}

pub fn hardy_constant_with(grid: &Arc<QuadratureGrid>, opts: &EigenOptions) -> Result<HardyResult> {
    let a = Laplacian::new(grid);
    let h = grid.h;
    let b: Vec<f64> = grid.delta.iter().map(|&d| h * h / d.max(0.5 * h).powi(2)).collect();
    let x0: Vec<f64> = grid.delta.iter().map(|d| d.sqrt()).collect();
    let (mu, x, res, it) = lopcg(&a, &b, x0, opts)?;
    Ok(HardyResult { value: mu.max(0.0).sqrt(), eigen: finish(grid, mu, x, res, it) })
}

#[derive(Clone, Debug)]
pub struct HardyEstimate {
    /// `√μ∞`, or 0 when the fitted limit is negative.
    pub value: f64,
    pub resolutions: Vec<f64>,
    /// Discrete values `√μ_h` per resolution.
    pub discrete: Vec<f64>,
    /// Fitted `b` in `μ = μ∞ + π²/(ln res + b)²`.
    pub offset: f64,
    /// Largest fit residual in `μ`.
    pub misfit: f64,
}

/// Fit `μ(res) = μ∞ + π²/(ln res + b)²` to discrete Hardy eigenvalues.
///
/// The form is the lowest eigenvalue of `−u'' = μ u/x²` on a collar
/// `(a, L)` with `a ∝ 1/res`: `μ = 1/4 + π²/ln²(L/a)`. Returns `(μ∞, b, misfit)`.
pub fn fit_hardy_ladder(resolutions: &[f64], mu: &[f64]) -> Result<(f64, f64, f64)> {
    let n = resolutions.len();
    if n < 2 || n != mu.len() || resolutions.iter().any(|r| !(*r > 1.0)) || mu.iter().any(|m| !m.is_finite()) {
        return Err(Error::invalid("need at least two resolutions above 1 with finite values"));
    }
    let l: Vec<f64> = resolutions.iter().map(|r| r.ln()).collect();
    let lo = l.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    let pi2 = PI * PI;
    let fit = |b: f64| {
        let tail: Vec<f64> = l.iter().map(|x| pi2 / (x + b).powi(2)).collect();
        let m = mu.iter().zip(&tail).map(|(u, t)| u - t).sum::<f64>() / n as f64;
        let err = mu.iter().zip(&tail).map(|(u, t)| (u - m - t).powi(2)).sum::<f64>();
        (err, m)
    };
    // coarse scan of b = e^s − lo, then golden section around the best sample
    let (s_lo, s_hi) = (-4.0f64, 6.0f64);
    let steps = 400;
    let at = |s: f64| fit(s.exp() - lo).0;
    let mut best = (f64::INFINITY, s_lo);
    for k in 0..=steps {
        let s = s_lo + (s_hi - s_lo) * k as f64 / steps as f64;
        let e = at(s);
        if e < best.0 {
            best = (e, s);
        }
    }
    let d = (s_hi - s_lo) / steps as f64;
    let (mut a, mut c) = (best.1 - d, best.1 + d);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let x1 = c - g * (c - a);
        let x2 = a + g * (c - a);
        if at(x1) < at(x2) {
            c = x2;
        } else {
            a = x1;
        }
    }
    let b = (0.5 * (a + c)).exp() - lo;
    let (_, m) = fit(b);
    let misfit = l.iter().zip(mu).map(|(x, u)| (u - m - pi2 / (x + b).powi(2)).abs()).fold(0.0, f64::max);
    Ok((m, b, misfit))
}

/// Hardy constant of `domain` extrapolated from discrete values on a resolution ladder.
pub fn hardy_extrapolate(domain: &Domain, resolutions: &[f64]) -> Result<HardyEstimate> {
    let mut discrete = Vec::with_capacity(resolutions.len());
    for &r in resolutions {
        discrete.push(hardy_constant(&rasterize(domain, r)?)?.value);
    }
    let mu: Vec<f64> = discrete.iter().map(|v| v * v).collect();
    let (m, offset, misfit) = fit_hardy_ladder(resolutions, &mu)?;
    Ok(HardyEstimate { value: m.max(0.0).sqrt(), resolutions: resolutions.to_vec(), discrete, offset, misfit })
}

/// Discrete `∫|∇f|² / ∫ f²` with the same link-based form as the eigen solver,
/// so the variational principle holds exactly on the grid.
pub fn rayleigh_quotient(f: &ScalarField) -> Result<f64> {
    let a = Laplacian::new(&f.grid);
    rayleigh_with(&a, f)
}

pub fn rayleigh_with(a: &Laplacian, f: &ScalarField) -> Result<f64> {
    let m = dot(&f.values, &f.values);
    if !(m > 0.0) {
        return Err(Error::invalid("Rayleigh quotient of the zero field"));
    }
    Ok(a.energy(&f.values) / (m * a.h * a.h))
}

/// Discrete `(∫ |∇f|², ∫ f²/δ²)` in the same normalisation as the Hardy
/// pencil, so `energy ≥ h_disc² · weighted` holds exactly.
pub fn hardy_forms(a: &Laplacian, grid: &QuadratureGrid, f: &[f64]) -> (f64, f64) {
    let h = grid.h;
    let weighted = pairwise_map(f.len(), &|k| f[k] * f[k] / grid.delta[k].max(0.5 * h).powi(2));
    (a.energy(f), weighted * h * h)
}

#[derive(Clone, Copy, Debug)]
pub struct MsParams {
    /// `r1 = e^{1/2}(1+2ε)αr`, `r2 = e^{1/2}(1+3ε)αr`.
    pub eps: f64,
    /// Outer disk radius `R = N r`.
    pub n_outer: f64,
    /// Patches for the equilibrium measure of the excluded set.
    pub samples: usize,
}

impl Default for MsParams {
    fn default() -> Self {
        MsParams { eps: 0.25, n_outer: 16.0, samples: 128 }
    }
}

#[derive(Clone, Debug)]
pub struct MsTest {
    pub phi: ScalarField,
    pub quotient: f64,
    pub r1: f64,
    pub r2: f64,
    pub outer: f64,
    pub equilibrium: Option<EquilibriumResult>,
}

/// The test function `φ = (1 − χ) η` around `z0`: `η` is the radial cutoff
/// equal to 1 on `Δ(z0, r1)` and 0 off `Δ(z0, r2)`, `χ` the Green
/// equilibrium cutoff of `closure(Δ(z0, r)) ∖ Ω` in `Δ(z0, N r)`.
pub fn ms_test_function(grid: &Arc<QuadratureGrid>, z0: Point, alpha: f64, r: f64, params: &MsParams) -> Result<MsTest> {
    let e = params.eps;
    let r1 = (0.5f64).exp() * (1.0 + 2.0 * e) * alpha * r;
    let r2 = (0.5f64).exp() * (1.0 + 3.0 * e) * alpha * r;
    let outer = params.n_outer * r;
    if !(r1 > 0.0 && r1 < r2 && r2 < r && r < outer / 2.0) {
        return Err(Error::invalid(alloc::format!(
            "need 0 < r1 < r2 < r < R/2, got r1={r1}, r2={r2}, r={r}, R={outer}"
        )));
    }
    let dom: &Domain = &grid.domain;
    let curves = excluded_set(dom, z0, r);
    let eq = if curves.iter().any(|c| c.length() > 0.0) {
        Some(green_equilibrium_curves(&curves, &[], z0, outer, params.samples)?)
    } else {
        None
    };
    let values: Vec<f64> = grid
        .centers
        .iter()
        .map(|&z| {
            let eta = ((r2 - (z - z0).norm()) / (r2 - r1)).clamp(0.0, 1.0);
            if eta == 0.0 {
                return 0.0;
            }
            let chi = match &eq {
                Some(eq) => (eq.potential(z) / eq.energy).clamp(0.0, 1.0),
                None => 0.0,
            };
            (1.0 - chi) * eta
        })
        .collect();
    let phi = ScalarField { grid: grid.clone(), values };
    let quotient = rayleigh_quotient(&phi)?;
    Ok(MsTest { phi, quotient, r1, r2, outer, equilibrium: eq })
}

/// First zero of `J_0`, squared: the unit-disk Dirichlet eigenvalue.
pub fn bessel_j0_first_zero_sq() -> f64 {
    // Newton on the power series of J0, with J0' = -J1
    let j0 = |x: f64| {
        let mut term = 1.0;
        let mut s = 1.0;
        for k in 1..60 {
            term *= -(x * x / 4.0) / ((k * k) as f64);
            s += term;
        }
        s
    };
    let j1 = |x: f64| {
        let mut term = x / 2.0;
        let mut s = term;
        for k in 1..60 {
            term *= -(x * x / 4.0) / ((k * (k + 1)) as f64);
            s += term;
        }
        s
    };
    let mut x = 2.4;
    for _ in 0..50 {
        let dx = j0(x) / j1(x);
        x += dx;
        if dx.abs() < 1e-16 {
            break;
        }
    }
    let _ = PI;
    x * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_disk, make_rect};
    use crate::pt;

    #[test]
    fn bessel_zero() {
        assert!((bessel_j0_first_zero_sq().sqrt() - 2.404_825_557_695_773).abs() < 1e-12);
    }

    #[test]
    fn square_eigenvalue() {
        let g = rasterize(&make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap(), 64.0).unwrap();
        let e = dirichlet_lambda1(&g).unwrap();
        let exact = 2.0 * PI * PI;
        assert!((e.value - exact).abs() / exact < 5e-3, "{}", e.value);
        assert!(e.residual < 1e-8);
        assert!((e.field.l2_norm() - 1.0).abs() < 1e-10);
        let q = rayleigh_quotient(&e.field).unwrap();
        assert!((q - e.value).abs() / e.value < 1e-6);
    }

    #[test]
    fn disk_eigenvalue_and_hardy() {
        let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 48.0).unwrap();
        let e = dirichlet_lambda1(&g).unwrap();
        let exact = bessel_j0_first_zero_sq();
        assert!((e.value - exact).abs() / exact < 1e-2, "{}", e.value);
        let h = hardy_constant(&g).unwrap();
        assert!(h.value > 0.5 && h.value < 0.7, "{}", h.value);
    }

    #[test]
    fn ladder_fit_recovers_synthetic_limit() {
        let res = [48.0, 64.0, 96.0, 128.0];
        let mu: Vec<f64> = res.iter().map(|r: &f64| 0.25 + PI * PI / (r.ln() + 3.6).powi(2)).collect();
        let (m, b, misfit) = fit_hardy_ladder(&res, &mu).unwrap();
        assert!((m - 0.25).abs() < 1e-8 && (b - 3.6).abs() < 1e-5 && misfit < 1e-8, "{m} {b}");
        assert!(fit_hardy_ladder(&res[..1], &mu[..1]).is_err());
    }
}
