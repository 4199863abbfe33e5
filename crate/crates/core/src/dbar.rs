//! Solid Cauchy transform on the grid, the L²-minimal (canonical) solution of
//! `∂̄u = v`, and the estimate checks built on it.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::bergman::{bergman_projection, BergmanBasis};
use crate::fft::fft2;
use crate::grid::{ComplexField, QuadratureGrid};
use crate::linalg::{cholesky_c, cholesky_solve_c};
use crate::util::{fit_line, pairwise_map, pairwise_map_c};
use crate::{pt, Error, Point, Result};
use alloc::sync::Arc;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `u(z) = (1/π) Σ v(ζ) w(ζ) / (z − ζ)` at every grid centre, as a lattice
/// convolution through zero-padded FFTs. The self cell contributes its exact
/// cell average of `1/(z−ζ)`, which vanishes for the centred square.
pub fn cauchy_transform(grid: &Arc<QuadratureGrid>, v: &ComplexField) -> Result<ComplexField> {
    if !grid.same_layout(&v.grid) {
        return Err(Error::invalid("field lives on another grid"));
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let px = (2 * nx).next_power_of_two();
    let py = (2 * ny).next_power_of_two();
    let mut kern = vec![ZERO; px * py];
    for di in -(nx as i64 - 1)..nx as i64 {
        for dj in -(ny as i64 - 1)..ny as i64 {
            if di == 0 && dj == 0 {
                continue;
            }
            let r = di.rem_euclid(px as i64) as usize;
            let c = dj.rem_euclid(py as i64) as usize;
            kern[r * py + c] = Complex64::new(1.0, 0.0) / (pt(di as f64, dj as f64) * grid.h);
        }
    }
    let mut data = vec![ZERO; px * py];
    for k in 0..grid.len() {
        let (i, j) = grid.cell_ij(k);
        data[i * py + j] = v.values[k] * grid.weights[k];
    }
    fft2(&mut kern, px, py, false);
    fft2(&mut data, px, py, false);
    data.iter_mut().zip(&kern).for_each(|(a, b)| *a *= b);
    fft2(&mut data, px, py, true);
    let values = (0..grid.len())
        .map(|k| {
            let (i, j) = grid.cell_ij(k);
            data[i * py + j] / PI
        })
        .collect();
    Ok(ComplexField { grid: grid.clone(), values })
}

/// The same sum evaluated directly at one point; cells whose centre equals `z` are skipped.
pub fn cauchy_direct(grid: &QuadratureGrid, v: &ComplexField, z: Point) -> Complex64 {
    pairwise_map_c(grid.len(), &|k| {
        let d = z - grid.centers[k];
        if d == ZERO {
            ZERO
        } else {
            v.values[k] * grid.weights[k] / d
        }
    }) / PI
}

#[derive(Clone, Debug)]
pub struct CanonicalSolution {
    pub u0: ComplexField,
    pub cauchy: ComplexField,
    /// `max_k |⟨u0, e_k⟩|` under the grid inner product.
    pub orthogonality: f64,
}

/// `u0 = u_C − P u_C`, the solution orthogonal to the Bergman space.
pub fn canonical_solution(grid: &Arc<QuadratureGrid>, basis: &BergmanBasis, v: &ComplexField) -> Result<CanonicalSolution> {
    let uc = cauchy_transform(grid, v)?;
    let m = basis.len();
    let same = basis.quadrature.len() == grid.len();
    let cols: Vec<ComplexField> = if same {
        (0..m).map(|k| ComplexField { grid: grid.clone(), values: basis.element(k).to_vec() }).collect()
    } else {
        basis.all_on_grid()
    };
    let mut c = bergman_projection(grid, basis, &uc)?;
    if !same {
        // the basis is orthonormal under its own refined rule; project with the grid Gram
        let mut g = vec![ZERO; m * m];
        for i in 0..m {
            for j in 0..m {
                g[i * m + j] = cols[j].inner(&cols[i]);
            }
        }
        cholesky_c(m, &mut g)?;
        cholesky_solve_c(m, &g, &mut c);
    }
    let mut u0 = uc.clone();
    for (ck, e) in c.iter().zip(&cols) {
        u0.values.iter_mut().zip(&e.values).for_each(|(u, x)| *u -= ck * x);
    }
    let orthogonality = cols.iter().map(|e| u0.inner(e).norm()).fold(0.0, f64::max);
    Ok(CanonicalSolution { u0, cauchy: uc, orthogonality })
}

/// Constant of the weighted estimate, `16h²/(2h−3α)²`.
pub fn weighted_constant(hardy: f64, alpha: f64) -> Result<f64> {
    let top = 2.0 * hardy / 3.0;
    if !(alpha > 0.0 && alpha < top) {
        return Err(Error::invalid(alloc::format!("alpha must lie in (0, {top}), got {alpha}")));
    }
    Ok(16.0 * hardy * hardy / (2.0 * hardy - 3.0 * alpha).powi(2))
}

#[derive(Clone, Copy, Debug)]
pub struct WeightedRow {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub constant: f64,
}

/// `∫|u0|² δ^α` against `C ∫|v|² δ^{2+α}` for the canonical solution of `∂̄u = v`.
pub fn weighted_estimate_check(
    grid: &Arc<QuadratureGrid>,
    basis: &BergmanBasis,
    v: &ComplexField,
    alpha: f64,
    hardy: f64,
) -> Result<WeightedRow> {
    let constant = weighted_constant(hardy, alpha)?;
    let u0 = canonical_solution(grid, basis, v)?.u0;
    let d = &grid.delta;
    let lhs = grid.integrate_fn(|k| u0.values[k].norm_sqr() * d[k].powf(alpha));
    let rhs = constant * grid.integrate_fn(|k| v.values[k].norm_sqr() * d[k].powf(2.0 + alpha));
    Ok(WeightedRow { lhs, rhs, ratio: lhs / rhs, constant })
}

#[derive(Clone, Copy, Debug)]
pub struct LpRow {
    pub p: f64,
    pub u_norm: f64,
    pub v_l1: f64,
    pub implied_c0: f64,
}

/// `‖u0‖_p / ((2−p)^{−1/2} |Ω|^{1/p−1/2} ∫|v|)` for each `p`, with `|Ω|` the grid area.
pub fn lp_estimate_check(grid: &Arc<QuadratureGrid>, basis: &BergmanBasis, v: &ComplexField, ps: &[f64]) -> Result<Vec<LpRow>> {
    if let Some(p) = ps.iter().find(|&&p| !(p > 1.0 && p < 2.0)) {
        return Err(Error::invalid(alloc::format!("p must lie in (1, 2), got {p}")));
    }
    let u0 = canonical_solution(grid, basis, v)?.u0;
    let area = grid.total_weight();
    let v_l1 = grid.integrate_fn(|k| v.values[k].norm());
    Ok(ps
        .iter()
        .map(|&p| {
            let u_norm = u0.lp_norm(p);
            let implied_c0 = u_norm / ((2.0 - p).powf(-0.5) * area.powf(1.0 / p - 0.5) * v_l1);
            LpRow { p, u_norm, v_l1, implied_c0 }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct Decay {
    pub eps: Vec<f64>,
    pub collar: Vec<f64>,
    pub slope: f64,
    /// Ladder rungs dropped because the collar held no cells.
    pub truncated: usize,
}

/// Collar integrals `∫_{δ ≤ ε} |K(·,w)|²` for `ε = 2^{−k}` down to the grid
/// spacing, and their log-log slope. The contract is `slope ≥ 2c/3 − 0.1`.
pub fn boundary_decay(grid: &QuadratureGrid, basis: &BergmanBasis, w: Point) -> Result<Decay> {
    if !grid.domain.contains(w) {
        return Err(Error::OutsideDomain { x: w.re, y: w.im });
    }
    let ew: Vec<Complex64> = basis.eval(w).iter().map(|v| v.conj()).collect();
    let same = basis.quadrature.len() == grid.len() && basis.grid.same_layout(grid);
    let kw: Vec<f64> = (0..grid.len())
        .map(|k| {
            let val: Complex64 = if same {
                (0..basis.len()).map(|i| basis.element(i)[k] * ew[i]).sum()
            } else {
                basis.eval(grid.centers[k]).iter().zip(&ew).map(|(a, b)| a * b).sum()
            };
            val.norm_sqr()
        })
        .collect();
    let top = grid.delta.iter().fold(0.0, |m: f64, d| m.max(*d));
    let mut eps = Vec::new();
    let mut collar = Vec::new();
    let mut truncated = 0;
    let mut e = 0.5;
    while e > top {
        e *= 0.5;
    }
    while e >= grid.h {
        let cells = grid.delta.iter().filter(|&&d| d <= e).count();
        if cells == 0 {
            truncated += 1;
        } else {
            let v = pairwise_map(grid.len(), &|k| if grid.delta[k] <= e { kw[k] * grid.weights[k] } else { 0.0 });
            eps.push(e);
            collar.push(v);
        }
        e *= 0.5;
    }
    if eps.len() < 2 {
        return Err(Error::invalid("collar ladder has fewer than two rungs"));
    }
    let lx: Vec<f64> = eps.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = collar.iter().map(|x| x.ln()).collect();
    Ok(Decay { slope: fit_line(&lx, &ly).0, eps, collar, truncated })
}

/// Smooth bump `exp(1 − 1/(1 − |z−c|²/r²))`, 1 at the centre, 0 off the disk.
pub fn bump(z: Point, c: Point, r: f64) -> f64 {
    let t = (z - c).norm_sqr() / (r * r);
    if t >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t)).exp()
    }
}

/// Three test data supported where `δ ≥ 0.1·inradius`: a real bump at the
/// incentre and two complex bumps beside it.
pub fn bump_data(grid: &Arc<QuadratureGrid>) -> Vec<ComplexField> {
    let (inr, c0) = grid.domain.inradius_search();
    let off = 0.4 * inr;
    let c1 = c0 + pt(off, 0.0);
    let c2 = c0 + pt(-0.5 * off, 0.5 * off);
    vec![
        ComplexField::from_fn(grid, |z| Complex64::new(bump(z, c0, 0.8 * inr), 0.0)),
        ComplexField::from_fn(grid, |z| bump(z, c1, off) * Complex64::new(1.0, (z.re - c1.re) / off)),
        ComplexField::from_fn(grid, |z| bump(z, c2, off) * Complex64::from_polar(1.0, 3.0 * (z.im - c2.im) / off)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::make_disk;
    use crate::grid::rasterize;

    #[test]
    fn fft_matches_direct_sum() {
        let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 12.0).unwrap();
        let v = ComplexField::from_fn(&g, |z| Complex64::new(z.re, 1.0 - z.im * z.im));
        let u = cauchy_transform(&g, &v).unwrap();
        for k in (0..g.len()).step_by(7) {
            let d = cauchy_direct(&g, &v, g.centers[k]);
            assert!((d - u.values[k]).norm() < 1e-12, "{k}");
        }
    }

    #[test]
    fn constant_data_gives_conjugate() {
        let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 64.0).unwrap();
        let v = ComplexField::from_fn(&g, |_| Complex64::new(1.0, 0.0));
        let u = cauchy_transform(&g, &v).unwrap();
        for k in 0..g.len() {
            let z = g.centers[k];
            if z.norm() < 0.8 && z.norm() > 0.1 {
                assert!((u.values[k] - z.conj()).norm() < 0.02 * z.norm(), "{z}");
            }
        }
    }

    #[test]
    fn weighted_constant_limits() {
        assert!((weighted_constant(0.5, 1e-9).unwrap() - 4.0).abs() < 1e-6);
        assert!(weighted_constant(0.5, 0.34).is_err());
    }
}
