//! Orthonormal bases of the Bergman space, kernels and the functionals
//! built from them.
//!
//! The basis is assembled from chains of functions holomorphic on the
//! domain: powers of `(z−c)/s` about the centroid, powers of `ρ/(z−c)` about
//! each hole (annulus core or excised closed disk), and powers of `1/W` for
//! each excised segment `[a, b]`, where `W` is the exterior Joukowski
//! coordinate of the segment. Each chain is orthonormalized by an Arnoldi
//! recurrence, so every element can be evaluated anywhere by replaying the
//! recurrence. A final Gram–Schmidt pass (twice, with rank truncation)
//! merges the chains.

use alloc::{vec, vec::Vec};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::geom::{CompactSet, Domain, Shape};
use crate::grid::{ComplexField, QuadratureGrid, ScalarField};
use crate::linalg::{cholesky_c, cholesky_solve_c};
use crate::util::{fit_line, pairwise_map, pairwise_map_c, seg_dist};
use crate::{pt, Error, Point, Result};
use alloc::sync::Arc;

/// Relative norm below which a new direction is dropped.
pub const RANK_TOL: f64 = 1e-10;
/// Joukowski terms per excised segment unless set explicitly.
pub const SEGMENT_TERMS: usize = 16;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Nodes and weights of the inner product the basis is orthonormal under.
/// This is the grid itself, except near excised segments where cells are
/// split so that no node weight straddles the cut.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn from_grid(grid: &QuadratureGrid) -> Self {
        let segs = segments_of(&grid.domain);
        if segs.is_empty() {
            return Quadrature { nodes: grid.centers.clone(), weights: grid.weights.clone() };
        }
        let h = grid.h;
        let mut nodes = Vec::with_capacity(grid.len());
        let mut weights = Vec::with_capacity(grid.len());
        let near = |z: Point, s: f64| segs.iter().any(|&(a, b)| seg_dist(z, a, b) < 2.0 * s);
        let min_size = segs.iter().map(|&(a, b)| (b - a).norm()).fold(h, f64::min) / 8.0;
        let mut stack = Vec::new();
        for k in 0..grid.len() {
            let z = grid.centers[k];
            if !near(z, h) {
                nodes.push(z);
                weights.push(grid.weights[k]);
                continue;
            }
            // weight per unit area of this cell, carried down to the children
            stack.push((z, h, grid.weights[k] / (h * h)));
            while let Some((c, s, f)) = stack.pop() {
                if s > min_size && near(c, s) {
                    for (dx, dy) in [(-0.25, -0.25), (-0.25, 0.25), (0.25, -0.25), (0.25, 0.25)] {
                        stack.push((c + pt(dx * s, dy * s), 0.5 * s, f));
                    }
                } else if grid.domain.contains(c) {
                    nodes.push(c);
                    weights.push(f * s * s);
                } else if let Some(j) = nodes.len().checked_sub(1) {
                    // a child centre landing on the cut gives its area to its sibling
                    weights[j] += f * s * s;
                }
            }
        }
        Quadrature { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total(&self) -> f64 {
        pairwise_map(self.len(), &|k| self.weights[k])
    }
}

fn segments_of(d: &Domain) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for e in d.excisions() {
        match e {
            CompactSet::Segment { a, b } => out.push((*a, *b)),
            CompactSet::Segments(v) => out.extend(v.iter().copied()),
            _ => {}
        }
    }
    out.retain(|(a, b)| a != b);
    out
}

/// Generator of one chain of basis functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChainKind {
    /// `((z−c)/s)^k`, `k ≥ 0`.
    Poly { center: Point, scale: f64 },
    /// `(ρ/(z−c))^m`, `m ≥ 1`.
    Pole { center: Point, rho: f64 },
    /// `W(z)^{−m}`, `m ≥ 1`, with `W` the exterior Joukowski coordinate of `[a, b]`.
    Joukowski { a: Point, b: Point },
}

impl ChainKind {
    fn step(&self, z: Point) -> Complex64 {
        match *self {
            ChainKind::Poly { center, scale } => (z - center) / scale,
            ChainKind::Pole { center, rho } => rho / (z - center),
            ChainKind::Joukowski { a, b } => inv_joukowski(z, a, b),
        }
    }

    fn start(&self, z: Point) -> Complex64 {
        match self {
            ChainKind::Poly { .. } => Complex64::new(1.0, 0.0),
            _ => self.step(z),
        }
    }
}

/// `1/W` where `W + 1/W = 2ζ`, `ζ = (2z−a−b)/(b−a)`, `|W| ≥ 1`.
pub fn inv_joukowski(z: Point, a: Point, b: Point) -> Complex64 {
    let zeta = (2.0 * z - a - b) / (b - a);
    let one = Complex64::new(1.0, 0.0);
    let s = (zeta - one).sqrt() * (zeta + one).sqrt();
    let mut w = zeta + s;
    if w.norm() < 1.0 {
        w = zeta - s;
    }
    one / w
}

/// One chain orthonormalized by the Arnoldi recurrence
/// `v_{k+1} = (m v_k − Σ_j H_{jk} v_j) / H_{k+1,k}`.
#[derive(Clone, Debug)]
struct Chain {
    kind: ChainKind,
    norm0: f64,
    /// column k holds `H_{0..=k, k}` followed by `H_{k+1,k}`
    h: Vec<Vec<Complex64>>,
}

impl Chain {
    fn len(&self) -> usize {
        self.h.len() + 1
    }

    fn eval(&self, z: Point, out: &mut Vec<Complex64>) {
        let m = self.kind.step(z);
        let base = out.len();
        out.push(self.kind.start(z) / self.norm0);
        for col in &self.h {
            let k = col.len() - 2;
            let mut q = m * out[base + k];
            for j in 0..=k {
                q -= col[j] * out[base + j];
            }
            out.push(q / col[k + 1].re);
        }
    }
}

fn inner(w: &[f64], f: &[Complex64], g: &[Complex64]) -> Complex64 {
    pairwise_map_c(w.len(), &|k| f[k] * g[k].conj() * w[k])
}

fn norm(w: &[f64], f: &[Complex64]) -> f64 {
    pairwise_map(w.len(), &|k| f[k].norm_sqr() * w[k]).sqrt()
}

fn build_chain(kind: ChainKind, q: &Quadrature, len: usize, out: &mut Vec<Vec<Complex64>>) -> Chain {
    let w = &q.weights;
    let mut v: Vec<Complex64> = q.nodes.iter().map(|&z| kind.start(z)).collect();
    let norm0 = norm(w, &v);
    v.iter_mut().for_each(|x| *x /= norm0);
    let mult: Vec<Complex64> = q.nodes.iter().map(|&z| kind.step(z)).collect();
    let first = out.len();
    out.push(v);
    let mut h = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let prev = &out[first + k];
        let mut nv: Vec<Complex64> = prev.iter().zip(&mult).map(|(a, b)| a * b).collect();
        let before = norm(w, &nv);
        let mut col = vec![ZERO; k + 2];
        for _ in 0..2 {
            for j in 0..=k {
                let c = inner(w, &nv, &out[first + j]);
                col[j] += c;
                let vj = &out[first + j];
                nv.iter_mut().zip(vj).for_each(|(x, y)| *x -= c * y);
            }
        }
        let after = norm(w, &nv);
        if !(after > RANK_TOL * before) {
            break;
        }
        nv.iter_mut().for_each(|x| *x /= after);
        col[k + 1] = Complex64::new(after, 0.0);
        h.push(col);
        out.push(nv);
    }
    Chain { kind, norm0, h }
}

#[derive(Clone, Copy, Debug)]
pub struct BasisOptions {
    /// Polynomial degree `N`; pole chains get `N` terms as well.
    pub degree: usize,
    /// Terms per excised segment.
    pub segment_terms: usize,
    /// Expansion centre for the polynomial chain; the centroid when `None`.
    pub center: Option<Point>,
}

impl BasisOptions {
    pub fn new(degree: usize) -> Self {
        BasisOptions { degree, segment_terms: SEGMENT_TERMS.min(degree.max(1)), center: None }
    }
}

#[derive(Clone, Debug)]
pub struct BergmanBasis {
    pub grid: Arc<QuadratureGrid>,
    pub center: Point,
    pub degree: usize,
    pub quadrature: Quadrature,
    chains: Vec<Chain>,
    /// `e_i = Σ_j coef[i][j] v_j` over the concatenated chain elements.
    coef: Vec<Vec<Complex64>>,
    /// Orthonormal elements on the quadrature nodes.
    values: Vec<Vec<Complex64>>,
    /// Chain elements dropped as linearly dependent.
    pub dropped: usize,
    /// `1/min²` of the relative pivots seen while merging the chains.
    pub condition: f64,
}

pub fn build_basis(grid: &Arc<QuadratureGrid>, degree: usize, center: Option<Point>) -> Result<BergmanBasis> {
    let mut o = BasisOptions::new(degree);
    o.center = center;
    build_basis_with(grid, &o)
}

fn chain_kinds(domain: &Domain, center: Point, scale: f64) -> Vec<ChainKind> {
    let mut kinds = vec![ChainKind::Poly { center, scale }];
    if let Shape::Annulus { center, r_in, .. } = domain.base().shape {
        if r_in > 0.0 {
            kinds.push(ChainKind::Pole { center, rho: r_in });
        }
    }
    for e in domain.excisions() {
        match e {
            CompactSet::ClosedDisk { center, radius } if *radius > 0.0 => {
                kinds.push(ChainKind::Pole { center: *center, rho: *radius })
            }
            CompactSet::Segment { a, b } if a != b => kinds.push(ChainKind::Joukowski { a: *a, b: *b }),
            CompactSet::Segments(v) => {
                for &(a, b) in v {
                    if a != b {
                        kinds.push(ChainKind::Joukowski { a, b });
                    }
                }
            }
            _ => {}
        }
    }
    kinds
}

pub fn build_basis_with(grid: &Arc<QuadratureGrid>, opts: &BasisOptions) -> Result<BergmanBasis> {
    let n = opts.degree;
    if grid.len() < n + 1 {
        return Err(Error::invalid(alloc::format!(
            "grid has {} cells, fewer than the {} basis elements requested",
            grid.len(),
            n + 1
        )));
    }
    let q = Quadrature::from_grid(grid);
    let center = opts.center.unwrap_or_else(|| grid.domain.centroid());
    let scale = q.nodes.iter().map(|z| (z - center).norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut chains = Vec::new();
    let mut raw = Vec::new();
    for kind in chain_kinds(&grid.domain, center, scale) {
        let len = match kind {
            ChainKind::Poly { .. } => n + 1,
            ChainKind::Pole { .. } => n,
            ChainKind::Joukowski { .. } => opts.segment_terms,
        };
        if len > 0 {
            chains.push(build_chain(kind, &q, len, &mut raw));
        }
    }
    let w = &q.weights;
    let total = raw.len();
    let mut coef: Vec<Vec<Complex64>> = Vec::new();
    let mut values: Vec<Vec<Complex64>> = Vec::new();
    let mut dropped = 0;
    let mut min_pivot = 1.0f64;
    for t in 0..total {
        let mut v = raw[t].clone();
        let mut c = vec![ZERO; total];
        c[t] = Complex64::new(1.0, 0.0);
        let before = norm(w, &v);
        for _ in 0..2 {
            for (e, ce) in values.iter().zip(&coef) {
                let p = inner(w, &v, e);
                v.iter_mut().zip(e).for_each(|(x, y)| *x -= p * y);
                c.iter_mut().zip(ce).for_each(|(x, y)| *x -= p * y);
            }
        }
        let after = norm(w, &v);
        if !(after > RANK_TOL * before) {
            dropped += 1;
            continue;
        }
        min_pivot = min_pivot.min(after / before);
        v.iter_mut().for_each(|x| *x /= after);
        c.iter_mut().for_each(|x| *x /= after);
        values.push(v);
        coef.push(c);
    }
    dropped += chains.iter().map(|ch| match ch.kind {
        ChainKind::Poly { .. } => n + 1 - ch.len(),
        ChainKind::Pole { .. } => n - ch.len(),
        ChainKind::Joukowski { .. } => opts.segment_terms - ch.len(),
    }).sum::<usize>();
    Ok(BergmanBasis {
        grid: grid.clone(),
        center,
        degree: n,
        quadrature: q,
        chains,
        coef,
        values,
        dropped,
        condition: 1.0 / (min_pivot * min_pivot),
    })
}

impl BergmanBasis {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `e_k` on the quadrature nodes.
    pub fn element(&self, k: usize) -> &[Complex64] {
        &self.values[k]
    }

    /// `(e_0(z), …, e_M(z))` at any point where the chains are defined.
    pub fn eval(&self, z: Point) -> Vec<Complex64> {
        let mut raw = Vec::new();
        for ch in &self.chains {
            ch.eval(z, &mut raw);
        }
        self.coef
            .iter()
            .map(|c| {
                let mut s = ZERO;
                for (a, b) in c.iter().zip(&raw) {
                    s += a * b;
                }
                s
            })
            .collect()
    }

    /// `e_k` sampled at the grid centres.
    pub fn element_on_grid(&self, k: usize) -> ComplexField {
        let vals = self.grid.centers.iter().map(|&z| self.eval(z)[k]).collect();
        ComplexField { grid: self.grid.clone(), values: vals }
    }

    /// Every element sampled at the grid centres, one basis evaluation per cell.
    pub fn all_on_grid(&self) -> Vec<ComplexField> {
        let mut cols = vec![Vec::with_capacity(self.grid.len()); self.len()];
        for &z in &self.grid.centers {
            for (c, v) in cols.iter_mut().zip(self.eval(z)) {
                c.push(v);
            }
        }
        cols.into_iter().map(|values| ComplexField { grid: self.grid.clone(), values }).collect()
    }

    /// Gram matrix of the basis under the quadrature, row-major.
    pub fn gram(&self) -> Vec<Complex64> {
        let m = self.len();
        let w = &self.quadrature.weights;
        let mut g = vec![ZERO; m * m];
        for i in 0..m {
            for j in 0..m {
                g[i * m + j] = inner(w, &self.values[i], &self.values[j]);
            }
        }
        g
    }

    fn check(&self, z: Point) -> Result<()> {
        if self.grid.domain.contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { x: z.re, y: z.im })
        }
    }
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |s, (x, y)| s + x * y.conj())
}

/// `K(z, w) = Σ e_k(z) conj(e_k(w))`.
pub fn kernel(basis: &BergmanBasis, z: Point, w: Point) -> Result<Complex64> {
    basis.check(z)?;
    basis.check(w)?;
    Ok(dot_conj(&basis.eval(z), &basis.eval(w)))
}

pub fn kernel_diag(basis: &BergmanBasis, z: Point) -> Result<f64> {
    basis.check(z)?;
    Ok(basis.eval(z).iter().map(|v| v.norm_sqr()).sum())
}

/// `K(z, z)` at every grid centre.
pub fn diag_on_grid(basis: &BergmanBasis) -> ScalarField {
    let vals = basis.grid.centers.iter().map(|&z| basis.eval(z).iter().map(|v| v.norm_sqr()).sum()).collect();
    ScalarField { grid: basis.grid.clone(), values: vals }
}

/// Minimum of the diagonal over grid centres, refined once on the 3×3
/// subgrid of the winning cell. Ties go to the lexicographically smaller point.
pub fn kernel_min(basis: &BergmanBasis, grid: &QuadratureGrid) -> (f64, Point) {
    let better = |v: f64, z: Point, best: (f64, Point)| {
        v < best.0 || (v == best.0 && (z.re, z.im) < (best.1.re, best.1.im))
    };
    let diag = |z: Point| -> f64 { basis.eval(z).iter().map(|v| v.norm_sqr()).sum() };
    let mut best = (f64::INFINITY, pt(f64::INFINITY, f64::INFINITY));
    for &z in &grid.centers {
        let v = diag(z);
        if better(v, z, best) {
            best = (v, z);
        }
    }
    let c = best.1;
    let h = grid.h / 3.0;
    for i in -1..=1 {
        for j in -1..=1 {
            let z = c + pt(i as f64 * h, j as f64 * h);
            if grid.domain.contains(z) {
                let v = diag(z);
                if better(v, z, best) {
                    best = (v, z);
                }
            }
        }
    }
    best
}

/// Raw moments `∫ (z−c)^j conj((z−c)^k)` over the grid for the given exponents.
pub fn raw_gram(grid: &QuadratureGrid, center: Point, powers: &[i32]) -> Vec<Complex64> {
    let m = powers.len();
    let cols: Vec<Vec<Complex64>> =
        powers.iter().map(|&p| grid.centers.iter().map(|&z| (z - center).powi(p)).collect()).collect();
    let mut g = vec![ZERO; m * m];
    for i in 0..m {
        for j in 0..m {
            g[i * m + j] = inner(&grid.weights, &cols[i], &cols[j]);
        }
    }
    g
}

#[derive(Clone, Copy, Debug)]
pub struct PKernel {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const P_MAX_ITER: usize = 500;

/// `K_p(z) = sup{|f(z)|^p : ∫|f|^p ≤ 1}` over the span of the basis, computed as
/// `1 / min{∫|f|^p : f(z) = 1}` by iteratively reweighted least squares.
pub fn p_kernel(basis: &BergmanBasis, z: Point, p: f64) -> Result<PKernel> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::invalid("p must lie in (1, 2]"));
    }
    basis.check(z)?;
    let m = basis.len();
    let a = basis.eval(z);
    let abar: Vec<Complex64> = a.iter().map(|v| v.conj()).collect();
    let q = &basis.quadrature;
    let n = q.len();
    let mut omega = vec![1.0; n];
    let mut prev = f64::INFINITY;
    let mut value = 0.0;
    for it in 0..P_MAX_ITER {
        let mut g = vec![ZERO; m * m];
        for i in 0..m {
            for j in i..m {
                let ei = &basis.values[i];
                let ej = &basis.values[j];
                let s = pairwise_map_c(n, &|k| ei[k].conj() * ej[k] * (q.weights[k] * omega[k]));
                g[i * m + j] = s;
                g[j * m + i] = s.conj();
            }
        }
        cholesky_c(m, &mut g)?;
        let mut c = abar.clone();
        cholesky_solve_c(m, &g, &mut c);
        let denom: Complex64 = a.iter().zip(&c).map(|(x, y)| x * y).sum();
        c.iter_mut().for_each(|v| *v /= denom);
        let f: Vec<Complex64> = (0..n).map(|k| (0..m).map(|i| c[i] * basis.values[i][k]).sum()).collect();
        let obj = pairwise_map(n, &|k| q.weights[k] * f[k].norm().powf(p));
        value = 1.0 / obj;
        if p == 2.0 || (prev - obj).abs() < 1e-7 * obj {
            return Ok(PKernel { value, iterations: it + 1, converged: true });
        }
        prev = obj;
        for k in 0..n {
            omega[k] = f[k].norm().max(1e-10).powf(p - 2.0).max(1e-10);
        }
    }
    Ok(PKernel { value, iterations: P_MAX_ITER, converged: false })
}

/// `(R⁺, R⁻, I⁺, I⁻)` with `R± = K(z)+K(w) ± 2 Re K(z,w)` and `I±` using `Im`.
pub fn comparison_functionals(basis: &BergmanBasis, z: Point, w: Point) -> Result<[f64; 4]> {
    basis.check(z)?;
    basis.check(w)?;
    let ez = basis.eval(z);
    let ew = basis.eval(w);
    let kz: f64 = ez.iter().map(|v| v.norm_sqr()).sum();
    let kw: f64 = ew.iter().map(|v| v.norm_sqr()).sum();
    let kzw = dot_conj(&ez, &ew);
    let s = kz + kw;
    Ok([s + 2.0 * kzw.re, s - 2.0 * kzw.re, s + 2.0 * kzw.im, s - 2.0 * kzw.im])
}

/// Coefficients `⟨f, e_k⟩` of a grid field, by grid quadrature.
pub fn bergman_projection(grid: &QuadratureGrid, basis: &BergmanBasis, f: &ComplexField) -> Result<Vec<Complex64>> {
    if !grid.same_layout(&f.grid) || !grid.same_layout(&basis.grid) {
        return Err(Error::invalid("field, grid and basis must share one grid"));
    }
    let same = basis.quadrature.len() == grid.len();
    let cols: Vec<Vec<Complex64>> =
        if same { basis.values.clone() } else { basis.all_on_grid().into_iter().map(|c| c.values).collect() };
    Ok(cols.iter().map(|e| inner(&grid.weights, &f.values, e)).collect())
}

/// `Σ c_k e_k` on the grid.
pub fn synthesize(basis: &BergmanBasis, coeffs: &[Complex64]) -> ComplexField {
    let vals = basis
        .grid
        .centers
        .iter()
        .map(|&z| basis.eval(z).iter().zip(coeffs).map(|(e, c)| e * c).sum())
        .collect();
    ComplexField { grid: basis.grid.clone(), values: vals }
}

#[derive(Clone, Debug)]
pub struct BetaProbe {
    pub resolutions: Vec<f64>,
    pub values: Vec<f64>,
    /// Slope of `log value` against `log resolution`.
    pub growth: f64,
}

/// `∫ |K(·, w)|^β` across a resolution ladder, with the fitted growth exponent.
pub fn beta_norm_probe(
    domain: &Domain,
    opts: &BasisOptions,
    w: Point,
    beta: f64,
    resolutions: &[f64],
) -> Result<BetaProbe> {
    if !(beta >= 2.0) {
        return Err(Error::invalid("beta must be at least 2"));
    }
    let mut values = Vec::new();
    for &res in resolutions {
        let grid = crate::grid::rasterize(domain, res)?;
        let b = build_basis_with(&grid, opts)?;
        b.check(w)?;
        let ew: Vec<Complex64> = b.eval(w).iter().map(|v| v.conj()).collect();
        let q = &b.quadrature;
        let v = pairwise_map(q.len(), &|k| {
            let kz: Complex64 = (0..b.len()).map(|i| b.values[i][k] * ew[i]).sum();
            q.weights[k] * kz.norm().powf(beta)
        });
        values.push(v);
    }
    let lx: Vec<f64> = resolutions.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let growth = if values.len() >= 2 { fit_line(&lx, &ly).0 } else { 0.0 };
    Ok(BetaProbe { resolutions: resolutions.to_vec(), values, growth })
}
