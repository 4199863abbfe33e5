//! Equilibrium measures, logarithmic and Green capacities, Robin constants,
//! the interior capacity radius and equilibrium-potential cutoffs.
//!
//! A compact set is represented by curves carrying its outer boundary. Each
//! curve is cut into straight chords ("patches") and a measure is a weight
//! per patch, spread uniformly along it. Pair interactions use the exact
//! chord average of `log|z − ζ|`, so the diagonal is the finite self-energy
//! `log ℓ − 3/2` instead of being dropped.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::geom::{CompactSet, Domain, Polyline};
use crate::grid::{dirichlet_energy, rasterize, ScalarField};
use crate::linalg::lu_solve;
use crate::{pt, Error, Point, Result};

/// Default number of patches for capacity computations.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    pub support: Vec<Point>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelKind {
    Logarithmic,
    /// Green function of the disk `Δ(center, radius)`.
    Green { center: Point, radius: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Patch {
    a: Point,
    b: Point,
}

impl Patch {
    fn len(&self) -> f64 {
        (self.b - self.a).norm()
    }
    fn mid(&self) -> Point {
        (self.a + self.b) * 0.5
    }
}

#[derive(Clone, Debug)]
pub struct EquilibriumResult {
    /// Patch midpoints with the equilibrium weights.
    pub measure: DiscreteMeasure,
    /// `I(μ₀)`; `-∞` for polar sets.
    pub energy: f64,
    /// `exp(I(μ₀))`.
    pub capacity: f64,
    pub kernel: KernelKind,
    /// False when the solver stopped on its iteration cap; the last iterate is kept.
    pub converged: bool,
    /// Largest deviation of the patch potentials from `I(μ₀)` over the support,
    /// and of positive excess off the support.
    pub kkt_residual: f64,
    patches: Vec<Patch>,
}

impl EquilibriumResult {
    fn polar(kernel: KernelKind, points: Vec<Point>) -> Self {
        let n = points.len().max(1);
        let weights = vec![1.0 / n as f64; points.len()];
        EquilibriumResult {
            measure: DiscreteMeasure { support: points, weights },
            energy: f64::NEG_INFINITY,
            capacity: 0.0,
            kernel,
            converged: true,
            kkt_residual: 0.0,
            patches: Vec::new(),
        }
    }

    /// `p_μ(z) = ∫ k(z, ζ) dμ(ζ)` for the result's kernel.
    pub fn potential(&self, z: Point) -> f64 {
        if self.patches.is_empty() {
            return f64::NEG_INFINITY;
        }
        let mut s = 0.0;
        for (p, &w) in self.patches.iter().zip(&self.measure.weights) {
            if w != 0.0 && p.a != p.b {
                s += w * kernel_avg(self.kernel, *p, z);
            }
        }
        s
    }

    /// Patch endpoints, for plotting and export.
    pub fn patch_endpoints(&self) -> Vec<(Point, Point)> {
        self.patches.iter().map(|p| (p.a, p.b)).collect()
    }
}

/// Average of `log|z − ζ|` over the chord `[a, b]`.
fn log_avg(p: Patch, z: Point) -> f64 {
    let d = p.b - p.a;
    let u = (z - p.a) / d;
    let um = u - 1.0;
    let xlogx = |v: Complex64| if v.norm_sqr() == 0.0 { Complex64::new(0.0, 0.0) } else { v * v.ln() };
    d.norm().ln() + (xlogx(u) - xlogx(um)).re - 1.0
}

fn green_correction(c: Point, r: f64, z: Point, w: Point) -> f64 {
    r.ln() - (r * r - (z - c) * (w - c).conj()).norm().ln()
}

fn kernel_avg(kind: KernelKind, p: Patch, z: Point) -> f64 {
    let base = log_avg(p, z);
    match kind {
        KernelKind::Logarithmic => base,
        KernelKind::Green { center, radius } => base + green_correction(center, radius, z, p.mid()),
    }
}

/// `g_{Δ(0,R)}(z, w) = log(R|z − w| / |R² − z w̄|)`; `-∞` when `z = w`.
pub fn green_function_disk(r: f64, z: Point, w: Point) -> f64 {
    if z == w {
        return f64::NEG_INFINITY;
    }
    (r * (z - w).norm() / (r * r - z * w.conj()).norm()).ln()
}

/// Cuts each curve into chords of equal arclength, `n` chords in total.
fn patches_from_curves(curves: &[Polyline], n: usize) -> Vec<Patch> {
    let lens: Vec<f64> = curves.iter().map(|c| c.length()).collect();
    let total: f64 = lens.iter().sum();
    let mut out = Vec::new();
    if total == 0.0 {
        return out;
    }
    for (c, &l) in curves.iter().zip(&lens) {
        if l == 0.0 {
            continue;
        }
        let min = if c.closed { 3 } else { 1 };
        let k = ((n as f64 * l / total).round() as usize).max(min);
        let mut pts = c.points.clone();
        if c.closed {
            pts.push(pts[0]);
        }
        let mut cum = vec![0.0; pts.len()];
        for i in 1..pts.len() {
            cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
        }
        let at = |s: f64| -> Point {
            let mut i = match cum.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
                Ok(i) => return pts[i],
                Err(i) => i,
            };
            i = i.clamp(1, pts.len() - 1);
            let seg = cum[i] - cum[i - 1];
            let t = if seg > 0.0 { (s - cum[i - 1]) / seg } else { 0.0 };
            pts[i - 1] + (pts[i] - pts[i - 1]) * t
        };
        let l = cum[cum.len() - 1];
        let nodes: Vec<Point> = (0..=k).map(|j| if j == k { pts[pts.len() - 1] } else { at(l * j as f64 / k as f64) }).collect();
        for j in 0..k {
            if nodes[j] != nodes[j + 1] {
                out.push(Patch { a: nodes[j], b: nodes[j + 1] });
            }
        }
    }
    out
}

fn interaction_matrix(kind: KernelKind, patches: &[Patch]) -> Vec<f64> {
    let n = patches.len();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        let li = patches[i].len();
        a[i * n + i] = li.ln() - 1.5;
        if let KernelKind::Green { center, radius } = kind {
            a[i * n + i] += green_correction(center, radius, patches[i].mid(), patches[i].mid());
        }
        for j in i + 1..n {
            let v = 0.5 * (kernel_avg(kind, patches[j], patches[i].mid()) + kernel_avg(kind, patches[i], patches[j].mid()));
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    a
}

/// Maximizes `wᵀAw` over the simplex. Active-set solves of the bordered KKT
/// system; projected gradient ascent if the active set cycles.
fn maximize_simplex(n: usize, a: &[f64]) -> (Vec<f64>, f64, bool, f64) {
    let mut active: Vec<bool> = vec![true; n];
    let mut w = vec![0.0; n];
    let mut ok = false;
    for _ in 0..4 * n + 10 {
        let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        let m = idx.len();
        let mut mat = vec![0.0; (m + 1) * (m + 1)];
        let mut rhs = vec![0.0; m + 1];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                mat[r * (m + 1) + c] = a[i * n + j];
            }
            mat[r * (m + 1) + m] = -1.0;
            mat[m * (m + 1) + r] = 1.0;
        }
        rhs[m] = 1.0;
        if lu_solve(m + 1, &mut mat, &mut rhs).is_err() {
            break;
        }
        let neg = (0..m).filter(|&r| rhs[r] < 0.0).min_by(|&x, &y| rhs[x].partial_cmp(&rhs[y]).unwrap());
        if let Some(r) = neg {
            active[idx[r]] = false;
            continue;
        }
        w.iter_mut().for_each(|v| *v = 0.0);
        for (r, &i) in idx.iter().enumerate() {
            w[i] = rhs[r];
        }
        let level = rhs[m];
        let aw = matvec(n, a, &w);
        let viol = (0..n).filter(|&j| !active[j] && aw[j] > level + 1e-12 * (1.0 + level.abs()));
        match viol.max_by(|&x, &y| aw[x].partial_cmp(&aw[y]).unwrap()) {
            Some(j) => active[j] = true,
            None => {
                ok = true;
                break;
            }
        }
    }
    if !ok {
        return projected_gradient(n, a);
    }
    let (energy, kkt) = kkt_report(n, a, &w);
    (w, energy, true, kkt)
}

fn matvec(n: usize, a: &[f64], w: &[f64]) -> Vec<f64> {
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * w[j]).sum()).collect()
}

fn kkt_report(n: usize, a: &[f64], w: &[f64]) -> (f64, f64) {
    let aw = matvec(n, a, w);
    let energy: f64 = (0..n).map(|i| w[i] * aw[i]).sum();
    let mut r: f64 = 0.0;
    for i in 0..n {
        if w[i] > 0.0 {
            r = r.max((aw[i] - energy).abs());
        } else {
            r = r.max(aw[i] - energy);
        }
    }
    (energy, r)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

fn projected_gradient(n: usize, a: &[f64]) -> (Vec<f64>, f64, bool, f64) {
    const MAX_ITER: usize = 20_000;
    let mut w = vec![1.0 / n as f64; n];
    let mut step = 1.0;
    let f = |w: &[f64]| -> f64 { (0..n).map(|i| w[i] * (0..n).map(|j| a[i * n + j] * w[j]).sum::<f64>()).sum() };
    let mut fw = f(&w);
    for _ in 0..MAX_ITER {
        let g: Vec<f64> = matvec(n, a, &w).into_iter().map(|x| 2.0 * x).collect();
        let mut trial = vec![0.0; n];
        let mut accepted = false;
        while step > 1e-16 {
            for i in 0..n {
                trial[i] = w[i] + step * g[i];
            }
            project_simplex(&mut trial);
            let ft = f(&trial);
            let dir: f64 = (0..n).map(|i| g[i] * (trial[i] - w[i])).sum();
            if ft >= fw + 1e-4 * dir {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let moved: f64 = (0..n).map(|i| (trial[i] - w[i]).powi(2)).sum::<f64>().sqrt() / step;
        w.copy_from_slice(&trial);
        fw = f(&w);
        step *= 2.0;
        if moved < 1e-8 {
            let (e, k) = kkt_report(n, a, &w);
            return (w, e, true, k);
        }
    }
    let (e, k) = kkt_report(n, a, &w);
    (w, e, false, k)
}

fn solve(kind: KernelKind, curves: &[Polyline], points: &[Point], n: usize) -> EquilibriumResult {
    let patches = patches_from_curves(curves, n);
    if patches.is_empty() {
        let mut all: Vec<Point> = points.to_vec();
        for c in curves {
            all.extend(&c.points);
        }
        return EquilibriumResult::polar(kind, all);
    }
    let m = patches.len();
    let a = interaction_matrix(kind, &patches);
    let (w, energy, converged, kkt) = maximize_simplex(m, &a);
    // isolated points are polar: they join the support with zero weight
    let mut support: Vec<Point> = patches.iter().map(|p| p.mid()).collect();
    let mut weights = w;
    for &p in points {
        if !support.contains(&p) {
            support.push(p);
            weights.push(0.0);
        }
    }
    let mut all_patches = patches;
    for &p in &support[m..] {
        all_patches.push(Patch { a: p, b: p });
    }
    // renormalize away rounding so the weights sum to one
    let s: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|v| *v /= s);
    EquilibriumResult {
        measure: DiscreteMeasure { support, weights },
        energy,
        capacity: energy.exp(),
        kernel: kind,
        converged,
        kkt_residual: kkt,
        patches: all_patches,
    }
}

/// Logarithmic equilibrium measure of `E` with `n` patches.
pub fn log_equilibrium(e: &CompactSet, n: usize) -> Result<EquilibriumResult> {
    if e.is_empty() {
        return Err(Error::invalid("equilibrium measure of the empty set"));
    }
    if n < 2 {
        return Err(Error::invalid("need at least 2 samples"));
    }
    let density = 16.0 * n as f64 / e.diameter().max(1e-300);
    let (curves, points) = e.outline(density);
    Ok(solve(KernelKind::Logarithmic, &curves, &points, n))
}

/// Logarithmic equilibrium of an arbitrary union of curves and points.
pub fn log_equilibrium_curves(curves: &[Polyline], points: &[Point], n: usize) -> EquilibriumResult {
    solve(KernelKind::Logarithmic, curves, points, n)
}

/// Green equilibrium of `E` relative to the disk `Δ(center, radius)`.
pub fn green_equilibrium(e: &CompactSet, center: Point, radius: f64, n: usize) -> Result<EquilibriumResult> {
    if e.is_empty() {
        return Err(Error::invalid("equilibrium measure of the empty set"));
    }
    let density = 16.0 * n as f64 / e.diameter().max(1e-300);
    let (curves, points) = e.outline(density);
    green_equilibrium_curves(&curves, &points, center, radius, n)
}

pub fn green_equilibrium_curves(
    curves: &[Polyline],
    points: &[Point],
    center: Point,
    radius: f64,
    n: usize,
) -> Result<EquilibriumResult> {
    if !(radius > 0.0) {
        return Err(Error::invalid("disk radius must be positive"));
    }
    let far = curves
        .iter()
        .flat_map(|c| c.points.iter())
        .chain(points)
        .map(|p| (p - center).norm())
        .fold(0.0, f64::max);
    if far >= radius {
        return Err(Error::invalid("compact set touches or leaves the disk"));
    }
    Ok(solve(KernelKind::Green { center, radius }, curves, points, n))
}

/// Distance from the sampled set to the circle `∂Δ(center, radius)`.
pub fn distance_to_circle(curves: &[Polyline], center: Point, radius: f64) -> f64 {
    let far = curves.iter().flat_map(|c| c.points.iter()).map(|p| (p - center).norm()).fold(0.0, f64::max);
    radius - far
}

#[derive(Clone, Debug)]
pub struct Cutoff {
    /// `χ = p_{μ₀} / I(μ₀)`, clamped to [0, 1], on a grid of the disk.
    pub chi: ScalarField,
    /// `c = −2π / I(μ₀)`.
    pub energy: f64,
    /// Quadrature value of `∫ |∇χ|²`.
    pub dirichlet: f64,
    /// Minimum of the unclamped potential minus `I(μ₀)` over the grid (Frostman check).
    pub frostman_gap: f64,
    /// Largest unclamped value of `χ`.
    pub chi_max: f64,
    pub equilibrium: EquilibriumResult,
}

/// Equilibrium-potential cutoff of `E` in `Δ(center, radius)`, sampled on a
/// grid of that disk at `resolution`.
pub fn equilibrium_cutoff(e: &CompactSet, center: Point, radius: f64, n: usize, resolution: f64) -> Result<Cutoff> {
    let eq = green_equilibrium(e, center, radius, n)?;
    if !(eq.energy < 0.0) {
        return Err(Error::Breakdown(alloc::format!("Green energy {} is not negative", eq.energy)));
    }
    let u = crate::geom::make_disk(center, radius)?;
    let grid = rasterize(&u, resolution)?;
    let raw: Vec<f64> = grid.centers.iter().map(|&z| eq.potential(z)).collect();
    let gap = raw.iter().fold(f64::INFINITY, |m, &p| m.min(p - eq.energy));
    let chi_max = raw.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p / eq.energy));
    let chi = ScalarField::from_values(&grid, raw.iter().map(|p| (p / eq.energy).clamp(0.0, 1.0)).collect())?;
    let dirichlet = dirichlet_energy(&chi);
    Ok(Cutoff { chi, energy: -2.0 * PI / eq.energy, dirichlet, frostman_gap: gap, chi_max, equilibrium: eq })
}

/// Robin constant `c_Ω(z)`: capacity of the image of `ℂ∞ ∖ Ω` under
/// `ζ ↦ 1/(ζ − z)`, with ∞ sent to 0.
pub fn robin_constant(domain: &Domain, z: Point, n: usize) -> Result<f64> {
    if !domain.contains(z) {
        return Err(Error::OutsideDomain { x: z.re, y: z.im });
    }
    let (curves, points) = domain.boundary_curves(1.0);
    let perimeter: f64 = curves.iter().map(|c| c.length()).sum();
    // dense enough that the image chords follow the image curves
    let density = (32.0 * n as f64 / perimeter.max(1e-300)).max(64.0);
    let (curves, points_b) = domain.boundary_curves(density);
    let inv = |p: Point| 1.0 / (p - z);
    let mut images: Vec<Polyline> = curves
        .iter()
        .map(|c| Polyline { points: c.points.iter().map(|&p| inv(p)).collect(), closed: c.closed })
        .collect();
    images.retain(|c| c.points.len() > 1);
    let mut pts: Vec<Point> = points.iter().chain(&points_b).map(|&p| inv(p)).collect();
    pts.push(pt(0.0, 0.0));
    let all: Vec<Point> = images.iter().flat_map(|c| c.points.iter().copied()).chain(pts.iter().copied()).collect();
    let spread = all.iter().map(|p| (p - all[0]).norm()).fold(0.0, f64::max);
    if spread <= 1e-12 {
        return Ok(0.0);
    }
    Ok(log_equilibrium_curves(&images, &pts, n).capacity)
}

#[derive(Clone, Copy, Debug)]
pub struct RadiusOptions {
    /// Candidate centres per axis on the bounding-box lattice (odd keeps the box centre).
    pub centers: usize,
    /// Geometric ladder steps per doubling of `s`.
    pub ladder_per_octave: usize,
    /// Patches per capacity evaluation.
    pub samples: usize,
    /// Bisection steps at the first failing rung.
    pub bisections: usize,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        RadiusOptions { centers: 11, ladder_per_octave: 4, samples: 64, bisections: 12 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RadiusResult {
    pub radius: f64,
    pub center: Point,
    pub centers_tried: usize,
}

/// Curves covering the outer boundary of `closure(Δ(z, s)) ∖ Ω`: arcs of the
/// circle outside `Ω` and the pieces of `∂Ω` inside the closed disk.
pub fn excluded_set(domain: &Domain, z: Point, s: f64) -> Vec<Polyline> {
    let mut out = Vec::new();
    let m = 512usize;
    let on = |t: f64| z + Point::from_polar(s, t);
    let outside = |t: f64| !domain.contains(on(t));
    let flags: Vec<bool> = (0..m).map(|k| outside(2.0 * PI * k as f64 / m as f64)).collect();
    if flags.iter().all(|&f| f) {
        out.push(Polyline { points: (0..m).map(|k| on(2.0 * PI * k as f64 / m as f64)).collect(), closed: true });
    } else if flags.iter().any(|&f| f) {
        let start = (0..m).find(|&k| !flags[k]).unwrap();
        let refine = |lo: f64, hi: f64| -> f64 {
            // lo is inside, hi outside
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..30 {
                let mid = 0.5 * (lo + hi);
                if outside(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        };
        let step = 2.0 * PI / m as f64;
        let mut k = 0;
        while k < m {
            let idx = (start + k) % m;
            if flags[idx] {
                let t0 = (start + k) as f64 * step;
                let a = refine(t0 - step, t0);
                let mut pts = vec![on(a)];
                let mut kk = k;
                while kk < m && flags[(start + kk) % m] {
                    pts.push(on((start + kk) as f64 * step));
                    kk += 1;
                }
                let t1 = (start + kk - 1) as f64 * step;
                let b = refine(t1 + step, t1);
                pts.push(on(b));
                out.push(Polyline { points: pts, closed: false });
                k = kk;
            } else {
                k += 1;
            }
        }
    }
    let density = (256.0 / s).max(64.0);
    let (curves, _) = domain.boundary_curves(density);
    for c in curves {
        let n = c.points.len();
        let edges = if c.closed { n } else { n - 1 };
        let inside = |p: Point| (p - z).norm() <= s;
        let mut cur: Vec<Point> = Vec::new();
        let mut pieces: Vec<Vec<Point>> = Vec::new();
        for e in 0..edges {
            let (p, q) = (c.points[e], c.points[(e + 1) % n]);
            match (inside(p), inside(q)) {
                (true, true) => {
                    if cur.is_empty() {
                        cur.push(p);
                    }
                    cur.push(q);
                }
                (true, false) => {
                    if cur.is_empty() {
                        cur.push(p);
                    }
                    let t = crate::util::circle_hit(p, q, z, s).unwrap_or(0.0);
                    cur.push(p + (q - p) * t);
                    pieces.push(core::mem::take(&mut cur));
                }
                (false, true) => {
                    let t = crate::util::circle_hit(p, q, z, s).unwrap_or(1.0);
                    cur.push(p + (q - p) * t);
                    cur.push(q);
                }
                (false, false) => {}
            }
        }
        if !cur.is_empty() {
            // a closed curve entirely inside, or a run wrapping past the start
            if c.closed && pieces.is_empty() && cur.len() > n {
                cur.pop();
                out.push(Polyline { points: cur, closed: true });
                continue;
            }
            if c.closed && !pieces.is_empty() && inside(c.points[0]) {
                let mut first = pieces.remove(0);
                cur.pop();
                cur.append(&mut first);
            }
            pieces.push(cur);
        }
        for p in pieces {
            if p.len() > 1 {
                out.push(Polyline { points: p, closed: false });
            }
        }
    }
    out
}

/// Logarithmic capacity of `closure(Δ(z, s)) ∖ Ω`.
pub fn excluded_capacity(domain: &Domain, z: Point, s: f64, n: usize) -> f64 {
    let curves = excluded_set(domain, z, s);
    if curves.iter().all(|c| c.length() == 0.0) {
        return 0.0;
    }
    log_equilibrium_curves(&curves, &[], n).capacity
}

/// Largest `r` with `C_l(closure(Δ(z, s)) ∖ Ω) ≤ α s` for all `s < r`, at a fixed centre.
/// Scans a geometric ladder upward from `δ(z)` and bisects at the first failure.
pub fn capacity_radius_at(domain: &Domain, z: Point, alpha: f64, opts: &RadiusOptions) -> f64 {
    let d = domain.boundary_distance(z);
    if d == 0.0 {
        return 0.0;
    }
    let q = 2f64.powf(1.0 / opts.ladder_per_octave.max(1) as f64);
    let ok = |s: f64| excluded_capacity(domain, z, s, opts.samples) <= alpha * s;
    let mut lo = d;
    let mut hi = d * q;
    let limit = 4.0 * (domain.diameter() + (z - domain.bbox.center()).norm()) + d;
    while ok(hi) {
        lo = hi;
        hi *= q;
        if hi > limit {
            return limit;
        }
    }
    for _ in 0..opts.bisections {
        let mid = (lo * hi).sqrt();
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `R_{L,α}(Ω)`: maximum of [`capacity_radius_at`] over a lattice of centres,
/// followed by a pattern search around the best one. A lower approximation.
pub fn capacity_radius(domain: &Domain, alpha: f64, opts: &RadiusOptions) -> Result<RadiusResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha must lie in (0, 1)"));
    }
    let b = domain.bbox;
    let m = opts.centers.max(1);
    let mut best = RadiusResult { radius: 0.0, center: b.center(), centers_tried: 0 };
    let mut tried = 0;
    for i in 0..m {
        for j in 0..m {
            let z = b.lo + pt(b.width() * (i as f64 + 0.5) / m as f64, b.height() * (j as f64 + 0.5) / m as f64);
            if !domain.contains(z) {
                continue;
            }
            tried += 1;
            let r = capacity_radius_at(domain, z, alpha, opts);
            if r > best.radius {
                best.radius = r;
                best.center = z;
            }
        }
    }
    let mut step = 0.5 * b.width().max(b.height()) / m as f64;
    for _ in 0..3 {
        let mut moved = false;
        for dir in [pt(1.0, 0.0), pt(-1.0, 0.0), pt(0.0, 1.0), pt(0.0, -1.0)] {
            let z = best.center + dir * step;
            if !domain.contains(z) {
                continue;
            }
            tried += 1;
            let r = capacity_radius_at(domain, z, alpha, opts);
            if r > best.radius {
                best.radius = r;
                best.center = z;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best.centers_tried = tried;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::make_disk;

    #[test]
    fn circle_and_segment_capacity() {
        let c = log_equilibrium(&CompactSet::ClosedDisk { center: pt(0.0, 0.0), radius: 1.0 }, 256).unwrap();
        assert!((c.capacity - 1.0).abs() < 1e-2, "{}", c.capacity);
        assert!(((c.energy.exp()) - c.capacity).abs() < 1e-12);
        let s = log_equilibrium(&CompactSet::Segment { a: pt(-2.0, 0.0), b: pt(2.0, 0.0) }, 512).unwrap();
        assert!((s.capacity - 1.0).abs() < 2e-2, "{}", s.capacity);
        assert!((s.measure.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_is_polar() {
        let r = log_equilibrium(&CompactSet::Points(vec![pt(0.3, 0.1)]), 8).unwrap();
        assert_eq!(r.capacity, 0.0);
    }

    #[test]
    fn green_disk_formula() {
        let z = pt(0.3, -0.2);
        assert!((green_function_disk(1.0, z, pt(0.0, 0.0)) - z.norm().ln()).abs() < 1e-15);
        let w = pt(-0.1, 0.5);
        assert!((green_function_disk(1.0, z, w) - green_function_disk(1.0, w, z)).abs() < 1e-14);
        let edge = Point::from_polar(0.999, 0.4);
        assert!(green_function_disk(1.0, edge, pt(0.3, 0.0)).abs() < 0.01);
        assert_eq!(green_function_disk(1.0, z, z), f64::NEG_INFINITY);
    }

    #[test]
    fn robin_disk() {
        let d = make_disk(pt(0.0, 0.0), 1.0).unwrap();
        let c0 = robin_constant(&d, pt(0.0, 0.0), 256).unwrap();
        assert!((c0 - 1.0).abs() < 1e-2, "{c0}");
        let c5 = robin_constant(&d, pt(0.5, 0.0), 256).unwrap();
        assert!((c5 - 4.0 / 3.0).abs() / (4.0 / 3.0) < 1.5e-2, "{c5}");
        assert!(robin_constant(&d, pt(2.0, 0.0), 64).is_err());
    }
}
