//! Masked uniform grids over a domain and the fields that live on them.
//!
//! Cells are square with side `h = 1/resolution`. The lattice is centred on
//! the domain's bounding box. A cell is masked in when its centre is a member
//! of the domain. Its weight is `h²` times the fraction of a 4×4 subsample
//! that lies inside; the area of partially covered cells whose centre is
//! outside is handed to their masked neighbours.

use alloc::{sync::Arc, vec, vec::Vec};
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::geom::Domain;
use crate::util::{pairwise_map, pairwise_map_c};
use crate::{pt, Error, Point, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub domain: Domain,
    /// Lower-left corner of the lattice.
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Masked cells in lexicographic (x, then y) order.
    cells: Vec<(u32, u32)>,
    index: Vec<u32>,
    pub weights: Vec<f64>,
    pub centers: Vec<Point>,
    /// Boundary distance at each cell centre.
    pub delta: Vec<f64>,
}

/// Neighbour directions: +x, −x, +y, −y.
pub const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

pub fn rasterize(domain: &Domain, resolution: f64) -> Result<Arc<QuadratureGrid>> {
    if !(resolution >= 8.0) || !resolution.is_finite() {
        return Err(Error::invalid("resolution must be at least 8 cells per unit"));
    }
    let h = 1.0 / resolution;
    let b = domain.bbox;
    let nx = ((b.width() * resolution - 1e-9).ceil() as usize).max(1);
    let ny = ((b.height() * resolution - 1e-9).ceil() as usize).max(1);
    let origin = b.center() - pt(nx as f64 * h * 0.5, ny as f64 * h * 0.5);
    let center = |i: usize, j: usize| origin + pt((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);

    let mut inside = vec![false; nx * ny];
    let mut frac = vec![0.0; nx * ny];
    for i in 0..nx {
        for j in 0..ny {
            let c = center(i, j);
            inside[i * ny + j] = domain.contains(c);
            let mut hits = 0u32;
            for a in 0..4 {
                for bq in 0..4 {
                    let off = pt((a as f64 - 1.5) * 0.25 * h, (bq as f64 - 1.5) * 0.25 * h);
                    if domain.contains(c + off) {
                        hits += 1;
                    }
                }
            }
            frac[i * ny + j] = hits as f64 / 16.0;
        }
    }

    let mut index = vec![NONE; nx * ny];
    let mut cells = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            if inside[i * ny + j] {
                index[i * ny + j] = cells.len() as u32;
                cells.push((i as u32, j as u32));
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::invalid("resolution too low: no cell centre lies in the domain"));
    }
    let mut weights: Vec<f64> = cells.iter().map(|&(i, j)| frac[i as usize * ny + j as usize] * h * h).collect();

    // spill partial cells whose centre fell outside onto masked neighbours
    for i in 0..nx {
        for j in 0..ny {
            let f = frac[i * ny + j];
            if inside[i * ny + j] || f == 0.0 {
                continue;
            }
            let mut targets = [0u32; 8];
            let mut nt = 0;
            for ring in [&[(1i64, 0i64), (-1, 0), (0, 1), (0, -1)][..], &[(1, 1), (1, -1), (-1, 1), (-1, -1)][..]] {
                for &(di, dj) in ring {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    let k = index[ii as usize * ny + jj as usize];
                    if k != NONE {
                        targets[nt] = k;
                        nt += 1;
                    }
                }
                if nt > 0 {
                    break;
                }
            }
            for &k in &targets[..nt] {
                weights[k as usize] += f * h * h / nt as f64;
            }
        }
    }

    let centers: Vec<Point> = cells.iter().map(|&(i, j)| center(i as usize, j as usize)).collect();
    let delta = centers.iter().map(|&z| domain.boundary_distance(z)).collect();
    Ok(Arc::new(QuadratureGrid { domain: domain.clone(), origin, h, nx, ny, cells, index, weights, centers, delta }))
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        1.0 / self.h
    }

    pub fn cell_ij(&self, k: usize) -> (usize, usize) {
        let (i, j) = self.cells[k];
        (i as usize, j as usize)
    }

    /// Masked cell at lattice position `(i, j)`.
    pub fn at(&self, i: i64, j: i64) -> Option<usize> {
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            return None;
        }
        let k = self.index[i as usize * self.ny + j as usize];
        (k != NONE).then_some(k as usize)
    }

    pub fn neighbor(&self, k: usize, dir: (i64, i64)) -> Option<usize> {
        let (i, j) = self.cells[k];
        self.at(i as i64 + dir.0, j as i64 + dir.1)
    }

    pub fn lattice_center(&self, i: i64, j: i64) -> Point {
        self.origin + pt((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }

    /// Masked cell containing `z`, if any.
    pub fn locate(&self, z: Point) -> Option<usize> {
        let u = (z - self.origin) / self.h;
        self.at(u.re.floor() as i64, u.im.floor() as i64)
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_map(self.len(), &|k| self.weights[k])
    }

    pub fn same_layout(&self, other: &QuadratureGrid) -> bool {
        core::ptr::eq(self, other)
            || (self.origin == other.origin
                && self.h == other.h
                && self.nx == other.nx
                && self.ny == other.ny
                && self.cells == other.cells)
    }

    /// `Σ f(k)·w_k` in the fixed pairwise order.
    pub fn integrate_fn(&self, f: impl Fn(usize) -> f64) -> f64 {
        pairwise_map(self.len(), &|k| f(k) * self.weights[k])
    }

    pub fn integrate_fn_c(&self, f: impl Fn(usize) -> Complex64) -> Complex64 {
        pairwise_map_c(self.len(), &|k| f(k) * self.weights[k])
    }
}

#[derive(Clone, Debug)]
pub struct ScalarField {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ComplexField {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<Complex64>,
}

fn check(a: &QuadratureGrid, b: &QuadratureGrid) {
    assert!(a.same_layout(b), "field arithmetic needs identical grids");
}

impl ScalarField {
    pub fn zeros(grid: &Arc<QuadratureGrid>) -> Self {
        ScalarField { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: &Arc<QuadratureGrid>, f: impl Fn(Point) -> f64) -> Self {
        ScalarField { grid: grid.clone(), values: grid.centers.iter().map(|&z| f(z)).collect() }
    }

    pub fn from_values(grid: &Arc<QuadratureGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid("value count differs from masked-cell count"));
        }
        Ok(ScalarField { grid: grid.clone(), values })
    }

    pub fn integrate(&self) -> f64 {
        integrate(self)
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid.integrate_fn(|k| self.values[k] * self.values[k]).sqrt()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField { grid: self.grid.clone(), values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl ComplexField {
    pub fn zeros(grid: &Arc<QuadratureGrid>) -> Self {
        ComplexField { grid: grid.clone(), values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: &Arc<QuadratureGrid>, f: impl Fn(Point) -> Complex64) -> Self {
        ComplexField { grid: grid.clone(), values: grid.centers.iter().map(|&z| f(z)).collect() }
    }

    pub fn integrate(&self) -> Complex64 {
        self.grid.integrate_fn_c(|k| self.values[k])
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid.integrate_fn(|k| self.values[k].norm_sqr()).sqrt()
    }

    /// `(∫ |f|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.grid.integrate_fn(|k| self.values[k].norm().powf(p)).powf(1.0 / p)
    }

    /// `⟨f, g⟩ = ∫ f ḡ`.
    pub fn inner(&self, other: &ComplexField) -> Complex64 {
        check(&self.grid, &other.grid);
        self.grid.integrate_fn_c(|k| self.values[k] * other.values[k].conj())
    }

    pub fn abs(&self) -> ScalarField {
        ScalarField { grid: self.grid.clone(), values: self.values.iter().map(|v| v.norm()).collect() }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        ComplexField { grid: self.grid.clone(), values: self.values.iter().map(|&v| a * v).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

macro_rules! field_ops {
    ($t:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                check(&self.grid, &o.grid);
                let values = self.values.iter().zip(&o.values).map(|(a, b)| *a + *b).collect();
                <$t>::from_raw(&self.grid, values)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                check(&self.grid, &o.grid);
                let values = self.values.iter().zip(&o.values).map(|(a, b)| *a - *b).collect();
                <$t>::from_raw(&self.grid, values)
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                check(&self.grid, &o.grid);
                let values = self.values.iter().zip(&o.values).map(|(a, b)| *a * *b).collect();
                <$t>::from_raw(&self.grid, values)
            }
        }
    };
}

impl ScalarField {
    fn from_raw(grid: &Arc<QuadratureGrid>, values: Vec<f64>) -> Self {
        ScalarField { grid: grid.clone(), values }
    }
}

impl ComplexField {
    fn from_raw(grid: &Arc<QuadratureGrid>, values: Vec<Complex64>) -> Self {
        ComplexField { grid: grid.clone(), values }
    }
}

field_ops!(ScalarField);
field_ops!(ComplexField);

/// `Σ f·w` with the pairwise reduction tree fixed by cell order.
pub fn integrate(f: &ScalarField) -> f64 {
    f.grid.integrate_fn(|k| f.values[k])
}

/// One axis of a finite-difference derivative: central where both
/// neighbours are masked, one-sided where only one is, zero otherwise.
fn diff<T>(grid: &QuadratureGrid, v: &[T], k: usize, plus: (i64, i64), minus: (i64, i64)) -> T
where
    T: Copy + Sub<Output = T> + Mul<f64, Output = T> + Default,
{
    match (grid.neighbor(k, plus), grid.neighbor(k, minus)) {
        (Some(a), Some(b)) => (v[a] - v[b]) * (0.5 / grid.h),
        (Some(a), None) => (v[a] - v[k]) * (1.0 / grid.h),
        (None, Some(b)) => (v[k] - v[b]) * (1.0 / grid.h),
        (None, None) => T::default(),
    }
}

pub fn gradient(f: &ScalarField) -> (ScalarField, ScalarField) {
    let g = &f.grid;
    let gx = (0..g.len()).map(|k| diff(g, &f.values, k, (1, 0), (-1, 0))).collect();
    let gy = (0..g.len()).map(|k| diff(g, &f.values, k, (0, 1), (0, -1))).collect();
    (ScalarField::from_raw(g, gx), ScalarField::from_raw(g, gy))
}

/// `∂f/∂z̄ = ½(∂_x + i ∂_y) f`.
pub fn dbar_derivative(f: &ComplexField) -> ComplexField {
    let g = &f.grid;
    let values = (0..g.len())
        .map(|k| {
            let dx = diff(g, &f.values, k, (1, 0), (-1, 0));
            let dy = diff(g, &f.values, k, (0, 1), (0, -1));
            (dx + Complex64::i() * dy) * 0.5
        })
        .collect();
    ComplexField::from_raw(g, values)
}

/// `∂f/∂z = ½(∂_x − i ∂_y) f`.
pub fn d_derivative(f: &ComplexField) -> ComplexField {
    let g = &f.grid;
    let values = (0..g.len())
        .map(|k| {
            let dx = diff(g, &f.values, k, (1, 0), (-1, 0));
            let dy = diff(g, &f.values, k, (0, 1), (0, -1));
            (dx - Complex64::i() * dy) * 0.5
        })
        .collect();
    ComplexField::from_raw(g, values)
}

/// `∫ |∇f|²` with the gradient above.
pub fn dirichlet_energy(f: &ScalarField) -> f64 {
    let (gx, gy) = gradient(f);
    f.grid.integrate_fn(|k| gx.values[k] * gx.values[k] + gy.values[k] * gy.values[k])
}
