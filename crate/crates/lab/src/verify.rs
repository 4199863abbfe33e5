//! The experiment suite: every inequality row over a domain corpus, the
//! excision sweep, and the empirical constant for `κ ≥ c0 λ1`.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use potlab_core::bergman::{build_basis, comparison_functionals, diag_on_grid, kernel, kernel_diag, kernel_min, BergmanBasis};
use potlab_core::dbar::{boundary_decay, bump_data, lp_estimate_check, weighted_estimate_check};
use potlab_core::geom::{make_annulus, make_disk, make_rect, subtract_compact, CompactSet, Domain, Shape};
use potlab_core::grid::{rasterize, QuadratureGrid, ScalarField};
use potlab_core::potential::{capacity_radius, log_equilibrium, robin_constant, RadiusOptions, RadiusResult};
use potlab_core::spectral::{dirichlet_lambda1, hardy_extrapolate, ms_test_function, MsParams};
use potlab_core::{fit_line, pt, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::formats::fmt_e;
use crate::svg::Scale;
use crate::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `lhs ≥ rhs`
    Ge,
    /// `lhs ≤ rhs`
    Le,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            ">=" => Some(Relation::Ge),
            "<=" => Some(Relation::Le),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub id: String,
    pub domain: String,
    pub params: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed slack of the relation, relative to `|rhs|` (absolute when `rhs = 0`).
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub resolutions: String,
}

impl ReportRow {
    pub fn new(
        id: &str,
        domain: &str,
        params: String,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        resolutions: String,
    ) -> Self {
        let diff = match relation {
            Relation::Ge => lhs - rhs,
            Relation::Le => rhs - lhs,
        };
        let margin = if rhs != 0.0 { diff / rhs.abs() } else { diff };
        let pass = lhs.is_finite() && rhs.is_finite() && margin >= -tolerance;
        ReportRow { id: id.into(), domain: domain.into(), params, relation, lhs, rhs, margin, tolerance, pass, resolutions }
    }

    fn failed(id: &str, domain: &str, params: String, err: &dyn std::fmt::Display, tolerance: f64, res: String) -> Self {
        let mut r = ReportRow::new(id, domain, format!("{params};error={err}"), Relation::Ge, f64::NAN, 0.0, tolerance, res);
        r.params = r.params.replace(',', " ");
        r
    }
}

pub const IDS: [&str; 10] = [
    "blocki",
    "collar-decay",
    "comparison-monotone",
    "excision",
    "kappa-capacity-radius",
    "kappa-over-lambda",
    "lambda-capacity-radius",
    "lieb",
    "lp-dbar-shape",
    "weighted-dbar",
];

/// Unit disk, unit square, annulus(0, ½, 1), unit disk minus `[0, ¾]`, and the 2×1 rectangle.
pub fn default_corpus() -> Vec<Domain> {
    let disk = make_disk(pt(0.0, 0.0), 1.0).expect("disk");
    vec![
        disk.clone(),
        make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).expect("square").with_label("square"),
        make_annulus(pt(0.0, 0.0), 0.5, 1.0).expect("annulus"),
        subtract_compact(disk, CompactSet::Segment { a: pt(0.0, 0.0), b: pt(0.75, 0.0) })
            .expect("slit")
            .with_label("slit-disk"),
        make_rect(pt(0.0, 0.0), pt(2.0, 1.0)).expect("rect").with_label("rect-2x1"),
    ]
}

fn label_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

/// `n` points of `d` with `δ ≥ min_delta`, uniform by rejection in the bounding box.
pub fn sample_points(d: &Domain, n: usize, seed: u64, min_delta: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(label_seed(seed, &d.label));
    let b = d.bbox;
    let mut out = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n && tries < 100_000 * n.max(1) {
        tries += 1;
        let z = b.lo + pt(rng.gen::<f64>() * b.width(), rng.gen::<f64>() * b.height());
        if d.boundary_distance(z) >= min_delta {
            out.push(z);
        }
    }
    out
}

/// `|B(x, r) ∖ Ω| / |B(x, r)|` by a polar midpoint rule.
pub fn complement_density(d: &Domain, x: Point, r: f64) -> f64 {
    const RINGS: usize = 16;
    const ANGLES: usize = 48;
    let mut out = 0.0;
    let mut total = 0.0;
    for i in 0..RINGS {
        let rho = r * (i as f64 + 0.5) / RINGS as f64;
        for j in 0..ANGLES {
            let t = 2.0 * PI * (j as f64 + 0.5) / ANGLES as f64;
            let w = rho;
            total += w;
            if !d.contains(x + Complex64::from_polar(rho, t)) {
                out += w;
            }
        }
    }
    out / total
}

/// Infimum of the complement density over the centres of a coarse grid.
pub fn lieb_density(d: &Domain, r: f64) -> Result<f64, LabError> {
    let g = rasterize(d, 32.0)?;
    Ok(g.centers.iter().map(|&x| complement_density(d, x, r)).fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub k: usize,
    pub set: CompactSet,
    pub capacity: f64,
    pub diff: f64,
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// `min(δ(z), δ(w))` in `Ω ∖ E_1`.
    pub r0: f64,
    /// Fitted `a` in `d ≈ C [log(r0/cap)]^{−a}` over rows with `cap < r0`.
    pub exponent: f64,
    pub constant: f64,
    pub fitted_rows: usize,
    /// Difference after excising the single point at the family's centre.
    pub point_diff: f64,
}

/// Centred horizontal segments of length `4^{1−k}`, `k = 1..=6`.
pub fn default_family(base: &Domain) -> Vec<CompactSet> {
    let c = base.centroid();
    (1..=6)
        .map(|k| {
            let l = 4f64.powi(1 - k);
            CompactSet::Segment { a: c - pt(0.5 * l, 0.0), b: c + pt(0.5 * l, 0.0) }
        })
        .collect()
}

fn kernel_on(d: &Domain, res: f64, degree: usize, z: Point, w: Point) -> Result<Complex64, LabError> {
    let g = rasterize(d, res)?;
    let b = build_basis(&g, degree, None)?;
    Ok(kernel(&b, z, w)?)
}

pub fn excision_sweep(
    base: &Domain,
    family: &[CompactSet],
    z: Point,
    w: Point,
    resolution: f64,
    degree: usize,
    samples: usize,
) -> Result<Sweep, LabError> {
    if family.is_empty() {
        return Err(LabError::Usage("empty excision family".into()));
    }
    let k0 = kernel_on(base, resolution, degree, z, w)?;
    let first = subtract_compact(base.clone(), family[0].clone())?;
    let r0 = first.boundary_distance(z).min(first.boundary_distance(w));
    let mut rows = Vec::new();
    for (i, e) in family.iter().enumerate() {
        let d = subtract_compact(base.clone(), e.clone())?;
        let kk = kernel_on(&d, resolution, degree, z, w)?;
        let capacity = log_equilibrium(e, samples)?.capacity;
        rows.push(SweepRow { k: i + 1, set: e.clone(), capacity, diff: (kk - k0).norm() });
    }
    let fit: Vec<&SweepRow> = rows.iter().filter(|r| r.capacity < r0 && r.diff > 0.0).collect();
    let fitted_rows = fit.len();
    let (exponent, constant) = if fit.len() >= 2 {
        let x: Vec<f64> = fit.iter().map(|r| (r0 / r.capacity).ln().ln()).collect();
        let y: Vec<f64> = fit.iter().map(|r| r.diff.ln()).collect();
        let (s, c) = fit_line(&x, &y);
        (-s, c.exp())
    } else {
        (f64::NAN, f64::NAN)
    };
    let centre = base.centroid();
    let pd = subtract_compact(base.clone(), CompactSet::Points(vec![centre]))?;
    let point_diff = (kernel_on(&pd, resolution, degree, z, w)? - k0).norm();
    Ok(Sweep { rows, r0, exponent, constant, fitted_rows, point_diff })
}

/// Resolutions for the Hardy extrapolation: `2r/3, r, 4r/3`.
pub fn hardy_ladder(resolution: f64) -> [f64; 3] {
    [resolution * 2.0 / 3.0, resolution, resolution * 4.0 / 3.0]
}

/// Per-domain quantities shared by several rows.
pub struct DomainOutcome {
    pub label: String,
    pub rows: Vec<ReportRow>,
    pub kappa_over_lambda: Option<f64>,
    pub figures: Vec<(String, ScalarField, Scale)>,
}

pub struct SuiteOutput {
    pub rows: Vec<ReportRow>,
    pub figures: Vec<(String, ScalarField, Scale)>,
}

fn res_tag(c: &Config) -> String {
    format!("res={};degree={}", c.resolution, c.degree)
}

struct Ctx<'a> {
    d: &'a Domain,
    cfg: &'a Config,
    basis: BergmanBasis,
    rows: Vec<ReportRow>,
}

impl Ctx<'_> {
    fn push(&mut self, id: &str, params: String, rel: Relation, lhs: f64, rhs: f64, tol: f64) {
        self.rows.push(ReportRow::new(id, &self.d.label, params, rel, lhs, rhs, tol, res_tag(self.cfg)));
    }

    fn fail(&mut self, id: &str, params: String, err: &dyn std::fmt::Display, tol: f64) {
        self.rows.push(ReportRow::failed(id, &self.d.label, params, err, tol, res_tag(self.cfg)));
    }
}

fn run_domain(d: &Domain, cfg: &Config) -> DomainOutcome {
    let label = d.label.clone();
    let tol = &cfg.tolerances;
    let setup = (|| -> Result<_, LabError> {
        let grid = rasterize(d, cfg.resolution)?;
        let basis = build_basis(&grid, cfg.degree, None)?;
        Ok((grid, basis))
    })();
    let (grid, basis) = match setup {
        Ok(v) => v,
        Err(e) => {
            return DomainOutcome {
                label: label.clone(),
                rows: vec![ReportRow::failed("kappa-over-lambda", &label, "setup".into(), &e, 0.0, res_tag(cfg))],
                kappa_over_lambda: None,
                figures: Vec::new(),
            }
        }
    };
    let mut cx = Ctx { d, cfg, basis, rows: Vec::new() };
    let (kappa, kappa_at) = kernel_min(&cx.basis, &grid);
    let (inradius, incentre) = d.inradius_search();

    // Bergman kernel against the Robin constant
    for z in sample_points(d, cfg.blocki_points, cfg.seed, 0.25 * inradius) {
        let p = format!("z=({};{})", fmt_e(z.re), fmt_e(z.im));
        match (robin_constant(d, z, cfg.samples), kernel_diag(&cx.basis, z)) {
            (Ok(c), Ok(k)) => cx.push("blocki", p, Relation::Le, c * c / PI, k, tol.blocki),
            (Err(e), _) => cx.fail("blocki", p, &e, tol.blocki),
            (_, Err(e)) => cx.fail("blocki", p, &e, tol.blocki),
        }
    }

    // κ against the capacity radius
    let mut radii: Vec<(f64, Result<RadiusResult, String>)> = Vec::new();
    let mut alphas = cfg.alphas.clone();
    if !alphas.contains(&cfg.ms.alpha) {
        alphas.push(cfg.ms.alpha);
    }
    for &a in &alphas {
        radii.push((a, capacity_radius(d, a, &RadiusOptions::default()).map_err(|e| e.to_string())));
    }
    for &a in &cfg.alphas {
        let p = format!("alpha={a}");
        match &radii.iter().find(|(x, _)| *x == a).expect("computed").1 {
            Ok(r) => {
                let rhs = a * a / (PI * r.radius * r.radius);
                cx.push("kappa-capacity-radius", format!("{p};R={}", fmt_e(r.radius)), Relation::Ge, kappa, rhs, tol.kappa_capacity_radius)
            }
            Err(e) => cx.fail("kappa-capacity-radius", p, e, tol.kappa_capacity_radius),
        }
    }

    let mut figures = vec![(format!("{label}-kernel-diag"), diag_on_grid(&cx.basis), Scale::Log)];
    let mut kol = None;
    match dirichlet_lambda1(&grid) {
        Ok(eig) => {
            let lam = eig.value;
            figures.push((format!("{label}-eigenfunction"), eig.field.clone(), Scale::Linear));
            kol = Some(kappa / lam);
            cx.push(
                "kappa-over-lambda",
                format!("kappa={};argmin=({};{});lambda1={}", fmt_e(kappa), fmt_e(kappa_at.re), fmt_e(kappa_at.im), fmt_e(lam)),
                Relation::Ge,
                kappa / lam,
                0.0,
                tol.kappa_over_lambda,
            );
            for &f in &cfg.lieb_factors {
                let r = f * inradius;
                let p = format!("r={}*inradius", f);
                match lieb_density(d, r) {
                    Ok(dens) => cx.push("lieb", format!("{p};density={}", fmt_e(dens)), Relation::Ge, lam, 2.0 * dens / (4.0 * r * r), tol.lieb),
                    Err(e) => cx.fail("lieb", p, &e, tol.lieb),
                }
            }
            // test-function certificate from the capacity radius
            let m = &cfg.ms;
            let p = format!("alpha={};eps={};N={}", m.alpha, m.eps, m.n_outer);
            match &radii.iter().find(|(x, _)| *x == m.alpha).expect("computed").1 {
                Ok(r) => {
                    let params = MsParams { eps: m.eps, n_outer: m.n_outer, samples: 128 };
                    match ms_test_function(&grid, r.center, m.alpha, m.radius_fraction * r.radius, &params) {
                        Ok(t) => {
                            cx.push("lambda-capacity-radius", format!("{p};quotient"), Relation::Ge, t.quotient, lam, tol.lambda_capacity_radius);
                            cx.push(
                                "lambda-capacity-radius",
                                format!("{p};quotient*R^2;R={}", fmt_e(r.radius)),
                                Relation::Ge,
                                t.quotient * r.radius * r.radius,
                                0.0,
                                0.0,
                            );
                        }
                        Err(e) => cx.fail("lambda-capacity-radius", p, &e, tol.lambda_capacity_radius),
                    }
                }
                Err(e) => cx.fail("lambda-capacity-radius", p, e, tol.lambda_capacity_radius),
            }
        }
        Err(e) => cx.fail("kappa-over-lambda", "lambda1".into(), &e, tol.kappa_over_lambda),
    }

    dbar_part(&mut cx, &grid, incentre);
    DomainOutcome { label, rows: cx.rows, kappa_over_lambda: kol, figures }
}

fn dbar_part(cx: &mut Ctx, grid: &std::sync::Arc<QuadratureGrid>, incentre: Point) {
    let cfg = cx.cfg;
    let tol = &cfg.tolerances;
    match hardy_extrapolate(cx.d, &hardy_ladder(cfg.resolution)) {
        Ok(h) if h.value > 0.0 => {
            let c = 0.9 * h.value;
            let disc: Vec<String> = h.discrete.iter().map(|v| fmt_e(*v)).collect();
            let hp = format!("h={};discrete={};c=0.9h", fmt_e(h.value), disc.join(" "));
            let data = bump_data(grid);
            for (i, v) in data.iter().enumerate() {
                for frac in [0.2, 0.8] {
                    let alpha = frac * 2.0 * c / 3.0;
                    let p = format!("{hp};bump={i};alpha={}", fmt_e(alpha));
                    match weighted_estimate_check(grid, &cx.basis, v, alpha, c) {
                        Ok(r) => cx.push("weighted-dbar", p, Relation::Le, r.lhs, r.rhs, tol.weighted_dbar),
                        Err(e) => cx.fail("weighted-dbar", p, &e, tol.weighted_dbar),
                    }
                }
            }
            match lp_estimate_check(grid, &cx.basis, &data[0], &cfg.p_ladder) {
                Ok(rows) => {
                    let c0: Vec<f64> = rows.iter().map(|r| r.implied_c0).collect();
                    let hi = c0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let lo = c0.iter().copied().fold(f64::INFINITY, f64::min);
                    let list: Vec<String> = c0.iter().map(|v| fmt_e(*v)).collect();
                    cx.push("lp-dbar-shape", format!("implied_c0={}", list.join(" ")), Relation::Le, hi / lo, 10.0, tol.lp_dbar_shape);
                }
                Err(e) => cx.fail("lp-dbar-shape", String::new(), &e, tol.lp_dbar_shape),
            }
            match boundary_decay(grid, &cx.basis, incentre) {
                Ok(dec) => cx.push(
                    "collar-decay",
                    format!("{hp};w=({};{});rungs={}", fmt_e(incentre.re), fmt_e(incentre.im), dec.eps.len()),
                    Relation::Ge,
                    dec.slope,
                    2.0 * c / 3.0 - 0.1,
                    tol.collar_decay,
                ),
                Err(e) => cx.fail("collar-decay", hp, &e, tol.collar_decay),
            }
        }
        Ok(h) => cx.fail("weighted-dbar", "hardy".into(), &format!("extrapolated Hardy constant {} is not positive", h.value), tol.weighted_dbar),
        Err(e) => cx.fail("weighted-dbar", "hardy".into(), &e, tol.weighted_dbar),
    }
}

/// The ∂̄ estimate rows of one domain: weighted L², L^p shape and collar decay.
pub fn dbar_rows(d: &Domain, cfg: &Config) -> Result<Vec<ReportRow>, LabError> {
    cfg.validate()?;
    let grid = rasterize(d, cfg.resolution)?;
    let basis = build_basis(&grid, cfg.degree, None)?;
    let (_, incentre) = d.inradius_search();
    let mut cx = Ctx { d, cfg, basis, rows: Vec::new() };
    dbar_part(&mut cx, &grid, incentre);
    cx.rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(cx.rows)
}

/// Comparison functionals of `Ω ∖ E` against `Ω` at random pairs.
fn run_comparison(d: &Domain, cfg: &Config) -> Vec<ReportRow> {
    let Shape::Difference { outer, .. } = &d.shape else { return Vec::new() };
    let tol = cfg.tolerances.comparison_monotone;
    let res = res_tag(cfg);
    let work = || -> Result<Vec<ReportRow>, LabError> {
        let g1 = rasterize(d, cfg.resolution)?;
        let b1 = build_basis(&g1, cfg.degree, None)?;
        let g2 = rasterize(outer, cfg.resolution)?;
        let b2 = build_basis(&g2, cfg.degree, None)?;
        let pts = sample_points(d, 2 * cfg.pairs, cfg.seed.wrapping_add(1), 0.05);
        let mut rows = Vec::new();
        for pair in pts.chunks_exact(2) {
            let (z, w) = (pair[0], pair[1]);
            let a = comparison_functionals(&b1, z, w)?;
            let b = comparison_functionals(&b2, z, w)?;
            let worst = (0..4).map(|i| a[i] / b[i]).fold(f64::INFINITY, f64::min);
            rows.push(ReportRow::new(
                "comparison-monotone",
                &d.label,
                format!("z=({};{});w=({};{});min ratio over R+ R- I+ I-", fmt_e(z.re), fmt_e(z.im), fmt_e(w.re), fmt_e(w.im)),
                Relation::Ge,
                worst,
                1.0,
                tol,
                res.clone(),
            ));
        }
        Ok(rows)
    };
    work().unwrap_or_else(|e| vec![ReportRow::failed("comparison-monotone", &d.label, String::new(), &e, tol, res.clone())])
}

/// Probe point of the excision sweep: just off the tip of the first segment.
pub fn sweep_probe(base: &Domain) -> Point {
    base.centroid() + pt(0.45, 0.1)
}

fn run_excision(d: &Domain, cfg: &Config) -> Vec<ReportRow> {
    let tol = cfg.tolerances.excision;
    let res = res_tag(cfg);
    let z = sweep_probe(d);
    match excision_sweep(d, &default_family(d), z, z, cfg.resolution, cfg.degree, cfg.samples) {
        Ok(s) => {
            let mut rows = Vec::new();
            let worst = s.rows.windows(2).map(|w| w[1].diff / w[0].diff).fold(0.0, f64::max);
            let diffs: Vec<String> = s.rows.iter().map(|r| fmt_e(r.diff)).collect();
            let base = format!("z=w=({};{});r0={};subharmonic exhaustion assumed", fmt_e(z.re), fmt_e(z.im), fmt_e(s.r0));
            rows.push(ReportRow::new("excision", &d.label, format!("{base};max step ratio;diffs={}", diffs.join(" ")), Relation::Le, worst, 1.0, tol, res.clone()));
            let last = s.rows.last().expect("nonempty").diff / s.rows[0].diff;
            rows.push(ReportRow::new("excision", &d.label, format!("{base};final/initial"), Relation::Le, last, 0.2, 0.0, res.clone()));
            rows.push(ReportRow::new(
                "excision",
                &d.label,
                format!("{base};fitted exponent a;C={};rows={}", fmt_e(s.constant), s.fitted_rows),
                Relation::Ge,
                s.exponent,
                0.0,
                0.0,
                res.clone(),
            ));
            rows.push(ReportRow::new("excision", &d.label, format!("{base};point excision"), Relation::Le, s.point_diff, 1e-6, 0.0, res));
            rows
        }
        Err(e) => vec![ReportRow::failed("excision", &d.label, String::new(), &e, tol, res)],
    }
}

/// Run closures on up to `jobs` threads; results come back in input order.
pub fn run_parallel<T: Send>(jobs: usize, tasks: Vec<Box<dyn FnOnce() -> T + Send + '_>>) -> Vec<T> {
    let n = tasks.len();
    let slots: Vec<Mutex<Option<Box<dyn FnOnce() -> T + Send + '_>>>> = tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let out: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let task = slots[i].lock().expect("task slot").take().expect("task taken once");
                let r = task();
                *out[i].lock().expect("result slot") = Some(r);
            });
        }
    });
    out.into_iter().map(|m| m.into_inner().expect("result slot").expect("task ran")).collect()
}

/// All rows for the corpus, ordered by `(id, domain)` and otherwise by generation order.
pub fn run_suite(corpus: &[Domain], cfg: &Config, jobs: usize) -> Result<SuiteOutput, LabError> {
    if corpus.is_empty() {
        return Err(LabError::Usage("corpus is empty".into()));
    }
    cfg.validate()?;
    enum Part {
        Domain(DomainOutcome),
        Rows(Vec<ReportRow>),
    }
    let mut tasks: Vec<Box<dyn FnOnce() -> Part + Send + '_>> = Vec::new();
    for d in corpus {
        tasks.push(Box::new(move || Part::Domain(run_domain(d, cfg))));
    }
    for d in corpus {
        if matches!(d.shape, Shape::Difference { .. }) {
            tasks.push(Box::new(move || Part::Rows(run_comparison(d, cfg))));
        }
        if matches!(d.shape, Shape::Disk { .. }) {
            tasks.push(Box::new(move || Part::Rows(run_excision(d, cfg))));
        }
    }
    let parts = run_parallel(jobs, tasks);
    let mut rows = Vec::new();
    let mut figures = Vec::new();
    let mut ratios = Vec::new();
    for p in parts {
        match p {
            Part::Domain(o) => {
                if let Some(r) = o.kappa_over_lambda {
                    ratios.push((o.label.clone(), r));
                }
                rows.extend(o.rows);
                figures.extend(o.figures);
            }
            Part::Rows(r) => rows.extend(r),
        }
    }
    if let Some((lab, c0)) = c0_from(&ratios) {
        rows.push(ReportRow::new(
            "kappa-over-lambda",
            "~corpus",
            format!("empirical c0 (minimum at {lab})"),
            Relation::Ge,
            c0,
            0.0,
            cfg.tolerances.kappa_over_lambda,
            res_tag(cfg),
        ));
    }
    rows.sort_by(|a, b| (a.id.as_str(), a.domain.as_str()).cmp(&(b.id.as_str(), b.domain.as_str())));
    Ok(SuiteOutput { rows, figures })
}

fn c0_from(ratios: &[(String, f64)]) -> Option<(String, f64)> {
    ratios.iter().cloned().fold(None, |best: Option<(String, f64)>, (l, r)| match best {
        Some((bl, br)) if br <= r => Some((bl, br)),
        _ => Some((l, r)),
    })
}

/// `min κ/λ1` over the corpus, with the label where it is attained.
pub fn c0_estimate(corpus: &[Domain], resolution: f64, degree: usize) -> Result<(f64, String), LabError> {
    let mut ratios = Vec::new();
    for d in corpus {
        let g = rasterize(d, resolution)?;
        let b = build_basis(&g, degree, None)?;
        let (kappa, _) = kernel_min(&b, &g);
        let lam = dirichlet_lambda1(&g)?.value;
        ratios.push((d.label.clone(), kappa / lam));
    }
    let (l, v) = c0_from(&ratios).ok_or_else(|| LabError::Usage("corpus is empty".into()))?;
    Ok((v, l))
}
