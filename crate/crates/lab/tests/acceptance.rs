//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use potlab::config::Config;
use potlab::report::{to_csv, to_json};
use potlab::verify::{c0_estimate, default_corpus, run_suite, ReportRow};
use potlab_core::bergman::{build_basis, kernel, kernel_diag};
use potlab_core::dbar::{bump_data, lp_estimate_check};
use potlab_core::geom::{make_disk, CompactSet, Domain};
use potlab_core::grid::rasterize;
use potlab_core::potential::{capacity_radius, green_equilibrium, log_equilibrium, robin_constant, RadiusOptions};
use potlab_core::spectral::{bessel_j0_first_zero_sq, dirichlet_lambda1, hardy_extrapolate, ms_test_function, MsParams};
use potlab_core::{pt, Complex64, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;

struct Tally {
    failed: usize,
}

impl Tally {
    fn report(&mut self, n: usize, name: &str, start: Instant, r: Outcome) {
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match r {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            self.failed += 1;
        }
        println!("{} {:>2} {name}: {detail} [{secs:.1}s]", if ok { "PASS" } else { "FAIL" }, n);
    }
}

fn disk() -> Domain {
    make_disk(pt(0.0, 0.0), 1.0).unwrap()
}

fn in_disk(rng: &mut ChaCha8Rng, r: f64) -> Point {
    Complex64::from_polar(r * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn rows<'a>(all: &'a [ReportRow], id: &str, domains: &[&str]) -> Vec<&'a ReportRow> {
    all.iter().filter(|r| r.id == id && (domains.is_empty() || domains.contains(&r.domain.as_str()))).collect()
}

fn all_pass(rs: &[&ReportRow], min_count: usize) -> (bool, f64) {
    let worst = rs.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    (rs.len() >= min_count && rs.iter().all(|r| r.pass), worst)
}

fn crit1() -> Outcome {
    let g = rasterize(&disk(), 128.0).map_err(|e| e.to_string())?;
    let b = build_basis(&g, 40, None).map_err(|e| e.to_string())?;
    let k0 = kernel(&b, pt(0.0, 0.0), pt(0.0, 0.0)).map_err(|e| e.to_string())?.re;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..25 {
        let (z, w) = (in_disk(&mut rng, 0.7), in_disk(&mut rng, 0.7));
        let exact = 1.0 / (PI * (Complex64::new(1.0, 0.0) - z * w.conj()).powi(2));
        let k = kernel(&b, z, w).map_err(|e| e.to_string())?;
        worst = worst.max((k - exact).norm() / exact.norm());
    }
    let e0 = (k0 - 1.0 / PI).abs();
    Ok((e0 <= 1e-3 && worst <= 5e-3, format!("K(0,0)={k0:.6} |err|={e0:.2e}; worst relative pair error {worst:.2e} over 25 pairs")))
}

fn crit2() -> Outcome {
    let d = disk();
    let g = rasterize(&d, 128.0).map_err(|e| e.to_string())?;
    let b = build_basis(&g, 40, None).map_err(|e| e.to_string())?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..8 {
        let z = Complex64::from_polar(0.1 * k as f64, 0.7 * k as f64);
        let c = robin_constant(&d, z, 256).map_err(|e| e.to_string())?;
        let r = kernel_diag(&b, z).map_err(|e| e.to_string())? * PI / (c * c);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo >= 0.98 && hi <= 1.02, format!("K pi / c^2 in [{lo:.4}, {hi:.4}] at |z| = 0, 0.1, ..., 0.7")))
}

fn crit3() -> Outcome {
    let cap = |e: &CompactSet, n| log_equilibrium(e, n).map(|r| r.capacity).map_err(|e| e.to_string());
    let circle = CompactSet::ClosedDisk { center: pt(0.0, 0.0), radius: 1.0 };
    let seg = CompactSet::Segment { a: pt(-2.0, 0.0), b: pt(2.0, 0.0) };
    let c1 = cap(&circle, 256)?;
    let c2 = cap(&seg, 512)?;
    let f = |z: Point| z * 0.35 + pt(1.0, -2.0);
    let c3 = cap(&seg.map(&f, 0.35), 512)?;
    let c4 = cap(&circle.map(&f, 0.35), 256)?;
    let lin = rel(c3, 0.35 * c2).max(rel(c4, 0.35 * c1));
    let ok = rel(c1, 1.0) <= 0.01 && rel(c2, 1.0) <= 0.02 && lin <= 0.01;
    Ok((ok, format!("circle {c1:.5}, segment of length 4 {c2:.5}, dilation by 0.35 off by {lin:.1e}")))
}

fn crit4() -> Outcome {
    let e = CompactSet::ClosedDisk { center: pt(0.0, 0.0), radius: 0.3 };
    let g = green_equilibrium(&e, pt(0.0, 0.0), 1.0, 256).map_err(|e| e.to_string())?.capacity;
    let l = log_equilibrium(&e, 256).map_err(|e| e.to_string())?.capacity;
    let bound = l / 0.7;
    Ok((rel(g, 0.3) <= 0.01 && bound > g, format!("Green capacity {g:.5}; log capacity over distance {bound:.5} exceeds it")))
}

fn crit5() -> Outcome {
    let bessel = bessel_j0_first_zero_sq();
    let lam = |d: &Domain, res: f64| -> Result<f64, String> {
        let g = rasterize(d, res).map_err(|e| e.to_string())?;
        dirichlet_lambda1(&g).map(|r| r.value).map_err(|e| e.to_string())
    };
    let d = disk();
    let (l64, l128, l256) = (lam(&d, 64.0)?, lam(&d, 128.0)?, lam(&d, 256.0)?);
    let rich = (4.0 * l128 - l64) / 3.0;
    let sq = lam(&potlab_core::geom::make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap(), 128.0)?;
    let ok = rel(l128, bessel) <= 0.01 && rel(rich, bessel) <= 0.003 && rel(l256, bessel) <= 0.003 && rel(sq, 2.0 * PI * PI) <= 0.005;
    Ok((
        ok,
        format!(
            "disk {l128:.5} at 128, Richardson {rich:.5}, {l256:.5} at 256 vs {bessel:.5}; square {sq:.5} vs {:.5}",
            2.0 * PI * PI
        ),
    ))
}

fn crit6() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in default_corpus().into_iter().filter(|d| d.label == "disk" || d.label == "square") {
        let h = hardy_extrapolate(&d, &[64.0, 96.0, 128.0]).map_err(|e| e.to_string())?;
        ok &= rel(h.value, 0.5) <= 0.05;
        let disc: Vec<String> = h.discrete.iter().map(|v| format!("{v:.4}")).collect();
        parts.push(format!("{} {:.4} extrapolated from {} at 64/96/128", d.label, h.value, disc.join(", ")));
    }
    Ok((ok, parts.join("; ")))
}

fn crit8() -> Outcome {
    let corpus = default_corpus();
    let (a, la) = c0_estimate(&corpus, 96.0, 40).map_err(|e| e.to_string())?;
    let (b, lb) = c0_estimate(&corpus, 128.0, 40).map_err(|e| e.to_string())?;
    Ok((a > 0.0 && b > 0.0 && rel(a, b) <= 0.05, format!("min kappa/lambda1 {a:.5} ({la}) at 96, {b:.5} ({lb}) at 128")))
}

fn crit10(rs: &[ReportRow]) -> Outcome {
    let shape = rows(rs, "lp-dbar-shape", &[]);
    let (ok, _) = all_pass(&shape, 5);
    let spread = shape.iter().map(|r| r.lhs).fold(0.0, f64::max);
    let ps = Config::default().p_ladder;
    let c0 = |d: &Domain, res: f64| -> Result<Vec<f64>, String> {
        let g = rasterize(d, res).map_err(|e| e.to_string())?;
        let b = build_basis(&g, 40, None).map_err(|e| e.to_string())?;
        let v = &bump_data(&g)[0];
        Ok(lp_estimate_check(&g, &b, v, &ps).map_err(|e| e.to_string())?.iter().map(|r| r.implied_c0).collect())
    };
    let d = disk();
    let one = c0(&d, 64.0)?;
    let two = c0(&d.scaled(2.0), 48.0)?;
    let drift = one.iter().zip(&two).map(|(a, b)| rel(*b, *a)).fold(0.0, f64::max);
    Ok((ok && drift <= 0.1, format!("largest spread {spread:.3} over {} domains; dilation by 2 moves implied C0 by {drift:.1e}", shape.len())))
}

fn crit14(rs: &[ReportRow]) -> Outcome {
    let cert: Vec<&ReportRow> = rows(rs, "lambda-capacity-radius", &[]).into_iter().filter(|r| r.params.ends_with(";quotient")).collect();
    let (ok, worst) = all_pass(&cert, 5);
    let slit = default_corpus().into_iter().find(|d| d.label == "slit-disk").unwrap();
    let cfg = Config::default();
    let r = capacity_radius(&slit, cfg.ms.alpha, &RadiusOptions::default()).map_err(|e| e.to_string())?;
    let params = MsParams { eps: cfg.ms.eps, n_outer: cfg.ms.n_outer, samples: 128 };
    let mut q = Vec::new();
    for res in [64.0, 96.0, 128.0] {
        let g = rasterize(&slit, res).map_err(|e| e.to_string())?;
        let t = ms_test_function(&g, r.center, cfg.ms.alpha, cfg.ms.radius_fraction * r.radius, &params).map_err(|e| e.to_string())?;
        let lam = dirichlet_lambda1(&g).map_err(|e| e.to_string())?.value;
        if t.quotient < lam - 1e-6 {
            return Ok((false, format!("quotient {} below lambda1 {lam} at resolution {res}", t.quotient)));
        }
        q.push(t.quotient * r.radius * r.radius);
    }
    let finest = *q.last().unwrap();
    let stable = q.iter().all(|v| v.is_finite() && rel(*v, finest) <= 0.2);
    Ok((
        ok && stable,
        format!(
            "quotient >= lambda1 on {} domains (worst relative margin {worst:.2}); slit disk quotient*R^2 = {:.3}, {:.3}, {:.3} at 64/96/128",
            cert.len(),
            q[0],
            q[1],
            q[2]
        ),
    ))
}

fn suite_crit(rs: &[ReportRow], id: &str, domains: &[&str], min_count: usize) -> Outcome {
    let sel = rows(rs, id, domains);
    let (ok, worst) = all_pass(&sel, min_count);
    Ok((ok, format!("{} rows, worst margin {worst:.4}", sel.len())))
}

fn main() -> ExitCode {
    let mut t = Tally { failed: 0 };
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);

    let s = Instant::now();
    t.report(1, "disk kernel oracle", s, crit1());
    let s = Instant::now();
    t.report(2, "Bergman-Robin equality on the disk", s, crit2());
    let s = Instant::now();
    t.report(3, "logarithmic capacity oracles", s, crit3());
    let s = Instant::now();
    t.report(4, "Green capacity oracle", s, crit4());
    let s = Instant::now();
    t.report(5, "Dirichlet eigenvalue oracles", s, crit5());
    let s = Instant::now();
    t.report(6, "Hardy constant of convex domains", s, crit6());

    let s = Instant::now();
    let cfg = Config::default();
    let corpus = default_corpus();
    let first = run_suite(&corpus, &cfg, jobs);
    let second = run_suite(&corpus, &cfg, jobs);
    let suite_secs = s.elapsed().as_secs_f64() / 2.0;
    let (rs, same) = match (first, second) {
        (Ok(a), Ok(b)) => {
            let same = to_csv(&a.rows) == to_csv(&b.rows) && to_json(&a.rows) == to_json(&b.rows);
            (a.rows, Ok((same, format!("{} rows, CSV and JSON byte-identical: {same}", b.rows.len()))))
        }
        (Err(e), _) | (_, Err(e)) => (Vec::new(), Err(e.to_string())),
    };
    println!("     (suite: {} rows in {suite_secs:.1}s per run)", rs.len());

    let s = Instant::now();
    t.report(7, "kernel minimum against the capacity radius", s, suite_crit(&rs, "kappa-capacity-radius", &[], 15));
    let s = Instant::now();
    t.report(8, "kernel minimum against lambda1", s, crit8());
    let s = Instant::now();
    t.report(9, "weighted dbar estimate", s, suite_crit(&rs, "weighted-dbar", &["disk", "square", "annulus"], 18));
    let s = Instant::now();
    t.report(10, "L^p dbar shape audit", s, crit10(&rs));
    let s = Instant::now();
    t.report(11, "collar decay", s, suite_crit(&rs, "collar-decay", &["disk", "square"], 2));
    let s = Instant::now();
    t.report(12, "excision sweep", s, suite_crit(&rs, "excision", &["disk"], 4));
    let s = Instant::now();
    t.report(13, "comparison functionals under excision", s, suite_crit(&rs, "comparison-monotone", &["slit-disk"], 20));
    let s = Instant::now();
    t.report(14, "test-function certificate", s, crit14(&rs));
    let s = Instant::now();
    t.report(15, "suite determinism", s, same);

    if t.failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", t.failed);
        ExitCode::FAILURE
    }
}
