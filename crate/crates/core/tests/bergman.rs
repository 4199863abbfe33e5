use std::f64::consts::PI;

use potlab_core::bergman::{beta_norm_probe, build_basis, comparison_functionals, kernel, kernel_diag, kernel_min, p_kernel, raw_gram, BasisOptions};
use potlab_core::geom::{make_annulus, make_disk, make_rect, subtract_compact, CompactSet};
use potlab_core::grid::rasterize;
use potlab_core::{pt, Complex64};
use proptest::prelude::*;

/// Diagonal kernel of `r < |z| < 1` from its Laurent orthogonal basis.
fn annulus_kernel(r: f64, t: f64) -> f64 {
    let mut s = t.powi(-2) / (2.0 * PI * (1.0 / r).ln());
    for n in -200i32..=200 {
        if n != -1 {
            let norm = PI * (1.0 - r.powi(2 * n + 2)) / (n + 1) as f64;
            s += t.powi(2 * n) / norm;
        }
    }
    s
}

#[test]
fn monomial_moments_on_the_disk() {
    let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 128.0).unwrap();
    let powers = [0, 1, 2, 3, 5];
    let m = powers.len();
    let gm = raw_gram(&g, pt(0.0, 0.0), &powers);
    for (i, &k) in powers.iter().enumerate() {
        let exact = PI / (k + 1) as f64;
        assert!((gm[i * m + i].re / exact - 1.0).abs() < 5e-3, "k={k}: {}", gm[i * m + i]);
        for j in 0..m {
            if j != i {
                assert!(gm[i * m + j].norm() < 1e-3);
            }
        }
    }
}

#[test]
fn annulus_minimum_matches_laurent_series() {
    let r = 0.5;
    let g = rasterize(&make_annulus(pt(0.0, 0.0), r, 1.0).unwrap(), 96.0).unwrap();
    let b = build_basis(&g, 40, None).unwrap();
    let (kappa, at) = kernel_min(&b, &g);
    let exact = (0..=2000).map(|k| annulus_kernel(r, r + (1.0 - r) * (0.05 + 0.9 * k as f64 / 2000.0))).fold(f64::INFINITY, f64::min);
    assert!((kappa / exact - 1.0).abs() < 0.01, "{kappa} vs {exact}");
    let t = at.norm();
    assert!((kernel_diag(&b, at).unwrap() / annulus_kernel(r, t) - 1.0).abs() < 0.01);
}

#[test]
fn reproducing_property_on_the_slit_disk() {
    let d = subtract_compact(make_disk(pt(0.0, 0.0), 1.0).unwrap(), CompactSet::Segment { a: pt(0.0, 0.0), b: pt(0.75, 0.0) }).unwrap();
    let g = rasterize(&d, 64.0).unwrap();
    let b = build_basis(&g, 24, None).unwrap();
    let q = &b.quadrature;
    for w in [pt(-0.5, 0.1), pt(0.4, 0.3), pt(0.1, -0.6), pt(-0.2, -0.2), pt(0.6, -0.1)] {
        let kw = kernel_diag(&b, w).unwrap();
        let norm2: f64 = (0..q.len()).map(|k| kernel(&b, q.nodes[k], w).unwrap().norm_sqr() * q.weights[k]).sum();
        assert!((norm2 / kw - 1.0).abs() < 0.01, "{w}: {norm2} vs {kw}");
    }
}

#[test]
fn degree_doubling_changes_interior_values_little() {
    let d = make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap();
    let g = rasterize(&d, 96.0).unwrap();
    let lo = build_basis(&g, 20, None).unwrap();
    let hi = build_basis(&g, 40, None).unwrap();
    for z in [pt(0.5, 0.5), pt(0.2, 0.3), pt(0.75, 0.6), pt(0.35, 0.8)] {
        let (a, c) = (kernel_diag(&lo, z).unwrap(), kernel_diag(&hi, z).unwrap());
        assert!((a / c - 1.0).abs() < 5e-3, "{z}: {a} {c}");
    }
}

#[test]
fn smaller_domain_has_larger_kernel() {
    let big = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 96.0).unwrap();
    let small = rasterize(&make_rect(pt(-0.6, -0.6), pt(0.6, 0.6)).unwrap(), 96.0).unwrap();
    let kb = build_basis(&big, 30, None).unwrap();
    let ks = build_basis(&small, 30, None).unwrap();
    for z in [pt(0.0, 0.0), pt(0.3, 0.1), pt(-0.4, 0.4), pt(0.5, -0.5)] {
        assert!(kernel_diag(&ks, z).unwrap() >= 0.98 * kernel_diag(&kb, z).unwrap());
    }
}

#[test]
fn p_kernel_at_the_disk_centre_is_one_over_area() {
    // |f(0)|^p ≤ (1/π)∫|f|^p by subharmonicity, with equality for constants
    let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 48.0).unwrap();
    let b = build_basis(&g, 12, None).unwrap();
    let area = b.quadrature.total();
    for p in [1.2, 1.5, 1.9] {
        let k = p_kernel(&b, pt(0.0, 0.0), p).unwrap();
        assert!(k.converged);
        assert!((k.value * area - 1.0).abs() < 1e-4, "{p}: {}", k.value * area);
    }
}

#[test]
fn excising_a_slit_raises_comparison_functionals() {
    let disk = make_disk(pt(0.0, 0.0), 1.0).unwrap();
    let slit = subtract_compact(disk.clone(), CompactSet::Segment { a: pt(0.0, 0.0), b: pt(0.75, 0.0) }).unwrap();
    let b0 = build_basis(&rasterize(&disk, 64.0).unwrap(), 24, None).unwrap();
    let b1 = build_basis(&rasterize(&slit, 64.0).unwrap(), 24, None).unwrap();
    for (z, w) in [(pt(0.3, 0.2), pt(0.3, -0.2)), (pt(-0.5, 0.1), pt(0.6, 0.4)), (pt(0.1, -0.7), pt(-0.2, 0.5))] {
        let a = comparison_functionals(&b0, z, w).unwrap();
        let c = comparison_functionals(&b1, z, w).unwrap();
        for i in 0..4 {
            assert!(c[i] >= 0.98 * a[i], "{i}: {} < {}", c[i], a[i]);
        }
    }
}

#[test]
fn beta_probe_is_flat_for_a_bounded_kernel() {
    // K_D(·,0) = 1/π, so every L^β norm is resolution independent
    let d = make_disk(pt(0.0, 0.0), 1.0).unwrap();
    let p = beta_norm_probe(&d, &BasisOptions::new(12), pt(0.0, 0.0), 4.0, &[24.0, 32.0, 48.0]).unwrap();
    assert!(p.growth.abs() < 0.01, "{}", p.growth);
    let exact = std::f64::consts::PI.powi(-3);
    assert!((p.values[2] / exact - 1.0).abs() < 0.01, "{:?}", p.values);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_is_hermitian(x in -0.6f64..0.6, y in -0.6f64..0.6, u in -0.6f64..0.6, v in -0.6f64..0.6) {
        let g = rasterize(&make_annulus(pt(0.0, 0.0), 0.2, 1.0).unwrap(), 24.0).unwrap();
        let b = build_basis(&g, 8, None).unwrap();
        let (z, w) = (pt(x, y), pt(u, v));
        prop_assume!(z.norm() > 0.25 && w.norm() > 0.25);
        let a: Complex64 = kernel(&b, z, w).unwrap();
        let c: Complex64 = kernel(&b, w, z).unwrap();
        prop_assert!((a - c.conj()).norm() <= 1e-10 * a.norm().max(1.0));
        prop_assert!(a.norm_sqr() <= kernel_diag(&b, z).unwrap() * kernel_diag(&b, w).unwrap() * (1.0 + 1e-10));
    }
}
