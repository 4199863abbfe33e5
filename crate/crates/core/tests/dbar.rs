use potlab_core::bergman::{bergman_projection, build_basis};
use potlab_core::dbar::{bump, canonical_solution, cauchy_transform, weighted_constant};
use potlab_core::geom::{make_disk, make_rect};
use potlab_core::grid::{dbar_derivative, rasterize, ComplexField};
use potlab_core::{pt, Complex64};

#[test]
fn cauchy_residual_falls_with_refinement() {
    let d = make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap();
    let mut last = f64::INFINITY;
    for res in [32.0, 64.0, 128.0] {
        let g = rasterize(&d, res).unwrap();
        let v = ComplexField::from_fn(&g, |z| Complex64::new(bump(z, pt(0.5, 0.5), 0.4), bump(z, pt(0.4, 0.6), 0.3)));
        let u = cauchy_transform(&g, &v).unwrap();
        let du = dbar_derivative(&u);
        let err = g.integrate_fn(|k| if g.delta[k] >= 2.0 * g.h { (du.values[k] - v.values[k]).norm_sqr() } else { 0.0 }).sqrt();
        assert!(err <= 0.625 * last, "{res}: {err} vs {last}");
        last = err;
    }
}

#[test]
fn canonical_solution_is_orthogonal_to_the_bergman_space() {
    let g = rasterize(&make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap(), 48.0).unwrap();
    let b = build_basis(&g, 16, None).unwrap();
    let v = ComplexField::from_fn(&g, |z| Complex64::new(bump(z, pt(0.5, 0.5), 0.4), 0.0));
    let s = canonical_solution(&g, &b, &v).unwrap();
    let c = bergman_projection(&g, &b, &s.u0).unwrap();
    assert!(c.iter().all(|x| x.norm() < 1e-6), "{:?}", c.iter().map(|x| x.norm()).fold(0.0, f64::max));
    assert!(s.orthogonality < 1e-6);
}

#[test]
fn constant_data_on_the_disk_gives_conjugate() {
    // z̄ is orthogonal to every holomorphic monomial on the disk
    let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 64.0).unwrap();
    let b = build_basis(&g, 20, None).unwrap();
    let v = ComplexField::from_fn(&g, |_| Complex64::new(1.0, 0.0));
    let s = canonical_solution(&g, &b, &v).unwrap();
    let err = g.integrate_fn(|k| (s.u0.values[k] - g.centers[k].conj()).norm_sqr()).sqrt();
    assert!(err < 5.0 / 64.0, "{err}");
}

#[test]
fn weighted_constant_domain() {
    let h = 0.5;
    assert!(weighted_constant(h, 2.0 * h / 3.0).is_err());
    assert!(weighted_constant(h, 0.0).is_err());
    let c = weighted_constant(h, 0.2).unwrap();
    assert!((c - 16.0 * 0.25 / (1.0f64 - 0.6).powi(2)).abs() < 1e-12);
}
