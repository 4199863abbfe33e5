use std::f64::consts::PI;

use potlab_core::geom::{make_annulus, make_disk};
use potlab_core::grid::{dbar_derivative, rasterize, ComplexField, ScalarField};
use potlab_core::{pt, Complex64};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integration_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 1u32..4) {
        let g = rasterize(&make_annulus(pt(0.0, 0.0), 0.3, 1.0).unwrap(), 24.0).unwrap();
        let f = ScalarField::from_fn(&g, |z| z.re.powi(k as i32));
        let h = ScalarField::from_fn(&g, |z| (z.im * 3.0).cos());
        let lhs = g.integrate_fn(|i| a * f.values[i] + b * h.values[i]);
        let rhs = a * g.integrate_fn(|i| f.values[i]) + b * g.integrate_fn(|i| h.values[i]);
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }
}

#[test]
fn disk_area_is_accurate() {
    // partial cells are weighted by subcell sampling, so the error has a floor near 1e-4
    for res in [32.0, 64.0, 128.0] {
        let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), res).unwrap();
        assert!((g.total_weight() - PI).abs() < 5e-4, "{res}: {}", g.total_weight());
    }
}

#[test]
fn dbar_of_conjugate_square() {
    // ∂̄(z̄²) = 2z̄ away from the boundary
    let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 64.0).unwrap();
    let f = ComplexField::from_fn(&g, |z| z.conj() * z.conj());
    let d = dbar_derivative(&f);
    let (mut err, mut norm) = (0.0, 0.0);
    for k in 0..g.len() {
        if g.delta[k] >= 3.0 * g.h {
            let exact: Complex64 = 2.0 * g.centers[k].conj();
            err += (d.values[k] - exact).norm_sqr() * g.weights[k];
            norm += exact.norm_sqr() * g.weights[k];
        }
    }
    assert!((err / norm).sqrt() < 0.01, "{}", (err / norm).sqrt());
}
