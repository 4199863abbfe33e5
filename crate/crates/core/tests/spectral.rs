use potlab_core::geom::{make_disk, make_rect, subtract_compact, CompactSet, Domain};
use potlab_core::grid::{rasterize, ScalarField};
use potlab_core::spectral::{dirichlet_lambda1, hardy_constant, hardy_forms, rayleigh_with, Laplacian};
use potlab_core::pt;
use proptest::prelude::*;

fn slit() -> Domain {
    subtract_compact(make_disk(pt(0.0, 0.0), 1.0).unwrap(), CompactSet::Segment { a: pt(0.0, 0.0), b: pt(0.75, 0.0) }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_fields_respect_poincare_and_hardy(c in prop::collection::vec(-1.0f64..1.0, 6)) {
        let g = rasterize(&slit(), 24.0).unwrap();
        let lam = dirichlet_lambda1(&g).unwrap().value;
        let h = hardy_constant(&g).unwrap().value;
        let f = ScalarField::from_fn(&g, |z| {
            let basis = [1.0, z.re, z.im, z.re * z.im, z.re * z.re, (3.0 * z.im).sin()];
            basis.iter().zip(&c).map(|(b, a)| a * b).sum::<f64>() + 1.5
        });
        let a = Laplacian::new(&g);
        let q = rayleigh_with(&a, &f).unwrap();
        prop_assert!(q >= lam * (1.0 - 1e-9));
        let (energy, weighted) = hardy_forms(&a, &g, &f.values);
        prop_assert!((0.95 * h).powi(2) * weighted <= energy);
    }
}

#[test]
fn eigenvalue_scales_inverse_square() {
    let d = make_rect(pt(0.0, 0.0), pt(2.0, 1.0)).unwrap();
    let a = dirichlet_lambda1(&rasterize(&d, 64.0).unwrap()).unwrap().value;
    let b = dirichlet_lambda1(&rasterize(&d.scaled(0.5), 64.0).unwrap()).unwrap().value;
    assert!((b / (4.0 * a) - 1.0).abs() < 0.01, "{a} {b}");
    let exact = std::f64::consts::PI.powi(2) * 1.25;
    assert!((a / exact - 1.0).abs() < 5e-3);
}

#[test]
fn cone_quotient_on_the_disk() {
    // f = (1−|z|)₊: ∫|∇f|² = π, ∫f² = π/6
    let g = rasterize(&make_disk(pt(0.0, 0.0), 1.0).unwrap(), 96.0).unwrap();
    let f = ScalarField::from_fn(&g, |z| (1.0 - z.norm()).max(0.0));
    let q = rayleigh_with(&Laplacian::new(&g), &f).unwrap();
    assert!((q / 6.0 - 1.0).abs() < 0.02, "{q}");
    assert!(q >= dirichlet_lambda1(&g).unwrap().value);
}
