use potlab_core::geom::{make_disk, make_polygon, make_rect, subtract_compact, CompactSet, Domain};
use potlab_core::pt;
use proptest::prelude::*;

fn slit() -> Domain {
    subtract_compact(make_disk(pt(0.0, 0.0), 1.0).unwrap(), CompactSet::Segment { a: pt(0.0, 0.0), b: pt(0.75, 0.0) }).unwrap()
}

fn corpus() -> Vec<Domain> {
    vec![make_disk(pt(0.0, 0.0), 1.0).unwrap(), make_rect(pt(0.0, 0.0), pt(2.0, 1.0)).unwrap(), slit()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boundary_distance_is_one_lipschitz(x in -1.2f64..2.2, y in -1.2f64..1.2, u in -1.2f64..2.2, v in -1.2f64..1.2) {
        for d in corpus() {
            let (a, b) = (pt(x, y), pt(u, v));
            if d.contains(a) && d.contains(b) {
                let gap = (d.boundary_distance(a) - d.boundary_distance(b)).abs();
                prop_assert!(gap <= (a - b).norm() + 1e-12);
            }
        }
    }

    #[test]
    fn excision_never_increases_distance(x in -0.9f64..0.9, y in -0.9f64..0.9, ax in -0.5f64..0.5, ay in -0.5f64..0.5, len in 0.01f64..0.4) {
        let disk = make_disk(pt(0.0, 0.0), 1.0).unwrap();
        let e = CompactSet::Segment { a: pt(ax, ay), b: pt(ax + len, ay) };
        let cut = subtract_compact(disk.clone(), e).unwrap();
        let z = pt(x, y);
        if cut.contains(z) {
            prop_assert!(cut.boundary_distance(z) <= disk.boundary_distance(z) + 1e-12);
        }
    }

    #[test]
    fn translation_moves_distance_along(x in -0.9f64..0.9, y in -0.9f64..0.9, vx in -3.0f64..3.0, vy in -3.0f64..3.0) {
        let d = slit();
        let v = pt(vx, vy);
        let t = d.translated(v);
        let z = pt(x, y);
        prop_assert_eq!(d.contains(z), t.contains(z + v));
        if d.contains(z) {
            prop_assert!((d.boundary_distance(z) - t.boundary_distance(z + v)).abs() < 1e-12);
        }
    }
}

#[test]
fn inradius_of_l_shape_and_square() {
    let l = make_polygon(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(1.0, 1.0), pt(1.0, 2.0), pt(0.0, 2.0)]).unwrap();
    let (r, _) = l.inradius_search();
    assert!((r - (2.0 - 2f64.sqrt())).abs() < 1e-6, "{r}");
    let (r, c) = make_rect(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap().inradius_search();
    assert!((r - 0.5).abs() < 1e-9 && (c - pt(0.5, 0.5)).norm() < 1e-6);
}

#[test]
fn scaling_scales_distance_and_area() {
    let d = slit();
    let s = d.scaled(3.0);
    assert!((s.area() - 9.0 * d.area()).abs() < 1e-9);
    let z = pt(-0.3, 0.2);
    assert!((s.boundary_distance(z * 3.0) - 3.0 * d.boundary_distance(z)).abs() < 1e-12);
}
