use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ringcap::boundary::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn catalog() -> Vec<(&'static str, BoundaryCurve)> {
    vec![
        ("circle", circle(c(0.3, -0.2), 1.7).unwrap()),
        ("ellipse", ellipse(c(1.0, 1.0), 2.0, 0.5, 0.4).unwrap()),
        ("square", rectangle(-1.0, 1.0, -1.0, 1.0).unwrap()),
        ("triangle", regular_polygon(3, c(0.0, 0.0), 1.0).unwrap()),
        ("amoeba", amoeba()),
        (
            "samples",
            samples(
                &(0..64)
                    .map(|k| {
                        c(2.0, 0.0)
                            + C64::from_polar(
                                1.0 + 0.2 * (3.0 * TAU * k as f64 / 64.0).cos(),
                                TAU * k as f64 / 64.0,
                            )
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn equidistant_mesh_of_eight() {
    let m = mesh_equidistant(8).unwrap();
    for (j, (&t, &w)) in m.t.iter().zip(&m.weights).enumerate() {
        assert!((t - j as f64 * FRAC_PI_4).abs() < 1e-15);
        assert!((w - FRAC_PI_4).abs() < 1e-15);
    }
}

#[test]
fn weights_sum_to_two_pi() {
    let eq = mesh_equidistant(64).unwrap();
    assert!((eq.weights.iter().sum::<f64>() - TAU).abs() < 1e-13);
    // Graded weights are the midpoint rule for the substitution's Jacobian,
    // so their sum reaches 2π at the rate of the grading order.
    let sq = rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
    for (p, tol) in [(1, 1e-13), (3, 1e-8), (5, 1e-12), (6, 1e-12)] {
        let g = mesh_graded(&sq, 1024, p).unwrap();
        assert!((g.weights.iter().sum::<f64>() - TAU).abs() < tol, "p = {p}");
        assert!(g.weights.iter().all(|&w| w > 0.0));
    }
    let err = |n| (mesh_graded(&sq, n, 5).unwrap().weights.iter().sum::<f64>() - TAU).abs();
    assert!(err(256) / err(1024) > 1000.0);
}

#[test]
fn trapezoidal_rule_kills_cosine() {
    let m = mesh_equidistant(32).unwrap();
    let s: f64 = m.t.iter().zip(&m.weights).map(|(t, w)| t.cos() * w).sum();
    assert!(s.abs() < 1e-15);
}

#[test]
fn graded_square_has_symmetric_sides() {
    let sq = rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
    let m = mesh_graded(&sq, 16, DEFAULT_GRADING).unwrap();
    for side in 0..4 {
        let t = &m.t[4 * side..4 * side + 4];
        let a = TAU * side as f64 / 4.0;
        let b = a + FRAC_PI_2;
        assert!(t.iter().all(|&x| x > a && x < b), "side {side}: {t:?}");
        for i in 0..2 {
            assert!(((t[i] - a) - (b - t[3 - i])).abs() < 1e-14);
        }
    }
}

#[test]
fn graded_density_vanishes_at_corners() {
    let sq = rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
    for p in [2u32, 3, 5] {
        let coarse = mesh_graded(&sq, 64, p).unwrap();
        let fine = mesh_graded(&sq, 128, p).unwrap();
        // First node after the corner at t = 0: offset shrinks like u^p.
        let ratio = coarse.t[0] / fine.t[0];
        assert!(
            (ratio - 2f64.powi(p as i32)).abs() < 0.1 * 2f64.powi(p as i32),
            "p = {p}: {ratio}"
        );
        assert!(coarse.dt[0] < coarse.dt[8]);
    }
}

#[test]
fn mesh_rejects_bad_sizes() {
    assert!(mesh_equidistant(7).is_err());
    assert!(mesh_equidistant(4).is_err());
    let tri = regular_polygon(3, c(0.0, 0.0), 1.0).unwrap();
    assert!(mesh_graded(&tri, 64, 3).is_err());
    assert!(mesh_graded(&tri, 66, 3).is_ok());
    assert!(mesh_graded(&circle(c(0.0, 0.0), 1.0).unwrap(), 64, 3).is_err());
}

#[test]
fn catalog_points() {
    let ci = circle(c(0.0, 0.0), 1.0).unwrap();
    assert!((ci.eval(FRAC_PI_2) - c(0.0, 1.0)).norm() < 1e-15);
    let am = amoeba();
    let expect = c(0.1, 0.6) + 0.2 * std::f64::consts::E;
    assert!((am.eval(0.0) - expect).norm() < 1e-15);
    let sq = regular_polygon(4, c(0.0, 0.0), 0.5).unwrap();
    let vertices: Vec<C64> = (0..4).map(|k| sq.eval(FRAC_PI_2 * k as f64)).collect();
    for (v, e) in vertices
        .iter()
        .zip([c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)])
    {
        assert!((v - e).norm() < 1e-15, "{v} vs {e}");
    }
    assert_eq!(sq.corners().len(), 4);
}

#[test]
fn catalog_curves_are_periodic() {
    for (name, cu) in catalog() {
        for k in 0..50 {
            let t = 0.1257 * k as f64;
            let d = (cu.eval(t + TAU) - cu.eval(t)).norm();
            assert!(
                d < 1e-15 * (1.0 + cu.eval(t).norm()) * 4.0,
                "{name}: {d:e} at t={t}"
            );
        }
    }
}

#[test]
fn derivatives_match_central_differences() {
    for (name, cu) in catalog() {
        let corners = cu.corners().to_vec();
        for k in 0..40 {
            let t = 0.0731 + 0.157 * k as f64;
            if corners
                .iter()
                .any(|&s| ((t - s + PI).rem_euclid(TAU) - PI).abs() < 0.01)
            {
                continue;
            }
            let mut errs = vec![];
            for h in [1e-3, 5e-4] {
                let fd1 = (cu.eval(t + h) - cu.eval(t - h)) / (2.0 * h);
                let fd2 = (cu.eval(t + h) - 2.0 * cu.eval(t) + cu.eval(t - h)) / (h * h);
                errs.push(((fd1 - cu.deriv(t)).norm(), (fd2 - cu.deriv2(t)).norm()));
            }
            // Second-order convergence: halving h divides the error by about 4,
            // unless the error already sits at the rounding floor of the stencil.
            for (e, f) in [(errs[0].0, errs[1].0), (errs[0].1, errs[1].1)] {
                assert!(f < 1e-7 || e / f > 3.0, "{name} at t={t}: {e:e} -> {f:e}");
            }
        }
    }
}

#[test]
fn ring_domains_orient_their_boundaries() {
    let d = RingDomain::bounded(
        circle(c(0.0, 0.0), 1.0).unwrap().reversed(),
        circle(c(0.0, 0.0), 0.5).unwrap(),
        c(0.75, 0.0),
        c(0.0, 0.0),
    )
    .unwrap();
    assert_eq!(d.gamma1().winding_number(d.alpha(), 1024), 1);
    assert_eq!(d.gamma2().winding_number(d.z2(), 1024), -1);
    assert_eq!(d.gamma1().orientation(), Orientation::Outer);
    assert_eq!(d.gamma2().orientation(), Orientation::Inner);
    assert!(d.contains(c(0.0, 0.7)));
    assert!(!d.contains(c(0.0, 0.3)));
    assert!(!d.contains(c(2.0, 0.0)));

    let u = RingDomain::unbounded(
        circle(c(0.0, 0.0), 1.0).unwrap(),
        circle(c(4.0, 0.0), 1.0).unwrap(),
        c(0.0, 0.0),
        c(4.0, 0.0),
    )
    .unwrap();
    assert_eq!(u.gamma1().winding_number(u.z1(), 1024), -1);
    assert!(u.contains(c(10.0, 10.0)));
}

#[test]
fn ring_domain_rejects_bad_points() {
    let g1 = circle(c(0.0, 0.0), 1.0).unwrap();
    let g2 = circle(c(0.0, 0.0), 0.5).unwrap();
    assert!(RingDomain::bounded(g1.clone(), g2.clone(), c(0.2, 0.0), c(0.0, 0.0)).is_err());
    assert!(RingDomain::bounded(g1.clone(), g2.clone(), c(0.75, 0.0), c(0.7, 0.0)).is_err());
    assert!(RingDomain::unbounded(g1, g2, c(0.0, 0.0), c(0.1, 0.0)).is_err());
}

#[test]
fn domain_spec_from_json() {
    let json = r#"{
        "kind": "bounded",
        "gamma1": {"type": "circle", "center": [0, 0], "radius": 1},
        "gamma2": {"type": "rectangle", "x0": -0.3, "x1": 0.3, "y0": -0.3, "y1": 0.3},
        "alpha": [0.65, 0],
        "z2": [0, 0]
    }"#;
    let spec: DomainSpec = serde_json::from_str(json).unwrap();
    let d = spec.build().unwrap();
    assert_eq!(d.kind(), DomainKind::Bounded);
    assert_eq!(d.gamma2().corners().len(), 4);
    let back: DomainSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
}

#[test]
fn antipodal_circle() {
    let e = circle(c(0.0, 0.0), 0.5).unwrap().antipodal().unwrap();
    for k in 0..16 {
        let t = 0.4 * k as f64;
        assert!((e.eval(t).norm() - 2.0).abs() < 1e-14);
    }
}

proptest! {
    #[test]
    fn similarity_moves_points(t in 0.0f64..TAU, s in 0.1f64..5.0, phi in 0.0f64..TAU, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let cu = ellipse(c(0.5, 0.0), 1.5, 0.7, 0.2).unwrap();
        let scale = C64::from_polar(s, phi);
        let moved = cu.similarity(scale, c(x, y));
        prop_assert!((moved.eval(t) - (scale * cu.eval(t) + c(x, y))).norm() < 1e-13 * (1.0 + s));
        prop_assert!((moved.deriv(t) - scale * cu.deriv(t)).norm() < 1e-13 * (1.0 + s));
    }

    #[test]
    fn reversal_runs_backwards(t in 0.0f64..TAU) {
        let cu = amoeba();
        let r = cu.reversed();
        prop_assert!((r.eval(t) - cu.eval(-t)).norm() < 1e-13);
        prop_assert!((r.deriv(t) + cu.deriv(-t)).norm() < 1e-13);
        prop_assert_ne!(r.orientation(), cu.orientation());
    }

    #[test]
    fn grading_is_monotone(u in 0.0f64..1.0, du in 1e-6f64..1e-2, p in 1u32..8) {
        let (a, _, _) = grading(u, p);
        let (b, d1, _) = grading((u + du).min(1.0), p);
        prop_assert!(b >= a);
        prop_assert!(d1 >= 0.0);
    }
}
