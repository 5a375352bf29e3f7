use num_complex::Complex64 as C64;
use ringcap::boundary::{ellipse, MeshPolicy};
use ringcap::capacity::*;
use ringcap::specfun::mu;
use ringcap::{Error, SolveOptions};
use std::f64::consts::TAU;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn closed_form_values() {
    let cases = [
        (Family::TwoSegments { c: 2.0, d: 3.0 }, 1.56340192269611),
        (Family::HalfplaneSlit { s: 1.0, r: 2.0 }, 2.55852314234201),
        (Family::TwoSlits, 2.1157789709245134),
        (Family::SquareInSquare { a: 0.5 }, 10.2340925693681),
        (Family::SegmentCircle { r: 1.0, a: 2.1 }, 4.31652297947259),
    ];
    for (f, v) in cases {
        let e = exact_oracle(&f).unwrap();
        assert!(rel(e, v) < 1e-12, "{}: {e} vs {v}", f.name());
    }
    assert!(
        rel(
            exact_oracle(&Family::HalfplaneSlit { s: 1.0, r: 2.0 }).unwrap(),
            TAU / mu(1.0 / 3.0).unwrap()
        ) < 1e-14
    );
}

#[test]
fn families_without_closed_forms() {
    for f in [
        Family::PolygonInPolygon { m: 5, q: 0.5 },
        Family::RectPair { d: 0.1 },
        Family::SegmentPolygon {
            m: 3,
            a: 3.0,
            r: 1.0,
        },
        Family::StripSlit {
            a: [0.0, -0.5],
            b: [0.0, 0.5],
        },
    ] {
        assert!(
            matches!(exact_oracle(&f), Err(Error::NoOracle(_))),
            "{}",
            f.name()
        );
    }
    assert!(exact_oracle(&Family::PolygonInPolygon { m: 4, q: 0.5 }).is_ok());
}

#[test]
fn two_slit_parameter_balances_lengths() {
    let k = two_slits_k().unwrap();
    let (t, b) = two_slits_tb(k).unwrap();
    assert!((t - b).abs() < 1e-12);
    assert!(k > 0.0 && k < 1.0);
}

#[test]
fn two_circle_modulus_solves_the_cross_ratio() {
    for (a, r) in [(2.5, 1.0), (4.0, 1.0), (6.0, 2.0)] {
        let q = two_circles_q(a, r);
        let lhs = (1.0 + q) * (1.0 + q) / q;
        assert!(rel(lhs, (1.0 + a - r) * (a + r - 1.0) / r) < 1e-13);
    }
}

#[test]
fn strip_with_real_slit_has_an_oracle() {
    let f = Family::StripSlit {
        a: [-0.5, 0.0],
        b: [0.5, 0.0],
    };
    let e = exact_oracle(&f).unwrap();
    assert!(rel(e, TAU / mu(0.5f64.tanh()).unwrap()) < 1e-15);
}

#[test]
fn smooth_families_reach_their_closed_forms() {
    for f in [
        Family::TwoCircles { a: 2.5, r: 1.0 },
        Family::ConfocalEllipses { r1: 4.0, r2: 2.0 },
        Family::SegmentCircle { r: 0.5, a: 2.0 },
    ] {
        let r = cap_family(&f, Some(1024)).unwrap().with_oracle();
        assert!(
            r.rel_error.unwrap() < 1e-12,
            "{}: {:?}",
            f.name(),
            r.rel_error
        );
    }
}

#[test]
fn grading_beats_equidistant_meshes_at_corners() {
    let f = Family::SquareInSquare { a: 0.5 };
    let exact = exact_oracle(&f).unwrap();
    let graded = cap_family(&f, Some(1024)).unwrap().value;
    let flat = cap_family_with(
        &f,
        &SolveOptions {
            n: 1024,
            mesh: MeshPolicy::Equidistant,
            ..Default::default()
        },
    )
    .unwrap()
    .value;
    assert!(rel(graded, exact) < 1e-9, "graded {:e}", rel(graded, exact));
    assert!(rel(flat, exact) > 100.0 * rel(graded, exact));
}

#[test]
fn segment_ellipse_endpoints_and_monotonicity() {
    let (cc, d) = (2.0, 4.0);
    let b = 0.5 * (d - cc);
    // r = 0 collapses to two segments, r = b to a segment and a circle.
    let two_seg = exact_oracle(&Family::TwoSegments { c: cc, d }).unwrap();
    assert!(rel(TAU / mu(segment_ellipse_tau(cc, d, 0.0)).unwrap(), two_seg) < 1e-10);
    let circ = exact_oracle(&Family::SegmentCircle {
        r: b,
        a: 0.5 * (cc + d),
    })
    .unwrap();
    let full = cap_family(&Family::SegmentEllipse { c: cc, d, r: b }, Some(1024))
        .unwrap()
        .value;
    assert!(rel(full, circ) < 1e-10, "{full} vs {circ}");
    let mut last = two_seg;
    for k in 1..=10 {
        let r = b * k as f64 / 10.0;
        let v = cap_family(&Family::SegmentEllipse { c: cc, d, r }, Some(1024))
            .unwrap()
            .with_oracle();
        assert!(v.value > last, "r = {r}");
        assert!(v.rel_error.unwrap() < 1e-10, "r = {r}: {:?}", v.rel_error);
        last = v.value;
    }
}

#[test]
fn rectangle_pairs_decrease_toward_the_slit_limit() {
    let limit = two_slits_exact().unwrap();
    let vals: Vec<f64> = [0.3, 0.2, 0.1]
        .iter()
        .map(|&d| {
            cap_family(&Family::RectPair { d }, Some(1024))
                .unwrap()
                .value
        })
        .collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    assert!(vals[2] > limit);
}

#[test]
fn disk_capacities_are_the_radius() {
    let e = CompactSet::disk(0.5).unwrap();
    assert!((caph(&e, 256).unwrap() - 0.5).abs() < 1e-12);
    assert!((cape(&e, 256).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn symmetric_sets_have_equal_capacities() {
    // E = −E forces cape = caph.
    let e = CompactSet::new(ellipse(c(0.0, 0.0), 0.5, 0.2, 0.3).unwrap(), c(0.0, 0.0)).unwrap();
    let (h, el) = (caph(&e, 512).unwrap(), cape(&e, 512).unwrap());
    assert!((h - el).abs() < 1e-10, "{h} vs {el}");
}

#[test]
fn amoeba_capacities() {
    let e = CompactSet::amoeba();
    let h = caph(&e, 1024).unwrap();
    let el = cape(&e, 1024).unwrap();
    assert!((h - 0.521358832558).abs() < 1e-10, "{h}");
    assert!((el - 0.2587242857031).abs() < 1e-10, "{el}");
    assert!(el < h);
}

#[test]
fn interval_capacities() {
    for r in [0.2, 0.5, 0.8] {
        assert!((caph_interval(r, 512).unwrap() - caph_interval_exact(r).unwrap()).abs() < 1e-10);
        assert!((cape_interval(r, 512).unwrap() - cape_interval_exact(r).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn sets_outside_the_disk_are_rejected() {
    let e = CompactSet::disk(1.5).unwrap();
    assert_eq!(e.containment, Containment::General);
    assert!(matches!(caph(&e, 64), Err(Error::Geometry(_))));
    assert!(CompactSet::new(ellipse(c(0.0, 0.0), 0.5, 0.2, 0.0).unwrap(), c(0.9, 0.0)).is_err());
}

#[test]
fn invalid_parameters_are_rejected() {
    for f in [
        Family::TwoCircles { a: 1.5, r: 1.0 },
        Family::SquareInSquare { a: 1.2 },
        Family::RectPair { d: 0.6 },
        Family::PolygonInPolygon { m: 2, q: 0.5 },
    ] {
        assert!(f.domain().is_err(), "{}", f.name());
    }
    assert!(Family::TwoSlits.domain().is_err());
}

#[test]
fn report_json_round_trip() {
    let r = cap_family(&Family::TwoCircles { a: 4.0, r: 1.0 }, Some(128))
        .unwrap()
        .with_oracle();
    let s = serde_json::to_string(&r).unwrap();
    let back: CapacityReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    assert!(s.contains("\"family\":\"two_circles\""));
    assert_eq!(r.family.params(), "a=4.0;r=1.0");
}
