use proptest::prelude::*;
use ringcap::specfun::*;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

// Hypergeometric series for K and E, summed until the terms stop mattering.
fn k_series(r: f64) -> f64 {
    let x = r * r;
    let (mut term, mut sum) = (1.0, 1.0);
    for n in 1..200_000 {
        let f = (n as f64 - 0.5) / n as f64;
        term *= f * f * x;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    FRAC_PI_2 * sum
}

fn e_series(r: f64) -> f64 {
    let x = r * r;
    let (mut coef, mut sum) = (1.0, 1.0);
    for n in 1..200_000 {
        let f = (n as f64 - 0.5) / n as f64;
        coef *= f * f * x;
        let term = coef / (1.0 - 2.0 * n as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    FRAC_PI_2 * sum
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn complete_k_matches_series() {
    for r in [1e-8, 0.1, 0.5, FRAC_1_SQRT_2, 0.9] {
        let k = complete_k(r).unwrap();
        assert!(
            rel(k, k_series(r)) < 2e-15,
            "K({r}) = {k}, series {}",
            k_series(r)
        );
    }
}

#[test]
fn complete_e_matches_series() {
    for r in [1e-8, 0.1, 0.5, FRAC_1_SQRT_2, 0.9] {
        let e = complete_e(r).unwrap();
        assert!(
            rel(e, e_series(r)) < 2e-15,
            "E({r}) = {e}, series {}",
            e_series(r)
        );
    }
}

#[test]
fn e_tends_to_one_at_the_right_endpoint() {
    let e = complete_e(1.0 - 1e-15).unwrap();
    assert!((e - 1.0).abs() < 1e-12);
}

#[test]
fn mu_at_point_three_matches_series_ratio() {
    let expect = FRAC_PI_2 * k_series(0.91f64.sqrt()) / k_series(0.3);
    assert!(rel(mu(0.3).unwrap(), expect) < 1e-14);
}

#[test]
fn mu_symmetric_point() {
    assert!((mu(FRAC_1_SQRT_2).unwrap() - FRAC_PI_2).abs() <= 1e-15);
    assert!((mu_inv(FRAC_PI_2).unwrap() - FRAC_1_SQRT_2).abs() <= 1e-15);
}

#[test]
fn mu_product_with_complement() {
    for r in [1e-6, 0.01, 0.3, 0.6, 0.99] {
        let a = EllipticArg::new(r).unwrap();
        let p = mu_arg(a) * mu_arg(a.swap());
        assert!(rel(p, PI * PI / 4.0) < 1e-14, "r = {r}: {p}");
    }
}

#[test]
fn mu_doubling_identities_on_grid() {
    // 200 log-spaced points in [1e-6, 1 - 1e-6], mirrored so both ends are dense.
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let s = 1e-6 * (0.5f64 / 1e-6).powf(i as f64 / 199.0);
        for a in [
            EllipticArg::new(s).unwrap(),
            EllipticArg::from_complement(s).unwrap(),
        ] {
            let (r, rp) = (a.r(), a.rprime());
            let m = mu_arg(a);
            // (1 − r)/(1 + r) written as r'²/(1 + r)² to avoid cancellation near r = 1.
            let up = EllipticArg::from_pair(
                2.0 * r.sqrt() / (1.0 + r),
                rp * rp / ((1.0 + r) * (1.0 + r)),
            )
            .unwrap();
            worst = worst.max(rel(2.0 * mu_arg(up), m));
            let down =
                EllipticArg::from_pair(r * r / (1.0 + rp).powi(2), 2.0 * rp.sqrt() / (1.0 + rp))
                    .unwrap();
            worst = worst.max(rel(0.5 * mu_arg(down), m));
        }
    }
    assert!(worst < 1e-13, "worst relative deviation {worst:e}");
}

#[test]
fn mu_inverse_round_trip_grid() {
    for i in 0..=96 {
        let r = 0.02 + 0.01 * i as f64;
        let back = mu_inv(mu(r).unwrap()).unwrap();
        assert!(
            (back - r).abs() < 1e-13 * r.max(1e-300) + 1e-16,
            "r = {r}: {back}"
        );
    }
}

#[test]
fn mu_inverse_at_point_three() {
    assert!((mu_inv(mu(0.3).unwrap()).unwrap() - 0.3).abs() < 1e-13);
}

#[test]
fn square_parameters_are_complementary() {
    let c = (1.0 - 0.5) / (1.0 + 0.5);
    let u = mu_inv(PI * c / 2.0).unwrap();
    let v = mu_inv(PI / (2.0 * c)).unwrap();
    assert!((u * u + v * v - 1.0).abs() < 1e-12);
}

#[test]
fn incomplete_integrals_at_the_ends() {
    for k in [0.1, 0.5, 0.9] {
        assert_eq!(incomplete_f(0.0, k).unwrap(), 0.0);
        assert!(rel(incomplete_f(1.0, k).unwrap(), complete_k(k).unwrap()) < 1e-14);
        assert!(rel(incomplete_e(1.0, k).unwrap(), complete_e(k).unwrap()) < 1e-14);
    }
}

#[test]
fn incomplete_f_against_direct_quadrature() {
    // ∫₀^φ dθ/√(1 − k² sin²θ) by composite Simpson with many panels.
    let (z, k): (f64, f64) = (0.7, 0.6);
    let phi = z.asin();
    let m = 20_000;
    let h = phi / m as f64;
    let f = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
    let mut s = f(0.0) + f(phi);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    let expect = s * h / 3.0;
    assert!(rel(incomplete_f(z, k).unwrap(), expect) < 1e-13);
}

#[test]
fn domain_errors() {
    assert!(complete_k(1.0).is_err());
    assert!(complete_k(-0.1).is_err());
    assert!(mu(0.0).is_err());
    assert!(mu_inv(0.0).is_err());
    assert!(mu_inv(f64::NAN).is_err());
    assert!(incomplete_f(1.5, 0.5).is_err());
}

proptest! {
    #[test]
    fn k_and_e_are_monotone(a in 0.001f64..0.998, d in 1e-4f64..1e-3) {
        let b = a + d;
        prop_assert!(complete_k(b).unwrap() > complete_k(a).unwrap());
        prop_assert!(complete_e(b).unwrap() < complete_e(a).unwrap());
    }

    #[test]
    fn mu_is_decreasing(a in 0.001f64..0.998, d in 1e-4f64..1e-3) {
        prop_assert!(mu(a + d).unwrap() < mu(a).unwrap());
    }

    #[test]
    fn incomplete_f_increasing_in_z(z in 0.0f64..0.99, d in 1e-4f64..1e-2, k in 0.0f64..0.99) {
        prop_assert!(incomplete_f(z + d, k).unwrap() > incomplete_f(z, k).unwrap());
    }

    #[test]
    fn mu_inverse_round_trip(r in 0.02f64..0.98) {
        let back = mu_inv(mu(r).unwrap()).unwrap();
        prop_assert!((back - r).abs() < 1e-13);
    }

    #[test]
    fn elliptic_arg_pairs_are_consistent(r in 1e-12f64..1.0) {
        let a = EllipticArg::new(r.min(1.0 - 1e-16)).unwrap();
        prop_assert!((a.r() * a.r() + a.rprime() * a.rprime() - 1.0).abs() <= 4.0 * f64::EPSILON);
    }
}
