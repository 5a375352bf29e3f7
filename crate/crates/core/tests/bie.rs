use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringcap::bie::{gmres, KernelContext, MScheme};
use ringcap::boundary::*;
use ringcap::{annq, Exec, SolveOptions};
use std::f64::consts::{FRAC_1_PI, TAU};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ellipse_ring() -> RingDomain {
    RingDomain::bounded(
        ellipse(c(0.0, 0.0), 2.0, 1.2, 0.0).unwrap(),
        ellipse(c(0.3, 0.1), 0.6, 0.4, 0.5).unwrap(),
        c(-1.2, 0.0),
        c(0.3, 0.1),
    )
    .unwrap()
}

fn two_circles() -> RingDomain {
    RingDomain::unbounded(
        circle(c(0.0, 0.0), 1.0).unwrap(),
        circle(c(4.0, 0.0), 1.0).unwrap(),
        c(0.0, 0.0),
        c(4.0, 0.0),
    )
    .unwrap()
}

fn square_ring() -> RingDomain {
    RingDomain::bounded(
        rectangle(-2.0, 2.0, -2.0, 2.0).unwrap(),
        rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(),
        c(1.5, 0.0),
        c(0.0, 0.0),
    )
    .unwrap()
}

fn context(d: &RingDomain, n: usize, p: u32) -> KernelContext {
    let mesh = Mesh::new(d, n, MeshPolicy::Auto { p }).unwrap();
    KernelContext::annulus(d, mesh, Exec::Sequential).unwrap()
}

fn random_vec(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

// The continuous kernels with A = η − α (bounded) or A = 1 (unbounded), θ = π/2.
struct Oracle<'a> {
    d: &'a RingDomain,
}

impl Oracle<'_> {
    fn a(&self, z: C64) -> C64 {
        match self.d.kind() {
            DomainKind::Bounded => z - self.d.alpha(),
            DomainKind::Unbounded => c(1.0, 0.0),
        }
    }

    fn kernel(&self, ks: usize, s: f64, kt: usize, t: f64) -> C64 {
        let zs = self.d.gamma(ks).eval(s);
        let [zt, dzt, _] = self.d.gamma(kt).jet(t);
        FRAC_1_PI * self.a(zs) / self.a(zt) * dzt / (zt - zs)
    }
}

#[test]
fn zero_density_gives_zero() {
    let ctx = context(&ellipse_ring(), 32, 3);
    let z = vec![0.0; 64];
    assert!(ctx.apply_n(&z).iter().all(|&v| v == 0.0));
    assert!(ctx.apply_m(&z).unwrap().iter().all(|&v| v == 0.0));
}

#[test]
fn matrix_free_matches_dense_assembly() {
    for (name, d, p) in [
        ("ellipses", ellipse_ring(), 3),
        ("circles", two_circles(), 3),
        ("squares", square_ring(), 5),
    ] {
        for n in [64, 128] {
            let ctx = context(&d, n, p);
            let dense = ctx.assemble_n();
            let rho = random_vec(2 * n, 7);
            let fast = ctx.apply_n(&rho);
            for i in 0..2 * n {
                let slow: f64 = dense[i].iter().zip(&rho).map(|(a, b)| a * b).sum();
                assert!(
                    (slow - fast[i]).abs() <= 1e-15 * (1.0 + slow.abs()) * 4.0,
                    "{name} n={n} row {i}: {slow} vs {}",
                    fast[i]
                );
            }
        }
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let d = ellipse_ring();
    let ctx = context(&d, 128, 3);
    let rho = random_vec(256, 3);
    let par = ctx.clone().with_exec(Exec::Parallel);
    assert_eq!(ctx.apply_n(&rho), par.apply_n(&rho));
    assert_eq!(ctx.apply_m(&rho).unwrap(), par.apply_m(&rho).unwrap());
}

#[test]
fn diagonal_matches_extrapolated_kernel() {
    for d in [ellipse_ring(), two_circles()] {
        let n = 64;
        let ctx = context(&d, n, 3);
        let o = Oracle { d: &d };
        for k in 0..2 {
            for i in (0..n).step_by(7) {
                let s = ctx.mesh().components[k].t[i];
                // Symmetric differences cancel the odd terms; Richardson removes δ².
                let lim = |delta: f64| {
                    0.5 * (o.kernel(k, s, k, s + delta) + o.kernel(k, s, k, s - delta))
                };
                let (a, b) = (lim(1e-3), lim(5e-4));
                let extrap = (4.0 * b - a) / 3.0;
                let idx = k * n + i;
                assert!((ctx.kernel_n(idx, idx) - extrap.im).abs() < 1e-8, "N diag");
                assert!((ctx.diag_m1(idx) - extrap.re).abs() < 1e-8, "M1 diag");
            }
        }
    }
}

#[test]
fn unbounded_diagonal_formula() {
    let d = two_circles();
    let ctx = context(&d, 64, 3);
    for idx in [0, 10, 64, 100] {
        let k = idx / 64;
        let t = ctx.mesh().components[k].t[idx % 64];
        let [_, dz, d2z] = d.gamma(k).jet(t);
        let expect = (d2z / dz).im / TAU;
        assert!((ctx.kernel_n(idx, idx) - expect).abs() < 1e-15);
    }
}

#[test]
fn circle_kernel_is_constant() {
    // Γ₁ of the unbounded ring is the unit circle run clockwise and A ≡ 1.
    let ctx = context(&two_circles(), 32, 3);
    for i in 0..32 {
        for j in 0..32 {
            assert!(
                (ctx.kernel_n(i, j) + 0.5 * FRAC_1_PI).abs() < 1e-14,
                "({i},{j})"
            );
        }
    }
}

#[test]
fn row_sums_match_oracle_quadrature() {
    let d = ellipse_ring();
    let n = 128;
    let ctx = context(&d, n, 3);
    let dense = ctx.assemble_n();
    let o = Oracle { d: &d };
    // Fine shifted trapezoidal grid never hits t = s.
    let fine = 8192;
    for k in 0..2 {
        for i in (0..n).step_by(17) {
            let idx = k * n + i;
            let s = ctx.mesh().components[k].t[i];
            for kt in 0..2 {
                let row: f64 = dense[idx][kt * n..(kt + 1) * n].iter().sum();
                let oracle: f64 = (0..fine)
                    .map(|j| o.kernel(k, s, kt, TAU * (j as f64 + 0.5) / fine as f64).im)
                    .sum::<f64>()
                    * TAU
                    / fine as f64;
                assert!(
                    (row - oracle).abs() < 1e-12,
                    "row {idx} block {kt}: {row} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn conjugation_annihilates_constants_and_rotates_cosines() {
    let n = 64;
    let ctx = context(&ellipse_ring(), n, 3);
    let ones = vec![1.0; n];
    assert!(ctx.conjugate(&ones).iter().all(|v| v.abs() < 1e-15));
    for k in [1usize, 3, 10] {
        let mu: Vec<f64> = (0..n)
            .map(|j| (k as f64 * TAU * j as f64 / n as f64).cos())
            .collect();
        let out = ctx.conjugate(&mu);
        for (i, &v) in out.iter().enumerate().step_by(5) {
            let s = TAU * i as f64 / n as f64;
            // (1/2π) PV ∫ cot((t−s)/2) cos(kt) dt with the singular part
            // subtracted: the remaining integrand is smooth.
            let m = 4096;
            let pv: f64 = (0..m)
                .map(|j| {
                    let t = TAU * (j as f64 + 0.5) / m as f64;
                    ((k as f64 * t).cos() - (k as f64 * s).cos()) / (0.5 * (t - s)).tan()
                })
                .sum::<f64>()
                / m as f64;
            assert!((v - pv).abs() < 1e-10, "k={k} s={s}: {v} vs {pv}");
            assert!((v + (k as f64 * s).sin()).abs() < 1e-13);
        }
    }
}

fn m_oracle(d: &RingDomain, mu: &dyn Fn(usize, f64) -> f64, k: usize, s: f64) -> f64 {
    let o = Oracle { d };
    let fine = 8192;
    let mut total = 0.0;
    for kt in 0..2 {
        for j in 0..fine {
            let t = TAU * (j as f64 + 0.5) / fine as f64;
            let v = o.kernel(k, s, kt, t).re * mu(kt, t);
            total += if kt == k {
                // The cotangent part integrates to zero in the principal value sense.
                v - mu(k, s) * 0.5 * FRAC_1_PI / (0.5 * (t - s)).tan()
            } else {
                v
            };
        }
    }
    total * TAU / fine as f64
}

#[test]
fn m_matches_principal_value_quadrature() {
    let d = ellipse_ring();
    let n = 128;
    let mu = |k: usize, t: f64| {
        if k == 0 {
            (t.sin() + 0.3 * (2.0 * t).cos()).exp()
        } else {
            0.5 * (3.0 * t).sin() - t.cos()
        }
    };
    let ctx = context(&d, n, 3);
    let vals: Vec<f64> = (0..2 * n)
        .map(|i| mu(i / n, ctx.mesh().components[i / n].t[i % n]))
        .collect();
    for scheme in [MScheme::Subtraction, MScheme::Spectral] {
        let out = ctx.clone().with_m_scheme(scheme).apply_m(&vals).unwrap();
        for i in (0..2 * n).step_by(13) {
            let s = ctx.mesh().components[i / n].t[i % n];
            let oracle = m_oracle(&d, &mu, i / n, s);
            assert!(
                (out[i] - oracle).abs() < 1e-10,
                "{scheme:?} node {i}: {} vs {oracle}",
                out[i]
            );
        }
    }
}

#[test]
fn spectral_m_rejects_graded_meshes() {
    let ctx = context(&square_ring(), 64, 3).with_m_scheme(MScheme::Spectral);
    assert!(matches!(
        ctx.apply_m(&vec![1.0; 128]),
        Err(ringcap::Error::Mesh(_))
    ));
}

#[test]
fn concentric_annulus_is_its_own_image() {
    let d = RingDomain::bounded(
        circle(c(0.0, 0.0), 1.0).unwrap(),
        circle(c(0.0, 0.0), 0.5).unwrap(),
        c(0.75, 0.0),
        c(0.0, 0.0),
    )
    .unwrap();
    let m = annq(&d, &SolveOptions::with_n(64)).unwrap();
    assert!((m.solution.h2 - m.solution.h1 - 0.5f64.ln()).abs() < 1e-13);
    assert!((m.q - 0.5).abs() < 1e-13);
}

#[test]
fn homogeneous_problem_has_zero_solution() {
    let ctx = context(&ellipse_ring(), 64, 3);
    let sol = ctx.solve(&vec![0.0; 128], 1e-14, 100).unwrap();
    assert!(sol.rho.iter().chain(&sol.h).all(|&v| v == 0.0));
}

#[test]
fn h_is_piecewise_constant_on_smooth_rings() {
    for d in [ellipse_ring(), two_circles()] {
        let ctx = context(&d, 256, 3);
        let gamma = ringcap::annmap::annulus_gamma(&d, ctx.eta());
        let sol = ctx.solve(&gamma, 1e-14, 100).unwrap();
        let gmax = gamma.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for k in 0..2 {
            assert!(
                sol.spread[k] < 100.0 * 1e-14 * gmax,
                "spread {:e}",
                sol.spread[k]
            );
        }
    }
}

#[test]
fn gmres_history_does_not_increase() {
    for d in [ellipse_ring(), square_ring()] {
        let ctx = context(&d, 128, 5);
        let gamma = ringcap::annmap::annulus_gamma(&d, ctx.eta());
        let sol = ctx.solve(&gamma, 1e-14, 100).unwrap();
        for w in sol.history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        assert!(sol.residual < 1e-13);
    }
}

#[test]
fn square_ring_gmres_iterations() {
    let d = RingDomain::bounded(
        rectangle(-2.0, 2.0, -2.0, 2.0).unwrap(),
        rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(),
        c(1.5, 0.0),
        c(0.0, 0.0),
    )
    .unwrap();
    let opts = SolveOptions {
        n: 1024,
        mesh: MeshPolicy::Auto { p: 5 },
        ..Default::default()
    };
    let m = annq(&d, &opts).unwrap();
    assert!(m.solution.iterations <= 40, "{}", m.solution.iterations);
}

#[test]
fn smooth_convergence_is_fast() {
    // Two close circles: the error drops by far more than 100 per doubling
    // until it reaches rounding level.
    let d = RingDomain::unbounded(
        circle(c(0.0, 0.0), 1.0).unwrap(),
        circle(c(2.5, 0.0), 1.0).unwrap(),
        c(0.0, 0.0),
        c(2.5, 0.0),
    )
    .unwrap();
    let q = |n| annq(&d, &SolveOptions::with_n(n)).unwrap().q;
    let qs: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| q(n)).collect();
    let d1 = (qs[0] - qs[1]).abs();
    let d2 = (qs[1] - qs[2]).abs();
    assert!(d1 / d2 >= 100.0, "{d1:e} -> {d2:e}");
}

#[test]
fn gmres_on_a_known_matrix() {
    let a = [[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]];
    let apply = |x: &[f64]| {
        (0..3)
            .map(|i| (0..3).map(|j| a[i][j] * x[j]).sum())
            .collect::<Vec<f64>>()
    };
    let out = gmres(apply, &[1.0, 2.0, 3.0], 1e-14, 10).unwrap();
    let r = apply(&out.x);
    assert!((r[0] - 1.0).abs() + (r[1] - 2.0).abs() + (r[2] - 3.0).abs() < 1e-13);
    assert!(out.iterations <= 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn n_operator_is_linear(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let ctx = context(&ellipse_ring(), 32, 3);
        let x = random_vec(64, seed);
        let y = random_vec(64, seed + 1);
        let comb: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let lhs = ctx.apply_n(&comb);
        let (nx, ny) = (ctx.apply_n(&x), ctx.apply_n(&y));
        for i in 0..64 {
            prop_assert!((lhs[i] - (a * nx[i] + b * ny[i])).abs() < 1e-14 * 10.0);
        }
    }
}
