//! Elementary conformal maps and the strip-with-slit canonical map.
//!
//! The canonical domain is the strip `|Im z| < π/2` minus a rectilinear
//! slit. A preimage domain bounded by the unit circle and a smooth Jordan
//! curve is found by a fixed-point iteration that replaces the slit by a thin
//! ellipse and corrects its center and length until the computed image slit
//! matches the target.

use crate::annmap::{cauchy_eval, SolveOptions};
use crate::bie::KernelContext;
use crate::boundary::{circle, ellipse, mesh_equidistant, BoundaryCurve, Jet, Mesh, RingDomain};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `Ψ(ζ) = (ζ + 1/ζ)/4 + 1/2`, mapping the unit disk onto the exterior of `[0,1]`.
pub fn joukowski(zeta: C64) -> C64 {
    0.25 * (zeta + 1.0 / zeta) + 0.5
}

/// Inverse of [`joukowski`] with values in the unit disk (principal square root).
pub fn joukowski_inverse(z: C64) -> Result<C64> {
    if z.im.abs() <= 1e-14 && (-1e-14..=1.0 + 1e-14).contains(&z.re) {
        return Err(Error::Branch(format!("{z} lies on the segment [0,1]")));
    }
    Ok(joukowski_inverse_unchecked(z))
}

fn joukowski_inverse_unchecked(z: C64) -> C64 {
    if z.is_infinite() {
        return c(0.0, 0.0);
    }
    let w = 2.0 * z - 1.0;
    1.0 / (w * (1.0 + (1.0 - 1.0 / (w * w)).sqrt()))
}

/// Jet of the inverse Joukowski map, for composing with curves.
pub fn joukowski_inverse_jet(z: C64) -> Jet {
    let zeta = joukowski_inverse_unchecked(z);
    inverse_jet(zeta)
}

/// Jet of `1/Ψ⁻¹`, the inverse Joukowski branch mapping the exterior of
/// `[0,1]` onto the exterior of the unit disk.
pub fn joukowski_inverse_exterior_jet(z: C64) -> Jet {
    let xi = 1.0 / joukowski_inverse_unchecked(z);
    inverse_jet(xi)
}

// Both branches invert the same Joukowski function F, so g' = 1/F'(g) and
// g'' = −F''(g)·g'³.
fn inverse_jet(g: C64) -> Jet {
    let f1 = 0.25 * (1.0 - 1.0 / (g * g));
    let f2 = 0.5 / (g * g * g);
    let d1 = 1.0 / f1;
    [g, d1, -f2 * d1 * d1 * d1]
}

/// A Möbius transform `(a z + b)/(c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mobius {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        if (a * d - b * c).norm() == 0.0 {
            return Err(Error::Argument("degenerate Möbius coefficients".into()));
        }
        Ok(Mobius { a, b, c, d })
    }

    /// Image of `z`; the pole maps to complex infinity.
    pub fn apply(&self, z: C64) -> C64 {
        let den = self.c * z + self.d;
        if den.norm() == 0.0 {
            return c(f64::INFINITY, f64::INFINITY);
        }
        (self.a * z + self.b) / den
    }

    pub fn jet(&self, z: C64) -> Jet {
        let det = self.a * self.d - self.b * self.c;
        let den = self.c * z + self.d;
        [
            (self.a * z + self.b) / den,
            det / (den * den),
            -2.0 * self.c * det / (den * den * den),
        ]
    }
}

/// Möbius map `(iz + 1)/(z + i)` of the upper half-plane onto the unit disk.
pub fn halfplane_map() -> Mobius {
    Mobius {
        a: I,
        b: c(1.0, 0.0),
        c: c(1.0, 0.0),
        d: I,
    }
}

pub fn halfplane_to_disk(z: C64) -> C64 {
    halfplane_map().apply(z)
}

pub fn mobius(z: C64, coeffs: [C64; 4]) -> C64 {
    Mobius {
        a: coeffs[0],
        b: coeffs[1],
        c: coeffs[2],
        d: coeffs[3],
    }
    .apply(z)
}

/// `tanh(z/2)`, mapping the strip `|Im z| < π/2` onto the unit disk.
pub fn strip_to_disk(z: C64) -> C64 {
    if z.re > 40.0 {
        return c(1.0, 0.0);
    }
    if z.re < -40.0 {
        return c(-1.0, 0.0);
    }
    (0.5 * z).tanh()
}

pub fn strip_to_disk_jet(z: C64) -> Jet {
    let w = strip_to_disk(z);
    let d1 = 0.5 * (1.0 - w * w);
    [w, d1, -w * d1]
}

/// `log((1+ζ)/(1−ζ))`, the inverse of [`strip_to_disk`].
pub fn strip_log(zeta: C64) -> C64 {
    (1.0 + zeta).ln() - (1.0 - zeta).ln()
}

/// A rectilinear slit `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitSpec {
    pub a: C64,
    pub b: C64,
}

impl SlitSpec {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        if a == b {
            return Err(Error::Argument("slit endpoints coincide".into()));
        }
        Ok(SlitSpec { a, b })
    }

    /// Slit with the given center, length and angle.
    pub fn from_center(center: C64, length: f64, angle: f64) -> Self {
        let half = C64::from_polar(0.5 * length, angle);
        SlitSpec {
            a: center - half,
            b: center + half,
        }
    }

    pub fn center(&self) -> C64 {
        0.5 * (self.a + self.b)
    }

    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    /// Angle with the positive real axis, in `[0, π)`.
    pub fn angle(&self) -> f64 {
        let t = (self.b - self.a).arg().rem_euclid(PI);
        if t >= PI {
            0.0
        } else {
            t
        }
    }

    /// True when the closed slit lies inside the open strip `|Im z| < π/2`.
    pub fn inside_strip(&self) -> bool {
        self.a.im.abs() < FRAC_PI_2 && self.b.im.abs() < FRAC_PI_2
    }
}

/// The canonical map of a preimage domain onto the strip with a slit.
#[derive(Debug, Clone)]
pub struct StripMap {
    pub slit: SlitSpec,
    /// Spread of the imaginary part of the rotated slit image; zero for an
    /// exactly straight slit.
    pub straightness: f64,
    pub iterations: usize,
    domain: RingDomain,
    ctx: KernelContext,
    f_boundary: Vec<C64>,
    shift: C64,
}

impl StripMap {
    pub fn domain(&self) -> &RingDomain {
        &self.domain
    }

    /// `Φ` at interior points of the preimage domain.
    pub fn eval(&self, points: &[C64]) -> Result<Vec<C64>> {
        for p in points {
            if !self.domain.contains(*p) {
                return Err(Error::Evaluation(format!("{p} is not inside the domain")));
            }
        }
        let f = cauchy_eval(&self.f_boundary, &self.ctx, points, None)?;
        let alpha = self.domain.alpha();
        Ok(points
            .iter()
            .zip(f)
            .map(|(&z, fz)| self.shift + (z - alpha) * fz + strip_log(z))
            .collect())
    }

    /// `Φ` at the boundary nodes (infinite at `ζ = ±1` if those are nodes).
    pub fn boundary_values(&self) -> Vec<C64> {
        let alpha = self.domain.alpha();
        self.ctx
            .eta()
            .iter()
            .zip(&self.f_boundary)
            .map(|(&z, &fz)| self.shift + (z - alpha) * fz + strip_log(z))
            .collect()
    }

    pub fn context(&self) -> &KernelContext {
        &self.ctx
    }
}

/// A point of the domain far from its boundary, picked from a fixed polar grid.
pub fn deep_point(
    gamma1: &BoundaryCurve,
    gamma2: &BoundaryCurve,
    inside: impl Fn(C64) -> bool,
) -> Option<C64> {
    let samples: Vec<C64> = gamma1
        .sample(512)
        .into_iter()
        .chain(gamma2.sample(512))
        .collect();
    let mut best: Option<(f64, C64)> = None;
    let mut consider = |p: C64| {
        if !inside(p) {
            return;
        }
        let d = samples
            .iter()
            .map(|s| (s - p).norm())
            .fold(f64::INFINITY, f64::min);
        if best.map_or(true, |(bd, _)| d > bd * (1.0 + 1e-12)) {
            best = Some((d, p));
        }
    };
    consider(c(0.0, 0.0));
    for k in 1..20 {
        for j in 0..48 {
            consider(C64::from_polar(k as f64 / 20.0, TAU * j as f64 / 48.0));
        }
    }
    best.map(|(_, p)| p)
}

/// Maps a domain bounded by the unit circle and a curve `Γ₂` inside it onto
/// the strip `|Im z| < π/2` minus a slit at angle `theta2`, normalized by
/// `Φ(±1) = ±∞` and `Φ(i) = iπ/2`.
///
/// `domain` must be bounded with `Γ₁` the unit circle; its `alpha` is used in
/// the auxiliary function. The mesh is equidistant with `n` divisible by 4 so
/// that `t = π/2` is a node.
pub fn strip_canonical_map(
    domain: &RingDomain,
    theta2: f64,
    opts: &SolveOptions,
) -> Result<StripMap> {
    strip_map_checked(domain, theta2, opts, true)
}

fn strip_map_checked(
    domain: &RingDomain,
    theta2: f64,
    opts: &SolveOptions,
    check: bool,
) -> Result<StripMap> {
    let n = opts.n;
    if n % 4 != 0 {
        return Err(Error::Argument(format!("n = {n} must be divisible by 4")));
    }
    let g1 = domain.gamma1();
    if (g1.eval(0.3) - C64::from_polar(1.0, 0.3)).norm() > 1e-12 || !g1.corners().is_empty() {
        return Err(Error::Argument(
            "gamma1 must be the counterclockwise unit circle".into(),
        ));
    }
    if !domain.gamma2().corners().is_empty() {
        return Err(Error::Argument("gamma2 must be smooth".into()));
    }
    let comp = mesh_equidistant(n)?;
    let mesh = Mesh {
        n,
        components: [comp.clone(), comp],
    };
    let ctx = KernelContext::new(domain, mesh, [0.0, theta2], opts.exec)?;
    let rot = C64::from_polar(1.0, -theta2);
    let gamma: Vec<f64> = ctx
        .eta()
        .iter()
        .enumerate()
        .map(|(j, &z)| if j < n { 0.0 } else { (rot * strip_log(z)).im })
        .collect();
    let sol = ctx.solve(&gamma, opts.tol, opts.maxit)?;
    let f_boundary: Vec<C64> = (0..2 * n)
        .map(|j| C64::new(gamma[j] + sol.h[j], sol.rho[j]) / ctx.a_values()[j])
        .collect();
    let alpha = domain.alpha();
    let fi = f_boundary[n / 4];
    let shift = -(I - alpha) * fi;

    // On Γ₂: e^{-iθ₂}Φ = e^{-iθ₂}(shift + Ψ(η)) + ρ − i(γ + h).
    let proj: Vec<C64> = (n..2 * n)
        .map(|j| {
            let z = ctx.eta()[j];
            rot * (shift + strip_log(z)) + C64::new(sol.rho[j], -(gamma[j] + sol.h[j]))
        })
        .collect();
    let re: Vec<f64> = proj.iter().map(|p| p.re).collect();
    let mut im: Vec<f64> = proj.iter().map(|p| p.im).collect();
    let hi = refine_extremum(&re, true);
    let lo = refine_extremum(&re, false);
    im.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = im[n / 2];
    let straightness = im.iter().map(|v| (v - median).abs()).fold(0.0, f64::max);
    if check && !(straightness <= opts.tol * 1e3) {
        return Err(Error::Geometry(format!(
            "slit image is not straight (deviation {straightness:e})"
        )));
    }
    let center = rot.conj() * C64::new(0.5 * (hi + lo), median);
    let slit = SlitSpec::from_center(center, hi - lo, theta2);
    Ok(StripMap {
        slit,
        straightness,
        iterations: sol.iterations,
        domain: domain.clone(),
        ctx,
        f_boundary,
        shift,
    })
}

/// Extremum of the trigonometric interpolant of periodic samples, refined by
/// Newton's method on its derivative from the best sample.
fn refine_extremum(values: &[f64], maximum: bool) -> f64 {
    let n = values.len();
    let pick = |a: f64, b: f64| if maximum { a > b } else { a < b };
    let mut j0 = 0;
    for j in 1..n {
        if pick(values[j], values[j0]) {
            j0 = j;
        }
    }
    let mut buf: Vec<C64> = values.iter().map(|&v| c(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let coef: Vec<(f64, C64)> = buf
        .iter()
        .enumerate()
        .filter(|(k, _)| 2 * k != n)
        .map(|(k, z)| {
            let f = if 2 * k < n {
                k as f64
            } else {
                k as f64 - n as f64
            };
            (f, z / n as f64)
        })
        .collect();
    let eval = |s: f64| {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &(f, z) in &coef {
            let e = z * C64::from_polar(1.0, f * s);
            v += e.re;
            d1 += (e * c(0.0, f)).re;
            d2 -= f * f * e.re;
        }
        (v, d1, d2)
    };
    let h = TAU / n as f64;
    let mut s = j0 as f64 * h;
    let best = values[j0];
    for _ in 0..8 {
        let (_, d1, d2) = eval(s);
        if d2 == 0.0 {
            break;
        }
        let step = d1 / d2;
        if !step.is_finite() || step.abs() > h {
            break;
        }
        s -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let (v, _, _) = eval(s);
    if pick(best, v) {
        best
    } else {
        v
    }
}

/// Preimage domain for an ellipse with center `zhat`, major axis `a`,
/// aspect `r` and angle `theta2` in the strip.
pub fn strip_preimage_domain(zhat: C64, a: f64, r: f64, theta2: f64) -> Result<RingDomain> {
    let half = 0.5 * a;
    let (s, co) = theta2.sin_cos();
    let reach = zhat.im.abs() + ((half * s).powi(2) + (half * r * co).powi(2)).sqrt();
    if !(a > 0.0) || reach >= FRAC_PI_2 {
        return Err(Error::Geometry(format!(
            "ellipse (center {zhat}, axis {a}) leaves the strip"
        )));
    }
    let g1 = circle(c(0.0, 0.0), 1.0)?;
    let g2 = ellipse(zhat, half, -half * r, theta2)?.map_analytic(strip_to_disk_jet)?;
    let z2 = strip_to_disk(zhat);
    let alpha = deep_point(&g1, &g2, |p| {
        p.norm() < 1.0 && g2.winding_number(p, 1024) == 0
    })
    .ok_or_else(|| Error::Geometry("no interior point found for the auxiliary function".into()))?;
    RingDomain::bounded(g1, g2, alpha, z2)
}

/// One record of the preimage iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreimageStep {
    pub center: C64,
    pub length: f64,
    pub error: f64,
}

/// State of the preimage iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageState {
    pub iteration: usize,
    pub zhat: C64,
    pub a: f64,
    pub aspect: f64,
    pub converged: bool,
    /// Set when the iteration stopped at its rounding floor instead of `eps`.
    pub stalled: bool,
    pub history: Vec<PreimageStep>,
}

impl PreimageState {
    pub fn error(&self) -> f64 {
        self.history.last().map_or(f64::INFINITY, |s| s.error)
    }
}

/// Error from the preimage iteration, carrying the iteration history.
#[derive(Debug, Clone)]
pub struct PreimageFailure {
    pub error: Error,
    pub state: PreimageState,
}

/// Iteration settings for [`strip_slit_preimage`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreimageOptions {
    pub aspect: f64,
    pub eps: f64,
    pub max: usize,
    /// Once the error is below `floor`, stop after this many iterations
    /// without a new best and return the best iterate. Zero disables it.
    pub stall: usize,
    pub floor: f64,
    /// Early iterations run with `n / coarsen` nodes until the error drops
    /// below `switch`. Values below 2 disable the coarse phase.
    pub coarsen: usize,
    pub switch: f64,
}

impl Default for PreimageOptions {
    fn default() -> Self {
        PreimageOptions {
            aspect: 0.3,
            eps: 1e-14,
            max: 100,
            stall: 6,
            floor: 1e-10,
            coarsen: 2,
            switch: 1e-8,
        }
    }
}

/// Finds a preimage domain whose canonical strip image has the target slit.
///
/// Returns the preimage domain, the map of its last iterate and the state.
pub fn strip_slit_preimage(
    target: &SlitSpec,
    solve: &SolveOptions,
    it: &PreimageOptions,
) -> std::result::Result<(RingDomain, StripMap, PreimageState), PreimageFailure> {
    let theta2 = target.angle();
    let zeta_l = target.center();
    let len = target.length();
    let r = it.aspect;
    let mut state = PreimageState {
        iteration: 0,
        zhat: zeta_l,
        a: (1.0 - 0.5 * r) * len,
        aspect: r,
        converged: false,
        stalled: false,
        history: vec![],
    };
    let mut best: Option<(f64, usize, RingDomain, StripMap, C64, f64)> = None;
    let fail = |error: Error, state: &PreimageState| PreimageFailure {
        error,
        state: state.clone(),
    };
    if !(r > 0.0 && r <= 1.0) {
        return Err(fail(
            Error::Argument(format!("aspect {r} not in (0,1]")),
            &state,
        ));
    }
    if !target.inside_strip() {
        return Err(fail(
            Error::Geometry("slit leaves the strip".into()),
            &state,
        ));
    }
    let coarse_n = solve.n / it.coarsen.max(1);
    let mut coarse = it.coarsen >= 2 && coarse_n >= 64 && coarse_n % 4 == 0;
    let coarse_opts = SolveOptions {
        n: coarse_n,
        ..*solve
    };
    let mut coarse_best = f64::INFINITY;
    loop {
        state.iteration += 1;
        let domain =
            strip_preimage_domain(state.zhat, state.a, r, theta2).map_err(|e| fail(e, &state))?;
        let level = if coarse { &coarse_opts } else { solve };
        let map =
            strip_map_checked(&domain, theta2, level, !coarse).map_err(|e| fail(e, &state))?;
        let dc = map.slit.center() - zeta_l;
        let dl = map.slit.length() - len;
        let error = dc.norm() + dl.abs();
        state.history.push(PreimageStep {
            center: map.slit.center(),
            length: map.slit.length(),
            error,
        });
        if coarse {
            // Leave the coarse level once close, or once it stops improving.
            let stuck = error >= coarse_best;
            coarse_best = coarse_best.min(error);
            if error < it.switch || stuck {
                coarse = false;
            }
            if state.iteration >= it.max {
                return Err(fail(
                    Error::Convergence {
                        iterations: state.iteration,
                        residual: error,
                    },
                    &state,
                ));
            }
            state.zhat -= dc;
            state.a -= (1.0 - 0.5 * r) * dl;
            continue;
        }
        if error < it.eps {
            state.converged = true;
            return Ok((domain, map, state));
        }
        let improved = best.as_ref().map_or(true, |b| error < b.0);
        let (zhat, a) = (state.zhat, state.a);
        if improved {
            best = Some((error, state.iteration, domain, map, zhat, a));
        }
        if let Some((berr, bk, ..)) = best.as_ref() {
            if it.stall > 0 && *berr < it.floor && state.iteration - bk >= it.stall {
                let (_, _, domain, map, zhat, a) = best.take().expect("best iterate");
                state.converged = true;
                state.stalled = true;
                state.zhat = zhat;
                state.a = a;
                return Ok((domain, map, state));
            }
        }
        if state.iteration >= it.max {
            return Err(fail(
                Error::Convergence {
                    iterations: state.iteration,
                    residual: error,
                },
                &state,
            ));
        }
        state.zhat -= dc;
        state.a -= (1.0 - 0.5 * r) * dl;
    }
}
