//! Parametrized boundary curves, ring domains and quadrature meshes.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

/// `[η(t), η'(t), η''(t)]` at one parameter value.
pub type Jet = [C64; 3];

type JetFn = dyn Fn(f64) -> Jet + Send + Sync;

/// Sense of traversal of a closed curve.
///
/// `Outer` curves run counterclockwise and `Inner` curves clockwise, so a
/// ring domain always lies to the left of its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Outer,
    Inner,
}

impl Orientation {
    fn flipped(self) -> Self {
        match self {
            Orientation::Outer => Orientation::Inner,
            Orientation::Inner => Orientation::Outer,
        }
    }
}

/// A 2π-periodic Jordan curve with analytic first and second derivatives.
#[derive(Clone)]
pub struct BoundaryCurve {
    jet: Arc<JetFn>,
    corners: Vec<f64>,
    orientation: Orientation,
}

impl fmt::Debug for BoundaryCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryCurve")
            .field("corners", &self.corners)
            .field("orientation", &self.orientation)
            .field("eta(0)", &self.eval(0.0))
            .finish()
    }
}

impl BoundaryCurve {
    /// Wraps a jet function. The orientation is measured from the curve.
    pub fn from_jet(
        jet: impl Fn(f64) -> Jet + Send + Sync + 'static,
        corners: Vec<f64>,
    ) -> Result<Self> {
        let mut corners: Vec<f64> = corners.into_iter().map(|c| c.rem_euclid(TAU)).collect();
        corners.sort_by(|a, b| a.partial_cmp(b).unwrap());
        corners.dedup();
        let mut curve = BoundaryCurve {
            jet: Arc::new(jet),
            corners,
            orientation: Orientation::Outer,
        };
        let area = curve.signed_area(1024);
        if !area.is_finite() || area == 0.0 {
            return Err(Error::Argument("degenerate curve".into()));
        }
        curve.orientation = if area > 0.0 {
            Orientation::Outer
        } else {
            Orientation::Inner
        };
        Ok(curve)
    }

    pub fn jet(&self, t: f64) -> Jet {
        (self.jet)(t)
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.jet(t)[0]
    }

    pub fn deriv(&self, t: f64) -> C64 {
        self.jet(t)[1]
    }

    pub fn deriv2(&self, t: f64) -> C64 {
        self.jet(t)[2]
    }

    /// Parameter values in `[0, 2π)` where the tangent jumps.
    pub fn corners(&self) -> &[f64] {
        &self.corners
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Signed area enclosed, by the trapezoidal rule on `m` points.
    pub fn signed_area(&self, m: usize) -> f64 {
        let h = TAU / m as f64;
        (0..m)
            .map(|j| {
                let [z, dz, _] = self.jet(j as f64 * h);
                0.5 * (z.conj() * dz).im * h
            })
            .sum()
    }

    /// The same point set traversed backwards: `t ↦ η(2π - t)`.
    pub fn reversed(&self) -> Self {
        let inner = self.jet.clone();
        let corners = self
            .corners
            .iter()
            .map(|c| (TAU - c).rem_euclid(TAU))
            .collect::<Vec<_>>();
        let mut corners = corners;
        corners.sort_by(|a, b| a.partial_cmp(b).unwrap());
        BoundaryCurve {
            jet: Arc::new(move |t| {
                let [z, dz, d2z] = inner(TAU - t);
                [z, -dz, d2z]
            }),
            corners,
            orientation: self.orientation.flipped(),
        }
    }

    /// Returns a copy traversed with the requested orientation.
    pub fn oriented(&self, o: Orientation) -> Self {
        if self.orientation == o {
            self.clone()
        } else {
            self.reversed()
        }
    }

    /// Image of the curve under an analytic map given by its jet
    /// `w ↦ [g(w), g'(w), g''(w)]`.
    pub fn map_analytic(&self, g: impl Fn(C64) -> Jet + Send + Sync + 'static) -> Result<Self> {
        let inner = self.jet.clone();
        BoundaryCurve::from_jet(
            move |t| {
                let [z, dz, d2z] = inner(t);
                let [w, dw, d2w] = g(z);
                [w, dw * dz, d2w * dz * dz + dw * d2z]
            },
            self.corners.clone(),
        )
    }

    /// Image under the similarity `z ↦ scale·z + shift` (scale complex).
    pub fn similarity(&self, scale: C64, shift: C64) -> Self {
        let inner = self.jet.clone();
        BoundaryCurve {
            jet: Arc::new(move |t| {
                let [z, dz, d2z] = inner(t);
                [scale * z + shift, scale * dz, scale * d2z]
            }),
            corners: self.corners.clone(),
            orientation: self.orientation,
        }
    }

    /// Image under the reflection `z ↦ -1/conj(z)`.
    pub fn antipodal(&self) -> Result<Self> {
        let inner = self.jet.clone();
        BoundaryCurve::from_jet(
            move |t| {
                let [z, dz, d2z] = inner(t);
                let (zc, dzc, d2zc) = (z.conj(), dz.conj(), d2z.conj());
                let inv = 1.0 / zc;
                [
                    -inv,
                    dzc * inv * inv,
                    d2zc * inv * inv - 2.0 * dzc * dzc * inv * inv * inv,
                ]
            },
            self.corners.clone(),
        )
    }

    /// Winding number of the curve about `p`, by the discrete argument principle.
    pub fn winding_number(&self, p: C64, m: usize) -> i64 {
        let mut total = 0.0;
        let mut prev = self.eval(0.0) - p;
        for j in 1..=m {
            let cur = self.eval(TAU * j as f64 / m as f64) - p;
            total += (cur / prev).arg();
            prev = cur;
        }
        (total / TAU).round() as i64
    }

    /// Samples of the curve on `m` equally spaced parameters.
    pub fn sample(&self, m: usize) -> Vec<C64> {
        (0..m)
            .map(|j| self.eval(TAU * j as f64 / m as f64))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// Counterclockwise circle `c + r e^{it}`.
pub fn circle(center: C64, radius: f64) -> Result<BoundaryCurve> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Argument(format!(
            "circle radius {radius} must be positive"
        )));
    }
    BoundaryCurve::from_jet(
        move |t| {
            let e = C64::from_polar(radius, t);
            [center + e, C64::i() * e, -e]
        },
        vec![],
    )
}

/// Ellipse `c + e^{iφ}(a cos t + i b sin t)`; negative `b` runs clockwise.
pub fn ellipse(center: C64, a: f64, b: f64, rotation: f64) -> Result<BoundaryCurve> {
    if !(a > 0.0 && b != 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Argument(format!(
            "ellipse semi-axes ({a}, {b}) invalid"
        )));
    }
    let rot = C64::from_polar(1.0, rotation);
    BoundaryCurve::from_jet(
        move |t| {
            let (s, c) = t.sin_cos();
            [
                center + rot * C64::new(a * c, b * s),
                rot * C64::new(-a * s, b * c),
                rot * C64::new(-a * c, -b * s),
            ]
        },
        vec![],
    )
}

/// Closed polygon through `vertices` in the given order, one side per
/// parameter interval `[2πk/m, 2π(k+1)/m]`.
pub fn polygon(vertices: &[C64]) -> Result<BoundaryCurve> {
    let m = vertices.len();
    if m < 3 {
        return Err(Error::Argument(
            "a polygon needs at least 3 vertices".into(),
        ));
    }
    for k in 0..m {
        if (vertices[(k + 1) % m] - vertices[k]).norm() == 0.0 {
            return Err(Error::Argument("repeated polygon vertex".into()));
        }
    }
    let v: Vec<C64> = vertices.to_vec();
    let corners: Vec<f64> = (0..m).map(|k| TAU * k as f64 / m as f64).collect();
    let side = TAU / m as f64;
    BoundaryCurve::from_jet(
        move |t| {
            let u = t.rem_euclid(TAU) / side;
            let k = (u.floor() as usize).min(m - 1);
            let frac = u - k as f64;
            let edge = v[(k + 1) % m] - v[k];
            [v[k] + edge * frac, edge / side, C64::new(0.0, 0.0)]
        },
        corners,
    )
}

/// Counterclockwise axis-parallel rectangle `[x0,x1] × [y0,y1]`.
pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<BoundaryCurve> {
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::Argument(
            "rectangle needs x0 < x1 and y0 < y1".into(),
        ));
    }
    polygon(&[
        C64::new(x1, y0),
        C64::new(x1, y1),
        C64::new(x0, y1),
        C64::new(x0, y0),
    ])
}

/// Regular polygon with vertices `center + radius·e^{2πik/m}`, counterclockwise.
pub fn regular_polygon(m: usize, center: C64, radius: f64) -> Result<BoundaryCurve> {
    if m < 3 || !(radius > 0.0) {
        return Err(Error::Argument(
            "regular polygon needs m >= 3 and radius > 0".into(),
        ));
    }
    let v: Vec<C64> = (0..m)
        .map(|k| center + C64::from_polar(radius, TAU * k as f64 / m as f64))
        .collect();
    polygon(&v)
}

/// The amoeba-shaped test curve
/// `0.1 + 0.6i + 0.2 (e^{cos t} cos²2t + e^{sin t} sin²2t) e^{-it}`.
pub fn amoeba() -> BoundaryCurve {
    BoundaryCurve::from_jet(
        |t| {
            let (s, c) = t.sin_cos();
            let (s2, c2) = (2.0 * t).sin_cos();
            let (s4, c4) = (4.0 * t).sin_cos();
            let (ec, es) = (c.exp(), s.exp());
            let r = 0.2 * (ec * c2 * c2 + es * s2 * s2);
            let r1 = 0.2 * (ec * (-s * c2 * c2 - 2.0 * s4) + es * (c * s2 * s2 + 2.0 * s4));
            let r2 = 0.2
                * (ec * ((s * s - c) * c2 * c2 + 4.0 * s * s4 - 8.0 * c4)
                    + es * ((c * c - s) * s2 * s2 + 4.0 * c * s4 + 8.0 * c4));
            let e = C64::from_polar(1.0, -t);
            let i = C64::i();
            [
                C64::new(0.1, 0.6) + r * e,
                (r1 - i * r) * e,
                (r2 - 2.0 * i * r1 - r) * e,
            ]
        },
        vec![],
    )
    .expect("amoeba is a fixed valid curve")
}

/// Closed curve through sampled points `z_k = η(2πk/N)`, evaluated by
/// trigonometric interpolation with exact interpolant derivatives.
pub fn samples(points: &[C64]) -> Result<BoundaryCurve> {
    let m = points.len();
    if m < 8 {
        return Err(Error::Argument("need at least 8 samples".into()));
    }
    let coeffs = dft(points);
    let half = m / 2;
    BoundaryCurve::from_jet(
        move |t| {
            let mut out = [C64::new(0.0, 0.0); 3];
            for (k, c) in coeffs.iter().enumerate() {
                let freq = if k <= half {
                    k as f64
                } else {
                    k as f64 - m as f64
                };
                // Split the Nyquist mode evenly so the interpolant stays real
                // for real data and symmetric in general.
                let (freqs, scale): (&[f64], f64) = if m % 2 == 0 && k == half {
                    (&[half as f64, -(half as f64)], 0.5)
                } else {
                    (std::slice::from_ref(&freq), 1.0)
                };
                for &fr in freqs {
                    let e = C64::from_polar(scale, fr * t) * c;
                    out[0] += e;
                    out[1] += e * C64::new(0.0, fr);
                    out[2] += e * (-fr * fr);
                }
            }
            out
        },
        vec![],
    )
}

fn dft(points: &[C64]) -> Vec<C64> {
    use rustfft::FftPlanner;
    let m = points.len();
    let mut buf = points.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf.iter().map(|c| c / m as f64).collect()
}

/// Serializable description of a catalog curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    Amoeba,
    Samples {
        points: Vec<[f64; 2]>,
    },
}

pub(crate) fn pt(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl Shape {
    pub fn build(&self) -> Result<BoundaryCurve> {
        match self {
            Shape::Circle { center, radius } => circle(pt(*center), *radius),
            Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            } => ellipse(pt(*center), *a, *b, *rotation),
            Shape::Polygon { vertices } => {
                polygon(&vertices.iter().map(|p| pt(*p)).collect::<Vec<_>>())
            }
            Shape::Rectangle { x0, x1, y0, y1 } => rectangle(*x0, *x1, *y0, *y1),
            Shape::Amoeba => Ok(amoeba()),
            Shape::Samples { points } => {
                samples(&points.iter().map(|p| pt(*p)).collect::<Vec<_>>())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Ring domains
// ---------------------------------------------------------------------------

/// Whether the ring domain is bounded (Γ₂ inside Γ₁) or contains ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Bounded,
    Unbounded,
}

/// A doubly connected domain `G` with boundary `Γ₁ ∪ Γ₂` and its auxiliary points.
///
/// For a bounded domain `alpha` lies in `G`; for an unbounded one `z1` lies
/// inside `Γ₁`. In both cases `z2` lies inside `Γ₂`. Curves are reoriented on
/// construction so that `G` is on their left.
#[derive(Debug, Clone)]
pub struct RingDomain {
    gamma: [BoundaryCurve; 2],
    kind: DomainKind,
    alpha: C64,
    z1: C64,
    z2: C64,
}

impl RingDomain {
    pub fn bounded(
        gamma1: BoundaryCurve,
        gamma2: BoundaryCurve,
        alpha: C64,
        z2: C64,
    ) -> Result<Self> {
        let g1 = gamma1.oriented(Orientation::Outer);
        let g2 = gamma2.oriented(Orientation::Inner);
        let d = RingDomain {
            gamma: [g1, g2],
            kind: DomainKind::Bounded,
            alpha,
            z1: C64::new(f64::NAN, f64::NAN),
            z2,
        };
        let w = |c: &BoundaryCurve, p| c.winding_number(p, 2048);
        if w(&d.gamma[1], z2) != -1 {
            return Err(Error::Geometry("z2 is not enclosed by gamma2".into()));
        }
        if w(&d.gamma[0], alpha) != 1 || w(&d.gamma[1], alpha) != 0 {
            return Err(Error::Geometry("alpha does not lie in the domain".into()));
        }
        if w(&d.gamma[0], d.gamma[1].eval(0.0)) != 1 {
            return Err(Error::Geometry("gamma2 does not lie inside gamma1".into()));
        }
        Ok(d)
    }

    pub fn unbounded(
        gamma1: BoundaryCurve,
        gamma2: BoundaryCurve,
        z1: C64,
        z2: C64,
    ) -> Result<Self> {
        let g1 = gamma1.oriented(Orientation::Inner);
        let g2 = gamma2.oriented(Orientation::Inner);
        let d = RingDomain {
            gamma: [g1, g2],
            kind: DomainKind::Unbounded,
            alpha: C64::new(f64::NAN, f64::NAN),
            z1,
            z2,
        };
        let w = |c: &BoundaryCurve, p| c.winding_number(p, 2048);
        if w(&d.gamma[0], z1) != -1 || w(&d.gamma[1], z1) != 0 {
            return Err(Error::Geometry("z1 is not enclosed by gamma1 alone".into()));
        }
        if w(&d.gamma[1], z2) != -1 || w(&d.gamma[0], z2) != 0 {
            return Err(Error::Geometry("z2 is not enclosed by gamma2 alone".into()));
        }
        if w(&d.gamma[0], d.gamma[1].eval(0.0)) != 0 {
            return Err(Error::Geometry("gamma2 lies inside gamma1".into()));
        }
        Ok(d)
    }

    pub fn gamma(&self, k: usize) -> &BoundaryCurve {
        &self.gamma[k]
    }

    pub fn gamma1(&self) -> &BoundaryCurve {
        &self.gamma[0]
    }

    pub fn gamma2(&self) -> &BoundaryCurve {
        &self.gamma[1]
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Interior point of a bounded domain (NaN for unbounded ones).
    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    /// Point inside `Γ₁` of an unbounded domain (NaN for bounded ones).
    pub fn z1(&self) -> C64 {
        self.z1
    }

    pub fn z2(&self) -> C64 {
        self.z2
    }

    /// True when `p` lies in the open domain (tested against sampled curves).
    pub fn contains(&self, p: C64) -> bool {
        let w1 = self.gamma[0].winding_number(p, 2048);
        let w2 = self.gamma[1].winding_number(p, 2048);
        match self.kind {
            DomainKind::Bounded => w1 == 1 && w2 == 0,
            DomainKind::Unbounded => w1 == 0 && w2 == 0,
        }
    }

    /// Image of the domain under `z ↦ scale·z + shift`.
    pub fn similarity(&self, scale: C64, shift: C64) -> Result<Self> {
        let g1 = self.gamma[0].similarity(scale, shift);
        let g2 = self.gamma[1].similarity(scale, shift);
        let f = |z: C64| scale * z + shift;
        match self.kind {
            DomainKind::Bounded => RingDomain::bounded(g1, g2, f(self.alpha), f(self.z2)),
            DomainKind::Unbounded => RingDomain::unbounded(g1, g2, f(self.z1), f(self.z2)),
        }
    }
}

/// JSON description of a ring domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub gamma1: Shape,
    pub gamma2: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z1: Option<[f64; 2]>,
    pub z2: [f64; 2],
}

impl DomainSpec {
    pub fn build(&self) -> Result<RingDomain> {
        let g1 = self.gamma1.build()?;
        let g2 = self.gamma2.build()?;
        match self.kind {
            DomainKind::Bounded => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Argument("bounded domain needs alpha".into()))?;
                RingDomain::bounded(g1, g2, pt(alpha), pt(self.z2))
            }
            DomainKind::Unbounded => {
                let z1 = self
                    .z1
                    .ok_or_else(|| Error::Argument("unbounded domain needs z1".into()))?;
                RingDomain::unbounded(g1, g2, pt(z1), pt(self.z2))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshKind {
    Equidistant,
    Graded,
}

/// Nodes on one boundary component.
///
/// The curve is sampled at `t_j = t(s_j)` where `s_j` is a uniform grid in
/// the computational variable `s`. `dt` and `d2t` are the derivatives of the
/// substitution at the nodes; `weights = (2π/n)·dt` integrate functions of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMesh {
    pub kind: MeshKind,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub dt: Vec<f64>,
    pub d2t: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ComponentMesh {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Trapezoidal nodes `t_j = 2πj/n` with weights `2π/n`.
pub fn mesh_equidistant(n: usize) -> Result<ComponentMesh> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::Argument(format!(
            "n = {n} must be even and at least 8"
        )));
    }
    let h = TAU / n as f64;
    let t: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    Ok(ComponentMesh {
        kind: MeshKind::Equidistant,
        s: t.clone(),
        t,
        dt: vec![1.0; n],
        d2t: vec![0.0; n],
        weights: vec![h; n],
    })
}

/// Polynomial grading of order `p` on `[0,1]`: the regularized incomplete
/// beta function `I_u(p,p)` and its first two derivatives.
pub fn grading(u: f64, p: u32) -> (f64, f64, f64) {
    if u > 0.5 {
        let (v, d1, d2) = grading(1.0 - u, p);
        return (1.0 - v, d1, -d2);
    }
    let p = p as i32;
    let n = 2 * p - 1;
    let w = 1.0 - u;
    let mut v = 0.0;
    for j in p..=n {
        v += binom(n, j) * u.powi(j) * w.powi(n - j);
    }
    let norm = p as f64 * binom(n, p);
    let d1 = norm * u.powi(p - 1) * w.powi(p - 1);
    let d2 = if p == 1 {
        0.0
    } else {
        norm * (p - 1) as f64 * (u.powi(p - 2) * w.powi(p - 1) - u.powi(p - 1) * w.powi(p - 2))
    };
    (v, d1, d2)
}

fn binom(n: i32, k: i32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Graded nodes clustering at every corner of `curve`.
///
/// The computational variable `s` is split into one arc of length `2π/m` per
/// corner-to-corner piece and the nodes are the half-step offset points
/// `s_j = (j + 1/2)·2π/n`, so no node sits on a corner.
pub fn mesh_graded(curve: &BoundaryCurve, n: usize, p: u32) -> Result<ComponentMesh> {
    let corners = curve.corners();
    let m = corners.len();
    if m == 0 {
        return Err(Error::Argument(
            "graded mesh needs at least one corner".into(),
        ));
    }
    if n < 8 || n % 2 != 0 || n % m != 0 {
        return Err(Error::Argument(format!(
            "n = {n} must be even, at least 8 and a multiple of the corner count {m}"
        )));
    }
    if p == 0 {
        return Err(Error::Argument("grading order must be positive".into()));
    }
    let per = n / m;
    let h = TAU / n as f64;
    let arc = TAU / m as f64;
    let mut mesh = ComponentMesh {
        kind: MeshKind::Graded,
        s: Vec::with_capacity(n),
        t: Vec::with_capacity(n),
        dt: Vec::with_capacity(n),
        d2t: Vec::with_capacity(n),
        weights: Vec::with_capacity(n),
    };
    for k in 0..m {
        let c0 = corners[k];
        let c1 = if k + 1 < m {
            corners[k + 1]
        } else {
            corners[0] + TAU
        };
        let width = c1 - c0;
        for i in 0..per {
            let u = (i as f64 + 0.5) / per as f64;
            let (v, d1, d2) = grading(u, p);
            let dt = width * d1 / arc;
            mesh.s.push(k as f64 * arc + u * arc);
            mesh.t.push((c0 + width * v).rem_euclid(TAU));
            mesh.dt.push(dt);
            mesh.d2t.push(width * d2 / (arc * arc));
            mesh.weights.push(h * dt);
        }
    }
    Ok(mesh)
}

/// How to place nodes on each boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum MeshPolicy {
    /// Equidistant on smooth components, graded of order `p` on cornered ones.
    Auto { p: u32 },
    /// Equidistant everywhere.
    Equidistant,
}

impl Default for MeshPolicy {
    fn default() -> Self {
        MeshPolicy::Auto { p: DEFAULT_GRADING }
    }
}

/// Default grading order.
pub const DEFAULT_GRADING: u32 = 3;

/// Nodes on both components of a ring domain (n per component).
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub n: usize,
    pub components: [ComponentMesh; 2],
}

impl Mesh {
    pub fn new(domain: &RingDomain, n: usize, policy: MeshPolicy) -> Result<Self> {
        let make = |c: &BoundaryCurve| match policy {
            MeshPolicy::Auto { p } if !c.corners().is_empty() => mesh_graded(c, n, p),
            _ => mesh_equidistant(n),
        };
        Ok(Mesh {
            n,
            components: [make(domain.gamma1())?, make(domain.gamma2())?],
        })
    }

    /// All `2n` parameter values, component 1 first.
    pub fn nodes(&self) -> Vec<f64> {
        self.components
            .iter()
            .flat_map(|c| c.t.iter().copied())
            .collect()
    }

    /// All `2n` quadrature weights, component 1 first.
    pub fn weights(&self) -> Vec<f64> {
        self.components
            .iter()
            .flat_map(|c| c.weights.iter().copied())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_endpoints() {
        for p in 1..7 {
            let (v0, d0, _) = grading(0.0, p);
            let (v1, d1, _) = grading(1.0, p);
            assert!(v0.abs() < 1e-15 && (v1 - 1.0).abs() < 1e-15);
            if p > 1 {
                assert!(d0.abs() < 1e-15 && d1.abs() < 1e-15);
            }
            let (vm, _, _) = grading(0.5, p);
            assert!((vm - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn polygon_corners_are_vertex_parameters() {
        let sq = rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(sq.corners().len(), 4);
        assert!((sq.eval(0.0) - C64::new(1.0, -1.0)).norm() < 1e-15);
        assert_eq!(sq.orientation(), Orientation::Outer);
    }

    #[test]
    fn reversal_flips_orientation() {
        let c = circle(C64::new(0.0, 0.0), 1.0).unwrap();
        let r = c.reversed();
        assert_eq!(r.orientation(), Orientation::Inner);
        assert!((r.eval(1.0) - c.eval(TAU - 1.0)).norm() < 1e-15);
    }
}
