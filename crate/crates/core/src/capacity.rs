//! Capacities of the geometry families, their closed forms, and the
//! hyperbolic and elliptic capacities of compact sets in the unit disk.

use crate::annmap::{annq, SolveOptions};
use crate::boundary::{
    circle, ellipse, polygon, rectangle, regular_polygon, BoundaryCurve, DomainSpec, MeshPolicy,
    RingDomain,
};
use crate::error::{Error, Result};
use crate::slitmap::{
    deep_point, halfplane_map, joukowski_inverse, joukowski_inverse_exterior_jet,
    joukowski_inverse_jet, strip_slit_preimage, strip_to_disk, strip_to_disk_jet, PreimageOptions,
    SlitSpec,
};
use crate::specfun::{
    complete_e, complete_k, incomplete_e, incomplete_f, mu, mu_arg, mu_inv_arg, EllipticArg,
};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::time::Instant;

/// Grading order used by the cornered families and by `caph`/`cape`.
pub const FAMILY_GRADING: u32 = 5;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Every geometry family with its parameters.
///
/// `TwoSegments`, `HalfplaneSlit` and `TwoSlits` only have closed forms; computing them
/// numerically needs a preimage construction this crate does not provide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Exterior of `|z| ≤ 1` and `|z − a| ≤ r`.
    TwoCircles { a: f64, r: f64 },
    /// Between the Joukowski images of `|w| = r1` and `|w| = r2`.
    ConfocalEllipses { r1: f64, r2: f64 },
    /// Between the squares of half-width 2 and `2a`.
    SquareInSquare { a: f64 },
    /// Between regular `m`-gons with vertices on `|z| = 1` and `|z| = q`.
    PolygonInPolygon { m: usize, q: f64 },
    /// Exterior of `[0,1]` and the disk `|z − a| ≤ r`.
    SegmentCircle { r: f64, a: f64 },
    /// Exterior of `[0,1]` and the ellipse `(c+d)/2 + (d−c)/2·cos t − i r sin t`.
    SegmentEllipse { c: f64, d: f64, r: f64 },
    /// Exterior of `[0,1]` and the polygon with vertices `a − r e^{−2πik/m}`.
    SegmentPolygon { m: usize, a: f64, r: f64 },
    /// Exterior of `[0,1]×[0.5−d,0.5+d]` and `[0,1]×[−0.5−d,−0.5+d]`.
    RectPair { d: f64 },
    /// Upper half-plane minus `[0.5−d,0.5+d]×[1,2]`.
    RectHalfplaneVertical { d: f64 },
    /// Upper half-plane minus `[0,1]×[0.5−d,0.5+d]`.
    RectHalfplaneHorizontal { d: f64 },
    /// Strip `|Im z| < π/2` minus `[0,1]×[−d,d]`.
    RectStrip { d: f64 },
    /// Strip `|Im z| < π/2` minus the segment `[a, b]`.
    StripSlit { a: [f64; 2], b: [f64; 2] },
    /// Exterior of `[0,1]` and `[c,d]` on the real axis.
    TwoSegments { c: f64, d: f64 },
    /// Upper half-plane minus `[is, ir]`.
    HalfplaneSlit { s: f64, r: f64 },
    /// Exterior of the slits `[i/2, 1+i/2]` and `[−i/2, 1−i/2]`.
    TwoSlits,
    /// A ring domain read from its JSON description.
    Geometry { domain: DomainSpec },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::TwoCircles { .. } => "two_circles",
            Family::ConfocalEllipses { .. } => "confocal_ellipses",
            Family::SquareInSquare { .. } => "square_in_square",
            Family::PolygonInPolygon { .. } => "polygon_in_polygon",
            Family::SegmentCircle { .. } => "segment_circle",
            Family::SegmentEllipse { .. } => "segment_ellipse",
            Family::SegmentPolygon { .. } => "segment_polygon",
            Family::RectPair { .. } => "rect_pair",
            Family::RectHalfplaneVertical { .. } => "rect_halfplane_vertical",
            Family::RectHalfplaneHorizontal { .. } => "rect_halfplane_horizontal",
            Family::RectStrip { .. } => "rect_strip",
            Family::StripSlit { .. } => "strip_slit",
            Family::TwoSegments { .. } => "two_segments",
            Family::HalfplaneSlit { .. } => "halfplane_slit",
            Family::TwoSlits => "two_slits",
            Family::Geometry { .. } => "geometry",
        }
    }

    /// Parameters as `key=value` pairs joined by `;`.
    pub fn params(&self) -> String {
        let v = serde_json::to_value(self).unwrap_or_default();
        let mut parts = vec![];
        if let Some(map) = v.as_object() {
            for (k, val) in map {
                if k != "family" {
                    let s = match val {
                        serde_json::Value::Array(a) => a
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                        other => other.to_string(),
                    };
                    parts.push(format!("{k}={s}"));
                }
            }
        }
        parts.join(";")
    }

    /// Settings used when the caller does not choose any.
    pub fn default_options(&self) -> SolveOptions {
        let graded = |n: usize, p: u32| SolveOptions {
            n,
            mesh: MeshPolicy::Auto { p },
            ..SolveOptions::default()
        };
        match *self {
            Family::TwoCircles { .. } | Family::ConfocalEllipses { .. } => {
                SolveOptions::with_n(1024)
            }
            Family::SegmentCircle { .. } | Family::SegmentEllipse { .. } => {
                SolveOptions::with_n(2048)
            }
            Family::StripSlit { .. } => SolveOptions::with_n(2048),
            Family::SquareInSquare { .. } => graded(2048, FAMILY_GRADING),
            Family::PolygonInPolygon { m, .. } | Family::SegmentPolygon { m, .. } => {
                graded(round_up(2048, m.max(1)), FAMILY_GRADING)
            }
            // Thin rectangles need the long sides resolved at the scale of d.
            Family::RectStrip { d } if d < 0.05 => graded(4096, FAMILY_GRADING),
            Family::RectPair { .. }
            | Family::RectHalfplaneVertical { .. }
            | Family::RectHalfplaneHorizontal { .. }
            | Family::RectStrip { .. } => graded(2048, FAMILY_GRADING),
            Family::TwoSegments { .. } | Family::HalfplaneSlit { .. } | Family::TwoSlits => {
                SolveOptions::default()
            }
            Family::Geometry { .. } => graded(1024, FAMILY_GRADING),
        }
    }

    /// The ring domain handed to the annulus solver.
    pub fn domain(&self) -> Result<RingDomain> {
        let arg = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Geometry(format!("{}: {msg}", self.name())))
            }
        };
        match *self {
            Family::TwoCircles { a, r } => {
                arg(r > 0.0 && a > 1.0 + r, "needs r > 0 and a > 1 + r")?;
                RingDomain::unbounded(
                    circle(c(0.0, 0.0), 1.0)?,
                    circle(c(a, 0.0), r)?,
                    c(0.0, 0.0),
                    c(a, 0.0),
                )
            }
            Family::ConfocalEllipses { r1, r2 } => {
                arg(r1 > r2 && r2 > 1.0, "needs r1 > r2 > 1")?;
                let e =
                    |r: f64| ellipse(c(0.0, 0.0), 0.5 * (r + 1.0 / r), 0.5 * (r - 1.0 / r), 0.0);
                let alpha = 0.25 * ((r1 + 1.0 / r1) + (r2 + 1.0 / r2));
                RingDomain::bounded(e(r1)?, e(r2)?, c(alpha, 0.0), c(0.0, 0.0))
            }
            Family::SquareInSquare { a } => {
                arg(a > 0.0 && a < 1.0, "needs 0 < a < 1")?;
                let outer = rectangle(-2.0, 2.0, -2.0, 2.0)?;
                let inner = rectangle(-2.0 * a, 2.0 * a, -2.0 * a, 2.0 * a)?;
                RingDomain::bounded(outer, inner, c(1.0 + a, 0.0), c(0.0, 0.0))
            }
            Family::PolygonInPolygon { m, q } => {
                arg(
                    m >= 3 && q > 0.0 && q < (PI / m as f64).cos(),
                    "needs m >= 3 and 0 < q < cos(π/m)",
                )?;
                let outer = regular_polygon(m, c(0.0, 0.0), 1.0)?;
                let inner = regular_polygon(m, c(0.0, 0.0), q)?;
                RingDomain::bounded(outer, inner, c(0.5 * (1.0 + q), 0.0), c(0.0, 0.0))
            }
            Family::SegmentCircle { r, a } => {
                arg(r > 0.0 && a > 1.0 + r, "needs r > 0 and a > 1 + r")?;
                let g2 = circle(c(a, 0.0), r)?.map_analytic(joukowski_inverse_jet)?;
                RingDomain::bounded(
                    unit_circle()?,
                    g2,
                    c(0.0, 0.0),
                    joukowski_inverse(c(a, 0.0))?,
                )
            }
            Family::SegmentEllipse { c: cc, d, r } => {
                let (a, b) = (0.5 * (d + cc), 0.5 * (d - cc));
                arg(
                    cc > 1.0 && d > cc && r > 0.0 && r <= b,
                    "needs 1 < c < d and 0 < r <= (d−c)/2",
                )?;
                let g2 = ellipse(c(a, 0.0), b, -r, 0.0)?.map_analytic(joukowski_inverse_jet)?;
                RingDomain::bounded(
                    unit_circle()?,
                    g2,
                    c(0.0, 0.0),
                    joukowski_inverse(c(a, 0.0))?,
                )
            }
            Family::SegmentPolygon { m, a, r } => {
                arg(
                    m >= 3 && r > 0.0 && a - r > 1.0,
                    "needs m >= 3, r > 0 and a − r > 1",
                )?;
                let v: Vec<C64> = (0..m)
                    .map(|k| c(a, 0.0) - C64::from_polar(r, -TAU * k as f64 / m as f64))
                    .collect();
                let g2 = polygon(&v)?.map_analytic(joukowski_inverse_jet)?;
                RingDomain::bounded(
                    unit_circle()?,
                    g2,
                    c(0.0, 0.0),
                    joukowski_inverse(c(a, 0.0))?,
                )
            }
            Family::RectPair { d } => {
                arg(d > 0.0 && d < 0.5, "needs 0 < d < 0.5")?;
                RingDomain::unbounded(
                    rectangle(0.0, 1.0, 0.5 - d, 0.5 + d)?,
                    rectangle(0.0, 1.0, -0.5 - d, -0.5 + d)?,
                    c(0.5, 0.5),
                    c(0.5, -0.5),
                )
            }
            Family::RectHalfplaneVertical { d } => {
                arg(d > 0.0 && d < 0.5, "needs 0 < d < 0.5")?;
                halfplane_domain(
                    rectangle(0.5 - d, 0.5 + d, 1.0, 2.0)?,
                    c(1.5, 1.5),
                    c(0.5, 1.5),
                )
            }
            Family::RectHalfplaneHorizontal { d } => {
                arg(d > 0.0 && d < 0.5, "needs 0 < d < 0.5")?;
                halfplane_domain(
                    rectangle(0.0, 1.0, 0.5 - d, 0.5 + d)?,
                    c(1.5, 0.5),
                    c(0.5, 0.5),
                )
            }
            Family::RectStrip { d } => {
                arg(d > 0.0 && d < 0.5, "needs 0 < d < 0.5")?;
                let g2 = rectangle(0.0, 1.0, -d, d)?.map_analytic(strip_to_disk_jet)?;
                let g1 = unit_circle()?;
                let alpha = strip_to_disk(c(0.5, 0.5 * (d + PI / 2.0)));
                RingDomain::bounded(g1, g2, alpha, strip_to_disk(c(0.5, 0.0)))
            }
            Family::StripSlit { .. } => Err(Error::Argument(
                "strip_slit domains come from the preimage iteration; use cap_family".into(),
            )),
            Family::TwoSegments { .. } | Family::HalfplaneSlit { .. } | Family::TwoSlits => Err(
                Error::Argument(format!("{} has a closed form only", self.name())),
            ),
            Family::Geometry { ref domain } => domain.build(),
        }
    }
}

fn round_up(n: usize, m: usize) -> usize {
    let k = n.div_ceil(m);
    let k = if (k * m) % 2 == 1 { k + 1 } else { k };
    k * m
}

fn unit_circle() -> Result<BoundaryCurve> {
    circle(c(0.0, 0.0), 1.0)
}

fn halfplane_domain(rect: BoundaryCurve, alpha: C64, inside: C64) -> Result<RingDomain> {
    let m = halfplane_map();
    let g2 = rect.map_analytic(move |z| m.jet(z))?;
    RingDomain::bounded(unit_circle()?, g2, m.apply(alpha), m.apply(inside))
}

/// Result of one capacity computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub family: Family,
    pub value: f64,
    pub q: f64,
    pub n: usize,
    pub iterations: usize,
    pub residual: f64,
    pub runtime_ms: f64,
    pub exact: Option<f64>,
    pub rel_error: Option<f64>,
}

impl CapacityReport {
    /// Fills `exact` and `rel_error` when the family has a closed form.
    pub fn with_oracle(mut self) -> Self {
        if let Ok(e) = exact_oracle(&self.family) {
            self.exact = Some(e);
            self.rel_error = Some((self.value - e).abs() / e);
        }
        self
    }
}

/// Computes the capacity of a family with explicit settings.
pub fn cap_family_with(family: &Family, opts: &SolveOptions) -> Result<CapacityReport> {
    let start = Instant::now();
    let map = match family {
        Family::StripSlit { a, b } => {
            let slit = SlitSpec::new(c(a[0], a[1]), c(b[0], b[1]))?;
            let (domain, _, _) = strip_slit_preimage(&slit, opts, &PreimageOptions::default())
                .map_err(|f| f.error)?;
            annq(&domain, opts)?
        }
        _ => annq(&family.domain()?, opts)?,
    };
    Ok(CapacityReport {
        family: family.clone(),
        value: map.capacity,
        q: map.q,
        n: opts.n,
        iterations: map.solution.iterations,
        residual: map.solution.residual,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        exact: None,
        rel_error: None,
    })
}

/// Computes the capacity of a family.
///
/// `n = None` uses the family's default node count.
pub fn cap_family(family: &Family, n: Option<usize>) -> Result<CapacityReport> {
    let mut opts = family.default_options();
    if let Some(n) = n {
        opts.n = n;
    }
    cap_family_with(family, &opts)
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Modulus `q` of the annulus equivalent to the exterior of two circles.
pub fn two_circles_q(a: f64, r: f64) -> f64 {
    let cr = (1.0 + a - r) * (a + r - 1.0) / r;
    let b = cr - 2.0;
    2.0 / (b + (b * b - 4.0).sqrt())
}

/// Closed-form capacity, when one is known.
pub fn exact_oracle(family: &Family) -> Result<f64> {
    let none = || Err(Error::NoOracle(family.name().to_string()));
    let v = match *family {
        Family::TwoCircles { a, r } => {
            if !(r > 0.0 && a > 1.0 + r) {
                return Err(Error::Argument("two_circles needs a > 1 + r".into()));
            }
            TAU / (1.0 / two_circles_q(a, r)).ln()
        }
        Family::ConfocalEllipses { r1, r2 } => TAU / (r1 / r2).ln(),
        Family::SquareInSquare { a } => square_in_square_exact(a)?,
        Family::PolygonInPolygon { m: 4, q } => square_in_square_exact(q)?,
        Family::PolygonInPolygon { .. } => return none(),
        Family::SegmentCircle { r, a } => TAU / mu(r / (a * a - a - r * r))?,
        Family::SegmentEllipse { c, d, r } => TAU / mu(segment_ellipse_tau(c, d, r))?,
        Family::TwoSegments { c, d } => PI / mu(((d - c) / (c * (d - 1.0))).sqrt())?,
        Family::HalfplaneSlit { s, r } => TAU / mu((0.5 * (r / s).ln()).tanh())?,
        Family::TwoSlits => two_slits_exact()?,
        Family::StripSlit { a, b } => {
            if a[1] != 0.0 || b[1] != 0.0 {
                return none();
            }
            TAU / mu((0.5 * (b[0] - a[0]).abs()).tanh())?
        }
        Family::SegmentPolygon { .. }
        | Family::RectPair { .. }
        | Family::RectHalfplaneVertical { .. }
        | Family::RectHalfplaneHorizontal { .. }
        | Family::RectStrip { .. }
        | Family::Geometry { .. } => return none(),
    };
    Ok(v)
}

/// `(8/π) μ(2uv)` with `u = μ⁻¹(πc/2)`, `v = μ⁻¹(π/(2c))`, `c = (1−a)/(1+a)`.
pub fn square_in_square_exact(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Argument("square_in_square needs 0 < a < 1".into()));
    }
    let cc = (1.0 - a) / (1.0 + a);
    // v = μ⁻¹(π/(2c)) is the complement of u, so 2uv has complement |u² − v²|.
    let u = mu_inv_arg(PI * cc / 2.0)?;
    let (ur, vr) = (u.r(), u.rprime());
    let x = EllipticArg::from_pair(2.0 * ur * vr, ((vr - ur) * (vr + ur)).abs())
        .or_else(|_| EllipticArg::new(2.0 * ur * vr))?;
    Ok(8.0 / PI * mu_arg(x))
}

/// `τ_r` of the segment–ellipse family.
pub fn segment_ellipse_tau(c: f64, d: f64, r: f64) -> f64 {
    let s1 = (d * c + r * r).sqrt();
    let s2 = (d * c - d - c + 1.0 + r * r).sqrt();
    let num = 2.0 * (d - c + 2.0 * r) * (1.0 + s1 - s2);
    let den = (d + c + 2.0 * s1) * (d + c - 2.0 + 2.0 * s2) - (d - c + 2.0 * r).powi(2);
    num / den
}

/// Lengths `(t, b)` of the two-slit configuration reached from the
/// parameter `k` (slit separation and slit length).
pub fn two_slits_tb(k: f64) -> Result<(f64, f64)> {
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    let a2 = complete_e(kp)? / (k * k * complete_k(kp)?);
    let k1 = k / kp * (a2 - 1.0).max(0.0).sqrt();
    let k1p = ((1.0 - k1) * (1.0 + k1)).max(0.0).sqrt();
    let t = 2.0 / k * (complete_e(k)? - (1.0 - k * k * a2) * complete_k(k)?);
    let b = 2.0 / k * (incomplete_e(k1p, kp)? - k * k * a2 * incomplete_f(k1p, kp)?);
    Ok((t, b))
}

/// Parameter `k` with `t(k) = b(k)`, by bisection on `[1e−6, 1 − 1e−6]`.
pub fn two_slits_k() -> Result<f64> {
    let phi = |k: f64| two_slits_tb(k).map(|(t, b)| t - b);
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    let (flo, fhi) = (phi(lo)?, phi(hi)?);
    if flo.signum() == fhi.signum() {
        return Err(Error::Convergence {
            iterations: 0,
            residual: flo.abs().min(fhi.abs()),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = phi(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Capacity of the exterior of `[i/2, 1+i/2]` and `[−i/2, 1−i/2]`.
pub fn two_slits_exact() -> Result<f64> {
    let k = two_slits_k()?;
    // 1/sqrt(1+s) with s = 4k/(1−k)² equals (1−k)/(1+k).
    let x = EllipticArg::from_pair((1.0 - k) / (1.0 + k), 2.0 * k.sqrt() / (1.0 + k))
        .or_else(|_| EllipticArg::new((1.0 - k) / (1.0 + k)))?;
    Ok(PI / mu_arg(x))
}

// ---------------------------------------------------------------------------
// Hyperbolic and elliptic capacity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    InsideUnitDisk,
    General,
}

/// A compact connected set `E` given by its boundary and one interior point.
#[derive(Debug, Clone)]
pub struct CompactSet {
    pub boundary: BoundaryCurve,
    pub containment: Containment,
    pub interior: C64,
}

impl CompactSet {
    pub fn new(boundary: BoundaryCurve, interior: C64) -> Result<Self> {
        if boundary.winding_number(interior, 2048).abs() != 1 {
            return Err(Error::Geometry(
                "interior point is not enclosed by the boundary".into(),
            ));
        }
        let radius = boundary
            .sample(2048)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let containment = if radius < 1.0 {
            Containment::InsideUnitDisk
        } else {
            Containment::General
        };
        Ok(CompactSet {
            boundary,
            containment,
            interior,
        })
    }

    pub fn disk(r: f64) -> Result<Self> {
        Self::new(circle(c(0.0, 0.0), r)?, c(0.0, 0.0))
    }

    pub fn square(r: f64) -> Result<Self> {
        Self::new(rectangle(-r, r, -r, r)?, c(0.0, 0.0))
    }

    pub fn amoeba() -> Self {
        Self::new(crate::boundary::amoeba(), c(0.25, 0.5)).expect("amoeba encloses 0.25+0.5i")
    }

    fn require_disk(&self) -> Result<()> {
        if self.containment != Containment::InsideUnitDisk {
            return Err(Error::Geometry(
                "the set must lie strictly inside the unit disk".into(),
            ));
        }
        Ok(())
    }
}

fn solve_opts(n: usize) -> SolveOptions {
    SolveOptions {
        n,
        mesh: MeshPolicy::Auto { p: FAMILY_GRADING },
        ..SolveOptions::default()
    }
}

/// Hyperbolic capacity: `q` of the annulus equivalent to `𝔻 ∖ E`.
pub fn caph(e: &CompactSet, n: usize) -> Result<f64> {
    caph_with(e, &solve_opts(n))
}

pub fn caph_with(e: &CompactSet, opts: &SolveOptions) -> Result<f64> {
    e.require_disk()?;
    let g1 = unit_circle()?;
    let g2 = e.boundary.clone();
    let alpha = deep_point(&g1, &g2, |p| {
        p.norm() < 1.0 && g2.winding_number(p, 2048) == 0
    })
    .ok_or_else(|| Error::Geometry("no interior point found".into()))?;
    let d = RingDomain::bounded(g1, g2, alpha, e.interior)?;
    Ok(annq(&d, opts)?.q)
}

/// Elliptic capacity: `√q` for the ring between `E` and `E* = {−1/ā}`.
pub fn cape(e: &CompactSet, n: usize) -> Result<f64> {
    cape_with(e, &solve_opts(n))
}

pub fn cape_with(e: &CompactSet, opts: &SolveOptions) -> Result<f64> {
    e.require_disk()?;
    let star = e.boundary.antipodal()?;
    let inner = e.interior;
    let d = if e.boundary.winding_number(c(0.0, 0.0), 2048) != 0 {
        // E contains 0, so E* contains ∞ and the ring is bounded. Points of
        // the unit circle lie in the ring; pick the one farthest from both.
        let mut best = (0.0, c(1.0, 0.0));
        let samples: Vec<C64> = e
            .boundary
            .sample(512)
            .into_iter()
            .chain(star.sample(512))
            .collect();
        for j in 0..64 {
            let p = C64::from_polar(1.0, TAU * j as f64 / 64.0);
            let dist = samples
                .iter()
                .map(|s| (s - p).norm())
                .fold(f64::INFINITY, f64::min);
            if dist > best.0 {
                best = (dist, p);
            }
        }
        RingDomain::bounded(star, e.boundary.clone(), best.1, inner)?
    } else {
        RingDomain::unbounded(e.boundary.clone(), star, inner, -1.0 / inner.conj())?
    };
    Ok(annq(&d, opts)?.q.sqrt())
}

/// Hyperbolic capacity of the interval `[0, r]`, computed through the map
/// `z ↦ Ψ₂⁻¹(z/r)` onto the exterior of the unit circle.
pub fn caph_interval(r: f64, n: usize) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Argument("interval needs 0 < r < 1".into()));
    }
    interval_ring(1.0 / r, n)
}

/// Elliptic capacity of `[0, r]` through the chain ending at the disk minus `[0, τ]`.
pub fn cape_interval(r: f64, n: usize) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Argument("interval needs 0 < r < 1".into()));
    }
    Ok(interval_ring(1.0 / interval_tau(r), n)?.sqrt())
}

/// `τ = r²/(2 + r² + 2√(1+r²))`.
pub fn interval_tau(r: f64) -> f64 {
    r * r / (2.0 + r * r + 2.0 * (1.0 + r * r).sqrt())
}

// q of the ring between the unit circle and the exterior-Joukowski image of
// |z| = radius, i.e. of the disk of that radius minus [0,1].
fn interval_ring(radius: f64, n: usize) -> Result<f64> {
    let g1 = circle(c(0.0, 0.0), radius)?.map_analytic(joukowski_inverse_exterior_jet)?;
    let alpha = joukowski_inverse_exterior_jet(c(0.0, 0.5 * radius))[0];
    let d = RingDomain::bounded(g1, unit_circle()?, alpha, c(0.0, 0.0))?;
    Ok(annq(&d, &SolveOptions::with_n(n))?.q)
}

/// Exact hyperbolic capacity of `[0, r]`: `e^{−μ(r)}`.
pub fn caph_interval_exact(r: f64) -> Result<f64> {
    Ok((-mu(r)?).exp())
}

/// Exact elliptic capacity of `[0, r]`: `e^{−μ(τ)/2}`.
pub fn cape_interval_exact(r: f64) -> Result<f64> {
    Ok((-0.5 * mu(interval_tau(r))?).exp())
}
