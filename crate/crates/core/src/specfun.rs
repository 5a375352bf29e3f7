//! Complete and incomplete elliptic integrals and the modulus function μ.
//!
//! Everything here is a pure function of its arguments. The complete
//! integrals go through the arithmetic-geometric mean, μ is a ratio of two
//! AGMs, and its inverse starts from Jacobi theta series in the nome and
//! finishes with a few Newton corrections.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Below this modulus (or above one minus it) `mu` switches to the
/// Landen-type doubling transforms before evaluating the AGM ratio.
pub const MU_ENDPOINT_THRESHOLD: f64 = 1e-3;

/// Theta-series terms smaller than this are dropped.
pub const THETA_CUTOFF: f64 = 1e-17;

const NEWTON_STEPS: usize = 5;

/// A modulus `r` together with its complement `r' = sqrt(1 - r^2)`.
///
/// Carrying both values lets callers that know the complement more
/// accurately than `sqrt(1 - r^2)` (moduli near 1) pass it through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArg {
    r: f64,
    rprime: f64,
}

impl EllipticArg {
    /// Builds the pair from `r`, computing `r'` as `sqrt((1-r)(1+r))`.
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain(
                "EllipticArg",
                format!("r = {r} not in (0,1)"),
            ));
        }
        Ok(EllipticArg {
            r,
            rprime: ((1.0 - r) * (1.0 + r)).sqrt(),
        })
    }

    /// Builds the pair from the complement.
    pub fn from_complement(rprime: f64) -> Result<Self> {
        let a = Self::new(rprime)?;
        Ok(a.swap())
    }

    /// Builds the pair from both values, checking `r^2 + r'^2 = 1`.
    pub fn from_pair(r: f64, rprime: f64) -> Result<Self> {
        // Either member may round to exactly 1 when the other is tiny.
        let ok_range = r > 0.0 && r <= 1.0 && rprime > 0.0 && rprime <= 1.0;
        let defect = (r * r + rprime * rprime - 1.0).abs();
        if !ok_range || defect > 4.0 * f64::EPSILON {
            return Err(Error::domain(
                "EllipticArg",
                format!("({r}, {rprime}) is not a modulus/complement pair"),
            ));
        }
        Ok(EllipticArg { r, rprime })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn rprime(&self) -> f64 {
        self.rprime
    }

    /// The pair with the roles of `r` and `r'` exchanged.
    pub fn swap(self) -> Self {
        EllipticArg {
            r: self.rprime,
            rprime: self.r,
        }
    }
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, `K(r) = (π/2) F(1/2,1/2;1;r²)`.
pub fn complete_k(r: f64) -> Result<f64> {
    Ok(complete_k_arg(
        EllipticArg::new(r).map_err(|_| domain_unit("complete_k", r))?,
    ))
}

pub fn complete_k_arg(a: EllipticArg) -> f64 {
    FRAC_PI_2 / agm(1.0, a.rprime)
}

/// Complete elliptic integral of the second kind, `E(r) = (π/2) F(1/2,-1/2;1;r²)`.
pub fn complete_e(r: f64) -> Result<f64> {
    Ok(complete_e_arg(
        EllipticArg::new(r).map_err(|_| domain_unit("complete_e", r))?,
    ))
}

pub fn complete_e_arg(arg: EllipticArg) -> f64 {
    let (mut a, mut b) = (1.0_f64, arg.rprime);
    let mut sum = 0.5 * arg.r * arg.r;
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
        pow *= 2.0;
        sum += pow * c * c;
        if c.abs() <= f64::EPSILON * a {
            break;
        }
    }
    FRAC_PI_2 / a * (1.0 - sum)
}

/// The decreasing homeomorphism `μ(r) = (π/2) K(r') / K(r)` of `(0,1)` onto `(0,∞)`.
pub fn mu(r: f64) -> Result<f64> {
    Ok(mu_arg(
        EllipticArg::new(r).map_err(|_| domain_unit("mu", r))?,
    ))
}

pub fn mu_arg(a: EllipticArg) -> f64 {
    let (r, rp) = (a.r, a.rprime);
    if r < MU_ENDPOINT_THRESHOLD {
        let s = r.sqrt();
        let x = EllipticArg {
            r: 2.0 * s / (1.0 + r),
            rprime: (1.0 - r) / (1.0 + r),
        };
        return 2.0 * mu_arg(x);
    }
    if r > 1.0 - MU_ENDPOINT_THRESHOLD {
        let y = EllipticArg {
            r: r * r / ((1.0 + rp) * (1.0 + rp)),
            rprime: 2.0 * rp.sqrt() / (1.0 + rp),
        };
        return 0.5 * mu_arg(y);
    }
    FRAC_PI_2 * agm(1.0, rp) / agm(1.0, r)
}

/// Inverse of `mu`: the modulus `r` with `μ(r) = y`.
pub fn mu_inv(y: f64) -> Result<f64> {
    Ok(mu_inv_arg(y)?.r)
}

/// Inverse of `mu` returning the modulus together with its complement.
pub fn mu_inv_arg(y: f64) -> Result<EllipticArg> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain("mu_inv", format!("y = {y} must be positive")));
    }
    if y >= FRAC_PI_2 {
        Ok(mu_inv_large(y))
    } else {
        // μ(r) μ(r') = π²/4, so invert the complementary value and swap.
        Ok(mu_inv_large(PI * PI / (4.0 * y)).swap())
    }
}

// Valid for y >= π/2, where the nome exp(-2y) is at most exp(-π) and the
// resulting modulus is at most 1/√2.
fn mu_inv_large(y: f64) -> EllipticArg {
    let (t2, t3) = theta_23(y);
    let mut r = (t2 / t3) * (t2 / t3);
    for _ in 0..NEWTON_STEPS {
        let a = EllipticArg {
            r,
            rprime: ((1.0 - r) * (1.0 + r)).sqrt(),
        };
        let k = complete_k_arg(a);
        let slope = -PI * PI / (4.0 * r * a.rprime * a.rprime * k * k);
        let step = (mu_arg(a) - y) / slope;
        let next = r - step;
        let next = if next > 0.0 { next } else { 0.5 * r };
        let done = step.abs() <= 4.0 * f64::EPSILON * r;
        r = next;
        if done {
            break;
        }
    }
    EllipticArg {
        r,
        rprime: ((1.0 - r) * (1.0 + r)).sqrt(),
    }
}

/// θ₂(0,q) and θ₃(0,q) for the nome q = exp(-2y).
fn theta_23(y: f64) -> (f64, f64) {
    let mut t2 = 0.0;
    let mut t3 = 1.0;
    for n in 0..64 {
        let h = n as f64 + 0.5;
        let term2 = 2.0 * (-2.0 * y * h * h).exp();
        t2 += term2;
        let mut term3 = 0.0;
        if n > 0 {
            let m = n as f64;
            term3 = 2.0 * (-2.0 * y * m * m).exp();
            t3 += term3;
        }
        if n > 0 && term2 < THETA_CUTOFF * t2 && term3 < THETA_CUTOFF {
            break;
        }
    }
    (t2, t3)
}

/// Legendre incomplete integral of the first kind,
/// `F(z,k) = ∫₀^z dw / sqrt((1-w²)(1-k²w²))`.
pub fn incomplete_f(z: f64, k: f64) -> Result<f64> {
    check_incomplete("incomplete_f", z, k)?;
    let k2 = k * k;
    Ok(integrate(
        |phi| {
            let s = phi.sin();
            1.0 / (1.0 - k2 * s * s).sqrt()
        },
        0.0,
        z.asin(),
    ))
}

/// Legendre incomplete integral of the second kind,
/// `E(z,k) = ∫₀^z sqrt((1-k²w²)/(1-w²)) dw`.
pub fn incomplete_e(z: f64, k: f64) -> Result<f64> {
    check_incomplete("incomplete_e", z, k)?;
    let k2 = k * k;
    Ok(integrate(
        |phi| {
            let s = phi.sin();
            (1.0 - k2 * s * s).sqrt()
        },
        0.0,
        z.asin(),
    ))
}

fn check_incomplete(func: &'static str, z: f64, k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(func, format!("z = {z} not in [0,1]")));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain(func, format!("k = {k} not in (0,1)")));
    }
    Ok(())
}

fn domain_unit(func: &'static str, r: f64) -> Error {
    Error::domain(func, format!("r = {r} not in (0,1)"))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss–Kronrod 7/15 on one interval: (Kronrod estimate, error estimate).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature with a relative target near 1e-15.
pub(crate) fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (whole, _) = gk15(&f, a, b);
    let tol = 1e-15 * whole.abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        let share = tol * (hi - lo) / (b - a);
        if err <= share.max(1e-17 * val.abs()) || depth >= 40 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    total
}
