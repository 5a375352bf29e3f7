//! Nyström discretization of the integral equation `(I − N)ρ = −Mγ`.
//!
//! All operators work in the computational variable `s` of the mesh, so
//! graded meshes are handled by substituting `η̃(s) = η(t(s))` and using the
//! uniform trapezoidal weight `2π/n` everywhere. Matrix-vector products are
//! matrix free: kernel entries are recomputed on the fly, one output row per
//! task, and each row is summed left to right.

pub mod gmres;

use crate::boundary::{DomainKind, Mesh, MeshKind, RingDomain};
use crate::error::{Error, Result};
use crate::exec::Exec;
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::{FRAC_1_PI, FRAC_PI_2, PI, TAU};
use std::sync::Arc;

pub use gmres::{gmres, GmresOutcome};

/// How the singular operator `M` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MScheme {
    /// Subtract `g(s)` inside the Cauchy-type integral and add back its
    /// principal value analytically. Works on graded and uniform meshes.
    #[default]
    Subtraction,
    /// Split off `cot((t−s)/2)/2π` and apply it through the Fourier symbol
    /// `i·sgn(k)`. Uniform meshes only.
    Spectral,
}

/// Discretized boundary data shared by the operators.
#[derive(Clone)]
pub struct KernelContext {
    kind: DomainKind,
    z2: C64,
    n: usize,
    h: f64,
    theta: [f64; 2],
    mesh: Mesh,
    eta: Vec<C64>,
    deta: Vec<C64>,
    a: Vec<C64>,
    diag_n: Vec<f64>,
    diag_m1: Vec<f64>,
    // structure-of-arrays copies for the inner loops
    ex: Vec<f64>,
    ey: Vec<f64>,
    exec: Exec,
    m_scheme: MScheme,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for KernelContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelContext")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("theta", &self.theta)
            .field("exec", &self.exec)
            .field("m_scheme", &self.m_scheme)
            .finish()
    }
}

/// Result of one integral-equation solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BieSolution {
    pub rho: Vec<f64>,
    pub h: Vec<f64>,
    pub h1: f64,
    pub h2: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Weighted standard deviation of `h` on each component.
    pub spread: [f64; 2],
    /// GMRES relative residual estimate after each iteration.
    pub history: Vec<f64>,
}

impl KernelContext {
    /// Angles `θ₁ = θ₂ = π/2`, the choice used for the annulus map.
    pub fn annulus(domain: &RingDomain, mesh: Mesh, exec: Exec) -> Result<Self> {
        Self::new(domain, mesh, [FRAC_PI_2, FRAC_PI_2], exec)
    }

    pub fn new(domain: &RingDomain, mesh: Mesh, theta: [f64; 2], exec: Exec) -> Result<Self> {
        let n = mesh.n;
        let total = 2 * n;
        let mut eta = Vec::with_capacity(total);
        let mut deta = Vec::with_capacity(total);
        let mut a = Vec::with_capacity(total);
        let mut diag_n = Vec::with_capacity(total);
        let mut diag_m1 = Vec::with_capacity(total);
        for (k, comp) in mesh.components.iter().enumerate() {
            let curve = domain.gamma(k);
            let rot = C64::from_polar(1.0, FRAC_PI_2 - theta[k]);
            for j in 0..comp.len() {
                let [z, dz, d2z] = curve.jet(comp.t[j]);
                let (tp, tpp) = (comp.dt[j], comp.d2t[j]);
                let dzs = dz * tp;
                let d2zs = d2z * tp * tp + dz * tpp;
                let (aj, log_deriv) = match domain.kind() {
                    DomainKind::Bounded => {
                        let off = z - domain.alpha();
                        (rot * off, dzs / off)
                    }
                    DomainKind::Unbounded => (rot, C64::new(0.0, 0.0)),
                };
                let limit = d2zs / (2.0 * dzs) - log_deriv;
                if !(aj.norm() > 0.0) || !limit.re.is_finite() || !limit.im.is_finite() {
                    return Err(Error::Singularity(format!(
                        "degenerate boundary data on component {} at t = {}",
                        k + 1,
                        comp.t[j]
                    )));
                }
                eta.push(z);
                deta.push(dzs);
                a.push(aj);
                diag_n.push(FRAC_1_PI * limit.im);
                diag_m1.push(FRAC_1_PI * limit.re);
            }
        }
        let mut planner = FftPlanner::new();
        Ok(KernelContext {
            kind: domain.kind(),
            z2: domain.z2(),
            n,
            h: TAU / n as f64,
            theta,
            ex: eta.iter().map(|z| z.re).collect(),
            ey: eta.iter().map(|z| z.im).collect(),
            mesh,
            eta,
            deta,
            a,
            diag_n,
            diag_m1,
            exec,
            m_scheme: MScheme::default(),
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        })
    }

    pub fn with_m_scheme(mut self, scheme: MScheme) -> Self {
        self.m_scheme = scheme;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// The auxiliary point inside `Γ₂`.
    pub fn z2(&self) -> C64 {
        self.z2
    }

    pub fn theta(&self) -> [f64; 2] {
        self.theta
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Boundary points `η(t_j)` at all `2n` nodes.
    pub fn eta(&self) -> &[C64] {
        &self.eta
    }

    /// Derivatives with respect to the computational variable, `η'(t_j)·t'(s_j)`.
    pub fn deta(&self) -> &[C64] {
        &self.deta
    }

    /// The auxiliary function `A` at all nodes.
    pub fn a_values(&self) -> &[C64] {
        &self.a
    }

    /// Trapezoidal weight `2π/n` in the computational variable.
    pub fn step(&self) -> f64 {
        self.h
    }

    /// Kernel `N(s_i, t_j)` in the computational variable (no quadrature weight).
    pub fn kernel_n(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag_n[i];
        }
        let d = self.eta[j] - self.eta[i];
        if d == C64::new(0.0, 0.0) {
            return 0.0;
        }
        let v = self.a[i] / self.a[j] * self.deta[j] / d;
        FRAC_1_PI * v.im
    }

    /// Kernel `M(s_i, t_j)` for `i ≠ j` (no quadrature weight).
    pub fn kernel_m(&self, i: usize, j: usize) -> f64 {
        let d = self.eta[j] - self.eta[i];
        if d == C64::new(0.0, 0.0) {
            return 0.0;
        }
        let v = self.a[i] / self.a[j] * self.deta[j] / d;
        FRAC_1_PI * v.re
    }

    /// Continuous limit of `M − cot((t−s)/2)/2π` at `t = s`.
    pub fn diag_m1(&self, i: usize) -> f64 {
        self.diag_m1[i]
    }

    /// Dense `2n × 2n` matrix of the discretized `N` (weights included).
    pub fn assemble_n(&self) -> Vec<Vec<f64>> {
        let total = 2 * self.n;
        (0..total)
            .map(|i| (0..total).map(|j| self.h * self.kernel_n(i, j)).collect())
            .collect()
    }

    /// Matrix-free `(Nρ)_i = Σ_j (2π/n) N(s_i,t_j) ρ_j`.
    pub fn apply_n(&self, rho: &[f64]) -> Vec<f64> {
        let total = 2 * self.n;
        assert_eq!(rho.len(), total, "density length must be 2n");
        let c: Vec<C64> = (0..total)
            .map(|j| self.deta[j] * (self.h * rho[j]) / self.a[j])
            .collect();
        let cr: Vec<f64> = c.iter().map(|z| z.re).collect();
        let ci: Vec<f64> = c.iter().map(|z| z.im).collect();
        let (ex, ey) = (&self.ex, &self.ey);
        self.exec.map(total, |i| {
            let (xi, yi) = (ex[i], ey[i]);
            let (mut sr, mut si) = (0.0, 0.0);
            let mut add = |j: usize| {
                let dx = ex[j] - xi;
                let dy = ey[j] - yi;
                let r2 = dx * dx + dy * dy;
                if r2 == 0.0 {
                    // Graded nodes within an ulp of a corner can round onto
                    // the same point; their weight is negligible.
                    return;
                }
                let inv = 1.0 / r2;
                sr += (cr[j] * dx + ci[j] * dy) * inv;
                si += (ci[j] * dx - cr[j] * dy) * inv;
            };
            for j in 0..i {
                add(j);
            }
            for j in i + 1..total {
                add(j);
            }
            let s = self.a[i] * C64::new(sr, si);
            FRAC_1_PI * s.im + self.h * self.diag_n[i] * rho[i]
        })
    }

    /// Applies `M` with the configured scheme.
    pub fn apply_m(&self, mu: &[f64]) -> Result<Vec<f64>> {
        match self.m_scheme {
            MScheme::Subtraction => Ok(self.apply_m_subtraction(mu)),
            MScheme::Spectral => self.apply_m_spectral(mu),
        }
    }

    /// `M` by singularity subtraction: with `g = μ/A`,
    /// `(M + iN)μ(s_i) = (A_i/π)[Σ_{j≠i} h(g_j − g_i)η'_j/(η_j − η_i) + h g'(s_i) + g_i·PV]`
    /// where `PV = ±iπ` is the principal value of `∫ dζ/(ζ − η_i)` over the boundary.
    pub fn apply_m_subtraction(&self, mu: &[f64]) -> Vec<f64> {
        let total = 2 * self.n;
        assert_eq!(mu.len(), total, "density length must be 2n");
        let g: Vec<C64> = mu.iter().zip(&self.a).map(|(m, a)| m / a).collect();
        let gp = self.spectral_derivative(&g);
        let e: Vec<C64> = self.deta.iter().map(|d| d * self.h).collect();
        let pv = match self.kind {
            DomainKind::Bounded => C64::new(0.0, PI),
            DomainKind::Unbounded => C64::new(0.0, -PI),
        };
        let (gr, gi): (Vec<f64>, Vec<f64>) = g.iter().map(|z| (z.re, z.im)).unzip();
        let (er, ei): (Vec<f64>, Vec<f64>) = e.iter().map(|z| (z.re, z.im)).unzip();
        let (ex, ey) = (&self.ex, &self.ey);
        self.exec.map(total, |i| {
            let (xi, yi, gri, gii) = (ex[i], ey[i], gr[i], gi[i]);
            let (mut sr, mut si) = (0.0, 0.0);
            let mut add = |j: usize| {
                let (dgr, dgi) = (gr[j] - gri, gi[j] - gii);
                let (nr, ni) = (dgr * er[j] - dgi * ei[j], dgr * ei[j] + dgi * er[j]);
                let dx = ex[j] - xi;
                let dy = ey[j] - yi;
                let r2 = dx * dx + dy * dy;
                if r2 == 0.0 {
                    // Graded nodes within an ulp of a corner can round onto
                    // the same point; their weight is negligible.
                    return;
                }
                let inv = 1.0 / r2;
                sr += (nr * dx + ni * dy) * inv;
                si += (ni * dx - nr * dy) * inv;
            };
            for j in 0..i {
                add(j);
            }
            for j in i + 1..total {
                add(j);
            }
            let s = C64::new(sr, si) + gp[i] * self.h + g[i] * pv;
            FRAC_1_PI * (self.a[i] * s).re
        })
    }

    /// `M` split into a cotangent part, applied spectrally per component, and
    /// a smooth remainder summed by the trapezoidal rule.
    pub fn apply_m_spectral(&self, mu: &[f64]) -> Result<Vec<f64>> {
        if self
            .mesh
            .components
            .iter()
            .any(|c| c.kind != MeshKind::Equidistant)
        {
            return Err(Error::Mesh(
                "the spectral cotangent split needs equidistant nodes on both components".into(),
            ));
        }
        let total = 2 * self.n;
        assert_eq!(mu.len(), total, "density length must be 2n");
        let n = self.n;
        let mut conj = Vec::with_capacity(total);
        for k in 0..2 {
            conj.extend(self.conjugate(&mu[k * n..(k + 1) * n]));
        }
        let h = self.h;
        let half_cot = |i: usize, j: usize| {
            let same = (i < n) == (j < n);
            if same {
                let d = (j % n) as f64 * h - (i % n) as f64 * h;
                0.5 * FRAC_1_PI / (0.5 * d).tan()
            } else {
                0.0
            }
        };
        Ok(self.exec.map(total, |i| {
            let mut acc = 0.0;
            for j in 0..total {
                if j == i {
                    acc += h * self.diag_m1[i] * mu[i];
                } else {
                    acc += h * (self.kernel_m(i, j) - half_cot(i, j)) * mu[j];
                }
            }
            acc + conj[i]
        }))
    }

    /// `(1/2π) ∫ cot((t−s)/2) μ(t) dt` on one component: the conjugation
    /// operator with Fourier symbol `i·sgn(k)` (Nyquist mode dropped).
    pub fn conjugate(&self, mu: &[f64]) -> Vec<f64> {
        let n = mu.len();
        let mut buf: Vec<C64> = mu.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.fft_for(n).0.process(&mut buf);
        for (k, c) in buf.iter_mut().enumerate() {
            let sym = if k == 0 || 2 * k == n {
                0.0
            } else if 2 * k < n {
                1.0
            } else {
                -1.0
            };
            *c *= C64::new(0.0, sym);
        }
        self.fft_for(n).1.process(&mut buf);
        buf.iter().map(|c| c.re / n as f64).collect()
    }

    /// Derivative with respect to `s` of the trigonometric interpolant of
    /// `g` on each component.
    pub fn spectral_derivative(&self, g: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = Vec::with_capacity(2 * n);
        for k in 0..2 {
            let mut buf = g[k * n..(k + 1) * n].to_vec();
            self.fft.process(&mut buf);
            for (m, c) in buf.iter_mut().enumerate() {
                let freq = if 2 * m < n {
                    m as f64
                } else if 2 * m == n {
                    0.0
                } else {
                    m as f64 - n as f64
                };
                *c *= C64::new(0.0, freq / n as f64);
            }
            self.ifft.process(&mut buf);
            out.extend(buf);
        }
        out
    }

    fn fft_for(&self, n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
        if n == self.n {
            (self.fft.clone(), self.ifft.clone())
        } else {
            let mut p = FftPlanner::new();
            (p.plan_fft_forward(n), p.plan_fft_inverse(n))
        }
    }

    /// Solves `(I − N)ρ = −Mγ` by GMRES and recovers `h = [Mρ − (I − N)γ]/2`.
    ///
    /// `h1`, `h2` are the means of `h` on each component taken with the
    /// mesh quadrature weights, i.e. averages in the original curve parameter.
    /// On equidistant meshes this is the plain node mean.
    pub fn solve(&self, gamma: &[f64], tol: f64, maxit: usize) -> Result<BieSolution> {
        let total = 2 * self.n;
        if gamma.len() != total {
            return Err(Error::Argument(format!(
                "right-hand side has length {}, expected {total}",
                gamma.len()
            )));
        }
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::Singularity("non-finite right-hand side".into()));
        }
        let rhs: Vec<f64> = self.apply_m(gamma)?.iter().map(|v| -v).collect();
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singularity("non-finite kernel values".into()));
        }
        let op = |x: &[f64]| {
            let nx = self.apply_n(x);
            x.iter().zip(nx).map(|(a, b)| a - b).collect::<Vec<f64>>()
        };
        let out = gmres(op, &rhs, tol, maxit)?;
        let rho = out.x;
        let mrho = self.apply_m(&rho)?;
        let ngamma = self.apply_n(gamma);
        let h: Vec<f64> = (0..total)
            .map(|i| 0.5 * (mrho[i] - (gamma[i] - ngamma[i])))
            .collect();
        if h.iter().chain(rho.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Singularity("non-finite solution".into()));
        }
        let mut means = [0.0; 2];
        let mut spread = [0.0; 2];
        for k in 0..2 {
            let w = &self.mesh.components[k].weights;
            let hk = &h[k * self.n..(k + 1) * self.n];
            let wsum: f64 = w.iter().sum();
            let mean = hk.iter().zip(w).map(|(v, wi)| v * wi).sum::<f64>() / wsum;
            let var = hk
                .iter()
                .zip(w)
                .map(|(v, wi)| wi * (v - mean).powi(2))
                .sum::<f64>()
                / wsum;
            means[k] = mean;
            spread[k] = var.sqrt();
        }
        Ok(BieSolution {
            rho,
            h,
            h1: means[0],
            h2: means[1],
            iterations: out.iterations,
            residual: out.residual,
            spread,
            history: out.history,
        })
    }
}
