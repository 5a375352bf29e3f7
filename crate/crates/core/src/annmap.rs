//! Conformal map of a ring domain onto an annulus `q < |w| < 1`.

use crate::bie::{BieSolution, KernelContext};
use crate::boundary::{DomainKind, Mesh, MeshPolicy, RingDomain};
use crate::error::{Error, Result};
use crate::exec::Exec;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Discretization and solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Nodes per boundary component.
    pub n: usize,
    pub tol: f64,
    pub maxit: usize,
    pub mesh: MeshPolicy,
    #[serde(default)]
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n: 1024,
            tol: 1e-14,
            maxit: 100,
            mesh: MeshPolicy::default(),
            exec: Exec::default(),
        }
    }
}

impl SolveOptions {
    pub fn with_n(n: usize) -> Self {
        SolveOptions {
            n,
            ..Default::default()
        }
    }
}

/// The solved map: modulus, capacity and the boundary values of `f`.
#[derive(Debug, Clone)]
pub struct AnnulusMap {
    pub q: f64,
    pub capacity: f64,
    pub modulus: f64,
    pub solution: BieSolution,
    pub f_boundary: Vec<C64>,
    pub gamma: Vec<f64>,
    pub domain: RingDomain,
    ctx: KernelContext,
}

/// The right-hand side `γ` of the annulus problem.
pub fn annulus_gamma(domain: &RingDomain, eta: &[C64]) -> Vec<f64> {
    let z2 = domain.z2();
    match domain.kind() {
        DomainKind::Bounded => {
            let scale = domain.alpha() - z2;
            eta.iter()
                .map(|&z| -((z - z2) / scale).norm().ln())
                .collect()
        }
        DomainKind::Unbounded => {
            let z1 = domain.z1();
            eta.iter()
                .map(|&z| -((z - z2) / (z - z1)).norm().ln())
                .collect()
        }
    }
}

/// Maps `domain` onto an annulus and returns `q` and the capacity `2π/log(1/q)`.
pub fn annq(domain: &RingDomain, opts: &SolveOptions) -> Result<AnnulusMap> {
    let mesh = Mesh::new(domain, opts.n, opts.mesh)?;
    let ctx = KernelContext::annulus(domain, mesh, opts.exec)?;
    let gamma = annulus_gamma(domain, ctx.eta());
    let solution = ctx.solve(&gamma, opts.tol, opts.maxit)?;
    let q = (solution.h2 - solution.h1).exp();
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Geometry(format!(
            "modulus q = {q} outside (0,1); the boundary components may intersect"
        )));
    }
    let modulus = -q.ln();
    let f_boundary = (0..gamma.len())
        .map(|j| C64::new(gamma[j] + solution.h[j], solution.rho[j]) / ctx.a_values()[j])
        .collect();
    Ok(AnnulusMap {
        q,
        capacity: TAU / modulus,
        modulus,
        solution,
        f_boundary,
        gamma,
        domain: domain.clone(),
        ctx,
    })
}

impl AnnulusMap {
    pub fn context(&self) -> &KernelContext {
        &self.ctx
    }

    /// Evaluates the annulus map `Φ` at interior points.
    pub fn phi_eval(&self, points: &[C64]) -> Result<Vec<C64>> {
        for p in points {
            if !self.domain.contains(*p) {
                return Err(Error::Evaluation(format!("{p} is not inside the domain")));
            }
        }
        let finf = match self.domain.kind() {
            DomainKind::Bounded => None,
            DomainKind::Unbounded => Some(C64::new(0.0, 0.0)),
        };
        let f = cauchy_eval(&self.f_boundary, &self.ctx, points, finf)?;
        let e1 = (-self.solution.h1).exp();
        let z2 = self.domain.z2();
        Ok(points
            .iter()
            .zip(f)
            .map(|(&z, fz)| match self.domain.kind() {
                DomainKind::Bounded => {
                    let a = self.domain.alpha();
                    e1 * (z - z2) / (a - z2) * ((z - a) * fz).exp()
                }
                DomainKind::Unbounded => e1 * (z - z2) / (z - self.domain.z1()) * fz.exp(),
            })
            .collect())
    }

    /// `Φ` on the boundary nodes, from the boundary values of `f`.
    pub fn phi_boundary(&self) -> Vec<C64> {
        let e1 = (-self.solution.h1).exp();
        let z2 = self.domain.z2();
        self.ctx
            .eta()
            .iter()
            .zip(&self.f_boundary)
            .map(|(&z, &fz)| match self.domain.kind() {
                DomainKind::Bounded => {
                    let a = self.domain.alpha();
                    e1 * (z - z2) / (a - z2) * ((z - a) * fz).exp()
                }
                DomainKind::Unbounded => e1 * (z - z2) / (z - self.domain.z1()) * fz.exp(),
            })
            .collect()
    }
}

/// Interior values of an analytic function from its boundary values, by the
/// discretized Cauchy integral in normalized ratio form.
///
/// For bounded domains `f(z) = Σ f_j K_j / Σ K_j` with `K_j = w_j η'_j/(η_j − z)`.
/// For unbounded domains the value at infinity is subtracted and the weight
/// function `u(τ) = 1/(τ − z₂)` takes the role of the constant.
pub fn cauchy_eval(
    values: &[C64],
    ctx: &KernelContext,
    points: &[C64],
    value_at_infinity: Option<C64>,
) -> Result<Vec<C64>> {
    let eta = ctx.eta();
    let deta = ctx.deta();
    if values.len() != eta.len() {
        return Err(Error::Argument(
            "boundary value count does not match the mesh".into(),
        ));
    }
    match (ctx.kind(), value_at_infinity) {
        (DomainKind::Bounded, Some(_)) => {
            return Err(Error::Argument(
                "bounded domains take no value at infinity".into(),
            ))
        }
        (DomainKind::Unbounded, None) => {
            return Err(Error::Argument(
                "unbounded domains need the value at infinity".into(),
            ))
        }
        _ => {}
    }
    for p in points {
        if eta.iter().any(|e| e == p) {
            return Err(Error::Evaluation(format!(
                "{p} coincides with a boundary node"
            )));
        }
    }
    let z2 = ctx.z2();
    Ok(points
        .iter()
        .map(|&z| {
            let (mut num, mut den) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for j in 0..eta.len() {
                let k = deta[j] / (eta[j] - z);
                match value_at_infinity {
                    None => {
                        num += values[j] * k;
                        den += k;
                    }
                    Some(finf) => {
                        let u = 1.0 / (eta[j] - z2);
                        num += (values[j] - finf) * k;
                        den += u * k;
                    }
                }
            }
            match value_at_infinity {
                None => num / den,
                Some(finf) => finf + num / den / (z - z2),
            }
        })
        .collect())
}
