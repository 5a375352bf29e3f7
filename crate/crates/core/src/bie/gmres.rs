//! Unrestarted GMRES with modified Gram–Schmidt (one reorthogonalization
//! pass) and Givens rotations.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True relative residual `‖b − A x‖ / ‖b‖` of the returned iterate.
    pub residual: f64,
    /// Relative residual estimate after each iteration (from the rotations).
    pub history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` from `x₀ = 0` until the relative residual drops to `tol`.
///
/// Returns `Error::Convergence` if `maxit` Arnoldi steps are not enough.
pub fn gmres(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<GmresOutcome> {
    let n = b.len();
    let beta = norm(b);
    if beta == 0.0 {
        return Ok(GmresOutcome {
            x: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
            history: vec![],
        });
    }
    let mut basis: Vec<Vec<f64>> = vec![b.iter().map(|v| v / beta).collect()];
    let mut hess: Vec<Vec<f64>> = Vec::new();
    let (mut cs, mut sn) = (Vec::<f64>::new(), Vec::<f64>::new());
    let mut g = vec![beta];
    let mut history = Vec::new();
    let mut converged = false;

    for k in 0..maxit.min(n) {
        let mut w = apply(&basis[k]);
        let mut col = vec![0.0; k + 2];
        for _pass in 0..2 {
            for (j, v) in basis.iter().enumerate() {
                let c = dot(&w, v);
                col[j] += c;
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
            }
        }
        let wn = norm(&w);
        col[k + 1] = wn;
        for i in 0..k {
            let (a, bb) = (col[i], col[i + 1]);
            col[i] = cs[i] * a + sn[i] * bb;
            col[i + 1] = -sn[i] * a + cs[i] * bb;
        }
        let (a, bb) = (col[k], col[k + 1]);
        let r = a.hypot(bb);
        let (c, s) = if r == 0.0 {
            (1.0, 0.0)
        } else {
            (a / r, bb / r)
        };
        cs.push(c);
        sn.push(s);
        col[k] = r;
        col[k + 1] = 0.0;
        let gk = g[k];
        g[k] = c * gk;
        g.push(-s * gk);
        hess.push(col);
        let est = g[k + 1].abs() / beta;
        history.push(est);
        if est <= tol || wn == 0.0 {
            converged = true;
            break;
        }
        basis.push(w.iter().map(|v| v / wn).collect());
    }

    let m = hess.len();
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for j in i + 1..m {
            acc -= hess[j][i] * y[j];
        }
        y[i] = acc / hess[i][i];
    }
    let mut x = vec![0.0; n];
    for (j, yj) in y.iter().enumerate() {
        x.iter_mut()
            .zip(&basis[j])
            .for_each(|(xi, vi)| *xi += yj * vi);
    }
    let ax = apply(&x);
    let res: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let residual = norm(&res) / beta;
    if !converged {
        return Err(Error::Convergence {
            iterations: m,
            residual,
        });
    }
    Ok(GmresOutcome {
        x,
        iterations: m,
        residual,
        history,
    })
}
