//! Small root finding and line search helpers shared by the solvers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

/// Result of a converged Newton solve.
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn jacobian<F>(f: &F, x: &DVector<f64>, fx: &DVector<f64>) -> Option<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> Option<DVector<f64>>,
{
    let n = x.len();
    let mut jac = DMatrix::zeros(fx.len(), n);
    for j in 0..n {
        let h = 1e-7 * x[j].abs().max(1.0);
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let d = (f(&xp)? - f(&xm)?) / (2.0 * h);
        jac.set_column(j, &d);
    }
    Some(jac)
}

/// Damped Newton iteration with central-difference Jacobian.
///
/// `f` may return `None` for points outside its domain; the step is then
/// halved like any other non-improving step.
pub fn newton<F>(f: F, x0: DVector<f64>, opts: NewtonOptions) -> Result<NewtonOutcome>
where
    F: Fn(&DVector<f64>) -> Option<DVector<f64>>,
{
    let mut x = x0;
    let mut fx = f(&x).ok_or_else(|| Error::InvalidInput("Newton seed outside domain".into()))?;
    let mut norm = fx.norm();
    for it in 0..opts.max_iter {
        if norm <= opts.tol {
            return Ok(NewtonOutcome {
                x,
                residual: norm,
                iterations: it,
            });
        }
        let jac = jacobian(&f, &x, &fx).ok_or(Error::NoConvergence {
            iterations: it,
            residual: norm,
        })?;
        let step = jac.lu().solve(&(-&fx)).ok_or(Error::NoConvergence {
            iterations: it,
            residual: norm,
        })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = &x + &step * lambda;
            if let Some(ft) = f(&trial) {
                let tn = ft.norm();
                if tn.is_finite() && (tn < norm || tn <= opts.tol) {
                    x = trial;
                    fx = ft;
                    norm = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm <= opts.tol {
        return Ok(NewtonOutcome {
            x,
            residual: norm,
            iterations: opts.max_iter,
        });
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: norm,
    })
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + c.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Neville extrapolation of samples `(h_i, y_i)` to `h = 0`.
pub fn extrapolate_to_zero(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len();
    let mut p: Vec<f64> = samples.iter().map(|s| s.1).collect();
    for k in 1..n {
        for i in 0..n - k {
            let (hi, hk) = (samples[i].0, samples[i + k].0);
            p[i] = (hk * p[i] - hi * p[i + 1]) / (hk - hi);
        }
    }
    p[0]
}
