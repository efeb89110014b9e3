//! Adaptive Gauss-Kronrod (7/15) integration with an evaluation budget.

use crate::error::{Error, Result};

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
    0.209_482_141_084_728,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        kronrod += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Tolerance and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            max_evals: 1_000_000,
        }
    }
}

/// Integrates `f` over `[a, b]` by global bisection of the worst panel.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadratureOptions,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut evals = 15;
    let (v, e) = panel(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let (total, err): (f64, f64) = panels
            .iter()
            .fold((0.0, 0.0), |(s, t), p| (s + p.2, t + p.3));
        if err <= opts.abs_tol {
            return Ok(total);
        }
        if evals + 30 > opts.max_evals {
            return Err(Error::QuadratureBudget {
                evaluations: evals,
                estimate: err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = panel(&mut f, lo, mid);
        let (v2, e2) = panel(&mut f, mid, hi);
        evals += 30;
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, QuadratureOptions::default()).unwrap();
        assert_abs_diff_eq!(v, 64.0 / 6.0 - 6.0, epsilon = 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| (20.0 * x).sin(), 0.0, 3.0, QuadratureOptions::default()).unwrap();
        assert_abs_diff_eq!(v, (1.0 - 60f64.cos()) / 20.0, epsilon = 1e-9);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = QuadratureOptions {
            abs_tol: 1e-14,
            max_evals: 40,
        };
        let r = integrate(|x| x.abs().sqrt(), -1.0, 1.0, opts);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }
}
