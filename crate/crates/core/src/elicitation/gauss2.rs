//! Least-squares fit of the two-term Gaussian shape to sampled memberships.
//!
//! Levenberg-Marquardt on `r(theta) = g_theta(x) - mu` with the analytic
//! Jacobian. Widths are optimized through their logarithm so they stay
//! positive.

use nalgebra::{Matrix6, Vector6};

use crate::error::{Error, Result};
use crate::membership::Gauss2Params;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub max_iter: usize,
    /// Stop when an accepted step lowers the cost by less than this fraction.
    pub rel_cost_tol: f64,
    /// Stop when the step norm (in optimizer coordinates) drops below this.
    pub step_tol: f64,
    pub initial_damping: f64,
    /// A second run from this damping; the lower-cost result is kept.
    pub alternate_damping: Option<f64>,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iter: 1000,
            rel_cost_tol: 1e-9,
            step_tol: 1e-10,
            initial_damping: 1e-3,
            alternate_damping: Some(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gauss2Fit {
    pub params: Gauss2Params,
    /// Root-mean-square of the final residuals.
    pub residual: f64,
    pub initial_cost: f64,
    /// Half the sum of squared residuals.
    pub final_cost: f64,
    pub converged: bool,
    pub iterations: usize,
}

const MIN_POINTS: usize = 6;

fn to_theta(p: &Gauss2Params) -> Vector6<f64> {
    Vector6::new(
        p.alpha1,
        p.beta1,
        p.gamma1.ln(),
        p.alpha2,
        p.beta2,
        p.gamma2.ln(),
    )
}

fn from_theta(t: &Vector6<f64>) -> Gauss2Params {
    Gauss2Params {
        alpha1: t[0],
        beta1: t[1],
        gamma1: t[2].exp(),
        alpha2: t[3],
        beta2: t[4],
        gamma2: t[5].exp(),
    }
}

fn residuals(p: &Gauss2Params, xs: &[f64], mus: &[f64]) -> Vec<f64> {
    xs.iter().zip(mus).map(|(&x, &mu)| p.raw(x) - mu).collect()
}

fn cost(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

/// Jacobian row with respect to `(alpha, beta, ln gamma)` for both terms.
fn jacobian_row(p: &Gauss2Params, x: f64) -> [f64; 6] {
    let mut row = [0.0; 6];
    for (off, (a, b, g)) in [(p.alpha1, p.beta1, p.gamma1), (p.alpha2, p.beta2, p.gamma2)]
        .into_iter()
        .enumerate()
    {
        let t = (x - b) / g;
        let e = (-t * t).exp();
        row[3 * off] = e;
        row[3 * off + 1] = a * e * 2.0 * t / g;
        row[3 * off + 2] = a * e * 2.0 * t * t;
    }
    row
}

/// `J^T J` and `J^T r`, accumulated row by row.
fn normal_equations(p: &Gauss2Params, xs: &[f64], r: &[f64]) -> (Matrix6<f64>, Vector6<f64>) {
    let mut jtj = [[0.0; 6]; 6];
    let mut g = [0.0; 6];
    for (&x, &ri) in xs.iter().zip(r) {
        let row = jacobian_row(p, x);
        for a in 0..6 {
            g[a] += row[a] * ri;
            for b in a..6 {
                jtj[a][b] += row[a] * row[b];
            }
        }
    }
    let jtj = Matrix6::from_fn(|a, b| if a <= b { jtj[a][b] } else { jtj[b][a] });
    (jtj, Vector6::from(g))
}

/// Fits the two-term Gaussian to `(xs, mus)` starting from `init`.
pub fn fit_gauss2(
    xs: &[f64],
    mus: &[f64],
    init: Gauss2Params,
    config: &FitConfig,
) -> Result<Gauss2Fit> {
    if xs.len() != mus.len() {
        return Err(Error::InvalidParameter(format!(
            "{} abscissae but {} memberships",
            xs.len(),
            mus.len()
        )));
    }
    if xs.len() < MIN_POINTS {
        return Err(Error::DatasetTooSmall {
            len: xs.len(),
            needed: MIN_POINTS,
        });
    }
    if let Some(bad) = mus.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::InvalidParameter(format!(
            "membership {bad} is outside [0, 1]"
        )));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("abscissae must be finite".into()));
    }
    if !(init.gamma1 > 0.0 && init.gamma2 > 0.0) {
        return Err(Error::InvalidParameter(
            "initial widths must be positive".into(),
        ));
    }

    let init = split_coincident(init);
    let first = levenberg_marquardt(xs, mus, init, config, config.initial_damping);
    let best = match config.alternate_damping {
        Some(lambda) => {
            let second = levenberg_marquardt(xs, mus, init, config, lambda);
            if second.cost < first.cost {
                second
            } else {
                first
            }
        }
        None => first,
    };

    if !best.accepted_any && best.initial_cost > 0.0 && best.gradient_norm > 1e-8 {
        return Err(Error::FitFailed(
            "no step reduced the cost from the initial guess".into(),
        ));
    }

    Ok(Gauss2Fit {
        params: best.params,
        residual: (2.0 * best.cost / xs.len() as f64).sqrt(),
        initial_cost: best.initial_cost,
        final_cost: best.cost,
        converged: best.converged,
        iterations: best.iterations,
    })
}

/// Two identical terms are exchangeable, so every gradient step keeps them
/// identical. Nudging their centers apart lets the fit use both.
fn split_coincident(mut p: Gauss2Params) -> Gauss2Params {
    if p.alpha1 == p.alpha2 && p.beta1 == p.beta2 && p.gamma1 == p.gamma2 {
        let offset = 0.01 * p.gamma1;
        p.beta1 -= offset;
        p.beta2 += offset;
    }
    p
}

struct Run {
    params: Gauss2Params,
    initial_cost: f64,
    cost: f64,
    converged: bool,
    accepted_any: bool,
    gradient_norm: f64,
    iterations: usize,
}

fn levenberg_marquardt(
    xs: &[f64],
    mus: &[f64],
    init: Gauss2Params,
    config: &FitConfig,
    initial_damping: f64,
) -> Run {
    let mut theta = to_theta(&init);
    let mut params = init;
    let mut r = residuals(&params, xs, mus);
    let initial_cost = cost(&r);
    let mut current = initial_cost;
    let mut lambda = initial_damping;
    let mut converged = current == 0.0;
    let mut accepted_any = false;
    let mut iterations = 0;
    let mut gradient_norm = f64::INFINITY;

    while !converged && iterations < config.max_iter {
        iterations += 1;
        let (jtj, g) = normal_equations(&params, xs, &r);
        gradient_norm = g.amax();
        if gradient_norm == 0.0 {
            converged = true;
            break;
        }

        // Raise damping until a step lowers the cost or the steps become negligible.
        loop {
            let mut lhs = jtj;
            for d in 0..6 {
                // Marquardt scaling with a floor for columns that vanish
                lhs[(d, d)] += lambda * (jtj[(d, d)] + 1e-12);
            }
            let step = match lhs.cholesky() {
                Some(ch) => ch.solve(&(-g)),
                None => {
                    lambda *= 10.0;
                    if lambda > 1e16 {
                        converged = true;
                        break;
                    }
                    continue;
                }
            };
            let candidate = theta + step;
            let cand_params = from_theta(&candidate);
            let cand_r = residuals(&cand_params, xs, mus);
            let cand_cost = cost(&cand_r);
            let step_norm = step.norm();
            let widths_ok = cand_params.gamma1 > 0.0
                && cand_params.gamma2 > 0.0
                && cand_params.gamma1.is_finite()
                && cand_params.gamma2.is_finite();
            if widths_ok && cand_cost.is_finite() && cand_cost < current {
                let rel = (current - cand_cost) / current;
                theta = candidate;
                params = cand_params;
                r = cand_r;
                current = cand_cost;
                accepted_any = true;
                lambda = (lambda / 3.0).max(1e-15);
                if rel < config.rel_cost_tol || step_norm < config.step_tol || current == 0.0 {
                    converged = true;
                }
                break;
            }
            if step_norm < config.step_tol {
                converged = true;
                break;
            }
            lambda *= 4.0;
            if lambda > 1e16 {
                converged = true;
                break;
            }
        }
    }

    Run {
        params,
        initial_cost,
        cost: current,
        converged,
        accepted_any,
        gradient_norm,
        iterations,
    }
}
