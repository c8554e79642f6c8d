// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Gradient descent with Armijo backtracking. Each line search starts from
/// the Barzilai-Borwein step of the previous move.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentOptions {
    pub iterations: usize,
    /// First trial step.
    pub learning_rate: f64,
    /// Stop as soon as the objective is at or below this value.
    pub tolerance: f64,
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo: f64,
    /// Give up once a trial step shrinks below this.
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self { iterations: 500, learning_rate: 0.1, tolerance: 1e-8, armijo: 1e-4, min_step: 1e-14, max_step: 1e3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub value: f64,
    /// Secondary figure the objective reports alongside its value.
    pub aux: f64,
    /// Accepted step length; zero for the starting point.
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Row 0 is the starting point.
    pub trace: Vec<TraceRow>,
    pub converged: bool,
}

/// Value, gradient and an auxiliary figure of an objective at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub aux: f64,
}

/// Minimise `f`. Every accepted step strictly lowers the value.
pub fn minimize<F>(mut f: F, x0: Vec<f64>, opts: &DescentOptions) -> Result<DescentResult>
where
    F: FnMut(&[f64]) -> Result<Evaluation>,
{
    if !(opts.learning_rate > 0.0) || !(opts.min_step > 0.0) {
        return Err(Error::InvalidArgument("learning rate and minimum step must be positive".into()));
    }
    let mut x = x0;
    let first = f(&x)?;
    check_finite(first.value, &first.gradient)?;
    let (mut value, mut grad) = (first.value, first.gradient);
    let mut trace = vec![TraceRow { iteration: 0, value, aux: first.aux, step: 0.0 }];
    let mut step = opts.learning_rate;
    for iteration in 1..=opts.iterations {
        if value <= opts.tolerance {
            break;
        }
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2 == 0.0 {
            break;
        }
        let mut accepted = None;
        let mut s = step;
        while s >= opts.min_step {
            let trial: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - s * gi).collect();
            let e = f(&trial)?;
            if e.value.is_finite() && e.value <= value - opts.armijo * s * g2 {
                check_finite(e.value, &e.gradient)?;
                accepted = Some((trial, e));
                break;
            }
            s /= 2.0;
        }
        let Some((nx, e)) = accepted else { break };
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..x.len() {
            let dx = nx[i] - x[i];
            ss += dx * dx;
            sy += dx * (e.gradient[i] - grad[i]);
        }
        x = nx;
        value = e.value;
        grad = e.gradient;
        trace.push(TraceRow { iteration, value, aux: e.aux, step: s });
        step = if sy > 0.0 { ss / sy } else { 2.0 * s };
        step = step.clamp(opts.min_step, opts.max_step);
    }
    Ok(DescentResult { converged: value <= opts.tolerance, x, value, trace })
}

fn check_finite(value: f64, grad: &[f64]) -> Result<()> {
    if !value.is_finite() || grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("objective or gradient".into()));
    }
    Ok(())
}
