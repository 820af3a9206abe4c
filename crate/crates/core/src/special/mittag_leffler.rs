//! Two-parameter Mittag-Leffler function E_{α,β}(z) on the real line.
//!
//! Three routes are combined for z < 0: the Taylor series while its rounding bound
//! certifies the result, the large-argument asymptotic expansion, and in between an
//! integral representation along the real axis (β < 1 + α, larger β reduced by the
//! recurrence E_{α,β}(z) = (E_{α,β−α}(z) − 1/Γ(β−α))/z). [`MittagLeffler`] tabulates the
//! middle band with piecewise Chebyshev interpolants for repeated evaluation.

use std::f64::consts::PI;

use super::gamma::recip_gamma;
use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};

const TOL: f64 = 1e-11;
const KAPPA: f64 = 2e-15;
const MAX_SERIES_TERMS: usize = 1200;

/// Parameters (α, β) with α ∈ (0, 1] and β > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    alpha: f64,
    beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// E_{α,β}(z), relative error ≤ 1e-10 for z ∈ [−1e6, 5].
pub fn mittag_leffler(p: MLParams, z: f64) -> Result<f64> {
    direct(p.alpha, p.beta, z)
}

fn direct(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::domain(format!("non-finite argument {z}")));
    }
    if z == 0.0 {
        return Ok(recip_gamma(beta));
    }
    if alpha == 1.0 {
        return unit_alpha(beta, z);
    }
    if z > 0.0 {
        return series(alpha, beta, z)
            .ok_or_else(|| Error::Precision(format!("series overflow at z = {z}")));
    }
    let x = -z;
    if x.powf(1.0 / alpha) < 12.0 {
        if let Some(v) = series(alpha, beta, z) {
            return Ok(v);
        }
    }
    if let Some(v) = asymptotic(alpha, beta, x).map(|(v, _)| v) {
        return Ok(v);
    }
    band(alpha, beta, x)
}

fn series(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut small = 0;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_SERIES_TERMS {
        let arg = alpha * k as f64 + beta;
        let pw = z.powi(k as i32);
        if !pw.is_finite() {
            return None;
        }
        let term = pw * recip_gamma(arg);
        sum += term;
        abs_sum += term.abs();
        let tiny = term.abs() <= 1e-17 * sum.abs() || term.abs() < 1e-300;
        if tiny && term.abs() <= prev {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
        if term != 0.0 {
            prev = term.abs();
        }
        if k + 1 == MAX_SERIES_TERMS {
            return None;
        }
    }
    (KAPPA * abs_sum <= TOL * sum.abs()).then_some(sum)
}

/// Certified asymptotic expansion at z = −x; also returns the number of terms used.
fn asymptotic(alpha: f64, beta: f64, x: f64) -> Option<(f64, usize)> {
    let y = -1.0 / x;
    let mut terms = Vec::with_capacity(64);
    for k in 1..400usize {
        let t = -recip_gamma(beta - alpha * k as f64) * y.powi(k as i32);
        if !t.is_finite() || t.abs() > 1e250 {
            break;
        }
        terms.push(t);
    }
    let mut sum = 0.0;
    for k in 0..terms.len().saturating_sub(3) {
        sum += terms[k];
        let next = terms[k + 1..k + 4].iter().fold(0.0f64, |m, t| m.max(t.abs()));
        if sum != 0.0 && next <= 0.05 * TOL * sum.abs() {
            return Some((sum, k + 1));
        }
    }
    None
}

fn band(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if beta < 1.0 + alpha - 1e-12 {
        integral(alpha, beta, x)
    } else {
        Ok((band(alpha, beta - alpha, x)? - recip_gamma(beta - alpha)) / (-x))
    }
}

fn integral(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    let q = 1.0 / (1.0 + alpha - beta);
    let s1 = (PI * (1.0 - beta)).sin();
    let s2 = (PI * (1.0 - beta + alpha)).sin();
    let c = (alpha * PI).cos();
    let f = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let s = v.powf(q);
        let sa = s.powf(alpha);
        let den = sa * sa + 2.0 * sa * x * c + x * x;
        (-s).exp() * (sa * s1 + x * s2) / den
    };
    let s_max: f64 = 60.0;
    let v_max = s_max.powf(1.0 / q);
    let mut breaks = vec![0.0];
    let s_peak = x.powf(1.0 / alpha);
    for s in [1.0, s_peak] {
        if s < s_max {
            breaks.push(s.powf(1.0 / q));
        }
    }
    breaks.push(v_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut f = f;
    // cancellation can keep the last digits out of reach; a certified 1e-11 still suffices
    let value = match integrate_with_breaks(&mut f, &breaks, QuadOptions::new(1e-300, 1e-13).with_budget(4000)) {
        Ok(r) => r.value,
        Err(Error::Quadrature { estimate, error, .. }) if error <= 1e-11 * estimate.abs() => estimate,
        Err(e) => return Err(Error::Precision(format!("integral representation: {e}"))),
    };
    Ok(value * q / PI)
}

fn unit_alpha(beta: f64, z: f64) -> Result<f64> {
    if beta == 1.0 {
        return Ok(z.exp());
    }
    if z > 0.0 || z.abs() <= 2.0 {
        if let Some(v) = series(1.0, beta, z) {
            return Ok(v);
        }
    }
    if beta == beta.floor() && beta > 1.0 {
        let prev = unit_alpha(beta - 1.0, z)?;
        return Ok((prev - recip_gamma(beta - 1.0)) / z);
    }
    series(1.0, beta, z).ok_or_else(|| {
        Error::Precision(format!("E_(1,{beta}) at z = {z} cannot be certified"))
    })
}

#[derive(Debug, Clone)]
struct ChebPanel {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl ChebPanel {
    const DEGREE: usize = 18;

    fn fit(a: f64, b: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<Self> {
        let n = Self::DEGREE + 1;
        let vals: Vec<f64> = (0..n)
            .map(|j| {
                let t = (PI * (j as f64 + 0.5) / n as f64).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * t)
            })
            .collect::<Result<_>>()?;
        let coeffs = (0..n)
            .map(|k| {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .sum();
                2.0 * s / n as f64
            })
            .collect();
        Ok(Self { a, b, coeffs })
    }

    fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + 0.5 * self.coeffs[0]
    }
}

/// Tabulated evaluator for a fixed (α, β), intended for hot loops with z ≤ 0.
#[derive(Debug, Clone)]
pub struct MittagLeffler {
    params: MLParams,
    series: Vec<f64>,
    series_limit: f64,
    asym: Vec<f64>,
    asym_limit: f64,
    panels: Vec<ChebPanel>,
}

impl MittagLeffler {
    pub fn new(params: MLParams) -> Result<Self> {
        let (alpha, beta) = (params.alpha, params.beta);
        let mut series_limit = 0.0;
        let mut x: f64 = 0.125;
        while x.powf(1.0 / alpha) < 14.0 {
            if series(alpha, beta, -x).is_none() {
                break;
            }
            series_limit = x;
            x += 0.125;
        }
        let mut coeffs = Vec::new();
        for k in 0..MAX_SERIES_TERMS {
            let c = recip_gamma(alpha * k as f64 + beta);
            coeffs.push(c);
            let reach = (series_limit.max(1.0)).powi(k as i32) * c.abs();
            if k > 4 && reach < 1e-18 * recip_gamma(beta).abs().max(1e-3) {
                break;
            }
        }

        let (asym_limit, asym_terms) = if alpha == 1.0 {
            (f64::INFINITY, 0)
        } else {
            let mut x = series_limit.max(0.5);
            loop {
                if let Some((_, k)) = asymptotic(alpha, beta, x) {
                    let ok = (1..=4).all(|j| asymptotic(alpha, beta, x * 1.1f64.powi(j)).is_some());
                    if ok {
                        break (x, k);
                    }
                }
                x *= 1.05;
                if x > 1e8 {
                    return Err(Error::Precision(format!(
                        "no certified asymptotic regime for ({alpha}, {beta})"
                    )));
                }
            }
        };
        let asym: Vec<f64> = (1..=asym_terms)
            .map(|k| recip_gamma(beta - alpha * k as f64))
            .collect();

        let mut panels = Vec::new();
        if alpha < 1.0 && asym_limit > series_limit {
            let f = |x: f64| direct(alpha, beta, -x);
            let mut stack = Vec::new();
            let mut a = series_limit;
            while a < asym_limit {
                let b = (a * 1.5).max(a + 0.5).min(asym_limit);
                stack.push((a, b));
                a = b;
            }
            stack.reverse();
            while let Some((a, b)) = stack.pop() {
                let panel = ChebPanel::fit(a, b, &f)?;
                let mut worst: f64 = 0.0;
                for t in [0.13, 0.41, 0.77, 0.95] {
                    let xx = a + t * (b - a);
                    let want = f(xx)?;
                    worst = worst.max(((panel.eval(xx) - want) / want).abs());
                }
                if worst > 1e-12 && b - a > 1e-3 {
                    let m = 0.5 * (a + b);
                    stack.push((m, b));
                    stack.push((a, m));
                } else {
                    panels.push(panel);
                }
            }
        }
        Ok(Self {
            params,
            series: coeffs,
            series_limit,
            asym,
            asym_limit,
            panels,
        })
    }

    pub fn params(&self) -> MLParams {
        self.params
    }

    /// E_{α,β}(z); falls back to the direct evaluator outside the tabulated range.
    pub fn eval(&self, z: f64) -> f64 {
        let x = -z;
        if (0.0..=self.series_limit).contains(&x) {
            let mut acc = 0.0;
            for &c in self.series.iter().rev() {
                acc = acc * z + c;
            }
            return acc;
        }
        if x >= self.asym_limit {
            let y = -1.0 / x;
            let mut acc = 0.0;
            for &c in self.asym.iter().rev() {
                acc = (acc + c) * y;
            }
            return -acc;
        }
        if x > self.series_limit {
            let i = self.panels.partition_point(|p| p.b < x);
            if let Some(p) = self.panels.get(i) {
                return p.eval(x);
            }
        }
        mittag_leffler(self.params, z).unwrap_or(f64::NAN)
    }
}
