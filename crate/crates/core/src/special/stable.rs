//! One-sided stable density φ_q, the transformed density ϕ_q(ξ) = q⁻¹ξ^{−1−1/q}φ_q(ξ^{−1/q}),
//! and the subordination integrals defining the solution operators.

use std::f64::consts::PI;

use super::gamma::ln_gamma_pos;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_with_breaks, QuadOptions};

/// Selects the resolvent family: T uses E_{α,1}, T̂ uses E_{α,α}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    T,
    THat,
}

fn check_q(q: f64, xi: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("stable index must lie in (0, 1), got {q}")));
    }
    if !(xi > 0.0) || xi.is_nan() {
        return Err(Error::domain(format!("density argument must be positive, got {xi}")));
    }
    Ok(())
}

/// φ_q(ξ), absolute error ≤ 1e-10.
pub fn stable_density(q: f64, xi: f64) -> Result<f64> {
    check_q(q, xi)?;
    if xi.is_infinite() {
        return Ok(0.0);
    }
    if let Some(v) = density_series(q, xi) {
        return Ok(v.max(0.0));
    }
    kanter(q, xi)
}

/// (1/π) Σ (−1)^{n−1} ξ^{−qn−1} Γ(nq+1)/n! sin(nπq), with a rounding certificate.
fn density_series(q: f64, xi: f64) -> Option<f64> {
    let lx = xi.ln();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut quiet = 0;
    for n in 1..5000usize {
        let nf = n as f64;
        let lg1 = ln_gamma_pos(nf * q + 1.0);
        let lg2 = ln_gamma_pos(nf + 1.0);
        let expo = lg1 - lg2 - (nf * q + 1.0) * lx;
        if expo > 700.0 {
            return None;
        }
        let mag = expo.exp() / PI;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * mag * (nf * PI * q).sin();
        sum += term;
        err += mag * (lg1.abs() + lg2.abs() + (nf * q + 1.0) * lx.abs() + 8.0) * f64::EPSILON;
        if mag <= 1e-16 * sum.abs() || mag < 1e-300 {
            quiet += 1;
            if quiet >= 3 {
                return (err <= 1e-12).then_some(sum);
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// Kanter's integral representation, used where the series loses digits.
fn kanter(q: f64, x: f64) -> Result<f64> {
    let r = 1.0 / (1.0 - q);
    let lc = -q * r * x.ln();
    let f = |th: f64| {
        let la = (q * (q * th).sin().ln() + (1.0 - q) * ((1.0 - q) * th).sin().ln()
            - th.sin().ln())
            * r;
        let e = la - (lc + la).exp();
        if e < -745.0 {
            0.0
        } else {
            e.exp()
        }
    };
    let pref = q * r / PI * (-r * x.ln()).exp();
    if pref == 0.0 {
        return Ok(0.0);
    }
    let mut f = f;
    let est = integrate_with_breaks(
        &mut f,
        &[0.0, 0.5 * PI, 0.9 * PI, PI],
        QuadOptions::new(1e-13 / pref.max(1e-300), 1e-12).with_budget(4000),
    )
    .map_err(|e| Error::Precision(format!("stable density at {x}: {e}")))?;
    Ok((pref * est.value).max(0.0))
}

/// ϕ_q(ξ) = (1/q) ξ^{−1−1/q} φ_q(ξ^{−1/q}).
pub fn varphi_density(q: f64, xi: f64) -> Result<f64> {
    check_q(q, xi)?;
    let arg = xi.powf(-1.0 / q);
    if arg == 0.0 {
        return Ok(0.0);
    }
    if arg.is_infinite() {
        return Ok(1.0 / super::gamma::gamma_real(1.0 - q));
    }
    let phi = stable_density(q, arg)?;
    Ok(xi.powf(-1.0 - 1.0 / q) * phi / q)
}

/// Upper integration limit beyond which ϕ_α is negligible.
fn varphi_support(alpha: f64) -> Result<f64> {
    let mut xi: f64 = 1.0;
    loop {
        if varphi_density(alpha, xi)? < 1e-22 {
            return Ok(xi);
        }
        xi *= 1.25;
        if xi > 1e4 {
            return Err(Error::Precision("density tail does not decay".into()));
        }
    }
}

/// ∫₀^∞ ϕ_α(ξ) e^{−μ t^α ξ} dξ (kind T) or α∫₀^∞ ξ ϕ_α(ξ) e^{−μ t^α ξ} dξ (kind T̂).
///
/// `budget` caps the number of adaptive subdivisions.
pub fn subordination_oracle(alpha: f64, mu: f64, t: f64, kind: OperatorKind, budget: usize) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (1/2, 1), got {alpha}")));
    }
    if !(mu >= 0.0) || !(t >= 0.0) {
        return Err(Error::domain("mu and t must be nonnegative"));
    }
    let rate = mu * t.powf(alpha);
    let upper = varphi_support(alpha)?;
    let integrand = |xi: f64| {
        let d = varphi_density(alpha, xi).unwrap_or(f64::NAN);
        let w = (-rate * xi).exp();
        match kind {
            OperatorKind::T => d * w,
            OperatorKind::THat => alpha * xi * d * w,
        }
    };
    let est = integrate(integrand, 0.0, upper, QuadOptions::new(1e-12, 1e-10).with_budget(budget))?;
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_to_infinity;

    #[test]
    fn levy_closed_form() {
        for &x in &[0.05f64, 0.2, 1.0, 3.0, 40.0] {
            let want = (-0.25 / x).exp() / (2.0 * PI.sqrt() * x.powf(1.5));
            let got = stable_density(0.5, x).unwrap();
            assert!((got - want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn frozen_density_values() {
        let cases = [
            (0.7, 0.1, 3.621_736_607_138_865_085e-11),
            (0.7, 1.0, 0.387_395_010_146_592_490_352_219_8),
            (0.7, 3.0, 0.050_000_904_020_222_366_946_180_56),
            (0.6, 0.5, 0.678_015_889_334_895_212_612_806_9),
            (0.9, 1.2, 0.430_830_684_789_202_264_075_564),
        ];
        for (q, x, want) in cases {
            let got = stable_density(q, x).unwrap();
            assert!((got - want).abs() < 1e-10, "phi_{q}({x}) = {got}, want {want}");
        }
        let cases = [
            (0.7, 0.5, 0.471_850_995_007_771_122_471_227_2),
            (0.7, 2.0, 0.249_128_858_065_195_959_838_853_8),
            (0.8, 1.0, 0.682_033_699_356_930_926_448_557_4),
            (0.6, 0.01, 0.452_533_297_564_634_227_500_794_4),
        ];
        for (q, x, want) in cases {
            let got = varphi_density(q, x).unwrap();
            assert!((got - want).abs() < 1e-10, "varphi_{q}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn levy_transform_value() {
        // ϕ_{1/2}(ξ) = e^{−ξ²/4}/√π
        let got = varphi_density(0.5, 1.0).unwrap();
        assert!((got - (-0.25f64).exp() / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn masses_and_first_moment() {
        let mass = integrate_to_infinity(|x| stable_density(0.7, x).unwrap(), 0.0, QuadOptions::new(1e-11, 1e-11)).unwrap();
        assert!((mass.value - 1.0).abs() < 1e-8, "{}", mass.value);
        for &q in &[0.6, 0.7] {
            let m0 = integrate(|x| varphi_density(q, x).unwrap(), 0.0, 12.0, QuadOptions::new(1e-12, 1e-12)).unwrap();
            assert!((m0.value - 1.0).abs() < 1e-8);
        }
        let m1 = integrate(|x| x * varphi_density(0.7, x).unwrap(), 0.0, 12.0, QuadOptions::new(1e-12, 1e-12)).unwrap();
        assert!((m1.value - 1.0 / crate::special::gamma(1.7).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn domain_errors() {
        assert!(stable_density(0.7, 0.0).is_err());
        assert!(stable_density(1.0, 1.0).is_err());
        assert!(varphi_density(0.7, -1.0).is_err());
    }

    #[test]
    fn oracle_special_points() {
        let one = subordination_oracle(0.7, 3.0, 0.0, OperatorKind::T, 500).unwrap();
        assert!((one - 1.0).abs() < 1e-8);
        let hat = subordination_oracle(0.8, 0.0, 1.0, OperatorKind::THat, 500).unwrap();
        assert!((hat - 1.0 / crate::special::gamma(0.8).unwrap()).abs() < 1e-8);
        let v = subordination_oracle(0.7, 1.0, 1.0, OperatorKind::T, 500).unwrap();
        assert!((v - 0.399_611_978_115_599_384).abs() < 1e-7);
    }
}
