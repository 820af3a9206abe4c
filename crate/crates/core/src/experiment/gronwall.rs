use crate::error::{Error, Result};

fn check(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::domain(format!("{name} must be finite and nonnegative")));
    }
    Ok(())
}

/// Bound for nonnegative sequences with f_n ≤ g_n + Σ_{k<n} w_k f_k:
/// f_n ≤ g_n + Σ_{k<n} g_k w_k exp(Σ_{j=k+1}^{n−1} w_j).
pub fn discrete_gronwall_bound(g: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    check("g", g)?;
    check("w", w)?;
    if w.len() + 1 < g.len() {
        return Err(Error::domain("w needs at least len(g) − 1 entries"));
    }
    Ok((0..g.len())
        .map(|n| {
            let mut s = g[n];
            let mut tail = 0.0f64;
            for k in (0..n).rev() {
                s += g[k] * w[k] * tail.exp();
                tail += w[k];
            }
            s
        })
        .collect())
}

/// The extremal sequence f_n = g_n + Σ_{k<n} w_k f_k.
pub fn gronwall_recursion(g: &[f64], w: &[f64]) -> Vec<f64> {
    let mut f: Vec<f64> = Vec::with_capacity(g.len());
    for n in 0..g.len() {
        let s: f64 = (0..n).map(|k| w[k] * f[k]).sum();
        f.push(g[n] + s);
    }
    f
}

/// C_k = N_k + R̃ Σ_{j<k} N_j e^{(k+j)(k−j−1)R̃/2}, with C_0 = N_0.
pub fn chained_constants(n: &[f64], r: f64) -> Vec<f64> {
    (0..n.len())
        .map(|k| {
            let s: f64 = (0..k)
                .map(|j| n[j] * (((k + j) * (k - j - 1)) as f64 * r / 2.0).exp())
                .sum();
            n[k] + r * s
        })
        .collect()
}
