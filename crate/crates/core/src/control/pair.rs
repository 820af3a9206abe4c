//! Kernel-pair integrals
//! ∫₀^L w^{e_s} E_{α,α}(λ_i w^α) (d + w)^{e_o} E_{α,α}(μ_j (d + w)^α) dw
//! on a mesh graded geometrically (ratio 1/2) toward w = 0, with Gauss–Legendre panels and
//! a series treatment of the innermost panel. Gramians, control convolutions and control
//! energies are all instances, which keeps them mutually consistent.

use nalgebra::DMatrix;

use crate::quad::GaussLegendre;
use crate::special::recip_gamma;
use crate::special::MittagLeffler;

pub(crate) const GAUSS_POINTS: usize = 12;

#[derive(Debug, Clone, Copy)]
pub struct PairSide<'a> {
    pub eigenvalues: &'a [f64],
    pub exponent: f64,
}

#[derive(Debug, Clone)]
pub struct PairQuadrature {
    alpha: f64,
    gl: GaussLegendre,
}

/// Mesh description returned with a pair integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMesh {
    pub levels: usize,
    pub refine: usize,
    pub innermost: f64,
}

impl PairQuadrature {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            gl: GaussLegendre::new(GAUSS_POINTS),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Matrix with rows indexed by `s.eigenvalues` and columns by `o.eigenvalues`.
    pub fn integrate(
        &self,
        ml: &MittagLeffler,
        s: PairSide,
        o: PairSide,
        length: f64,
        offset: f64,
        refine: usize,
    ) -> (DMatrix<f64>, PairMesh) {
        let (ns, no) = (s.eigenvalues.len(), o.eigenvalues.len());
        let mut out = DMatrix::zeros(ns, no);
        if !(length > 0.0) {
            return (
                out,
                PairMesh {
                    levels: 0,
                    refine,
                    innermost: 0.0,
                },
            );
        }
        let a = self.alpha;
        let lam_max = |l: &[f64]| l.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        let mut eps = if offset > 0.0 {
            (0.5 / lam_max(s.eigenvalues)).powf(1.0 / a).min(1e-6 * offset)
        } else {
            (0.5 / lam_max(s.eigenvalues).max(lam_max(o.eigenvalues))).powf(1.0 / a)
        };
        eps = eps.min(length);
        let levels = ((length / eps).log2().ceil().max(0.0)) as usize;
        let inner = length * 0.5f64.powi(levels as i32);

        let mut fs = vec![0.0; ns];
        let mut fo = vec![0.0; no];
        let mut hi = length;
        for _ in 0..levels {
            let lo = 0.5 * hi;
            let h = (hi - lo) / refine as f64;
            for r in 0..refine {
                let pa = lo + r as f64 * h;
                for (w, wt) in self.gl.mapped(pa, pa + h) {
                    let ws = w.powf(s.exponent) * wt;
                    let wa = w.powf(a);
                    for (f, l) in fs.iter_mut().zip(s.eigenvalues) {
                        *f = ws * ml.eval(l * wa);
                    }
                    let u = offset + w;
                    let uo = u.powf(o.exponent);
                    let ua = u.powf(a);
                    for (f, l) in fo.iter_mut().zip(o.eigenvalues) {
                        *f = uo * ml.eval(l * ua);
                    }
                    for j in 0..no {
                        let c = fo[j];
                        for i in 0..ns {
                            out[(i, j)] += fs[i] * c;
                        }
                    }
                }
            }
            hi = lo;
        }
        self.innermost(&mut out, ml, s, o, inner, offset);
        (
            out,
            PairMesh {
                levels,
                refine,
                innermost: inner,
            },
        )
    }

    fn innermost(
        &self,
        out: &mut DMatrix<f64>,
        ml: &MittagLeffler,
        s: PairSide,
        o: PairSide,
        eps: f64,
        offset: f64,
    ) {
        let a = self.alpha;
        let coeffs = |lam: f64| -> Vec<f64> {
            let mut c = Vec::new();
            for k in 0..60 {
                let v = lam.powi(k) * recip_gamma(a * k as f64 + a);
                c.push(v);
                if k > 2 && (v * eps.powf(a * k as f64)).abs() < 1e-20 {
                    break;
                }
            }
            c
        };
        if offset > 0.0 {
            let ea = eps.powf(a);
            for (i, &ls) in s.eigenvalues.iter().enumerate() {
                let c = coeffs(ls);
                let mut sum = 0.0;
                for (k, ck) in c.iter().enumerate() {
                    let e = s.exponent + 1.0 + a * k as f64;
                    sum += ck * eps.powf(s.exponent + 1.0) * ea.powi(k as i32) / e;
                }
                for (j, &lo) in o.eigenvalues.iter().enumerate() {
                    let g0 = offset.powf(o.exponent) * ml.eval(lo * offset.powf(a));
                    out[(i, j)] += sum * g0;
                }
            }
        } else {
            let e0 = s.exponent + o.exponent + 1.0;
            let ea = eps.powf(a);
            let co: Vec<Vec<f64>> = o.eigenvalues.iter().map(|&l| coeffs(l)).collect();
            for (i, &ls) in s.eigenvalues.iter().enumerate() {
                let cs = coeffs(ls);
                for (j, cj) in co.iter().enumerate() {
                    let mut sum = 0.0;
                    for (k, ck) in cs.iter().enumerate() {
                        for (l, cl) in cj.iter().enumerate() {
                            let m = k + l;
                            sum += ck * cl * ea.powi(m as i32) / (e0 + a * m as f64);
                        }
                    }
                    out[(i, j)] += sum * eps.powf(e0);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::MLParams;

    fn ml(a: f64) -> MittagLeffler {
        MittagLeffler::new(MLParams::new(a, a).unwrap()).unwrap()
    }

    #[test]
    fn matches_high_precision_references() {
        let a = 0.75;
        let q = PairQuadrature::new(a);
        let e = ml(a);
        let side = |l: &'static [f64], x: f64| PairSide { eigenvalues: l, exponent: x };
        let (m, _) = q.integrate(&e, side(&[-1.0], a - 1.0), side(&[-1.0], a - 1.0), 1.0, 0.0, 1);
        assert!((m[(0, 0)] - 0.606_028_814_328_462_730_087_350_6).abs() < 1e-12, "{}", m[(0, 0)]);
        let (m, _) = q.integrate(&e, side(&[-1.0], a - 1.0), side(&[-1.0], 0.0), 1.0, 0.0, 1);
        assert!((m[(0, 0)] - 0.312_567_905_889_900_498_716_690_1).abs() < 1e-12);

        let a = 0.7;
        let q = PairQuadrature::new(a);
        let e = ml(a);
        let (m, _) = q.integrate(&e, side(&[-4.0], a - 1.0), side(&[-1.0], a - 1.0), 0.3, 0.05, 1);
        assert!((m[(0, 0)] - 0.215_129_327_180_205_087_538_195_8).abs() < 1e-11, "{}", m[(0, 0)]);
        let (m, _) = q.integrate(&e, side(&[-1.0], 0.0), side(&[-9.0], a - 1.0), 0.3, 0.05, 1);
        assert!((m[(0, 0)] - 0.019_299_127_873_583_936_960_683_03).abs() < 1e-11, "{}", m[(0, 0)]);
        let (m, _) = q.integrate(&e, side(&[-16.0, -4.0], a - 1.0), side(&[-4.0], a - 1.0), 0.35, 0.0, 1);
        assert!((m[(0, 0)] - 0.203_867_574_114_100_614_367_035_2).abs() < 1e-12, "{}", m[(0, 0)]);
    }

    #[test]
    fn refinement_changes_little() {
        let a = 0.7;
        let q = PairQuadrature::new(a);
        let e = ml(a);
        let lam: Vec<f64> = (1..=8).map(|n| -((n * n) as f64)).collect();
        let s = PairSide { eigenvalues: &lam, exponent: a - 1.0 };
        for &d in &[0.0, 1e-3, 0.2] {
            let (m1, _) = q.integrate(&e, s, s, 0.4, d, 1);
            let (m2, _) = q.integrate(&e, s, s, 0.4, d, 2);
            let diff = (&m1 - &m2).amax();
            assert!(diff < 1e-11, "d={d}: {diff}");
        }
    }
}
