//! High-order Taylor integration of the linear ODEs of [`LinearOde`] away
//! from the origin, with dense output.
//!
//! Multiplying s·𝔈ψ + (V − E)ψ = 0 by xⁿ gives Σ_k P_k(x) ψ^{(k)} = 0 with
//! polynomial coefficients; around each centre the Taylor coefficients follow
//! from a linear recursion, so every step is exact up to the truncated tail.

use crate::error::{QesError, Result};
use crate::ode::LinearOde;
use crate::rational::q_f64;

/// Taylor order of every step.
pub const TAYLOR_ORDER: usize = 30;

/// Σ_k P_k(x) ψ^{(k)} = 0, P_k given by ascending monomial coefficients.
#[derive(Clone, Debug)]
pub struct PolyOde {
    pub order: usize,
    pub p: Vec<Vec<f64>>,
}

impl PolyOde {
    /// The xⁿ-multiplied form of `ode` at energy `e`.
    pub fn new(ode: &LinearOde, e: f64) -> Self {
        let n = ode.order;
        let s = ode.sign as f64;
        let c = ode.euler_coeffs();
        let mut p: Vec<Vec<f64>> = (0..=n)
            .map(|k| {
                let mut v = vec![0.0; k + 1];
                v[k] = s * q_f64(&c[k]);
                v
            })
            .collect();
        let top = ode.top_power() as usize;
        let p0 = &mut p[0];
        p0.resize(n + top + 1, 0.0);
        p0[n] -= e;
        for t in &ode.potential {
            p0[n + t.power as usize] += q_f64(&t.coeff);
        }
        PolyOde { order: n, p }
    }

    /// Coefficients of each P_k(xc + t) in powers of t.
    fn shifted(&self, xc: f64) -> Vec<Vec<f64>> {
        self.p
            .iter()
            .map(|poly| {
                // repeated synthetic division (Taylor shift)
                let mut a = poly.clone();
                let d = a.len();
                for i in 0..d {
                    for j in (i..d - 1).rev() {
                        a[j] += xc * a[j + 1];
                    }
                }
                a
            })
            .collect()
    }

    /// Taylor coefficients y_0..=y_N about xc from the initial derivatives.
    fn taylor(&self, a: &[Vec<f64>], derivs: &[f64], nterms: usize) -> Vec<f64> {
        let n = self.order;
        let mut y = vec![0.0; nterms + 1];
        let mut fact = 1.0;
        for k in 0..n {
            if k > 0 {
                fact *= k as f64;
            }
            y[k] = derivs[k] / fact;
        }
        let lead = a[n][0];
        for j in 0..=nterms.saturating_sub(n) {
            // coefficient of t^j, excluding the unknown y_{j+n} term
            let mut acc = 0.0;
            for (k, ak) in a.iter().enumerate() {
                for (i, aki) in ak.iter().enumerate() {
                    if i > j || *aki == 0.0 || (k == n && i == 0) {
                        continue;
                    }
                    let jp = j - i;
                    acc += aki * falling_up(jp, k) * y[jp + k];
                }
            }
            y[j + n] = -acc / (lead * falling_up(j, n));
        }
        y
    }
}

/// (j+k)!/j!.
fn falling_up(j: usize, k: usize) -> f64 {
    (1..=k).map(|i| (j + i) as f64).product()
}

/// One Taylor segment: solutions' coefficients about `xc`, valid for
/// t between 0 and `h` (signed).
#[derive(Clone, Debug)]
struct Segment {
    xc: f64,
    h: f64,
    coeffs: Vec<Vec<f64>>,
}

/// Integrated solutions with dense output over the covered interval.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub order: usize,
    pub start: f64,
    pub end: f64,
    segments: Vec<Segment>,
    final_states: Vec<Vec<f64>>,
}

fn eval_segment(coeffs: &[f64], t: f64, nder: usize) -> Vec<f64> {
    (0..nder)
        .map(|k| {
            let mut acc = 0.0;
            for j in (k..coeffs.len()).rev() {
                acc = acc * t + coeffs[j] * falling_up(j - k, k);
            }
            acc
        })
        .collect()
}

impl Trajectory {
    /// Derivatives 0..order of every solution at the end point.
    pub fn end_states(&self) -> &[Vec<f64>] {
        &self.final_states
    }

    /// Derivatives 0..order of every solution at x (inside the interval).
    pub fn states_at(&self, x: f64) -> Result<Vec<Vec<f64>>> {
        let (lo, hi) = if self.start < self.end {
            (self.start, self.end)
        } else {
            (self.end, self.start)
        };
        let tol = 1e-12 * hi.abs().max(1.0);
        if x < lo - tol || x > hi + tol {
            return Err(QesError::Integration(format!(
                "dense output requested at {x} outside [{lo}, {hi}]"
            )));
        }
        let seg = self
            .segments
            .iter()
            .find(|s| {
                let t = x - s.xc;
                t * s.h.signum() >= -tol && t.abs() <= s.h.abs() + tol
            })
            .ok_or_else(|| QesError::Integration(format!("no segment covers {x}")))?;
        let t = x - seg.xc;
        Ok(seg
            .coeffs
            .iter()
            .map(|c| eval_segment(c, t, self.order))
            .collect())
    }
}

/// Integrate the solutions with initial derivative vectors `states` (each of
/// length n) from `xa` to `xb` (either direction, both > 0) to relative
/// accuracy `tol` per step.
pub fn integrate(ode: &PolyOde, states: &[Vec<f64>], xa: f64, xb: f64, tol: f64, dense: bool) -> Result<Trajectory> {
    if xa <= 0.0 || xb <= 0.0 {
        return Err(QesError::Integration("the interval must avoid the origin".into()));
    }
    let n = ode.order;
    let dir = (xb - xa).signum();
    let nt = TAYLOR_ORDER;
    let mut x = xa;
    let mut cur: Vec<Vec<f64>> = states.to_vec();
    let mut segments = Vec::new();
    let mut steps = 0usize;
    while (xb - x) * dir > 0.0 {
        steps += 1;
        if steps > 200_000 {
            return Err(QesError::Integration(format!("step budget exhausted at x = {x}")));
        }
        let a = ode.shifted(x);
        let coeffs: Vec<Vec<f64>> = cur.iter().map(|d| ode.taylor(&a, d, nt)).collect();
        // step size from the tail of each series
        let mut h = 0.5 * x;
        for c in &coeffs {
            let norm = c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm == 0.0 {
                continue;
            }
            for j in [nt - 1, nt] {
                let cj = c[j].abs();
                if cj > 0.0 {
                    h = h.min(0.8 * (tol * norm / cj).powf(1.0 / j as f64));
                }
            }
        }
        if !h.is_finite() || h <= 1e-14 * x {
            return Err(QesError::Integration(format!("step size collapsed at x = {x}")));
        }
        let remaining = (xb - x).abs();
        let last = h >= remaining;
        let hs = dir * h.min(remaining);
        cur = coeffs.iter().map(|c| eval_segment(c, hs, n)).collect();
        if cur.iter().flatten().any(|v| !v.is_finite()) {
            return Err(QesError::Integration(format!("overflow near x = {x}")));
        }
        if dense {
            segments.push(Segment { xc: x, h: hs, coeffs });
        }
        x = if last { xb } else { x + hs };
    }
    Ok(Trajectory {
        order: n,
        start: xa,
        end: xb,
        segments,
        final_states: cur,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SexticProblem;
    use crate::rational::qi;

    #[test]
    fn harmonic_like_exact_solution() {
        // ψ = exp(−x⁴/4) solves −ψ″ + (x⁶ − 3x²)ψ = 0 (l = −1: no centrifugal term)
        let p = SexticProblem::new(qi(-3), qi(-1));
        let ode = PolyOde::new(&LinearOde::sextic(&p), 0.0);
        let f = |x: f64| (-x.powi(4) / 4.0).exp();
        let df = |x: f64| -x.powi(3) * f(x);
        // forwards the companion solution grows like e^{x⁴/4}, amplifying
        // round-off by e^{x⁴/2}: stop where that factor is still modest
        let tr = integrate(&ode, &[vec![f(0.3), df(0.3)]], 0.3, 1.6, 1e-15, true).unwrap();
        let end = &tr.end_states()[0];
        assert!((end[0] / f(1.6) - 1.0).abs() < 1e-11, "{}", end[0] / f(1.6));
        let mid = tr.states_at(1.3).unwrap();
        assert!((mid[0][0] / f(1.3) - 1.0).abs() < 1e-12);
        // backwards
        let back = integrate(&ode, &[vec![f(2.0), df(2.0)]], 2.0, 0.5, 1e-15, false).unwrap();
        assert!((back.end_states()[0][0] / f(0.5) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn shift_is_exact() {
        let ode = PolyOde {
            order: 1,
            p: vec![vec![1.0, 2.0, 3.0], vec![1.0]],
        };
        let s = ode.shifted(2.0);
        // 1 + 2(2+t) + 3(2+t)² = 17 + 14t + 3t²
        assert_eq!(s[0], vec![17.0, 14.0, 3.0]);
    }
}
