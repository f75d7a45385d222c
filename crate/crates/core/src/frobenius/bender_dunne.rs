//! Bender-Dunne series wavefunctions of the sextic problem, in their regular
//! form (Gamma-normalised) and in the resonant form with the free coefficient
//! Q_J.

use rug::Float;

use super::{sum_terms, with_cancellation_control};
use crate::bdpoly::irregular_obstruction;
use crate::error::{QesError, Result};
use crate::mp::{powq, q_to_float};
use crate::params::SexticProblem;
use crate::rational::{q, q_as_integer, qi, Q};

fn fq(v: &Q, prec: u32) -> Float {
    q_to_float(v, prec)
}

/// e^{−x⁴/4}·x^{l+1}·Σ_n (−1/4)ⁿ P_n(E)/(n!·Γ(n+l+3/2))·x^{2n}, summed until
/// the tail is negligible (at most `n_max` terms). For the continued branch
/// (`regular = false`) l is replaced by −1−l.
pub fn bd_series_eval(problem: &SexticProblem, e: &Float, x: &Float, n_max: usize) -> Result<Float> {
    if *x <= 0 {
        return Err(QesError::InvalidParameter("x must be positive".into()));
    }
    let l = if problem.regular {
        problem.l.clone()
    } else {
        qi(-1) - &problem.l
    };
    let shift = &l + q(3, 2);
    if let Some(k) = q_as_integer(&shift) {
        if k <= 0 && ((-k) as usize) < n_max {
            return Err(QesError::GammaPole(format!(
                "Gamma(n + l + 3/2) at n = {}",
                -k
            )));
        }
    }
    let j = -(&problem.alpha + qi(2) * &l + qi(1)) / qi(4);
    let prec = e.prec().max(x.prec());
    let sum = with_cancellation_control(prec, |p| {
        let e = Float::with_val(p, e);
        let x = Float::with_val(p, x);
        let mx2 = Float::with_val(p, -(Float::with_val(p, &x * &x)) / 4u32);
        let g0 = crate::mp::gamma_q(&shift, p)?;
        let mut w = Float::with_val(p, 1) / g0;
        let (mut pm2, mut pm1) = (Float::new(p), Float::with_val(p, 1));
        sum_terms(p, n_max, |n, p| {
            if n > 0 {
                let nq = qi(n as i64);
                let next = if n == 1 {
                    Float::with_val(p, &e * &pm1)
                } else {
                    let c = qi(16) * (&nq - qi(1)) * (&nq - &j - qi(1)) * (&nq + &l - q(1, 2));
                    Float::with_val(p, &e * &pm1) + fq(&c, p) * &pm2
                };
                pm2 = std::mem::replace(&mut pm1, next);
                let den = fq(&(&nq * (&nq - qi(1) + &shift)), p);
                w = Float::with_val(p, &w * &mx2) / den;
            }
            Ok(Float::with_val(p, &w * &pm1))
        })
    })?;
    let x4 = Float::with_val(prec, x.clone().square().square());
    let pref = Float::with_val(prec, -x4 / 4u32).exp() * powq(x, &(&l + qi(1)));
    Ok(Float::with_val(prec, sum * pref))
}

/// Q_0..=Q_n of the resonant family at numeric energy, with Q_J := `qj`.
pub fn irregular_q_values(j: u32, l: &Q, e: &Float, qj: &Float, n: usize) -> Vec<Float> {
    let prec = e.prec();
    let mut out: Vec<Float> = vec![Float::with_val(prec, 1)];
    for k in 1..=n {
        if k == j as usize {
            out.push(Float::with_val(prec, qj));
            continue;
        }
        let kq = qi(k as i64);
        let mut rhs = Float::with_val(prec, e * &out[k - 1]);
        if k >= 2 {
            let c = qi(16) * (&kq - qi(1)) * (&kq + l - q(1, 2));
            rhs += fq(&c, prec) * &out[k - 2];
        }
        out.push(rhs / fq(&(kq - qi(j as i64)), prec));
    }
    out
}

/// e^{−x⁴/4}·x^{−J+1/2}·Σ_n (−1/4)ⁿ Q_n(E)/n!·x^{2n} with Q_J set to `qj`.
/// Requires the obstruction polynomial to vanish at E (to the working
/// precision); otherwise no logarithm-free series exists.
pub fn bd_irregular_series_eval(
    j: u32,
    l: &Q,
    e: &Float,
    qj: &Float,
    x: &Float,
    n_max: usize,
) -> Result<Float> {
    if *x <= 0 {
        return Err(QesError::InvalidParameter("x must be positive".into()));
    }
    let prec = e.prec().max(x.prec());
    let obs = irregular_obstruction(j, l)?.poly;
    let value = obs.eval_float(e);
    let mut scale = Float::new(prec);
    let ea = Float::with_val(prec, e.abs_ref());
    for (i, c) in obs.coeffs().iter().enumerate() {
        scale += fq(c, prec).abs() * Float::with_val(prec, rug::ops::Pow::pow(ea.clone(), i as u32));
    }
    let tol = Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32))) * &scale;
    if Float::with_val(prec, value.abs_ref()) > tol {
        return Err(QesError::Obstruction {
            value: crate::mp::float_str(&value),
        });
    }
    let sum = with_cancellation_control(prec, |p| {
        let e = Float::with_val(p, e);
        let qj = Float::with_val(p, qj);
        let x = Float::with_val(p, x);
        let mx2 = Float::with_val(p, -(Float::with_val(p, &x * &x)) / 4u32);
        let mut w = Float::with_val(p, 1);
        // recursion state (Q_{n−2}, Q_{n−1})
        let (mut qm2, mut qm1) = (Float::new(p), Float::with_val(p, 1));
        sum_terms(p, n_max, |n, p| {
            if n > 0 {
                let nq = qi(n as i64);
                let next = if n == j as usize {
                    qj.clone()
                } else {
                    let mut rhs = Float::with_val(p, &e * &qm1);
                    if n >= 2 {
                        let c = qi(16) * (&nq - qi(1)) * (&nq + l - q(1, 2));
                        rhs += fq(&c, p) * &qm2;
                    }
                    rhs / fq(&(&nq - qi(j as i64)), p)
                };
                qm2 = std::mem::replace(&mut qm1, next);
                w = Float::with_val(p, &w * &mx2) / (n as u32);
            }
            Ok(Float::with_val(p, &w * &qm1))
        })
    })?;
    let x4 = Float::with_val(prec, x.clone().square().square());
    let pref = Float::with_val(prec, -x4 / 4u32).exp() * powq(x, &(q(1, 2) - qi(j as i64)));
    Ok(Float::with_val(prec, sum * pref))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::alpha_qes;

    #[test]
    fn terminating_series_is_pure_gaussian_times_power() {
        // J = 1, l = 0, E = 0: ψ ∝ x·e^{−x⁴/4}
        let p = SexticProblem::new(alpha_qes(1, &qi(0)).unwrap(), qi(0));
        let e = Float::new(128);
        let mut ratios = vec![];
        for xv in [0.3, 1.0, 2.5] {
            let x = Float::with_val(128, xv);
            let psi = bd_series_eval(&p, &e, &x, 400).unwrap();
            let base = Float::with_val(128, -Float::with_val(128, x.clone().square().square()) / 4u32).exp() * &x;
            ratios.push(Float::with_val(128, psi / base));
        }
        for r in &ratios[1..] {
            assert!(crate::mp::rel_diff(r, &ratios[0]) < 1e-30);
        }
    }

    #[test]
    fn gamma_pole_is_reported() {
        let p = SexticProblem::new(qi(0), q(-5, 2));
        let r = bd_series_eval(&p, &Float::new(64), &Float::with_val(64, 1), 50);
        assert!(matches!(r, Err(QesError::GammaPole(_))));
    }

    #[test]
    fn obstruction_is_reported_off_the_roots() {
        let e = Float::with_val(128, 1);
        let r = bd_irregular_series_eval(1, &qi(0), &e, &Float::new(128), &Float::with_val(128, 1), 200);
        assert!(matches!(r, Err(QesError::Obstruction { .. })));
    }

    #[test]
    fn qj_zero_does_not_terminate() {
        // at E = 2√6 (J = 2, l = 0) the choice Q_2 = 0 leaves Q_3 ≠ 0
        let e = Float::with_val(128, 24).sqrt();
        let v = irregular_q_values(2, &qi(0), &e, &Float::new(128), 6);
        assert!(v[2].is_zero());
        assert!(v[3].clone().abs() > 1);
    }
}
