//! A single description covering every equation in the crate:
//!
//! s·𝔈(ρ)ψ + V(x)ψ = Eψ,
//!
//! where 𝔈(ρ) is the Euler-type operator with 𝔈(ρ)x^p = Π_i (p − ρ_i)·x^{p−n}
//! and V is a polynomial potential. The sextic has n = 2, s = −1,
//! ρ = (l+1, −l), V = x⁶ + αx²; the third-order operator n = 3, s = +1, ρ = g,
//! V = x³; its adjoint s = −1, ρ = 2 − g; the n-th order family
//! s = (−1)^{n+1}, ρ = g, V = x^{nM}.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::params::{GeneralProblem, SexticProblem, ThirdOrderProblem};
use crate::rational::{q_f64, qi, serde_q, Q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialTerm {
    pub power: u32,
    #[serde(with = "serde_q")]
    pub coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearOde {
    pub order: usize,
    pub sign: i32,
    /// Indicial exponents in their labelled (not sorted) order.
    #[serde(with = "serde_q::vec")]
    pub exponents: Vec<Q>,
    pub potential: Vec<PotentialTerm>,
}

impl LinearOde {
    pub fn new(sign: i32, exponents: Vec<Q>, potential: Vec<(u32, Q)>) -> Self {
        let potential = potential
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(power, coeff)| PotentialTerm { power, coeff })
            .collect();
        LinearOde {
            order: exponents.len(),
            sign,
            exponents,
            potential,
        }
    }

    pub fn sextic(p: &SexticProblem) -> Self {
        Self::new(
            -1,
            p.exponents().to_vec(),
            vec![(6, Q::one()), (2, p.alpha.clone())],
        )
    }

    pub fn third(p: &ThirdOrderProblem) -> Self {
        let sign = if p.adjoint { -1 } else { 1 };
        Self::new(sign, p.exponents().to_vec(), vec![(3, Q::one())])
    }

    pub fn general(p: &GeneralProblem) -> Self {
        let sign = if p.n % 2 == 1 { 1 } else { -1 };
        Self::new(sign, p.g.clone(), vec![(p.n * p.m, Q::one())])
    }

    /// Π_i (p − ρ_i).
    pub fn indicial(&self, p: &Q) -> Q {
        self.exponents.iter().map(|r| p - r).product()
    }

    /// d/dp Π_i (p − ρ_i).
    pub fn indicial_derivative(&self, p: &Q) -> Q {
        (0..self.order)
            .map(|skip| {
                self.exponents
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, r)| p - r)
                    .product::<Q>()
            })
            .sum()
    }

    /// Coefficients c_k with 𝔈(ρ) = Σ_k c_k x^{k−n} dᵏ/dxᵏ (c_n = 1), obtained
    /// by rewriting Π(p − ρ_i) in the falling-factorial basis.
    pub fn euler_coeffs(&self) -> Vec<Q> {
        let n = self.order;
        // monomial coefficients of Π(p − ρ_i), ascending
        let mut mono = vec![Q::one()];
        for r in &self.exponents {
            let mut next = vec![Q::zero(); mono.len() + 1];
            for (i, c) in mono.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            mono = next;
        }
        // Stirling numbers of the second kind: p^j = Σ_k S(j,k) ff(p,k)
        let mut s = vec![vec![Q::zero(); n + 1]; n + 1];
        s[0][0] = Q::one();
        for j in 1..=n {
            for k in 1..=j {
                s[j][k] = &s[j - 1][k - 1] + qi(k as i64) * &s[j - 1][k];
            }
        }
        (0..=n)
            .map(|k| (k..=n).map(|j| &mono[j] * &s[j][k]).sum())
            .collect()
    }

    /// Series step d = gcd(n, potential powers).
    pub fn step(&self) -> u32 {
        self.potential
            .iter()
            .fold(self.order as u32, |g, t| g.gcd(&t.power))
    }

    /// Highest potential power P.
    pub fn top_power(&self) -> u32 {
        self.potential.iter().map(|t| t.power).max().unwrap_or(0)
    }

    pub fn potential_f64(&self, x: f64) -> f64 {
        self.potential
            .iter()
            .map(|t| q_f64(&t.coeff) * x.powi(t.power as i32))
            .sum()
    }

    /// Labels j ≠ i with ρ_j − ρ_i a positive multiple of the step, i.e. the
    /// exponents the series from ρ_i runs into, with the index m where it
    /// does so.
    pub fn resonances_from(&self, i: usize) -> Vec<(usize, usize)> {
        let d = qi(self.step() as i64);
        let mut out: Vec<(usize, usize)> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .filter_map(|(j, r)| {
                let diff = (r - &self.exponents[i]) / &d;
                crate::rational::q_as_positive_integer(&diff).map(|m| (j, m as usize))
            })
            .collect();
        out.sort_by_key(|&(_, m)| m);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn euler_coefficients_reproduce_the_operators() {
        // sextic: -(d² − l(l+1)/x²) ⇒ Euler = d² − l(l+1)x⁻²
        let l = q(1, 3);
        let ode = LinearOde::sextic(&SexticProblem::new(qi(0), l.clone()));
        let c = ode.euler_coeffs();
        assert_eq!(c, vec![-(&l * (&l + qi(1))), qi(0), qi(1)]);
        assert_eq!(ode.step(), 2);
        // third order: Euler = d³ − G x⁻²d + (L+G) x⁻³
        let t = ThirdOrderProblem::new(q(1, 4), qi(1), q(7, 4)).unwrap();
        let c = LinearOde::third(&t).euler_coeffs();
        assert_eq!(c, vec![t.big_l() + t.big_g(), -t.big_g(), qi(0), qi(1)]);
        // adjoint: −(d³ − G x⁻²d + (L†+G)x⁻³) with L† = −L
        let a = t.to_adjoint();
        let c = LinearOde::third(&a).euler_coeffs();
        assert_eq!(c, vec![a.big_l() + a.big_g(), -a.big_g(), qi(0), qi(1)]);
    }

    #[test]
    fn resonances() {
        let g = crate::params::g_qes(2, &qi(0), false).unwrap();
        let ode = LinearOde::third(&ThirdOrderProblem::from_triple(&g).unwrap());
        assert_eq!(ode.resonances_from(1), vec![(0, 2)]);
        assert!(ode.resonances_from(0).is_empty());
        let irr = SexticProblem::new(qi(6), q(-5, 2));
        assert_eq!(LinearOde::sextic(&irr).resonances_from(0), vec![(1, 2)]);
    }
}
