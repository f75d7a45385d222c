//! Exact resonance data: for an exponent ρ_i whose series runs into a higher
//! exponent ρ_j = ρ_i + d·m, the coefficient of the logarithm as a polynomial
//! in the energy.

use serde::{Deserialize, Serialize};

use super::{frobenius, ResonancePolicy};
use crate::bdpoly::{EPolynomial, EVar};
use crate::error::{QesError, Result};
use crate::ode::LinearOde;
use crate::rational::{serde_q, Q};

/// A resonance of the series from exponent `lower` at index `index`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonanceInfo {
    pub lower_label: usize,
    pub upper_label: usize,
    #[serde(with = "serde_q")]
    pub lower: Q,
    #[serde(with = "serde_q")]
    pub upper: Q,
    pub index: usize,
    /// Log coefficient c(E); the series is log-free exactly at its roots.
    pub log_coefficient: EPolynomial,
}

/// The log coefficient of the series from the exponent with label `label`,
/// as an exact polynomial in `var`. Errors with `NonResonant` when no other
/// exponent lies on the series' lattice.
pub fn resonant_log_coefficient(ode: &LinearOde, label: usize, var: EVar) -> Result<ResonanceInfo> {
    let res = ode.resonances_from(label);
    let &(upper_label, index) = res.first().ok_or(QesError::NonResonant)?;
    let sol = frobenius(
        ode,
        &ode.exponents[label],
        &EPolynomial::x(var),
        index + 1,
        ResonancePolicy::Log,
    )?;
    Ok(ResonanceInfo {
        lower_label: label,
        upper_label,
        lower: ode.exponents[label].clone(),
        upper: ode.exponents[upper_label].clone(),
        index,
        log_coefficient: sol.log_coefficient(),
    })
}

/// Whether the series from exponent `label` at the exact energy `e` is free
/// of logarithms (always true off resonance).
pub fn is_projectively_trivial(ode: &LinearOde, label: usize, e: &Q) -> Result<bool> {
    match resonant_log_coefficient(ode, label, EVar::E) {
        Ok(info) => Ok(info.log_coefficient.eval_q(e) == Q::from_integer(0.into())),
        Err(QesError::NonResonant) => Ok(true),
        Err(e) => Err(e),
    }
}
