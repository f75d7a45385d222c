//! The concrete eigenproblems: admissible origin directions, scan floors and
//! the isospectral pairing.

use serde::{Deserialize, Serialize};

use super::{BvpSpec, Shooter, Spectrum};
use crate::error::{QesError, Result};
use crate::ode::LinearOde;
use crate::params::{alpha_qes, g_from_alpha, GeneralProblem, SexticProblem, ThirdOrderProblem};
use crate::rational::{q, q_as_positive_integer, qi, Q};

/// κ = 4/(3√3) in double precision.
pub(crate) fn kappa_f64() -> f64 {
    4.0 / (3.0 * 3f64.sqrt())
}

/// Lower scan bound below a known spectral floor.
fn with_margin(floor: f64) -> f64 {
    floor - 0.5 - 0.05 * floor.abs()
}

/// Spectral floor of a sextic, including the partner QES problem when the
/// problem is the irregular member of a resonant pair (its algebraic levels
/// are those of the partner and may lie below its own potential minimum).
fn sextic_floor(p: &SexticProblem) -> f64 {
    let mut floor = p.potential_floor();
    let jq = -(&p.l + q(1, 2));
    if let Some(j) = q_as_positive_integer(&jq) {
        // partner (α_J(l′), l′) with α = 2J + 4l′ + 2
        let lp = (&p.alpha - qi(2 * j as i64) - qi(2)) / qi(4);
        if let Ok(a) = alpha_qes(j as u32, &lp) {
            floor = floor.min(SexticProblem::new(a, lp).potential_floor());
        }
    }
    floor
}

/// −ψ″ + (x⁶ + αx² + l(l+1)/x²)ψ = Eψ with ψ ~ x^{l+1} (or the continued
/// branch x^{−l}) at the origin and exponential decay at infinity.
pub fn spectrum_sextic(p: &SexticProblem, k_max: usize, spec: &BvpSpec) -> Result<Spectrum> {
    let label = if p.regular { 0 } else { 1 };
    let shooter = Shooter::new(LinearOde::sextic(p), vec![label], spec.clone(), with_margin(sextic_floor(p)))?;
    shooter.spectrum(k_max)
}

fn third_floor(g: &[Q; 3]) -> f64 {
    let (alpha, l) = crate::params::alpha_from_g(&g[0], &g[2]);
    with_margin(sextic_floor(&SexticProblem::new(alpha, l)) / kappa_f64())
}

/// The third-order problem (direct: origin behaviour from the exponents
/// g1, g2; adjoint: from 2 − g0) with decay at infinity. Eigenvalues are the
/// Ē of the direct equation in both cases.
pub fn spectrum_third(p: &ThirdOrderProblem, k_max: usize, spec: &BvpSpec) -> Result<Spectrum> {
    let admissible = if p.adjoint { vec![0] } else { vec![1, 2] };
    let shooter = Shooter::new(LinearOde::third(p), admissible, spec.clone(), third_floor(&p.g()))?;
    shooter.spectrum(k_max)
}

/// The shooter behind [`spectrum_third`], for eigenfunction access.
pub fn third_shooter(p: &ThirdOrderProblem, spec: &BvpSpec) -> Result<Shooter> {
    let admissible = if p.adjoint { vec![0] } else { vec![1, 2] };
    Shooter::new(LinearOde::third(p), admissible, spec.clone(), third_floor(&p.g()))
}

/// The n-th order family with origin directions from every exponent except
/// g0 and the single maximally decaying direction at infinity.
pub fn spectrum_general(p: &GeneralProblem, k_max: usize, spec: &BvpSpec) -> Result<Spectrum> {
    let n = p.n as usize;
    let floor = match (p.n, p.m) {
        (2, _) => with_margin(0.0),
        (3, 1) => third_floor(&[p.g[0].clone(), p.g[1].clone(), p.g[2].clone()]),
        _ => -5.0 * n as f64,
    };
    let shooter = Shooter::new(LinearOde::general(p), (1..n).collect(), spec.clone(), floor)?;
    shooter.spectrum(k_max)
}

/// The irregular sextic ℋ₂(2J+4l+2, −J−1/2), whose x^{1/2−J} series is
/// resonant with x^{J+1/2}: roots are tagged QES (log-free series) or
/// regular channel (no resonant component in the decaying solution).
pub fn irregular_spectrum_sextic(j: u32, l: &Q, k_max: usize, spec: &BvpSpec) -> Result<Spectrum> {
    if j == 0 {
        return Err(QesError::InvalidParameter("J must be at least 1".into()));
    }
    let jq = qi(j as i64);
    let p = SexticProblem::new(qi(2) * &jq + qi(4) * l + qi(2), -(jq + q(1, 2)));
    let shooter = Shooter::new(LinearOde::sextic(&p), vec![0], spec.clone(), with_margin(sextic_floor(&p)))?;
    if shooter.resonance.is_none() {
        return Err(QesError::NonResonant);
    }
    shooter.spectrum(k_max)
}

/// One row of an isospectral pairing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsospectralPair {
    pub level: usize,
    pub e: Option<f64>,
    pub ebar: Option<f64>,
    /// |E − κĒ| when both levels exist.
    pub abs_error: Option<f64>,
    pub rel_error: Option<f64>,
    /// Set when one side has no level at this index.
    pub gap: bool,
}

/// Level-by-level comparison of the sextic and third-order spectra.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsospectralReport {
    #[serde(with = "crate::rational::serde_q")]
    pub alpha: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub l: Q,
    #[serde(with = "crate::rational::serde_q::vec")]
    pub g: Vec<Q>,
    pub kappa: f64,
    pub pairs: Vec<IsospectralPair>,
    pub max_abs_error: f64,
    pub warnings: Vec<String>,
}

/// Spectra of ℋ₂(α, l) and of ℋ₃ at g(α, l), paired E_k ↔ Ē_k.
pub fn isospectral_report(alpha: &Q, l: &Q, k_max: usize, spec: &BvpSpec) -> Result<IsospectralReport> {
    let g = g_from_alpha(alpha, l);
    let mut report = IsospectralReport {
        alpha: alpha.clone(),
        l: l.clone(),
        g: g.to_vec(),
        kappa: kappa_f64(),
        pairs: Vec::new(),
        max_abs_error: 0.0,
        warnings: Vec::new(),
    };
    if k_max == 0 {
        return Ok(report);
    }
    let s2 = spectrum_sextic(&SexticProblem::new(alpha.clone(), l.clone()), k_max, spec)?;
    let s3 = spectrum_third(&ThirdOrderProblem::from_triple(&g)?, k_max, spec)?;
    report.warnings.extend(s2.warnings.iter().map(|w| format!("sextic: {w}")));
    report.warnings.extend(s3.warnings.iter().map(|w| format!("third order: {w}")));
    let k = report.kappa;
    for level in 0..k_max {
        let e = s2.eigenvalues.get(level).map(|v| v.value);
        let eb = s3.eigenvalues.get(level).map(|v| v.value);
        let (abs_error, rel_error) = match (e, eb) {
            (Some(e), Some(eb)) => {
                let d = (e - k * eb).abs();
                report.max_abs_error = report.max_abs_error.max(d);
                (Some(d), Some(d / e.abs().max(1e-300)))
            }
            _ => (None, None),
        };
        report.pairs.push(IsospectralPair {
            level,
            e,
            ebar: eb,
            abs_error,
            rel_error,
            gap: e.is_none() || eb.is_none(),
        });
    }
    Ok(report)
}

/// (α_J, l) for an isospectral report at a QES point.
pub fn qes_point(j: u32, l: &Q) -> Result<(Q, Q)> {
    Ok((alpha_qes(j, l)?, l.clone()))
}
