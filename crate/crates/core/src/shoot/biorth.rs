//! Biorthogonality of direct and adjoint third-order eigenfunctions:
//! ∫₀^∞ χ†_n φ_m dx ∝ δ_nm.

use serde::{Deserialize, Serialize};

use super::problems::third_shooter;
use super::{BvpSpec, Eigenfunction};
use crate::error::{QesError, Result};
use crate::params::ThirdOrderProblem;
use crate::quad::composite;
use crate::rational::{q, serde_q, Q};

/// Inner products of the first eigenfunctions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiorthogonalityReport {
    #[serde(with = "serde_q::vec")]
    pub g: Vec<Q>,
    pub direct_energies: Vec<f64>,
    pub adjoint_energies: Vec<f64>,
    /// ⟨χ†_n, φ_m⟩ as integrated.
    pub raw: Vec<Vec<f64>>,
    /// raw_nm / √|raw_nn·raw_mm|: unit diagonal by construction.
    pub normalized: Vec<Vec<f64>>,
    pub max_off_diagonal: f64,
    /// Leading power of the integrand at the origin, 2 − g0 + g1.
    #[serde(with = "serde_q")]
    pub endpoint_exponent: Q,
}

/// ∫₀^{x0} of the product of the two local series, term by term.
fn series_head(phi: &Eigenfunction, chi: &Eigenfunction, x0: f64) -> Result<f64> {
    if phi.series.iter().chain(&chi.series).any(|s| !s.is_projectively_trivial()) {
        return Err(QesError::Unsupported(
            "logarithmic origin series in a biorthogonality integral".into(),
        ));
    }
    let mut total = 0.0;
    for (sp, cp) in phi.series.iter().zip(&phi.origin_coeffs) {
        for (sc, cc) in chi.series.iter().zip(&chi.origin_coeffs) {
            for (p1, a1) in sp.terms() {
                for (p2, a2) in sc.terms() {
                    let e = p1 + p2 + 1.0;
                    total += cp * cc * a1 * a2 * x0.powf(e) / e;
                }
            }
        }
    }
    Ok(total)
}

/// ⟨χ†_n | φ_m⟩ for n, m = 0..=n_max on an ordered triple g0 < g1 < g2
/// with g1 > −1/2.
pub fn biorthogonality_check(g: &[Q; 3], n_max: usize, spec: &BvpSpec) -> Result<BiorthogonalityReport> {
    if !(g[0] < g[1] && g[1] < g[2]) || g[1] <= q(-1, 2) {
        return Err(QesError::Ordering(format!(
            "biorthogonality needs g0 < g1 < g2 and g1 > −1/2, got ({}, {}, {}); \
             on the QES locus the radial problem is irregular",
            g[0], g[1], g[2]
        )));
    }
    let direct = ThirdOrderProblem::from_triple(g)?;
    let ds = third_shooter(&direct, spec)?;
    let as_ = third_shooter(&direct.to_adjoint(), spec)?;
    let k = n_max + 1;
    let de = ds.spectrum(k)?;
    let ae = as_.spectrum(k)?;
    if de.eigenvalues.len() < k || ae.eigenvalues.len() < k {
        return Err(QesError::Integration("fewer eigenvalues than requested".into()));
    }
    let phis: Vec<Eigenfunction> = de
        .eigenvalues
        .iter()
        .map(|e| ds.eigenfunction(e.value, e.channel))
        .collect::<Result<_>>()?;
    let chis: Vec<Eigenfunction> = ae
        .eigenvalues
        .iter()
        .map(|e| as_.eigenfunction(e.value, e.channel))
        .collect::<Result<_>>()?;
    let x0 = spec.x0;
    let xm = spec.xm;
    let xend = phis.iter().chain(&chis).map(|f| f.xr).fold(f64::INFINITY, f64::min);
    // geometric panels towards the origin, uniform beyond the matching point
    let mut inner = vec![x0];
    while *inner.last().unwrap() * 1.5 < xm {
        let next = inner.last().unwrap() * 1.5;
        inner.push(next);
    }
    inner.push(xm);
    let panels = ((xend - xm) / 0.1).ceil().max(1.0) as usize;
    let outer: Vec<f64> = (0..=panels).map(|i| xm + (xend - xm) * i as f64 / panels as f64).collect();
    let mut raw = vec![vec![0.0; k]; k];
    for (n, chi) in chis.iter().enumerate() {
        for (m, phi) in phis.iter().enumerate() {
            let mut err = None;
            let mut f = |x: f64| match (chi.eval(x), phi.eval(x)) {
                (Ok(a), Ok(b)) => a * b,
                (Err(e), _) | (_, Err(e)) => {
                    err.get_or_insert(e);
                    0.0
                }
            };
            let body = composite(&inner, 16, &mut f) + composite(&outer, 16, &mut f);
            if let Some(e) = err {
                return Err(e);
            }
            raw[n][m] = series_head(phi, chi, x0)? + body;
        }
    }
    let mut normalized = raw.clone();
    let mut max_off: f64 = 0.0;
    for n in 0..k {
        for m in 0..k {
            // flipping the sign of direct function n makes the diagonal +1
            normalized[n][m] =
                raw[n][m] * raw[n][n].signum() / (raw[n][n].abs() * raw[m][m].abs()).sqrt();
            if n != m {
                max_off = max_off.max(normalized[n][m].abs());
            }
        }
    }
    Ok(BiorthogonalityReport {
        g: g.to_vec(),
        direct_energies: de.values(),
        adjoint_energies: ae.values(),
        raw,
        normalized,
        max_off_diagonal: max_off,
        endpoint_exponent: Q::from_integer(2.into()) - &g[0] + &g[1],
    })
}
