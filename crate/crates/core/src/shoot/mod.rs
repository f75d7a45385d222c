//! Independent numerical oracle: series-seeded shooting with subspace
//! matching for the second-, third- and n-th-order eigenproblems.
//!
//! Origin-admissible solutions are seeded from Frobenius series at x₀ and
//! integrated forward to x_m; decaying solutions are seeded from their WKB
//! form at x_R and integrated backward (the stable direction). The square
//! matching determinant of both subspaces at x_m vanishes at eigenvalues.
//! When an admissible series is resonant, the determinant is replaced by
//! c(E)·a(E): the log coefficient c of the resonant series times the weight
//! a of that series in the decaying solution, so roots split into an
//! algebraic (QES) channel and a regular channel.

mod biorth;
mod problems;
mod scan;
mod taylor;

pub use biorth::{biorthogonality_check, BiorthogonalityReport};
pub use problems::{
    irregular_spectrum_sextic, isospectral_report, spectrum_general, spectrum_sextic,
    spectrum_third, third_shooter, qes_point, IsospectralPair, IsospectralReport,
};
pub use scan::Spectrum;
pub use taylor::{integrate, PolyOde, Trajectory, TAYLOR_ORDER};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bdpoly::{isolate_real_roots, EPolynomial, EVar};
use crate::error::{QesError, Result};
use crate::frobenius::{frobenius, resonant_log_coefficient, FrobeniusSolution, ResonancePolicy};
use crate::ode::LinearOde;
use crate::rational::q_f64;

/// Numerical settings of a boundary-value eigenproblem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BvpSpec {
    /// Series seeding point near the origin.
    pub x0: f64,
    /// Matching point.
    pub xm: f64,
    /// Outer seeding point; chosen from the energy window when absent.
    pub xr: Option<f64>,
    /// Absolute/relative eigenvalue tolerance of the bracket refinement.
    pub tol: f64,
    /// Relative local error per Taylor step.
    pub integrator_tol: f64,
    /// Number of Frobenius coefficients used for the origin seeds.
    pub series_terms: usize,
    /// Lower end of the energy scan; problem-specific bound when absent.
    pub e_min: Option<f64>,
    /// Upper end of the energy scan.
    pub e_max: f64,
    /// Base scan step h₀; the step at energy E is h₀·max(1, |E|)^γ.
    pub scan_step: f64,
    pub parallel: bool,
}

impl Default for BvpSpec {
    fn default() -> Self {
        BvpSpec {
            x0: 1e-2,
            xm: 1.0,
            xr: None,
            tol: 1e-10,
            integrator_tol: 1e-15,
            series_terms: 40,
            e_min: None,
            e_max: 1e4,
            scan_step: 0.25,
            parallel: crate::par::parallel_available(),
        }
    }
}

impl BvpSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x0 < self.xm) {
            return Err(QesError::InvalidParameter(format!(
                "need 0 < x0 < xm, got x0 = {}, xm = {}",
                self.x0, self.xm
            )));
        }
        if let Some(xr) = self.xr {
            if xr <= self.xm {
                return Err(QesError::InvalidParameter(format!("need xm < xR, got xR = {xr}")));
            }
        }
        if self.series_terms < 12 {
            return Err(QesError::InvalidParameter("at least 12 series terms are required".into()));
        }
        if !(self.tol > 0.0 && self.scan_step > 0.0) {
            return Err(QesError::InvalidParameter("tolerances and steps must be positive".into()));
        }
        Ok(())
    }
}

/// Which factor of c(E)·a(E) vanishes at a root of a resonant problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channel {
    /// The resonant series is log-free: an algebraic (QES) level.
    Qes,
    /// The decaying solution carries no resonant component.
    Regular,
}

/// A certified eigenvalue.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenvalueEstimate {
    pub value: f64,
    /// Sign-change bracket of the matching function.
    pub bracket: [f64; 2],
    /// Error estimate: the larger of |f/f′| at the estimate and the
    /// half-width of the final bracket.
    pub residual: f64,
    pub method: String,
    pub level: usize,
    /// Working precision of the integrator (IEEE double).
    pub precision_bits: u32,
    pub channel: Option<Channel>,
}

/// Behaviour at infinity: decaying solutions x^β exp(ω x^q/q).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decay {
    pub q: f64,
    /// (Re ω, Im ω) for each imposed decaying direction (conjugate pairs
    /// are listed once, with Im ω > 0, and contribute two directions).
    pub omegas: Vec<(f64, f64)>,
    pub betas: Vec<(f64, f64)>,
    pub directions: usize,
}

/// A resonant admissible series and the exponent it runs into.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonantChain {
    pub label: usize,
    pub upper_label: usize,
    pub log_coefficient: EPolynomial,
    /// Real roots of the log coefficient (the algebraic levels).
    pub qes_roots: Vec<f64>,
}

/// A boundary-value eigenproblem ready for shooting.
#[derive(Clone, Debug)]
pub struct Shooter {
    pub ode: LinearOde,
    /// Labels of the origin exponents allowed by the boundary condition.
    pub admissible: Vec<usize>,
    pub resonance: Option<ResonantChain>,
    pub decay: Decay,
    pub spec: BvpSpec,
    /// Lower end of the scan.
    pub floor: f64,
}

impl Shooter {
    pub fn new(ode: LinearOde, admissible: Vec<usize>, spec: BvpSpec, floor: f64) -> Result<Self> {
        spec.validate()?;
        let n = ode.order;
        if admissible.is_empty() || admissible.len() >= n {
            return Err(QesError::InvalidParameter(format!(
                "{} admissible origin directions for an order-{n} problem",
                admissible.len()
            )));
        }
        let decay = decay_description(&ode, n - admissible.len())?;
        let mut chains = Vec::new();
        for &a in &admissible {
            for (up, _) in ode.resonances_from(a) {
                if !admissible.contains(&up) {
                    chains.push((a, up));
                }
            }
        }
        let resonance = match chains.as_slice() {
            [] => None,
            [(a, _)] => {
                let info = resonant_log_coefficient(&ode, *a, EVar::E)?;
                let qes_roots = if info.log_coefficient.degree().unwrap_or(0) > 0 {
                    isolate_real_roots(&info.log_coefficient, 64).values_f64()
                } else {
                    Vec::new()
                };
                Some(ResonantChain {
                    label: *a,
                    upper_label: info.upper_label,
                    log_coefficient: info.log_coefficient,
                    qes_roots,
                })
            }
            _ => {
                return Err(QesError::Unsupported(
                    "more than one resonance between admissible and excluded exponents".into(),
                ))
            }
        };
        Ok(Shooter {
            ode,
            admissible,
            resonance,
            decay,
            spec,
            floor,
        })
    }

    pub fn order(&self) -> usize {
        self.ode.order
    }

    /// Scan exponent γ: level spacing grows like E^γ.
    pub fn spacing_exponent(&self) -> f64 {
        let n = self.ode.order as f64;
        let p = self.ode.top_power() as f64;
        1.0 - (p + n) / (n * p)
    }

    /// Outer seeding point for energies up to |E|: beyond the turning point
    /// by enough that the slowest imposed decay reaches e^{−69} ≈ 10⁻³⁰.
    pub fn xr_for(&self, e_abs: f64) -> f64 {
        if let Some(xr) = self.spec.xr {
            return xr;
        }
        let p = self.ode.top_power() as f64;
        let sub: f64 = self
            .ode
            .potential
            .iter()
            .filter(|t| (t.power as f64) < p)
            .map(|t| q_f64(&t.coeff).abs())
            .sum();
        let xt = (e_abs + sub).powf(1.0 / p).max(1.0);
        let q = self.decay.q;
        let slow = self
            .decay
            .omegas
            .iter()
            .map(|w| w.0.abs())
            .fold(f64::INFINITY, f64::min);
        (xt.powf(q) + 69.0 * q / slow).powf(1.0 / q).max(self.spec.xm + 1.0)
    }

    /// Origin series: admissible labels in order, plus the upper exponent of
    /// a resonant chain (last) when there is one.
    pub fn origin_series(&self, e: f64) -> Result<Vec<FrobeniusSolution<f64>>> {
        let mut labels = self.admissible.clone();
        if let Some(r) = &self.resonance {
            labels.push(r.upper_label);
        }
        labels
            .iter()
            .map(|&l| {
                frobenius(
                    &self.ode,
                    &self.ode.exponents[l],
                    &e,
                    self.spec.series_terms,
                    ResonancePolicy::Log,
                )
            })
            .collect()
    }

    /// WKB seeds (derivatives 0..n) at x_R, normalised to unit value.
    pub fn decaying_seeds(&self, xr: f64) -> Vec<Vec<f64>> {
        let n = self.ode.order;
        let mut out = Vec::new();
        for (w, b) in self.decay.omegas.iter().zip(&self.decay.betas) {
            let omega = Complex64::new(w.0, w.1);
            let beta = Complex64::new(b.0, b.1);
            let d = wkb_log_derivatives(omega, beta, self.decay.q - 1.0, xr, n);
            if w.1 == 0.0 {
                out.push(d.iter().map(|c| c.re).collect());
            } else {
                out.push(d.iter().map(|c| c.re).collect());
                out.push(d.iter().map(|c| c.im).collect());
            }
        }
        out
    }

    /// States at x_m of the origin series (as in [`Self::origin_series`])
    /// and of the decaying solutions.
    pub fn matching_states(&self, e: f64, xr: f64) -> Result<(Vec<FrobeniusSolution<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let n = self.ode.order;
        let pode = PolyOde::new(&self.ode, e);
        let series = self.origin_series(e)?;
        let seeds: Vec<Vec<f64>> = series.iter().map(|s| s.eval_derivs(self.spec.x0, n - 1)).collect();
        let origin = integrate(&pode, &seeds, self.spec.x0, self.spec.xm, self.spec.integrator_tol, false)?;
        let outer = integrate(&pode, &self.decaying_seeds(xr), xr, self.spec.xm, self.spec.integrator_tol, false)?;
        Ok((series, origin.end_states().to_vec(), outer.end_states().to_vec()))
    }

    /// The matching function whose zeros are the eigenvalues.
    pub fn mismatch(&self, e: f64, xr: f64) -> Result<f64> {
        let (series, origin, outer) = self.matching_states(e, xr)?;
        let Some(chain) = &self.resonance else {
            let cols: Vec<&Vec<f64>> = origin.iter().chain(outer.iter()).collect();
            return Ok(normalised_det(&cols));
        };
        let pos = self.admissible.iter().position(|&l| l == chain.label).unwrap();
        let c = series[pos].log_coefficient();
        let tilde = &origin[pos];
        let upper = origin.last().unwrap();
        let others: Vec<&Vec<f64>> = origin[..self.admissible.len()]
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, v)| v)
            .collect();
        if outer.len() == 1 {
            let mut num: Vec<&Vec<f64>> = vec![&outer[0]];
            num.extend(others.iter().copied());
            num.push(upper);
            let mut den: Vec<&Vec<f64>> = vec![tilde];
            den.extend(others.iter().copied());
            den.push(upper);
            Ok(c * normalised_det(&num) / normalised_det(&den))
        } else {
            let mut cols = others;
            cols.push(upper);
            cols.extend(outer.iter());
            Ok(c * normalised_det(&cols))
        }
    }

    /// Channel of a root of a resonant problem.
    pub fn channel_of(&self, e: f64) -> Option<Channel> {
        let chain = self.resonance.as_ref()?;
        let hit = chain
            .qes_roots
            .iter()
            .any(|r| (r - e).abs() <= 1e-6 * e.abs().max(1.0));
        Some(if hit { Channel::Qes } else { Channel::Regular })
    }

    /// The eigenfunction at an eigenvalue, as the intersection of the origin
    /// subspace with the decaying subspace, with dense output on [0, x_R].
    pub fn eigenfunction(&self, e: f64, channel: Option<Channel>) -> Result<Eigenfunction> {
        let n = self.ode.order;
        let xr = self.xr_for(e.abs());
        let pode = PolyOde::new(&self.ode, e);
        let all = self.origin_series(e)?;
        // origin basis for this eigenvalue
        let basis: Vec<FrobeniusSolution<f64>> = match (&self.resonance, channel) {
            (None, _) => all,
            (Some(chain), Some(Channel::Regular)) => {
                let pos = self.admissible.iter().position(|&l| l == chain.label).unwrap();
                all.into_iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, s)| s).collect()
            }
            (Some(_), _) => all,
        };
        let seeds: Vec<Vec<f64>> = basis.iter().map(|s| s.eval_derivs(self.spec.x0, n - 1)).collect();
        let origin = integrate(&pode, &seeds, self.spec.x0, self.spec.xm, self.spec.integrator_tol, true)?;
        let outer = integrate(&pode, &self.decaying_seeds(xr), xr, self.spec.xm, self.spec.integrator_tol, true)?;
        let cols: Vec<Vec<f64>> = origin.end_states().iter().chain(outer.end_states()).cloned().collect();
        let scales: Vec<f64> = cols.iter().map(|c| max_abs(c)).collect();
        let m = cols.len();
        let mut mat = DMatrix::<f64>::zeros(m.max(n), m);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                mat[(i, j)] = c[i] / scales[j];
            }
        }
        let svd = mat.svd(false, true);
        let vt = svd.v_t.ok_or_else(|| QesError::Integration("SVD failed".into()))?;
        let (imin, smin) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, s)| if *s < acc.1 { (i, *s) } else { acc });
        let v: Vec<f64> = (0..m).map(|j| vt[(imin, j)] / scales[j]).collect();
        let b = basis.len();
        Ok(Eigenfunction {
            energy: e,
            x0: self.spec.x0,
            xm: self.spec.xm,
            xr,
            origin_coeffs: v[..b].to_vec(),
            outer_coeffs: v[b..].iter().map(|c| -c).collect(),
            series: basis,
            origin,
            outer,
            smallest_singular_value: smin,
        })
    }
}

/// A matched eigenfunction with dense output.
#[derive(Clone, Debug)]
pub struct Eigenfunction {
    pub energy: f64,
    pub x0: f64,
    pub xm: f64,
    pub xr: f64,
    /// Weights of the origin series (in basis order).
    pub origin_coeffs: Vec<f64>,
    /// Weights of the decaying solutions.
    pub outer_coeffs: Vec<f64>,
    pub series: Vec<FrobeniusSolution<f64>>,
    origin: Trajectory,
    outer: Trajectory,
    /// Conditioning of the matching: ≈ 0 at a genuine eigenvalue.
    pub smallest_singular_value: f64,
}

impl Eigenfunction {
    /// ψ(x) for 0 < x ≤ x_R.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.derivs(x)?[0])
    }

    /// ψ and its derivatives up to order n−1.
    pub fn derivs(&self, x: f64) -> Result<Vec<f64>> {
        let n = self.origin.order;
        let (states, w) = if x <= self.x0 {
            let s: Vec<Vec<f64>> = self.series.iter().map(|s| s.eval_derivs(x, n - 1)).collect();
            (s, &self.origin_coeffs)
        } else if x <= self.xm {
            (self.origin.states_at(x)?, &self.origin_coeffs)
        } else if x <= self.xr {
            (self.outer.states_at(x)?, &self.outer_coeffs)
        } else {
            return Err(QesError::Integration(format!("x = {x} beyond x_R = {}", self.xr)));
        };
        let mut out = vec![0.0; n];
        for (s, c) in states.iter().zip(w) {
            for (o, v) in out.iter_mut().zip(s) {
                *o += c * v;
            }
        }
        Ok(out)
    }

    /// Rescale so that the weight of origin series `index` is one.
    pub fn normalise_origin(&mut self, index: usize) -> Result<()> {
        let c = self.origin_coeffs[index];
        if c == 0.0 {
            return Err(QesError::Integration("the requested origin weight vanishes".into()));
        }
        self.origin_coeffs.iter_mut().for_each(|v| *v /= c);
        self.outer_coeffs.iter_mut().for_each(|v| *v /= c);
        Ok(())
    }
}

fn max_abs(v: &[f64]) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Determinant of the matrix with the given columns, each scaled to unit
/// max-norm (positive scaling: the sign is unaffected).
fn normalised_det(cols: &[&Vec<f64>]) -> f64 {
    let n = cols.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        let s = max_abs(c);
        for i in 0..n {
            m[(i, j)] = c[i] / s;
        }
    }
    m.determinant()
}

/// Leading WKB data for `k` decaying directions of `ode`.
fn decay_description(ode: &LinearOde, k: usize) -> Result<Decay> {
    let n = ode.order;
    let nf = n as f64;
    let p = ode.top_power();
    if p == 0 {
        return Err(QesError::InvalidParameter("the potential has no growing term".into()));
    }
    let pf = p as f64;
    let s = ode.sign as f64;
    // s·ωⁿ = −1
    let mut roots: Vec<Complex64> = (0..n)
        .map(|j| {
            let phase = if s < 0.0 {
                2.0 * std::f64::consts::PI * j as f64 / nf
            } else {
                std::f64::consts::PI * (2 * j + 1) as f64 / nf
            };
            Complex64::from_polar(1.0, phase)
        })
        .collect();
    roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));
    let chosen = &roots[..k];
    if chosen.iter().any(|w| w.re > -1e-12) {
        return Err(QesError::Unsupported(format!(
            "{k} decaying directions requested but fewer exist"
        )));
    }
    if k < n && (roots[k].re - roots[k - 1].re).abs() < 1e-12 {
        return Err(QesError::Unsupported(
            "the decaying directions split a conjugate pair".into(),
        ));
    }
    let c = ode.euler_coeffs();
    let cn1 = q_f64(&c[n - 1]);
    let r = pf / nf;
    // potential term entering at the same order as β
    let j_sub = r * (nf - 1.0) - 1.0;
    let v_sub: f64 = ode
        .potential
        .iter()
        .filter(|t| (t.power as f64 - j_sub).abs() < 1e-12 && t.power != p)
        .map(|t| q_f64(&t.coeff))
        .sum();
    let mut omegas = Vec::new();
    let mut betas = Vec::new();
    for w in chosen {
        if w.im < -1e-12 {
            continue;
        }
        let w = if w.im.abs() < 1e-12 { Complex64::new(w.re, 0.0) } else { *w };
        let beta = Complex64::new(-(nf - 1.0) * r / 2.0 - cn1 / nf, 0.0)
            - v_sub / (s * nf * w.powu(n as u32 - 1));
        omegas.push((w.re, w.im));
        betas.push((beta.re, beta.im));
    }
    let directions = omegas.iter().map(|w| if w.1 == 0.0 { 1 } else { 2 }).sum();
    if directions != k {
        return Err(QesError::Unsupported("inconsistent decaying directions".into()));
    }
    Ok(Decay {
        q: r + 1.0,
        omegas,
        betas,
        directions,
    })
}

/// (ψ, ψ′, …, ψ^{(n−1)}) / ψ for ψ = x^β exp(ω x^{r+1}/(r+1)).
fn wkb_log_derivatives(omega: Complex64, beta: Complex64, r: f64, x: f64, n: usize) -> Vec<Complex64> {
    // S^{(m+1)} for m = 0..n
    let sd: Vec<Complex64> = (0..n)
        .map(|m| {
            let mut ff = 1.0;
            for i in 0..m {
                ff *= r - i as f64;
            }
            let mut fact = 1.0;
            for i in 1..=m {
                fact *= i as f64;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            omega * ff * x.powf(r - m as f64) + beta * sign * fact * x.powf(-1.0 - m as f64)
        })
        .collect();
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n - 1 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for i in 0..=k {
            acc += sd[i] * p[k - i] * binom;
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        p.push(acc);
    }
    p
}
