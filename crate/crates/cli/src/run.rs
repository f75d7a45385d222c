//! Command execution: each command returns a JSON results payload, the
//! certifications it performed and, where meaningful, (x, value) samples.

use anyhow::{anyhow, bail, Context, Result};
use qes_core::bdpoly::{
    bd_second, cheng_third, general_family, irregular_obstruction, isolate_real_roots, EPolynomial, EVar,
};
use qes_core::closedform::{
    bessel_ansatz_solve, qj0_constant, subdominant_k, subdominant_third_order, whittaker_solution,
};
use qes_core::frobenius::{bd_irregular_series_eval, regulated_constant, resonant_log_coefficient};
use qes_core::mp::float_str;
use qes_core::ode::LinearOde;
use qes_core::params::{alpha_qes, g_qes, GeneralProblem, SexticProblem, ThirdOrderProblem};
use qes_core::rational::{parse_q, q, qi, q_str, Q};
use qes_core::shoot::{
    biorthogonality_check, irregular_spectrum_sextic, isospectral_report, spectrum_general, spectrum_sextic,
    spectrum_third, Spectrum,
};
use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::config::Settings;

/// One named pass/fail check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Certification {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Certification {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub certifications: Vec<Certification>,
    pub samples: Option<Vec<(f64, f64)>>,
}

fn rational(name: &str, v: &Option<String>) -> Result<Option<Q>> {
    v.as_deref()
        .map(|s| parse_q(s).with_context(|| format!("--{name}")))
        .transpose()
}

fn rational_list(name: &str, v: &Option<String>) -> Result<Option<Vec<Q>>> {
    v.as_deref()
        .map(|s| {
            s.split(',')
                .map(|t| parse_q(t).with_context(|| format!("--{name}")))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()
}

fn triple(v: Vec<Q>) -> Result<[Q; 3]> {
    let n = v.len();
    v.try_into().map_err(|_| anyhow!("--g needs exactly three exponents, got {n}"))
}

fn l_of(p: &ParamArgs) -> Result<Q> {
    Ok(rational("l", &p.l)?.unwrap_or_else(|| qi(0)))
}

/// (α, l) from `--alpha`/`--l` or from the QES level `--j`.
fn sextic_params(p: &ParamArgs) -> Result<(Q, Q)> {
    let l = l_of(p)?;
    match (rational("alpha", &p.alpha)?, p.j) {
        (Some(a), None) => Ok((a, l)),
        (None, Some(j)) => Ok((alpha_qes(j, &l)?, l)),
        (Some(_), Some(_)) => bail!("give either --alpha or --j, not both"),
        (None, None) => bail!("the sextic family needs --alpha or --j"),
    }
}

/// A direct triple from `--g` or from `--j`/`--l`.
fn third_triple(p: &ParamArgs) -> Result<[Q; 3]> {
    match (rational_list("g", &p.g)?, p.j) {
        (Some(g), None) => triple(g),
        (None, Some(j)) => Ok(g_qes(j, &l_of(p)?, false)?),
        (Some(_), Some(_)) => bail!("give either --g or --j, not both"),
        (None, None) => bail!("the third-order family needs --g or --j"),
    }
}

fn general_problem(p: &ParamArgs) -> Result<GeneralProblem> {
    let n = p.order.context("the general family needs --order")?;
    let m = p.power.context("the general family needs --power")?;
    let g = rational_list("g", &p.g)?.context("the general family needs --g")?;
    Ok(GeneralProblem::new(n, m, g)?)
}

fn poly_json(p: &EPolynomial, prec: u32, emit: Emit) -> Result<Value> {
    Ok(match emit {
        Emit::Roots => {
            let roots = isolate_real_roots(p, prec);
            json!({
                "var": p.var,
                "degree": p.degree(),
                "roots": roots,
                "approx": roots.values_f64(),
            })
        }
        Emit::Coeffs => json!({
            "var": p.var,
            "degree": p.degree(),
            "coeffs": p.coeffs().iter().map(q_str).collect::<Vec<_>>(),
        }),
        other => bail!("poly emits coeffs or roots, not {other:?}"),
    })
}

fn spectrum_json(s: &Spectrum) -> Value {
    json!({
        "eigenvalues": s.eigenvalues,
        "floor": s.floor,
        "warnings": s.warnings,
    })
}

/// Grid `start:end:count` (count ≥ 1, inclusive end).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be start:end:count, got '{s}'");
    }
    let a: f64 = parts[0].parse().context("grid start")?;
    let b: f64 = parts[1].parse().context("grid end")?;
    let n: usize = parts[2].parse().context("grid count")?;
    if n == 0 || !(a.is_finite() && b.is_finite()) || (n > 1 && b < a) {
        bail!("grid '{s}' is empty or reversed");
    }
    Ok(if n == 1 {
        vec![a]
    } else {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    })
}

/// Certification threshold for multiple-precision identities: half the
/// working bits.
fn mp_threshold(prec: u32) -> f64 {
    2f64.powi(-(prec as i32) / 2)
}

pub fn execute(cmd: &Command, s: &Settings, emit: Emit) -> Result<Outcome> {
    let prec = s.precision_bits;
    let spec = s.bvp();
    let mut out = Outcome::default();
    match cmd {
        Command::Poly(a) => {
            let p = &a.params;
            let poly = match a.family {
                PolyFamily::Sextic => {
                    let (alpha, l) = sextic_params(p)?;
                    let n = a.n.or(p.j.map(|j| j as usize)).context("--n is required without --j")?;
                    bd_second(&alpha, &l, n)
                }
                PolyFamily::Irregular => {
                    let j = p.j.context("the irregular family needs --j")?;
                    irregular_obstruction(j, &l_of(p)?)?.poly
                }
                PolyFamily::Cheng => {
                    let n = a.n.or(p.j.map(|j| j as usize)).context("--n is required without --j")?;
                    cheng_third(&third_triple(p)?, n)
                }
                PolyFamily::General => general_family(
                    p.order.context("--order")?,
                    p.power.context("--power")?,
                    &rational_list("g", &p.g)?.context("--g")?,
                    a.n.context("--n")?,
                )?,
            };
            out.results = poly_json(&poly, prec, emit)?;
        }
        Command::Spectrum(a) => {
            let p = &a.params;
            let spectrum = if a.k_max == 0 {
                Spectrum::default()
            } else {
                match a.problem {
                    ProblemKind::Sextic => {
                        let (alpha, l) = sextic_params(p)?;
                        spectrum_sextic(&SexticProblem::new(alpha, l), a.k_max, &spec)?
                    }
                    ProblemKind::Third => {
                        spectrum_third(&ThirdOrderProblem::from_triple(&third_triple(p)?)?, a.k_max, &spec)?
                    }
                    ProblemKind::Adjoint => spectrum_third(
                        &ThirdOrderProblem::from_triple(&third_triple(p)?)?.to_adjoint(),
                        a.k_max,
                        &spec,
                    )?,
                    ProblemKind::General => spectrum_general(&general_problem(p)?, a.k_max, &spec)?,
                    ProblemKind::Irregular => {
                        let j = p.j.context("the irregular problem needs --j")?;
                        irregular_spectrum_sextic(j, &l_of(p)?, a.k_max, &spec)?
                    }
                }
            };
            out.results = spectrum_json(&spectrum);
        }
        Command::Isospec(a) => {
            let (alpha, l) = sextic_params(&a.params)?;
            let r = isospectral_report(&alpha, &l, a.k_max, &spec)?;
            out.certifications.push(Certification::new(
                "pairing",
                r.max_abs_error < a.pair_tol && r.pairs.iter().all(|p| !p.gap),
                format!("max |E − κĒ| = {:e} (threshold {:e})", r.max_abs_error, a.pair_tol),
            ));
            out.results = serde_json::to_value(&r)?;
        }
        Command::Resonance(a) => {
            let p = &a.params;
            let (ode, label, var, reference, j) = match a.family {
                ResonanceFamily::Sextic => {
                    let j = p.j.context("the sextic resonance needs --j")?;
                    let l = l_of(p)?;
                    let jq = qi(j as i64);
                    let problem = SexticProblem::new(qi(2) * &jq + qi(4) * &l + qi(2), -(jq + q(1, 2)));
                    let reference = bd_second(&alpha_qes(j, &l)?, &l, j as usize);
                    (LinearOde::sextic(&problem), 0, EVar::E, reference, j)
                }
                ResonanceFamily::Third => {
                    let g = third_triple(p)?;
                    let ode = LinearOde::third(&ThirdOrderProblem::from_triple(&g)?);
                    let j = ode
                        .resonances_from(1)
                        .first()
                        .map(|&(_, index)| index as u32)
                        .ok_or(qes_core::QesError::NonResonant)?;
                    (ode, 1, EVar::Ebar, cheng_third(&g, j as usize), j)
                }
            };
            let info = resonant_log_coefficient(&ode, label, var)?;
            let roots = isolate_real_roots(&info.log_coefficient, prec);
            let proportional = info.log_coefficient.proportionality(&reference).is_some();
            out.certifications.push(Certification::new(
                "proportional-to-recursion",
                proportional,
                format!("log coefficient against the degree-{j} recursion polynomial"),
            ));
            let tagged: Vec<Value> = roots
                .roots
                .iter()
                .map(|r| json!({"root": r, "approx": r.to_f64(), "channel": "qes"}))
                .collect();
            out.results = json!({
                "resonance": info,
                "roots": tagged,
                "complex_roots": info.log_coefficient.degree().unwrap_or(0) - roots.total_multiplicity(),
            });
        }
        Command::Closedform(a) => closedform(a, prec, &mut out)?,
        Command::Biorthogonality(a) => {
            let g = triple(rational_list("g", &Some(a.g.clone()))?.unwrap_or_default())?;
            let r = biorthogonality_check(&g, a.n_max, &spec)?;
            out.certifications.push(Certification::new(
                "off-diagonal",
                r.max_off_diagonal < a.orth_tol,
                format!("max |⟨n|m⟩| = {:e} (threshold {:e})", r.max_off_diagonal, a.orth_tol),
            ));
            out.results = serde_json::to_value(&r)?;
        }
    }
    Ok(out)
}

fn closedform(a: &ClosedformArgs, prec: u32, out: &mut Outcome) -> Result<()> {
    let p = &a.params;
    let l = l_of(p)?;
    let grid = a.grid.as_deref().map(parse_grid).transpose()?;
    let threshold = mp_threshold(prec);
    match a.kind {
        ClosedformKind::Whittaker => {
            let j = p.j.unwrap_or(1);
            let qj = qj0_constant(j, &l, prec)?;
            let zero = Float::new(prec);
            let mut samples = Vec::new();
            let mut worst: f64 = 0.0;
            for x in grid.iter().flatten() {
                let xf = Float::with_val(prec, *x);
                let w = whittaker_solution(j, &l, &xf)?;
                let s = bd_irregular_series_eval(j, &l, &zero, &qj, &xf, 100_000)?;
                let rel = Float::with_val(prec, &w - &s).abs() / Float::with_val(prec, w.abs_ref());
                worst = worst.max(rel.to_f64());
                samples.push((*x, w.to_f64(), float_str(&w)));
            }
            if !samples.is_empty() {
                out.certifications.push(Certification::new(
                    "series-identity",
                    worst < threshold,
                    format!("max relative difference to the series {worst:e} (threshold {threshold:e})"),
                ));
            }
            out.results = json!({
                "j": j, "l": q_str(&l),
                "qj0": float_str(&qj),
                "samples": samples.iter().map(|(x, _, v)| json!([x, v])).collect::<Vec<_>>(),
            });
            out.samples = grid.map(|_| samples.iter().map(|(x, v, _)| (*x, *v)).collect());
        }
        ClosedformKind::Bessel => {
            if grid.is_some() {
                bail!("the Bessel ansatz has no sampling grid; omit --grid");
            }
            let j = p.j.context("the Bessel ansatz needs --j")?;
            let sol = bessel_ansatz_solve(j, &l, prec)?;
            let worst = sol
                .eigenpairs
                .iter()
                .flat_map(|e| e.residuals.iter().copied())
                .fold(0.0f64, f64::max);
            out.certifications.push(Certification::new(
                "proportional-to-recursion",
                sol.proportional_to_pj,
                "eigencondition against the degree-J recursion polynomial".into(),
            ));
            out.certifications.push(Certification::new(
                "residual",
                worst < threshold,
                format!("max relative ODE residual {worst:e} (threshold {threshold:e})"),
            ));
            out.results = serde_json::to_value(&sol)?;
        }
        ClosedformKind::F02 => {
            let g0 = match rational("g0", &a.g0)? {
                Some(g) => g,
                None => g_qes(1, &l, false)?[0].clone(),
            };
            let k = subdominant_k(&g0, prec)?;
            let mut samples = Vec::new();
            for x in grid.iter().flatten() {
                let v = subdominant_third_order(&g0, &Float::with_val(prec, *x))?;
                samples.push((*x, v.value.to_f64(), float_str(&v.value)));
            }
            out.results = json!({
                "g0": q_str(&g0),
                "k": float_str(&k),
                "implied_c": float_str(&regulated_constant(&g0, prec)?),
                "samples": samples.iter().map(|(x, _, v)| json!([x, v])).collect::<Vec<_>>(),
            });
            out.samples = grid.map(|_| samples.iter().map(|(x, v, _)| (*x, *v)).collect());
        }
    }
    Ok(())
}
