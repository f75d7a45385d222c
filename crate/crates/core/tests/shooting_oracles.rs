//! The shooting solver against the exact QES levels, and its robustness to
//! the numerical settings.

use qes_core::bdpoly::qes_eigenvalues;
use qes_core::params::{alpha_qes, g_qes, SexticProblem, ThirdOrderProblem};
use qes_core::rational::{q, qi};
use qes_core::shoot::{irregular_spectrum_sextic, spectrum_sextic, spectrum_third, BvpSpec, Channel, Spectrum};

fn assert_ordered(s: &Spectrum) {
    for w in s.eigenvalues.windows(2) {
        assert!(w[0].value < w[1].value);
        assert!(w[0].bracket[1] < w[1].bracket[0], "overlapping brackets {:?} {:?}", w[0].bracket, w[1].bracket);
    }
}

#[test]
fn sextic_spectra_contain_every_exact_level() {
    let spec = BvpSpec::default();
    for j in 1..=3u32 {
        for l in [qi(0), q(1, 2)] {
            let exact = qes_eigenvalues(j, &l, 128).unwrap().values_f64();
            let s = spectrum_sextic(&SexticProblem::new(alpha_qes(j, &l).unwrap(), l.clone()), j as usize + 1, &spec)
                .unwrap();
            assert_ordered(&s);
            let values = s.values();
            for e in &exact {
                assert!(values.iter().any(|v| (v - e).abs() < 1e-8), "J={j} l={l}: {e} not in {values:?}");
            }
            // and the exact levels are the lowest J
            for (a, b) in values.iter().zip(&exact) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn third_order_spectra_contain_the_scaled_levels() {
    let spec = BvpSpec::default();
    let kappa = 4.0 / (3.0 * 3f64.sqrt());
    for j in 1..=3u32 {
        let l = qi(0);
        let g = g_qes(j, &l, false).unwrap();
        let s = spectrum_third(&ThirdOrderProblem::from_triple(&g).unwrap(), j as usize + 1, &spec).unwrap();
        assert_ordered(&s);
        let values = s.values();
        for e in qes_eigenvalues(j, &l, 128).unwrap().values_f64() {
            assert!(values.iter().any(|v| (v - e / kappa).abs() < 1e-6 * (1.0 + e.abs())), "J={j}: {e} vs {values:?}");
        }
    }
}

#[test]
fn irregular_channels_are_tagged() {
    let spec = BvpSpec::default();
    let s = irregular_spectrum_sextic(1, &qi(0), 3, &spec).unwrap();
    assert_ordered(&s);
    let qes: Vec<f64> = s.eigenvalues.iter().filter(|e| e.channel == Some(Channel::Qes)).map(|e| e.value).collect();
    assert_eq!(qes.len(), 1);
    assert!(qes[0].abs() < 1e-8);
    assert!(s.eigenvalues.iter().all(|e| e.channel.is_some()));
}

#[test]
fn settings_do_not_move_certified_eigenvalues() {
    let base = BvpSpec::default();
    let p = SexticProblem::new(qi(1), q(1, 4));
    let reference = spectrum_sextic(&p, 4, &base).unwrap();
    let variants = [
        BvpSpec { integrator_tol: base.integrator_tol / 2.0, ..base.clone() },
        BvpSpec { xm: base.xm * 1.2, ..base.clone() },
        BvpSpec { xm: base.xm * 0.8, ..base.clone() },
    ];
    for spec in &variants {
        let s = spectrum_sextic(&p, 4, spec).unwrap();
        for (a, b) in reference.eigenvalues.iter().zip(&s.eigenvalues) {
            let allowed = a.residual.max(b.residual);
            assert!((a.value - b.value).abs() <= allowed, "{} vs {} (allowed {allowed:e})", a.value, b.value);
        }
    }
}
