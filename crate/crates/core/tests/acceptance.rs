//! Acceptance suite: twelve end-to-end criteria, each printing one
//! `PASS`/`FAIL` line at its stated tolerance. The target runs without the
//! libtest harness so the lines always appear; it exits non-zero when a
//! criterion fails, except for checks listed as expected failures (which
//! must then actually fail).

use qes_core::bdpoly::{
    bd_second, cheng_third, general_family, irregular_obstruction, kappa_scaled_cheng, qes_eigenvalues, EPolynomial,
    EVar,
};
use qes_core::closedform::{bessel_ansatz_solve, qj0_constant, subdominant_third_order, whittaker_solution};
use qes_core::frobenius::{bd_irregular_series_eval, cheng_closed_form, cheng_denominator, cheng_iterate};
use qes_core::mp::{parse_float, rel_diff};
use qes_core::params::{alpha_from_g, alpha_qes, g_qes, GeneralProblem, SexticProblem, ThirdOrderProblem};
use qes_core::rational::{q, qi, Q};
use qes_core::shoot::{
    biorthogonality_check, irregular_spectrum_sextic, isospectral_report, qes_point, spectrum_general,
    spectrum_sextic, spectrum_third, third_shooter, BvpSpec, Channel,
};
use rug::Float;

struct Verdict {
    n: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(n: u32, name: &'static str, pass: bool, detail: &str) -> Verdict {
    Verdict {
        n,
        name,
        pass,
        detail: detail.to_string(),
    }
}

fn contains(values: &[f64], target: f64, tol: f64) -> bool {
    values.iter().any(|v| (v - target).abs() < tol)
}

fn c01_qes_eigenvalues_in_closed_form() -> Verdict {
    let mut worst: f64 = 0.0;
    let j1 = qes_eigenvalues(1, &qi(0), 128).unwrap();
    let exact_zero = j1.len() == 1 && j1.roots[0].exact_value() == Some(&qi(0));
    for l in [qi(0), q(1, 2), qi(1)] {
        let r = qes_eigenvalues(2, &l, 128).unwrap().values_f64();
        let e = 2.0 * 2f64.sqrt() * (3.0 + 2.0 * qes_core::rational::q_f64(&l)).sqrt();
        assert_eq!(r.len(), 2);
        worst = worst.max((r[0] + e).abs()).max((r[1] - e).abs());
    }
    for l in [0i64, 1, 2] {
        let r = qes_eigenvalues(3, &qi(l), 128).unwrap().values_f64();
        let e = 8.0 * (2.0 + l as f64).sqrt();
        assert_eq!(r.len(), 3);
        worst = worst.max((r[0] + e).abs()).max(r[1].abs()).max((r[2] - e).abs());
    }
    report(
        1,
        "QES eigenvalues",
        exact_zero && worst < 1e-12,
        &format!("J=1 root exactly 0: {exact_zero}; max deviation at J=2,3 {worst:.1e} (tol 1e-12)"),
    )
}

fn c02_obstruction_is_the_recursion_polynomial() -> Verdict {
    let mut ok = true;
    let mut checked = 0;
    for j in 1..=5u32 {
        for l in [qi(0), q(1, 3), qi(1)] {
            let obstruction = irregular_obstruction(j, &l).unwrap().poly;
            let pj = bd_second(&alpha_qes(j, &l).unwrap(), &l, j as usize);
            ok &= obstruction.degree() == Some(j as usize) && obstruction.proportionality(&pj).is_some();
            checked += 1;
        }
    }
    report(2, "obstruction ∝ P_J", ok, &format!("{checked} (J, l) pairs, exact rational proportionality"))
}

fn c03_kappa_scaling_identity() -> Verdict {
    let mut worst = Float::new(128);
    for j in 1..=3u32 {
        for l in [qi(0), q(1, 3), qi(1)] {
            let g = g_qes(j, &l, false).unwrap();
            let (alpha, l2) = alpha_from_g(&g[0], &g[2]);
            assert_eq!(alpha, alpha_qes(j, &l).unwrap());
            for n in 0..=20usize {
                let p = bd_second(&alpha, &l2, n);
                for e in [-100i32, -10, -1, 1, 10, 100] {
                    let ef = Float::with_val(128, e);
                    let lhs = kappa_scaled_cheng(&g, n, &ef);
                    let rhs = p.eval_float(&ef);
                    let d = rel_diff(&lhs, &rhs);
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
    }
    let w = worst.to_f64();
    report(3, "κ-scaling identity", w < 1e-30, &format!("max relative error {w:.1e} over n ≤ 20 (tol 1e-30)"))
}

fn c04_isospectrality() -> Verdict {
    let spec = BvpSpec::default();
    let (aq, lq) = qes_point(2, &qi(0)).unwrap();
    let mut worst: f64 = 0.0;
    let mut gaps = 0;
    for (alpha, l) in [(qi(0), qi(0)), (aq, lq), (qi(1), q(1, 4))] {
        let r = isospectral_report(&alpha, &l, 6, &spec).unwrap();
        gaps += r.pairs.iter().filter(|p| p.gap).count();
        worst = worst.max(r.max_abs_error);
    }
    report(
        4,
        "isospectrality",
        gaps == 0 && worst < 1e-6,
        &format!("levels 0..=5 at three points, max |E − κĒ| = {worst:.1e}, {gaps} gaps (tol 1e-6)"),
    )
}

fn c05_shooting_finds_the_algebraic_levels() -> Verdict {
    let spec = BvpSpec::default();
    let alpha = alpha_qes(2, &qi(0)).unwrap();
    let s2 = spectrum_sextic(&SexticProblem::new(alpha, qi(0)), 4, &spec).unwrap().values();
    let e = 2.0 * 6f64.sqrt();
    let sextic_ok = contains(&s2, e, 1e-8) && contains(&s2, -e, 1e-8);
    let g = g_qes(2, &qi(0), false).unwrap();
    let s3 = spectrum_third(&ThirdOrderProblem::from_triple(&g).unwrap(), 4, &spec).unwrap().values();
    let eb = 3.0 * 4.5f64.sqrt();
    let third_ok = contains(&s3, eb, 1e-6) && contains(&s3, -eb, 1e-6);
    report(
        5,
        "shooting vs algebra",
        sextic_ok && third_ok,
        &format!("sextic ±2√6 within 1e-8: {sextic_ok}; third order ±3√(9/2) within 1e-6: {third_ok}"),
    )
}

fn c06_irregular_spectrum_splits() -> Verdict {
    let spec = BvpSpec::default();
    let s = irregular_spectrum_sextic(2, &qi(0), 6, &spec).unwrap();
    let qes: Vec<f64> = s.eigenvalues.iter().filter(|e| e.channel == Some(Channel::Qes)).map(|e| e.value).collect();
    let regular: Vec<f64> =
        s.eigenvalues.iter().filter(|e| e.channel == Some(Channel::Regular)).map(|e| e.value).collect();
    let e = 2.0 * 6f64.sqrt();
    let qes_ok = qes.len() == 2 && contains(&qes, e, 1e-6) && contains(&qes, -e, 1e-6);
    let partner = spectrum_sextic(&SexticProblem::new(qi(6), q(3, 2)), 4, &spec).unwrap().values();
    let mut worst = f64::INFINITY;
    if regular.len() >= 4 && partner.len() >= 4 {
        worst = (0..4).map(|k| (regular[k] - partner[k]).abs()).fold(0.0, f64::max);
    }
    report(
        6,
        "irregular spectrum = QES pair ∪ partner",
        qes_ok && worst < 1e-6,
        &format!("QES-tagged {qes:?}; first 4 regular levels vs ℋ₂(6, 3/2): max diff {worst:.1e} (tol 1e-6)"),
    )
}

fn c07_bessel_ansatz() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    for (j, l) in [(1u32, 0i64), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1)] {
        let s = bessel_ansatz_solve(j, &qi(l), 128).unwrap();
        let expected = if j % 2 == 1 { (j as i64 + l) as usize } else { (2 * (j as i64 + l)) as usize };
        let pj = bd_second(&alpha_qes(j, &qi(l)).unwrap(), &qi(l), j as usize);
        let prop = s.eigencondition.proportionality(&pj).is_some() && s.proportional_to_pj;
        ok &= prop && s.truncation == expected;
        lines.push(format!("({j},{l}) N={}", s.truncation));
    }
    report(7, "Bessel ansatz exactness", ok, &format!("eigencondition ∝ P_J with {}", lines.join(", ")))
}

fn c08_whittaker_series_identity() -> Verdict {
    let qj = qj0_constant(1, &qi(0), 128).unwrap();
    let zero = Float::new(128);
    let mut worst: f64 = 0.0;
    for x in ["0.5", "1", "2"] {
        let x = parse_float(x, 128).unwrap();
        let w = whittaker_solution(1, &qi(0), &x).unwrap();
        let s = bd_irregular_series_eval(1, &qi(0), &zero, &qj, &x, 100_000).unwrap();
        worst = worst.max(rel_diff(&w, &s).to_f64());
    }
    report(8, "Whittaker = series", worst < 1e-20, &format!("max relative difference {worst:.1e} (tol 1e-20)"))
}

/// The ₀F₂ combination and the shooting eigenfunction of the adjoint problem
/// at Ē = 0 on the J = 1 locus.
fn c09a_subdominant_combination_matches_shooting() -> Verdict {
    let g = g_qes(1, &qi(0), false).unwrap();
    let adjoint = ThirdOrderProblem::from_triple(&g).unwrap().to_adjoint();
    let shooter = third_shooter(&adjoint, &BvpSpec::default()).unwrap();
    let mut f = shooter.eigenfunction(0.0, Some(Channel::Qes)).unwrap();
    f.normalise_origin(0).unwrap();
    let mut worst: f64 = 0.0;
    for x in [1.0, 2.0, 3.0] {
        let closed = subdominant_third_order(&g[0], &Float::with_val(128, x)).unwrap().value.to_f64();
        worst = worst.max((closed - f.eval(x).unwrap()).abs() / closed.abs());
    }
    report(
        9,
        "₀F₂ combination vs shooting",
        worst < 1e-8,
        &format!("max relative difference at x = 1, 2, 3: {worst:.1e} (tol 1e-8)"),
    )
}

/// The boundedness half of the same criterion does not hold: the growing
/// mode is removed exactly, but what remains are the two e^{−x²/4}
/// oscillating modes, so χ·x·e^{x²/2} grows like e^{x²/4} and changes sign.
/// The check is kept at its stated threshold and listed as an expected
/// failure.
fn c09b_subdominant_decay_bound() -> Verdict {
    let g = g_qes(1, &qi(0), false).unwrap();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..=60 {
        let x = 2.0 + 0.05 * i as f64;
        let v = subdominant_third_order(&g[0], &Float::with_val(128, x)).unwrap().value.to_f64();
        let scaled = (v * x * (x * x / 2.0).exp()).abs();
        lo = lo.min(scaled);
        hi = hi.max(scaled);
    }
    let ratio = hi / lo;
    report(
        9,
        "₀F₂ decay bound",
        ratio < 10.0,
        &format!("max/min of |χ·x·e^(x²/2)| on [2,5] = {ratio:.1e} (bound 10)"),
    )
}

fn c10_cheng_iterates() -> Verdict {
    let eb = EPolynomial::x(EVar::Ebar);
    let c = |v: Q| EPolynomial::constant(EVar::Ebar, v);
    let mut ok = true;
    let mut literal_typo_differs = true;
    for g in [[q(1, 4), qi(1), q(7, 4)], [q(-1, 3), q(1, 2), q(17, 6)], [qi(5), q(-3, 2), q(-1, 2)]] {
        let d = |m: usize| cheng_denominator(&g, m);
        let one = Q::from_integer(1.into());
        let it1 = cheng_iterate(&g, &eb, 1).unwrap().coefficients;
        let printed1 = vec![c(one.clone()), eb.scale(&(-&one / d(1))), c(&one / d(2))];
        ok &= it1 == printed1;
        let it2 = cheng_iterate(&g, &eb, 2).unwrap().coefficients;
        let x6 = c(&one / d(2)).add(&eb.mul(&eb).scale(&(&one / (d(1) * d(2)))));
        let x9_rest = eb.scale(&(-&one / (d(2) * d(3))));
        let misplaced = eb.scale(&(-&one / (d(1) * d(3))));
        let x12 = c(&one / (d(2) * d(4)));
        // the −Ē/(D1·D3) term belongs to x⁹
        let corrected = vec![c(one.clone()), eb.scale(&(-&one / d(1))), x6.clone(), x9_rest.add(&misplaced), x12.clone()];
        let literal = vec![c(one.clone()), eb.scale(&(-&one / d(1))), x6.add(&misplaced), x9_rest, x12];
        ok &= it2 == corrected;
        literal_typo_differs &= it2 != literal;
        for n in 1..=10 {
            let it = cheng_iterate(&g, &eb, n).unwrap().coefficients;
            let cf = cheng_closed_form(&g, &eb, n + 1).unwrap().coefficients;
            ok &= it[..=n] == cf[..=n];
        }
    }
    report(
        10,
        "Cheng iterates",
        ok,
        &format!(
            "iterates 1, 2 exact (−Ē/(D1·D3) at x⁹; literal x⁶ placement differs: {literal_typo_differs}); closed form through x^(3n), n ≤ 10"
        ),
    )
}

fn c11_general_family() -> Verdict {
    let spec = BvpSpec::default();
    let mut exact = true;
    for g in [[q(1, 4), qi(1), q(7, 4)], g_qes(2, &q(1, 3), false).unwrap()] {
        for m in 0..=20usize {
            let a = general_family(3, 1, &g, m).unwrap();
            exact &= a.coeffs() == cheng_third(&g, m).coeffs();
        }
    }
    let gq = g_qes(1, &qi(0), false).unwrap();
    let s = spectrum_general(&GeneralProblem::new(3, 1, gq.to_vec()).unwrap(), 3, &spec).unwrap().values();
    let hidden = contains(&s, 0.0, 1e-6);
    let mut worst: f64 = 0.0;
    for l in [qi(0), q(1, 3)] {
        let g = vec![-l.clone(), qi(1) + &l];
        let a = spectrum_general(&GeneralProblem::new(2, 3, g).unwrap(), 3, &spec).unwrap().values();
        let b = spectrum_sextic(&SexticProblem::new(qi(0), l), 3, &spec).unwrap().values();
        worst = if a.len() == 3 && b.len() == 3 {
            (0..3).map(|k| (a[k] - b[k]).abs()).fold(worst, f64::max)
        } else {
            f64::INFINITY
        };
    }
    report(
        11,
        "general family",
        exact && hidden && worst < 1e-6,
        &format!("n=3 M=1 ≡ Cheng for m ≤ 20: {exact}; hidden root 0 found: {hidden}; n=2 M=3 vs sextic max diff {worst:.1e}"),
    )
}

fn c12_biorthogonality() -> Verdict {
    let r = biorthogonality_check(&[q(1, 4), qi(1), q(7, 4)], 2, &BvpSpec::default()).unwrap();
    report(
        12,
        "biorthogonality",
        r.max_off_diagonal < 1e-6,
        &format!("max normalised off-diagonal {:.1e} for n, m ≤ 2 (tol 1e-6)", r.max_off_diagonal),
    )
}

type Check = fn() -> Verdict;

const CHECKS: &[(&str, Check, bool)] = &[
    ("c01", c01_qes_eigenvalues_in_closed_form, false),
    ("c02", c02_obstruction_is_the_recursion_polynomial, false),
    ("c03", c03_kappa_scaling_identity, false),
    ("c04", c04_isospectrality, false),
    ("c05", c05_shooting_finds_the_algebraic_levels, false),
    ("c06", c06_irregular_spectrum_splits, false),
    ("c07", c07_bessel_ansatz, false),
    ("c08", c08_whittaker_series_identity, false),
    ("c09a", c09a_subdominant_combination_matches_shooting, false),
    ("c09b", c09b_subdominant_decay_bound, true),
    ("c10", c10_cheng_iterates, false),
    ("c11", c11_general_family, false),
    ("c12", c12_biorthogonality, false),
];

fn main() {
    // `cargo test -- <filter>` passes the filter through; honour a plain
    // substring filter and ignore libtest flags
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (id, check, expected_failure) in CHECKS {
        if !filters.is_empty() && !filters.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        let v = match std::panic::catch_unwind(check) {
            Ok(v) => v,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Verdict {
                    n: 0,
                    name: "panicked",
                    pass: false,
                    detail: format!("{id}: {msg}"),
                }
            }
        };
        let tag = match (v.pass, expected_failure) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (expected)",
            (true, true) => "PASS (unexpected)",
        };
        println!("criterion {:>2} [{tag}] {}: {}", v.n, v.name, v.detail);
        if v.pass == *expected_failure {
            unexpected.push(format!("{id} ({tag})"));
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected");
    } else {
        println!("acceptance: unexpected outcomes: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
