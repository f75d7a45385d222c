//! Problem parameterisations, the maps between the second- and third-order
//! families, the quasi-exactly-solvable loci and the WKB compatibility test for
//! factorised ansätze.
//!
//! Everything here is exact rational arithmetic; the only irrational quantity,
//! κ = 4/(3√3), is produced at a requested binary precision.

use num_traits::One;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::rational::{q, qi, serde_q, Q};

/// −ψ″ + (x⁶ + αx² + l(l+1)/x²)ψ = Eψ on the positive half-line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SexticProblem {
    #[serde(with = "serde_q")]
    pub alpha: Q,
    #[serde(with = "serde_q")]
    pub l: Q,
    /// `true` selects the origin behaviour x^{l+1}; `false` the continued
    /// branch x^{−l}. For l > −1/2 the first is the regular one.
    pub regular: bool,
}

impl SexticProblem {
    pub fn new(alpha: Q, l: Q) -> Self {
        SexticProblem {
            alpha,
            l,
            regular: true,
        }
    }

    /// The two indicial roots, in the fixed order (l+1, −l).
    pub fn exponents(&self) -> [Q; 2] {
        [&self.l + Q::one(), -self.l.clone()]
    }

    /// The indicial root selected by the boundary condition at the origin.
    pub fn selected_exponent(&self) -> Q {
        let [a, b] = self.exponents();
        if self.regular {
            a
        } else {
            b
        }
    }

    /// Bender-Dunne index j = −(α + 2l + 1)/4; a positive integer on QES loci.
    pub fn bd_index(&self) -> Q {
        -(&self.alpha + qi(2) * &self.l + Q::one()) / qi(4)
    }

    /// The QES level count J if (α, l) lies on a QES locus.
    pub fn qes_level(&self) -> Option<u32> {
        crate::rational::q_as_positive_integer(&self.bd_index()).map(|j| j as u32)
    }

    /// Pointwise potential including the centrifugal term.
    pub fn potential_f64(&self, x: f64) -> f64 {
        let a = crate::rational::q_f64(&self.alpha);
        let l = crate::rational::q_f64(&self.l);
        x.powi(6) + a * x * x + l * (l + 1.0) / (x * x)
    }

    /// min over x > 0 of x⁶ + αx², a lower bound for the regular spectrum.
    pub fn potential_floor(&self) -> f64 {
        let a = crate::rational::q_f64(&self.alpha);
        if a >= 0.0 {
            0.0
        } else {
            let x2 = (-a / 3.0).sqrt();
            x2 * x2 * x2 + a * x2
        }
    }
}

/// φ‴ + x³φ + (L/x³)φ − G(x⁻²φ′ − x⁻³φ) = Ēφ, or its adjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThirdOrderProblem {
    #[serde(with = "serde_q::vec")]
    g: Vec<Q>,
    pub adjoint: bool,
}

impl ThirdOrderProblem {
    /// Build from the three exponents of the direct operator; they must sum to 3.
    pub fn new(g0: Q, g1: Q, g2: Q) -> Result<Self> {
        let sum = &g0 + &g1 + &g2;
        if sum != qi(3) {
            return Err(QesError::InvalidParameter(format!(
                "g0 + g1 + g2 must equal 3, got {sum}"
            )));
        }
        Ok(ThirdOrderProblem {
            g: vec![g0, g1, g2],
            adjoint: false,
        })
    }

    pub fn from_triple(g: &[Q; 3]) -> Result<Self> {
        Self::new(g[0].clone(), g[1].clone(), g[2].clone())
    }

    /// The same parameters viewed through the adjoint operator.
    pub fn to_adjoint(&self) -> Self {
        ThirdOrderProblem {
            g: self.g.clone(),
            adjoint: true,
        }
    }

    pub fn to_direct(&self) -> Self {
        ThirdOrderProblem {
            g: self.g.clone(),
            adjoint: false,
        }
    }

    /// Exponents of the direct operator (g0, g1, g2), whatever the flag.
    pub fn g(&self) -> [Q; 3] {
        [self.g[0].clone(), self.g[1].clone(), self.g[2].clone()]
    }

    /// Indicial exponents of the operator in use: gᵢ, or 2 − gᵢ when adjoint.
    pub fn exponents(&self) -> [Q; 3] {
        let g = self.g();
        if self.adjoint {
            g.map(|gi| qi(2) - gi)
        } else {
            g
        }
    }

    fn e2(&self) -> Q {
        &self.g[0] * &self.g[1] + &self.g[0] * &self.g[2] + &self.g[1] * &self.g[2]
    }

    fn e3(&self) -> Q {
        &self.g[0] * &self.g[1] * &self.g[2]
    }

    /// G = 2 − (g0g1 + g0g2 + g1g2); unchanged by the adjoint.
    pub fn big_g(&self) -> Q {
        qi(2) - self.e2()
    }

    /// L = −2 − g0g1g2 + (g0g1 + g0g2 + g1g2); sign flipped for the adjoint.
    pub fn big_l(&self) -> Q {
        let l = qi(-2) - self.e3() + self.e2();
        if self.adjoint {
            -l
        } else {
            l
        }
    }

    /// True when g0 < g1 < g2 strictly.
    pub fn is_ordered(&self) -> bool {
        self.g[0] < self.g[1] && self.g[1] < self.g[2]
    }

    /// The isospectral sextic partner (α, l).
    pub fn sextic_partner(&self) -> SexticProblem {
        let (alpha, l) = alpha_from_g(&self.g[0], &self.g[2]);
        SexticProblem::new(alpha, l)
    }
}

/// [(−1)^{n+1} D(g_{n−1}−(n−1))⋯D(g0) + x^{nM}]ψ = Eψ with D(g) = d/dx − g/x.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralProblem {
    pub n: u32,
    pub m: u32,
    #[serde(with = "serde_q::vec")]
    pub g: Vec<Q>,
}

impl GeneralProblem {
    pub fn new(n: u32, m: u32, g: Vec<Q>) -> Result<Self> {
        if n < 2 {
            return Err(QesError::InvalidParameter(format!("order n must be >= 2, got {n}")));
        }
        if m < 1 {
            return Err(QesError::InvalidParameter("potential exponent M must be >= 1".into()));
        }
        if g.len() != n as usize {
            return Err(QesError::InvalidParameter(format!(
                "expected {n} exponents, got {}",
                g.len()
            )));
        }
        let sum: Q = g.iter().sum();
        let want = qi((n * (n - 1) / 2) as i64);
        if sum != want {
            return Err(QesError::InvalidParameter(format!(
                "exponents must sum to n(n-1)/2 = {want}, got {sum}"
            )));
        }
        Ok(GeneralProblem { n, m, g })
    }

    pub fn is_sorted(&self) -> bool {
        self.g.windows(2).all(|w| w[0] < w[1])
    }

    /// Exponents in ascending order together with the permutation applied
    /// (`perm[i]` is the original label of the i-th smallest exponent).
    pub fn sorted(&self) -> (Vec<Q>, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.g.len()).collect();
        perm.sort_by(|&a, &b| self.g[a].cmp(&self.g[b]));
        (perm.iter().map(|&i| self.g[i].clone()).collect(), perm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QesFamily {
    StandardSextic,
    IrregularSextic,
    ThirdOrder,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QesLocus {
    pub j: u32,
    pub family: QesFamily,
}

impl QesLocus {
    pub fn new(j: u32, family: QesFamily) -> Result<Self> {
        if j == 0 {
            return Err(QesError::InvalidParameter("QES level count J must be >= 1".into()));
        }
        Ok(QesLocus { j, family })
    }
}

fn check_j(j: u32) -> Result<()> {
    if j == 0 {
        Err(QesError::InvalidParameter("J must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// α_J = −(2l + 1 + 4J).
pub fn alpha_qes(j: u32, l: &Q) -> Result<Q> {
    check_j(j)?;
    Ok(-(qi(2) * l + Q::one() + qi(4 * j as i64)))
}

/// (α, l) ↦ (g0, g1, g2) = ((1−α−6l)/4, 1+α/2, (7−α+6l)/4).
pub fn g_from_alpha(alpha: &Q, l: &Q) -> [Q; 3] {
    let six_l = qi(6) * l;
    [
        (Q::one() - alpha - &six_l) / qi(4),
        Q::one() + alpha / qi(2),
        (qi(7) - alpha + six_l) / qi(4),
    ]
}

/// (g0, g2) ↦ (α, l) = (2(2−g0−g2), (2g2−3−2g0)/6).
pub fn alpha_from_g(g0: &Q, g2: &Q) -> (Q, Q) {
    (
        qi(2) * (qi(2) - g0 - g2),
        (qi(2) * g2 - qi(3) - qi(2) * g0) / qi(6),
    )
}

/// Exponent triple on the third-order QES locus (direct or adjoint exponents).
pub fn g_qes(j: u32, l: &Q, adjoint: bool) -> Result<[Q; 3]> {
    check_j(j)?;
    let jj = qi(j as i64);
    Ok(if adjoint {
        [
            q(3, 2) - &jj + l,
            q(3, 2) + qi(2) * &jj + l,
            -jj - qi(2) * l,
        ]
    } else {
        [
            q(1, 2) + &jj - l,
            q(1, 2) - qi(2) * &jj - l,
            qi(2) + jj + qi(2) * l,
        ]
    })
}

/// κ = 4/(3√3) at `prec` bits.
pub fn kappa(prec: u32) -> Float {
    crate::mp::kappa(prec)
}

/// κ² as an exact rational.
pub fn kappa_squared() -> Q {
    q(16, 27)
}

/// The problem whose large-x behaviour a factorised ansatz must reproduce.
#[derive(Clone, Copy, Debug)]
pub enum WkbProblem<'a> {
    Sextic(&'a SexticProblem),
    Third(&'a ThirdOrderProblem),
}

/// Large-x power of the WKB-decaying solution, or `None` when the ansatz's
/// exponential factor is not the decaying one of the problem.
pub fn wkb_power(problem: WkbProblem<'_>) -> Option<Q> {
    match problem {
        WkbProblem::Sextic(p) => Some(q(-3, 2) - &p.alpha / qi(2)),
        // e^{-x^2/2} is the decaying exponential only for the direct operator;
        // the adjoint's decaying modes behave like e^{-x^2/4} and oscillate.
        WkbProblem::Third(p) if !p.adjoint => Some(qi(-1)),
        WkbProblem::Third(_) => None,
    }
}

/// Does x^{exponent}·(polynomial of degree `degree`)·(decaying exponential)
/// have the large-x power predicted by WKB?
pub fn wkb_factorisation_compatible(problem: WkbProblem<'_>, exponent: &Q, degree: u32) -> bool {
    match wkb_power(problem) {
        Some(p) => exponent + qi(degree as i64) == p,
        None => false,
    }
}

/// Convenience: the factorised sextic ansatz x^{l+1}·P_{2J−2}(x)·e^{−x⁴/4}.
pub fn sextic_ansatz_compatible(p: &SexticProblem, j: u32) -> bool {
    j >= 1 && wkb_factorisation_compatible(WkbProblem::Sextic(p), &(&p.l + Q::one()), 2 * j - 2)
}

/// Convenience: the factorised third-order ansatz x^{g1}·P_{2J−2}(x)·e^{−x²/2}.
pub fn third_ansatz_compatible(p: &ThirdOrderProblem, j: u32) -> bool {
    j >= 1 && wkb_factorisation_compatible(WkbProblem::Third(p), &p.g()[1], 2 * j - 2)
}

/// Convenience: x^{−J+1/2}·P_{2K−2}(x)·e^{−x⁴/4} for the irregular sextic
/// problem H2(2J+4l+2, −J−1/2) written in terms of the original l.
pub fn irregular_ansatz_compatible(j: u32, l: &Q, k: u32) -> bool {
    if j == 0 || k == 0 {
        return false;
    }
    let jj = qi(j as i64);
    let p = SexticProblem::new(qi(2) * &jj + qi(4) * l + qi(2), -(&jj + q(1, 2)));
    wkb_factorisation_compatible(WkbProblem::Sextic(&p), &(q(1, 2) - jj), 2 * k - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alpha_qes_examples() {
        assert_eq!(alpha_qes(1, &qi(0)).unwrap(), qi(-5));
        assert_eq!(alpha_qes(2, &qi(0)).unwrap(), qi(-9));
        assert_eq!(alpha_qes(1, &q(-1, 2)).unwrap(), qi(-4));
        assert!(alpha_qes(0, &qi(0)).is_err());
    }

    #[test]
    fn g_maps_examples() {
        assert_eq!(g_from_alpha(&qi(-5), &qi(0)), [q(3, 2), q(-3, 2), qi(3)]);
        assert_eq!(g_from_alpha(&qi(0), &qi(0)), [q(1, 4), qi(1), q(7, 4)]);
        assert_eq!(alpha_from_g(&q(3, 2), &qi(3)), (qi(-5), qi(0)));
        assert_eq!(alpha_from_g(&q(1, 4), &q(7, 4)), (qi(0), qi(0)));
    }

    #[test]
    fn g_qes_examples() {
        assert_eq!(g_qes(1, &qi(0), false).unwrap(), [q(3, 2), q(-3, 2), qi(3)]);
        let adj = g_qes(2, &qi(0), true).unwrap();
        assert_eq!(adj, [q(-1, 2), q(11, 2), qi(-2)]);
        assert_eq!(adj[0], &adj[1] - qi(6));
    }

    #[test]
    fn derived_couplings_and_adjoint() {
        let p = ThirdOrderProblem::new(q(1, 4), qi(1), q(7, 4)).unwrap();
        // e2 = 1/4 + 7/16 + 7/4 = 39/16, e3 = 7/16
        assert_eq!(p.big_g(), qi(2) - q(39, 16));
        assert_eq!(p.big_l(), qi(-2) - q(7, 16) + q(39, 16));
        let a = p.to_adjoint();
        assert_eq!(a.big_g(), p.big_g());
        assert_eq!(a.big_l(), -p.big_l());
        assert_eq!(a.exponents(), [q(7, 4), qi(1), q(1, 4)]);
        assert!(ThirdOrderProblem::new(qi(1), qi(1), qi(2)).is_err());
    }

    #[test]
    fn wkb_predicate_examples() {
        for j in 1..5u32 {
            for l in [qi(0), q(1, 2), q(2, 3)] {
                let p = SexticProblem::new(alpha_qes(j, &l).unwrap(), l.clone());
                assert!(sextic_ansatz_compatible(&p, j));
                let t = ThirdOrderProblem::from_triple(&g_qes(j, &l, false).unwrap()).unwrap();
                assert!(!third_ansatz_compatible(&t, j));
            }
        }
        assert!(irregular_ansatz_compatible(2, &q(-3, 2), 1));
        assert!(irregular_ansatz_compatible(1, &q(-5, 2), 2));
        assert!(!irregular_ansatz_compatible(2, &qi(0), 1));
        assert!(!irregular_ansatz_compatible(2, &q(-1, 2), 1));
    }

    #[test]
    fn general_problem_validation_and_sorting() {
        let p = GeneralProblem::new(3, 1, vec![q(3, 2), q(-3, 2), qi(3)]).unwrap();
        assert!(!p.is_sorted());
        let (s, perm) = p.sorted();
        assert_eq!(s, vec![q(-3, 2), q(3, 2), qi(3)]);
        assert_eq!(perm, vec![1, 0, 2]);
        assert!(GeneralProblem::new(3, 1, vec![qi(0), qi(0), qi(0)]).is_err());
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-60i64..60, 1i64..13).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn maps_are_mutually_inverse(alpha in small_q(), l in small_q()) {
            let g = g_from_alpha(&alpha, &l);
            prop_assert_eq!(&g[0] + &g[1] + &g[2], qi(3));
            let (a2, l2) = alpha_from_g(&g[0], &g[2]);
            prop_assert_eq!(a2, alpha);
            prop_assert_eq!(l2, l);
        }

        #[test]
        fn qes_locus_maps_onto_g_qes(j in 1u32..8, l in small_q()) {
            let a = alpha_qes(j, &l).unwrap();
            prop_assert_eq!(g_from_alpha(&a, &l), g_qes(j, &l, false).unwrap());
            let g = g_qes(j, &l, false).unwrap();
            let adj = g_qes(j, &l, true).unwrap();
            for i in 0..3 {
                prop_assert_eq!(&adj[i], &(qi(2) - &g[i]));
            }
            prop_assert_eq!(&adj[0], &(&adj[1] - qi(3 * j as i64)));
        }

        #[test]
        fn third_order_factorisation_never_fits_off_special_line(j in 1u32..8, l in small_q()) {
            let g = g_qes(j, &l, false).unwrap();
            let t = ThirdOrderProblem::from_triple(&g).unwrap();
            let special = g[1] == qi(1 - 2 * j as i64);
            prop_assert_eq!(third_ansatz_compatible(&t, j), special);
        }
    }
}
