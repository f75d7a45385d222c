//! The Bessel-pair ansatz for the irregular sextic ℋ₂(2J+4l+2, −J−1/2):
//!
//! ψ = x^{3/2−J} Σ_{n≤N} x^{2n} (a_n K_{1/4}(x⁴/4) + b_n K_{3/4}(x⁴/4)).
//!
//! With z = x⁴/4 the pair closes under differentiation:
//! d[x^p K_{1/4}] = (p−1) x^{p−1} K_{1/4} − x^{p+3} K_{3/4},
//! d[x^p K_{3/4}] = (p−3) x^{p−1} K_{3/4} − x^{p+3} K_{1/4},
//! so the operator maps the module to itself with exact coefficients. The
//! eigen-system is assembled over Q[E] and reduced to an exact eigencondition.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::bdpoly::{bd_second, isolate_real_roots, EPolynomial, EVar};
use crate::error::{QesError, Result};
use crate::mp::{powq, q_to_float};
use crate::params::alpha_qes;
use crate::rational::{q, q_as_integer, qi, Q};
use crate::ring::Ring;
use crate::special::bessel_k;

/// Σ_p x^p (a_p K_{1/4}(x⁴/4) + b_p K_{3/4}(x⁴/4)) with coefficients in a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselModuleElement<T> {
    pub terms: BTreeMap<Q, (T, T)>,
}

impl<T: Ring> BesselModuleElement<T> {
    pub fn zero() -> Self {
        BesselModuleElement {
            terms: BTreeMap::new(),
        }
    }

    /// x^p K_{1/4} (`k3 = false`) or x^p K_{3/4} (`k3 = true`) times c.
    pub fn monomial(p: Q, k3: bool, c: T) -> Self {
        let mut e = Self::zero();
        let z = c.zero_like();
        e.push(p, if k3 { (z, c) } else { (c, z) });
        e
    }

    fn push(&mut self, p: Q, (a, b): (T, T)) {
        match self.terms.get_mut(&p) {
            Some((x, y)) => {
                *x = x.add(&a);
                *y = y.add(&b);
            }
            None => {
                self.terms.insert(p, (a, b));
            }
        }
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, (a, b)| !(a.is_exact_zero() && b.is_exact_zero()));
        self
    }

    /// Lowest power present: the prefactor exponent of the representation.
    pub fn prefactor(&self) -> Option<&Q> {
        self.terms.keys().next()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, ab) in &o.terms {
            out.push(p.clone(), ab.clone());
        }
        out.pruned()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        BesselModuleElement {
            terms: self
                .terms
                .iter()
                .map(|(p, (a, b))| (p.clone(), (a.neg(), b.neg())))
                .collect(),
        }
    }

    /// c · x^k · self.
    pub fn mul_monomial(&self, k: &Q, c: &T) -> Self {
        BesselModuleElement {
            terms: self
                .terms
                .iter()
                .map(|(p, (a, b))| (p + k, (a.mul(c), b.mul(c))))
                .collect(),
        }
        .pruned()
    }

    /// Exact d/dx.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (p, (a, b)) in &self.terms {
            out.push(p - Q::one(), (a.scale(&(p - qi(1))), b.scale(&(p - qi(3)))));
            out.push(p + qi(3), (b.neg(), a.neg()));
        }
        out.pruned()
    }

    /// V·self for V = Σ c_k x^k (a Laurent polynomial with rational coefficients).
    pub fn mul_laurent(&self, v: &[(Q, Q)]) -> Self {
        let mut out = Self::zero();
        for (k, c) in v {
            for (p, (a, b)) in &self.terms {
                out.push(p + k, (a.scale(c), b.scale(c)));
            }
        }
        out.pruned()
    }

    /// (−d² + x⁶ + αx² + c/x² − E)·self.
    pub fn apply_h(&self, alpha: &Q, centrifugal: &Q, e: &T) -> Self {
        let v = [(qi(6), Q::one()), (qi(2), alpha.clone()), (qi(-2), centrifugal.clone())];
        let kin = self.derivative().derivative().neg();
        kin.add(&self.mul_laurent(&v)).sub(&self.mul_monomial(&Q::zero(), e))
    }
}

impl BesselModuleElement<Float> {
    /// Numerical value at x > 0.
    pub fn eval(&self, x: &Float) -> Result<Float> {
        let (v, _) = self.eval_with_scale(x)?;
        Ok(v)
    }

    /// Value and Σ|terms| (the scale against which a residual is judged).
    pub fn eval_with_scale(&self, x: &Float) -> Result<(Float, Float)> {
        let prec = x.prec();
        let z = Float::with_val(prec, x.clone().square().square()) / 4u32;
        let k1 = bessel_k(&q_to_float(&q(1, 4), prec), &z)?;
        let k3 = bessel_k(&q_to_float(&q(3, 4), prec), &z)?;
        let mut sum = Float::new(prec);
        let mut scale = Float::new(prec);
        for (p, (a, b)) in &self.terms {
            let xp = powq(x, p);
            let t1 = Float::with_val(prec, a * &k1) * &xp;
            let t3 = Float::with_val(prec, b * &k3) * &xp;
            scale += Float::with_val(prec, t1.abs_ref());
            scale += Float::with_val(prec, t3.abs_ref());
            sum += t1;
            sum += t3;
        }
        Ok((sum, scale))
    }
}

/// One eigen-solution of the ansatz.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BesselEigenpair {
    #[serde(with = "crate::mp::serde_float")]
    pub energy: Float,
    /// a_0..a_N and b_0..b_N (decimal strings at working precision).
    #[serde(with = "float_vec")]
    pub a: Vec<Float>,
    #[serde(with = "float_vec")]
    pub b: Vec<Float>,
    /// Highest n with a nonzero coefficient.
    pub detected_truncation: usize,
    /// Relative ODE residuals |Hψ|/Σ|terms| at x ∈ {1/2, 1, 3/2}.
    pub residuals: Vec<f64>,
}

/// The exact eigen-system and its solutions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BesselAnsatzSolution {
    pub j: u32,
    pub l: i64,
    /// Truncation order N used for the ansatz.
    pub truncation: usize,
    /// Monic eigencondition polynomial in E.
    pub eigencondition: EPolynomial,
    /// Whether the eigencondition is a rational multiple of P_J.
    pub proportional_to_pj: bool,
    pub eigenpairs: Vec<BesselEigenpair>,
}

mod float_vec {
    use rug::Float;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Float], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(crate::mp::float_str).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Float>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| crate::mp::parse_float(s, crate::mp::DEFAULT_PREC).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Truncation order of the ansatz: J + l for odd J, 2(J + l) for even J.
pub fn ansatz_truncation(j: u32, l: i64) -> usize {
    let s = j as usize + l as usize;
    if j % 2 == 1 {
        s
    } else {
        2 * s
    }
}

/// Parameters of ℋ₂(2J+4l+2, −J−1/2): (α, centrifugal constant l′(l′+1), base power 3/2 − J).
fn irregular_parameters(j: u32, l: &Q) -> (Q, Q, Q) {
    let jq = qi(j as i64);
    let alpha = qi(2) * &jq + qi(4) * l + qi(2);
    let cent = &jq * &jq - q(1, 4);
    (alpha, cent, q(3, 2) - jq)
}

/// The system matrix M(E) (rows: distinct (power, Bessel) pairs; columns:
/// a_0..a_N, b_0..b_N) of Hψ = 0.
pub fn ansatz_matrix(j: u32, l: &Q, n: usize) -> Vec<Vec<EPolynomial>> {
    let (alpha, cent, p0) = irregular_parameters(j, l);
    let e = EPolynomial::x(EVar::E);
    let one = EPolynomial::one(EVar::E);
    let mut columns = Vec::new();
    for k3 in [false, true] {
        for i in 0..=n {
            let p = &p0 + qi(2 * i as i64);
            columns.push(BesselModuleElement::monomial(p, k3, one.clone()).apply_h(&alpha, &cent, &e));
        }
    }
    let mut rows: BTreeMap<(Q, bool), Vec<EPolynomial>> = BTreeMap::new();
    let ncols = columns.len();
    for (c, col) in columns.iter().enumerate() {
        for (p, (a, b)) in &col.terms {
            for (k3, v) in [(false, a), (true, b)] {
                if v.is_zero() {
                    continue;
                }
                let row = rows
                    .entry((p.clone(), k3))
                    .or_insert_with(|| vec![EPolynomial::zero(EVar::E); ncols]);
                row[c] = v.clone();
            }
        }
    }
    rows.into_values().collect()
}

/// Hermite reduction over Q[E]; returns the diagonal pivots (a zero pivot
/// marks a column that is free for every E).
pub fn hermite_pivots(mut m: Vec<Vec<EPolynomial>>) -> Vec<EPolynomial> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut pivots = Vec::with_capacity(ncols);
    for c in 0..ncols {
        loop {
            let best = (r..nrows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by_key(|&i| (m[i][c].degree().unwrap_or(0), m[i].iter().filter(|v| !v.is_zero()).count()));
            let Some(best) = best else {
                pivots.push(EPolynomial::zero(EVar::E));
                break;
            };
            m.swap(r, best);
            let mut clean = true;
            for i in r + 1..nrows {
                if m[i][c].is_zero() {
                    continue;
                }
                let (quot, rem) = m[i][c].div_rem(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, pr) in m[i].iter_mut().zip(&pivot_row) {
                    if !pr.is_zero() {
                        *x = x.sub(&quot.mul(pr));
                    }
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if clean {
                pivots.push(m[r][c].clone());
                r += 1;
                break;
            }
        }
        if r >= nrows {
            // remaining columns have no rows left: free
            pivots.extend((c + 1..ncols).map(|_| EPolynomial::zero(EVar::E)));
            break;
        }
    }
    pivots
}

/// Null vector of a numeric matrix by Gaussian elimination with full
/// pivoting; `None` if the matrix has full column rank at this precision.
fn null_vector(mut m: Vec<Vec<Float>>, prec: u32) -> Option<Vec<Float>> {
    let nrows = m.len();
    let ncols = m[0].len();
    let scale = m
        .iter()
        .flatten()
        .fold(Float::new(prec), |acc, v| acc.max(&Float::with_val(prec, v.abs_ref())));
    let thresh = scale * Float::with_val(prec, Float::i_exp(1, -((prec as i32) * 3 / 4)));
    let mut perm: Vec<usize> = (0..ncols).collect();
    let mut rank = 0;
    while rank < nrows.min(ncols) {
        let mut best = (rank, rank, Float::new(prec));
        for (i, row) in m.iter().enumerate().skip(rank) {
            for (j, v) in row.iter().enumerate().skip(rank) {
                let a = Float::with_val(prec, v.abs_ref());
                if a > best.2 {
                    best = (i, j, a);
                }
            }
        }
        if best.2 <= thresh {
            break;
        }
        m.swap(rank, best.0);
        for row in m.iter_mut() {
            row.swap(rank, best.1);
        }
        perm.swap(rank, best.1);
        for i in rank + 1..nrows {
            let f = Float::with_val(prec, &m[i][rank] / &m[rank][rank]);
            for j in rank..ncols {
                let t = Float::with_val(prec, &f * &m[rank][j]);
                m[i][j] -= t;
            }
        }
        rank += 1;
    }
    if rank == ncols {
        return None;
    }
    // free variable: first non-pivot column = 1
    let mut y = vec![Float::new(prec); ncols];
    y[rank] = Float::with_val(prec, 1);
    for i in (0..rank).rev() {
        let mut s = Float::new(prec);
        for j in i + 1..ncols {
            s += Float::with_val(prec, &m[i][j] * &y[j]);
        }
        y[i] = -s / &m[i][i];
    }
    let mut x = vec![Float::new(prec); ncols];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = y[k].clone();
    }
    Some(x)
}

/// Solve the ansatz exactly for integer l ≥ 0: eigencondition over Q[E],
/// its real roots at `prec` bits, and a coefficient vector for each root.
pub fn bessel_ansatz_solve(j: u32, l: &Q, prec: u32) -> Result<BesselAnsatzSolution> {
    let li = q_as_integer(l)
        .filter(|v| *v >= 0)
        .ok_or_else(|| QesError::InvalidParameter(format!("the Bessel ansatz needs integer l ≥ 0, got {l}")))?;
    if j == 0 {
        return Err(QesError::InvalidParameter("J must be at least 1".into()));
    }
    let n = ansatz_truncation(j, li);
    let m = ansatz_matrix(j, l, n);
    let pivots = hermite_pivots(m.clone());
    let mut cond = EPolynomial::one(EVar::E);
    for p in &pivots {
        cond = cond.mul(p);
    }
    if cond.is_zero() {
        return Err(QesError::Unsupported(
            "the truncated ansatz has a solution for every E".into(),
        ));
    }
    let cond = cond.monic();
    let pj = bd_second(&alpha_qes(j, l)?, l, j as usize);
    let proportional = cond.proportionality(&pj).is_some();
    let (alpha, cent, p0) = irregular_parameters(j, l);
    let mut pairs = Vec::new();
    if cond.degree().unwrap_or(0) > 0 {
        for root in isolate_real_roots(&cond, prec).roots {
            let e = root.value.clone();
            let num: Vec<Vec<Float>> = m
                .iter()
                .map(|row| row.iter().map(|p| p.eval_float(&e)).collect())
                .collect();
            let Some(v) = null_vector(num, prec) else {
                continue;
            };
            // normalise by the lowest-power nonzero coefficient
            let lead = (0..=n)
                .flat_map(|i| [&v[i], &v[n + 1 + i]])
                .find(|c| !c.is_zero() && Float::with_val(prec, c.abs_ref()) > Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2)))
                .cloned()
                .unwrap_or_else(|| Float::with_val(prec, 1));
            let v: Vec<Float> = v.into_iter().map(|c| c / &lead).collect();
            let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) * 3 / 4));
            let detected = (0..=n)
                .rev()
                .find(|&i| Float::with_val(prec, v[i].abs_ref()) > tiny || Float::with_val(prec, v[n + 1 + i].abs_ref()) > tiny)
                .unwrap_or(0);
            let mut psi = BesselModuleElement::<Float>::zero();
            for i in 0..=n {
                let p = &p0 + qi(2 * i as i64);
                psi = psi.add(&BesselModuleElement::monomial(p.clone(), false, v[i].clone()));
                psi = psi.add(&BesselModuleElement::monomial(p, true, v[n + 1 + i].clone()));
            }
            let hpsi = psi.apply_h(&alpha, &cent, &e);
            let mut residuals = Vec::new();
            for xs in [q(1, 2), qi(1), q(3, 2)] {
                let x = q_to_float(&xs, prec);
                let (val, scale) = hpsi.eval_with_scale(&x)?;
                let (_, psi_scale) = psi.eval_with_scale(&x)?;
                let denom = scale.max(&psi_scale);
                residuals.push((Float::with_val(prec, val.abs_ref()) / denom).to_f64());
            }
            pairs.push(BesselEigenpair {
                energy: e,
                a: v[..=n].to_vec(),
                b: v[n + 1..].to_vec(),
                detected_truncation: detected,
                residuals,
            });
        }
    }
    Ok(BesselAnsatzSolution {
        j,
        l: li,
        truncation: n,
        eigencondition: cond,
        proportional_to_pj: proportional,
        eigenpairs: pairs,
    })
}
