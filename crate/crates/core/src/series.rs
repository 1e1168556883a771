//! Logarithmic expansion coefficients.
//!
//! For a polynomial P with constant term 1, `log P(z)` is a power series
//! `sum_k c(k) z^k` over exponent vectors k in the additive semigroup
//! generated by the support of P. These coefficients are the Fourier-side
//! weights of everything downstream: the summation formula weighs the atom
//! at `xi . k` by `-(xi . k) c(k)`.
//!
//! Two independent algorithms are provided. [`log_coeffs_multinomial`]
//! expands `log(1 + w) = sum_nu (-1)^{nu+1} w^nu / nu` term by term over
//! ordered tuples of support monomials; it is exponential in the degree cap
//! and serves as the oracle. [`log_coeffs_recurrence`] differentiates
//! `P exp(-log P) = const` with the Euler operator, giving the graded
//! recurrence
//!
//! ```text
//!     |k| c(k) = |k| a(k) - sum_{m in supp P, 0 < m <= k, m != k} (|k| - |m|) a(m) c(k - m)
//! ```
//!
//! which fills a degree-graded table in polynomial time and is used for
//! production work. Entries below 1e-15 in modulus are dropped, so exact
//! cancellations (products of univariate factors, say) leave no residue.

use crate::polynomial::{ExponentVec, MultiPoly};
use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Zero};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

/// Entries smaller than this in modulus are not stored.
pub const COEFF_DROP_TOL: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("polynomial is not normalized: constant term is {0}, expected 1")]
    NotNormalized(String),
}

/// Coefficients of `log P` up to a total-degree cap, keyed by exponent.
#[derive(Clone, Debug)]
pub struct LogCoeffTable {
    n: usize,
    degree_max: u32,
    coeffs: BTreeMap<ExponentVec, Complex64>,
}

impl LogCoeffTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_max(&self) -> u32 {
        self.degree_max
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `k` (zero when absent or dropped).
    pub fn get(&self, k: &ExponentVec) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentVec, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus among entries of total degree `d`.
    pub fn shell_max(&self, d: u32) -> f64 {
        self.coeffs
            .iter()
            .filter(|(k, _)| k.total_degree() == d)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient-wise difference against another table.
    pub fn max_deviation(&self, other: &LogCoeffTable) -> f64 {
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter()
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }

    fn from_raw(n: usize, degree_max: u32, raw: BTreeMap<ExponentVec, Complex64>) -> Self {
        let coeffs = raw
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_DROP_TOL)
            .collect();
        LogCoeffTable { n, degree_max, coeffs }
    }
}

fn nonconstant_support(p: &MultiPoly) -> Vec<(ExponentVec, Complex64)> {
    let mut supp: Vec<(ExponentVec, Complex64)> = p
        .terms()
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, c)| (e.clone(), c.value()))
        .collect();
    supp.sort_by_key(|(e, _)| e.total_degree());
    supp
}

fn require_normalized(p: &MultiPoly) -> Result<(), SeriesError> {
    if !p.is_normalized() {
        return Err(SeriesError::NotNormalized(p.constant().to_string()));
    }
    Ok(())
}

/// Exponents reachable as sums of support monomials, grouped by total degree
/// (`shells[d]` holds the degree-d candidates; `shells[0]` is empty).
fn semigroup_shells(supp: &[(ExponentVec, Complex64)], d_max: u32) -> Vec<Vec<ExponentVec>> {
    let mut shells: Vec<Vec<ExponentVec>> = vec![Vec::new(); d_max as usize + 1];
    let mut seen = std::collections::BTreeSet::new();
    for d in 1..=d_max {
        let mut shell = Vec::new();
        for (m, _) in supp {
            let md = m.total_degree();
            if md > d {
                break;
            }
            if md == d {
                if seen.insert(m.clone()) {
                    shell.push(m.clone());
                }
                continue;
            }
            let lower = std::mem::take(&mut shells[(d - md) as usize]);
            for e in &lower {
                let k = e.add(m);
                if seen.insert(k.clone()) {
                    shell.push(k);
                }
            }
            shells[(d - md) as usize] = lower;
        }
        shells[d as usize] = shell;
    }
    shells
}

/// Graded-recurrence evaluation of the log-coefficients up to total degree
/// `d_max`. Time is polynomial in the table size.
pub fn log_coeffs_recurrence(p: &MultiPoly, d_max: u32) -> Result<LogCoeffTable, SeriesError> {
    require_normalized(p)?;
    let supp = nonconstant_support(p);
    let shells = semigroup_shells(&supp, d_max);
    let mut c: BTreeMap<ExponentVec, Complex64> = BTreeMap::new();
    for d in 1..=d_max {
        for k in &shells[d as usize] {
            let mut acc = p.coeff(k).value() * d as f64;
            for (m, am) in &supp {
                let md = m.total_degree();
                if md >= d {
                    break;
                }
                if !k.dominates(m) {
                    continue;
                }
                let rem = k.checked_sub(m).expect("dominates checked");
                // c vanishes off the semigroup, so a missing entry is zero.
                if let Some(crem) = c.get(&rem) {
                    acc -= ((d - md) as f64) * am * crem;
                }
            }
            c.insert(k.clone(), acc / d as f64);
        }
    }
    Ok(LogCoeffTable::from_raw(p.n(), d_max, c))
}

/// Direct expansion of `log(1 + w)`, `w = P - 1`, over ordered tuples of
/// support monomials: a tuple of length nu contributes
/// `(-1)^{nu+1} / nu * prod a(m_i)` at the exponent `sum m_i`.
///
/// The tuple count grows exponentially with `d_max`; this is the
/// cross-validation oracle, not the production path.
pub fn log_coeffs_multinomial(p: &MultiPoly, d_max: u32) -> Result<LogCoeffTable, SeriesError> {
    require_normalized(p)?;
    let supp = nonconstant_support(p);
    let mut acc: BTreeMap<ExponentVec, Complex64> = BTreeMap::new();
    let mut stack_exp = ExponentVec::zeros(p.n());
    dfs_tuples(&supp, &mut stack_exp, Complex64::new(1.0, 0.0), 0, d_max, &mut acc);
    Ok(LogCoeffTable::from_raw(p.n(), d_max, acc))
}

fn dfs_tuples(
    supp: &[(ExponentVec, Complex64)],
    prefix: &mut ExponentVec,
    prod: Complex64,
    depth: u32,
    d_max: u32,
    acc: &mut BTreeMap<ExponentVec, Complex64>,
) {
    let budget = d_max - prefix.total_degree();
    for (m, a) in supp {
        if m.total_degree() > budget {
            break; // support is sorted by total degree
        }
        let next = prefix.add(m);
        let prod = prod * a;
        let depth = depth + 1;
        let sign = if depth % 2 == 1 { 1.0 } else { -1.0 };
        *acc.entry(next.clone()).or_insert(Complex64::new(0.0, 0.0)) +=
            prod * (sign / depth as f64);
        let saved = std::mem::replace(prefix, next);
        dfs_tuples(supp, prefix, prod, depth, d_max, acc);
        *prefix = saved;
    }
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Closed-form log-coefficient of the two-variable polynomial
/// `1 - z1/3 + z2^2/3 - z1 z2^2` at the table exponent `(n1, 2 n2)`,
/// evaluated in exact rational arithmetic:
///
/// ```text
///     c(n1, 2 n2) = - sum_{k1 + k3 = n1, k2 + k3 = n2}
///         (k1 + k2 + k3 - 1)! / (k1! k2! k3!) * (-1)^{k2} / 3^{k1 + k2}
/// ```
///
/// Requires `(n1, n2) != (0, 0)`.
pub fn example_cn(n1: u64, n2: u64) -> Ratio<BigInt> {
    assert!(
        n1 > 0 || n2 > 0,
        "the closed form is only defined away from the constant term"
    );
    let mut acc: Ratio<BigInt> = Ratio::zero();
    for k3 in 0..=n1.min(n2) {
        let k1 = n1 - k3;
        let k2 = n2 - k3;
        let num = factorial(k1 + k2 + k3 - 1);
        let den = factorial(k1) * factorial(k2) * factorial(k3) * BigInt::from(3u32).pow((k1 + k2) as u32);
        let mut term = Ratio::new(num, den);
        if k2 % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    -acc
}

/// Report of the a-priori coefficient bound against the computed table.
///
/// With `K = max |P|` on the unit torus and `d = deg P`, every
/// log-coefficient satisfies `|c(k)| <= sqrt((2 ln K)^2 + (pi d)^2)` (the
/// real part of log P is bounded by torus values of `ln |P|`, the imaginary
/// part by the winding of the argument). The report also records the
/// per-shell maxima so the decay profile can be inspected.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CoeffBoundReport {
    /// Max of |P| over the sampled torus.
    pub torus_max: f64,
    /// sqrt((2 ln K)^2 + (pi deg P)^2).
    pub bound: f64,
    /// Largest |c(k)| in the table.
    pub max_coeff: f64,
    pub degree_max: u32,
    /// Max |c| per total degree, index 0 holding degree 1.
    pub shell_max: Vec<f64>,
    /// max_coeff <= bound (with 1e-6 relative slack).
    pub pass: bool,
}

const QUASI_PRIMES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Max of |P| over the unit torus: a full 64^n grid for n <= 3, a
/// million-point Kronecker sequence (sqrt-of-prime rotations) beyond.
pub fn torus_sup(p: &MultiPoly) -> f64 {
    let n = p.n();
    let tau = std::f64::consts::TAU;
    let mut best = 0.0f64;
    if n <= 3 {
        let steps = 64usize;
        let mut idx = vec![0usize; n];
        let mut z = vec![Complex64::new(1.0, 0.0); n];
        loop {
            for j in 0..n {
                z[j] = Complex64::from_polar(1.0, tau * idx[j] as f64 / steps as f64);
            }
            best = best.max(p.eval(&z).norm());
            // odometer increment
            let mut j = 0;
            loop {
                if j == n {
                    return best;
                }
                idx[j] += 1;
                if idx[j] < steps {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }
    let alphas: Vec<f64> = (0..n).map(|j| (QUASI_PRIMES[j % 20] as f64).sqrt().fract()).collect();
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for t in 1..=1_000_000u64 {
        for j in 0..n {
            z[j] = Complex64::from_polar(1.0, tau * (t as f64 * alphas[j]).fract());
        }
        best = best.max(p.eval(&z).norm());
    }
    best
}

/// The a-priori bound sqrt((2 ln K)^2 + (pi deg P)^2) on |c(k)|.
pub fn coefficient_bound(p: &MultiPoly) -> f64 {
    let k = torus_sup(p).max(1.0);
    let re = 2.0 * k.ln();
    let im = std::f64::consts::PI * p.degree() as f64;
    (re * re + im * im).sqrt()
}

/// Compute the table by recurrence and compare every entry against the
/// a-priori bound.
pub fn coeff_bound_check(p: &MultiPoly, d_max: u32) -> Result<CoeffBoundReport, SeriesError> {
    let table = log_coeffs_recurrence(p, d_max)?;
    let torus_max = torus_sup(p).max(1.0);
    let re = 2.0 * torus_max.ln();
    let im = std::f64::consts::PI * p.degree() as f64;
    let bound = (re * re + im * im).sqrt();
    let max_coeff = table.max_abs();
    let shell_max = (1..=d_max).map(|d| table.shell_max(d)).collect();
    Ok(CoeffBoundReport {
        torus_max,
        bound,
        max_coeff,
        degree_max: d_max,
        shell_max,
        pass: max_coeff <= bound * (1.0 + 1e-6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::MultiPoly;

    fn poisson() -> MultiPoly {
        MultiPoly::from_rational_terms(1, &[(&[0], 1, 1), (&[1], -1, 1)]).unwrap()
    }

    fn lasso() -> MultiPoly {
        MultiPoly::from_rational_terms(
            2,
            &[(&[0, 0], 1, 1), (&[1, 0], -1, 3), (&[0, 2], 1, 3), (&[1, 2], -1, 1)],
        )
        .unwrap()
    }

    fn k(e: &[u32]) -> ExponentVec {
        ExponentVec::new(e.to_vec())
    }

    #[test]
    fn poisson_coefficients_are_minus_one_over_n() {
        let by_rec = log_coeffs_recurrence(&poisson(), 12).unwrap();
        let by_mult = log_coeffs_multinomial(&poisson(), 12).unwrap();
        for n in 1..=12u32 {
            let want = -1.0 / n as f64;
            assert!((by_rec.get(&k(&[n])).re - want).abs() < 1e-14);
            assert!((by_mult.get(&k(&[n])).re - want).abs() < 1e-14);
            assert!(by_rec.get(&k(&[n])).im == 0.0);
        }
    }

    #[test]
    fn closed_form_matches_hand_values() {
        // c(1,0) = -1/3, c(0,2) = +1/3, c(1,2) = -8/9, exactly.
        let third = Ratio::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(example_cn(1, 0), -third.clone());
        assert_eq!(example_cn(0, 1), third);
        assert_eq!(example_cn(1, 1), Ratio::new(BigInt::from(-8), BigInt::from(9)));
    }

    #[test]
    fn three_methods_agree_on_the_golden_entries() {
        let rec = log_coeffs_recurrence(&lasso(), 4).unwrap();
        let mult = log_coeffs_multinomial(&lasso(), 4).unwrap();
        for (n1, n2) in [(1u64, 0u64), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)] {
            let want = ratio_to_f64(&example_cn(n1, n2));
            let at = k(&[n1 as u32, 2 * n2 as u32]);
            if at.total_degree() > 4 {
                continue;
            }
            assert!(
                (rec.get(&at).re - want).abs() < 1e-12,
                "recurrence at {at}: {} vs {want}",
                rec.get(&at).re
            );
            assert!((mult.get(&at).re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_and_multinomial_agree_to_degree_eight() {
        let rec = log_coeffs_recurrence(&lasso(), 8).unwrap();
        let mult = log_coeffs_multinomial(&lasso(), 8).unwrap();
        assert!(rec.max_deviation(&mult) < 1e-12);
        // Lasso support only reaches even powers of z2.
        assert!(rec.iter().all(|(e, _)| e.entry(1) % 2 == 0));
    }

    #[test]
    fn product_rule_adds_tables() {
        // log(PQ) = log P + log Q with Q = 1 - z1/2.
        let p = poisson();
        let q = MultiPoly::from_rational_terms(1, &[(&[0], 1, 1), (&[1], -1, 2)]).unwrap();
        let prod = p.product(&q).unwrap();
        let tp = log_coeffs_recurrence(&p, 10).unwrap();
        let tq = log_coeffs_recurrence(&q, 10).unwrap();
        let tpq = log_coeffs_recurrence(&prod, 10).unwrap();
        for n in 1..=10u32 {
            let want = tp.get(&k(&[n])) + tq.get(&k(&[n]));
            assert!((tpq.get(&k(&[n])) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn exact_cancellations_are_dropped() {
        // P = (1 - z1)(1 - z2): log splits into the two axes, every mixed
        // coefficient cancels exactly and must not be stored.
        let p = MultiPoly::from_rational_terms(
            2,
            &[(&[0, 0], 1, 1), (&[1, 0], -1, 1), (&[0, 1], -1, 1), (&[1, 1], 1, 1)],
        )
        .unwrap();
        let t = log_coeffs_recurrence(&p, 8).unwrap();
        for (e, c) in t.iter() {
            assert!(
                e.entry(0) == 0 || e.entry(1) == 0,
                "mixed entry {e} = {c} survived"
            );
        }
        assert!((t.get(&k(&[3, 0])).re + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let p = MultiPoly::from_rational_terms(1, &[(&[0], 2, 1), (&[1], -1, 1)]).unwrap();
        assert!(matches!(
            log_coeffs_recurrence(&p, 4),
            Err(SeriesError::NotNormalized(_))
        ));
        assert!(log_coeffs_multinomial(&p, 4).is_err());
    }

    #[test]
    fn lasso_coefficients_respect_the_torus_bound() {
        let report = coeff_bound_check(&lasso(), 12).unwrap();
        // Max of |P| on the torus is 8/3, attained at z1 = -1, z2 = 1.
        assert!((report.torus_max - 8.0 / 3.0).abs() < 1e-9);
        assert!(report.pass, "max {} vs bound {}", report.max_coeff, report.bound);
        assert_eq!(report.shell_max.len(), 12);
    }

    fn ratio_to_f64(r: &Ratio<BigInt>) -> f64 {
        use num::ToPrimitive;
        r.to_f64().unwrap()
    }

    #[test]
    fn closed_form_deeper_value_is_exact() {
        // (n1, n2) = (3, 2) has three compositions: (k1,k2,k3) in
        // {(3,2,0), (2,1,1), (1,0,2)} contributing 2/243 - 1/9 + 1/3,
        // so c(3, 4) = -56/243.
        assert_eq!(
            example_cn(3, 2),
            Ratio::new(BigInt::from(-56), BigInt::from(243))
        );
    }
}
