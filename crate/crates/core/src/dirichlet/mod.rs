//! Exponential sums attached to a pair and a frequency vector.
//!
//! Fixing `xi` with positive entries and writing `b_j = e^{xi_j}`, the two
//! sides of a pair become the Dirichlet-type series
//!
//! ```text
//!     F(s) = P(b_1^{-s}, ..., b_n^{-s}) = sum_m a_P(m) e^{-s (xi . m)}
//!     G(s) = Q(b_1^{-s}, ..., b_n^{-s})
//! ```
//!
//! tied by `G(s) = eta e^{-(xi . ell) s} F(-s)`. For stable pairs all zeros
//! of F are purely imaginary, which is what makes the zero counting measure
//! of [`zeros::find_zeros`] a real point set.
//!
//! When the polynomial side has real coefficients that are (anti)symmetric
//! under `m -> ell - m`, the rotated restriction
//! `g(gamma) = Re[alpha e^{i gamma (xi.ell)/2} F(i gamma)]` (alpha = 1 in the
//! symmetric case, i in the antisymmetric one) is real analytic with the
//! same zeros as F on the line, and sign changes of g drive the bracketing
//! zero finder.

pub mod curve;
pub mod zeros;

pub use curve::{torus_zero_curve, CurveSet};
pub use zeros::{count_zeros_rect, find_zeros, ZeroList};

use crate::polynomial::{MultiPoly, StablePair};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DirichletError {
    #[error("frequency vector has arity {got}, expected {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("frequency entries must be positive and finite, got {0}")]
    NonPositiveFrequency(f64),
    #[error("window [{0}, {1}] is empty")]
    InvalidWindow(f64, f64),
    #[error(
        "scan window too coarse: candidates anchored at {first} and {second} \
         both polish to {zero}; raise the oversample factor"
    )]
    WindowTooCoarse { first: f64, second: f64, zero: f64 },
    #[error("argument-principle contour passes through a zero; perturb the rectangle")]
    ContourHitsZero,
}

/// Positive frequency vector `xi`; `xi . k` maps exponents to frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVec(Vec<f64>);

impl FrequencyVec {
    pub fn new(entries: Vec<f64>) -> Result<Self, DirichletError> {
        for &x in &entries {
            if !(x > 0.0) || !x.is_finite() {
                return Err(DirichletError::NonPositiveFrequency(x));
            }
        }
        Ok(FrequencyVec(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn entry(&self, j: usize) -> f64 {
        self.0[j]
    }

    pub fn min_entry(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `xi . k` for an exponent vector.
    pub fn dot(&self, k: &crate::polynomial::ExponentVec) -> f64 {
        self.0
            .iter()
            .zip(k.as_slice())
            .map(|(x, &e)| x * e as f64)
            .sum()
    }
}

/// Which side of the pair a series evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    P,
    Q,
}

/// Real secular normalization: `sigma = +1` when `a(m) = a(ell - m)`
/// (g is a cosine sum), `-1` when `a(m) = -a(ell - m)` (sine sum).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Palindrome {
    Even,
    Odd,
}

/// Detect the (anti)palindromic symmetry of real-coefficient polynomials
/// under `m -> ell - m`. Returns `None` for complex coefficients or when
/// neither sign works within 1e-12.
pub fn palindrome_kind(poly: &MultiPoly, ell: &crate::polynomial::ExponentVec) -> Option<Palindrome> {
    let mut all_real = true;
    for (_, c) in poly.terms() {
        if c.value().im != 0.0 {
            all_real = false;
            break;
        }
    }
    if !all_real {
        return None;
    }
    'sigma: for (kind, sigma) in [(Palindrome::Even, 1.0), (Palindrome::Odd, -1.0)] {
        for (m, c) in poly.terms() {
            let mirrored = match ell.checked_sub(m) {
                Some(k) => k,
                None => continue 'sigma,
            };
            let want = sigma * poly.coeff(&mirrored).value().re;
            if (c.value().re - want).abs() > 1e-12 {
                continue 'sigma;
            }
        }
        return Some(kind);
    }
    None
}

/// One side of a pair evaluated as an exponential sum.
#[derive(Clone, Debug)]
pub struct DirichletSeries {
    pair: StablePair,
    freq: FrequencyVec,
    side: Side,
    /// (frequency w = xi . m, coefficient a(m)), sorted by w.
    atoms: Vec<(f64, Complex64)>,
    /// xi . ell.
    w_total: f64,
    /// sum of |a(m)|, the trivial sup bound on |F(i gamma)|.
    sum_abs: f64,
    /// Real secular form, when the coefficient symmetry admits one:
    /// (W/2 - w_m, a_m) pairs with real a.
    secular: Option<(Palindrome, Vec<(f64, f64)>)>,
}

impl DirichletSeries {
    pub fn new(
        pair: &StablePair,
        freq: &FrequencyVec,
        side: Side,
    ) -> Result<Self, DirichletError> {
        if freq.len() != pair.n() {
            return Err(DirichletError::WrongArity {
                expected: pair.n(),
                got: freq.len(),
            });
        }
        let poly = match side {
            Side::P => pair.p().clone(),
            Side::Q => pair.q().clone(),
        };
        let mut atoms: Vec<(f64, Complex64)> = poly
            .terms()
            .map(|(m, c)| (freq.dot(m), c.value()))
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let w_total = freq.dot(pair.ell());
        let sum_abs = atoms.iter().map(|(_, a)| a.norm()).sum();
        let secular = palindrome_kind(&poly, pair.ell()).map(|kind| {
            let rows = atoms
                .iter()
                .map(|(w, a)| (w_total / 2.0 - w, a.re))
                .collect();
            (kind, rows)
        });
        Ok(DirichletSeries {
            pair: pair.clone(),
            freq: freq.clone(),
            side,
            atoms,
            w_total,
            sum_abs,
            secular,
        })
    }

    pub fn pair(&self) -> &StablePair {
        &self.pair
    }

    pub fn freq(&self) -> &FrequencyVec {
        &self.freq
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `xi . ell`, the total frequency spread (and mean zero density x pi).
    pub fn total_frequency(&self) -> f64 {
        self.w_total
    }

    pub fn sum_abs(&self) -> f64 {
        self.sum_abs
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.atoms
            .iter()
            .map(|(w, a)| a * (-s * *w).exp())
            .sum()
    }

    /// `F(i gamma)` on the imaginary axis.
    pub fn eval_line(&self, gamma: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, a) in &self.atoms {
            let (sin, cos) = (-gamma * w).sin_cos();
            acc += a * Complex64::new(cos, sin);
        }
        acc
    }

    /// d/d gamma of `F(i gamma)`.
    pub fn deriv_line(&self, gamma: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, a) in &self.atoms {
            let (sin, cos) = (-gamma * w).sin_cos();
            acc += a * Complex64::new(cos, sin) * Complex64::new(0.0, -w);
        }
        acc
    }

    /// Whether the real secular normalization exists for this side.
    pub fn has_real_secular(&self) -> bool {
        self.secular.is_some()
    }

    /// The real function `Re[alpha e^{i gamma W/2} F(i gamma)]` whose sign
    /// changes bracket the zeros; `None` without the coefficient symmetry.
    pub fn secular(&self, gamma: f64) -> Option<f64> {
        let (kind, rows) = self.secular.as_ref()?;
        let mut acc = 0.0;
        match kind {
            Palindrome::Even => {
                for (u, a) in rows {
                    acc += a * (gamma * u).cos();
                }
            }
            Palindrome::Odd => {
                for (u, a) in rows {
                    acc -= a * (gamma * u).sin();
                }
            }
        }
        Some(acc)
    }
}

/// Max modulus over `count` seeded sample points (|Re s| <= 2,
/// |Im s| <= 50) of the relative functional-equation defect
/// `|F(-s) - eta^{-1} e^{(xi . ell) s} G(s)| / (1 + |F(-s)|)`. The
/// denominator keeps the figure meaningful across the strip, where |F|
/// itself swings over several orders of magnitude.
pub fn functional_eq_residual(
    pair: &StablePair,
    freq: &FrequencyVec,
    count: usize,
    seed: u64,
) -> Result<f64, DirichletError> {
    let f = DirichletSeries::new(pair, freq, Side::P)?;
    let g = DirichletSeries::new(pair, freq, Side::Q)?;
    let eta_inv = pair.eta().value().finv();
    let w = f.total_frequency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let s = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-50.0..50.0));
        let lhs = f.eval(-s);
        let rhs = eta_inv * (s * w).exp() * g.eval(s);
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    Ok(worst)
}

/// Closed-form secular function of the two-variable example
/// `1 - z1/3 + z2^2/3 - z1 z2^2`: evaluates
/// `L(x, y) = 3 sin(x/2 + y) + sin(x/2 - y)` at `(gamma xi_1, gamma xi_2)`.
/// The general machinery must vanish exactly where L does.
pub fn secular_values(freq: &FrequencyVec, gammas: &[f64]) -> Result<Vec<f64>, DirichletError> {
    if freq.len() != 2 {
        return Err(DirichletError::WrongArity {
            expected: 2,
            got: freq.len(),
        });
    }
    let (x1, x2) = (freq.entry(0), freq.entry(1));
    Ok(gammas
        .iter()
        .map(|g| {
            let x = g * x1;
            let y = g * x2;
            3.0 * (x / 2.0 + y).sin() + (x / 2.0 - y).sin()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn series_evaluates_the_polynomial_at_exponentials() {
        let (pair, xi) = builtins::lasso();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        let s = Complex64::new(0.3, -1.1);
        let z: Vec<Complex64> = xi.as_slice().iter().map(|x| (-s * *x).exp()).collect();
        assert!((f.eval(s) - pair.p().eval(&z)).norm() < 1e-13);
        assert!((f.eval_line(0.7) - f.eval(Complex64::new(0.0, 0.7))).norm() < 1e-13);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let (pair, xi) = builtins::lasso();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        let g = 1.3;
        let h = 1e-6;
        let fd = (f.eval_line(g + h) - f.eval_line(g - h)) / (2.0 * h);
        assert!((f.deriv_line(g) - fd).norm() < 1e-8);
    }

    #[test]
    fn functional_equation_holds_for_builtins() {
        for name in ["poisson", "lasso", "lee-yang", "spectral"] {
            let (pair, xi) = builtins::by_name(name).unwrap();
            let r = functional_eq_residual(&pair, &xi, 100, 1).unwrap();
            assert!(r < 1e-10, "{name}: residual {r}");
        }
    }

    #[test]
    fn functional_equation_holds_for_relaxed_pairs() {
        let (pair, xi) = builtins::poisson();
        let q = crate::polynomial::MultiPoly::from_rational_terms(
            1,
            &[(&[1], 1, 1), (&[0], -1, 1)],
        )
        .unwrap();
        let relaxed = crate::polynomial::StablePair::new_relaxed(pair.p().clone(), q).unwrap();
        let r = functional_eq_residual(&relaxed, &xi, 100, 2).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn secular_form_matches_the_closed_form() {
        // g(gamma) = -(2/3) L(gamma xi_1, gamma xi_2) for the lasso pair.
        let (pair, xi) = builtins::lasso();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        assert!(f.has_real_secular());
        let gammas: Vec<f64> = (0..200).map(|i| -3.0 + i as f64 * 0.05).collect();
        let ell = secular_values(&xi, &gammas).unwrap();
        for (g, l) in gammas.iter().zip(&ell) {
            let got = f.secular(*g).unwrap();
            assert!(
                (got + 2.0 / 3.0 * l).abs() < 1e-12,
                "gamma {g}: secular {got} vs -(2/3)L = {}",
                -2.0 / 3.0 * l
            );
        }
    }

    #[test]
    fn secular_form_is_the_rotated_series() {
        let (pair, xi) = builtins::lasso();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        for i in 0..50 {
            let g = -2.0 + 0.17 * i as f64;
            let rotated = Complex64::new(0.0, 1.0)
                * (Complex64::new(0.0, g * f.total_frequency() / 2.0)).exp()
                * f.eval_line(g);
            assert!((rotated.re - f.secular(g).unwrap()).abs() < 1e-12);
            // The imaginary part vanishes identically for this symmetry.
            assert!(rotated.im.abs() < 1e-12);
        }
    }

    #[test]
    fn complex_sides_have_no_real_secular() {
        let (pair, xi) = builtins::spectral_phase();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        assert!(!f.has_real_secular());
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let (pair, _) = builtins::lasso();
        let bad = FrequencyVec::new(vec![1.0]).unwrap();
        assert!(matches!(
            DirichletSeries::new(&pair, &bad, Side::P),
            Err(DirichletError::WrongArity { .. })
        ));
        assert!(FrequencyVec::new(vec![1.0, -0.5]).is_err());
    }
}
