//! Named example pairs with their default frequency vectors.
//!
//! These are the inputs every command accepts by name. Coefficients that
//! are exactly rational are stored as rationals, so pair validation and
//! the log-coefficient golden values run without float fuzz.

use crate::dirichlet::FrequencyVec;
use crate::polynomial::{self, ExponentVec, MultiPoly, StablePair, UnitaryMatrix};
use num_complex::Complex64;

fn freq(entries: &[f64]) -> FrequencyVec {
    FrequencyVec::new(entries.to_vec()).expect("builtin frequencies are positive")
}

/// `P = 1 - z1`, the pair whose zero set is the lattice `(2 pi / xi_1) Z`
/// and whose summation formula is the classical one.
pub fn poisson() -> (StablePair, FrequencyVec) {
    let p = MultiPoly::from_rational_terms(1, &[(&[0], 1, 1), (&[1], -1, 1)]).unwrap();
    (StablePair::derive_dual(p).unwrap(), freq(&[1.0]))
}

/// `P = 1 - z1/3 + z2^2/3 - z1 z2^2` (the nonlinear spectral polynomial of
/// a loop with a pendant edge), self-dual with ell = (1, 2), eta = -1.
/// Default frequencies (1, sqrt 2) are rationally independent.
pub fn lasso() -> (StablePair, FrequencyVec) {
    let p = MultiPoly::from_rational_terms(
        2,
        &[
            (&[0, 0], 1, 1),
            (&[1, 0], -1, 3),
            (&[0, 2], 1, 3),
            (&[1, 2], -1, 1),
        ],
    )
    .unwrap();
    (
        StablePair::derive_dual(p).unwrap(),
        freq(&[1.0, std::f64::consts::SQRT_2]),
    )
}

/// Three spins with uniform coupling 1/2:
/// `P = 1 + (z1 + z2 + z3)/4 + (z1 z2 + z1 z3 + z2 z3)/4 + z1 z2 z3`.
pub fn lee_yang() -> (StablePair, FrequencyVec) {
    let a = nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0],
    );
    (
        polynomial::lee_yang(&a).unwrap(),
        freq(&[1.0, std::f64::consts::SQRT_2, 3.0f64.sqrt()]),
    )
}

/// Characteristic pair of a plane rotation by 45 degrees with monomials
/// z1, z2: `P = Q = 1 - (z1 + z2)/sqrt(2) + z1 z2`.
pub fn spectral() -> (StablePair, FrequencyVec) {
    let r = 1.0 / std::f64::consts::SQRT_2;
    let s = UnitaryMatrix::new(nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(-r, 0.0),
            Complex64::new(r, 0.0),
        ],
    ))
    .unwrap();
    let monomials = [ExponentVec::new(vec![1, 0]), ExponentVec::new(vec![0, 1])];
    (
        polynomial::spectral_pair(&monomials, &s).unwrap(),
        freq(&[1.0, std::f64::consts::SQRT_2]),
    )
}

/// A genuinely complex pair: `S = [e^i]`, so `P = 1 - e^i z1` and
/// `Q = 1 - e^{-i} z1`. Not self-dual; its zeros sit on a shifted lattice,
/// which exercises the |F|-minima zero finder.
pub fn spectral_phase() -> (StablePair, FrequencyVec) {
    let s = UnitaryMatrix::new(nalgebra::DMatrix::from_row_slice(
        1,
        1,
        &[Complex64::from_polar(1.0, 1.0)],
    ))
    .unwrap();
    (
        polynomial::spectral_pair(&[ExponentVec::new(vec![1])], &s).unwrap(),
        freq(&[1.0]),
    )
}

/// The planted falsification fixture `1 - 2 z1`, which vanishes at z1 = 1/2.
pub fn unstable_poly() -> MultiPoly {
    MultiPoly::from_rational_terms(1, &[(&[0], 1, 1), (&[1], -2, 1)]).unwrap()
}

/// Pairs addressable from the command line and the acceptance checks.
pub fn by_name(name: &str) -> Option<(StablePair, FrequencyVec)> {
    match name {
        "poisson" => Some(poisson()),
        "lasso" => Some(lasso()),
        "lee-yang" => Some(lee_yang()),
        "spectral" => Some(spectral()),
        "spectral-phase" => Some(spectral_phase()),
        _ => None,
    }
}

/// Polynomials addressable by name for the stability command; includes the
/// planted unstable fixture.
pub fn poly_by_name(name: &str) -> Option<MultiPoly> {
    if name == "unstable" {
        return Some(unstable_poly());
    }
    by_name(name).map(|(pair, _)| pair.p().clone())
}

pub const PAIR_NAMES: [&str; 5] = ["poisson", "lasso", "lee-yang", "spectral", "spectral-phase"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate_and_are_normalized() {
        for name in PAIR_NAMES {
            let (pair, xi) = by_name(name).unwrap();
            assert_eq!(xi.len(), pair.n(), "{name}");
            assert!(!pair.is_relaxed(), "{name}");
            assert!(pair.p().is_normalized(), "{name}");
            assert!(pair.functional_residual() < 1e-12, "{name}");
        }
    }

    #[test]
    fn lee_yang_demo_has_the_expected_coefficients() {
        let (pair, _) = lee_yang();
        let quarter = crate::scalar::Scalar::rational(1, 4);
        let c = pair.p().coeff(&ExponentVec::new(vec![1, 0, 0]));
        assert!(c.agrees(&quarter, 1e-14));
        let c = pair.p().coeff(&ExponentVec::new(vec![1, 1, 0]));
        assert!(c.agrees(&quarter, 1e-14));
        assert!(pair.p().coeff(&ExponentVec::new(vec![1, 1, 1])).agrees(
            &crate::scalar::Scalar::one(),
            1e-14
        ));
        assert_eq!(pair.p().num_terms(), 8);
    }

    #[test]
    fn unknown_name_is_none() {
        assert!(by_name("gaussian").is_none());
        assert!(poly_by_name("unstable").is_some());
    }
}
