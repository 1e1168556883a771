//! Falsification search for polydisk stability.
//!
//! A polynomial is stable here when it has no zeros in the *open* unit
//! polydisk (boundary zeros are allowed and, for the interesting inputs,
//! expected). Deciding that rigorously is out of scope; what this module
//! provides is an aggressive hunt for counterexamples. A clean run is
//! reported as `NoCounterexampleFound` (not a proof); a hit comes with a
//! witness point, verified by direct evaluation, at which |P| < 1e-9 while
//! every coordinate modulus stays strictly below 1.
//!
//! The search has two phases sharing an evaluation budget:
//!
//! * quasi-random sampling on polycircles of radii 0.5 / 0.9 / 0.99 / 0.999
//!   (a Kronecker rotation sequence with a seeded offset), which tracks the
//!   smallest |P| seen and would catch sign-definite failures cheaply;
//! * random fixings of all variables but one, followed by companion-matrix
//!   eigenvalues of the resulting univariate polynomial and a Newton polish
//!   of any root that lands inside the disk. This is the phase that
//!   actually finds zeros of unstable inputs, since in the slice the zero
//!   set is a finite set of points that eigenvalues hit directly.
//!
//! Everything is deterministic given the seed.

use crate::polynomial::{MultiPoly, StablePair};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

const SAMPLE_RADII: [f64; 4] = [0.5, 0.9, 0.99, 0.999];
/// Roots must be inside the disk by this margin before they count.
const INTERIOR_MARGIN: f64 = 1e-9;
/// Witness acceptance: |P| at the witness, by direct evaluation.
const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityVerdict {
    NoCounterexampleFound,
    CounterexampleFound,
}

/// Outcome of one falsification run.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub verdict: StabilityVerdict,
    /// Evaluation-equivalents actually spent.
    pub samples_used: u64,
    /// Smallest |P| seen anywhere strictly inside the polydisk.
    pub min_modulus: f64,
    /// Interior point with |P| < 1e-9, as (re, im) per coordinate.
    pub witness: Option<Vec<(f64, f64)>>,
    /// |P(witness)| by direct evaluation.
    pub witness_value: Option<f64>,
    pub seed: u64,
    pub budget: u64,
}

/// Both sides of a pair, each searched with half the budget.
#[derive(Clone, Debug, Serialize)]
pub struct PairStabilityReport {
    pub p: StabilityReport,
    pub q: StabilityReport,
}

impl PairStabilityReport {
    pub fn clean(&self) -> bool {
        self.p.verdict == StabilityVerdict::NoCounterexampleFound
            && self.q.verdict == StabilityVerdict::NoCounterexampleFound
    }
}

const QUASI_PRIMES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

struct Search<'a> {
    p: &'a MultiPoly,
    rng: ChaCha8Rng,
    used: u64,
    min_modulus: f64,
}

impl<'a> Search<'a> {
    fn probe(&mut self, z: &[Complex64]) -> f64 {
        self.used += 1;
        let v = self.p.eval(z).norm();
        if z.iter().all(|c| c.norm() < 1.0) {
            self.min_modulus = self.min_modulus.min(v);
        }
        v
    }

    /// Kronecker rotation sampling on fixed-radius polycircles.
    fn phase_circles(&mut self, budget: u64) -> Option<Vec<Complex64>> {
        let n = self.p.n();
        let tau = std::f64::consts::TAU;
        let alphas: Vec<f64> = (0..n)
            .map(|j| (QUASI_PRIMES[j % QUASI_PRIMES.len()] as f64).sqrt().fract())
            .collect();
        let offsets: Vec<f64> = (0..n).map(|_| self.rng.gen::<f64>()).collect();
        let per_radius = (budget / SAMPLE_RADII.len() as u64).max(1);
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for (ri, &r) in SAMPLE_RADII.iter().enumerate() {
            for t in 0..per_radius {
                let t = (t + 1) as f64 + (ri as f64) * 0.25;
                for j in 0..n {
                    let angle = tau * (offsets[j] + t * alphas[j]).fract();
                    z[j] = Complex64::from_polar(r, angle);
                }
                if self.probe(&z) < WITNESS_TOL {
                    return Some(z.clone());
                }
            }
        }
        None
    }

    /// Solve the univariate restriction along variable `var` with the other
    /// coordinates fixed, and return any sufficiently interior root that
    /// survives a Newton polish and direct re-evaluation.
    fn slice_roots(&mut self, var: usize, fixed: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.p.n();
        let deg = self.p.degree_in(var) as usize;
        if deg == 0 {
            return None;
        }
        // Coefficients of the restriction, lowest degree first.
        let mut b = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (exp, coeff) in self.p.terms() {
            let mut v = coeff.value();
            for j in 0..n {
                if j != var {
                    let e = exp.entry(j);
                    if e > 0 {
                        v *= fixed[j].powu(e);
                    }
                }
            }
            b[exp.entry(var) as usize] += v;
        }
        self.used += (deg as u64 + 1).max(1);
        let mut top = deg;
        while top > 0 && b[top].norm() < 1e-14 {
            top -= 1;
        }
        if top == 0 {
            return None;
        }
        let lead = b[top];
        // Companion matrix of the monic normalization.
        let mut m = DMatrix::<Complex64>::zeros(top, top);
        for i in 1..top {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..top {
            m[(i, top - 1)] = -b[i] / lead;
        }
        self.used += (top * top) as u64;
        let eigs = m.eigenvalues()?;
        for root in eigs.iter() {
            let mut w = *root;
            // Newton polish on the restriction.
            for _ in 0..30 {
                let (mut val, mut der) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for d in (0..=top).rev() {
                    der = der * w + val;
                    val = val * w + b[d];
                }
                self.used += 1;
                if val.norm() < 1e-15 || der.norm() == 0.0 {
                    break;
                }
                let step = val / der;
                w -= step;
                if step.norm() < 1e-16 {
                    break;
                }
            }
            if w.norm() >= 1.0 - INTERIOR_MARGIN {
                continue;
            }
            let mut z = fixed.to_vec();
            z[var] = w;
            if self.probe(&z) < WITNESS_TOL {
                return Some(z);
            }
        }
        None
    }

    fn phase_slices(&mut self, budget: u64) -> Option<Vec<Complex64>> {
        let n = self.p.n();
        let start = self.used;
        let mut var = 0usize;
        while self.used - start < budget {
            let mut fixed = vec![Complex64::new(0.0, 0.0); n];
            for (j, f) in fixed.iter_mut().enumerate() {
                if j != var {
                    let r = SAMPLE_RADII[self.rng.gen_range(0..SAMPLE_RADII.len())];
                    let angle = self.rng.gen::<f64>() * std::f64::consts::TAU;
                    *f = Complex64::from_polar(r, angle);
                }
            }
            if let Some(w) = self.slice_roots(var, &fixed) {
                return Some(w);
            }
            var = (var + 1) % n;
        }
        None
    }
}

/// Hunt for an interior zero of `p` within the evaluation budget.
pub fn falsify_stability(
    p: &MultiPoly,
    budget: u64,
    seed: u64,
) -> Result<StabilityReport, StabilityError> {
    if p.num_terms() == 0 {
        return Err(StabilityError::DegenerateInput(
            "the zero polynomial vanishes everywhere".into(),
        ));
    }
    if p.constant().is_zero() {
        // z = 0 is an interior zero already.
        return Ok(StabilityReport {
            verdict: StabilityVerdict::CounterexampleFound,
            samples_used: 1,
            min_modulus: 0.0,
            witness: Some(vec![(0.0, 0.0); p.n()]),
            witness_value: 0.0.into(),
            seed,
            budget,
        });
    }
    let mut search = Search {
        p,
        rng: ChaCha8Rng::seed_from_u64(seed),
        used: 0,
        min_modulus: f64::INFINITY,
    };
    let witness = search
        .phase_circles(budget / 2)
        .or_else(|| search.phase_slices(budget - budget / 2));
    let witness_value = witness.as_ref().map(|z| p.eval(z).norm());
    Ok(StabilityReport {
        verdict: if witness.is_some() {
            StabilityVerdict::CounterexampleFound
        } else {
            StabilityVerdict::NoCounterexampleFound
        },
        samples_used: search.used,
        min_modulus: search.min_modulus,
        witness: witness.map(|z| z.iter().map(|c| (c.re, c.im)).collect()),
        witness_value,
        seed,
        budget,
    })
}

/// Run the falsifier on both sides of a pair, splitting the budget.
pub fn verify_pair_stability(
    pair: &StablePair,
    budget: u64,
    seed: u64,
) -> Result<PairStabilityReport, StabilityError> {
    let p = falsify_stability(pair.p(), budget / 2, seed)?;
    let q = falsify_stability(pair.q(), budget - budget / 2, seed.wrapping_add(1))?;
    Ok(PairStabilityReport { p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::MultiPoly;

    fn poly(terms: &[(&[u32], i64, i64)], n: usize) -> MultiPoly {
        MultiPoly::from_rational_terms(n, terms).unwrap()
    }

    #[test]
    fn planted_unstable_univariate_is_caught() {
        // 1 - 2 z1 vanishes at z1 = 1/2.
        let p = poly(&[(&[0], 1, 1), (&[1], -2, 1)], 1);
        let rep = falsify_stability(&p, 10_000, 7).unwrap();
        assert_eq!(rep.verdict, StabilityVerdict::CounterexampleFound);
        let w = rep.witness.unwrap();
        assert!((w[0].0 - 0.5).abs() < 1e-9 && w[0].1.abs() < 1e-9);
        assert!(rep.witness_value.unwrap() < 1e-9);
    }

    #[test]
    fn planted_unstable_bivariate_is_caught() {
        // 1 - 2 z1 z2 vanishes on |z1 z2| = 1/2, well inside the polydisk.
        let p = poly(&[(&[0, 0], 1, 1), (&[1, 1], -2, 1)], 2);
        let rep = falsify_stability(&p, 50_000, 3).unwrap();
        assert_eq!(rep.verdict, StabilityVerdict::CounterexampleFound);
        let w = rep.witness.unwrap();
        assert!(w.iter().all(|(re, im)| (re * re + im * im).sqrt() < 1.0));
    }

    #[test]
    fn boundary_zeros_are_not_counterexamples() {
        // 1 - z1 vanishes only at z1 = 1, on the boundary.
        let p = poly(&[(&[0], 1, 1), (&[1], -1, 1)], 1);
        let rep = falsify_stability(&p, 20_000, 1).unwrap();
        assert_eq!(rep.verdict, StabilityVerdict::NoCounterexampleFound);
        // The sampler does approach the boundary zero.
        assert!(rep.min_modulus < 0.1);
    }

    #[test]
    fn stable_two_variable_example_survives() {
        let p = poly(
            &[(&[0, 0], 1, 1), (&[1, 0], -1, 3), (&[0, 2], 1, 3), (&[1, 2], -1, 1)],
            2,
        );
        let rep = falsify_stability(&p, 30_000, 11).unwrap();
        assert_eq!(rep.verdict, StabilityVerdict::NoCounterexampleFound);
        assert!(rep.samples_used >= 30_000 / 2);
    }

    #[test]
    fn same_seed_means_same_report() {
        let p = poly(
            &[(&[0, 0], 1, 1), (&[1, 0], -1, 3), (&[0, 2], 1, 3), (&[1, 2], -1, 1)],
            2,
        );
        let a = falsify_stability(&p, 5_000, 42).unwrap();
        let b = falsify_stability(&p, 5_000, 42).unwrap();
        assert_eq!(a.min_modulus.to_bits(), b.min_modulus.to_bits());
        assert_eq!(a.samples_used, b.samples_used);
    }

    #[test]
    fn zero_polynomial_is_degenerate() {
        let p = MultiPoly::new(1, []).unwrap();
        assert!(matches!(
            falsify_stability(&p, 100, 0),
            Err(StabilityError::DegenerateInput(_))
        ));
    }

    #[test]
    fn vanishing_constant_term_is_an_instant_witness() {
        let p = poly(&[(&[1], 1, 1)], 1);
        let rep = falsify_stability(&p, 100, 0).unwrap();
        assert_eq!(rep.verdict, StabilityVerdict::CounterexampleFound);
        assert_eq!(rep.witness_value, Some(0.0));
    }

    #[test]
    fn pair_check_covers_both_sides() {
        let p = poly(&[(&[0], 1, 1), (&[1], -1, 1)], 1);
        let pair = crate::polynomial::StablePair::derive_dual(p).unwrap();
        let rep = verify_pair_stability(&pair, 10_000, 5).unwrap();
        assert!(rep.clean());
        assert!(rep.p.samples_used > 0 && rep.q.samples_used > 0);
    }
}
