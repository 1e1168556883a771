//! Positive crystalline measures from stable polynomial pairs.
//!
//! A pair of polynomials (P, Q) in n variables, each with constant term 1
//! and tied by the functional equation `Q(z) = eta z^ell P(1/z)`, defines
//! for every positive frequency vector xi an exponential sum
//! `F(s) = P(e^{-xi_1 s}, ..., e^{-xi_n s})`. When P has no zeros in the
//! open unit polydisk, all zeros of F lie on the imaginary axis, and the
//! counting measure on those zeros (with multiplicity) is a crystalline
//! measure: its Fourier transform is again a discrete atomic measure,
//! supported on the lattice-like set `{0} U {+-(xi . k)}` with weights read
//! off the logarithmic expansions of P and Q.
//!
//! The crate builds such pairs (from explicit coefficients, from unitary
//! matrices, from Lee-Yang coupling matrices), locates the zeros, assembles
//! both sides of the summation formula with rigorous tail bounds, and probes
//! the arithmetic structure of the resulting point sets (gaps, Delone
//! constants, arithmetic progressions, integer relations). A falsification
//! search hunts for polydisk zeros of allegedly stable inputs.
//!
//! The `fqc` binary exposes all of it as subcommands; `reproduce-all` runs
//! the acceptance checks end to end.

pub mod analysis;
pub mod builtins;
pub mod criteria;
pub mod dirichlet;
pub mod io;
pub mod measure;
pub mod series;
pub mod stability;
pub mod polynomial;
pub mod scalar;

pub use polynomial::{ExponentVec, MultiPoly, PolyError, StablePair, UnitaryMatrix};
pub use scalar::Scalar;
