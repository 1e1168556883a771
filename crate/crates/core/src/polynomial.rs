//! Sparse multivariate polynomials and stable-pair assembly.
//!
//! The central object is a pair (P, Q) of polynomials in n variables, both
//! with constant term 1, satisfying the functional equation
//!
//! ```text
//!     Q(z) = eta * z^ell * P(1/z_1, ..., 1/z_n)
//! ```
//!
//! where `ell` is the vector of per-variable maximal degrees of P and `eta`
//! is a unimodular constant. When P additionally has no zeros in the open
//! unit polydisk, the pair is *stable* and drives everything downstream:
//! the exponential sums built on it have only imaginary zeros, and those
//! zeros support a positive measure with discrete Fourier transform.
//!
//! Pairs can be assembled from explicit (P, Q), derived from P alone by
//! normalizing the involution, read off a unitary matrix and a list of
//! monomials (characteristic polynomial of a scaled unitary), or generated
//! from a symmetric coupling matrix (Lee-Yang construction).

use crate::scalar::Scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exponent of one monomial: a vector of non-negative integers, one per variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ExponentVec(Vec<u32>);

impl ExponentVec {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVec(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Sum of all entries (total degree of the monomial).
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Component-wise difference, `None` when any entry would go negative.
    pub fn checked_sub(&self, other: &ExponentVec) -> Option<ExponentVec> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(ExponentVec)
    }

    /// True when `other <= self` component-wise.
    pub fn dominates(&self, other: &ExponentVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("exponent vector {0} has arity {1}, expected {2}")]
    ArityMismatch(ExponentVec, usize, usize),
    #[error("polynomial arity must be at least 1")]
    EmptyArity,
    #[error("{0} is not normalized: constant term is {1}, expected 1")]
    NotNormalized(&'static str, String),
    #[error("no functional equation Q = eta z^ell P(1/z) holds: {0}")]
    NoFunctionalEquation(String),
    #[error("coefficient at the top exponent {0} vanishes, so the dual cannot be normalized")]
    ZeroTopCoefficient(ExponentVec),
    #[error("matrix is not unitary: max deviation of S S* from I is {0:.3e}")]
    NotUnitary(f64),
    #[error("variable z{} never appears with positive degree", .0 + 1)]
    ZeroColumnSum(usize),
    #[error("matrix entry ({0},{1}) = {2} is outside [-1, 1]")]
    EntryOutOfRange(usize, usize, f64),
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("unsupported size: {0}")]
    Unsupported(String),
}

/// Sparse polynomial over the scalars, keyed by exponent vector.
///
/// Invariants: every key has length `n`, no stored coefficient is exactly
/// zero, and the constant term (when present) lives at the all-zeros key.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<ExponentVec, Scalar>,
}

impl MultiPoly {
    pub fn new(
        n: usize,
        terms: impl IntoIterator<Item = (ExponentVec, Scalar)>,
    ) -> Result<Self, PolyError> {
        if n == 0 {
            return Err(PolyError::EmptyArity);
        }
        let mut map: BTreeMap<ExponentVec, Scalar> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != n {
                return Err(PolyError::ArityMismatch(exp.clone(), exp.len(), n));
            }
            let entry = map.entry(exp).or_insert_with(Scalar::zero);
            *entry = entry.add(&coeff);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { n, terms: map })
    }

    /// The constant polynomial 1 in `n` variables.
    pub fn one(n: usize) -> Self {
        MultiPoly::new(n, [(ExponentVec::zeros(n), Scalar::one())]).unwrap()
    }

    /// Convenience constructor from `(exponents, num, den)` triples.
    pub fn from_rational_terms(n: usize, terms: &[(&[u32], i64, i64)]) -> Result<Self, PolyError> {
        MultiPoly::new(
            n,
            terms
                .iter()
                .map(|(e, num, den)| (ExponentVec::new(e.to_vec()), Scalar::rational(*num, *den))),
        )
    }

    /// Convenience constructor from `(exponents, value)` pairs with real coefficients.
    pub fn from_real_terms(n: usize, terms: &[(&[u32], f64)]) -> Result<Self, PolyError> {
        MultiPoly::new(
            n,
            terms
                .iter()
                .map(|(e, v)| (ExponentVec::new(e.to_vec()), Scalar::real(*v))),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVec, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient at `exp` (zero when absent).
    pub fn coeff(&self, exp: &ExponentVec) -> Scalar {
        self.terms.get(exp).copied().unwrap_or_else(Scalar::zero)
    }

    pub fn constant(&self) -> Scalar {
        self.coeff(&ExponentVec::zeros(self.n))
    }

    /// Whether the constant term is exactly 1.
    pub fn is_normalized(&self) -> bool {
        self.constant().is_one()
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    /// Maximal degree in variable `j` over the support.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e.entry(j)).max().unwrap_or(0)
    }

    /// Vector of per-variable maximal degrees.
    pub fn max_degree_vec(&self) -> ExponentVec {
        ExponentVec((0..self.n).map(|j| self.degree_in(j)).collect())
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "evaluation point has wrong arity");
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, coeff) in &self.terms {
            let mut term = coeff.value();
            for (j, &e) in exp.as_slice().iter().enumerate() {
                if e > 0 {
                    term *= z[j].powu(e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Product of two polynomials (naive convolution; supports are small).
    pub fn product(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.n != other.n {
            return Err(PolyError::ArityMismatch(
                ExponentVec::zeros(other.n),
                other.n,
                self.n,
            ));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                terms.push((ea.add(eb), ca.mul(cb)));
            }
        }
        MultiPoly::new(self.n, terms)
    }

    pub fn scale(&self, factor: &Scalar) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.mul(factor)))
            .collect::<Vec<_>>();
        MultiPoly::new(self.n, terms).expect("scaling preserves arity")
    }

    /// The variable-inversion involution with its monomial clearing factor.
    ///
    /// Returns `(shift, cleared)` where `shift` is the per-variable maximal
    /// degree of `self` and `cleared(z) = z^shift * self(1/z_1, ..., 1/z_n)`
    /// is again a polynomial: the term at exponent m moves to `shift - m`.
    /// Applying the operation twice recovers the original polynomial.
    pub fn involute(&self) -> (ExponentVec, MultiPoly) {
        let shift = self.max_degree_vec();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let moved = shift.checked_sub(e).expect("shift dominates every exponent");
                (moved, *c)
            })
            .collect::<Vec<_>>();
        let cleared = MultiPoly::new(self.n, terms).expect("involution preserves arity");
        (shift, cleared)
    }

    /// Whether all coefficients agree with `other` (exactly for rational
    /// pairs, within `tol` otherwise).
    pub fn agrees(&self, other: &MultiPoly, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| self.coeff(k).agrees(&other.coeff(k), tol))
    }

    /// Largest coefficient-wise deviation from `other` in modulus.
    pub fn max_deviation(&self, other: &MultiPoly) -> f64 {
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| (self.coeff(k).value() - other.coeff(k).value()).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coeff})")?;
            for (j, &e) in exp.as_slice().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " z{}", j + 1)?,
                    _ => write!(f, " z{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Tolerance for coefficient-wise functional-equation residuals.
pub const PAIR_RESIDUAL_TOL: f64 = 1e-12;

/// A polynomial pair tied by the functional equation `Q = eta z^ell P(1/z)`.
///
/// Both constant terms are 1 in the normalized case; the *relaxed* variant
/// admits `Q(0) != 1` (the literal pairs some constructions produce before
/// renormalization) and is flagged so reports can surface it. Stability of
/// P on the unit polydisk is a semantic property checked separately by the
/// falsification search; this type only enforces the algebra.
#[derive(Clone, Debug)]
pub struct StablePair {
    p: MultiPoly,
    q: MultiPoly,
    ell: ExponentVec,
    eta: Scalar,
    relaxed: bool,
}

impl StablePair {
    /// Assemble and validate a pair from explicit P and Q, both normalized.
    /// `ell` and `eta` are solved from the coefficients.
    pub fn new(p: MultiPoly, q: MultiPoly) -> Result<Self, PolyError> {
        if !p.is_normalized() {
            return Err(PolyError::NotNormalized("P", p.constant().to_string()));
        }
        if !q.is_normalized() {
            return Err(PolyError::NotNormalized("Q", q.constant().to_string()));
        }
        Self::solve_and_validate(p, q)
    }

    /// Like [`StablePair::new`] but admits `Q(0) != 1` (still nonzero).
    pub fn new_relaxed(p: MultiPoly, q: MultiPoly) -> Result<Self, PolyError> {
        if !p.is_normalized() {
            return Err(PolyError::NotNormalized("P", p.constant().to_string()));
        }
        if q.constant().is_zero() {
            return Err(PolyError::NotNormalized("Q", "0".into()));
        }
        Self::solve_and_validate(p, q)
    }

    fn solve_and_validate(p: MultiPoly, q: MultiPoly) -> Result<Self, PolyError> {
        if p.n() != q.n() {
            return Err(PolyError::NoFunctionalEquation(format!(
                "arities differ ({} vs {})",
                p.n(),
                q.n()
            )));
        }
        let ell = p.max_degree_vec();
        if let Some(j) = (0..p.n()).find(|&j| ell.entry(j) == 0) {
            return Err(PolyError::ZeroColumnSum(j));
        }
        if q.max_degree_vec() != ell {
            return Err(PolyError::NoFunctionalEquation(format!(
                "per-variable degrees differ: P gives {}, Q gives {}",
                ell,
                q.max_degree_vec()
            )));
        }
        let top = p.coeff(&ell);
        if top.is_zero() {
            return Err(PolyError::ZeroTopCoefficient(ell));
        }
        // Constant term of eta z^ell P(1/z) is eta * a_P(ell), so eta is forced.
        let eta = q.constant().mul(&top.recip().expect("top coefficient nonzero"));
        let pair = StablePair {
            relaxed: !q.is_normalized(),
            p,
            q,
            ell,
            eta,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// The normalized dual of a single polynomial: `Q = eta z^ell P(1/z)`
    /// with eta chosen so that `Q(0) = 1`, namely `eta = 1 / a_P(ell)`.
    pub fn derive_dual(p: MultiPoly) -> Result<Self, PolyError> {
        if !p.is_normalized() {
            return Err(PolyError::NotNormalized("P", p.constant().to_string()));
        }
        let ell = p.max_degree_vec();
        if (0..p.n()).any(|j| ell.entry(j) == 0) {
            // ell would have a zero entry; there is no honest dual in that variable.
            return Err(PolyError::ZeroTopCoefficient(ell));
        }
        let (shift, cleared) = p.involute();
        debug_assert_eq!(shift, ell);
        let top = p.coeff(&ell);
        let eta = match top.recip() {
            Some(eta) => eta,
            None => return Err(PolyError::ZeroTopCoefficient(ell)),
        };
        let q = cleared.scale(&eta);
        let pair = StablePair {
            p,
            q,
            ell,
            eta,
            relaxed: false,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// Assemble a pair with externally supplied `ell` and `eta` (file input,
    /// spectral construction); everything is re-validated.
    pub fn from_parts(
        p: MultiPoly,
        q: MultiPoly,
        ell: ExponentVec,
        eta: Scalar,
        allow_relaxed: bool,
    ) -> Result<Self, PolyError> {
        if !p.is_normalized() {
            return Err(PolyError::NotNormalized("P", p.constant().to_string()));
        }
        let relaxed = !q.is_normalized();
        if relaxed && !allow_relaxed {
            return Err(PolyError::NotNormalized("Q", q.constant().to_string()));
        }
        if q.constant().is_zero() {
            return Err(PolyError::NotNormalized("Q", "0".into()));
        }
        let pair = StablePair { p, q, ell, eta, relaxed };
        pair.validate()?;
        Ok(pair)
    }

    /// Check the functional equation coefficient by coefficient: the
    /// coefficient of `z^(ell - m)` in Q must equal `eta * a_P(m)` for every
    /// m in the support of P, and Q must have no terms outside `ell - supp P`.
    /// Comparisons are exact when both sides are rational.
    fn validate(&self) -> Result<(), PolyError> {
        if self.p.n() != self.q.n() || self.p.n() != self.ell.len() {
            return Err(PolyError::NoFunctionalEquation("arity mismatch".into()));
        }
        let mut expected: BTreeMap<ExponentVec, Scalar> = BTreeMap::new();
        for (m, a) in self.p.terms() {
            let k = match self.ell.checked_sub(m) {
                Some(k) => k,
                None => {
                    return Err(PolyError::NoFunctionalEquation(format!(
                        "P has a term at {m} not dominated by ell = {}",
                        self.ell
                    )))
                }
            };
            expected.insert(k, self.eta.mul(a));
        }
        if expected.len() != self.q.num_terms() {
            return Err(PolyError::NoFunctionalEquation(format!(
                "support sizes differ: expected {}, Q has {}",
                expected.len(),
                self.q.num_terms()
            )));
        }
        for (k, want) in &expected {
            let got = self.q.coeff(k);
            if !got.agrees(want, PAIR_RESIDUAL_TOL) {
                return Err(PolyError::NoFunctionalEquation(format!(
                    "coefficient at {k}: Q has {got}, functional equation needs {want}"
                )));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn ell(&self) -> &ExponentVec {
        &self.ell
    }

    pub fn eta(&self) -> Scalar {
        self.eta
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    /// True when Q(0) != 1 was admitted.
    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// True when Q/Q(0) coincides with P (so both sides of the pair generate
    /// the same series).
    pub fn is_self_dual(&self) -> bool {
        self.q_normalized().agrees(&self.p, PAIR_RESIDUAL_TOL)
    }

    /// Q divided by its constant term; equal to Q for normalized pairs.
    pub fn q_normalized(&self) -> MultiPoly {
        if self.relaxed {
            let inv = self
                .q
                .constant()
                .recip()
                .expect("relaxed constructor rejects Q(0) = 0");
            self.q.scale(&inv)
        } else {
            self.q.clone()
        }
    }

    /// Largest coefficient-wise residual of the functional equation,
    /// evaluated in floating point (0 means exact agreement).
    pub fn functional_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (m, a) in self.p.terms() {
            let k = self.ell.checked_sub(m).expect("validated pair");
            let want = self.eta.value() * a.value();
            let got = self.q.coeff(&k).value();
            worst = worst.max((want - got).norm());
        }
        worst
    }
}

/// A square complex matrix validated to be unitary within 1e-10.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    m: nalgebra::DMatrix<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(m: nalgebra::DMatrix<Complex64>) -> Result<Self, PolyError> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(PolyError::Unsupported(format!(
                "matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let k = m.nrows();
        let mut dev = 0.0f64;
        let prod = &m * m.adjoint();
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((prod[(i, j)] - Complex64::new(want, 0.0)).norm());
            }
        }
        if dev >= 1e-10 {
            return Err(PolyError::NotUnitary(dev));
        }
        Ok(UnitaryMatrix { m })
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// The conjugate transpose, which is also the inverse.
    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            m: self.m.adjoint(),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m.clone().lu().determinant()
    }
}

/// `det(I - diag(z^{a_1}, ..., z^{a_k}) S)` expanded symbolically over the
/// permutations of S (Heap's algorithm), with the fixed-point binomials
/// `(1 - z^{a_j} S_jj)` expanded over subsets. Supports k <= 8.
fn char_poly_det(monomials: &[ExponentVec], s: &UnitaryMatrix) -> MultiPoly {
    let k = monomials.len();
    let n = monomials[0].len();
    let mut acc: BTreeMap<ExponentVec, Complex64> = BTreeMap::new();

    // Heap's algorithm, iterative form, tracking the permutation parity.
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1.0f64;
    add_perm_terms(&perm, sign, monomials, s, n, &mut acc);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            add_perm_terms(&perm, sign, monomials, s, n, &mut acc);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let max_abs = acc.values().map(|c| c.norm()).fold(1.0f64, f64::max);
    let terms = acc
        .into_iter()
        .filter(|(_, c)| c.norm() > 1e-13 * max_abs)
        .map(|(e, c)| (e, Scalar::Complex(c)));
    MultiPoly::new(n, terms).expect("char poly arity is consistent")
}

fn add_perm_terms(
    perm: &[usize],
    sign: f64,
    monomials: &[ExponentVec],
    s: &UnitaryMatrix,
    n: usize,
    acc: &mut BTreeMap<ExponentVec, Complex64>,
) {
    let k = perm.len();
    let fixed: Vec<usize> = (0..k).filter(|&j| perm[j] == j).collect();
    let moved: Vec<usize> = (0..k).filter(|&j| perm[j] != j).collect();
    let mut base = Complex64::new(sign, 0.0);
    let mut base_exp = ExponentVec::zeros(n);
    for &j in &moved {
        base *= -s.entry(j, perm[j]);
        base_exp = base_exp.add(&monomials[j]);
    }
    if base.norm() == 0.0 {
        return;
    }
    // Expand prod_{j fixed} (1 - z^{a_j} S_jj) over subsets choosing the
    // second factor.
    for mask in 0u32..(1 << fixed.len()) {
        let mut coeff = base;
        let mut exp = base_exp.clone();
        for (bit, &j) in fixed.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                coeff *= -s.entry(j, j);
                exp = exp.add(&monomials[j]);
            }
        }
        if coeff.norm() > 0.0 {
            *acc.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += coeff;
        }
    }
}

/// Build the pair `P = det(I - D(z) S)`, `Q = det(I - D(z) S*)` from a list
/// of monomial exponents `a_1, ..., a_k` and a unitary k x k matrix S, with
/// `ell_v = sum_j a_{j,v}` and `eta = 1 / det(-S)`. Such P are stable for
/// every unitary S, and Q is the dual side of the functional equation.
pub fn spectral_pair(monomials: &[ExponentVec], s: &UnitaryMatrix) -> Result<StablePair, PolyError> {
    let k = monomials.len();
    if k == 0 {
        return Err(PolyError::Unsupported("need at least one monomial".into()));
    }
    if k > 8 {
        return Err(PolyError::Unsupported(format!(
            "permutation expansion supports at most 8 monomials, got {k}"
        )));
    }
    if s.size() != k {
        return Err(PolyError::ArityMismatch(
            ExponentVec::zeros(s.size()),
            s.size(),
            k,
        ));
    }
    let n = monomials[0].len();
    if n == 0 {
        return Err(PolyError::EmptyArity);
    }
    for m in monomials {
        if m.len() != n {
            return Err(PolyError::ArityMismatch(m.clone(), m.len(), n));
        }
    }
    let mut ell = vec![0u32; n];
    for m in monomials {
        for (v, e) in ell.iter_mut().zip(m.as_slice()) {
            *v += e;
        }
    }
    if let Some(v) = ell.iter().position(|&e| e == 0) {
        return Err(PolyError::ZeroColumnSum(v));
    }
    let ell = ExponentVec::new(ell);

    let p = char_poly_det(monomials, s);
    let q = char_poly_det(monomials, &s.adjoint());
    let det_minus_s = s.det() * Complex64::new(-1.0, 0.0).powu(k as u32);
    let eta = Scalar::Complex(det_minus_s.finv());
    StablePair::from_parts(p, q, ell, eta, false)
}

/// The Lee-Yang polynomial of a symmetric coupling matrix A with entries in
/// [-1, 1]: `P = sum_{S subset of {1..n}} (prod_{i in S, j not in S} A_ij) z^S`.
/// The pair is self-dual with `ell = (1, ..., 1)` and `eta = 1`. Supports
/// n <= 20 (the sum has 2^n terms).
pub fn lee_yang(a: &nalgebra::DMatrix<f64>) -> Result<StablePair, PolyError> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(PolyError::Unsupported(format!(
            "coupling matrix must be square and nonempty, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n > 20 {
        return Err(PolyError::Unsupported(format!(
            "subset expansion supports at most 20 spins, got {n}"
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)] != a[(j, i)] {
                return Err(PolyError::NotSymmetric(i, j));
            }
            if !(-1.0..=1.0).contains(&a[(i, j)]) {
                return Err(PolyError::EntryOutOfRange(i, j, a[(i, j)]));
            }
        }
    }
    let mut terms = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let mut coeff = 1.0f64;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                for j in 0..n {
                    if mask >> j & 1 == 0 {
                        coeff *= a[(i, j)];
                    }
                }
            }
        }
        if coeff == 0.0 {
            continue;
        }
        let exp = ExponentVec::new((0..n).map(|i| mask >> i & 1).collect());
        terms.push((exp, Scalar::real(coeff)));
    }
    let p = MultiPoly::new(n, terms)?;
    let q = p.clone();
    let ell = ExponentVec::new(vec![1; n]);
    StablePair::from_parts(p, q, ell, Scalar::one(), false)
}
