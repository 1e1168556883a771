//! JSON file formats for polynomials and pairs.
//!
//! A polynomial file looks like
//!
//! ```json
//! {"n": 2, "terms": [
//!   {"exp": [0, 0], "coeff": {"num": 1, "den": 1}},
//!   {"exp": [1, 2], "coeff": {"re": -1.0, "im": 0.0}}
//! ]}
//! ```
//!
//! with each coefficient either an exact rational (`num`/`den`) or a complex
//! double (`re`/`im`). A pair file carries the same fields for P plus
//! `"ell"` and `"eta"`; the dual side Q is reconstructed from them as
//! `eta * z^ell * P(1/z)` and re-validated, so a pair file cannot encode an
//! inconsistent pair.

use crate::polynomial::{ExponentVec, MultiPoly, PolyError, StablePair};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("rational coefficient has zero denominator")]
    ZeroDenominator,
    #[error("constant term (exp = all zeros) must be present")]
    MissingConstant,
    #[error("pair file declares ell = {declared} but the polynomial gives {solved}")]
    EllMismatch { declared: String, solved: String },
    #[error("{0}")]
    Read(String),
}

/// One coefficient on disk: exact rational or complex double.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffRepr {
    Rational { num: i64, den: i64 },
    Complex { re: f64, im: f64 },
}

impl CoeffRepr {
    pub fn to_scalar(self) -> Result<Scalar, IoError> {
        match self {
            CoeffRepr::Rational { den: 0, .. } => Err(IoError::ZeroDenominator),
            CoeffRepr::Rational { num, den } => Ok(Scalar::rational(num, den)),
            CoeffRepr::Complex { re, im } => Ok(Scalar::complex(re, im)),
        }
    }

    pub fn from_scalar(s: &Scalar) -> Self {
        match s {
            Scalar::Rational(r) => CoeffRepr::Rational {
                num: *r.numer(),
                den: *r.denom(),
            },
            Scalar::Complex(c) => CoeffRepr::Complex { re: c.re, im: c.im },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRepr {
    pub exp: Vec<u32>,
    pub coeff: CoeffRepr,
}

/// On-disk polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyFile {
    pub n: usize,
    pub terms: Vec<TermRepr>,
}

/// On-disk pair: P's terms plus the functional-equation data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairFile {
    pub n: usize,
    pub terms: Vec<TermRepr>,
    pub ell: Vec<u32>,
    pub eta: CoeffRepr,
}

fn build_poly(n: usize, terms: &[TermRepr]) -> Result<MultiPoly, IoError> {
    let mut converted = Vec::with_capacity(terms.len());
    for t in terms {
        converted.push((ExponentVec::new(t.exp.clone()), t.coeff.to_scalar()?));
    }
    let poly = MultiPoly::new(n, converted)?;
    if poly.constant().is_zero() {
        return Err(IoError::MissingConstant);
    }
    Ok(poly)
}

pub fn poly_from_json(json: &str) -> Result<MultiPoly, IoError> {
    let file: PolyFile = serde_json::from_str(json)?;
    build_poly(file.n, &file.terms)
}

pub fn poly_to_json(poly: &MultiPoly) -> String {
    let file = PolyFile {
        n: poly.n(),
        terms: poly
            .terms()
            .map(|(e, c)| TermRepr {
                exp: e.as_slice().to_vec(),
                coeff: CoeffRepr::from_scalar(c),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("polynomial files always serialize")
}

/// Reconstruct a pair from a pair file: Q is built from (P, ell, eta) and the
/// declared data is cross-checked against the solved functional equation.
/// `allow_relaxed` admits files whose eta gives Q(0) != 1.
pub fn pair_from_json(json: &str, allow_relaxed: bool) -> Result<StablePair, IoError> {
    let file: PairFile = serde_json::from_str(json)?;
    let p = build_poly(file.n, &file.terms)?;
    let eta = file.eta.to_scalar()?;
    let declared_ell = ExponentVec::new(file.ell.clone());
    let solved_ell = p.max_degree_vec();
    if declared_ell != solved_ell {
        return Err(IoError::EllMismatch {
            declared: declared_ell.to_string(),
            solved: solved_ell.to_string(),
        });
    }
    let (_, cleared) = p.involute();
    let q = cleared.scale(&eta);
    let pair = StablePair::from_parts(p, q, declared_ell, eta, allow_relaxed)?;
    // from_parts re-validates, so eta is consistent by construction; the only
    // way it could drift is a non-unimodular eta, which validation reports.
    Ok(pair)
}

pub fn pair_to_json(pair: &StablePair) -> String {
    let file = PairFile {
        n: pair.n(),
        terms: pair
            .p()
            .terms()
            .map(|(e, c)| TermRepr {
                exp: e.as_slice().to_vec(),
                coeff: CoeffRepr::from_scalar(c),
            })
            .collect(),
        ell: pair.ell().as_slice().to_vec(),
        eta: CoeffRepr::from_scalar(&pair.eta()),
    };
    serde_json::to_string_pretty(&file).expect("pair files always serialize")
}

pub fn poly_from_path(path: &std::path::Path) -> Result<MultiPoly, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Read(format!("{}: {e}", path.display())))?;
    poly_from_json(&text)
}

pub fn pair_from_path(path: &std::path::Path, allow_relaxed: bool) -> Result<StablePair, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Read(format!("{}: {e}", path.display())))?;
    pair_from_json(&text, allow_relaxed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_round_trips_through_json() {
        let p = MultiPoly::from_rational_terms(
            2,
            &[(&[0, 0], 1, 1), (&[1, 0], -1, 3), (&[0, 2], 1, 3), (&[1, 2], -1, 1)],
        )
        .unwrap();
        let json = poly_to_json(&p);
        let back = poly_from_json(&json).unwrap();
        assert!(back.agrees(&p, 0.0));
        // Rational coefficients survive the round trip exactly.
        assert!(back.coeff(&ExponentVec::new(vec![1, 0])).is_rational());
    }

    #[test]
    fn mixed_coefficient_forms_parse() {
        let json = r#"{"n": 1, "terms": [
            {"exp": [0], "coeff": {"num": 1, "den": 1}},
            {"exp": [1], "coeff": {"re": -0.5, "im": 0.25}}
        ]}"#;
        let p = poly_from_json(json).unwrap();
        let c = p.coeff(&ExponentVec::new(vec![1])).value();
        assert_eq!((c.re, c.im), (-0.5, 0.25));
    }

    #[test]
    fn pair_round_trips_and_validates() {
        let p = MultiPoly::from_rational_terms(
            2,
            &[(&[0, 0], 1, 1), (&[1, 0], -1, 3), (&[0, 2], 1, 3), (&[1, 2], -1, 1)],
        )
        .unwrap();
        let pair = StablePair::derive_dual(p).unwrap();
        let json = pair_to_json(&pair);
        let back = pair_from_json(&json, false).unwrap();
        assert!(back.p().agrees(pair.p(), 0.0));
        assert!(back.q().agrees(pair.q(), 0.0));
        assert!(back.eta().agrees(&pair.eta(), 0.0));
    }

    #[test]
    fn pair_file_with_wrong_ell_is_rejected() {
        let json = r#"{"n": 1,
            "terms": [{"exp": [0], "coeff": {"num": 1, "den": 1}},
                      {"exp": [1], "coeff": {"num": -1, "den": 1}}],
            "ell": [2], "eta": {"num": -1, "den": 1}}"#;
        assert!(matches!(
            pair_from_json(json, false),
            Err(IoError::EllMismatch { .. })
        ));
    }

    #[test]
    fn relaxed_pair_file_needs_the_flag() {
        // eta = 1 gives Q = z1 - 1 with Q(0) = -1.
        let json = r#"{"n": 1,
            "terms": [{"exp": [0], "coeff": {"num": 1, "den": 1}},
                      {"exp": [1], "coeff": {"num": -1, "den": 1}}],
            "ell": [1], "eta": {"num": 1, "den": 1}}"#;
        assert!(pair_from_json(json, false).is_err());
        let pair = pair_from_json(json, true).unwrap();
        assert!(pair.is_relaxed());
    }

    #[test]
    fn missing_constant_is_rejected() {
        let json = r#"{"n": 1, "terms": [{"exp": [1], "coeff": {"num": 1, "den": 1}}]}"#;
        assert!(matches!(poly_from_json(json), Err(IoError::MissingConstant)));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let json = r#"{"n": 1, "terms": [{"exp": [0], "coeff": {"num": 1, "den": 0}}]}"#;
        assert!(matches!(poly_from_json(json), Err(IoError::ZeroDenominator)));
    }
}
