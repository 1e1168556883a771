//! Coefficient scalars: complex doubles with an exact rational fast path.
//!
//! Polynomial inputs are allowed to carry coefficients as `num/den` pairs,
//! and keeping that rational form alive through the involution and the
//! functional-equation algebra lets pair validation compare coefficients
//! *exactly* instead of through a float residual. That matters for values
//! like 1/3 that have no finite binary expansion. Arithmetic that would
//! overflow the `i64` rationals silently degrades to complex doubles.

use num::rational::Ratio;
use num::{CheckedAdd, CheckedMul, CheckedSub, Zero};
use num_complex::Complex64;
use std::fmt;

/// A polynomial coefficient: exact rational when known, complex double otherwise.
#[derive(Clone, Copy, Debug)]
pub enum Scalar {
    Rational(Ratio<i64>),
    Complex(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Ratio::from_integer(1))
    }

    pub fn from_integer(v: i64) -> Self {
        Scalar::Rational(Ratio::from_integer(v))
    }

    /// Exact rational `num/den`; panics when `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Rational(Ratio::new(num, den))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Complex(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Scalar::Complex(Complex64::new(re, 0.0))
    }

    /// The value as a complex double (rationals are converted).
    pub fn value(&self) -> Complex64 {
        match self {
            Scalar::Rational(r) => Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0),
            Scalar::Complex(c) => *c,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Complex(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => *r == Ratio::from_integer(1),
            Scalar::Complex(c) => c.re == 1.0 && c.im == 0.0,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// True when the value is real (exactly, for the complex variant).
    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Complex(c) => c.im == 0.0,
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => match a.checked_mul(b) {
                Some(r) => Scalar::Rational(r),
                None => Scalar::Complex(self.value() * other.value()),
            },
            _ => Scalar::Complex(self.value() * other.value()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => match a.checked_add(b) {
                Some(r) => Scalar::Rational(r),
                None => Scalar::Complex(self.value() + other.value()),
            },
            _ => Scalar::Complex(self.value() + other.value()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => match a.checked_sub(b) {
                Some(r) => Scalar::Rational(r),
                None => Scalar::Complex(self.value() - other.value()),
            },
            _ => Scalar::Complex(self.value() - other.value()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Complex(c) => Scalar::Complex(-c),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Complex(c) => Scalar::Complex(c.finv()),
        })
    }

    /// Whether two coefficients agree: exactly when both are rational,
    /// within `tol` in modulus otherwise.
    pub fn agrees(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            _ => (self.value() - other.value()).norm() <= tol,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if *r.denom() == 1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Complex(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "{}{:+}i", c.re, c.im)
                }
            }
        }
    }
}
