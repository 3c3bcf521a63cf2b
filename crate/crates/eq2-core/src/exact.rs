//! Exact scalar arithmetic over the coefficient ring generated by `q^(1/2)`
//! and its conjugate.
//!
//! Every operator coefficient appearing in the catalog is a finite sum of
//! terms `r * q^(a/2) * qbar^(b/2)` with `r` rational and `a, b` integers.
//! Half-integer powers need a branch choice: we fix `s = sqrt(q)` (principal
//! branch) once per [`QContext`] and read `q^(m/2)` as `s^m` throughout.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Numeric context: the deformation parameter and its derived constants.
///
/// `zeta = q / qbar` is the unit phase driving the braiding; it equals
/// `q^(2/2) * qbar^(-2/2)` in exact-term form.
#[derive(Debug, Clone)]
pub struct QContext {
    q: Complex64,
    /// Principal square root of `q`; `q^(m/2) := sqrt_q^m`.
    sqrt_q: Complex64,
}

impl QContext {
    /// Creates a context for a deformation parameter with `0 < |q| < 1`.
    pub fn new(q: Complex64) -> Result<Self, ScalarError> {
        let m = q.norm();
        if !(m > 0.0 && m < 1.0) || !m.is_finite() {
            return Err(ScalarError::ModulusOutOfRange { q });
        }
        Ok(QContext { q, sqrt_q: q.sqrt() })
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn q_modulus(&self) -> f64 {
        self.q.norm()
    }

    /// The braiding phase `zeta = q / conj(q)`.
    pub fn zeta(&self) -> Complex64 {
        self.q / self.q.conj()
    }

    /// Numeric value of `q^(a/2) * qbar^(b/2)`, evaluated in polar form.
    ///
    /// The modulus is `|q|^((a+b)/2)` and the phase `(a-b)/2 * arg(q)`;
    /// computing through `exp` keeps pure phases (`a + b = 0`) exactly
    /// unimodular where a `powi` product would underflow against an
    /// overflow.
    pub fn half_power(&self, a: i64, b: i64) -> Complex64 {
        let modulus = (0.5 * (a + b) as f64 * self.q.norm().ln()).exp();
        let phase = (a - b) as f64 * self.sqrt_q.arg();
        Complex64::from_polar(modulus, phase)
    }

    /// `zeta^m` as a unit phase.
    pub fn zeta_power(&self, m: i64) -> Complex64 {
        self.half_power(2 * m, -2 * m)
    }
}

/// Errors raised by the exact-scalar layer.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ScalarError {
    #[error("deformation parameter must satisfy 0 < |q| < 1, got q = {q}")]
    ModulusOutOfRange { q: Complex64 },
}

/// A finite sum of terms `r * q^(a/2) * qbar^(b/2)`, keyed by `(a, b)`.
///
/// Canonical form: at most one term per `(a, b)` and no zero coefficients.
/// Equality is syntactic equality of the canonical form; for generic `q` the
/// monomials `q^(a/2) qbar^(b/2)` are linearly independent over the
/// rationals, so this decides scalar equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactScalar {
    terms: BTreeMap<(i64, i64), BigRational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::term(BigRational::one(), 0, 0)
    }

    /// The single term `r * q^(a/2) * qbar^(b/2)`.
    pub fn term(r: BigRational, a: i64, b: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert((a, b), r);
        }
        ExactScalar { terms }
    }

    pub fn from_integer(n: i64) -> Self {
        ExactScalar::term(BigRational::from_integer(BigInt::from(n)), 0, 0)
    }

    /// `zeta^m = q^m qbar^(-m)`.
    pub fn zeta_power(m: i64) -> Self {
        ExactScalar::term(BigRational::one(), 2 * m, -2 * m)
    }

    /// `q^(m/2)`.
    pub fn q_half_power(m: i64) -> Self {
        ExactScalar::term(BigRational::one(), m, 0)
    }

    /// `|q|^m = q^(m/2) qbar^(m/2)`.
    pub fn abs_q_power(m: i64) -> Self {
        ExactScalar::term(BigRational::one(), m, m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &ExactScalar) -> ExactScalar {
        let mut terms = self.terms.clone();
        for (k, r) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(BigRational::zero);
            *entry += r;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        ExactScalar { terms }
    }

    pub fn sub(&self, other: &ExactScalar) -> ExactScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactScalar {
        let terms = self.terms.iter().map(|(k, r)| (*k, -r)).collect();
        ExactScalar { terms }
    }

    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        let mut out = BTreeMap::new();
        for ((a1, b1), r1) in &self.terms {
            for ((a2, b2), r2) in &other.terms {
                let key = (a1 + a2, b1 + b2);
                let entry = out.entry(key).or_insert_with(BigRational::zero);
                *entry += r1 * r2;
            }
        }
        out.retain(|_, r: &mut BigRational| !r.is_zero());
        ExactScalar { terms: out }
    }

    /// Multiplies by the single term `r * q^(a/2) * qbar^(b/2)` in place.
    pub fn mul_term(&self, r: &BigRational, a: i64, b: i64) -> ExactScalar {
        if r.is_zero() {
            return ExactScalar::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|((ta, tb), tr)| ((ta + a, tb + b), tr * r))
            .collect();
        ExactScalar { terms }
    }

    /// Complex conjugation: swaps `a <-> b` per term (rationals are real).
    pub fn conj(&self) -> ExactScalar {
        let terms = self.terms.iter().map(|((a, b), r)| ((*b, *a), r.clone())).collect();
        ExactScalar { terms }
    }

    /// Numeric evaluation at the context's `q`.
    pub fn eval(&self, ctx: &QContext) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), r) in &self.terms {
            let rf = r.to_f64().unwrap_or(f64::NAN);
            acc += ctx.half_power(*a, *b) * rf;
        }
        acc
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), r) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{r}")?;
            if *a != 0 {
                write!(f, "*q^({a}/2)")?;
            }
            if *b != 0 {
                write!(f, "*qbar^({b}/2)")?;
            }
        }
        Ok(())
    }
}
