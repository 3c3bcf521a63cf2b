//! Finitely supported vectors on integer lattices, in exact or float mode.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use smallvec::SmallVec;

use crate::exact::{ExactScalar, QContext};

/// A point of `Z^d` labelling a basis vector of a tensor power of `l^2(Z)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub SmallVec<[i64; 12]>);

impl BasisIndex {
    pub fn new(coords: &[i64]) -> Self {
        BasisIndex(SmallVec::from_slice(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<&[i64]> for BasisIndex {
    fn from(c: &[i64]) -> Self {
        BasisIndex::new(c)
    }
}

/// Scalar modes a [`FiniteVector`] can carry.
pub trait VectorScalar: Clone + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// The value `r * q^(a/2) * qbar^(b/2)` times `self`.
    fn mul_coeff(&self, ctx: &QContext, r: &BigRational, a: i64, b: i64) -> Self;
    fn one() -> Self;
}

impl VectorScalar for ExactScalar {
    fn add(&self, other: &Self) -> Self {
        ExactScalar::add(self, other)
    }

    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }

    fn mul_coeff(&self, _ctx: &QContext, r: &BigRational, a: i64, b: i64) -> Self {
        self.mul_term(r, a, b)
    }

    fn one() -> Self {
        ExactScalar::one()
    }
}

impl VectorScalar for Complex64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn mul_coeff(&self, ctx: &QContext, r: &BigRational, a: i64, b: i64) -> Self {
        use num_traits::ToPrimitive;
        self * ctx.half_power(a, b) * r.to_f64().unwrap_or(f64::NAN)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
}

/// Finitely supported map `BasisIndex -> scalar`; zero entries are never
/// stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteVector<S: VectorScalar> {
    dim: usize,
    entries: BTreeMap<BasisIndex, S>,
}

impl<S: VectorScalar> FiniteVector<S> {
    pub fn zero(dim: usize) -> Self {
        FiniteVector { dim, entries: BTreeMap::new() }
    }

    /// The basis vector `e_x`.
    pub fn basis(coords: &[i64]) -> Self {
        let mut v = FiniteVector::zero(coords.len());
        v.entries.insert(BasisIndex::new(coords), S::one());
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &BasisIndex) -> Option<&S> {
        self.entries.get(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &S)> {
        self.entries.iter()
    }

    pub fn insert_add(&mut self, idx: BasisIndex, value: S) {
        debug_assert_eq!(idx.dim(), self.dim);
        if value.is_zero() {
            return;
        }
        match self.entries.get_mut(&idx) {
            Some(slot) => {
                let sum = slot.add(&value);
                if sum.is_zero() {
                    self.entries.remove(&idx);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.entries.insert(idx, value);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.insert_add(k.clone(), v.clone());
        }
        out
    }
}

impl FiniteVector<Complex64> {
    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(_, v)| !(v.re == 0.0 && v.im == 0.0))
            .map(|(k, v)| (k.clone(), v * c))
            .collect();
        FiniteVector { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl FiniteVector<ExactScalar> {
    /// Numeric image of an exact vector.
    pub fn to_float(&self, ctx: &QContext) -> FiniteVector<Complex64> {
        let mut out = FiniteVector::zero(self.dim);
        for (k, v) in &self.entries {
            out.insert_add(k.clone(), v.eval(ctx));
        }
        out
    }
}
