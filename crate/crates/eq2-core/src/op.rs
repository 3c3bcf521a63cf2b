//! Weighted-shift operator calculus on integer lattices.
//!
//! A [`ShiftMonomial`] sends the basis vector `e_x` to
//! `c(x) * e_{A x + d}` where the coefficient is
//! `poly(x) * q^(Q1(x)/2) * qbar^(Q2(x)/2)` with `poly` a rational-coefficient
//! polynomial and `Q1`, `Q2` integer quadratic forms. This class contains
//! every generator of the catalog and is closed under composition, adjoints,
//! and tensor-leg embedding, so finite products and sums of generators never
//! leave it. An [`OpExpr`] is a finite sum of monomials.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::exact::{ExactScalar, QContext};
use crate::poly::{AffineMap, IntQuadForm, MultiPoly};
use crate::vector::{BasisIndex, FiniteVector, VectorScalar};

/// Structural errors from the operator layer.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum OpError {
    #[error("dimension mismatch: operator acts on Z^{op} but operand lives on Z^{operand}")]
    DimensionMismatch { op: usize, operand: usize },
    #[error("legs must be strictly increasing and within the ambient space: {0:?}")]
    BadLegs(Vec<usize>),
    #[error("leg dimensions of {selected:?} total {got}, operator needs {need}")]
    LegDimension { selected: Vec<usize>, got: usize, need: usize },
    #[error("conjugator is not invertible in the shift-monomial class")]
    NonInvertibleConjugator,
}

/// One weighted shift `e_x -> poly(x) q^(Q1(x)/2) qbar^(Q2(x)/2) e_{map(x)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftMonomial {
    pub map: AffineMap,
    pub poly: MultiPoly,
    pub qform: IntQuadForm,
    pub qbarform: IntQuadForm,
}

impl ShiftMonomial {
    pub fn identity(dim: usize) -> Self {
        ShiftMonomial {
            map: AffineMap::identity(dim),
            poly: MultiPoly::one(dim),
            qform: IntQuadForm::zero(),
            qbarform: IntQuadForm::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    /// Composition `self . other` (apply `other` first): shifts compose and
    /// the outer coefficient is evaluated at the shifted argument.
    pub fn compose(&self, other: &ShiftMonomial) -> ShiftMonomial {
        ShiftMonomial {
            map: self.map.compose(&other.map),
            poly: other.poly.mul(&self.poly.compose_affine(&other.map)),
            qform: other.qform.add(&self.qform.compose_affine(&other.map)),
            qbarform: other.qbarform.add(&self.qbarform.compose_affine(&other.map)),
        }
    }

    /// Adjoint: `A* e_y = conj(c(A^{-1}(y - d))) e_{A^{-1}(y - d)}`.
    pub fn adjoint(&self) -> ShiftMonomial {
        let inv = self
            .map
            .inverse()
            .expect("catalog shift maps are unimodular");
        ShiftMonomial {
            map: inv.clone(),
            poly: self.poly.compose_affine(&inv),
            qform: self.qbarform.compose_affine(&inv),
            qbarform: self.qform.compose_affine(&inv),
        }
    }

    /// Coefficient at the lattice point `x` as a single exact term.
    pub fn coeff_at(&self, x: &[i64]) -> (BigRational, i64, i64) {
        (self.poly.eval(x), self.qform.eval(x), self.qbarform.eval(x))
    }

    fn embed(&self, new_dim: usize, coord_map: &[usize]) -> ShiftMonomial {
        ShiftMonomial {
            map: self.map.embed(new_dim, coord_map),
            poly: self.poly.embed(new_dim, coord_map),
            qform: self.qform.embed(coord_map),
            qbarform: self.qbarform.embed(coord_map),
        }
    }

    fn scale_term(&self, r: &BigRational, a: i64, b: i64) -> ShiftMonomial {
        ShiftMonomial {
            map: self.map.clone(),
            poly: self.poly.scale(r),
            qform: self.qform.add_constant(a),
            qbarform: self.qbarform.add_constant(b),
        }
    }

    fn max_coord_degree(&self) -> u32 {
        let d = self.dim();
        (0..d)
            .map(|i| {
                self.poly
                    .coord_degree(i)
                    .max(self.qform.coord_degree(i))
                    .max(self.qbarform.coord_degree(i))
            })
            .max()
            .unwrap_or(0)
    }
}

/// Finite formal sum of shift monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct OpExpr {
    dim: usize,
    terms: Vec<ShiftMonomial>,
}

impl OpExpr {
    pub fn identity(dim: usize) -> Self {
        OpExpr { dim, terms: vec![ShiftMonomial::identity(dim)] }
    }

    pub fn zero(dim: usize) -> Self {
        OpExpr { dim, terms: Vec::new() }
    }

    pub fn from_monomial(m: ShiftMonomial) -> Self {
        let dim = m.dim();
        OpExpr { dim, terms: vec![m] }.canonicalize()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ShiftMonomial] {
        &self.terms
    }

    /// Groups summands with equal shift map and exponent forms, merging their
    /// polynomial parts; drops vanished summands.
    pub fn canonicalize(mut self) -> Self {
        use std::collections::BTreeMap;
        let mut groups: BTreeMap<(AffineMap, IntQuadForm, IntQuadForm), MultiPoly> = BTreeMap::new();
        for t in self.terms.drain(..) {
            let key = (t.map, t.qform, t.qbarform);
            match groups.get_mut(&key) {
                Some(p) => *p = p.add(&t.poly),
                None => {
                    groups.insert(key, t.poly);
                }
            }
        }
        let terms = groups
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|((map, qform, qbarform), poly)| ShiftMonomial { map, poly, qform, qbarform })
            .collect();
        OpExpr { dim: self.dim, terms }
    }

    /// Applies the operator to a finitely supported vector.
    pub fn apply<S: VectorScalar>(
        &self,
        ctx: &QContext,
        vec: &FiniteVector<S>,
    ) -> Result<FiniteVector<S>, OpError> {
        if self.dim != vec.dim() {
            return Err(OpError::DimensionMismatch { op: self.dim, operand: vec.dim() });
        }
        let mut out = FiniteVector::zero(self.dim);
        for (idx, value) in vec.iter() {
            for t in &self.terms {
                let (r, a, b) = t.coeff_at(idx.coords());
                let scaled = value.mul_coeff(ctx, &r, a, b);
                if scaled.is_zero() {
                    continue;
                }
                let target = BasisIndex::new(&t.map.apply(idx.coords()));
                out.insert_add(target, scaled);
            }
        }
        Ok(out)
    }

    /// Image of a single basis vector in exact mode.
    pub fn apply_basis_exact(&self, coords: &[i64]) -> Result<FiniteVector<ExactScalar>, OpError> {
        // The context is irrelevant in exact mode; reuse a fixed one.
        let ctx = QContext::new(Complex64::new(0.5, 0.0)).expect("valid fixed context");
        self.apply(&ctx, &FiniteVector::basis(coords))
    }

    /// Operator product `self . other` (apply `other` first), distributed
    /// over summands and canonicalized.
    pub fn compose(&self, other: &OpExpr) -> Result<OpExpr, OpError> {
        if self.dim != other.dim {
            return Err(OpError::DimensionMismatch { op: self.dim, operand: other.dim });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.compose(b));
            }
        }
        Ok(OpExpr { dim: self.dim, terms }.canonicalize())
    }

    pub fn adjoint(&self) -> OpExpr {
        let terms = self.terms.iter().map(ShiftMonomial::adjoint).collect();
        OpExpr { dim: self.dim, terms }.canonicalize()
    }

    pub fn add(&self, other: &OpExpr) -> Result<OpExpr, OpError> {
        if self.dim != other.dim {
            return Err(OpError::DimensionMismatch { op: self.dim, operand: other.dim });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(OpExpr { dim: self.dim, terms }.canonicalize())
    }

    pub fn sub(&self, other: &OpExpr) -> Result<OpExpr, OpError> {
        self.add(&other.scale(&ExactScalar::from_integer(-1)))
    }

    /// Scalar multiple; a multi-term scalar fans out into one monomial per
    /// term.
    pub fn scale(&self, s: &ExactScalar) -> OpExpr {
        let mut terms = Vec::new();
        for ((a, b), r) in s.terms() {
            for t in &self.terms {
                terms.push(t.scale_term(r, *a, *b));
            }
        }
        OpExpr { dim: self.dim, terms }.canonicalize()
    }

    /// Embeds the operator on the selected tensor legs (1-based, strictly
    /// increasing) of the ambient space described by per-leg dimensions,
    /// acting as the identity elsewhere.
    pub fn embed_legs(&self, legs: &[usize], ambient: &[usize]) -> Result<OpExpr, OpError> {
        if legs.is_empty()
            || legs.windows(2).any(|w| w[0] >= w[1])
            || legs.iter().any(|&l| l == 0 || l > ambient.len())
        {
            return Err(OpError::BadLegs(legs.to_vec()));
        }
        let total: usize = ambient.iter().sum();
        let offsets: Vec<usize> = ambient
            .iter()
            .scan(0usize, |acc, d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let mut coord_map = Vec::new();
        for &l in legs {
            let base = offsets[l - 1];
            for k in 0..ambient[l - 1] {
                coord_map.push(base + k);
            }
        }
        if coord_map.len() != self.dim {
            return Err(OpError::LegDimension {
                selected: legs.to_vec(),
                got: coord_map.len(),
                need: self.dim,
            });
        }
        let terms = self.terms.iter().map(|t| t.embed(total, &coord_map)).collect();
        Ok(OpExpr { dim: total, terms }.canonicalize())
    }

    /// Conjugation `u . self . u*` for a unitary `u` in the monomial class.
    pub fn conjugate_by(&self, u: &OpExpr) -> Result<OpExpr, OpError> {
        let u_star = u.adjoint();
        let id = OpExpr::identity(u.dim);
        if u.compose(&u_star)? != id || u_star.compose(u)? != id {
            return Err(OpError::NonInvertibleConjugator);
        }
        u.compose(self)?.compose(&u_star)
    }

    /// Window size sufficient for [`OpExpr::equal_exact`] to certify equality
    /// everywhere: maximum per-coordinate degree of any polynomial or
    /// exponent form, plus two.
    pub fn auto_window(&self, other: &OpExpr) -> i64 {
        let deg = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| t.max_coord_degree())
            .max()
            .unwrap_or(0);
        i64::from(deg) + 2
    }

    /// Decides operator equality by exact evaluation on every basis vector
    /// with coordinates in `[-window, window]^d`.
    ///
    /// Both sides are monomial sums whose data are polynomials of bounded
    /// per-coordinate degree; agreement on a grid exceeding that degree in
    /// each coordinate forces the difference to vanish identically, so a
    /// window of [`OpExpr::auto_window`] certifies equality on the whole
    /// lattice.
    pub fn equal_exact(&self, other: &OpExpr, window: i64) -> Result<bool, OpError> {
        if self.dim != other.dim {
            return Err(OpError::DimensionMismatch { op: self.dim, operand: other.dim });
        }
        Ok(self.first_counterexample(other, window)?.is_none())
    }

    /// As [`OpExpr::equal_exact`], returning the first basis index where the
    /// two sides disagree.
    pub fn first_counterexample(
        &self,
        other: &OpExpr,
        window: i64,
    ) -> Result<Option<BasisIndex>, OpError> {
        if self.dim != other.dim {
            return Err(OpError::DimensionMismatch { op: self.dim, operand: other.dim });
        }
        let mut coords = vec![-window; self.dim];
        loop {
            let lhs = self.apply_basis_exact(&coords)?;
            let rhs = other.apply_basis_exact(&coords)?;
            if lhs != rhs {
                return Ok(Some(BasisIndex::new(&coords)));
            }
            // Odometer over the window.
            let mut i = 0;
            loop {
                if i == self.dim {
                    return Ok(None);
                }
                coords[i] += 1;
                if coords[i] <= window {
                    break;
                }
                coords[i] = -window;
                i += 1;
            }
        }
    }

    /// Numeric application, for operators embedded in float-mode pipelines.
    pub fn apply_float(
        &self,
        ctx: &QContext,
        vec: &FiniteVector<Complex64>,
    ) -> Result<FiniteVector<Complex64>, OpError> {
        self.apply(ctx, vec)
    }
}

/// Builds the tensor product `a (x) b` as an operator on the concatenated
/// coordinate space.
pub fn tensor(a: &OpExpr, b: &OpExpr) -> OpExpr {
    let ambient = [a.dim(), b.dim()];
    let ea = a.embed_legs(&[1], &ambient).expect("valid embedding");
    let eb = b.embed_legs(&[2], &ambient).expect("valid embedding");
    ea.compose(&eb).expect("dimensions agree")
}
