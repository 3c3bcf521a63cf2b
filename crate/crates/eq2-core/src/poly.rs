//! Symbolic coefficient data for weighted shifts: sparse multivariate
//! polynomials with rational coefficients, integer quadratic exponent forms,
//! and affine unimodular shift maps on the lattice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

pub type Exponents = SmallVec<[u8; 12]>;

/// Sparse multivariate polynomial in `dim` integer coordinates with
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

fn trimmed(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::new(), c);
        }
        MultiPoly { dim, terms }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn constant_i64(dim: usize, c: i64) -> Self {
        Self::constant(dim, BigRational::from_integer(BigInt::from(c)))
    }

    /// The coordinate `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut e = Exponents::new();
        e.resize(i + 1, 0);
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MultiPoly { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        MultiPoly { dim: self.dim, terms }
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MultiPoly { dim: self.dim, terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.dim, other.dim);
        let mut terms: BTreeMap<Exponents, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let mut e = Exponents::new();
                e.resize(n, 0);
                for (i, slot) in e.iter_mut().enumerate() {
                    let a = e1.get(i).copied().unwrap_or(0);
                    let b = e2.get(i).copied().unwrap_or(0);
                    *slot = a + b;
                }
                let entry = terms.entry(trimmed(e)).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { dim: self.dim, terms }
    }

    pub fn scale(&self, r: &BigRational) -> MultiPoly {
        if r.is_zero() {
            return MultiPoly::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect();
        MultiPoly { dim: self.dim, terms }
    }

    pub fn eval(&self, x: &[i64]) -> BigRational {
        assert_eq!(x.len(), self.dim);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term *= BigRational::from_integer(BigInt::from(x[i]));
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes `x := map(y)`, returning a polynomial in `y`.
    pub fn compose_affine(&self, map: &AffineMap) -> MultiPoly {
        assert_eq!(self.dim, map.dim());
        // x_i as polynomial in y.
        let coords: Vec<MultiPoly> = (0..self.dim)
            .map(|i| {
                let mut p = MultiPoly::constant_i64(self.dim, map.offset()[i]);
                for j in 0..self.dim {
                    let a = map.matrix()[i * self.dim + j];
                    if a != 0 {
                        p = p.add(&MultiPoly::var(self.dim, j).scale(&BigRational::from_integer(BigInt::from(a))));
                    }
                }
                p
            })
            .collect();
        let mut acc = MultiPoly::zero(self.dim);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(self.dim, c.clone());
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul(&coords[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Re-indexes variables into a larger space: variable `i` becomes
    /// `coord_map[i]`.
    pub fn embed(&self, new_dim: usize, coord_map: &[usize]) -> MultiPoly {
        assert_eq!(coord_map.len(), self.dim);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = Exponents::new();
                for (i, &p) in e.iter().enumerate() {
                    if p != 0 {
                        let t = coord_map[i];
                        if ne.len() <= t {
                            ne.resize(t + 1, 0);
                        }
                        ne[t] = p;
                    }
                }
                (trimmed(ne), c.clone())
            })
            .collect();
        MultiPoly { dim: new_dim, terms }
    }

    /// Maximum degree in coordinate `i` over all terms.
    pub fn coord_degree(&self, i: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.get(i).copied().unwrap_or(0) as u32)
            .max()
            .unwrap_or(0)
    }

    /// True when the polynomial is the constant 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Exponents::new())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }
}

/// Integer-valued quadratic polynomial `sum c_ij x_i x_j + sum l_i x_i + c`.
///
/// Quadratic keys are stored with `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntQuadForm {
    quad: BTreeMap<(usize, usize), i64>,
    lin: BTreeMap<usize, i64>,
    cst: i64,
}

impl IntQuadForm {
    pub fn zero() -> Self {
        IntQuadForm::default()
    }

    pub fn constant(c: i64) -> Self {
        IntQuadForm { cst: c, ..Default::default() }
    }

    pub fn linear(coeffs: &[(usize, i64)], cst: i64) -> Self {
        let mut lin = BTreeMap::new();
        for &(i, c) in coeffs {
            if c != 0 {
                *lin.entry(i).or_insert(0) += c;
            }
        }
        lin.retain(|_, c| *c != 0);
        IntQuadForm { quad: BTreeMap::new(), lin, cst }
    }

    pub fn bilinear(i: usize, j: usize, c: i64) -> Self {
        let mut quad = BTreeMap::new();
        if c != 0 {
            quad.insert((i.min(j), i.max(j)), c);
        }
        IntQuadForm { quad, lin: BTreeMap::new(), cst: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.lin.is_empty() && self.cst == 0
    }

    pub fn add(&self, other: &IntQuadForm) -> IntQuadForm {
        let mut out = self.clone();
        for (k, c) in &other.quad {
            let e = out.quad.entry(*k).or_insert(0);
            *e += c;
        }
        for (k, c) in &other.lin {
            let e = out.lin.entry(*k).or_insert(0);
            *e += c;
        }
        out.cst += other.cst;
        out.quad.retain(|_, c| *c != 0);
        out.lin.retain(|_, c| *c != 0);
        out
    }

    pub fn add_constant(&self, c: i64) -> IntQuadForm {
        let mut out = self.clone();
        out.cst += c;
        out
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        let mut acc = self.cst;
        for (&(i, j), &c) in &self.quad {
            acc += c * x[i] * x[j];
        }
        for (&i, &c) in &self.lin {
            acc += c * x[i];
        }
        acc
    }

    /// Substitutes `x := map(y)`.
    pub fn compose_affine(&self, map: &AffineMap) -> IntQuadForm {
        let d = map.dim();
        let mut out = IntQuadForm::constant(self.cst);
        // Row i of the affine map as (coeffs, offset).
        let row = |i: usize| -> (Vec<i64>, i64) {
            let coeffs = (0..d).map(|j| map.matrix()[i * d + j]).collect();
            (coeffs, map.offset()[i])
        };
        for (&(i, j), &c) in &self.quad {
            let (ai, oi) = row(i);
            let (aj, oj) = row(j);
            for (p, &cp) in ai.iter().enumerate() {
                if cp == 0 {
                    continue;
                }
                for (r, &cr) in aj.iter().enumerate() {
                    if cr == 0 {
                        continue;
                    }
                    out = out.add(&IntQuadForm::bilinear(p, r, c * cp * cr));
                }
            }
            let mut lin_terms: Vec<(usize, i64)> = Vec::new();
            for (p, &cp) in ai.iter().enumerate() {
                if cp != 0 && oj != 0 {
                    lin_terms.push((p, c * cp * oj));
                }
            }
            for (r, &cr) in aj.iter().enumerate() {
                if cr != 0 && oi != 0 {
                    lin_terms.push((r, c * cr * oi));
                }
            }
            out = out.add(&IntQuadForm::linear(&lin_terms, c * oi * oj));
        }
        for (&i, &c) in &self.lin {
            let (ai, oi) = row(i);
            let lin_terms: Vec<(usize, i64)> =
                ai.iter().enumerate().filter(|(_, &cp)| cp != 0).map(|(p, &cp)| (p, c * cp)).collect();
            out = out.add(&IntQuadForm::linear(&lin_terms, c * oi));
        }
        out
    }

    /// Re-indexes variables into a larger space.
    pub fn embed(&self, coord_map: &[usize]) -> IntQuadForm {
        let quad = self
            .quad
            .iter()
            .map(|(&(i, j), &c)| {
                let (a, b) = (coord_map[i], coord_map[j]);
                ((a.min(b), a.max(b)), c)
            })
            .collect();
        let lin = self.lin.iter().map(|(&i, &c)| (coord_map[i], c)).collect();
        IntQuadForm { quad, lin, cst: self.cst }
    }

    /// Maximum degree in coordinate `i` (2 for `x_i^2`, 1 for cross/linear).
    pub fn coord_degree(&self, i: usize) -> u32 {
        let mut deg = 0;
        for &(a, b) in self.quad.keys() {
            if a == i && b == i {
                deg = deg.max(2);
            } else if a == i || b == i {
                deg = deg.max(1);
            }
        }
        if self.lin.contains_key(&i) {
            deg = deg.max(1);
        }
        deg
    }
}

/// Affine unimodular map `x -> A x + d` on the integer lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    dim: usize,
    mat: Vec<i64>,
    offset: Vec<i64>,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        let mut mat = vec![0; dim * dim];
        for i in 0..dim {
            mat[i * dim + i] = 1;
        }
        AffineMap { dim, mat, offset: vec![0; dim] }
    }

    pub fn translation(offset: Vec<i64>) -> Self {
        let dim = offset.len();
        let mut m = Self::identity(dim);
        m.offset = offset;
        m
    }

    pub fn new(dim: usize, mat: Vec<i64>, offset: Vec<i64>) -> Self {
        assert_eq!(mat.len(), dim * dim);
        assert_eq!(offset.len(), dim);
        AffineMap { dim, mat, offset }
    }

    /// Permutation map sending coordinate `i` of the input to coordinate
    /// `perm[i]` of the output.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut mat = vec![0; dim * dim];
        for (i, &t) in perm.iter().enumerate() {
            mat[t * dim + i] = 1;
        }
        AffineMap { dim, mat, offset: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[i64] {
        &self.mat
    }

    pub fn offset(&self) -> &[i64] {
        &self.offset
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.dim);
        let mut out = self.offset.clone();
        for i in 0..self.dim {
            let row = &self.mat[i * self.dim..(i + 1) * self.dim];
            for (j, &a) in row.iter().enumerate() {
                if a != 0 {
                    out[i] += a * x[j];
                }
            }
        }
        out
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut mat = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0;
                for k in 0..d {
                    acc += self.mat[i * d + k] * other.mat[k * d + j];
                }
                mat[i * d + j] = acc;
            }
        }
        let mut offset = self.offset.clone();
        for i in 0..d {
            for k in 0..d {
                offset[i] += self.mat[i * d + k] * other.offset[k];
            }
        }
        AffineMap { dim: d, mat, offset }
    }

    /// Inverse over the integers; `None` when the matrix is not unimodular.
    pub fn inverse(&self) -> Option<AffineMap> {
        let d = self.dim;
        // Gaussian elimination over the rationals on [A | I].
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                (0..2 * d)
                    .map(|j| {
                        if j < d {
                            BigRational::from_integer(BigInt::from(self.mat[i * d + j]))
                        } else if j - d == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..2 * d {
                a[col][j] /= &p;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..2 * d {
                        let v = &a[col][j] * &f;
                        a[r][j] -= v;
                    }
                }
            }
        }
        let mut mat = vec![0i64; d * d];
        for i in 0..d {
            for j in 0..d {
                let v = &a[i][d + j];
                if !v.is_integer() {
                    return None;
                }
                mat[i * d + j] = v.to_integer().try_into().ok()?;
            }
        }
        let inv = AffineMap { dim: d, mat, offset: vec![0; d] };
        let mut offset = inv.apply(&self.offset);
        for o in &mut offset {
            *o = -*o;
        }
        Some(AffineMap { offset, ..inv })
    }

    /// Re-indexes into a larger space, identity on the remaining coordinates.
    pub fn embed(&self, new_dim: usize, coord_map: &[usize]) -> AffineMap {
        assert_eq!(coord_map.len(), self.dim);
        let mut out = AffineMap::identity(new_dim);
        for i in 0..self.dim {
            let ti = coord_map[i];
            out.mat[ti * new_dim + ti] = 0;
            for j in 0..self.dim {
                out.mat[ti * new_dim + coord_map[j]] = self.mat[i * self.dim + j];
            }
            out.offset[ti] = self.offset[i];
        }
        out
    }
}
