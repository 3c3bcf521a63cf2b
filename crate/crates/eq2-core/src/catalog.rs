//! Concrete realizations of every named operator on `H = l^2(Z)` and
//! `H_L = l^2(Z^2)`, plus the registry of all exactly-checkable identities
//! between them.
//!
//! Basis actions (coordinates `(i, j)` on `H_L`, `p` or `k` on `H`):
//!
//! ```text
//! v e_{ij} = e_{i-1,j}            n e_{ij} = q^i e_{i,j+1}
//! N e_{ij} = (i+j) e_{ij}         b e_{ij} = q^((j-i)/2) e_{i-1,j-1}
//! P e_{ij} = zeta^-j e_{ij}       btilde = q^(Ntilde/2) b,  Ntilde = N + 2
//! W e_p(x)e_k = e_p(x)e_{k+p}     What = Sigma W* Sigma
//! U e_{ij}(x)e_k = e_{ij}(x)e_{j+k}
//! Zhat e_{ij}(x)e_{kl} = zeta^(jl) e_{ij}(x)e_{kl}
//! Yhat e_{ij}(x)e_{kl} = e_{i-k-l,j}(x)e_{kl}
//! Xhat e_{ij}(x)e_{kl} = zeta^(-j-1) q^(i+l+1) e_{i+1,j+1}(x)e_{k-1,l-1}
//! V'hat e_p(x)e_{ij} = zeta^(-pj) e_p(x)e_{ij}
//! ```

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::exact::ExactScalar;
use crate::op::{OpError, OpExpr, ShiftMonomial, tensor};
use crate::poly::{AffineMap, IntQuadForm, MultiPoly};

/// Errors from catalog lookup and construction.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum CatalogError {
    #[error("unknown generator name: {0}")]
    UnknownGenerator(String),
    #[error(transparent)]
    Op(#[from] OpError),
}

fn shift(offsets: &[i64], qform: IntQuadForm, qbarform: IntQuadForm) -> OpExpr {
    let dim = offsets.len();
    OpExpr::from_monomial(ShiftMonomial {
        map: AffineMap::translation(offsets.to_vec()),
        poly: MultiPoly::one(dim),
        qform,
        qbarform,
    })
}

fn diag_poly(dim: usize, poly: MultiPoly) -> OpExpr {
    OpExpr::from_monomial(ShiftMonomial {
        map: AffineMap::identity(dim),
        poly,
        qform: IntQuadForm::zero(),
        qbarform: IntQuadForm::zero(),
    })
}

fn diag_phase(dim: usize, qform: IntQuadForm, qbarform: IntQuadForm) -> OpExpr {
    OpExpr::from_monomial(ShiftMonomial {
        map: AffineMap::identity(dim),
        poly: MultiPoly::one(dim),
        qform,
        qbarform,
    })
}

fn mapped(dim: usize, mat: Vec<i64>) -> OpExpr {
    OpExpr::from_monomial(ShiftMonomial {
        map: AffineMap::new(dim, mat, vec![0; dim]),
        poly: MultiPoly::one(dim),
        qform: IntQuadForm::zero(),
        qbarform: IntQuadForm::zero(),
    })
}

/// The tensor-factor swap on `Z^d (x) Z^d`.
pub fn swap(half_dim: usize) -> OpExpr {
    let perm: Vec<usize> = (0..2 * half_dim)
        .map(|i| (i + half_dim) % (2 * half_dim))
        .collect();
    OpExpr::from_monomial(ShiftMonomial {
        map: AffineMap::permutation(&perm),
        poly: MultiPoly::one(2 * half_dim),
        qform: IntQuadForm::zero(),
        qbarform: IntQuadForm::zero(),
    })
}

/// All named generators, realized as exact shift-monomial expressions.
#[derive(Debug, Clone)]
pub struct GeneratorCatalog {
    entries: BTreeMap<&'static str, OpExpr>,
}

/// Names accepted by [`GeneratorCatalog::get`] and by the perturbation hook.
pub const GENERATOR_NAMES: &[&str] = &[
    "v", "v*", "n", "n_inv", "N", "Ntilde", "b", "b_inv", "P", "q_half_N", "q_neg_half_N",
    "q_half_Ntilde", "q_N", "qbar_N", "btilde", "phase_btilde", "modulus_btilde", "z", "P_prime",
    "W", "What", "Xhat", "Yhat", "Zhat", "Z", "U", "VhatPrime",
];

/// Independent entries a sensitivity test may perturb; the remaining names
/// are derived from these inside the identity registry.
pub const PERTURBABLE_NAMES: &[&str] = &[
    "v", "n", "n_inv", "N", "Ntilde", "b", "b_inv", "P", "q_half_N", "q_half_Ntilde", "q_N",
    "qbar_N", "btilde", "phase_btilde", "modulus_btilde", "z", "P_prime", "W", "What", "Xhat",
    "Yhat", "Zhat", "Z", "U", "VhatPrime",
];

impl GeneratorCatalog {
    pub fn new() -> Self {
        Self::build(None)
    }

    /// Catalog with one generator's coefficient scaled by `factor`; used by
    /// the harness-sensitivity suite.
    pub fn perturbed(name: &str, factor: BigRational) -> Result<Self, CatalogError> {
        if !GENERATOR_NAMES.contains(&name) {
            return Err(CatalogError::UnknownGenerator(name.to_string()));
        }
        Ok(Self::build(Some((name, factor))))
    }

    fn build(perturb: Option<(&str, BigRational)>) -> Self {
        let mut e: BTreeMap<&'static str, OpExpr> = BTreeMap::new();

        // H_L generators, coordinates (i, j) = (x0, x1).
        let lin = |coeffs: &[(usize, i64)], cst: i64| IntQuadForm::linear(coeffs, cst);
        e.insert("v", shift(&[-1, 0], IntQuadForm::zero(), IntQuadForm::zero()));
        e.insert("n", shift(&[0, 1], lin(&[(0, 2)], 0), IntQuadForm::zero()));
        e.insert("n_inv", shift(&[0, -1], lin(&[(0, -2)], 0), IntQuadForm::zero()));
        e.insert("N", diag_poly(2, MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1))));
        e.insert(
            "Ntilde",
            diag_poly(
                2,
                MultiPoly::var(2, 0)
                    .add(&MultiPoly::var(2, 1))
                    .add(&MultiPoly::constant_i64(2, 2)),
            ),
        );
        e.insert("b", shift(&[-1, -1], lin(&[(1, 1), (0, -1)], 0), IntQuadForm::zero()));
        e.insert("b_inv", shift(&[1, 1], lin(&[(0, 1), (1, -1)], 0), IntQuadForm::zero()));
        e.insert("P", diag_phase(2, lin(&[(1, -2)], 0), lin(&[(1, 2)], 0)));
        e.insert("q_half_N", diag_phase(2, lin(&[(0, 1), (1, 1)], 0), IntQuadForm::zero()));
        e.insert("q_neg_half_N", diag_phase(2, lin(&[(0, -1), (1, -1)], 0), IntQuadForm::zero()));
        e.insert("q_half_Ntilde", diag_phase(2, lin(&[(0, 1), (1, 1)], 2), IntQuadForm::zero()));
        e.insert("q_N", diag_phase(2, lin(&[(0, 2), (1, 2)], 0), IntQuadForm::zero()));
        e.insert("qbar_N", diag_phase(2, IntQuadForm::zero(), lin(&[(0, 2), (1, 2)], 0)));
        // btilde = q^(Ntilde/2) b acts as e_{ij} -> q^j e_{i-1,j-1}.
        e.insert("btilde", shift(&[-1, -1], lin(&[(1, 2)], 0), IntQuadForm::zero()));
        e.insert("phase_btilde", shift(&[-1, -1], lin(&[(1, 1)], 0), lin(&[(1, -1)], 0)));
        e.insert("modulus_btilde", diag_phase(2, lin(&[(1, 1)], 0), lin(&[(1, 1)], 0)));

        // H generators, coordinate p.
        e.insert("z", shift(&[1], IntQuadForm::zero(), IntQuadForm::zero()));
        e.insert("P_prime", diag_phase(1, lin(&[(0, -2)], 0), lin(&[(0, 2)], 0)));

        // H (x) H, coordinates (p, k).
        e.insert("W", mapped(2, vec![1, 0, 1, 1]));
        e.insert("What", mapped(2, vec![1, -1, 0, 1]));

        // H_L (x) H_L, coordinates (i, j, k, l).
        e.insert(
            "Xhat",
            shift(
                &[1, 1, -1, -1],
                lin(&[(0, 2), (1, -2), (3, 2)], 0),
                lin(&[(1, 2)], 2),
            ),
        );
        e.insert(
            "Yhat",
            mapped(4, vec![1, 0, -1, -1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
        );
        e.insert(
            "Zhat",
            diag_phase(4, IntQuadForm::bilinear(1, 3, 2), IntQuadForm::bilinear(1, 3, -2)),
        );
        e.insert(
            "Z",
            diag_phase(4, IntQuadForm::bilinear(1, 3, -2), IntQuadForm::bilinear(1, 3, 2)),
        );

        // H_L (x) H, coordinates (i, j, k).
        e.insert("U", mapped(3, vec![1, 0, 0, 0, 1, 0, 0, 1, 1]));

        // H (x) H_L, coordinates (p, i, j).
        e.insert(
            "VhatPrime",
            diag_phase(3, IntQuadForm::bilinear(0, 2, -2), IntQuadForm::bilinear(0, 2, 2)),
        );

        let mut cat = GeneratorCatalog { entries: e };
        cat.entries.insert("v*", cat.entries["v"].adjoint());
        if let Some((name, factor)) = perturb {
            let op = cat.entries.get_mut(name).expect("validated name");
            *op = op.scale(&ExactScalar::term(factor, 0, 0));
        }
        cat
    }

    pub fn get(&self, name: &str) -> Result<&OpExpr, CatalogError> {
        self.entries
            .get(name)
            .ok_or_else(|| CatalogError::UnknownGenerator(name.to_string()))
    }

    /// Panicking accessor for internal construction.
    fn g(&self, name: &str) -> &OpExpr {
        &self.entries[name]
    }

    /// Embedding into the first factor of the twisted tensor product:
    /// `j1(x) = x (x) 1`.
    pub fn embedding_j1(&self, gen: &OpExpr) -> Result<OpExpr, CatalogError> {
        if gen.dim() != 2 {
            return Err(CatalogError::Op(OpError::DimensionMismatch { op: gen.dim(), operand: 2 }));
        }
        Ok(gen.embed_legs(&[1], &[2, 2])?)
    }

    /// Embedding into the second factor: `j2(x) = Zhat (1 (x) x) Zhat*`.
    pub fn embedding_j2(&self, gen: &OpExpr) -> Result<OpExpr, CatalogError> {
        if gen.dim() != 2 {
            return Err(CatalogError::Op(OpError::DimensionMismatch { op: gen.dim(), operand: 2 }));
        }
        let zhat = self.g("Zhat");
        let inner = gen.embed_legs(&[2], &[2, 2])?;
        Ok(zhat.compose(&inner)?.compose(&zhat.adjoint())?)
    }

    /// `u = j_T(z) = z (x) 1` on `H (x) H_L`.
    pub fn boson_u(&self) -> OpExpr {
        self.g("z").embed_legs(&[1], &[1, 2]).expect("valid embedding")
    }

    /// `N' = j_E(N) = 1 (x) N` on `H (x) H_L`.
    pub fn boson_n(&self) -> OpExpr {
        self.g("N").embed_legs(&[2], &[1, 2]).expect("valid embedding")
    }

    /// `b' = j_E(btilde) = P' (x) btilde` on `H (x) H_L`.
    pub fn boson_b(&self) -> OpExpr {
        tensor(self.g("P_prime"), self.g("btilde"))
    }
}

impl Default for GeneratorCatalog {
    fn default() -> Self {
        Self::new()
    }
}

/// How an identity is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exact,
    Numeric,
}

/// One operator identity with both sides realized as exact expressions.
#[derive(Debug, Clone)]
pub struct IdentityRecord {
    pub name: &'static str,
    /// Human-readable form of the equation.
    pub statement: &'static str,
    pub lhs: OpExpr,
    pub rhs: OpExpr,
    pub mode: CheckMode,
}

impl IdentityRecord {
    /// Decides the identity on its automatic window.
    pub fn check(&self) -> Result<bool, OpError> {
        let w = self.lhs.auto_window(&self.rhs);
        self.lhs.equal_exact(&self.rhs, w)
    }

    /// First basis index where the sides disagree, if any.
    pub fn counterexample(&self) -> Result<Option<crate::vector::BasisIndex>, OpError> {
        let w = self.lhs.auto_window(&self.rhs);
        self.lhs.first_counterexample(&self.rhs, w)
    }
}

fn q_power_scalar(m: i64) -> ExactScalar {
    ExactScalar::q_half_power(2 * m)
}

/// Every exactly-checkable identity of the catalog.
pub fn relation_registry(cat: &GeneratorCatalog) -> Vec<IdentityRecord> {
    let mut out = Vec::new();
    let mut rec = |name: &'static str, statement: &'static str, lhs: OpExpr, rhs: OpExpr| {
        out.push(IdentityRecord { name, statement, lhs, rhs, mode: CheckMode::Exact });
    };
    let id2 = OpExpr::identity(2);
    let id4 = OpExpr::identity(4);
    let c = |a: &OpExpr, b: &OpExpr| a.compose(b).expect("composable");

    let v = cat.g("v");
    let vs = cat.g("v*");
    let n = cat.g("n");
    let n_inv = cat.g("n_inv");
    let nn = cat.g("N");
    let ntilde = cat.g("Ntilde");
    let b = cat.g("b");
    let b_inv = cat.g("b_inv");
    let p = cat.g("P");
    let btilde = cat.g("btilde");
    let phase_bt = cat.g("phase_btilde");
    let mod_bt = cat.g("modulus_btilde");
    let zhat = cat.g("Zhat");
    let yhat = cat.g("Yhat");
    let xhat = cat.g("Xhat");

    // Unitarity of every unitary catalog entry.
    for (name, statement, gname, dim) in [
        ("v-unitary", "v v* = 1", "v", 2usize),
        ("P-unitary", "P P* = 1", "P", 2),
        ("phase-btilde-unitary", "Ph(btilde) Ph(btilde)* = 1", "phase_btilde", 2),
        ("W-unitary", "W W* = 1", "W", 2),
        ("What-unitary", "What What* = 1", "What", 2),
        ("z-unitary", "z z* = 1", "z", 1),
        ("Pprime-unitary", "P' P'* = 1", "P_prime", 1),
        ("Yhat-unitary", "Yhat Yhat* = 1", "Yhat", 4),
        ("Zhat-unitary", "Zhat Zhat* = 1", "Zhat", 4),
        ("Z-unitary", "Z Z* = 1", "Z", 4),
        ("U-unitary", "U U* = 1", "U", 3),
        ("VhatPrime-unitary", "V'hat V'hat* = 1", "VhatPrime", 3),
    ] {
        let g = cat.g(gname);
        rec(name, statement, c(g, &g.adjoint()), OpExpr::identity(dim));
    }

    rec("identity-refl", "1 = 1", id2.clone(), id2.clone());
    rec("n-inverse", "n^-1 n = 1", c(n_inv, n), id2.clone());
    rec("b-inverse", "b^-1 b = 1", c(b_inv, b), id2.clone());
    rec("vnv-rel", "v n v* = q n", c(&c(v, n), vs), n.scale(&q_power_scalar(1)));
    rec(
        "ninv-v",
        "n^-1 v = q^(-N/2) b",
        c(n_inv, v),
        c(cat.g("q_neg_half_N"), b),
    );
    rec(
        "vstar-n",
        "v* n = b^-1 q^(N/2)",
        c(vs, n),
        c(b_inv, cat.g("q_half_N")),
    );
    rec(
        "N-Ntilde",
        "N - Ntilde = -2",
        nn.sub(ntilde).expect("same dim"),
        id2.scale(&ExactScalar::from_integer(-2)),
    );
    rec(
        "Nb-comm",
        "Nb=b(N-2I)",
        c(nn, b),
        c(b, &nn.sub(&id2.scale(&ExactScalar::from_integer(2))).expect("same dim")),
    );
    rec(
        "Nbinv-comm",
        "N b^-1 = b^-1 (N+2I)",
        c(nn, b_inv),
        c(b_inv, &nn.add(&id2.scale(&ExactScalar::from_integer(2))).expect("same dim")),
    );
    rec(
        "qN-binv",
        "q^N b^-1 = q^2 b^-1 q^N",
        c(cat.g("q_N"), b_inv),
        c(b_inv, cat.g("q_N")).scale(&q_power_scalar(2)),
    );
    rec("qbarN-adj", "(q^N)* = qbar^N", cat.g("q_N").adjoint(), cat.g("qbar_N").clone());
    rec(
        "btilde-def",
        "btilde = q^(Ntilde/2) b",
        btilde.clone(),
        c(cat.g("q_half_Ntilde"), b),
    );
    rec(
        "btilde-star-rel",
        "btilde* btilde = |q|^-2 btilde btilde*",
        c(&btilde.adjoint(), btilde),
        c(btilde, &btilde.adjoint()).scale(&ExactScalar::abs_q_power(-2)),
    );
    rec(
        "polar-recomp",
        "Ph(btilde) |btilde| = btilde",
        c(phase_bt, mod_bt),
        btilde.clone(),
    );
    rec(
        "polar-scaling",
        "Ph(btilde) |btilde| Ph(btilde)* = |q| |btilde|",
        c(&c(phase_bt, mod_bt), &phase_bt.adjoint()),
        mod_bt.scale(&ExactScalar::abs_q_power(1)),
    );

    // Conjugation identities on H_L (x) H_L.
    let vn = c(v, n);
    let ninv_v_p = c(&c(n_inv, v), p);
    rec(
        "Zhat-conj-vn",
        "Zhat (vn (x) n^-1 vP) Zhat* = Pvn (x) n^-1 v",
        c(&c(zhat, &tensor(&vn, &ninv_v_p)), &zhat.adjoint()),
        tensor(&c(p, &vn), &c(n_inv, v)),
    );
    rec(
        "Yhat-conj-Pvn",
        "Yhat (Pvn (x) n^-1 v) Yhat* = Pv*n (x) q^2 q^(N/2) b",
        c(&c(yhat, &tensor(&c(p, &vn), &c(n_inv, v))), &yhat.adjoint()),
        tensor(&c(p, &c(vs, n)), &c(cat.g("q_half_N"), b).scale(&q_power_scalar(2))),
    );
    rec(
        "Zhat-conj-btilde",
        "Zhat (1 (x) q^(Ntilde/2) b) Zhat* = P (x) q^(Ntilde/2) b",
        c(
            &c(zhat, &btilde.embed_legs(&[2], &[2, 2]).expect("valid embedding")),
            &zhat.adjoint(),
        ),
        tensor(p, btilde),
    );

    // Built form of Xhat against its stated basis action.
    let leg_a = c(&c(p, b_inv), cat.g("q_half_Ntilde"));
    let leg_b = c(cat.g("q_half_Ntilde"), b);
    rec(
        "Xhat-built",
        "P b^-1 q^(Ntilde/2) (x) q^(Ntilde/2) b = Xhat (stated)",
        tensor(&leg_a, &leg_b),
        xhat.clone(),
    );
    rec(
        "Xhat-normal",
        "Xhat Xhat* = Xhat* Xhat",
        c(xhat, &xhat.adjoint()),
        c(&xhat.adjoint(), xhat),
    );
    let n_total = cat
        .embedding_j1(nn)
        .expect("N on H_L")
        .add(&nn.embed_legs(&[2], &[2, 2]).expect("valid embedding"))
        .expect("same dim");
    rec(
        "Xhat-commutes-Ntot",
        "Xhat (N(x)1 + 1(x)N) = (N(x)1 + 1(x)N) Xhat",
        c(xhat, &n_total),
        c(&n_total, xhat),
    );

    // Dual comultiplication embeddings.
    rec(
        "j2-N",
        "j2(N) = 1 (x) N",
        cat.embedding_j2(nn).expect("N on H_L"),
        nn.embed_legs(&[2], &[2, 2]).expect("valid embedding"),
    );
    rec(
        "j2-btilde",
        "j2(btilde) = P (x) btilde",
        cat.embedding_j2(btilde).expect("btilde on H_L"),
        tensor(p, btilde),
    );
    rec(
        "j1-id",
        "j1(1) = 1 (x) 1",
        cat.embedding_j1(&id2).expect("identity on H_L"),
        id4.clone(),
    );

    // The dual action / 3.3 conjugations on H_L (x) H.
    let u_op = cat.g("U");
    rec(
        "U-conj-N",
        "U (N (x) 1) U* = N (x) 1",
        c(
            &c(u_op, &nn.embed_legs(&[1], &[2, 1]).expect("valid embedding")),
            &u_op.adjoint(),
        ),
        nn.embed_legs(&[1], &[2, 1]).expect("valid embedding"),
    );
    rec(
        "U-conj-btilde",
        "U (btilde (x) 1) U* = btilde (x) z*",
        c(
            &c(u_op, &btilde.embed_legs(&[1], &[2, 1]).expect("valid embedding")),
            &u_op.adjoint(),
        ),
        tensor(btilde, &cat.g("z").adjoint()),
    );

    // Structure of the dual corepresentation and braiding unitaries.
    let what = cat.g("What");
    rec(
        "Yhat-WhatWhat",
        "Yhat = What_13 What_14",
        yhat.clone(),
        c(
            &what.embed_legs(&[1, 3], &[1, 1, 1, 1]).expect("valid embedding"),
            &what.embed_legs(&[1, 4], &[1, 1, 1, 1]).expect("valid embedding"),
        ),
    );
    let sig1 = swap(1);
    rec(
        "What-def",
        "What = Sigma W* Sigma",
        what.clone(),
        c(&c(&sig1, &cat.g("W").adjoint()), &sig1),
    );
    let sig2 = swap(2);
    rec(
        "Z-def",
        "Z = Sigma Zhat* Sigma",
        cat.g("Z").clone(),
        c(&c(&sig2, &zhat.adjoint()), &sig2),
    );
    rec(
        "W-coproduct-z",
        "W (z (x) 1) W* = z (x) z",
        c(
            &c(cat.g("W"), &cat.g("z").embed_legs(&[1], &[1, 1]).expect("valid embedding")),
            &cat.g("W").adjoint(),
        ),
        tensor(cat.g("z"), cat.g("z")),
    );

    // Bosonization generators on H (x) H_L.
    let vp = cat.g("VhatPrime");
    rec(
        "VhatPrime-conj-btilde",
        "V'hat* (1 (x) q^(Ntilde/2) b) V'hat = P' (x) q^(Ntilde/2) b",
        vp.adjoint()
            .compose(&btilde.embed_legs(&[2], &[1, 2]).expect("valid embedding"))
            .expect("same dim")
            .compose(vp)
            .expect("same dim"),
        tensor(cat.g("P_prime"), btilde),
    );
    out
}

/// Descriptors for identities that are verified numerically by the
/// functional-calculus suites rather than by exact evaluation.
pub fn numeric_identity_descriptors() -> Vec<(&'static str, &'static str)> {
    vec![
        ("braided-pentagon", "Fhat_23 Fhat_12 = Fhat_12 Psihat_23 Fhat_12 Psihat_23* Fhat_23 (braided pentagon)"),
        ("Fhat-unitarity", "Fhat* Fhat = 1 on test vectors"),
        ("comult-N", "Delta(N) = N (x) 1 + 1 (x) N"),
        ("comult-btilde", "Delta(btilde) = btilde (x) 1 + q^N P (x) btilde"),
        ("comult-btilde-star", "Delta(btilde*) = btilde* (x) 1 + qbar^N P* (x) btilde*"),
        ("slice-identity", "(Fhat^l)*_12 Fhat_23 Fhat^l_12 Fhat*_23 = S'(l)"),
        ("oracle-agreement", "fiber functional calculus agrees with the dense circulant oracle"),
        ("Wtilde-pentagon", "Wtilde_23 Wtilde_12 = Wtilde_12 Wtilde_13 Wtilde_23"),
        ("boson-relations", "uN'=N'u, ub'=zeta b'u, N'b'=b'(N'-2I)"),
        ("boson-comult-u", "Delta(u) = u (x) u"),
        ("boson-comult-N", "Delta(N') = N' (x) 1 + 1 (x) N'"),
        ("boson-comult-b", "Delta(b') = b' (x) u* + q^N' (x) b'"),
        ("boson-comult-b-star", "Delta(b'*) = b'* (x) u + qbar^N' (x) b'*"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactScalar;
    use num_bigint::BigInt;
    use crate::vector::{BasisIndex, FiniteVector};

    #[test]
    fn stated_basis_actions() {
        let cat = GeneratorCatalog::new();
        // v e_00 = e_{-1,0}
        let img = cat.get("v").unwrap().apply_basis_exact(&[0, 0]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[-1, 0]));
        // N e_23 = 5 e_23
        let img = cat.get("N").unwrap().apply_basis_exact(&[2, 3]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[2, 3])), Some(&ExactScalar::from_integer(5)));
        // b e_00 = q^0 e_{-1,-1}
        let img = cat.get("b").unwrap().apply_basis_exact(&[0, 0]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[-1, -1]));
        // Xhat e_00 (x) e_00 = zeta^-1 q e_{1,1} (x) e_{-1,-1}
        let img = cat.get("Xhat").unwrap().apply_basis_exact(&[0, 0, 0, 0]).unwrap();
        let expect = ExactScalar::zeta_power(-1).mul(&ExactScalar::q_half_power(2));
        assert_eq!(img.get(&BasisIndex::new(&[1, 1, -1, -1])), Some(&expect));
        // Zhat e_01 (x) e_01 = zeta e_01 (x) e_01
        let img = cat.get("Zhat").unwrap().apply_basis_exact(&[0, 1, 0, 1]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[0, 1, 0, 1])), Some(&ExactScalar::zeta_power(1)));
        // Yhat e_{ij} (x) e_{kl} = e_{i-k-l,j} (x) e_{kl}
        let img = cat.get("Yhat").unwrap().apply_basis_exact(&[0, 0, 1, 1]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[-2, 0, 1, 1]));
        // W e_p (x) e_k = e_p (x) e_{k+p}
        let img = cat.get("W").unwrap().apply_basis_exact(&[2, 5]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[2, 7]));
        // U e_{ij} (x) e_k = e_{ij} (x) e_{j+k}
        let img = cat.get("U").unwrap().apply_basis_exact(&[4, -2, 1]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[4, -2, -1]));
        // V'hat e_p (x) e_ij = zeta^{-pj} e_p (x) e_ij
        let img = cat.get("VhatPrime").unwrap().apply_basis_exact(&[2, 0, 3]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[2, 0, 3])), Some(&ExactScalar::zeta_power(-6)));
        // n e_{ij} = q^i e_{i,j+1}; n^-1 e_{ij} = q^-i e_{i,j-1}
        let img = cat.get("n").unwrap().apply_basis_exact(&[2, 3]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[2, 4])), Some(&ExactScalar::q_half_power(4)));
        let img = cat.get("n_inv").unwrap().apply_basis_exact(&[2, 3]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[2, 2])), Some(&ExactScalar::q_half_power(-4)));
        // P e_{ij} = zeta^-j e_{ij}
        let img = cat.get("P").unwrap().apply_basis_exact(&[1, 2]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[1, 2])), Some(&ExactScalar::zeta_power(-2)));
        // What e_p (x) e_k = e_{p-k} (x) e_k
        let img = cat.get("What").unwrap().apply_basis_exact(&[2, 5]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[-3, 5]));
        // P' e_p = zeta^-p e_p; z e_p = e_{p+1}
        let img = cat.get("P_prime").unwrap().apply_basis_exact(&[3]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[3])), Some(&ExactScalar::zeta_power(-3)));
        let img = cat.get("z").unwrap().apply_basis_exact(&[3]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[4]));
        // Z = Sigma Zhat* Sigma is diagonal with eigenvalue zeta^{-jl}
        let img = cat.get("Z").unwrap().apply_basis_exact(&[0, 1, 0, 1]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[0, 1, 0, 1])), Some(&ExactScalar::zeta_power(-1)));
        // btilde e_{ij} = q^j e_{i-1,j-1}; its polar parts
        let img = cat.get("btilde").unwrap().apply_basis_exact(&[1, 2]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[0, 1])), Some(&ExactScalar::q_half_power(4)));
        let img = cat.get("phase_btilde").unwrap().apply_basis_exact(&[1, 2]).unwrap();
        assert_eq!(
            img.get(&BasisIndex::new(&[0, 1])),
            Some(&ExactScalar::term(num_rational::BigRational::from_integer(1.into()), 2, -2))
        );
        let img = cat.get("modulus_btilde").unwrap().apply_basis_exact(&[1, 2]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[1, 2])), Some(&ExactScalar::abs_q_power(2)));
        // Ntilde = N + 2I
        let img = cat.get("Ntilde").unwrap().apply_basis_exact(&[2, 3]).unwrap();
        assert_eq!(img.get(&BasisIndex::new(&[2, 3])), Some(&ExactScalar::from_integer(7)));
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let cat = GeneratorCatalog::new();
        assert!(matches!(cat.get("nope"), Err(CatalogError::UnknownGenerator(_))));
    }

    #[test]
    fn full_registry_passes() {
        let cat = GeneratorCatalog::new();
        let registry = relation_registry(&cat);
        assert!(registry.len() >= 15, "registry has {} records", registry.len());
        for rec in &registry {
            assert!(
                rec.check().unwrap(),
                "identity {} failed: {:?}",
                rec.name,
                rec.counterexample().unwrap()
            );
        }
    }

    #[test]
    fn registry_names_are_unique() {
        let cat = GeneratorCatalog::new();
        let registry = relation_registry(&cat);
        let mut names: Vec<_> = registry.iter().map(|r| r.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), registry.len());
    }

    #[test]
    fn perturbing_each_generator_breaks_some_identity() {
        let factor = BigRational::new(BigInt::from(1001), BigInt::from(1000));
        for name in PERTURBABLE_NAMES {
            let cat = GeneratorCatalog::perturbed(name, factor.clone()).unwrap();
            let registry = relation_registry(&cat);
            let any_failed = registry.iter().any(|r| !r.check().unwrap());
            assert!(any_failed, "perturbing {name} left the registry green");
        }
    }

    #[test]
    fn generator_minus_ntilde() {
        // N - Ntilde = -2 * 1
        let cat = GeneratorCatalog::new();
        let d = cat.get("N").unwrap().sub(cat.get("Ntilde").unwrap()).unwrap();
        let m2 = OpExpr::identity(2).scale(&ExactScalar::from_integer(-2));
        assert!(d.equal_exact(&m2, 3).unwrap());
    }

    #[test]
    fn j2_on_generators() {
        let cat = GeneratorCatalog::new();
        let j2n = cat.embedding_j2(cat.get("N").unwrap()).unwrap();
        let one_n = cat.get("N").unwrap().embed_legs(&[2], &[2, 2]).unwrap();
        assert!(j2n.equal_exact(&one_n, 3).unwrap());
    }

    #[test]
    fn yhat_as_corep_consistency() {
        // Yhat = What_13 What_14 reproduces the stated action on H^(x)4.
        let cat = GeneratorCatalog::new();
        let what = cat.get("What").unwrap();
        let w13 = what.embed_legs(&[1, 3], &[1, 1, 1, 1]).unwrap();
        let w14 = what.embed_legs(&[1, 4], &[1, 1, 1, 1]).unwrap();
        let prod = w13.compose(&w14).unwrap();
        let img = prod.apply_basis_exact(&[0, 0, 1, 1]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[-2, 0, 1, 1]));
    }
}
