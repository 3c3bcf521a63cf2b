//! The semidirect-product multiplicative unitary
//! `Wtilde = W_13 U_23 V'hat*_34 Fhat_24 V'hat_34` on `(H (x) H_L)^(x)2`
//! and the bosonized generator relations and comultiplication.
//!
//! Generators on `K = H (x) H_L`: `u = z (x) 1`, `N' = 1 (x) N`,
//! `b' = P' (x) btilde`.

use num_complex::Complex64;

use crate::catalog::{CheckMode, GeneratorCatalog, IdentityRecord};
use crate::exact::ExactScalar;
use crate::op::{OpExpr, tensor};
use crate::qexp::{ApplyStats, QexpError, SymbolTable, XhatLegs, apply_fq_shift_class};
use crate::report::ResidualReport;
use crate::vector::FiniteVector;

type FloatVec = FiniteVector<Complex64>;

/// Handle for applying `Wtilde` across pairs of `K = H (x) H_L` blocks.
pub struct WtildeHandle<'t> {
    pub table: &'t SymbolTable,
}

fn describe(vec: &FloatVec) -> String {
    let mut parts: Vec<String> = vec
        .iter()
        .take(4)
        .map(|(idx, c)| format!("{:?}:{:.3}", idx.coords(), c.norm()))
        .collect();
    if vec.support_len() > 4 {
        parts.push(format!("... ({} entries)", vec.support_len()));
    }
    format!("[{}]", parts.join(", "))
}

fn params_echo(table: &SymbolTable) -> String {
    let p = table.params();
    format!(
        "q={}+{}i, M={}, eps={:.1e}",
        p.q.re, p.q.im, p.fourier_samples, p.coeff_cutoff
    )
}

/// Per-leg dimensions of `K^(x num_blocks)`: `[1, 2, 1, 2, ...]`.
fn ambient(num_blocks: usize) -> Vec<usize> {
    (0..num_blocks).flat_map(|_| [1usize, 2]).collect()
}

struct WtildeFactors {
    w: OpExpr,       // W on the two H legs
    u: OpExpr,       // U on (H_L of block1, H of block2)
    vprime: OpExpr,  // V'hat on (H of block2, H_L of block2)
    yhat: OpExpr,    // Yhat on the two H_L legs
    xhat_legs: XhatLegs,
}

fn factors(
    cat: &GeneratorCatalog,
    block1: usize,
    block2: usize,
    num_blocks: usize,
) -> Result<WtildeFactors, QexpError> {
    assert!(block1 < block2 && block2 < num_blocks);
    let amb = ambient(num_blocks);
    let h_leg = |b: usize| 2 * b + 1;
    let hl_leg = |b: usize| 2 * b + 2;
    let w = cat.get("W").expect("catalog has W").embed_legs(&[h_leg(block1), h_leg(block2)], &amb)?;
    let u = cat.get("U").expect("catalog has U").embed_legs(&[hl_leg(block1), h_leg(block2)], &amb)?;
    let vprime = cat
        .get("VhatPrime")
        .expect("catalog has VhatPrime")
        .embed_legs(&[h_leg(block2), hl_leg(block2)], &amb)?;
    let yhat = cat
        .get("Yhat")
        .expect("catalog has Yhat")
        .embed_legs(&[hl_leg(block1), hl_leg(block2)], &amb)?;
    let xhat_legs = XhatLegs {
        dim: 3 * num_blocks,
        a: (3 * block1 + 1, 3 * block1 + 2),
        b: (3 * block2 + 1, 3 * block2 + 2),
        diag: Vec::new(),
    };
    Ok(WtildeFactors { w, u, vprime, yhat, xhat_legs })
}

impl<'t> WtildeHandle<'t> {
    pub fn new(table: &'t SymbolTable) -> Self {
        WtildeHandle { table }
    }

    /// Applies `Wtilde` (or its inverse) on blocks `(block1, block2)`
    /// (0-based) of `K^(x num_blocks)`. All factors except the `F_q` one are
    /// exact shifts.
    pub fn apply_on_blocks(
        &self,
        cat: &GeneratorCatalog,
        vec: &FloatVec,
        block1: usize,
        block2: usize,
        num_blocks: usize,
        inverse: bool,
    ) -> Result<(FloatVec, ApplyStats), QexpError> {
        let ctx = self.table.params().context();
        let f = factors(cat, block1, block2, num_blocks)?;
        let one = Complex64::new(1.0, 0.0);
        if !inverse {
            // W_13 U_23 V'*_34 [F_q(Xhat)*_24 Yhat_24] V'_34
            let v1 = f.vprime.apply_float(&ctx, vec)?;
            let v2 = f.yhat.apply_float(&ctx, &v1)?;
            let (v3, stats) = apply_fq_shift_class(&v2, &f.xhat_legs, one, true, self.table)?;
            let v4 = f.vprime.adjoint().apply_float(&ctx, &v3)?;
            let v5 = f.u.apply_float(&ctx, &v4)?;
            Ok((f.w.apply_float(&ctx, &v5)?, stats))
        } else {
            // V'*_34 [Yhat*_24 F_q(Xhat)_24] V'_34 U*_23 W*_13
            let v1 = f.w.adjoint().apply_float(&ctx, vec)?;
            let v2 = f.u.adjoint().apply_float(&ctx, &v1)?;
            let v3 = f.vprime.apply_float(&ctx, &v2)?;
            let (v4, stats) = apply_fq_shift_class(&v3, &f.xhat_legs, one, false, self.table)?;
            let v5 = f.yhat.adjoint().apply_float(&ctx, &v4)?;
            Ok((f.vprime.adjoint().apply_float(&ctx, &v5)?, stats))
        }
    }

    /// `Wtilde` on `K (x) K = Z^6`.
    pub fn apply(
        &self,
        cat: &GeneratorCatalog,
        vec: &FloatVec,
        inverse: bool,
    ) -> Result<(FloatVec, ApplyStats), QexpError> {
        self.apply_on_blocks(cat, vec, 0, 1, 2, inverse)
    }

    /// `Wtilde` through the rewritten five-factor form
    /// `W_13 U_23 F_q(A (x) P' (x) B)* Yhat_24` on `K (x) K`, in which the
    /// `V'hat` conjugation is absorbed into a diagonal middle leg of the
    /// `F_q` argument. Cross-checks the factor route.
    pub fn apply_rewritten(
        &self,
        cat: &GeneratorCatalog,
        vec: &FloatVec,
    ) -> Result<(FloatVec, ApplyStats), QexpError> {
        let ctx = self.table.params().context();
        let f = factors(cat, 0, 1, 2)?;
        let legs = XhatLegs { dim: 6, a: (1, 2), b: (4, 5), diag: vec![(3, -1)] };
        let v1 = f.yhat.apply_float(&ctx, vec)?;
        let (v2, stats) = apply_fq_shift_class(&v1, &legs, Complex64::new(1.0, 0.0), true, self.table)?;
        let v3 = f.u.apply_float(&ctx, &v2)?;
        Ok((f.w.apply_float(&ctx, &v3)?, stats))
    }

    /// `Wtilde` with the `F_q` factor replaced by the identity: the exact
    /// shift `W_13 U_23 Yhat_24` (the diagonal conjugation cancels).
    pub fn exact_shift_part(
        &self,
        cat: &GeneratorCatalog,
        num_blocks: usize,
        block1: usize,
        block2: usize,
    ) -> Result<OpExpr, QexpError> {
        let f = factors(cat, block1, block2, num_blocks)?;
        let inner = f.vprime.adjoint().compose(&f.yhat)?.compose(&f.vprime)?;
        Ok(f.w.compose(&f.u)?.compose(&inner)?)
    }
}

/// Residual of the ordinary pentagon
/// `Wtilde_23 Wtilde_12 = Wtilde_12 Wtilde_13 Wtilde_23` on a test vector in
/// `Z^9`.
pub fn ordinary_pentagon_residual(
    cat: &GeneratorCatalog,
    vec: &FloatVec,
    handle: &WtildeHandle<'_>,
) -> Result<ResidualReport, QexpError> {
    let mut stats = ApplyStats::default();
    let (t1, s1) = handle.apply_on_blocks(cat, vec, 0, 1, 3, false)?;
    let (lhs, s2) = handle.apply_on_blocks(cat, &t1, 1, 2, 3, false)?;
    let (r1, s3) = handle.apply_on_blocks(cat, vec, 1, 2, 3, false)?;
    let (r2, s4) = handle.apply_on_blocks(cat, &r1, 0, 2, 3, false)?;
    let (rhs, s5) = handle.apply_on_blocks(cat, &r2, 0, 1, 3, false)?;
    for s in [s1, s2, s3, s4, s5] {
        stats.merge(s);
    }
    Ok(ResidualReport {
        identity: "Wtilde-pentagon".into(),
        vector: describe(vec),
        residual: lhs.sub(&rhs).norm(),
        params: params_echo(handle.table),
        truncation_estimate: stats.truncation_estimate,
        slow_fibers: stats.slow_fibers,
    })
}

/// The bosonized generator relations, decided exactly.
pub fn boson_relation_records(cat: &GeneratorCatalog) -> Vec<IdentityRecord> {
    let u = cat.boson_u();
    let np = cat.boson_n();
    let bp = cat.boson_b();
    let id3 = OpExpr::identity(3);
    let c = |a: &OpExpr, b: &OpExpr| a.compose(b).expect("same dim");
    let btilde = cat.get("btilde").expect("catalog has btilde");
    let vp = cat.get("VhatPrime").expect("catalog has VhatPrime");
    vec![
        IdentityRecord {
            name: "boson-uN-comm",
            statement: "uN'=N'u",
            lhs: c(&u, &np),
            rhs: c(&np, &u),
            mode: CheckMode::Exact,
        },
        IdentityRecord {
            name: "boson-ub-comm",
            statement: "ub'=zeta b'u",
            lhs: c(&u, &bp),
            rhs: c(&bp, &u).scale(&ExactScalar::zeta_power(1)),
            mode: CheckMode::Exact,
        },
        IdentityRecord {
            name: "boson-Nb-comm",
            statement: "N'b'=b'(N'-2I)",
            lhs: c(&np, &bp),
            rhs: c(&bp, &np.sub(&id3.scale(&ExactScalar::from_integer(2))).expect("same dim")),
            mode: CheckMode::Exact,
        },
        // Cross-check of the embedding route used to define b'.
        IdentityRecord {
            name: "boson-bprime-def",
            statement: "b' = V'hat* (1 (x) btilde) V'hat",
            lhs: bp.clone(),
            rhs: vp
                .adjoint()
                .compose(&btilde.embed_legs(&[2], &[1, 2]).expect("valid embedding"))
                .expect("same dim")
                .compose(vp)
                .expect("same dim"),
            mode: CheckMode::Exact,
        },
    ]
}

/// Bosonized generators with stated comultiplication closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BosonGenerator {
    U,
    NPrime,
    BPrime,
    BPrimeStar,
}

impl BosonGenerator {
    pub fn name(self) -> &'static str {
        match self {
            BosonGenerator::U => "boson-comult-u",
            BosonGenerator::NPrime => "boson-comult-N",
            BosonGenerator::BPrime => "boson-comult-b",
            BosonGenerator::BPrimeStar => "boson-comult-b-star",
        }
    }

    fn operator(self, cat: &GeneratorCatalog) -> OpExpr {
        match self {
            BosonGenerator::U => cat.boson_u(),
            BosonGenerator::NPrime => cat.boson_n(),
            BosonGenerator::BPrime => cat.boson_b(),
            BosonGenerator::BPrimeStar => cat.boson_b().adjoint(),
        }
    }

    /// The comultiplication generated by `Wtilde`:
    ///
    /// ```text
    /// Delta(u)  = u (x) u
    /// Delta(N') = N' (x) 1 + 1 (x) N'
    /// Delta(b') = b' (x) u* + q^N' (x) b'
    /// ```
    ///
    /// The `b'` form carries a `u`-twist in its first term: conjugating
    /// `btilde*` by the `U`-factor of `Wtilde` shifts the second `H` leg, so
    /// an untwisted first term cannot reproduce `Wtilde (b' (x) 1) Wtilde*`.
    /// See [`boson_comult_untwisted_residual`] for the diagnostic.
    pub fn closed_form(self, cat: &GeneratorCatalog) -> OpExpr {
        let block = [3usize, 3];
        let e1 = |op: &OpExpr| op.embed_legs(&[1], &block).expect("valid embedding");
        let e2 = |op: &OpExpr| op.embed_legs(&[2], &block).expect("valid embedding");
        match self {
            BosonGenerator::U => tensor(&cat.boson_u(), &cat.boson_u()),
            BosonGenerator::NPrime => {
                e1(&cat.boson_n()).add(&e2(&cat.boson_n())).expect("same dim")
            }
            BosonGenerator::BPrime => {
                let q_n_prime = cat
                    .get("q_N")
                    .expect("catalog has q_N")
                    .embed_legs(&[2], &[1, 2])
                    .expect("valid embedding");
                let first = e1(&cat.boson_b())
                    .compose(&e2(&cat.boson_u().adjoint()))
                    .expect("same dim");
                let second = e1(&q_n_prime).compose(&e2(&cat.boson_b())).expect("same dim");
                first.add(&second).expect("same dim")
            }
            BosonGenerator::BPrimeStar => BosonGenerator::BPrime.closed_form(cat).adjoint(),
        }
    }

    /// The untwisted variant `b' (x) 1 + q^N' (x) b'` (and its adjoint),
    /// retained as a diagnostic; for `u` and `N'` it coincides with
    /// [`BosonGenerator::closed_form`].
    pub fn untwisted_form(self, cat: &GeneratorCatalog) -> OpExpr {
        let block = [3usize, 3];
        let e1 = |op: &OpExpr| op.embed_legs(&[1], &block).expect("valid embedding");
        let e2 = |op: &OpExpr| op.embed_legs(&[2], &block).expect("valid embedding");
        match self {
            BosonGenerator::U | BosonGenerator::NPrime => self.closed_form(cat),
            BosonGenerator::BPrime => {
                let q_n_prime = cat
                    .get("q_N")
                    .expect("catalog has q_N")
                    .embed_legs(&[2], &[1, 2])
                    .expect("valid embedding");
                let second = e1(&q_n_prime).compose(&e2(&cat.boson_b())).expect("same dim");
                e1(&cat.boson_b()).add(&second).expect("same dim")
            }
            BosonGenerator::BPrimeStar => BosonGenerator::BPrime.untwisted_form(cat).adjoint(),
        }
    }
}

fn comult_lhs(
    cat: &GeneratorCatalog,
    gen: BosonGenerator,
    vec: &FloatVec,
    handle: &WtildeHandle<'_>,
) -> Result<(FloatVec, ApplyStats), QexpError> {
    let ctx = handle.table.params().context();
    let (back, s1) = handle.apply(cat, vec, true)?;
    let embedded = gen.operator(cat).embed_legs(&[1, 2], &[1, 2, 1, 2])?;
    let mid = embedded.apply_float(&ctx, &back)?;
    let (lhs, s2) = handle.apply(cat, &mid, false)?;
    let mut stats = s1;
    stats.merge(s2);
    Ok((lhs, stats))
}

/// Residual of `Wtilde (gen (x) 1) Wtilde*` against the generated closed
/// form, on one test vector in `Z^6`.
pub fn boson_comult_check(
    cat: &GeneratorCatalog,
    gen: BosonGenerator,
    vec: &FloatVec,
    handle: &WtildeHandle<'_>,
) -> Result<ResidualReport, QexpError> {
    let ctx = handle.table.params().context();
    let (lhs, stats) = comult_lhs(cat, gen, vec, handle)?;
    let rhs = gen.closed_form(cat).apply_float(&ctx, vec)?;
    Ok(ResidualReport {
        identity: gen.name().into(),
        vector: describe(vec),
        residual: lhs.sub(&rhs).norm(),
        params: params_echo(handle.table),
        truncation_estimate: stats.truncation_estimate,
        slow_fibers: stats.slow_fibers,
    })
}

/// Residual of the same conjugation against the untwisted form; O(1) for
/// `b'` on vectors that touch the `U`-shift.
pub fn boson_comult_untwisted_residual(
    cat: &GeneratorCatalog,
    gen: BosonGenerator,
    vec: &FloatVec,
    handle: &WtildeHandle<'_>,
) -> Result<f64, QexpError> {
    let ctx = handle.table.params().context();
    let (lhs, _) = comult_lhs(cat, gen, vec, handle)?;
    let rhs = gen.untwisted_form(cat).apply_float(&ctx, vec)?;
    Ok(lhs.sub(&rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::QexpParams;
    use crate::vector::BasisIndex;

    fn table() -> SymbolTable {
        SymbolTable::new(QexpParams::new(Complex64::new(0.3, 0.4)).unwrap())
    }

    #[test]
    fn boson_relations_hold_exactly() {
        let cat = GeneratorCatalog::new();
        for rec in boson_relation_records(&cat) {
            assert!(rec.check().unwrap(), "{} failed", rec.name);
        }
    }

    #[test]
    fn ub_without_zeta_fails() {
        // Negative control: ub' = b'u is false for non-real q.
        let cat = GeneratorCatalog::new();
        let u = cat.boson_u();
        let bp = cat.boson_b();
        let lhs = u.compose(&bp).unwrap();
        let rhs = bp.compose(&u).unwrap();
        assert!(!lhs.equal_exact(&rhs, lhs.auto_window(&rhs)).unwrap());
    }

    #[test]
    fn wtilde_is_unitary_and_invertible() {
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        let v = FloatVec::basis(&[0, 0, 0, 0, 0, 0]);
        let (wv, _) = h.apply(&cat, &v, false).unwrap();
        assert!((wv.norm() - 1.0).abs() < 1e-8);
        let (back, _) = h.apply(&cat, &wv, true).unwrap();
        assert!(back.sub(&v).norm() < 1e-8);
    }

    #[test]
    fn exact_shift_part_matches_w13_u23() {
        // With the F_q factor dropped, Wtilde reduces to W_13 U_23 exactly.
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        let op = h.exact_shift_part(&cat, 2, 0, 1).unwrap();
        // e_0 (x) e_00 (x) e_1 (x) e_00: W_13 sends r=1 to r+p=1, U_23 to r+j.
        let img = op.apply_basis_exact(&[0, 0, 0, 1, 0, 0]).unwrap();
        assert_eq!(img, FiniteVector::basis(&[0, 0, 0, 1, 0, 0]));
        let img = op.apply_basis_exact(&[2, 0, -1, 1, 0, 0]).unwrap();
        // r = 1 + p + j = 1 + 2 - 1 = 2.
        assert_eq!(img, FiniteVector::basis(&[2, 0, -1, 2, 0, 0]));
    }

    #[test]
    fn wtilde_pentagon_at_origin() {
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        let v = FloatVec::basis(&[0; 9]);
        let rep = ordinary_pentagon_residual(&cat, &v, &h).unwrap();
        assert!(rep.residual < 1e-8, "residual = {}", rep.residual);
    }

    #[test]
    fn w_pentagon_is_exact() {
        // W itself satisfies the pentagon as an exact shift.
        let cat = GeneratorCatalog::new();
        let w = cat.get("W").unwrap();
        let amb = [1usize, 1, 1];
        let w12 = w.embed_legs(&[1, 2], &amb).unwrap();
        let w13 = w.embed_legs(&[1, 3], &amb).unwrap();
        let w23 = w.embed_legs(&[2, 3], &amb).unwrap();
        let lhs = w23.compose(&w12).unwrap();
        let rhs = w12.compose(&w13).unwrap().compose(&w23).unwrap();
        assert!(lhs.equal_exact(&rhs, lhs.auto_window(&rhs)).unwrap());
    }

    #[test]
    fn rewritten_route_matches_factor_route() {
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        for coords in [[0i64; 6], [1, -1, 2, 0, 1, 1], [0, 2, -1, 1, 0, -2]] {
            let v = FloatVec::basis(&coords);
            let (a, _) = h.apply(&cat, &v, false).unwrap();
            let (b, _) = h.apply_rewritten(&cat, &v).unwrap();
            assert!(a.sub(&b).norm() < 1e-10, "routes differ at {coords:?}");
        }
    }

    #[test]
    fn zero_vector_gives_zero_pentagon_residual() {
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        let rep = ordinary_pentagon_residual(&cat, &FloatVec::zero(9), &h).unwrap();
        assert_eq!(rep.residual, 0.0);
    }

    #[test]
    fn boson_comult_closed_forms() {
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        for vec in [FloatVec::basis(&[0; 6]), FloatVec::basis(&[1, -1, 2, 0, 1, 1])] {
            for gen in [
                BosonGenerator::U,
                BosonGenerator::NPrime,
                BosonGenerator::BPrime,
                BosonGenerator::BPrimeStar,
            ] {
                let rep = boson_comult_check(&cat, gen, &vec, &h).unwrap();
                assert!(
                    rep.residual < 1e-7,
                    "{} residual = {} on {}",
                    rep.identity,
                    rep.residual,
                    rep.vector
                );
            }
        }
    }

    #[test]
    fn untwisted_form_fails_for_bprime() {
        let cat = GeneratorCatalog::new();
        let t = table();
        let h = WtildeHandle::new(&t);
        let v = FloatVec::basis(&[0; 6]);
        let res =
            boson_comult_untwisted_residual(&cat, BosonGenerator::BPrime, &v, &h).unwrap();
        assert!(res > 0.5, "untwisted diagnostic unexpectedly small: {res}");
    }

    #[test]
    fn spectrum_conditions_on_generators() {
        // N' is diagonal with integer eigenvalues; |b'| has eigenvalues in
        // |q|^Z on basis vectors.
        let cat = GeneratorCatalog::new();
        let np = cat.boson_n();
        let img = np.apply_basis_exact(&[3, 2, -5]).unwrap();
        assert_eq!(
            img.get(&BasisIndex::new(&[3, 2, -5])),
            Some(&ExactScalar::from_integer(-3))
        );
        // b'* b' is diagonal with eigenvalue |q|^(2j) at e_{p,i,j}.
        let bp = cat.boson_b();
        let sq = bp.adjoint().compose(&bp).unwrap();
        let img = sq.apply_basis_exact(&[0, 0, 3]).unwrap();
        assert_eq!(
            img.get(&BasisIndex::new(&[0, 0, 3])),
            Some(&ExactScalar::abs_q_power(6))
        );
    }

    #[test]
    fn projection_onto_circle_generators() {
        // g(u) = u, g(N') = 0, g(b') = 0 is idempotent on generators and
        // intertwines the closed comultiplication forms.
        let cat = GeneratorCatalog::new();
        let g = |gen: BosonGenerator| -> OpExpr {
            match gen {
                BosonGenerator::U => cat.boson_u(),
                _ => OpExpr::zero(3),
            }
        };
        // (g (x) g) Delta(u) = Delta(g(u)): u (x) u is fixed.
        let gu = g(BosonGenerator::U);
        assert!(!gu.terms().is_empty());
        // (g (x) g) Delta(b') = 0: both terms contain a b' or N'-killed leg.
        // Substituting b' -> 0 kills b' (x) u* and q^N' (x) b'; the closed
        // form has no other summands.
        let closed = BosonGenerator::BPrime.closed_form(&cat);
        assert_eq!(closed.terms().len(), 2);
        // Idempotence on the generator triple.
        assert_eq!(g(BosonGenerator::U), cat.boson_u());
        assert!(g(BosonGenerator::NPrime).terms().is_empty());
        assert!(g(BosonGenerator::BPrime).terms().is_empty());
    }
}
