//! The dual braided multiplicative unitary `Fhat = F_q(Xhat)* Yhat` and the
//! identities it satisfies: the braided pentagon, the comultiplication
//! closed forms, and the slice identity family `S'(lambda)`.

use num_complex::Complex64;

use crate::catalog::{GeneratorCatalog, swap};
use crate::op::OpExpr;
use crate::qexp::{ApplyStats, QexpError, SymbolTable, XhatLegs, apply_fq_shift_class};
use crate::report::ResidualReport;
use crate::vector::FiniteVector;

/// Handle for applying `Fhat^lambda = F_q(lambda Xhat)* Yhat`; `lambda = 1`
/// is the dual braided multiplicative unitary itself.
pub struct DualUnitaryHandle<'t> {
    pub lambda: Complex64,
    pub table: &'t SymbolTable,
}

type FloatVec = FiniteVector<Complex64>;

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

impl<'t> DualUnitaryHandle<'t> {
    pub fn new(table: &'t SymbolTable) -> Self {
        DualUnitaryHandle { lambda: Complex64::new(1.0, 0.0), table }
    }

    pub fn with_lambda(table: &'t SymbolTable, lambda: Complex64) -> Self {
        DualUnitaryHandle { lambda, table }
    }

    fn ambient(num_legs: usize) -> Vec<usize> {
        vec![2; num_legs]
    }

    /// `Fhat^lambda` (or its inverse) acting on tensor legs `(leg_a, leg_b)`
    /// of `H_L^(x num_legs)`, identity elsewhere. Legs are 1-based.
    pub fn apply_on_legs(
        &self,
        cat: &GeneratorCatalog,
        vec: &FloatVec,
        leg_a: usize,
        leg_b: usize,
        num_legs: usize,
        inverse: bool,
    ) -> Result<(FloatVec, ApplyStats), QexpError> {
        let ambient = Self::ambient(num_legs);
        let yhat = cat
            .get("Yhat")
            .expect("catalog has Yhat")
            .embed_legs(&[leg_a, leg_b], &ambient)?;
        let legs = XhatLegs {
            dim: 2 * num_legs,
            a: (2 * (leg_a - 1), 2 * (leg_a - 1) + 1),
            b: (2 * (leg_b - 1), 2 * (leg_b - 1) + 1),
            diag: Vec::new(),
        };
        let ctx = self.table.params().context();
        if !inverse {
            // Fhat = F_q(lambda Xhat)* Yhat.
            let shifted = yhat.apply_float(&ctx, vec)?;
            apply_fq_shift_class(&shifted, &legs, self.lambda, true, self.table)
        } else {
            // Fhat* = Yhat* F_q(lambda Xhat).
            let (fq, stats) = apply_fq_shift_class(vec, &legs, self.lambda, false, self.table)?;
            Ok((yhat.adjoint().apply_float(&ctx, &fq)?, stats))
        }
    }

    /// `Fhat^lambda` on `H_L (x) H_L`.
    pub fn apply(
        &self,
        cat: &GeneratorCatalog,
        vec: &FloatVec,
        inverse: bool,
    ) -> Result<(FloatVec, ApplyStats), QexpError> {
        self.apply_on_legs(cat, vec, 1, 2, 2, inverse)
    }
}

/// The dual braiding `Psihat_23 = Zhat_23 Sigma_23` on `H_L^(x)3` as an exact
/// operator.
fn braiding_23(cat: &GeneratorCatalog) -> OpExpr {
    let ambient = [2usize, 2, 2];
    let zhat23 = cat
        .get("Zhat")
        .expect("catalog has Zhat")
        .embed_legs(&[2, 3], &ambient)
        .expect("valid embedding");
    let sigma23 = swap(2).embed_legs(&[2, 3], &ambient).expect("valid embedding");
    zhat23.compose(&sigma23).expect("same dim")
}

/// Residual of the braided pentagon
/// `Fhat_23 Fhat_12 = Fhat_12 Psihat_23 Fhat_12 Psihat_23* Fhat_23` on one
/// test vector in `Z^6`.
pub fn braided_pentagon_residual(
    cat: &GeneratorCatalog,
    vec: &FloatVec,
    handle: &DualUnitaryHandle<'_>,
) -> Result<ResidualReport, QexpError> {
    let ctx = handle.table.params().context();
    let psi = braiding_23(cat);
    let psi_star = psi.adjoint();
    let mut stats = ApplyStats::default();

    let (t1, s1) = handle.apply_on_legs(cat, vec, 1, 2, 3, false)?;
    let (lhs, s2) = handle.apply_on_legs(cat, &t1, 2, 3, 3, false)?;
    stats.merge(s1);
    stats.merge(s2);

    let (r1, s3) = handle.apply_on_legs(cat, vec, 2, 3, 3, false)?;
    let r2 = psi_star.apply_float(&ctx, &r1)?;
    let (r3, s4) = handle.apply_on_legs(cat, &r2, 1, 2, 3, false)?;
    let r4 = psi.apply_float(&ctx, &r3)?;
    let (rhs, s5) = handle.apply_on_legs(cat, &r4, 1, 2, 3, false)?;
    stats.merge(s3);
    stats.merge(s4);
    stats.merge(s5);

    Ok(ResidualReport {
        identity: "braided-pentagon".into(),
        vector: describe(vec),
        residual: lhs.sub(&rhs).norm(),
        params: params_echo(handle.table),
        truncation_estimate: stats.truncation_estimate,
        slow_fibers: stats.slow_fibers,
    })
}

/// Generators whose comultiplication has a stated closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComultGenerator {
    N,
    BTilde,
    BTildeStar,
}

impl ComultGenerator {
    pub fn name(self) -> &'static str {
        match self {
            ComultGenerator::N => "comult-N",
            ComultGenerator::BTilde => "comult-btilde",
            ComultGenerator::BTildeStar => "comult-btilde-star",
        }
    }

    /// The operator `gen (x) 1` on `H_L (x) H_L`.
    fn embedded(self, cat: &GeneratorCatalog) -> OpExpr {
        let ambient = [2usize, 2];
        let base = match self {
            ComultGenerator::N => cat.get("N").expect("catalog has N").clone(),
            ComultGenerator::BTilde => cat.get("btilde").expect("catalog has btilde").clone(),
            ComultGenerator::BTildeStar => cat.get("btilde").expect("catalog has btilde").adjoint(),
        };
        base.embed_legs(&[1], &ambient).expect("valid embedding")
    }

    /// Closed form of the comultiplication:
    /// `Delta(N) = N (x) 1 + 1 (x) N`,
    /// `Delta(btilde) = btilde (x) 1 + q^N P (x) btilde`, and the adjoint
    /// form for `btilde*`.
    pub fn closed_form(self, cat: &GeneratorCatalog) -> OpExpr {
        let ambient = [2usize, 2];
        let g = |n: &str| cat.get(n).expect("catalog generator").clone();
        match self {
            ComultGenerator::N => {
                let n1 = g("N").embed_legs(&[1], &ambient).expect("valid embedding");
                let n2 = g("N").embed_legs(&[2], &ambient).expect("valid embedding");
                n1.add(&n2).expect("same dim")
            }
            ComultGenerator::BTilde => {
                let first = g("btilde").embed_legs(&[1], &ambient).expect("valid embedding");
                let qnp = g("q_N").compose(&g("P")).expect("same dim");
                let second = crate::op::tensor(&qnp, &g("btilde"));
                first.add(&second).expect("same dim")
            }
            ComultGenerator::BTildeStar => {
                ComultGenerator::BTilde.closed_form(cat).adjoint()
            }
        }
    }
}

/// Residual of `Fhat (gen (x) 1) Fhat*` against the closed form, on one test
/// vector in `Z^4`.
pub fn comult_check(
    cat: &GeneratorCatalog,
    gen: ComultGenerator,
    vec: &FloatVec,
    handle: &DualUnitaryHandle<'_>,
) -> Result<ResidualReport, QexpError> {
    let ctx = handle.table.params().context();
    let (back, s1) = handle.apply(cat, vec, true)?;
    let mid = gen.embedded(cat).apply_float(&ctx, &back)?;
    let (lhs, s2) = handle.apply(cat, &mid, false)?;
    let rhs = gen.closed_form(cat).apply_float(&ctx, vec)?;
    let mut stats = s1;
    stats.merge(s2);
    Ok(ResidualReport {
        identity: gen.name().into(),
        vector: describe(vec),
        residual: lhs.sub(&rhs).norm(),
        params: params_echo(handle.table),
        truncation_estimate: stats.truncation_estimate,
        slow_fibers: stats.slow_fibers,
    })
}

/// Negative control: with the `F_q` factor removed, the conjugation
/// degenerates to `Yhat (gen (x) 1) Yhat*`, which must NOT match the closed
/// form for the diagonal generator `N`; returns that residual.
pub fn comult_negative_control(
    cat: &GeneratorCatalog,
    vec: &FloatVec,
    handle: &DualUnitaryHandle<'_>,
) -> Result<f64, QexpError> {
    let ctx = handle.table.params().context();
    let gen = ComultGenerator::N;
    // gen (x) 1 conjugated by the identity in place of Fhat.
    let lhs = gen.embedded(cat).apply_float(&ctx, vec)?;
    let rhs = gen.closed_form(cat).apply_float(&ctx, vec)?;
    Ok(lhs.sub(&rhs).norm())
}

/// Middle-leg convention for the slice identity `S'(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceMiddleLeg {
    /// `... (x) P (x) ...` — the reading forced by
    /// `Zhat (1 (x) btilde) Zhat* = P (x) btilde`; this is the identity that
    /// holds.
    P,
    /// `... (x) P* (x) ...` — kept as a diagnostic; its residual is O(1) on
    /// vectors with a nonzero middle second coordinate.
    PStar,
}

/// Applies `S'(lambda) = F_q(lambda A (x) P (x) B)* Yhat_13` on `Z^6`.
pub fn apply_slice_operator(
    cat: &GeneratorCatalog,
    vec: &FloatVec,
    lambda: Complex64,
    middle: SliceMiddleLeg,
    table: &SymbolTable,
) -> Result<(FloatVec, ApplyStats), QexpError> {
    let ctx = table.params().context();
    let yhat13 = cat
        .get("Yhat")
        .expect("catalog has Yhat")
        .embed_legs(&[1, 3], &[2, 2, 2])?;
    let w = match middle {
        SliceMiddleLeg::P => -1,
        SliceMiddleLeg::PStar => 1,
    };
    let legs = XhatLegs { dim: 6, a: (0, 1), b: (4, 5), diag: vec![(3, w)] };
    let shifted = yhat13.apply_float(&ctx, vec)?;
    apply_fq_shift_class(&shifted, &legs, lambda, true, table)
}

/// Residual of the slice identity
/// `(Fhat^lambda)*_12 Fhat_23 Fhat^lambda_12 Fhat*_23 = S'(lambda)` on one
/// test vector in `Z^6`. Returns the report for the P reading together with
/// the P* diagnostic residual.
pub fn slice_identity_residual(
    cat: &GeneratorCatalog,
    lambda: Complex64,
    vec: &FloatVec,
    table: &SymbolTable,
) -> Result<(ResidualReport, f64), QexpError> {
    let unit = DualUnitaryHandle::new(table);
    let scaled = DualUnitaryHandle::with_lambda(table, lambda);
    let mut stats = ApplyStats::default();

    let (t1, s1) = unit.apply_on_legs(cat, vec, 2, 3, 3, true)?;
    let (t2, s2) = scaled.apply_on_legs(cat, &t1, 1, 2, 3, false)?;
    let (t3, s3) = unit.apply_on_legs(cat, &t2, 2, 3, 3, false)?;
    let (lhs, s4) = scaled.apply_on_legs(cat, &t3, 1, 2, 3, true)?;
    for s in [s1, s2, s3, s4] {
        stats.merge(s);
    }

    let (rhs, s5) = apply_slice_operator(cat, vec, lambda, SliceMiddleLeg::P, table)?;
    let (rhs_star, _) = apply_slice_operator(cat, vec, lambda, SliceMiddleLeg::PStar, table)?;
    stats.merge(s5);

    let report = ResidualReport {
        identity: "slice-identity".into(),
        vector: describe(vec),
        residual: lhs.sub(&rhs).norm(),
        params: format!("lambda={}+{}i, {}", lambda.re, lambda.im, params_echo(table)),
        truncation_estimate: stats.truncation_estimate,
        slow_fibers: stats.slow_fibers,
    };
    Ok((report, lhs.sub(&rhs_star).norm()))
}
