//! Property tests for the shift-monomial calculus: algebraic laws that must
//! hold for arbitrary words in the generator catalog.

use num_complex::Complex64;
use proptest::prelude::*;

use std::sync::OnceLock;

use eq2_core::catalog::GeneratorCatalog;
use eq2_core::exact::{ExactScalar, QContext};
use eq2_core::op::OpExpr;
use eq2_core::qexp::{QexpParams, SymbolTable, XhatLegs, apply_fq_shift_class};
use eq2_core::vector::{BasisIndex, FiniteVector};

fn shared_table() -> &'static SymbolTable {
    static TABLE: OnceLock<SymbolTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        SymbolTable::new(QexpParams::new(Complex64::new(0.3, 0.4)).unwrap())
    })
}

const WORD_POOL: &[&str] = &[
    "v", "v*", "n", "n_inv", "N", "b", "b_inv", "P", "q_half_N", "btilde", "phase_btilde",
    "modulus_btilde",
];

fn word_strategy() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(WORD_POOL.to_vec()), 1..4)
}

fn op_from_word(cat: &GeneratorCatalog, word: &[&str]) -> OpExpr {
    word.iter()
        .map(|name| cat.get(name).unwrap().clone())
        .reduce(|a, b| a.compose(&b).unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(
        wa in word_strategy(),
        wb in word_strategy(),
        wc in word_strategy(),
        x in -3i64..=3,
        y in -3i64..=3,
    ) {
        let cat = GeneratorCatalog::new();
        let (a, b, c) = (op_from_word(&cat, &wa), op_from_word(&cat, &wb), op_from_word(&cat, &wc));
        let left = a.compose(&b.compose(&c).unwrap()).unwrap();
        let right = a.compose(&b).unwrap().compose(&c).unwrap();
        let lv = left.apply_basis_exact(&[x, y]).unwrap();
        let rv = right.apply_basis_exact(&[x, y]).unwrap();
        prop_assert_eq!(lv, rv);
    }

    #[test]
    fn adjoint_is_antimultiplicative(wa in word_strategy(), wb in word_strategy()) {
        let cat = GeneratorCatalog::new();
        let (a, b) = (op_from_word(&cat, &wa), op_from_word(&cat, &wb));
        let lhs = a.compose(&b).unwrap().adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        let w = lhs.auto_window(&rhs);
        prop_assert!(lhs.equal_exact(&rhs, w).unwrap());
    }

    #[test]
    fn leg_embedding_is_functorial(wa in word_strategy(), wb in word_strategy()) {
        let cat = GeneratorCatalog::new();
        let (a, b) = (op_from_word(&cat, &wa), op_from_word(&cat, &wb));
        let ambient = [2usize, 2];
        let lhs = a.compose(&b).unwrap().embed_legs(&[2], &ambient).unwrap();
        let rhs = a
            .embed_legs(&[2], &ambient)
            .unwrap()
            .compose(&b.embed_legs(&[2], &ambient).unwrap())
            .unwrap();
        let w = lhs.auto_window(&rhs);
        prop_assert!(lhs.equal_exact(&rhs, w).unwrap());
    }

    #[test]
    fn disjoint_legs_commute(wa in word_strategy(), wb in word_strategy()) {
        let cat = GeneratorCatalog::new();
        let ambient = [2usize, 2];
        let a = op_from_word(&cat, &wa).embed_legs(&[1], &ambient).unwrap();
        let b = op_from_word(&cat, &wb).embed_legs(&[2], &ambient).unwrap();
        let ab = a.compose(&b).unwrap();
        let ba = b.compose(&a).unwrap();
        let w = ab.auto_window(&ba);
        prop_assert!(ab.equal_exact(&ba, w).unwrap());
    }

    #[test]
    fn float_eval_matches_exact_arithmetic(
        r_num in -50i64..=50,
        r_den in 1i64..=20,
        a in -200i64..=200,
        b in -200i64..=200,
    ) {
        // Polar-form evaluation against the plain power-product route; both
        // must agree to relative 1e-12 across the exponent range.
        let ctx = QContext::new(Complex64::new(0.3, 0.4)).unwrap();
        let r = num_rational::BigRational::new(r_num.into(), r_den.into());
        prop_assume!(!num_traits::Zero::is_zero(&r));
        let s = ExactScalar::term(r.clone(), a, b);
        let polar = s.eval(&ctx);
        let sq = Complex64::new(0.3, 0.4).sqrt();
        let rf = num_traits::ToPrimitive::to_f64(&r).unwrap();
        let reference = sq.powi(a as i32) * sq.conj().powi(b as i32) * rf;
        prop_assert!(
            (polar - reference).norm() <= 1e-12 * reference.norm(),
            "polar {} vs reference {}",
            polar,
            reference
        );
    }

    #[test]
    fn functional_calculus_is_unitary_on_random_vectors(
        entries in prop::collection::vec(
            ((-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3), (-1.0f64..1.0, -1.0f64..1.0)),
            1..6,
        ),
    ) {
        // F_q of the normal generator preserves norms and inverts, for
        // arbitrary finitely supported vectors spanning several fibers.
        let mut v: FiniteVector<Complex64> = FiniteVector::zero(4);
        for ((i, j, k, l), (re, im)) in entries {
            v.insert_add(BasisIndex::new(&[i, j, k, l]), Complex64::new(re, im));
        }
        prop_assume!(v.norm() > 0.1);
        let table = shared_table();
        let legs = XhatLegs::plain();
        let one = Complex64::new(1.0, 0.0);
        let (fv, _) = apply_fq_shift_class(&v, &legs, one, false, table).unwrap();
        prop_assert!((fv.norm() - v.norm()).abs() < 1e-8 * v.norm());
        let (back, _) = apply_fq_shift_class(&fv, &legs, one, true, table).unwrap();
        prop_assert!(back.sub(&v).norm() < 1e-8 * v.norm());
    }

    #[test]
    fn apply_is_linear_over_entries(
        wa in word_strategy(),
        x in -2i64..=2,
        y in -2i64..=2,
    ) {
        // apply(op, e_x + e_y) = apply(op, e_x) + apply(op, e_y)
        let cat = GeneratorCatalog::new();
        let op = op_from_word(&cat, &wa);
        let ex: FiniteVector<ExactScalar> = FiniteVector::basis(&[x, y]);
        let ey: FiniteVector<ExactScalar> = FiniteVector::basis(&[y, x]);
        let ctx = QContext::new(Complex64::new(0.3, 0.4)).unwrap();
        let sum = op.apply(&ctx, &ex.add(&ey)).unwrap();
        let split = op.apply(&ctx, &ex).unwrap().add(&op.apply(&ctx, &ey).unwrap());
        prop_assert_eq!(sum, split);
    }
}
