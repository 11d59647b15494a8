use std::sync::Arc;

use proptest::prelude::*;

use qlens::hilbert::verify::{adjointness_residual, grading_residuals, verify_relations};
use qlens::hilbert::{basis_size, enumerate_basis, Representation};
use qlens::ncalgebra::NCPoly;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relations_hold_for_any_q(q in 0.01f64..=1.0) {
        let basis = Arc::new(enumerate_basis(12));
        let rep = Representation::new(&basis, q);
        let tol = if q > 0.9 { 1e-6 } else { 1e-10 };
        prop_assert!(verify_relations(&rep, 4).max_residual() < tol);
        prop_assert!(grading_residuals(&rep, 4).iter().all(|r| r.residual < tol));
    }

    #[test]
    fn words_are_adjointable(q in 0.05f64..0.95, k in -3i64..=3, l in 0u32..=2, m in 0u32..=2) {
        let basis = Arc::new(enumerate_basis(12));
        let rep = Representation::new(&basis, q);
        prop_assert!(adjointness_residual(&rep, &NCPoly::basis(k, l, m), 8) < 1e-10);
    }
}

#[test]
fn basis_size_matches_enumeration() {
    for t in 0..=10 {
        assert_eq!(basis_size(t), enumerate_basis(t).len());
    }
}
