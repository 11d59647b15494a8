use proptest::prelude::*;

use qlens::ncalgebra::q0::Q0Poly;
use qlens::ncalgebra::{
    haar_state, homogeneous_degree, lens_member, multiply, normal_form_with, star, word, Gen,
    GenWord, Monomial, NCPoly, Strategy as Fold,
};
use qlens::qarith::{q_number, QLaurent};

fn letter() -> impl Strategy<Value = Gen> {
    prop::sample::select(Gen::ALL.to_vec())
}

fn letters(max: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(letter(), 0..=max)
}

fn small_poly() -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((letters(3), -2i64..=2, -3i64..=3), 1..=3).prop_map(|terms| {
        terms.into_iter().fold(NCPoly::zero(), |acc, (w, e, c)| {
            acc.add(&word(&w).scale(&(QLaurent::q_pow(e) * QLaurent::int(c))))
        })
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (-4i64..=4, 0u32..=3, 0u32..=3).prop_map(|(k, l, m)| Monomial::new(k, l, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rewriting_is_confluent(w in letters(9)) {
        let g = GenWord::new(w);
        prop_assert_eq!(normal_form_with(&g, Fold::LeftToRight), normal_form_with(&g, Fold::RightToLeft));
    }

    #[test]
    fn product_is_associative(x in small_poly(), y in small_poly(), z in small_poly()) {
        prop_assert_eq!(multiply(&multiply(&x, &y), &z), multiply(&x, &multiply(&y, &z)));
    }

    #[test]
    fn star_is_an_antimultiplicative_involution(x in small_poly(), y in small_poly()) {
        prop_assert_eq!(star(&star(&x)), x.clone());
        prop_assert_eq!(star(&multiply(&x, &y)), multiply(&star(&y), &star(&x)));
    }

    #[test]
    fn haar_state_is_positive(x in small_poly(), q in 0.05f64..0.95) {
        prop_assume!(!x.is_zero());
        let v = haar_state(&multiply(&star(&x), &x)).eval(q).unwrap();
        prop_assert!(v > 0.0, "psi(x* x) = {v} at q = {q}");
    }

    #[test]
    fn lens_degree_is_additive(x in monomial(), y in monomial(), p in 1u32..=7, r in 1i64..=7) {
        prop_assume!(num_integer::gcd(p as i64, r) == 1);
        let px = NCPoly::basis(x.k, x.l, x.m);
        let py = NCPoly::basis(y.k, y.l, y.m);
        let (Ok(Some(dx)), Ok(Some(dy))) = (homogeneous_degree(&px, p, r), homogeneous_degree(&py, p, r)) else {
            return Ok(());
        };
        let prod = multiply(&px, &py);
        prop_assert_eq!(homogeneous_degree(&prod, p, r).unwrap(), Some(dx + dy));
        if lens_member(&x, p, r) && lens_member(&y, p, r) {
            prop_assert!(prod.monomials().all(|m| lens_member(m, p, r)));
        }
    }

    #[test]
    fn q_numbers(m in -8i64..=8, n in -8i64..=8) {
        // [m + n] = q^n [m] + q^{-m} [n], and [2][n] = [n + 1] + [n - 1].
        prop_assert_eq!(q_number(m + n), &q_number(m).shift(n) + &q_number(n).shift(-m));
        prop_assert_eq!(&q_number(2) * &q_number(n), &q_number(n + 1) + &q_number(n - 1));
        prop_assert_eq!(q_number(-n), -q_number(n));
    }

    #[test]
    fn q0_product_is_associative(x in letters(4), y in letters(4), z in letters(4)) {
        let (x, y, z) = (Q0Poly::word(&x), Q0Poly::word(&y), Q0Poly::word(&z));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }
}

#[test]
fn defining_relations_hold_in_normal_form() {
    use Gen::*;
    let q = QLaurent::q_pow;
    let ab = word(&[A, B]);
    let ba = word(&[B, A]);
    assert_eq!(ba, ab.scale(&q(1)));
    assert_eq!(word(&[B, BStar]), word(&[BStar, B]));
    let unit = word(&[AStar, A]).add(&word(&[BStar, B]).scale(&q(2)));
    assert!(unit.is_one());
    let unit = word(&[A, AStar]).add(&word(&[B, BStar]));
    assert!(unit.is_one());
}
