use proptest::prelude::*;

use qlens::hilbert::Arrow;
use qlens::lens::{
    closed_form_spectrum, equivalence_multiplicities_agree, multiplicity, normalize, spectrum,
    ClosedFormVariant, LensParams,
};

fn lens() -> impl Strategy<Value = (u32, i64)> {
    (1u32..=12, -12i64..=12).prop_filter("coprime", |(p, r)| num_integer::gcd(*p as i64, *r) == 1)
}

proptest! {
    #[test]
    fn structures_partition_each_level((p, r) in lens(), two_j in 0u32..=40) {
        let prm = normalize(p, r).unwrap();
        let t = two_j as u64;
        for (arrow, total) in [(Arrow::Up, (t + 1) * (t + 2)), (Arrow::Down, (t + 1) * t)] {
            let sum: u64 = (0..p).map(|k| multiplicity(two_j, arrow, &prm.with_k(k as i64))).sum();
            prop_assert_eq!(sum, total);
        }
    }

    #[test]
    fn r_and_minus_r_pair_up((p, r) in lens(), k in 0i64..12) {
        let prm = LensParams::raw(p, r, k % p as i64).unwrap();
        prop_assert!(equivalence_multiplicities_agree(&prm, 21));
    }

    #[test]
    fn structures_sum_to_the_full_spectrum((p, r) in lens()) {
        // Summing over K recovers the full spectrum.
        let prm = normalize(p, r).unwrap();
        let tables: Vec<_> = (0..p).map(|k| spectrum(&prm.with_k(k as i64), 16)).collect();
        for two_lambda in [3i64, 5, 9, -1, -3, -7] {
            let total: u64 = tables.iter().map(|t| t.mult(two_lambda)).sum();
            let n = two_lambda.unsigned_abs();
            let want = if two_lambda > 0 {
                let t = (n - 3) / 2;
                (t + 1) * (t + 2)
            } else {
                let t = (n - 1) / 2;
                (t + 1) * t
            };
            prop_assert_eq!(total, want, "2 lambda = {}", two_lambda);
        }
    }
}

#[test]
fn corrected_closed_forms_match_counting() {
    for p in 2..=8u32 {
        let ks = if p % 2 == 0 { vec![0, p / 2] } else { vec![0] };
        for k in ks {
            let cf = closed_form_spectrum(p, k, 30, ClosedFormVariant::Corrected).unwrap();
            assert!(cf.agrees(), "p={p} K={k}: {:?}", cf.mismatches);
        }
    }
}

#[test]
fn printed_closed_forms_even_p() {
    for p in [2, 4, 6, 8] {
        for k in [0, p / 2] {
            let cf = closed_form_spectrum(p, k, 30, ClosedFormVariant::Printed).unwrap();
            assert!(
                cf.family_agrees("positive_a") && cf.family_agrees("positive_b"),
                "p={p} K={k}"
            );
        }
    }
}

#[test]
fn printed_negative_family_overcounts_for_p3() {
    let cf = closed_form_spectrum(3, 0, 30, ClosedFormVariant::Printed).unwrap();
    let e = cf
        .families
        .iter()
        .find(|e| e.family == "negative_a" && e.two_lambda == -7)
        .unwrap();
    assert_eq!((e.mult, e.oracle), (6, Some(4)));
}
