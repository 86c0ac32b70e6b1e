//! Randomized property tests for the exact-arithmetic layer and the
//! classification invariants.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use holte_core::cascade::{avoidance_count, avoidance_sequence, restrict, BinaryChain};
use holte_core::classify::shadow_equivalent_binary;
use holte_core::exactnum::{ExactRational, RatPolynomial};
use holte_core::holte::build_holte;

fn rational() -> impl Strategy<Value = ExactRational> {
    (-1_000i64..=1_000, 1i64..=60)
        .prop_map(|(num, den)| ExactRational::new(BigInt::from(num), BigInt::from(den)))
}

fn polynomial(max_len: usize) -> impl Strategy<Value = RatPolynomial> {
    prop::collection::vec(rational(), 0..max_len).prop_map(RatPolynomial::new)
}

fn chain() -> impl Strategy<Value = BinaryChain> {
    (0u32..=6, 0u32..=6, 0u32..=6)
        .prop_filter_map("positive alphabet", |(g, t, r)| {
            BinaryChain::new(g + t + r, g, t, r).ok()
        })
}

proptest! {
    #[test]
    fn rationals_stay_reduced(a in rational()) {
        use num_integer::Integer;
        use num_traits::Signed;
        prop_assert!(a.denom().is_positive());
        prop_assert!(a.numer().gcd(a.denom()) == BigInt::from(1) || a.numer() == &BigInt::from(0));
    }

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn product_division_roundtrip(p in polynomial(6), q in polynomial(5)) {
        prop_assume!(!q.is_zero());
        let prod = p.mul(&q);
        prop_assert_eq!(prod.divide_exact(&q).unwrap(), p);
    }

    #[test]
    fn gcd_divides_both_and_is_monic(p in polynomial(5), q in polynomial(5)) {
        let g = p.gcd(&q);
        if g.is_zero() {
            prop_assert!(p.is_zero() && q.is_zero());
        } else {
            use num_traits::One;
            prop_assert!(g.leading().unwrap().is_one());
            prop_assert!(p.divide_exact(&g).is_ok());
            prop_assert!(q.divide_exact(&g).is_ok());
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in polynomial(5), q in polynomial(5), x in rational()) {
        prop_assert_eq!(p.mul(&q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.add(&q).eval(&x), p.eval(&x) + q.eval(&x));
    }

    #[test]
    fn shadow_equivalence_is_an_equivalence_relation(
        a in chain(), b in chain(), c in chain()
    ) {
        prop_assert!(shadow_equivalent_binary(&a, &a));
        prop_assert_eq!(
            shadow_equivalent_binary(&a, &b),
            shadow_equivalent_binary(&b, &a)
        );
        if shadow_equivalent_binary(&a, &b) && shadow_equivalent_binary(&b, &c) {
            prop_assert!(shadow_equivalent_binary(&a, &c));
        }
    }

    #[test]
    fn equivalent_chains_have_equal_avoidance_counts(a in chain(), b in chain()) {
        // (N, det) determines the whole sequence
        if shadow_equivalent_binary(&a, &b) {
            prop_assert_eq!(avoidance_sequence(&a, 12), avoidance_sequence(&b, 12));
        }
    }

    #[test]
    fn avoidance_counts_agree_between_power_and_iteration(
        k in 2usize..=4,
        base in 2u32..=3,
        l in 0u32..=8,
        mask in 1u32..15,
    ) {
        let mask = mask & ((1 << k) - 1);
        prop_assume!(mask != 0 && mask != (1 << k) - 1);
        let f: BTreeSet<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let spec = restrict(&build_holte(k, base), &f).unwrap();
        let seq = avoidance_sequence(&spec, l);
        prop_assert_eq!(avoidance_count(&spec, l), seq[l as usize].clone());
    }
}
