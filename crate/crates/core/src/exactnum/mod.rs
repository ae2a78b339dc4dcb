//! Exact scalars: arbitrary-precision rationals and the quadratic field ℚ(√2).
//!
//! Every coefficient in the lattice, field and Fock layers is a [`QSqrt2`];
//! types A, B and D simply never populate the irrational part.

mod qsqrt2;
mod rational;

pub use qsqrt2::QSqrt2;
pub use rational::Rational;

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn rational() -> impl Strategy<Value = Rational> {
        prop_oneof![
            (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d).unwrap()),
            (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d).unwrap()),
        ]
    }

    fn scalar() -> impl Strategy<Value = QSqrt2> {
        (rational(), rational()).prop_map(|(a, b)| QSqrt2::new(a, b))
    }

    proptest! {
        #[test]
        fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conjugation_is_a_field_automorphism(a in scalar(), b in scalar()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert!((&a * &a.conj()).is_rational());
        }

        #[test]
        fn rationals_stay_reduced(a in rational(), b in rational()) {
            use num_integer::Integer;
            use num_traits::{One, Signed};
            for r in [&a + &b, &a * &b, &a - &b] {
                prop_assert!(r.denom().is_positive());
                prop_assert!(r.numer().gcd(&r.denom()).is_one());
            }
        }

        #[test]
        fn display_parse_round_trip(a in scalar()) {
            prop_assert_eq!(a.to_string().parse::<QSqrt2>().unwrap(), a);
        }
    }
}
