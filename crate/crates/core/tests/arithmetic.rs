//! Field, group and sharing arithmetic against big-integer reference values.

use mpfss::field::{PrimeField, F11, F5};
use mpfss::group::{deserialize_element, scalar_inverse, serialize_element, Group, TestCurve, P256};
use mpfss::sharing::{cnf_mul_local, cnf_open, cnf_share, prss_expand, prss_share, Threshold};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn big<F: PrimeField>(x: &F) -> BigUint {
    x.to_biguint()
}

fn field_oracle<F: PrimeField>(a: F, b: F) -> Result<(), TestCaseError> {
    let q = F::modulus();
    prop_assert_eq!(big(&(a + b)), (big(&a) + big(&b)) % &q);
    prop_assert_eq!(big(&(a * b)), (big(&a) * big(&b)) % &q);
    prop_assert_eq!(big(&(a - b)), (big(&a) + &q - big(&b)) % &q);
    if !a.is_zero() {
        let inv = scalar_inverse(&a).unwrap();
        prop_assert_eq!((big(&a) * big(&inv)) % &q, BigUint::from(1u32));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn p256_scalars(s1: u64, s2: u64) {
        let mut rng = ChaCha20Rng::seed_from_u64(s1 ^ s2.rotate_left(7));
        let a = <P256 as Group>::Scalar::random(&mut rng);
        let b = <P256 as Group>::Scalar::random(&mut rng);
        field_oracle(a, b)?;
    }

    #[test]
    fn test_curve_scalars(a: u64, b: u64) {
        type S = <TestCurve as Group>::Scalar;
        field_oracle(S::from_u64(a), S::from_u64(b))?;
    }

    #[test]
    fn small_fields(a in 0u64..100, b in 0u64..100) {
        field_oracle(F5::from_u64(a), F5::from_u64(b))?;
        field_oracle(F11::from_u64(a), F11::from_u64(b))?;
    }

    /// `g^a · g^b = g^{a+b}` and `(g^a)^b = g^{ab}` with exponents reduced by
    /// the reference modulus.
    #[test]
    fn exponent_laws(a: u64, b: u64) {
        type S = <TestCurve as Group>::Scalar;
        let q = S::modulus();
        let (ea, eb) = (S::from_u64(a), S::from_u64(b));
        let ga = TestCurve::exp_generator(&ea);
        let gb = TestCurve::exp_generator(&eb);
        let sum = (BigUint::from(a) + BigUint::from(b)) % &q;
        let prod = (BigUint::from(a) * BigUint::from(b)) % &q;
        let from_big = |v: BigUint| {
            let mut bytes = [0u8; 8];
            let raw = v.to_bytes_be();
            bytes[8 - raw.len()..].copy_from_slice(&raw);
            S::read_be(&bytes).unwrap()
        };
        prop_assert_eq!(TestCurve::op(&ga, &gb), TestCurve::exp_generator(&from_big(sum)));
        prop_assert_eq!(TestCurve::exp(&ga, &eb), TestCurve::exp_generator(&from_big(prod)));
        let bytes = serialize_element::<TestCurve>(&ga);
        prop_assert_eq!(deserialize_element::<TestCurve>(&bytes).unwrap(), ga);
    }

    #[test]
    fn cnf_product_over_f11(a in prop::collection::vec(0u64..11, 1..6), b in prop::collection::vec(0u64..11, 1..6), seed: u64, pm in 0usize..4) {
        let (p, m) = [(1, 0), (3, 1), (5, 2), (7, 3)][pm];
        let a: Vec<F11> = a.into_iter().map(F11::from_u64).collect();
        let b: Vec<F11> = b.into_iter().map(F11::from_u64).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let va = cnf_share(&a, p, m, &mut rng).unwrap();
        let vb = cnf_share(&b, p, m, &mut rng).unwrap();
        prop_assert_eq!(cnf_open(&va).unwrap(), a.clone());
        for i in 0..a.len() {
            for j in 0..b.len() {
                let mut sum = F11::zero();
                for (x, y) in va.iter().zip(&vb) {
                    sum += cnf_mul_local(x, i, y, j).unwrap();
                }
                prop_assert_eq!(sum.value(), a[i].value() * b[j].value() % 11);
            }
        }
    }

    #[test]
    fn prss_views_match_dealer(secret in prop::collection::vec(0u64..5, 1..8), seed: u64) {
        let t = Threshold::new(5, 2).unwrap();
        let secret: Vec<F5> = secret.into_iter().map(F5::from_u64).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (sharing, compressed) = prss_share(&secret, t, &mut rng);
        let views: Vec<_> = compressed.iter().map(|c| prss_expand(c).unwrap()).collect();
        for (i, v) in views.iter().enumerate() {
            let dealer = sharing.view(i);
            prop_assert_eq!(v.components(), dealer.components());
        }
        prop_assert_eq!(cnf_open(&views).unwrap(), secret);
    }
}
