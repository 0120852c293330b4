//! Prime-order groups in which DDH is assumed hard.
//!
//! The default instantiation is the NIST P-256 curve group. A small
//! prime-order curve over a 62-bit field ([`TestCurve`]) exercises the same
//! generic code paths orders of magnitude faster; it offers no security.

mod p256;
mod test_curve;

use std::fmt;

use num_bigint::BigUint;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::field::{random_nonzero, PrimeField};

pub use self::p256::P256;
pub use self::test_curve::{TestCurve, TestCurvePoint, TestScalar};

/// Identifies a group in key and share file headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum GroupId {
    P256 = 1,
    TestCurve = 2,
}

impl GroupId {
    pub fn from_u8(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(GroupId::P256),
            2 => Ok(GroupId::TestCurve),
            other => Err(Error::decode(format!("unknown group id {other}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupId::P256 => "p256",
            GroupId::TestCurve => "test-curve",
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Public parameters of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupContext {
    pub group_id: GroupId,
    /// Prime group order `q0`.
    pub order: BigUint,
    /// Canonical encoding of the fixed base `g`.
    pub generator: Vec<u8>,
    /// `ceil(log2(q0))`.
    pub security_lambda: u32,
    pub element_bytes: usize,
    pub scalar_bytes: usize,
}

/// A cyclic group of prime order written multiplicatively.
pub trait Group: Copy + fmt::Debug + Send + Sync + 'static {
    type Scalar: PrimeField;
    type Element: Copy + Eq + fmt::Debug + Send + Sync;

    const ID: GroupId;
    /// Width of the canonical element encoding.
    const ELEMENT_BYTES: usize;

    fn generator() -> Self::Element;
    fn identity() -> Self::Element;
    fn is_identity(e: &Self::Element) -> bool;

    /// Group law.
    fn op(a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn square(a: &Self::Element) -> Self::Element {
        Self::op(a, a)
    }
    fn inverse(a: &Self::Element) -> Self::Element;

    fn exp(base: &Self::Element, e: &Self::Scalar) -> Self::Element;

    fn exp_generator(e: &Self::Scalar) -> Self::Element {
        Self::exp(&Self::generator(), e)
    }

    /// `prod base_i^{e_i}`.
    fn multi_exp(terms: &[(Self::Element, Self::Scalar)]) -> Self::Element {
        terms
            .iter()
            .fold(Self::identity(), |acc, (b, e)| Self::op(&acc, &Self::exp(b, e)))
    }

    /// Appends exactly [`Self::ELEMENT_BYTES`] bytes.
    fn write_element(e: &Self::Element, out: &mut Vec<u8>);

    fn read_element(bytes: &[u8]) -> Result<Self::Element>;

    fn context() -> GroupContext {
        let order = <Self::Scalar as PrimeField>::modulus();
        let mut generator = Vec::with_capacity(Self::ELEMENT_BYTES);
        Self::write_element(&Self::generator(), &mut generator);
        GroupContext {
            group_id: Self::ID,
            security_lambda: (&order - 1u32).bits() as u32,
            order,
            generator,
            element_bytes: Self::ELEMENT_BYTES,
            scalar_bytes: <Self::Scalar as PrimeField>::BYTES,
        }
    }
}

/// Short-Weierstrass curve groups with access to affine coordinates.
pub trait CurveGroup: Group {
    /// Modulus of the coordinate field.
    fn base_modulus() -> BigUint;

    /// Affine x-coordinate, `None` for the identity.
    fn x_coordinate(e: &Self::Element) -> Option<BigUint>;

    /// The point with abscissa `x` and the smaller of the two ordinates
    /// (`y ≤ q − y`), or `None` when `x` is not the abscissa of a curve point.
    fn lift_x(x: &BigUint) -> Option<Self::Element>;
}

pub fn scalar_inverse<F: PrimeField>(a: &F) -> Result<F> {
    a.invert().ok_or(Error::InvalidScalar)
}

pub fn group_exp<G: Group>(base: &G::Element, e: &G::Scalar) -> G::Element {
    G::exp(base, e)
}

pub fn group_mul<G: Group>(a: &G::Element, b: &G::Element) -> G::Element {
    G::op(a, b)
}

/// `g^k` for a uniform nonzero `k`; always a generator since the order is prime.
pub fn random_generator<G: Group, R: RngCore + ?Sized>(rng: &mut R) -> G::Element {
    let k: G::Scalar = random_nonzero(rng);
    G::exp_generator(&k)
}

pub fn serialize_element<G: Group>(e: &G::Element) -> Vec<u8> {
    let mut out = Vec::with_capacity(G::ELEMENT_BYTES);
    G::write_element(e, &mut out);
    out
}

pub fn deserialize_element<G: Group>(bytes: &[u8]) -> Result<G::Element> {
    if bytes.len() != G::ELEMENT_BYTES {
        return Err(Error::decode(format!(
            "element encoding must be {} bytes, got {}",
            G::ELEMENT_BYTES,
            bytes.len()
        )));
    }
    G::read_element(bytes)
}

/// Precomputed multiples `j·16^i·B` of a fixed base `B` (4-bit comb), so
/// that an exponentiation costs one group operation per nonzero nibble.
pub struct FixedBaseTable<G: Group> {
    table: Vec<G::Element>,
}

impl<G: Group> fmt::Debug for FixedBaseTable<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FixedBaseTable").field("entries", &self.table.len()).finish()
    }
}

impl<G: Group> FixedBaseTable<G> {
    pub fn new(base: &G::Element) -> Self {
        let windows = 2 * <G::Scalar as PrimeField>::BYTES;
        let mut table = Vec::with_capacity(windows * 16);
        let mut cur = *base;
        for _ in 0..windows {
            let start = table.len();
            table.push(G::identity());
            table.push(cur);
            for j in 2..16 {
                let next = G::op(&table[start + j - 1], &cur);
                table.push(next);
            }
            cur = G::op(&table[start + 15], &cur);
        }
        FixedBaseTable { table }
    }

    /// Multiplies `acc` by `base^e`.
    pub fn accumulate(&self, acc: &mut G::Element, e: &G::Scalar) {
        let mut buf = [0u8; 64];
        let n = <G::Scalar as PrimeField>::BYTES;
        e.write_be(&mut buf[..n]);
        for (i, byte) in buf[..n].iter().rev().enumerate() {
            for (k, nibble) in [(2 * i, byte & 0x0f), (2 * i + 1, byte >> 4)] {
                if nibble != 0 {
                    *acc = G::op(acc, &self.table[k * 16 + nibble as usize]);
                }
            }
        }
    }

    pub fn exp(&self, e: &G::Scalar) -> G::Element {
        let mut acc = G::identity();
        self.accumulate(&mut acc, e);
        acc
    }
}

/// Fixed-window Straus evaluation shared by the curve backends.
pub(crate) fn straus<E: Copy>(
    terms: &[(E, Vec<u8>)],
    identity: E,
    add: impl Fn(&E, &E) -> E,
    double: impl Fn(&E) -> E,
) -> E {
    // terms carry big-endian scalar bytes of equal width
    let tables: Vec<[E; 16]> = terms
        .iter()
        .map(|(base, _)| {
            let mut t = [identity; 16];
            for i in 1..16 {
                t[i] = add(&t[i - 1], base);
            }
            t
        })
        .collect();
    let width = terms.first().map_or(0, |(_, s)| s.len());
    let mut acc = identity;
    let mut started = false;
    for byte_idx in 0..width {
        for shift in [4u32, 0] {
            if started {
                for _ in 0..4 {
                    acc = double(&acc);
                }
            }
            for (table, (_, scalar)) in tables.iter().zip(terms) {
                let nibble = (scalar[byte_idx] >> shift) & 0x0f;
                if nibble != 0 {
                    acc = add(&acc, &table[nibble as usize]);
                    started = true;
                }
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn laws<G: Group>(seed: u64) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let g = G::generator();
        let id = G::identity();
        assert!(G::is_identity(&G::exp(&g, &G::Scalar::zero())));
        let e = G::Scalar::random(&mut rng);
        assert!(G::is_identity(&G::exp(&id, &e)));
        assert_eq!(G::op(&g, &id), g);

        let g2 = G::exp(&g, &G::Scalar::from_u64(2));
        let g3 = G::exp(&g, &G::Scalar::from_u64(3));
        assert_eq!(G::op(&g2, &g3), G::exp(&g, &G::Scalar::from_u64(5)));

        let a = G::Scalar::random(&mut rng);
        let b = G::Scalar::random(&mut rng);
        assert_eq!(G::op(&G::exp(&g, &a), &G::exp(&g, &b)), G::exp(&g, &(a + b)));
        assert_eq!(G::exp_generator(&a), G::exp(&g, &a));

        // exponent q0 - 1 is the inverse of g
        let minus_one = -G::Scalar::one();
        assert_eq!(G::exp(&g, &minus_one), G::inverse(&g));
        assert!(G::is_identity(&G::op(&G::exp(&g, &minus_one), &g)));

        // (g^a)^{1/a} = g
        let a: G::Scalar = random_nonzero(&mut rng);
        let ga = G::exp(&g, &a);
        assert_eq!(G::exp(&ga, &scalar_inverse(&a).unwrap()), g);

        // h = g_d^{-r_inv}; h^r * g_d = identity
        let gd = random_generator::<G, _>(&mut rng);
        let r: G::Scalar = random_nonzero(&mut rng);
        let h = G::exp(&gd, &-scalar_inverse(&r).unwrap());
        assert!(G::is_identity(&G::op(&G::exp(&h, &r), &gd)));

        // multi-exponentiation agrees with the naive product
        let terms: Vec<_> = (0..3)
            .map(|_| (random_generator::<G, _>(&mut rng), G::Scalar::random(&mut rng)))
            .collect();
        let naive = terms
            .iter()
            .fold(id, |acc, (b, e)| G::op(&acc, &G::exp(b, e)));
        assert_eq!(G::multi_exp(&terms), naive);
        assert!(G::is_identity(&G::multi_exp(&[])));

        let table = FixedBaseTable::<G>::new(&terms[0].0);
        assert_eq!(table.exp(&terms[0].1), G::exp(&terms[0].0, &terms[0].1));
        assert_eq!(table.exp(&minus_one), G::inverse(&terms[0].0));
        assert!(G::is_identity(&table.exp(&G::Scalar::zero())));

        // product of shuffled elements
        let elems: Vec<_> = (0..6).map(|_| random_generator::<G, _>(&mut rng)).collect();
        let fwd = elems.iter().fold(id, |acc, e| G::op(&acc, e));
        let rev = elems.iter().rev().fold(id, |acc, e| G::op(&acc, e));
        assert_eq!(fwd, rev);
    }

    fn serialization<G: Group>(seed: u64) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let id_bytes = serialize_element::<G>(&G::identity());
        assert_eq!(id_bytes, vec![0u8; G::ELEMENT_BYTES]);
        assert!(G::is_identity(&deserialize_element::<G>(&id_bytes).unwrap()));
        for _ in 0..32 {
            let x = random_generator::<G, _>(&mut rng);
            let bytes = serialize_element::<G>(&x);
            assert_eq!(bytes.len(), G::ELEMENT_BYTES);
            assert_eq!(deserialize_element::<G>(&bytes).unwrap(), x);
        }

        let good = serialize_element::<G>(&G::generator());
        assert!(matches!(
            deserialize_element::<G>(&good[..good.len() - 1]),
            Err(Error::Decode(_))
        ));
        let mut bad_tag = good.clone();
        bad_tag[0] = 0x05;
        assert!(deserialize_element::<G>(&bad_tag).is_err());
        let mut bad_x = good.clone();
        for b in bad_x[1..].iter_mut() {
            *b = 0xff;
        }
        assert!(deserialize_element::<G>(&bad_x).is_err());
        let mut nonzero_identity = id_bytes.clone();
        *nonzero_identity.last_mut().unwrap() = 1;
        assert!(deserialize_element::<G>(&nonzero_identity).is_err());
    }

    #[test]
    fn p256_group_laws() {
        laws::<P256>(1);
    }

    #[test]
    fn test_curve_group_laws() {
        laws::<TestCurve>(2);
    }

    #[test]
    fn p256_serialization() {
        serialization::<P256>(3);
    }

    #[test]
    fn test_curve_serialization() {
        serialization::<TestCurve>(4);
    }

    #[test]
    fn random_generators_are_distinct() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..1000 {
            let e = random_generator::<P256, _>(&mut rng);
            assert!(!P256::is_identity(&e));
            assert!(seen.insert(serialize_element::<P256>(&e)));
        }
    }

    #[test]
    fn contexts() {
        let ctx = P256::context();
        assert_eq!(ctx.security_lambda, 256);
        assert_eq!(ctx.element_bytes, 33);
        assert_eq!(ctx.scalar_bytes, 32);
        assert_eq!(ctx.generator[0], 0x03);
        let ctx = TestCurve::context();
        assert_eq!(ctx.security_lambda, 63);
        assert_eq!(ctx.element_bytes, 9);
        assert_eq!(GroupId::from_u8(2).unwrap(), GroupId::TestCurve);
        assert!(GroupId::from_u8(9).is_err());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(
            scalar_inverse(&<P256 as Group>::Scalar::zero()),
            Err(Error::InvalidScalar)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn p256_roundtrip(seed in any::<u64>()) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let x = random_generator::<P256, _>(&mut rng);
            prop_assert_eq!(deserialize_element::<P256>(&serialize_element::<P256>(&x)).unwrap(), x);
        }
    }
}
