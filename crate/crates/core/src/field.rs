//! Prime fields used as scalar fields of the DDH groups and as share spaces
//! of the information-theoretic sub-schemes.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigUint;
use rand_core::RngCore;

/// A prime field `F_q` with a fixed-width canonical big-endian encoding.
pub trait PrimeField:
    Copy
    + Eq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Width in bytes of the canonical encoding.
    const BYTES: usize;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn is_zero(&self) -> bool;

    /// Multiplicative inverse, `None` for zero.
    fn invert(&self) -> Option<Self>;

    /// Uniform sample.
    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self;

    /// Interprets 64 bytes as a big-endian integer and reduces it modulo `q`.
    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self;

    /// Writes exactly [`Self::BYTES`] big-endian bytes into `out`.
    fn write_be(&self, out: &mut [u8]);

    /// Parses a canonical encoding (value strictly below the modulus).
    fn read_be(bytes: &[u8]) -> Option<Self>;

    fn modulus() -> BigUint;

    fn to_biguint(&self) -> BigUint {
        let mut buf = vec![0u8; Self::BYTES];
        self.write_be(&mut buf);
        BigUint::from_bytes_be(&buf)
    }

    fn modulus_bits() -> u32 {
        Self::modulus().bits() as u32
    }
}

/// Uniform nonzero sample.
pub fn random_nonzero<F: PrimeField, R: RngCore + ?Sized>(rng: &mut R) -> F {
    loop {
        let v = F::random(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Prime field with an odd modulus `Q < 2^63`, elements held in Montgomery form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp64<const Q: u64>(u64);

impl<const Q: u64> Fp64<Q> {
    const CHECK: () = assert!(Q > 2 && Q % 2 == 1 && Q < (1 << 63), "unsupported modulus");

    // -Q^{-1} mod 2^64
    const NINV: u64 = {
        let mut inv: u64 = 1;
        let mut i = 0;
        while i < 6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(Q.wrapping_mul(inv)));
            i += 1;
        }
        inv.wrapping_neg()
    };

    // 2^128 mod Q
    const R2: u64 = {
        let r = ((1u128 << 64) % Q as u128) as u64;
        ((r as u128 * r as u128) % Q as u128) as u64
    };

    pub const MODULUS: u64 = Q;
    pub const ZERO: Self = Fp64(0);
    // Montgomery form of one is 2^64 mod Q
    pub const ONE: Self = Fp64(((1u128 << 64) % Q as u128) as u64);

    #[inline(always)]
    fn redc(t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(Self::NINV);
        let u = ((t + m as u128 * Q as u128) >> 64) as u64;
        if u >= Q {
            u - Q
        } else {
            u
        }
    }

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Fp64(Self::redc((v % Q) as u128 * Self::R2 as u128))
    }

    /// Canonical integer representative in `[0, Q)`.
    pub fn value(&self) -> u64 {
        Self::redc(self.0 as u128)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl<const Q: u64> fmt::Debug for Fp64<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl<const Q: u64> fmt::Display for Fp64<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl<const Q: u64> Add for Fp64<Q> {
    type Output = Self;
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        // operands < Q < 2^63, so the sum cannot overflow
        let s = self.0 + rhs.0;
        Fp64(if s >= Q { s - Q } else { s })
    }
}

impl<const Q: u64> Sub for Fp64<Q> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, rhs: Self) -> Self {
        Fp64(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + Q - rhs.0
        })
    }
}

impl<const Q: u64> Mul for Fp64<Q> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, rhs: Self) -> Self {
        Fp64(Self::redc(self.0 as u128 * rhs.0 as u128))
    }
}

impl<const Q: u64> Neg for Fp64<Q> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        Fp64(if self.0 == 0 { 0 } else { Q - self.0 })
    }
}

impl<const Q: u64> AddAssign for Fp64<Q> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const Q: u64> SubAssign for Fp64<Q> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const Q: u64> MulAssign for Fp64<Q> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const Q: u64> PrimeField for Fp64<Q> {
    const BYTES: usize = 8;

    fn zero() -> Self {
        Fp64(0)
    }

    fn one() -> Self {
        Self::new(1)
    }

    fn from_u64(v: u64) -> Self {
        Self::new(v)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn invert(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(Q - 2))
        }
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        // rejection sampling below the largest multiple of Q
        let zone = u64::MAX - (u64::MAX % Q);
        loop {
            let v = rng.next_u64();
            if v < zone {
                return Self::new(v % Q);
            }
        }
    }

    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self {
        let mut acc: u128 = 0;
        for chunk in bytes.chunks_exact(8) {
            let limb = u64::from_be_bytes(chunk.try_into().unwrap());
            acc = ((acc << 64) | limb as u128) % Q as u128;
        }
        Self::new(acc as u64)
    }

    fn write_be(&self, out: &mut [u8]) {
        out[..8].copy_from_slice(&self.value().to_be_bytes());
    }

    fn read_be(bytes: &[u8]) -> Option<Self> {
        let v = u64::from_be_bytes(bytes.get(..8)?.try_into().ok()?);
        (v < Q).then(|| Self::new(v))
    }

    fn modulus() -> BigUint {
        BigUint::from(Q)
    }
}

mod p256_scalar {
    use super::*;
    use p256::elliptic_curve::ops::Reduce;
    use p256::elliptic_curve::{Field, PrimeField as _};
    use p256::{FieldBytes, Scalar};

    fn field_bytes(bytes: &[u8]) -> FieldBytes {
        let mut out = FieldBytes::default();
        out.copy_from_slice(bytes);
        out
    }

    const ORDER_HEX: &str = "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551";

    impl PrimeField for Scalar {
        const BYTES: usize = 32;

        fn zero() -> Self {
            Scalar::ZERO
        }

        fn one() -> Self {
            Scalar::ONE
        }

        fn from_u64(v: u64) -> Self {
            Scalar::from(v)
        }

        fn is_zero(&self) -> bool {
            bool::from(Field::is_zero(self))
        }

        fn invert(&self) -> Option<Self> {
            Option::from(Field::invert(self))
        }

        fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
            <Scalar as Field>::random(rng)
        }

        fn from_uniform_bytes(bytes: &[u8; 64]) -> Self {
            // value = hi * 2^256 + lo; each half is below 2n, so a single
            // conditional subtraction reduces it exactly.
            let hi = <Scalar as Reduce<p256::U256>>::reduce_bytes(&field_bytes(&bytes[..32]));
            let lo = <Scalar as Reduce<p256::U256>>::reduce_bytes(&field_bytes(&bytes[32..]));
            let two128 = Scalar::from(u128::MAX) + Scalar::ONE;
            hi * two128 * two128 + lo
        }

        fn write_be(&self, out: &mut [u8]) {
            out[..32].copy_from_slice(&self.to_repr());
        }

        fn read_be(bytes: &[u8]) -> Option<Self> {
            let bytes = bytes.get(..32)?;
            Option::from(Scalar::from_repr(field_bytes(bytes)))
        }

        fn modulus() -> BigUint {
            BigUint::parse_bytes(ORDER_HEX.as_bytes(), 16).unwrap()
        }
    }
}

/// The five-element field used by exhaustive enumeration tests.
pub type F5 = Fp64<5>;
/// The eleven-element field.
pub type F11 = Fp64<11>;
