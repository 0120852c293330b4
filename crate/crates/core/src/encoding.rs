//! Encodings of small integers into the group.
//!
//! [`ExponentCodec`] maps `β ↦ β·P` and decodes with baby-step giant-step; it
//! is additively homomorphic. [`PointCodec`] embeds `β` in the x-coordinate
//! and only survives products with the identity.

use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::group::{CurveGroup, Group};

pub const DEFAULT_BOUND: u64 = 1 << 20;
pub const DEFAULT_PADDING: u32 = 1 << 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Exponent,
    Point,
}

impl EncodingKind {
    pub fn tag(self) -> u8 {
        match self {
            EncodingKind::Exponent => 1,
            EncodingKind::Point => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(EncodingKind::Exponent),
            2 => Ok(EncodingKind::Point),
            t => Err(Error::decode(format!("unknown encoding tag {t}"))),
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingKind::Exponent => "exponent",
            EncodingKind::Point => "point",
        })
    }
}

impl FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponent" => Ok(EncodingKind::Exponent),
            "point" => Ok(EncodingKind::Point),
            _ => Err(Error::InvalidParameters(format!("unknown encoding {s:?}"))),
        }
    }
}

/// Exponent encoding with a bounded discrete-log decoder.
pub struct ExponentCodec<G: Group> {
    bound: u64,
    step: u64,
    baby: HashMap<Vec<u8>, u64>,
    giant: G::Element,
}

impl<G: Group> fmt::Debug for ExponentCodec<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentCodec")
            .field("group", &G::ID)
            .field("bound", &self.bound)
            .field("step", &self.step)
            .finish()
    }
}

fn element_key<G: Group>(e: &G::Element) -> Vec<u8> {
    let mut out = Vec::with_capacity(G::ELEMENT_BYTES);
    G::write_element(e, &mut out);
    out
}

impl<G: Group> ExponentCodec<G> {
    /// Builds the `⌈√B⌉`-entry baby-step table.
    pub fn new(bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidParameters("bound must be positive".into()));
        }
        let step = crate::subfss::ceil_sqrt(bound);
        let g = G::generator();
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = G::identity();
        for i in 0..step {
            baby.insert(element_key::<G>(&cur), i);
            cur = G::op(&cur, &g);
        }
        // cur = step·P
        Ok(ExponentCodec { bound, step, baby, giant: G::inverse(&cur) })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn encode(&self, beta: u64) -> Result<G::Element> {
        if beta >= self.bound {
            return Err(Error::Range { value: beta, bound: self.bound });
        }
        Ok(G::exp_generator(&G::Scalar::from_u64(beta)))
    }

    pub fn decode(&self, e: &G::Element) -> Result<u64> {
        self.decode_counted(e).0
    }

    /// Decodes and reports the number of group operations spent.
    pub fn decode_counted(&self, e: &G::Element) -> (Result<u64>, u64) {
        let mut ops = 0;
        let mut cur = *e;
        for j in 0..self.step {
            if let Some(&i) = self.baby.get(&element_key::<G>(&cur)) {
                let beta = j * self.step + i;
                return if beta < self.bound {
                    (Ok(beta), ops)
                } else {
                    (Err(Error::OutOfRange(self.bound)), ops)
                };
            }
            cur = G::op(&cur, &self.giant);
            ops += 1;
        }
        (Err(Error::OutOfRange(self.bound)), ops)
    }
}

/// Counter-padded x-coordinate embedding: `x = β·k + c` for the least `c`.
#[derive(Clone, Copy)]
pub struct PointCodec<G> {
    padding: u32,
    _group: PhantomData<G>,
}

impl<G> fmt::Debug for PointCodec<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointCodec").field("padding", &self.padding).finish()
    }
}

impl<G: CurveGroup> Default for PointCodec<G> {
    fn default() -> Self {
        Self::new(DEFAULT_PADDING)
    }
}

impl<G: CurveGroup> PointCodec<G> {
    pub fn new(padding: u32) -> Self {
        assert!(padding > 0, "padding must be positive");
        PointCodec { padding, _group: PhantomData }
    }

    pub fn padding(&self) -> u32 {
        self.padding
    }

    /// Largest encodable value plus one.
    pub fn capacity(&self) -> BigUint {
        G::base_modulus() / self.padding
    }

    pub fn encode(&self, beta: u64) -> Result<G::Element> {
        if beta == 0 {
            return Ok(G::identity());
        }
        let beta_big = BigUint::from(beta);
        let capacity = self.capacity();
        if beta_big >= capacity {
            let bound = u64::try_from(&capacity).unwrap_or(u64::MAX);
            return Err(Error::Range { value: beta, bound });
        }
        let base = beta_big * self.padding;
        (0..self.padding)
            .find_map(|c| G::lift_x(&(&base + c)))
            .ok_or(Error::EncodingFailure(beta))
    }

    /// `⌊x / k⌋`, or 0 for the identity. Any point decodes to something.
    pub fn decode(&self, e: &G::Element) -> BigUint {
        G::x_coordinate(e).map_or_else(BigUint::default, |x| x / self.padding)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{TestCurve, P256};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn exponent_basics() {
        let codec = ExponentCodec::<TestCurve>::new(DEFAULT_BOUND).unwrap();
        assert!(TestCurve::is_identity(&codec.encode(0).unwrap()));
        assert_eq!(codec.encode(1).unwrap(), TestCurve::generator());
        let sum = TestCurve::op(&codec.encode(2).unwrap(), &codec.encode(3).unwrap());
        assert_eq!(sum, codec.encode(5).unwrap());
        assert_eq!(codec.decode(&sum), Ok(5));
        assert_eq!(codec.decode(&TestCurve::identity()), Ok(0));
        assert_eq!(codec.encode(DEFAULT_BOUND), Err(Error::Range { value: DEFAULT_BOUND, bound: DEFAULT_BOUND }));
        let at_bound = TestCurve::exp_generator(&PrimeField::from_u64(DEFAULT_BOUND));
        assert_eq!(codec.decode(&at_bound), Err(Error::OutOfRange(DEFAULT_BOUND)));
    }

    #[test]
    fn exponent_non_square_bound() {
        let codec = ExponentCodec::<TestCurve>::new(1000).unwrap();
        assert_eq!(codec.decode(&codec.encode(999).unwrap()), Ok(999));
        let e = TestCurve::exp_generator(&PrimeField::from_u64(1000));
        assert_eq!(codec.decode(&e), Err(Error::OutOfRange(1000)));
    }

    #[test]
    fn exponent_round_trip_p256() {
        let codec = ExponentCodec::<P256>::new(1 << 12).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..20 {
            let beta = rng.gen_range(0..1 << 12);
            let (res, ops) = codec.decode_counted(&codec.encode(beta).unwrap());
            assert_eq!(res, Ok(beta));
            assert!(ops <= 2 * 64 + 1);
        }
    }

    fn point_round_trip<G: CurveGroup>(max: u64) {
        let codec = PointCodec::<G>::default();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        assert!(G::is_identity(&codec.encode(0).unwrap()));
        assert_eq!(codec.decode(&G::identity()), BigUint::default());
        for _ in 0..50 {
            let beta = rng.gen_range(1..max);
            let e = codec.encode(beta).unwrap();
            assert_eq!(codec.decode(&e), BigUint::from(beta));
            assert_eq!(codec.decode(&G::op(&e, &G::identity())), BigUint::from(beta));
            assert_eq!(G::lift_x(&G::x_coordinate(&e).unwrap()), Some(e));
        }
    }

    #[test]
    fn point_round_trips() {
        point_round_trip::<P256>(u64::MAX);
        point_round_trip::<TestCurve>(1 << 50);
    }

    #[test]
    fn point_range() {
        let codec = PointCodec::<TestCurve>::default();
        assert!(matches!(codec.encode(u64::MAX), Err(Error::Range { .. })));
    }
}
