use num_bigint::BigUint;
use p256::elliptic_curve::group::Group as _;
use p256::elliptic_curve::point::{AffineCoordinates, DecompressPoint};
use p256::elliptic_curve::sec1::{FromEncodedPoint, ToEncodedPoint};
use p256::elliptic_curve::subtle::Choice;
use p256::elliptic_curve::PrimeField as _;
use p256::{AffinePoint, EncodedPoint, FieldBytes, ProjectivePoint, Scalar};

use super::{straus, CurveGroup, Group, GroupId};
use crate::error::{Error, Result};

const FIELD_MODULUS_HEX: &str = "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff";

/// The NIST P-256 prime-order curve group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct P256;

fn write_affine(p: &AffinePoint, out: &mut Vec<u8>) {
    let encoded = p.to_encoded_point(true);
    if encoded.is_identity() {
        out.extend_from_slice(&[0u8; 33]);
    } else {
        out.extend_from_slice(encoded.as_bytes());
    }
}

impl Group for P256 {
    type Scalar = Scalar;
    type Element = ProjectivePoint;

    const ID: GroupId = GroupId::P256;
    const ELEMENT_BYTES: usize = 33;

    fn generator() -> ProjectivePoint {
        ProjectivePoint::GENERATOR
    }

    fn identity() -> ProjectivePoint {
        ProjectivePoint::IDENTITY
    }

    fn is_identity(e: &ProjectivePoint) -> bool {
        bool::from(e.is_identity())
    }

    fn op(a: &ProjectivePoint, b: &ProjectivePoint) -> ProjectivePoint {
        a + b
    }

    fn square(a: &ProjectivePoint) -> ProjectivePoint {
        a.double()
    }

    fn inverse(a: &ProjectivePoint) -> ProjectivePoint {
        -a
    }

    fn exp(base: &ProjectivePoint, e: &Scalar) -> ProjectivePoint {
        base * e
    }

    fn multi_exp(terms: &[(ProjectivePoint, Scalar)]) -> ProjectivePoint {
        let terms: Vec<_> = terms
            .iter()
            .map(|(b, e)| (*b, e.to_repr().to_vec()))
            .collect();
        straus(&terms, ProjectivePoint::IDENTITY, |a, b| a + b, |a| a.double())
    }

    fn write_element(e: &ProjectivePoint, out: &mut Vec<u8>) {
        write_affine(&e.to_affine(), out);
    }

    fn read_element(bytes: &[u8]) -> Result<ProjectivePoint> {
        if bytes.len() != Self::ELEMENT_BYTES {
            return Err(Error::decode("P-256 element must be 33 bytes"));
        }
        match bytes[0] {
            0x00 if bytes[1..].iter().all(|&b| b == 0) => Ok(ProjectivePoint::IDENTITY),
            0x02 | 0x03 => {
                let encoded = EncodedPoint::from_bytes(bytes)
                    .map_err(|_| Error::decode("malformed SEC1 encoding"))?;
                Option::<AffinePoint>::from(AffinePoint::from_encoded_point(&encoded))
                    .map(ProjectivePoint::from)
                    .ok_or_else(|| Error::decode("bytes do not encode a P-256 point"))
            }
            _ => Err(Error::decode("non-canonical P-256 element encoding")),
        }
    }
}

impl CurveGroup for P256 {
    fn base_modulus() -> BigUint {
        BigUint::parse_bytes(FIELD_MODULUS_HEX.as_bytes(), 16).unwrap()
    }

    fn x_coordinate(e: &ProjectivePoint) -> Option<BigUint> {
        if Self::is_identity(e) {
            return None;
        }
        Some(BigUint::from_bytes_be(&e.to_affine().x()))
    }

    fn lift_x(x: &BigUint) -> Option<ProjectivePoint> {
        if x >= &Self::base_modulus() {
            return None;
        }
        let raw = x.to_bytes_be();
        let mut bytes = FieldBytes::default();
        bytes[32 - raw.len()..].copy_from_slice(&raw);
        let point = Option::<AffinePoint>::from(AffinePoint::decompress(&bytes, Choice::from(0)))?;
        let y = BigUint::from_bytes_be(point.to_encoded_point(false).y()?);
        let point = ProjectivePoint::from(point);
        Some(if &y + &y > Self::base_modulus() { -point } else { point })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_x_picks_the_smaller_ordinate() {
        let q = P256::base_modulus();
        let mut e = P256::generator();
        for _ in 0..20 {
            let x = P256::x_coordinate(&e).unwrap();
            let lifted = P256::lift_x(&x).unwrap();
            assert!(lifted == e || lifted == -e);
            let y = BigUint::from_bytes_be(lifted.to_affine().to_encoded_point(false).y().unwrap());
            assert!(&y + &y < q);
            e = P256::op(&e, &e);
        }
    }
}
