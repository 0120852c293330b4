use num_bigint::BigUint;

use super::{straus, CurveGroup, Group, GroupId};
use crate::error::{Error, Result};
use crate::field::{Fp64, PrimeField};

// y^2 = x^3 + 14 over F_p, prime order n, generator with x = 2.
const P: u64 = 0x3fff_ffff_ffff_fcd3;
const ORDER: u64 = 0x4000_0000_f61b_2f8b;
const B: u64 = 14;
const GEN_X: u64 = 2;
const GEN_Y: u64 = 1_458_414_052_859_691_024;

type Fe = Fp64<P>;
/// Scalar field of [`TestCurve`].
pub type TestScalar = Fp64<ORDER>;

/// Small prime-order curve `y^2 = x^3 + 14` over a 62-bit prime field.
///
/// Shares all generic code paths with [`super::P256`] but is only ~62 bits
/// strong; use it for tests and exhaustive sweeps, never for real keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TestCurve;

/// Projective point `(X : Y : Z)`; the identity is `(0 : 1 : 0)`.
#[derive(Debug, Clone, Copy)]
pub struct TestCurvePoint {
    x: Fe,
    y: Fe,
    z: Fe,
}

impl PartialEq for TestCurvePoint {
    fn eq(&self, other: &Self) -> bool {
        self.x * other.z == other.x * self.z && self.y * other.z == other.y * self.z
    }
}

impl Eq for TestCurvePoint {}

fn b3() -> Fe {
    Fe::new(3 * B)
}

impl TestCurvePoint {
    const IDENTITY: Self = TestCurvePoint {
        x: Fe::ZERO,
        y: Fe::ONE,
        z: Fe::ZERO,
    };

    fn from_affine(x: Fe, y: Fe) -> Self {
        TestCurvePoint { x, y, z: Fe::one() }
    }

    fn is_identity(&self) -> bool {
        self.z.is_zero()
    }

    fn to_affine(self) -> Option<(Fe, Fe)> {
        let zinv = self.z.invert()?;
        Some((self.x * zinv, self.y * zinv))
    }

    // Complete addition for a = 0 (Renes-Costello-Batina, algorithm 7).
    fn add(&self, o: &Self) -> Self {
        let b3 = b3();
        let (x1, y1, z1) = (self.x, self.y, self.z);
        let (x2, y2, z2) = (o.x, o.y, o.z);
        let mut t0 = x1 * x2;
        let mut t1 = y1 * y2;
        let mut t2 = z1 * z2;
        let mut t3 = x1 + y1;
        let mut t4 = x2 + y2;
        t3 *= t4;
        t4 = t0 + t1;
        t3 -= t4;
        t4 = y1 + z1;
        let mut x3 = y2 + z2;
        t4 *= x3;
        x3 = t1 + t2;
        t4 -= x3;
        x3 = x1 + z1;
        let mut y3 = x2 + z2;
        x3 *= y3;
        y3 = t0 + t2;
        y3 = x3 - y3;
        x3 = t0 + t0;
        t0 += x3;
        t2 *= b3;
        let mut z3 = t1 + t2;
        t1 -= t2;
        y3 *= b3;
        x3 = t4 * y3;
        t2 = t3 * t1;
        x3 = t2 - x3;
        y3 *= t0;
        t1 *= z3;
        y3 = t1 + y3;
        t0 *= t3;
        z3 *= t4;
        z3 += t0;
        TestCurvePoint { x: x3, y: y3, z: z3 }
    }

    // Complete doubling for a = 0 (algorithm 9).
    fn double(&self) -> Self {
        let b3 = b3();
        let (x, y, z) = (self.x, self.y, self.z);
        let mut t0 = y * y;
        let mut z3 = t0 + t0;
        z3 += z3;
        z3 += z3;
        let mut t1 = y * z;
        let mut t2 = z * z;
        t2 *= b3;
        let mut x3 = t2 * z3;
        let mut y3 = t0 + t2;
        z3 *= t1;
        t1 = t2 + t2;
        t2 += t1;
        t0 -= t2;
        y3 *= t0;
        y3 += x3;
        t1 = x * y;
        x3 = t0 * t1;
        x3 += x3;
        TestCurvePoint { x: x3, y: y3, z: z3 }
    }

    fn neg(&self) -> Self {
        TestCurvePoint { x: self.x, y: -self.y, z: self.z }
    }

    fn mul(&self, k: u64) -> Self {
        straus(
            &[(*self, k.to_be_bytes().to_vec())],
            Self::IDENTITY,
            Self::add,
            Self::double,
        )
    }
}

fn sqrt(a: Fe) -> Option<Fe> {
    // p = 3 mod 4
    let r = a.pow((P + 1) / 4);
    (r * r == a).then_some(r)
}

fn curve_rhs(x: Fe) -> Fe {
    x * x * x + Fe::new(B)
}

impl Group for TestCurve {
    type Scalar = TestScalar;
    type Element = TestCurvePoint;

    const ID: GroupId = GroupId::TestCurve;
    const ELEMENT_BYTES: usize = 9;

    fn generator() -> TestCurvePoint {
        TestCurvePoint::from_affine(Fe::new(GEN_X), Fe::new(GEN_Y))
    }

    fn identity() -> TestCurvePoint {
        TestCurvePoint::IDENTITY
    }

    fn is_identity(e: &TestCurvePoint) -> bool {
        e.is_identity()
    }

    fn op(a: &TestCurvePoint, b: &TestCurvePoint) -> TestCurvePoint {
        a.add(b)
    }

    fn square(a: &TestCurvePoint) -> TestCurvePoint {
        a.double()
    }

    fn inverse(a: &TestCurvePoint) -> TestCurvePoint {
        a.neg()
    }

    fn exp(base: &TestCurvePoint, e: &TestScalar) -> TestCurvePoint {
        base.mul(e.value())
    }

    fn multi_exp(terms: &[(TestCurvePoint, TestScalar)]) -> TestCurvePoint {
        let terms: Vec<_> = terms
            .iter()
            .map(|(b, e)| (*b, e.value().to_be_bytes().to_vec()))
            .collect();
        straus(&terms, TestCurvePoint::IDENTITY, TestCurvePoint::add, TestCurvePoint::double)
    }

    fn write_element(e: &TestCurvePoint, out: &mut Vec<u8>) {
        match e.to_affine() {
            None => out.extend_from_slice(&[0u8; 9]),
            Some((x, y)) => {
                out.push(if y.value() & 1 == 1 { 0x03 } else { 0x02 });
                out.extend_from_slice(&x.value().to_be_bytes());
            }
        }
    }

    fn read_element(bytes: &[u8]) -> Result<TestCurvePoint> {
        if bytes.len() != Self::ELEMENT_BYTES {
            return Err(Error::decode("test-curve element must be 9 bytes"));
        }
        let x = u64::from_be_bytes(bytes[1..].try_into().unwrap());
        match bytes[0] {
            0x00 if x == 0 => Ok(TestCurvePoint::IDENTITY),
            tag @ (0x02 | 0x03) => {
                if x >= P {
                    return Err(Error::decode("non-canonical x-coordinate"));
                }
                let x = Fe::new(x);
                let mut y = sqrt(curve_rhs(x)).ok_or_else(|| Error::decode("x not on curve"))?;
                if (y.value() & 1) != (tag & 1) as u64 {
                    y = -y;
                }
                Ok(TestCurvePoint::from_affine(x, y))
            }
            _ => Err(Error::decode("non-canonical test-curve element encoding")),
        }
    }
}

impl CurveGroup for TestCurve {
    fn base_modulus() -> BigUint {
        BigUint::from(P)
    }

    fn x_coordinate(e: &TestCurvePoint) -> Option<BigUint> {
        e.to_affine().map(|(x, _)| BigUint::from(x.value()))
    }

    fn lift_x(x: &BigUint) -> Option<TestCurvePoint> {
        let x: u64 = x.try_into().ok()?;
        if x >= P {
            return None;
        }
        let x = Fe::new(x);
        let mut y = sqrt(curve_rhs(x))?;
        if y.value() > P - y.value() {
            y = -y;
        }
        Some(TestCurvePoint::from_affine(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine(e: &TestCurvePoint) -> (u64, u64) {
        let (x, y) = e.to_affine().unwrap();
        (x.value(), y.value())
    }

    #[test]
    fn generator_on_curve() {
        let (x, y) = (Fe::new(GEN_X), Fe::new(GEN_Y));
        assert_eq!(y * y, curve_rhs(x));
    }

    #[test]
    fn known_multiples() {
        // reference values from an independent affine implementation
        let g = TestCurve::generator();
        let cases = [
            (2u64, (1257732550480196477u64, 2640231870729511514u64)),
            (5, (2989732538120139567, 1760672217927495625)),
            (123456789, (1577450173302391830, 3802198066883541768)),
            (ORDER - 1, (2, 3153271965567696067)),
        ];
        for (k, expected) in cases {
            assert_eq!(affine(&g.mul(k)), expected, "k = {k}");
        }
        assert!(g.mul(ORDER).is_identity());
        assert_eq!(affine(&g.double()), cases[0].1);
        assert_eq!(affine(&g.add(&g)), cases[0].1);
    }

    #[test]
    fn identity_handling() {
        let g = TestCurve::generator();
        let id = TestCurvePoint::IDENTITY;
        assert_eq!(g.add(&id), g);
        assert_eq!(id.add(&g), g);
        assert!(id.double().is_identity());
        assert!(g.add(&g.neg()).is_identity());
    }
}
