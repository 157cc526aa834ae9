use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `N` or `M`: a point of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::from(1);
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational point.
    pub fn dot_rational(&self, point: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .zip(point)
            .map(|(a, b)| b * BigRational::from_integer(a.clone()))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn dot_i64(&self, point: &[i64]) -> BigInt {
        self.0.iter().zip(point).map(|(a, &b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == BigInt::from(1)
    }

    /// Divides by the gcd of the entries.
    pub fn primitivize(&self) -> Result<Self> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroRay);
        }
        Ok(Self(self.0.iter().map(|c| c / &g).collect()))
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().cloned().map(BigRational::from_integer).collect()
    }

    pub fn to_i64s(&self) -> Result<Vec<i64>> {
        self.0
            .iter()
            .map(|c| c.to_i64().ok_or_else(|| Error::Overflow(format!("coordinate {c} exceeds i64"))))
            .collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Smallest integer multiple of a rational direction that is integral, made primitive.
    pub fn primitive_from_rational(dir: &[BigRational]) -> Result<Self> {
        let lcm = dir.iter().fold(BigInt::from(1), |l, q| l.lcm(q.denom()));
        let ints = dir.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        Self(ints).primitivize()
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self::from_i64s(&v)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_int::serialize_vec(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_int::deserialize_vec(d).map(Self)
    }
}

/// JSON encoding of big integers: plain numbers when they fit in `i64`, decimal strings otherwise.
pub mod serde_int {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    fn to_repr(x: &BigInt) -> Repr {
        match x.to_i64() {
            Some(v) => Repr::Small(v),
            None => Repr::Big(x.to_string()),
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
        match r {
            Repr::Small(v) => Ok(BigInt::from(v)),
            Repr::Big(s) => s.parse().map_err(|_| E::custom(format!("invalid integer {s:?}"))),
        }
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_repr(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub fn serialize_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }

    pub mod vec {
        pub use super::deserialize_vec as deserialize;
        pub use super::serialize_vec as serialize;
    }
}

/// Rationals travel through JSON as `"p/q"` strings (or `"p"` when integral).
pub mod serde_rational {
    use num_rational::BigRational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn parse(s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            Some((p, q)) => {
                let q: num_bigint::BigInt = q.trim().parse().ok()?;
                if q == num_bigint::BigInt::from(0) {
                    return None;
                }
                Some(BigRational::new(p.trim().parse().ok()?, q))
            }
            None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
        }
    }

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
    }

    pub mod vec {
        use super::*;
        pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse(s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}"))))
                .collect()
        }
    }

    pub mod vec_vec {
        use super::*;
        pub fn serialize<S: Serializer>(xs: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
            xs.iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
            Vec::<Vec<String>>::deserialize(d)?
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| parse(s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}"))))
                        .collect()
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(xs)
    }

    #[test]
    fn primitivize_examples() {
        assert_eq!(v(&[2, 4]).primitivize().unwrap(), v(&[1, 2]));
        assert_eq!(v(&[-1, 0]).primitivize().unwrap(), v(&[-1, 0]));
        assert_eq!(v(&[6, -9, 3]).primitivize().unwrap(), v(&[2, -3, 1]));
        assert_eq!(v(&[0, 0]).primitivize(), Err(Error::ZeroRay));
    }

    #[test]
    fn serde_big_coordinates() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = LatticeVector::new(vec![big.clone(), BigInt::from(-3)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"["123456789012345678901234567890",-3]"#);
        let back: LatticeVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    proptest::proptest! {
        #[test]
        fn primitivize_is_idempotent(xs in proptest::collection::vec(-50i64..50, 1..5)) {
            let x = v(&xs);
            proptest::prop_assume!(!x.is_zero());
            let p = x.primitivize().unwrap();
            proptest::prop_assert!(p.is_primitive());
            proptest::prop_assert_eq!(p.primitivize().unwrap(), p);
        }
    }
}
