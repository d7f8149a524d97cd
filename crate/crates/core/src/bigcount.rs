use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact nonnegative count. Serialized as a decimal string.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn pow(base: u64, exp: u64) -> Self {
        BigCount(Pow::pow(BigUint::from(base), exp))
    }

    /// `r (r-1) ... (r-j+1)`; zero when `j > r`.
    pub fn falling_factorial(r: u64, j: u64) -> Self {
        if j > r {
            return BigCount::zero();
        }
        let mut acc = BigUint::one();
        for i in 0..j {
            acc *= r - i;
        }
        BigCount(acc)
    }

    pub fn binomial(n: u64, k: u64) -> Self {
        if k > n {
            return BigCount::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= n - i;
            acc /= i + 1;
        }
        BigCount(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl Mul<&BigCount> for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(self.0 * &rhs.0)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for BigCount {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(BigCount)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorial_and_binomial() {
        assert_eq!(BigCount::falling_factorial(8, 3), BigCount::from(336));
        assert_eq!(BigCount::falling_factorial(3, 4), BigCount::zero());
        assert_eq!(BigCount::falling_factorial(0, 0), BigCount::one());
        assert_eq!(BigCount::binomial(9, 2), BigCount::from(36));
        assert_eq!(BigCount::binomial(2, 5), BigCount::zero());
    }

    #[test]
    fn decimal_string_serde() {
        let big = BigCount::pow(9, 40);
        let json = serde_json::to_string(&big).unwrap();
        assert_eq!(json, format!("\"{}\"", big));
        let back: BigCount = serde_json::from_str(&json).unwrap();
        assert_eq!(back, big);
        assert!(serde_json::from_str::<BigCount>("\"-3\"").is_err());
    }
}
