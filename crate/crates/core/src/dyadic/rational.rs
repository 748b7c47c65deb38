use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::BitString;
use crate::error::{Error, Result};

/// An exact dyadic rational `numerator / 2^exponent` in `[0, 1]`.
///
/// Always kept in lowest terms: the numerator is odd, or the value is zero
/// with exponent 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Result<Dyadic> {
        let d = Self::canonical(numerator.into(), exponent);
        if d.exceeds_one() {
            return Err(Error::Domain(format!("{d} is greater than 1")));
        }
        Ok(d)
    }

    fn canonical(mut numerator: BigUint, mut exponent: u32) -> Dyadic {
        if numerator.is_zero() {
            return Dyadic::zero();
        }
        let tz = numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(exponent as u64) as u32;
        numerator >>= shift;
        exponent -= shift;
        Dyadic { numerator, exponent }
    }

    fn exceeds_one(&self) -> bool {
        self.numerator > BigUint::one() << self.exponent
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u32) -> Dyadic {
        Dyadic {
            numerator: BigUint::one(),
            exponent: k,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.numerator.is_one()
    }

    /// Numerators of `self` and `other` over the common denominator.
    fn aligned(&self, other: &Dyadic) -> (BigUint, BigUint, u32) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
            e,
        )
    }

    /// `self + other`, or `None` when the sum leaves `[0, 1]`.
    pub fn checked_add(&self, other: &Dyadic) -> Option<Dyadic> {
        let (a, b, e) = self.aligned(other);
        let sum = Self::canonical(a + b, e);
        (!sum.exceeds_one()).then_some(sum)
    }

    /// `self - other`, or `None` when the difference is negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let (a, b, e) = self.aligned(other);
        (a >= b).then(|| Self::canonical(a - b, e))
    }

    /// `self · 2^{-k}`.
    pub fn shr(&self, k: u32) -> Dyadic {
        Self::canonical(self.numerator.clone(), self.exponent + k)
    }

    /// `self · m`, or `None` when the product exceeds 1.
    pub fn checked_mul_int(&self, m: u64) -> Option<Dyadic> {
        let d = Self::canonical(&self.numerator * m, self.exponent);
        (!d.exceeds_one()).then_some(d)
    }

    /// Exact test of `self ≤ p / q`; `q > 0`.
    pub fn le_ratio(&self, p: u64, q: u64) -> bool {
        assert!(q > 0, "zero denominator");
        &self.numerator * q <= BigUint::from(p) << self.exponent
    }

    /// The first `n` bits of the binary expansion, zero-padded. The value 1 is
    /// read as `0.111…`.
    pub fn binary_prefix(&self, n: usize) -> BitString {
        if self.is_one() {
            return BitString::ones(n);
        }
        let e = self.exponent as usize;
        BitString::from_bits((0..n).map(|i| i < e && self.numerator.bit((e - 1 - i) as u64)))
    }

    /// Lossy conversion for display only.
    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.exponent as i32)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Parses `a/2^b`, `a/d` with `d` a power of two, or a bare integer 0 or 1.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::parse(0, format!("invalid dyadic {s:?}: {why}"));
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((n, d)) => (n.trim(), Some(d.trim())),
        };
        let numerator: BigUint = num.parse().map_err(|_| bad("numerator is not a natural number"))?;
        let exponent = match den {
            None => 0,
            Some(d) => {
                if let Some(e) = d.strip_prefix("2^") {
                    e.parse::<u32>().map_err(|_| bad("exponent is not a natural number"))?
                } else {
                    let d: u64 = d.parse().map_err(|_| bad("denominator is not a natural number"))?;
                    if !d.is_power_of_two() {
                        return Err(bad("denominator is not a power of two"));
                    }
                    d.trailing_zeros()
                }
            }
        };
        Dyadic::new(numerator, exponent).map_err(|_| bad("value exceeds 1"))
    }
}

/// Shorthand for tests and examples: `dy(5, 3)` is 5/8. Panics outside `[0, 1]`.
pub fn dy(numerator: u64, exponent: u32) -> Dyadic {
    Dyadic::new(numerator, exponent).expect("dyadic in [0, 1]")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(dy(4, 3), dy(1, 1));
        assert_eq!(dy(0, 7).exponent(), 0);
        assert_eq!(dy(8, 3), Dyadic::one());
        assert!(Dyadic::new(9u32, 3).is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(dy(1, 1).checked_add(&dy(1, 3)), Some(dy(5, 3)));
        assert_eq!(dy(1, 1).checked_add(&dy(3, 2)), None);
        assert_eq!(dy(5, 3).checked_sub(&dy(1, 1)), Some(dy(1, 3)));
        assert_eq!(dy(1, 3).checked_sub(&dy(1, 1)), None);
        assert!(dy(3, 3) < dy(1, 1));
        assert!(dy(1, 1) < Dyadic::one());
        assert_eq!(dy(3, 2).shr(2), dy(3, 4));
    }

    #[test]
    fn ratio_comparison_is_exact() {
        // 2/3 sits strictly between 5/8 and 3/4.
        assert!(dy(5, 3).le_ratio(2, 3));
        assert!(!dy(3, 2).le_ratio(2, 3));
        assert!(dy(1, 1).le_ratio(1, 2));
        assert!(!dy(1, 64).le_ratio(0, 1));
    }

    #[test]
    fn text_forms() {
        assert_eq!("5/2^3".parse::<Dyadic>().unwrap(), dy(5, 3));
        assert_eq!("6/16".parse::<Dyadic>().unwrap(), dy(3, 3));
        assert_eq!("1".parse::<Dyadic>().unwrap(), Dyadic::one());
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("3/2".parse::<Dyadic>().is_err());
        assert_eq!(dy(5, 3).to_string(), "5/2^3");
        assert_eq!(Dyadic::zero().to_string(), "0/2^0");
    }

    #[test]
    fn binary_prefix_pads_and_truncates() {
        assert_eq!(dy(5, 3).binary_prefix(5).to_string(), "10100");
        assert_eq!(dy(5, 3).binary_prefix(2).to_string(), "10");
        assert_eq!(Dyadic::one().binary_prefix(3).to_string(), "111");
        assert!(Dyadic::zero().binary_prefix(0).is_empty());
    }
}
