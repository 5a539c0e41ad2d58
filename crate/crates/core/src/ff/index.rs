//! Arbitrary-size message indices carried as q-adic digit vectors.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A non-negative integer stored as its base-`radix` expansion, low digit
/// first. High-order zero digits are allowed; comparisons and equality look
/// at the value only.
#[derive(Clone)]
pub struct MessageIndex {
    radix: u32,
    digits: Vec<u32>,
}

impl MessageIndex {
    pub fn zero(radix: u32) -> Self {
        assert!(radix >= 2, "radix must be at least 2");
        MessageIndex {
            radix,
            digits: Vec::new(),
        }
    }

    pub fn from_digits(radix: u32, digits: Vec<u32>) -> Result<Self> {
        if radix < 2 {
            return Err(Error::usage("radix must be at least 2"));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= radix) {
            return Err(Error::usage(format!(
                "digit {d} out of range for radix {radix}"
            )));
        }
        Ok(MessageIndex { radix, digits })
    }

    pub(crate) fn from_digits_unchecked(radix: u32, digits: Vec<u32>) -> Self {
        debug_assert!(digits.iter().all(|&d| d < radix));
        MessageIndex { radix, digits }
    }

    pub fn from_biguint(value: &BigUint, radix: u32) -> Self {
        assert!(radix >= 2, "radix must be at least 2");
        let mut digits = Vec::new();
        let mut v = value.clone();
        let r = BigUint::from(radix);
        while !v.is_zero() {
            let (quot, rem) = v.div_rem(&r);
            digits.push(rem.to_u32().expect("digit < radix"));
            v = quot;
        }
        MessageIndex { radix, digits }
    }

    pub fn from_u64(value: u64, radix: u32) -> Self {
        Self::from_biguint(&BigUint::from(value), radix)
    }

    pub fn parse_decimal(s: &str, radix: u32) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a decimal integer: {s:?}")));
        }
        let v: BigUint = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
        Ok(Self::from_biguint(&v, radix))
    }

    pub fn to_biguint(&self) -> BigUint {
        let r = BigUint::from(self.radix);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &r + BigUint::from(d))
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_biguint().to_u64()
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    /// Stored digits, low first, possibly with high-order zeros.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, pos: usize) -> u32 {
        self.digits.get(pos).copied().unwrap_or(0)
    }

    /// Number of digits up to and including the highest nonzero one.
    pub fn significant_len(&self) -> usize {
        self.highest_nonzero().map_or(0, |p| p + 1)
    }

    pub fn highest_nonzero(&self) -> Option<usize> {
        self.digits.iter().rposition(|&d| d != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Digits padded (or trimmed of zeros) to exactly `len` positions.
    pub fn padded(&self, len: usize) -> Result<Vec<u32>> {
        if self.significant_len() > len {
            return Err(Error::usage(format!(
                "index {self} needs more than {len} base-{} digits",
                self.radix
            )));
        }
        let mut out = self.digits.clone();
        out.resize(len, 0);
        Ok(out)
    }

    fn check_radix(&self, other: &Self) {
        assert_eq!(
            self.radix, other.radix,
            "message indices with different radices"
        );
    }

    /// Digit-wise sum with carry.
    pub fn add(&self, other: &Self) -> Self {
        self.check_radix(other);
        let len = self.digits.len().max(other.digits.len());
        let mut out = Vec::with_capacity(len + 1);
        let mut carry = 0u64;
        for i in 0..len {
            let s = self.digit(i) as u64 + other.digit(i) as u64 + carry;
            out.push((s % self.radix as u64) as u32);
            carry = s / self.radix as u64;
        }
        if carry > 0 {
            out.push(carry as u32);
        }
        MessageIndex {
            radix: self.radix,
            digits: out,
        }
    }

    /// Digit-wise difference with borrow; `None` when `other > self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.check_radix(other);
        if other > self {
            return None;
        }
        let len = self.digits.len().max(other.digits.len());
        let mut out = Vec::with_capacity(len);
        let mut borrow = 0i64;
        for i in 0..len {
            let mut d = self.digit(i) as i64 - other.digit(i) as i64 - borrow;
            if d < 0 {
                d += self.radix as i64;
                borrow = 1;
            } else {
                borrow = 0;
            }
            out.push(d as u32);
        }
        Some(MessageIndex {
            radix: self.radix,
            digits: out,
        })
    }
}

impl PartialEq for MessageIndex {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MessageIndex {}

impl PartialOrd for MessageIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MessageIndex {
    /// Reverse lexicographic comparison of the digit vectors: the highest
    /// differing position decides.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.radix != other.radix {
            return self.to_biguint().cmp(&other.to_biguint());
        }
        let len = self.significant_len().max(other.significant_len());
        for i in (0..len).rev() {
            match self.digit(i).cmp(&other.digit(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl Hash for MessageIndex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.radix.hash(state);
        self.digits[..self.significant_len()].hash(state);
    }
}

impl fmt::Display for MessageIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_biguint())
    }
}

impl fmt::Debug for MessageIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MessageIndex({} base {})", self, self.radix)
    }
}
