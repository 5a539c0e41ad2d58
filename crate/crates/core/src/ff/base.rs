//! The base field `F_q`, `q = p^r`.
//!
//! Elements are stored as integers in `0..q` using the coefficient-wise
//! bijection `sum u_i b^(i-1) <-> sum u_i p^(i-1)`, where `b` is a root of the
//! degree-`r` modulus over `F_p`. For prime `q` this is the identity on
//! `0..p`. Every matrix entry and every extension-field coefficient in this
//! crate is such an index, so the integer form *is* the digit used by the
//! q-adic expansions.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported base field. Multiplication goes through log/exp tables
/// sized `O(q)`.
pub const MAX_BASE_FIELD_SIZE: u32 = 1 << 16;

#[derive(Clone)]
pub struct BaseField {
    p: u32,
    r: usize,
    q: u32,
    /// Monic modulus of `F_q` over `F_p`, low degree first. `[0, 1]` when `r = 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

pub(crate) fn is_small_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_small_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        if p > MAX_BASE_FIELD_SIZE {
            return Err(Error::usage(format!(
                "base field size {p} exceeds {MAX_BASE_FIELD_SIZE}"
            )));
        }
        Self::build(p, 1, vec![0, 1])
    }

    /// `F_{p^r}` defined by `modulus` over `F_p`, or by the default modulus when
    /// `modulus` is `None`. The modulus must be monic and irreducible.
    pub fn new(p: u32, r: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::usage("extension degree r must be at least 1"));
        }
        let prime = Self::prime(p)?;
        if r == 1 {
            if let Some(m) = modulus.filter(|m| !m.is_empty()) {
                if m.len() != 2 || m[1] != 1 {
                    return Err(Error::usage(
                        "modulus_q must be absent (or degree 1) when r = 1",
                    ));
                }
            }
            return Ok(prime);
        }
        let fits = (p as u64)
            .checked_pow(r as u32)
            .is_some_and(|q| q <= MAX_BASE_FIELD_SIZE as u64);
        if !fits {
            return Err(Error::usage(format!(
                "base field size {p}^{r} exceeds {MAX_BASE_FIELD_SIZE}"
            )));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != r + 1 {
                    return Err(Error::usage(format!(
                        "modulus_q must have degree {r}, got {} coefficients",
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::usage("modulus_q coefficient out of range"));
                }
                if m[r] != 1 {
                    return Err(Error::NotMonic);
                }
                if !super::poly::is_irreducible(&prime, &m) {
                    return Err(Error::NotIrreducible(format!("{m:?} over F_{p}")));
                }
                m
            }
            None => super::moduli::default_modulus(&prime, r)?,
        };
        Self::build(p, r, modulus)
    }

    fn build(p: u32, r: usize, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(r as u32);
        let mut field = BaseField {
            p,
            r,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if q == 2 {
            field.exp = vec![1, 1];
            field.log = vec![0, 0];
            return Ok(field);
        }
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; q as usize];
        'search: for g in 2..q {
            let mut x = 1u32;
            for (e, slot) in exp.iter_mut().take(order).enumerate() {
                if e > 0 && x == 1 {
                    continue 'search;
                }
                *slot = x;
                x = field.mul_slow(x, g);
            }
            if x != 1 {
                continue;
            }
            for e in 0..order {
                exp[e + order] = exp[e];
                log[exp[e] as usize] = e as u32;
            }
            field.exp = exp;
            field.log = log;
            return Ok(field);
        }
        Err(Error::NotIrreducible(format!(
            "no generator found for F_{p}[x]/{:?}",
            field.modulus
        )))
    }

    /// Polynomial product modulo the defining polynomial, used only to build
    /// the tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        if self.r == 1 {
            return ((a as u64 * b as u64) % p as u64) as u32;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * self.r - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (self.r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for i in 0..self.r {
                let t = (c * self.modulus[i]) % p;
                prod[d - self.r + i] = (prod[d - self.r + i] + p - t) % p;
            }
            prod[d] = 0;
        }
        self.from_digits(&prod[..self.r])
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree `r` of `F_q` over `F_p`.
    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Base-`p` digits of an element index, low first, length `r`.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r);
        let mut x = a;
        for _ in 0..self.r {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.r == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut x, mut y) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.r == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut x = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize] as usize;
        let lb = self.log[b as usize] as usize;
        self.exp[la + lb]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroDivisor);
        }
        let order = (self.q - 1) as usize;
        let la = self.log[a as usize] as usize;
        Ok(self.exp[(order - la) % order])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let la = self.log[a as usize] as u64;
        self.exp[((la * (e % order)) % order) as usize]
    }

    /// The Frobenius automorphism `x -> x^(p^s)`.
    pub fn frobenius(&self, a: u32, s: usize) -> u32 {
        let mut x = a;
        for _ in 0..(s % self.r) {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}
