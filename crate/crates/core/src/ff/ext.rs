//! The extension `F_{q^k} = F_q[x] / (p(x))` with `alpha` a root of `p`.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::base::BaseField;
use super::factor::{factorize, FactorBudget, Factorization};
use super::index::MessageIndex;
use super::poly;
use crate::error::{Error, Result};

/// Element of an extension field: coefficients over `F_q` in the basis
/// `1, alpha, ..., alpha^(k-1)`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Degree of the level this element lives at.
    pub fn level_degree(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
    Inv,
}

pub struct ExtField {
    base: Arc<BaseField>,
    modulus: Vec<u32>,
    k: usize,
    order_factors: OnceLock<Result<Factorization>>,
}

impl Clone for ExtField {
    fn clone(&self) -> Self {
        let order_factors = OnceLock::new();
        if let Some(f) = self.order_factors.get() {
            let _ = order_factors.set(f.clone());
        }
        ExtField {
            base: self.base.clone(),
            modulus: self.modulus.clone(),
            k: self.k,
            order_factors,
        }
    }
}

impl std::fmt::Debug for ExtField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtField")
            .field("q", &self.base.order())
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// `F_q[x] / (modulus)`. The modulus must be monic and irreducible.
    pub fn new(base: Arc<BaseField>, modulus: Vec<u32>) -> Result<Self> {
        let modulus = poly::trim(modulus);
        let Some(k) = poly::degree(&modulus) else {
            return Err(Error::usage("modulus must be nonzero"));
        };
        if k == 0 {
            return Err(Error::usage("modulus must have degree at least 1"));
        }
        if modulus.iter().any(|&c| !base.contains(c)) {
            return Err(Error::usage("modulus coefficient out of range"));
        }
        if modulus[k] != 1 {
            return Err(Error::NotMonic);
        }
        if !poly::is_irreducible(&base, &modulus) {
            return Err(Error::NotIrreducible(format!(
                "{modulus:?} over F_{}",
                base.order()
            )));
        }
        Ok(ExtField {
            base,
            modulus,
            k,
            order_factors: OnceLock::new(),
        })
    }

    /// Extension of degree `k` using the default modulus for `(q, k)`.
    pub fn with_default_modulus(base: Arc<BaseField>, k: usize) -> Result<Self> {
        let modulus = super::moduli::default_modulus(&base, k)?;
        Self::new(base, modulus)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<BaseField> {
        &self.base
    }

    /// Degree `k` over `F_q`.
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `q^k`.
    pub fn size(&self) -> BigUint {
        poly::big_pow(self.base.order(), self.k)
    }

    /// `q^k - 1`.
    pub fn multiplicative_order(&self) -> BigUint {
        self.size() - BigUint::one()
    }

    /// Factorization of `q^k - 1`, computed once with the default budget.
    pub fn group_order_factors(&self) -> Result<&Factorization> {
        self.order_factors
            .get_or_init(|| factorize(&self.multiplicative_order(), &FactorBudget::default()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// The root `alpha` of the modulus, i.e. `x mod p(x)`.
    pub fn alpha(&self) -> FieldElement {
        self.reduce(vec![0, 1])
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: u32) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = c;
        FieldElement { coeffs }
    }

    fn reduce(&self, a: Vec<u32>) -> FieldElement {
        let mut r = poly::rem(&self.base, &a, &self.modulus);
        r.resize(self.k, 0);
        FieldElement { coeffs: r }
    }

    /// `psi_k`: the coefficient vector `(u_1, ..., u_k)` read as
    /// `sum u_j alpha^(j-1)`.
    pub fn psi(&self, v: &[u32]) -> Result<FieldElement> {
        if v.len() != self.k {
            return Err(Error::LevelMismatch {
                expected: self.k,
                found: v.len(),
            });
        }
        if let Some(&c) = v.iter().find(|&&c| !self.base.contains(c)) {
            return Err(Error::usage(format!(
                "coefficient {c} is not an element of F_{}",
                self.base.order()
            )));
        }
        Ok(FieldElement { coeffs: v.to_vec() })
    }

    /// Inverse of [`ExtField::psi`].
    pub fn psi_inv(&self, a: &FieldElement) -> Vec<u32> {
        a.coeffs.clone()
    }

    pub fn check(&self, a: &FieldElement) -> Result<()> {
        if a.coeffs.len() != self.k {
            return Err(Error::LevelMismatch {
                expected: self.k,
                found: a.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a.coeffs.iter().map(|&x| self.base.neg(x)).collect(),
        }
    }

    pub fn scale(&self, c: u32, a: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a.coeffs.iter().map(|&x| self.base.mul(c, x)).collect(),
        }
    }

    /// Schoolbook product followed by reduction with the monic modulus.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &*self.base;
        let k = self.k;
        let mut prod = vec![0u32; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                }
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for i in 0..k {
                let t = f.mul(c, self.modulus[i]);
                prod[d - k + i] = f.sub(prod[d - k + i], t);
            }
        }
        prod.truncate(k);
        FieldElement { coeffs: prod }
    }

    /// Multiplication by `alpha`: shift up one degree and fold the top
    /// coefficient back through `-p_0, ..., -p_(k-1)`.
    pub fn mul_alpha(&self, a: &FieldElement) -> FieldElement {
        let f = &*self.base;
        let k = self.k;
        let top = a.coeffs[k - 1];
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let shifted = if j == 0 { 0 } else { a.coeffs[j - 1] };
            out.push(f.sub(shifted, f.mul(top, self.modulus[j])));
        }
        FieldElement { coeffs: out }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let inv =
            poly::inverse_mod(&self.base, &a.coeffs, &self.modulus).ok_or(Error::ZeroDivisor)?;
        Ok(self.reduce(inv))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Checked entry point: validates levels and zero divisors.
    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
            ArithOp::Inv => self.inv(a),
        }
    }

    /// `a^e` by binary square-and-multiply. `0^0 = 1`.
    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow(a, &BigUint::from(e))
    }

    /// `a^e` with `e` given as a digit vector: left-to-right over the
    /// base-`radix` digits, raising to the radix between digits. `0^0 = 1`.
    pub fn pow_index(&self, a: &FieldElement, e: &MessageIndex) -> FieldElement {
        let radix = BigUint::from(e.radix());
        let mut result = self.one();
        for pos in (0..e.significant_len()).rev() {
            result = self.pow(&result, &radix);
            let d = e.digit(pos);
            if d != 0 {
                result = self.mul(&result, &self.pow_u64(a, d as u64));
            }
        }
        result
    }

    /// Multiplicative order of a nonzero element, by stripping prime factors
    /// of `q^k - 1` while the power stays 1.
    pub fn element_order(&self, a: &FieldElement) -> Result<BigUint> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::usage("the zero element has no multiplicative order"));
        }
        let factors = self.group_order_factors()?;
        let mut order = self.multiplicative_order();
        for pp in factors.factors() {
            for _ in 0..pp.exponent {
                let candidate = &order / &pp.prime;
                if self.pow(a, &candidate) == self.one() {
                    order = candidate;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// True when `alpha` generates the full multiplicative group.
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.element_order(&self.alpha())? == self.multiplicative_order())
    }

    /// `varphi`: the element's coefficient digits read as a base-`q` integer.
    pub fn element_index(&self, a: &FieldElement) -> BigUint {
        MessageIndex::from_digits_unchecked(self.base.order(), a.coeffs.clone()).to_biguint()
    }

    /// Inverse of [`ExtField::element_index`].
    pub fn element_from_index(&self, v: &BigUint) -> Result<FieldElement> {
        let digits = MessageIndex::from_biguint(v, self.base.order()).padded(self.k)?;
        Ok(FieldElement { coeffs: digits })
    }

    /// All field elements in index order (desk scale only).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.base.order() as u64;
        let total = q
            .checked_pow(self.k as u32)
            .expect("field too large to enumerate");
        (0..total).map(move |mut t| {
            let mut coeffs = Vec::with_capacity(self.k);
            for _ in 0..self.k {
                coeffs.push((t % q) as u32);
                t /= q;
            }
            FieldElement { coeffs }
        })
    }

    /// `phi_{k,m}`: concatenated coefficient digits of `u_1, ..., u_m`,
    /// i.e. `sum varphi(u_i) q^(k(i-1))` in its q-adic form.
    pub fn phi_adic(&self, u: &[FieldElement]) -> Result<MessageIndex> {
        let mut digits = Vec::with_capacity(u.len() * self.k);
        for a in u {
            self.check(a)?;
            digits.extend_from_slice(&a.coeffs);
        }
        Ok(MessageIndex::from_digits_unchecked(
            self.base.order(),
            digits,
        ))
    }

    /// Inverse of [`ExtField::phi_adic`] onto `F_{q^k}^m`. Fails when
    /// `index >= q^(km)`.
    pub fn phi_adic_inv(&self, index: &MessageIndex, m: usize) -> Result<Vec<FieldElement>> {
        if index.radix() != self.base.order() {
            return Err(Error::usage(format!(
                "index is base {}, field needs base {}",
                index.radix(),
                self.base.order()
            )));
        }
        let digits = index
            .padded(self.k * m)
            .map_err(|_| Error::usage(format!("index {index} is not below q^(km) for m = {m}")))?;
        Ok(digits
            .chunks(self.k)
            .map(|c| FieldElement { coeffs: c.to_vec() })
            .collect())
    }
}
