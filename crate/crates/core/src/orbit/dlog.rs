//! Discrete logarithms in `<alpha> ⊆ F_{q^k}^*` and the Chinese remainder
//! theorem for arbitrary moduli.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ff::{ExtField, Factorization, FieldElement, PrimePower};

/// Fixed-seed hasher so table construction does not depend on process state.
type DetMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

/// Largest baby-step table built for a single prime.
pub const MAX_BSGS_TABLE: u64 = 1 << 24;

/// `log_alpha(beta)` in `0..ord(alpha)` by Pohlig-Hellman: for each prime
/// power `p^e` of `ord(alpha)`, the digits of the log in base `p` are found by
/// baby-step giant-step in the order-`p` subgroup, then the residues are
/// recombined by CRT. `order_factors` must factor `ord(alpha)` exactly.
pub fn pohlig_hellman(
    ext: &ExtField,
    beta: &FieldElement,
    alpha: &FieldElement,
    order_factors: &Factorization,
) -> Result<BigUint> {
    ext.check(beta)?;
    ext.check(alpha)?;
    if beta.is_zero() {
        return Err(Error::NotInSubgroup);
    }
    let order = order_factors.value();
    if ext.pow(alpha, &order) != ext.one() {
        return Err(Error::usage("order factorization does not match the base"));
    }
    let mut residues = Vec::with_capacity(order_factors.factors().len());
    for pp in order_factors.factors() {
        let x = log_prime_power(ext, beta, alpha, &order, pp)?;
        residues.push((x, pp.prime.pow(pp.exponent)));
    }
    let (x, _) = crt(&residues)?;
    if ext.pow(alpha, &x) != *beta {
        return Err(Error::NotInSubgroup);
    }
    Ok(x)
}

/// `log_alpha(beta) mod p^e`, one base-`p` digit at a time.
fn log_prime_power(
    ext: &ExtField,
    beta: &FieldElement,
    alpha: &FieldElement,
    order: &BigUint,
    pp: &PrimePower,
) -> Result<BigUint> {
    let p = &pp.prime;
    let gamma = ext.pow(alpha, &(order / p));
    let alpha_inv = ext.inv(alpha)?;
    let table = BabySteps::new(ext, &gamma, p)?;
    let mut x = BigUint::zero();
    let mut p_t = BigUint::one();
    for _ in 0..pp.exponent {
        // h = (beta * alpha^-x)^(order / p^(t+1)) lies in <gamma>
        let shifted = ext.mul(beta, &ext.pow(&alpha_inv, &x));
        let h = ext.pow(&shifted, &(order / (&p_t * p)));
        let d = table.solve(ext, &h)?;
        x += &p_t * d;
        p_t *= p;
    }
    Ok(x)
}

struct BabySteps {
    table: DetMap<Vec<u32>, u64>,
    m: u64,
    p: u64,
    /// `gamma^-m`.
    giant: FieldElement,
}

impl BabySteps {
    fn new(ext: &ExtField, gamma: &FieldElement, p: &BigUint) -> Result<Self> {
        let p = p
            .to_u64()
            .ok_or_else(|| Error::FactorBudgetExceeded(format!("baby-step table for prime {p}")))?;
        let m = (p as f64).sqrt().ceil() as u64;
        let m = (m..).find(|&m| m.saturating_mul(m) >= p).unwrap_or(m);
        if m > MAX_BSGS_TABLE {
            return Err(Error::FactorBudgetExceeded(format!(
                "baby-step table for prime {p}"
            )));
        }
        let mut table = DetMap::default();
        let mut x = ext.one();
        for j in 0..m {
            table.entry(x.coeffs().to_vec()).or_insert(j);
            x = ext.mul(&x, gamma);
        }
        let giant = ext.inv(&x)?;
        Ok(BabySteps { table, m, p, giant })
    }

    /// `d` in `0..p` with `gamma^d = h`.
    fn solve(&self, ext: &ExtField, h: &FieldElement) -> Result<u64> {
        let mut y = h.clone();
        for i in 0..self.m {
            if let Some(&j) = self.table.get(y.coeffs()) {
                let d = i * self.m + j;
                if d < self.p {
                    return Ok(d);
                }
            }
            y = ext.mul(&y, &self.giant);
        }
        Err(Error::NotInSubgroup)
    }
}

/// `log_alpha(beta)` by scanning `alpha^0, alpha^1, ...` until it repeats.
pub fn dlog_naive(ext: &ExtField, beta: &FieldElement, alpha: &FieldElement) -> Result<BigUint> {
    ext.check(beta)?;
    ext.check(alpha)?;
    if alpha.is_zero() {
        return Err(Error::usage("base of a discrete logarithm must be nonzero"));
    }
    let one = ext.one();
    let mut x = one.clone();
    let mut i = BigUint::zero();
    loop {
        if x == *beta {
            return Ok(i);
        }
        x = ext.mul(&x, alpha);
        i += 1u32;
        if x == one {
            return Err(Error::NotInSubgroup);
        }
    }
}

/// Every power of `alpha` mapped to its exponent, in one pass.
pub fn naive_log_table(ext: &ExtField, alpha: &FieldElement) -> HashMap<FieldElement, u64> {
    let one = ext.one();
    let mut out = HashMap::new();
    let mut x = one.clone();
    let mut i = 0u64;
    loop {
        out.insert(x.clone(), i);
        x = ext.mul(&x, alpha);
        i += 1;
        if x == one || x.is_zero() {
            return out;
        }
    }
}

/// Solves `x ≡ a_j (mod m_j)` for arbitrary, not necessarily coprime,
/// moduli. Returns `(x, lcm)` with `0 <= x < lcm`.
pub fn crt(congruences: &[(BigUint, BigUint)]) -> Result<(BigUint, BigUint)> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (a, m) in congruences {
        if m.is_zero() {
            return Err(Error::usage("congruence modulus must be positive"));
        }
        let a = BigInt::from_biguint(Sign::Plus, a.clone());
        let m = BigInt::from_biguint(Sign::Plus, m.clone());
        let eg = modulus.extended_gcd(&m);
        let g = eg.gcd;
        let diff = &a - &x;
        if !(&diff % &g).is_zero() {
            return Err(Error::InconsistentCongruences(format!(
                "x ≡ {x} (mod {modulus}) and x ≡ {a} (mod {m})"
            )));
        }
        // x + modulus * t with t ≡ (diff / g) * inv(modulus / g) (mod m / g)
        let m_g = &m / &g;
        let t = ((&diff / &g) * eg.x).mod_floor(&m_g);
        x += &modulus * t;
        modulus = &modulus * &m_g;
        x = x.mod_floor(&modulus);
    }
    Ok((
        x.to_biguint().expect("reduced residue is non-negative"),
        modulus.to_biguint().expect("positive"),
    ))
}
