//! Default defining polynomials.
//!
//! Small prime-field cases use the Conway polynomials. Everything else is
//! found by a deterministic search: the lexicographically smallest monic
//! primitive polynomial of the requested degree, comparing coefficient
//! vectors from the constant term upward.

use std::sync::Arc;

use super::base::BaseField;
use super::ext::ExtField;
use super::poly;
use crate::error::{Error, Result};

/// `(p, degree, coefficients low first)`.
const CONWAY: &[(u32, usize, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 1, 4, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
];

/// Named polynomials that appear in worked examples alongside the defaults.
pub const X2_X_1: &[u32] = &[1, 1, 1];
pub const X4_X_1: &[u32] = &[1, 1, 0, 0, 1];
/// Irreducible over `F_2` but not primitive: its roots have order 5.
pub const X4_X3_X2_X_1: &[u32] = &[1, 1, 1, 1, 1];

pub fn conway(p: u32, degree: usize) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(cp, d, _)| *cp == p && *d == degree)
        .map(|(_, _, c)| *c)
}

/// Default modulus of degree `k` over `base`.
pub fn default_modulus(base: &BaseField, k: usize) -> Result<Vec<u32>> {
    if k == 0 {
        return Err(Error::usage("degree must be at least 1"));
    }
    if base.degree() == 1 {
        if let Some(c) = conway(base.characteristic(), k) {
            return Ok(c.to_vec());
        }
    }
    search_modulus(base, k)
}

/// Smallest monic polynomial of degree `k` (constant term compared first)
/// that is primitive, falling back to the smallest irreducible one.
pub fn search_modulus(base: &BaseField, k: usize) -> Result<Vec<u32>> {
    let q = base.order() as u128;
    let total = q
        .checked_pow(k as u32)
        .ok_or_else(|| Error::usage(format!("cannot search degree-{k} moduli over F_{q}")))?;
    let shared = Arc::new(base.clone());
    let mut first_irreducible = None;
    for t in 0..total {
        // the constant term is the most significant digit of t
        let mut coeffs = vec![0u32; k + 1];
        let mut x = t;
        for i in (0..k).rev() {
            coeffs[i] = (x % q) as u32;
            x /= q;
        }
        coeffs[k] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if !poly::is_irreducible(base, &coeffs) {
            continue;
        }
        let ext = ExtField::new(shared.clone(), coeffs.clone())?;
        if ext.is_primitive()? {
            return Ok(coeffs);
        }
        if first_irreducible.is_none() {
            first_irreducible = Some(coeffs);
        }
    }
    first_irreducible.ok_or_else(|| Error::NotIrreducible(format!("no degree-{k} modulus found")))
}
