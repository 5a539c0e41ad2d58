//! Dense polynomials over `F_q`, coefficients low degree first.

use num_bigint::BigUint;
use num_traits::One;

use super::base::BaseField;

pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            f.add(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            )
        })
        .collect();
    trim(out)
}

pub fn sub(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            f.sub(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            )
        })
        .collect();
    trim(out)
}

pub fn mul(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder of `a / b`. Panics if `b` is zero.
pub fn divrem(f: &BaseField, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("leading coefficient is nonzero");
    let mut rem = trim(a.to_vec());
    let Some(da) = degree(&rem) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u32; da - db + 1];
    for d in (db..=da).rev() {
        let c = rem.get(d).copied().unwrap_or(0);
        if c == 0 {
            continue;
        }
        let t = f.mul(c, lead_inv);
        quot[d - db] = t;
        for i in 0..=db {
            rem[d - db + i] = f.sub(rem[d - db + i], f.mul(t, b[i]));
        }
    }
    (trim(quot), trim(rem))
}

pub fn rem(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    divrem(f, a, b).1
}

pub fn make_monic(f: &BaseField, a: &[u32]) -> Vec<u32> {
    let a = trim(a.to_vec());
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = f.inv(a[d]).expect("nonzero");
            a.iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

pub fn gcd(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

/// Inverse of `a` modulo the irreducible `m`, via the extended Euclidean
/// algorithm. `None` when `a` is zero modulo `m`.
pub fn inverse_mod(f: &BaseField, a: &[u32], m: &[u32]) -> Option<Vec<u32>> {
    let mut r0 = trim(m.to_vec());
    let mut r1 = rem(f, a, m);
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    if r1.is_empty() {
        return None;
    }
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is a nonzero constant when gcd(a, m) = 1
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = f.inv(r0[0]).ok()?;
    Some(rem(
        f,
        &s0.iter().map(|&x| f.mul(x, c)).collect::<Vec<_>>(),
        m,
    ))
}

pub fn mulmod(f: &BaseField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &BaseField, base: &[u32], e: &BigUint, m: &[u32]) -> Vec<u32> {
    let mut result = rem(f, &[1], m);
    let b = rem(f, base, m);
    for i in (0..e.bits()).rev() {
        result = mulmod(f, &result, &result, m);
        if e.bit(i) {
            result = mulmod(f, &result, &b, m);
        }
    }
    result
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test: `f` of degree `k` is irreducible over `F_q`
/// iff `x^(q^k) = x mod f` and `gcd(x^(q^(k/t)) - x, f) = 1` for every prime
/// `t | k`.
pub fn is_irreducible(f: &BaseField, poly: &[u32]) -> bool {
    let poly = trim(poly.to_vec());
    let Some(k) = degree(&poly) else {
        return false;
    };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let q = BigUint::from(f.order());
    let x = vec![0u32, 1];
    // frob[j] = x^(q^j) mod poly
    let mut frob = vec![rem(f, &x, &poly)];
    for j in 1..=k {
        let next = powmod(f, &frob[j - 1], &q, &poly);
        frob.push(next);
    }
    if frob[k] != x {
        return false;
    }
    for t in prime_divisors(k) {
        let h = sub(f, &frob[k / t], &x);
        let g = gcd(f, &h, &poly);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Evaluate at a base-field point (Horner).
pub fn eval(f: &BaseField, poly: &[u32], x: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

pub(crate) fn big_pow(base: u32, e: usize) -> BigUint {
    let mut out = BigUint::one();
    let b = BigUint::from(base);
    for _ in 0..e {
        out *= &b;
    }
    out
}
