//! Integer factorization for group orders `q^n - 1`.
//!
//! Trial division up to a fixed bound, then Pollard's rho with Brent's cycle
//! detection from a deterministic seed sequence. Primality of the reported
//! factors is certified by Miller-Rabin with the first twelve prime bases,
//! which is deterministic below 3.3e24; larger factors are flagged as
//! probable primes.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const FACTOR_BUDGET_ENV: &str = "SUBSPACE_FACTOR_BUDGET";
pub const DEFAULT_TRIAL_BOUND: u32 = 1_000_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 20_000_000;

/// Smallest `n` listed by [`smoothness_report`]: codes with `k >= 3` and
/// `k <= n / 2` need `n >= 6`.
pub const SMOOTHNESS_MIN_N: u32 = 6;

const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u32,
    /// Total Pollard-rho iterations allowed for one factorization.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
        }
    }
}

impl FactorBudget {
    /// Default budget, with the rho iteration cap overridden by
    /// `SUBSPACE_FACTOR_BUDGET` when set to a valid integer.
    pub fn from_env() -> Self {
        let mut budget = Self::default();
        if let Some(v) = std::env::var(FACTOR_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            budget.rho_iterations = v;
        }
        budget
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    #[serde(serialize_with = "ser_decimal")]
    pub prime: BigUint,
    pub exponent: u32,
}

fn ser_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    /// Passed every Miller-Rabin base but lies above the deterministic range.
    ProbablePrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    factors: Vec<PrimePower>,
    /// True if some factor is only a probable prime.
    probable: bool,
}

impl Factorization {
    pub fn from_factors(mut factors: Vec<PrimePower>) -> Self {
        factors.sort_by(|a, b| a.prime.cmp(&b.prime));
        Factorization {
            factors,
            probable: false,
        }
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn has_probable_primes(&self) -> bool {
        self.probable
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, pp| acc * pp.prime.pow(pp.exponent))
    }

    pub fn max_prime(&self) -> Option<&BigUint> {
        self.factors.iter().map(|pp| &pp.prime).max()
    }

    pub fn max_exponent(&self) -> u32 {
        self.factors.iter().map(|pp| pp.exponent).max().unwrap_or(0)
    }

    /// Number of distinct prime factors.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn is_smooth(&self, bound: &BigUint) -> bool {
        self.factors.iter().all(|pp| &pp.prime <= bound)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for pp in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (pp.exponent as usize + 1));
            for d in &divs {
                let mut x = d.clone();
                next.push(x.clone());
                for _ in 0..pp.exponent {
                    x *= &pp.prime;
                    next.push(x.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

fn sieve(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn primes_up_to(bound: u32) -> std::borrow::Cow<'static, [u32]> {
    static DEFAULT: OnceLock<Vec<u32>> = OnceLock::new();
    if bound == DEFAULT_TRIAL_BOUND {
        std::borrow::Cow::Borrowed(DEFAULT.get_or_init(|| sieve(DEFAULT_TRIAL_BOUND)))
    } else {
        std::borrow::Cow::Owned(sieve(bound))
    }
}

fn miller_rabin(n: &BigUint, base: u32) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let a = BigUint::from(base) % n;
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

pub fn primality(n: &BigUint) -> Primality {
    if n < &BigUint::from(2u32) {
        return Primality::Composite;
    }
    for &p in &MR_BASES {
        let bp = BigUint::from(p);
        if n == &bp {
            return Primality::Prime;
        }
        if (n % &bp).is_zero() {
            return Primality::Composite;
        }
    }
    if MR_BASES.iter().all(|&b| miller_rabin(n, b)) {
        // deterministic for n < 3_317_044_064_679_887_385_961_981
        let limit: BigUint = "3317044064679887385961981".parse().expect("constant");
        if n < &limit {
            Primality::Prime
        } else {
            Primality::ProbablePrime
        }
    } else {
        Primality::Composite
    }
}

/// One nontrivial factor of the composite `n` by Brent's variant of Pollard
/// rho, or `None` when the iteration budget runs out.
fn pollard_brent(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    const BATCH: u64 = 128;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        let mut r: u64 = 1;
        let mut acc = one.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    acc = (acc * diff) % n;
                }
                if *budget < lim {
                    return None;
                }
                *budget -= lim;
                g = acc.gcd(n);
                k += lim;
            }
            r *= 2;
        }
        if &g == n {
            // batch overshot; back up one step at a time
            loop {
                ys = step(&ys);
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Complete factorization of `n >= 1` (1 factors as the empty product).
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::usage("cannot factor 0"));
    }
    let mut remaining = n.clone();
    let mut found: Vec<BigUint> = Vec::new();
    let primes = primes_up_to(budget.trial_bound);
    for &p in primes.iter() {
        let bp = BigUint::from(p);
        if &bp * &bp > remaining {
            break;
        }
        while (&remaining % p).is_zero() {
            remaining /= p;
            found.push(bp.clone());
        }
    }
    let mut probable = false;
    if !remaining.is_one() {
        let bound = BigUint::from(budget.trial_bound);
        if remaining <= &bound * &bound {
            found.push(remaining);
        } else {
            let mut rho_budget = budget.rho_iterations;
            let mut stack = vec![remaining];
            while let Some(m) = stack.pop() {
                if m.is_one() {
                    continue;
                }
                match primality(&m) {
                    Primality::Prime => found.push(m),
                    Primality::ProbablePrime => {
                        probable = true;
                        found.push(m);
                    }
                    Primality::Composite => {
                        let Some(d) = pollard_brent(&m, &mut rho_budget) else {
                            return Err(Error::FactorBudgetExceeded(n.to_string()));
                        };
                        let e = &m / &d;
                        stack.push(d);
                        stack.push(e);
                    }
                }
            }
        }
    }
    found.sort();
    let mut factors: Vec<PrimePower> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => factors.push(PrimePower {
                prime: p,
                exponent: 1,
            }),
        }
    }
    Ok(Factorization { factors, probable })
}

pub fn factorize_u64(n: u64, budget: &FactorBudget) -> Result<Factorization> {
    factorize(&BigUint::from(n), budget)
}

/// `q^n - 1`.
pub fn group_order(q: u32, n: usize) -> BigUint {
    super::poly::big_pow(q, n) - BigUint::one()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessRow {
    pub n: u32,
    #[serde(serialize_with = "ser_decimal")]
    pub max_prime: BigUint,
    pub max_exponent: u32,
    /// `max_i max(e_i * n, e_i * p_i)`.
    #[serde(serialize_with = "ser_decimal")]
    pub cost_bound: BigUint,
    pub distinct_primes: usize,
    pub n_squared: u64,
}

impl SmoothnessRow {
    pub fn from_factorization(n: u32, f: &Factorization) -> Self {
        let nn = BigUint::from(n);
        let cost_bound = f
            .factors()
            .iter()
            .map(|pp| {
                let e = BigUint::from(pp.exponent);
                (&e * &nn).max(&e * &pp.prime)
            })
            .max()
            .unwrap_or_default();
        SmoothnessRow {
            n,
            max_prime: f.max_prime().cloned().unwrap_or_default(),
            max_exponent: f.max_exponent(),
            cost_bound,
            distinct_primes: f.distinct_primes(),
            n_squared: (n as u64) * (n as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SmoothnessEntry {
    Smooth(SmoothnessRow),
    /// Factorization did not finish within budget; smoothness undecided.
    Unknown {
        n: u32,
        reason: String,
    },
}

impl SmoothnessEntry {
    pub fn n(&self) -> u32 {
        match self {
            SmoothnessEntry::Smooth(row) => row.n,
            SmoothnessEntry::Unknown { n, .. } => *n,
        }
    }
}

/// For every `n` in `n_min..=n_max`, factor `q^n - 1` and report it when it is
/// `n^2`-smooth. Values whose factorization exceeds the budget are reported
/// as [`SmoothnessEntry::Unknown`].
pub fn smoothness_report_range(
    q: u32,
    n_min: u32,
    n_max: u32,
    budget: &FactorBudget,
) -> Vec<SmoothnessEntry> {
    let mut out = Vec::new();
    for n in n_min.max(1)..=n_max {
        let order = group_order(q, n as usize);
        match factorize(&order, budget) {
            Ok(f) => {
                let bound = BigUint::from(n as u64 * n as u64);
                if f.is_smooth(&bound) {
                    out.push(SmoothnessEntry::Smooth(SmoothnessRow::from_factorization(
                        n, &f,
                    )));
                }
            }
            Err(e) => out.push(SmoothnessEntry::Unknown {
                n,
                reason: e.to_string(),
            }),
        }
    }
    out
}

pub fn smoothness_report(q: u32, n_max: u32, budget: &FactorBudget) -> Vec<SmoothnessEntry> {
    smoothness_report_range(q, SMOOTHNESS_MIN_N, n_max, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors()
            .iter()
            .map(|pp| (pp.prime.to_u64().unwrap(), pp.exponent))
            .collect()
    }

    #[test]
    fn small_factorizations() {
        let b = FactorBudget::default();
        assert_eq!(pairs(&factorize_u64(63, &b).unwrap()), vec![(3, 2), (7, 1)]);
        assert_eq!(pairs(&factorize_u64(15, &b).unwrap()), vec![(3, 1), (5, 1)]);
        assert_eq!(pairs(&factorize_u64(1, &b).unwrap()), vec![]);
        assert_eq!(pairs(&factorize_u64(97, &b).unwrap()), vec![(97, 1)]);
        assert!(factorize_u64(0, &b).is_err());
    }

    #[test]
    fn mersenne_48() {
        let f = factorize(&group_order(2, 48), &FactorBudget::default()).unwrap();
        assert_eq!(f.max_prime().unwrap(), &BigUint::from(673u32));
        assert_eq!(f.distinct_primes(), 9);
        assert_eq!(f.value(), group_order(2, 48));
    }

    #[test]
    fn rho_path_splits_large_semiprime() {
        // both factors above the trial bound
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(2_147_483_647u64);
        let n = &p * &q;
        let f = factorize(&n, &FactorBudget::default()).unwrap();
        assert_eq!(f.factors().len(), 2);
        assert_eq!(f.value(), n);
        assert!(!f.has_probable_primes());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let n = &p * &q * BigUint::from(1_000_037u64);
        let budget = FactorBudget {
            trial_bound: 1000,
            rho_iterations: 10,
        };
        assert!(matches!(
            factorize(&n, &budget),
            Err(Error::FactorBudgetExceeded(_))
        ));
    }

    #[test]
    fn divisors_sorted_and_complete() {
        let f = factorize_u64(60, &FactorBudget::default()).unwrap();
        let d: Vec<u64> = f.divisors().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
    }

    #[test]
    fn primality_checks() {
        assert_eq!(primality(&BigUint::from(2u32)), Primality::Prime);
        assert_eq!(primality(&BigUint::from(561u32)), Primality::Composite);
        assert_eq!(
            primality(&BigUint::from(2_147_483_647u64)),
            Primality::Prime
        );
        let big: BigUint = "170141183460469231731687303715884105727".parse().unwrap();
        assert_eq!(primality(&big), Primality::ProbablePrime);
    }

    #[test]
    fn smoothness_row_for_q2_n6() {
        let f = factorize(&group_order(2, 6), &FactorBudget::default()).unwrap();
        let row = SmoothnessRow::from_factorization(6, &f);
        assert_eq!(row.max_prime, BigUint::from(7u32));
        assert_eq!(row.max_exponent, 2);
        assert_eq!(row.distinct_primes, 2);
        assert_eq!(row.n_squared, 36);
        // max(2*6, 2*3, 1*6, 1*7) = 12
        assert_eq!(row.cost_bound, BigUint::from(12u32));
    }
}
