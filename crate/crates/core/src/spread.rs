//! Desarguesian spread codes.
//!
//! Messages `0 .. (q^n - 1)/(q^k - 1)` map to normalized points of the
//! projective space over `F_{q^k}` and from there, through [`des`], to
//! `k`-dimensional subspaces of `F_q^n`, `n = km`. Two point maps are
//! provided; they differ in the digit order of the tail:
//!
//! * [`Convention::Adhoc`]: `f(i) = (0, ..., 0, 1, phi^-1(i - S))`, with the
//!   first tail coordinate carrying the lowest digits.
//! * [`Convention::Enum`]: the lexicographic rank `ind`, where the last
//!   coordinate carries the lowest digits.
//!
//! Here `S_l = sum_{j=0}^{l} q^(jk)` and `eps(i)` is the least `l` with
//! `S_l > i`. All index arithmetic works on q-adic digit vectors.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{poly::big_pow, BaseField, FieldElement, FieldTower, MessageIndex};
use crate::subspace::{des, des_inv, normalize_point, ProjPoint, Subspace};

/// Codebooks larger than this are never materialized.
pub const MAX_CODEBOOK: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Adhoc,
    Enum,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Adhoc => "adhoc",
            Convention::Enum => "enum",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adhoc" => Ok(Convention::Adhoc),
            "enum" => Ok(Convention::Enum),
            _ => Err(Error::usage(format!(
                "unknown convention {s:?} (expected adhoc or enum)"
            ))),
        }
    }
}

#[derive(Debug)]
pub struct SpreadCode {
    tower: FieldTower,
    m: usize,
    codebook: OnceLock<Vec<Subspace>>,
}

impl Clone for SpreadCode {
    fn clone(&self) -> Self {
        SpreadCode::new(self.tower.clone(), self.m).expect("already validated")
    }
}

impl SpreadCode {
    pub fn new(tower: FieldTower, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::usage("m must be at least 1"));
        }
        Ok(SpreadCode {
            tower,
            m,
            codebook: OnceLock::new(),
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn field(&self) -> &BaseField {
        self.tower.base()
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn k(&self) -> usize {
        self.tower.k()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.k() * self.m
    }

    /// `(q^n - 1) / (q^k - 1)`.
    pub fn size(&self) -> BigUint {
        self.s_index(self.m as isize - 1).to_biguint()
    }

    /// `S_l` as a digit vector: ones at positions `0, k, ..., lk`. `S_-1 = 0`.
    fn s_index(&self, l: isize) -> MessageIndex {
        let k = self.k();
        if l < 0 {
            return MessageIndex::zero(self.q());
        }
        let l = l as usize;
        let mut digits = vec![0u32; l * k + 1];
        for j in 0..=l {
            digits[j * k] = 1;
        }
        MessageIndex::from_digits(self.q(), digits).expect("digits are 0 or 1")
    }

    fn to_radix(&self, i: &MessageIndex) -> MessageIndex {
        if i.radix() == self.q() {
            i.clone()
        } else {
            MessageIndex::from_biguint(&i.to_biguint(), self.q())
        }
    }

    fn check_message(&self, i: &MessageIndex) -> Result<MessageIndex> {
        let i = self.to_radix(i);
        if i >= self.s_index(self.m as isize - 1) {
            return Err(Error::MessageOutOfRange {
                message: i.to_string(),
                size: self.size().to_string(),
            });
        }
        Ok(i)
    }

    /// `eps(i)` from the digits of `i`. Let `t` be the highest nonzero digit
    /// and `c = floor(t / k)`. If `t > ck` then `eps = c + 1`; otherwise
    /// compare `i` with `S_c - 1`, whose digits are ones at `k, 2k, ..., ck`.
    pub fn epsilon(&self, i: &MessageIndex) -> Result<usize> {
        let i = self.check_message(i)?;
        Ok(self.epsilon_unchecked(&i))
    }

    fn epsilon_unchecked(&self, i: &MessageIndex) -> usize {
        let k = self.k();
        let Some(t) = i.highest_nonzero() else {
            return 0;
        };
        let c = t / k;
        if c * k < t {
            return c + 1;
        }
        // positions above ck are zero, so compare positions ck down to 0
        for pos in (0..=t).rev() {
            let bound = u32::from(pos % k == 0 && pos > 0);
            match i.digit(pos).cmp(&bound) {
                std::cmp::Ordering::Equal => continue,
                std::cmp::Ordering::Less => return c,
                std::cmp::Ordering::Greater => return c + 1,
            }
        }
        c
    }

    /// Point with `m - eps - 1` leading zeros, a 1, then `tail`.
    fn point_with_tail(&self, tail: Vec<FieldElement>) -> ProjPoint {
        let ext = self.tower.ext();
        let mut coords = vec![ext.zero(); self.m - tail.len() - 1];
        coords.push(ext.one());
        coords.extend(tail);
        ProjPoint::new_unchecked(coords)
    }

    fn check_point(&self, pt: &ProjPoint) -> Result<()> {
        if pt.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, code has m = {}",
                pt.len(),
                self.m
            )));
        }
        ProjPoint::new(self.tower.ext(), pt.coords().to_vec()).map(|_| ())
    }

    /// `f(i) = (0, ..., 0, 1, phi_{k,eps}^-1(i - S_{eps-1}))`.
    pub fn f_map(&self, i: &MessageIndex) -> Result<ProjPoint> {
        let i = self.check_message(i)?;
        let eps = self.epsilon_unchecked(&i);
        let rest = i
            .checked_sub(&self.s_index(eps as isize - 1))
            .expect("S_(eps-1) <= i");
        let tail = self.tower.ext().phi_adic_inv(&rest, eps)?;
        Ok(self.point_with_tail(tail))
    }

    /// Inverse of [`SpreadCode::f_map`].
    pub fn f_inv(&self, pt: &ProjPoint) -> Result<MessageIndex> {
        self.check_point(pt)?;
        let lead = pt.leading_position();
        let eps = self.m - 1 - lead;
        let tail = &pt.coords()[lead + 1..];
        let phi = self.tower.ext().phi_adic(tail)?;
        Ok(phi.add(&self.s_index(eps as isize - 1)))
    }

    pub fn enc1(&self, i: &MessageIndex) -> Result<Subspace> {
        Ok(des(self.tower.ext(), &self.f_map(i)?))
    }

    pub fn retrieve1(&self, u: &Subspace) -> Result<MessageIndex> {
        self.f_inv(&self.des_inv(u)?)
    }

    fn des_inv(&self, u: &Subspace) -> Result<ProjPoint> {
        if u.ambient_dim() != self.n() {
            return Err(Error::NotSpreadCodeword);
        }
        des_inv(self.tower.ext(), u)
    }

    /// `bar_phi(u) = sum_j phi(u_(last - j)) q^(kj)`: [`ExtField::phi_adic`]
    /// of the reversed tuple.
    ///
    /// [`ExtField::phi_adic`]: crate::ff::ExtField::phi_adic
    pub fn bar_phi(&self, tail: &[FieldElement]) -> Result<MessageIndex> {
        let reversed: Vec<FieldElement> = tail.iter().rev().cloned().collect();
        self.tower.ext().phi_adic(&reversed)
    }

    /// Number of normalized points of length `m` starting with `prefix`.
    pub fn enu_m(&self, prefix: &[FieldElement]) -> Result<BigUint> {
        let j = prefix.len();
        if j > self.m {
            return Err(Error::usage(format!("prefix longer than m = {}", self.m)));
        }
        let ext = self.tower.ext();
        for c in prefix {
            ext.check(c)?;
        }
        match prefix.iter().find(|c| !c.is_zero()) {
            None => Ok(self.s_index(self.m as isize - j as isize - 1).to_biguint()),
            Some(lead) if *lead == ext.one() => Ok(big_pow(self.q(), self.k() * (self.m - j))),
            Some(_) => Err(Error::usage("prefix is not normalized")),
        }
    }

    /// Lexicographic rank among normalized points, coordinates ordered by
    /// `phi`: `sum_{j=0}^{eps-1} (phi(u_(m-j)) + 1) q^(kj)`.
    pub fn ind(&self, pt: &ProjPoint) -> Result<MessageIndex> {
        self.check_point(pt)?;
        let lead = pt.leading_position();
        let eps = self.m - 1 - lead;
        let tail = &pt.coords()[lead + 1..];
        Ok(self.bar_phi(tail)?.add(&self.s_index(eps as isize - 1)))
    }

    /// Inverse of [`SpreadCode::ind`].
    pub fn ind_inv(&self, i: &MessageIndex) -> Result<ProjPoint> {
        let i = self.check_message(i)?;
        let eps = self.epsilon_unchecked(&i);
        let rest = i
            .checked_sub(&self.s_index(eps as isize - 1))
            .expect("S_(eps-1) <= i");
        let mut tail = self.tower.ext().phi_adic_inv(&rest, eps)?;
        tail.reverse();
        Ok(self.point_with_tail(tail))
    }

    pub fn enc1_bar(&self, i: &MessageIndex) -> Result<Subspace> {
        Ok(des(self.tower.ext(), &self.ind_inv(i)?))
    }

    pub fn retrieve_enum(&self, u: &Subspace) -> Result<MessageIndex> {
        self.ind(&self.des_inv(u)?)
    }

    pub fn encode(&self, i: &MessageIndex, convention: Convention) -> Result<Subspace> {
        match convention {
            Convention::Adhoc => self.enc1(i),
            Convention::Enum => self.enc1_bar(i),
        }
    }

    pub fn retrieve(&self, u: &Subspace, convention: Convention) -> Result<MessageIndex> {
        match convention {
            Convention::Adhoc => self.retrieve1(u),
            Convention::Enum => self.retrieve_enum(u),
        }
    }

    /// The point whose codeword contains the nonzero vector `v`. Spread
    /// elements partition the nonzero vectors, so one vector decides it.
    pub fn point_of_vector(&self, v: &[u32]) -> Result<ProjPoint> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, code lives in dimension {}",
                v.len(),
                self.n()
            )));
        }
        let ext = self.tower.ext();
        let lifted = v
            .chunks(self.k())
            .map(|block| ext.psi(block))
            .collect::<Result<Vec<_>>>()?;
        normalize_point(ext, &lifted)
    }

    /// Message of the codeword containing the nonzero vector `v`.
    pub fn retrieve_vector(&self, v: &[u32], convention: Convention) -> Result<MessageIndex> {
        let pt = self.point_of_vector(v)?;
        match convention {
            Convention::Adhoc => self.f_inv(&pt),
            Convention::Enum => self.ind(&pt),
        }
    }

    /// Codewords in message order under [`Convention::Adhoc`]. Built on first
    /// use; fails for codes with more than [`MAX_CODEBOOK`] codewords.
    pub fn codebook(&self) -> Result<&[Subspace]> {
        if let Some(cb) = self.codebook.get() {
            return Ok(cb);
        }
        let size = self.size();
        let count = usize::try_from(&size)
            .ok()
            .filter(|&c| c <= MAX_CODEBOOK)
            .ok_or_else(|| {
                Error::CodebookTooSmall(format!("{size} codewords is too many to materialize"))
            })?;
        let cb = (0..count)
            .map(|i| self.enc1(&MessageIndex::from_u64(i as u64, self.q())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.codebook.get_or_init(|| cb))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadReport {
    pub passed: bool,
    pub expected_size: String,
    pub size: usize,
    /// Indices of codewords whose dimension is not `k` or ambient is not `n`.
    pub wrong_shape: Vec<usize>,
    /// `(i, j, dim(U_i ∩ U_j))` for every pair meeting nontrivially.
    pub offending_pairs: Vec<(usize, usize, usize)>,
    /// `sum (q^k - 1)` over codewords, compared against `q^n - 1`.
    pub covered_vectors: String,
    pub ambient_nonzero_vectors: String,
}

/// Checks that `codebook` is a `k`-spread of `F_q^n`: the right size, pairwise
/// trivial intersections, and nonzero vectors counted exactly once.
pub fn verify_spread(f: &BaseField, codebook: &[Subspace], k: usize, n: usize) -> SpreadReport {
    let q = f.order();
    let one = BigUint::from(1u32);
    let ambient = big_pow(q, n) - &one;
    let block = big_pow(q, k) - &one;
    let expected = if k > 0 && n.is_multiple_of(k) {
        &ambient / &block
    } else {
        BigUint::from(0u32)
    };
    let wrong_shape: Vec<usize> = codebook
        .iter()
        .enumerate()
        .filter(|(_, u)| u.dim() != k || u.ambient_dim() != n)
        .map(|(i, _)| i)
        .collect();
    let mut offending_pairs: Vec<(usize, usize, usize)> = (0..codebook.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = &codebook[i];
            (i + 1..codebook.len()).filter_map(move |j| {
                let d = a.intersection_dim(f, &codebook[j]).unwrap_or(usize::MAX);
                (d != 0).then_some((i, j, d))
            })
        })
        .collect();
    offending_pairs.sort_unstable();
    let covered: BigUint = codebook.iter().map(|u| big_pow(q, u.dim()) - &one).sum();
    let passed = wrong_shape.is_empty()
        && offending_pairs.is_empty()
        && BigUint::from(codebook.len()) == expected
        && covered == ambient;
    SpreadReport {
        passed,
        expected_size: expected.to_string(),
        size: codebook.len(),
        wrong_shape,
        offending_pairs,
        covered_vectors: covered.to_string(),
        ambient_nonzero_vectors: ambient.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::ff::{ExtField, TowerSpec};
    use crate::linalg::Matrix;
    use crate::subspace::all_points;

    fn code(p: u32, r: usize, k: usize, m: usize) -> SpreadCode {
        let tower = FieldTower::from_spec(&TowerSpec {
            p,
            r,
            modulus_q: None,
            k,
            modulus_k: None,
        })
        .unwrap();
        SpreadCode::new(tower, m).unwrap()
    }

    fn idx(c: &SpreadCode, i: u64) -> MessageIndex {
        MessageIndex::from_u64(i, c.q())
    }

    fn el(c: &SpreadCode, coeffs: &[u32]) -> FieldElement {
        c.tower().ext().psi(coeffs).unwrap()
    }

    /// `eps(i) = min { l : sum_{j<=l} q^(jk) >= i + 1 }` by direct summation.
    fn epsilon_naive(q: u64, k: u32, i: u64) -> usize {
        let mut s = 0u64;
        for l in 0.. {
            s += q.pow(k * l as u32);
            if s > i {
                return l;
            }
        }
        unreachable!()
    }

    #[test]
    fn epsilon_examples() {
        let c = code(2, 1, 2, 3);
        assert_eq!(c.epsilon(&idx(&c, 0)).unwrap(), 0);
        assert_eq!(c.epsilon(&idx(&c, 14)).unwrap(), 2);
        assert_eq!(c.epsilon(&idx(&c, 4)).unwrap(), 1);
        assert!(matches!(
            c.epsilon(&idx(&c, 21)),
            Err(Error::MessageOutOfRange { .. })
        ));
    }

    #[test]
    fn epsilon_digit_procedure_matches_summation() {
        for (p, r, k, m) in [
            (2, 1, 2, 3),
            (2, 1, 3, 3),
            (3, 1, 2, 3),
            (2, 2, 2, 3),
            (5, 1, 1, 4),
            (2, 1, 1, 8),
        ] {
            let c = code(p, r, k, m);
            let size = u64::try_from(c.size()).unwrap();
            let q = c.q() as u64;
            for i in 0..size {
                assert_eq!(
                    c.epsilon(&idx(&c, i)).unwrap(),
                    epsilon_naive(q, k as u32, i),
                    "q={q} k={k} i={i}"
                );
            }
        }
    }

    #[test]
    fn f_table_entries() {
        let c = code(2, 1, 2, 3);
        let e = c.tower().ext();
        let (z, o, a) = (e.zero(), e.one(), e.alpha());
        let a2 = e.mul(&a, &a);
        let expect = [
            (0, vec![z.clone(), z.clone(), o.clone()]),
            (3, vec![z.clone(), o.clone(), a.clone()]),
            (4, vec![z.clone(), o.clone(), a2.clone()]),
            (5, vec![o.clone(), z.clone(), z.clone()]),
            (9, vec![o.clone(), z.clone(), o.clone()]),
        ];
        for (i, coords) in expect {
            assert_eq!(
                c.f_map(&idx(&c, i)).unwrap().coords(),
                coords.as_slice(),
                "f({i})"
            );
        }
    }

    #[test]
    fn enc1_examples() {
        let c = code(2, 1, 2, 3);
        let p = c.tower().companion();
        let id = Matrix::identity(2);
        let u = c.enc1(&idx(&c, 14)).unwrap();
        assert_eq!(
            u.basis(),
            &Matrix::hconcat(&[id.clone(), id.clone(), p]).unwrap()
        );
        let z = Matrix::zeros(2, 2);
        let u0 = c.enc1(&idx(&c, 0)).unwrap();
        assert_eq!(u0.basis(), &Matrix::hconcat(&[z.clone(), z, id]).unwrap());
    }

    #[test]
    fn retrieve1_example() {
        let c = code(2, 1, 2, 3);
        let e = c.tower().ext();
        let a1 = el(&c, &[1, 1]);
        let m = Matrix::hconcat(&[
            c.tower().rho(&e.one()),
            c.tower().rho(&a1),
            c.tower().rho(&e.one()),
        ])
        .unwrap();
        let u = Subspace::row_space(c.field(), &m);
        assert_eq!(c.retrieve1(&u).unwrap().to_u64(), Some(12));
    }

    #[test]
    fn ind_examples() {
        let c = code(2, 1, 2, 3);
        let e = c.tower().ext();
        let (z, o, a) = (e.zero(), e.one(), e.alpha());
        let a2 = e.mul(&a, &a);
        let pt = |v: Vec<FieldElement>| ProjPoint::new(e, v).unwrap();
        assert_eq!(
            c.ind(&pt(vec![z.clone(), z.clone(), o.clone()]))
                .unwrap()
                .to_u64(),
            Some(0)
        );
        assert_eq!(
            c.ind(&pt(vec![z.clone(), o.clone(), a.clone()]))
                .unwrap()
                .to_u64(),
            Some(3)
        );
        assert_eq!(
            c.ind(&pt(vec![o.clone(), z.clone(), o.clone()]))
                .unwrap()
                .to_u64(),
            Some(6)
        );
        assert_eq!(
            c.ind(&pt(vec![o.clone(), a2.clone(), o.clone()]))
                .unwrap()
                .to_u64(),
            Some(18)
        );
        assert_eq!(
            c.bar_phi(&[a2.clone(), o.clone()]).unwrap().to_u64(),
            Some(13)
        );
        assert_eq!(c.bar_phi(&[z]).unwrap().to_u64(), Some(0));
        let u = des(e, &pt(vec![o.clone(), a2, o]));
        assert_eq!(c.retrieve_enum(&u).unwrap().to_u64(), Some(18));
    }

    #[test]
    fn enu_m_matches_enumeration() {
        let c = code(2, 1, 2, 3);
        let e = c.tower().ext();
        let points = all_points(e, 3);
        let count = |prefix: &[FieldElement]| {
            points
                .iter()
                .filter(|p| p.coords()[..prefix.len()] == *prefix)
                .count()
        };
        let elems: Vec<FieldElement> = e.elements().collect();
        for j in 0..=3usize {
            let mut prefixes: Vec<Vec<FieldElement>> = vec![vec![]];
            for _ in 0..j {
                prefixes = prefixes
                    .into_iter()
                    .flat_map(|p| {
                        elems.iter().map(move |x| {
                            let mut p = p.clone();
                            p.push(x.clone());
                            p
                        })
                    })
                    .collect();
            }
            for prefix in prefixes {
                let normalized = prefix
                    .iter()
                    .find(|x| !x.is_zero())
                    .is_none_or(|x| *x == e.one());
                match c.enu_m(&prefix) {
                    Ok(v) => {
                        assert!(normalized);
                        assert_eq!(v, BigUint::from(count(&prefix)), "{prefix:?}");
                    }
                    Err(_) => assert!(!normalized),
                }
            }
        }
        assert_eq!(c.enu_m(&[e.zero()]).unwrap(), BigUint::from(5u32));
        assert_eq!(c.enu_m(&[e.zero(), e.zero()]).unwrap(), BigUint::from(1u32));
        assert_eq!(c.enu_m(&[e.one()]).unwrap(), BigUint::from(16u32));
        assert_eq!(
            c.enu_m(&[e.zero(), e.zero(), e.zero()]).unwrap(),
            BigUint::from(0u32)
        );
    }

    #[test]
    fn ind_is_the_lexicographic_rank() {
        for (p, r, k, m) in [(2, 1, 2, 3), (3, 1, 2, 2), (2, 1, 3, 2), (2, 2, 1, 3)] {
            let c = code(p, r, k, m);
            let e = c.tower().ext();
            let mut points = all_points(e, m);
            points.sort_by_key(|pt| {
                pt.coords()
                    .iter()
                    .map(|x| e.element_index(x))
                    .collect::<Vec<_>>()
            });
            for (rank, pt) in points.iter().enumerate() {
                assert_eq!(c.ind(pt).unwrap().to_u64(), Some(rank as u64));
                assert_eq!(&c.ind_inv(&idx(&c, rank as u64)).unwrap(), pt);
            }
        }
    }

    #[test]
    fn bar_phi_is_reversed_phi_adic() {
        let c = code(2, 1, 2, 6);
        let e = c.tower().ext();
        for eps in 1..=6usize {
            let total = 1u64 << (2 * eps);
            for i in 0..total.min(4096) {
                let tail = e.phi_adic_inv(&idx(&c, i), eps).unwrap();
                let reversed: Vec<_> = tail.iter().rev().cloned().collect();
                assert_eq!(c.bar_phi(&tail).unwrap(), e.phi_adic(&reversed).unwrap());
            }
        }
    }

    #[test]
    fn both_conventions_round_trip_and_agree_on_codebook() {
        for (p, r, k, m) in [(2, 1, 2, 3), (3, 1, 2, 2), (2, 1, 3, 2), (2, 2, 2, 2)] {
            let c = code(p, r, k, m);
            let size = u64::try_from(c.size()).unwrap();
            let mut adhoc = HashSet::new();
            let mut en = HashSet::new();
            for i in 0..size {
                let i = idx(&c, i);
                let u = c.enc1(&i).unwrap();
                assert_eq!(c.retrieve1(&u).unwrap(), i);
                assert_eq!(c.f_inv(&c.f_map(&i).unwrap()).unwrap(), i);
                adhoc.insert(u.clone());
                let v = c.enc1_bar(&i).unwrap();
                assert_eq!(c.retrieve_enum(&v).unwrap(), i);
                assert_eq!(
                    c.retrieve_enum(&u).unwrap(),
                    c.ind(&des_inv(e_of(&c), &u).unwrap()).unwrap()
                );
                en.insert(v);
            }
            assert_eq!(adhoc.len() as u64, size);
            assert_eq!(adhoc, en);
        }
    }

    fn e_of(c: &SpreadCode) -> &ExtField {
        c.tower().ext()
    }

    #[test]
    fn spread_verification() {
        let c = code(3, 1, 2, 2);
        let report = verify_spread(c.field(), c.codebook().unwrap(), 2, 4);
        assert!(report.passed, "{report:?}");
        assert_eq!(report.size, 10);
        let mut dup = c.codebook().unwrap().to_vec();
        dup[3] = dup[7].clone();
        let report = verify_spread(c.field(), &dup, 2, 4);
        assert!(!report.passed);
        assert_eq!(report.offending_pairs, vec![(3, 7, 2)]);
    }

    #[test]
    fn single_block_code() {
        let c = code(2, 1, 3, 1);
        assert_eq!(c.size(), BigUint::from(1u32));
        assert_eq!(c.enc1(&idx(&c, 0)).unwrap(), Subspace::full(3));
        assert!(c.enc1(&idx(&c, 1)).is_err());
        assert_eq!(c.retrieve1(&Subspace::full(3)).unwrap().to_u64(), Some(0));
    }

    #[test]
    fn out_of_range_message() {
        let c = code(2, 1, 2, 3);
        let err = c.enc1(&idx(&c, 21)).unwrap_err();
        assert!(err.to_string().starts_with("message exceeds code size"));
    }

    #[test]
    fn large_index_round_trip() {
        let c = code(3, 1, 2, 24);
        let last = c.size() - 1u32;
        let mid = MessageIndex::parse_decimal("7976644307687250986336", 3).unwrap();
        for i in [MessageIndex::from_biguint(&last, 3), mid] {
            assert!(i.to_biguint() < c.size());
            let u = c.enc1(&i).unwrap();
            assert_eq!(c.retrieve1(&u).unwrap(), i);
            let v = c.enc1_bar(&i).unwrap();
            assert_eq!(c.retrieve_enum(&v).unwrap(), i);
        }
    }
}
