//! Subspaces of `F_q^n` in canonical form, projective points over `F_{q^k}`
//! and the blockwise map `des` between them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{rho, BaseField, ExtField, FieldElement};
use crate::linalg::{intersection_dim, Matrix};

/// A subspace stored as its RREF basis with zero rows removed. Two
/// subspaces are equal exactly when their bases are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Row space of `m`.
    pub fn row_space(f: &BaseField, m: &Matrix) -> Self {
        let (r, rank) = m.rref(f);
        Subspace {
            basis: r.top_rows(rank),
        }
    }

    /// Like [`Subspace::row_space`], but validates entries first.
    pub fn try_row_space(f: &BaseField, m: &Matrix) -> Result<Self> {
        m.check_entries(f)?;
        Ok(Self::row_space(f, m))
    }

    /// Wraps a matrix already known to be in RREF with full row rank.
    pub(crate) fn from_rref(basis: Matrix) -> Self {
        Subspace { basis }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `dim U + dim V - 2 dim(U ∩ V)`.
    pub fn distance(&self, f: &BaseField, other: &Subspace) -> Result<usize> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {} differ",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        let common = intersection_dim(f, &self.basis, &other.basis)?;
        Ok(self.dim() + other.dim() - 2 * common)
    }

    pub fn intersection_dim(&self, f: &BaseField, other: &Subspace) -> Result<usize> {
        intersection_dim(f, &self.basis, &other.basis)
    }

    pub fn contains_vector(&self, f: &BaseField, v: &[u32]) -> bool {
        let row = Matrix::from_vec(1, v.len(), v.to_vec());
        v.len() == self.ambient_dim()
            && self
                .basis
                .vstack(&row)
                .is_ok_and(|m| m.rank(f) == self.dim())
    }

    /// Row space of `basis * a`.
    pub fn transform(&self, f: &BaseField, a: &Matrix) -> Result<Subspace> {
        Ok(Self::row_space(f, &self.basis.mul(f, a)?))
    }
}

pub fn subspace_distance(f: &BaseField, u: &Subspace, v: &Subspace) -> Result<usize> {
    u.distance(f, v)
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.basis.row_vecs())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.basis, f)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// Deserializes the stored basis as-is; callers holding a field should pass
/// it through [`Subspace::row_space`] to canonicalize.
impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Subspace {
            basis: Matrix::deserialize(d)?,
        })
    }
}

/// A point of the projective space over `F_{q^k}`: a nonzero vector whose
/// first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// 0-based position of the leading 1.
    pub fn leading_position(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective points are nonzero")
    }

    /// Accepts `coords` only if it is already normalized.
    pub fn new(ext: &ExtField, coords: Vec<FieldElement>) -> Result<Self> {
        for c in &coords {
            ext.check(c)?;
        }
        match coords.iter().find(|c| !c.is_zero()) {
            None => Err(Error::usage("projective point cannot be the zero vector")),
            Some(lead) if *lead != ext.one() => {
                Err(Error::usage("first nonzero coordinate must be 1"))
            }
            Some(_) => Ok(ProjPoint { coords }),
        }
    }

    pub(crate) fn new_unchecked(coords: Vec<FieldElement>) -> Self {
        ProjPoint { coords }
    }
}

/// Divides `v` by its first nonzero coordinate.
pub fn normalize_point(ext: &ExtField, v: &[FieldElement]) -> Result<ProjPoint> {
    for c in v {
        ext.check(c)?;
    }
    let lead = v
        .iter()
        .find(|c| !c.is_zero())
        .ok_or_else(|| Error::usage("cannot normalize the zero vector"))?;
    let inv = ext.inv(lead)?;
    Ok(ProjPoint {
        coords: v.iter().map(|c| ext.mul(c, &inv)).collect(),
    })
}

/// `des(u) = rs(rho(u_1), ..., rho(u_m))`. For a normalized point the block
/// matrix is already in RREF: zero blocks, then an identity block.
pub fn des(ext: &ExtField, pt: &ProjPoint) -> Subspace {
    let blocks: Vec<Matrix> = pt.coords.iter().map(|u| rho(ext, u)).collect();
    let basis = Matrix::hconcat(&blocks).expect("blocks share k rows");
    debug_assert_eq!(basis.rref(ext.base()).0, basis);
    Subspace::from_rref(basis)
}

/// Inverse of [`des`]. Reads the first basis row in blocks of `k`, lifts each
/// block through `psi_k`, normalizes, and checks that `des` gives `u` back.
pub fn des_inv(ext: &ExtField, u: &Subspace) -> Result<ProjPoint> {
    let k = ext.degree();
    let n = u.ambient_dim();
    if u.dim() != k || !n.is_multiple_of(k) || n == 0 {
        return Err(Error::NotSpreadCodeword);
    }
    let lifted = u
        .basis()
        .row(0)
        .chunks(k)
        .map(|block| ext.psi(block))
        .collect::<Result<Vec<_>>>()?;
    let pt = normalize_point(ext, &lifted)?;
    if des(ext, &pt) != *u {
        return Err(Error::NotSpreadCodeword);
    }
    Ok(pt)
}

/// Every normalized point of length `m`, ordered by leading position from
/// the right and then by the tail's coefficient digits (desk scale only).
pub fn all_points(ext: &ExtField, m: usize) -> Vec<ProjPoint> {
    let elements: Vec<FieldElement> = ext.elements().collect();
    let mut out = Vec::new();
    for lead in (0..m).rev() {
        let tail_len = m - lead - 1;
        let total = elements.len().pow(tail_len as u32);
        for mut t in 0..total {
            let mut coords = vec![ext.zero(); lead];
            coords.push(ext.one());
            for _ in 0..tail_len {
                coords.push(elements[t % elements.len()].clone());
                t /= elements.len();
            }
            out.push(ProjPoint { coords });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn f4() -> ExtField {
        ExtField::new(Arc::new(BaseField::prime(2).unwrap()), vec![1, 1, 1]).unwrap()
    }

    fn el(ext: &ExtField, c: &[u32]) -> FieldElement {
        ext.psi(c).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let e = f4();
        let a = el(&e, &[0, 1]);
        let a1 = el(&e, &[1, 1]);
        let a2 = e.mul(&a, &a);
        let pt = normalize_point(&e, &[a.clone(), e.one(), a.clone()]).unwrap();
        assert_eq!(pt.coords(), &[e.one(), a1.clone(), e.one()]);
        assert_eq!(normalize_point(&e, pt.coords()).unwrap(), pt);
        // alpha * alpha^-2 = alpha^-1 = alpha^2
        let pt = normalize_point(&e, &[e.zero(), a2.clone(), a.clone()]).unwrap();
        assert_eq!(pt.coords(), &[e.zero(), e.one(), a2]);
        assert!(normalize_point(&e, &[e.zero(), e.zero()]).is_err());
    }

    #[test]
    fn des_examples() {
        let e = f4();
        let a = el(&e, &[0, 1]);
        let pt = ProjPoint::new(&e, vec![e.one(), a]).unwrap();
        assert_eq!(
            des(&e, &pt).basis(),
            &Matrix::from_rows(vec![vec![1, 0, 0, 1], vec![0, 1, 1, 1]])
        );
        let pt = ProjPoint::new(&e, vec![e.zero(), e.one()]).unwrap();
        assert_eq!(
            des(&e, &pt).basis(),
            &Matrix::from_rows(vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
        );
    }

    #[test]
    fn des_inv_of_retrieval_example() {
        let e = f4();
        let f = e.base();
        let a1 = el(&e, &[1, 1]);
        let m = Matrix::hconcat(&[rho(&e, &e.one()), rho(&e, &a1), rho(&e, &e.one())]).unwrap();
        let u = Subspace::row_space(f, &m);
        // (0,1,1,0,0,1) = second row of the block matrix, lies in U
        assert!(u.contains_vector(f, &[0, 1, 1, 0, 0, 1]));
        assert!(!u.contains_vector(f, &[0, 1, 1, 1, 0, 1]));
        let pt = des_inv(&e, &u).unwrap();
        assert_eq!(pt.coords(), &[e.one(), a1, e.one()]);
    }

    #[test]
    fn des_inv_rejects_non_spread_subspaces() {
        let e = f4();
        let f = e.base();
        let u = Subspace::row_space(
            f,
            &Matrix::from_rows(vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]]),
        );
        assert_eq!(des_inv(&e, &u), Err(Error::NotSpreadCodeword));
        let line = Subspace::row_space(f, &Matrix::from_rows(vec![vec![1, 0, 0, 0]]));
        assert_eq!(des_inv(&e, &line), Err(Error::NotSpreadCodeword));
    }

    #[test]
    fn des_round_trip_and_spread_property() {
        for (p, k, m) in [
            (2u32, 2usize, 2usize),
            (2, 2, 3),
            (2, 3, 2),
            (2, 3, 3),
            (3, 2, 2),
            (3, 2, 3),
            (3, 3, 2),
        ] {
            let e =
                ExtField::with_default_modulus(Arc::new(BaseField::prime(p).unwrap()), k).unwrap();
            let f = e.base();
            let points = all_points(&e, m);
            let q = p as usize;
            assert_eq!(
                points.len(),
                (q.pow((k * m) as u32) - 1) / (q.pow(k as u32) - 1)
            );
            let mut seen = std::collections::HashSet::new();
            for pt in &points {
                let u = des(&e, pt);
                assert_eq!(u.dim(), k);
                let blocks: Vec<Matrix> = pt.coords().iter().map(|c| rho(&e, c)).collect();
                let stacked = Matrix::hconcat(&blocks).unwrap();
                assert_eq!(u, Subspace::row_space(f, &stacked));
                assert_eq!(&des_inv(&e, &u).unwrap(), pt);
                assert!(seen.insert(u));
            }
            if points.len() <= 100 {
                let codewords: Vec<_> = seen.into_iter().collect();
                for (i, a) in codewords.iter().enumerate() {
                    for b in &codewords[i + 1..] {
                        assert_eq!(a.intersection_dim(f, b).unwrap(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn distance_basics() {
        let f = BaseField::prime(2).unwrap();
        let u = Subspace::row_space(&f, &Matrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 0]]));
        let v = Subspace::row_space(&f, &Matrix::from_rows(vec![vec![1, 0, 0], vec![0, 0, 1]]));
        assert_eq!(u.distance(&f, &u).unwrap(), 0);
        assert_eq!(u.distance(&f, &v).unwrap(), 2);
        assert!(u.distance(&f, &Subspace::full(4)).is_err());
    }
}
