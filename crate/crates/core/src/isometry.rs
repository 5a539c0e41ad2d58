//! Semi-linear isometries `U -> sigma(U A)` and the hybrid encoder built on
//! them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{BaseField, MessageIndex};
use crate::linalg::Matrix;
use crate::spread::{Convention, SpreadCode};
use crate::subspace::Subspace;

/// `U -> sigma(U A)` with `A` invertible and `sigma = x -> x^(p^s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiLinearIsometry {
    a: Matrix,
    a_inv: Matrix,
    s: usize,
}

/// Serialized form: `{"A": [[..]], "frobenius_power": s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsometryDocument {
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(default)]
    pub frobenius_power: usize,
}

impl SemiLinearIsometry {
    pub fn new(f: &BaseField, a: Matrix, s: usize) -> Result<Self> {
        a.check_entries(f)?;
        if a.rows() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "isometry matrix must be square, found {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if s >= f.degree() {
            return Err(Error::usage(format!(
                "frobenius power {s} must be below the base field degree {}",
                f.degree()
            )));
        }
        let a_inv = a.inverse(f)?;
        Ok(SemiLinearIsometry { a, a_inv, s })
    }

    pub fn identity(n: usize) -> Self {
        SemiLinearIsometry {
            a: Matrix::identity(n),
            a_inv: Matrix::identity(n),
            s: 0,
        }
    }

    pub fn from_document(f: &BaseField, doc: &IsometryDocument) -> Result<Self> {
        Self::new(f, doc.a.clone(), doc.frobenius_power)
    }

    pub fn to_document(&self) -> IsometryDocument {
        IsometryDocument {
            a: self.a.clone(),
            frobenius_power: self.s,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.a_inv
    }

    pub fn frobenius_power(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// The inverse map `V -> sigma^-1(V) A^-1`, itself semi-linear:
    /// `sigma^-1(V) A^-1 = sigma^-1(V sigma(A^-1))`.
    pub fn inverse(&self, f: &BaseField) -> Self {
        let s_inv = (f.degree() - self.s) % f.degree();
        let a = self.a_inv.map(|x| f.frobenius(x, self.s));
        let a_inv = self.a.map(|x| f.frobenius(x, self.s));
        SemiLinearIsometry { a, a_inv, s: s_inv }
    }

    /// `sigma(v A)` for a row vector.
    pub fn apply_vector(&self, f: &BaseField, v: &[u32]) -> Result<Vec<u32>> {
        let row = Matrix::from_vec(1, v.len(), v.to_vec());
        let w = row.mul(f, &self.a)?;
        Ok(w.data().iter().map(|&x| f.frobenius(x, self.s)).collect())
    }

    /// `sigma^-1(v) A^-1`.
    pub fn invert_vector(&self, f: &BaseField, v: &[u32]) -> Result<Vec<u32>> {
        let s_inv = (f.degree() - self.s) % f.degree();
        let row = Matrix::from_vec(
            1,
            v.len(),
            v.iter().map(|&x| f.frobenius(x, s_inv)).collect(),
        );
        Ok(row.mul(f, &self.a_inv)?.data().to_vec())
    }
}

/// `rs(sigma(U A))`.
pub fn apply_isometry(f: &BaseField, u: &Subspace, iso: &SemiLinearIsometry) -> Result<Subspace> {
    if u.ambient_dim() != iso.n() {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in dimension {}, isometry acts on dimension {}",
            u.ambient_dim(),
            iso.n()
        )));
    }
    let ua = u.basis().mul(f, &iso.a)?;
    Ok(Subspace::row_space(f, &ua.map(|x| f.frobenius(x, iso.s))))
}

/// `sigma(enc(i) A)`.
pub fn hybrid_encode<E>(
    f: &BaseField,
    iso: &SemiLinearIsometry,
    i: &MessageIndex,
    enc: E,
) -> Result<Subspace>
where
    E: FnOnce(&MessageIndex) -> Result<Subspace>,
{
    apply_isometry(f, &enc(i)?, iso)
}

/// Pulls one nonzero vector of `received` back through the isometry and
/// retrieves the message of the spread codeword containing it.
pub fn hybrid_retrieve(
    spread: &SpreadCode,
    convention: Convention,
    iso: &SemiLinearIsometry,
    received: &Subspace,
) -> Result<MessageIndex> {
    let f = spread.field();
    if received.ambient_dim() != iso.n() || iso.n() != spread.n() {
        return Err(Error::DimensionMismatch(format!(
            "received word in dimension {}, isometry {}, spread {}",
            received.ambient_dim(),
            iso.n(),
            spread.n()
        )));
    }
    if received.dim() == 0 {
        return Err(Error::NotACodeword);
    }
    let v = iso.invert_vector(f, received.basis().row(0))?;
    spread.retrieve_vector(&v, convention)
}

/// Checks that `iso` maps `c1` onto `c2` as sets.
pub fn maps_onto(
    f: &BaseField,
    iso: &SemiLinearIsometry,
    c1: &[Subspace],
    c2: &[Subspace],
) -> Result<bool> {
    let image = c1
        .iter()
        .map(|u| apply_isometry(f, u, iso))
        .collect::<Result<BTreeSet<_>>>()?;
    let target: BTreeSet<_> = c2.iter().cloned().collect();
    Ok(image == target)
}

/// Largest ambient dimension accepted by [`search_isometry`].
pub const MAX_SEARCH_DIM: usize = 4;

/// First invertible `A` over `F_2` (entries read as a binary number, row-major,
/// in increasing order) with `c1 A = c2`. Only for `n <= 4`.
pub fn search_isometry(
    f: &BaseField,
    c1: &[Subspace],
    c2: &[Subspace],
) -> Result<Option<SemiLinearIsometry>> {
    if f.order() != 2 {
        return Err(Error::usage("isometry search is only available over F_2"));
    }
    let n = match c1.first().or(c2.first()) {
        Some(u) => u.ambient_dim(),
        None => return Ok(None),
    };
    if n > MAX_SEARCH_DIM {
        return Err(Error::usage(format!(
            "isometry search is limited to n <= {MAX_SEARCH_DIM}"
        )));
    }
    if c1.len() != c2.len() {
        return Ok(None);
    }
    let target: BTreeSet<_> = c2.iter().cloned().collect();
    let cells = n * n;
    for bits in 0u32..(1 << cells) {
        let data = (0..cells).map(|c| (bits >> (cells - 1 - c)) & 1).collect();
        let a = Matrix::from_vec(n, n, data);
        if a.rank(f) != n {
            continue;
        }
        let iso = SemiLinearIsometry::new(f, a, 0)?;
        let mut hit = true;
        for u in c1 {
            if !target.contains(&apply_isometry(f, u, &iso)?) {
                hit = false;
                break;
            }
        }
        if hit {
            return Ok(Some(iso));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ff::moduli::{X2_X_1, X4_X_1};
    use crate::ff::{ExtField, FieldTower};
    use crate::orbit::{CyclicOrbitCode, Generator};
    use crate::subspace::subspace_distance;
    use proptest::prelude::*;

    fn f2() -> BaseField {
        BaseField::prime(2).unwrap()
    }

    fn hybrid_a() -> Matrix {
        Matrix::from_rows(vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 1, 0],
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 1],
        ])
    }

    fn spread_pair() -> (SpreadCode, Vec<Subspace>) {
        let tower = FieldTower::new(f2(), Some(X2_X_1.to_vec()), 2).unwrap();
        let spread = SpreadCode::new(tower, 2).unwrap();
        let base = Arc::new(f2());
        let ext = ExtField::new(base.clone(), X4_X_1.to_vec()).unwrap();
        let init = Matrix::from_rows(vec![vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let orbit = CyclicOrbitCode::new(base, &init, Generator::Companion(ext)).unwrap();
        (spread, orbit.codebook().unwrap())
    }

    #[test]
    fn vector_pullback() {
        let f = f2();
        let iso = SemiLinearIsometry::new(&f, hybrid_a(), 0).unwrap();
        // psi_4^-1(beta^2 + beta) = (0, 1, 1, 0)
        assert_eq!(
            iso.invert_vector(&f, &[0, 1, 1, 0]).unwrap(),
            vec![0, 1, 0, 0]
        );
        assert_eq!(
            iso.apply_vector(&f, &[0, 1, 0, 0]).unwrap(),
            vec![0, 1, 1, 0]
        );
    }

    #[test]
    fn given_matrix_maps_spread_onto_orbit() {
        let f = f2();
        let (spread, orbit) = spread_pair();
        let iso = SemiLinearIsometry::new(&f, hybrid_a(), 0).unwrap();
        assert!(maps_onto(&f, &iso, spread.codebook().unwrap(), &orbit).unwrap());
        for conv in [Convention::Adhoc, Convention::Enum] {
            for i in 0..5u64 {
                let i = MessageIndex::from_u64(i, 2);
                let sent = hybrid_encode(&f, &iso, &i, |i| spread.encode(i, conv)).unwrap();
                assert!(orbit.contains(&sent));
                assert_eq!(hybrid_retrieve(&spread, conv, &iso, &sent).unwrap(), i);
            }
        }
    }

    #[test]
    fn search_finds_a_validated_isometry() {
        let f = f2();
        let (spread, orbit) = spread_pair();
        let iso = search_isometry(&f, spread.codebook().unwrap(), &orbit)
            .unwrap()
            .unwrap();
        assert!(maps_onto(&f, &iso, spread.codebook().unwrap(), &orbit).unwrap());
        for i in 0..5u64 {
            let i = MessageIndex::from_u64(i, 2);
            let sent = hybrid_encode(&f, &iso, &i, |i| spread.enc1(i)).unwrap();
            assert_eq!(
                hybrid_retrieve(&spread, Convention::Adhoc, &iso, &sent).unwrap(),
                i
            );
        }
        // a spread and a non-spread set of the same size are not isometric
        let mut other = orbit.clone();
        other[0] = Subspace::row_space(
            &f,
            &Matrix::from_rows(vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]),
        );
        assert!(search_isometry(&f, spread.codebook().unwrap(), &other)
            .unwrap()
            .is_none());
    }

    #[test]
    fn identity_isometry_is_plain_encoding() {
        let (spread, _) = spread_pair();
        let f = f2();
        let iso = SemiLinearIsometry::identity(4);
        for i in 0..5u64 {
            let i = MessageIndex::from_u64(i, 2);
            assert_eq!(
                hybrid_encode(&f, &iso, &i, |i| spread.enc1(i)).unwrap(),
                spread.enc1(&i).unwrap()
            );
        }
    }

    #[test]
    fn frobenius_over_f4() {
        let f = BaseField::new(2, 2, None).unwrap();
        let a = Matrix::from_rows(vec![vec![1, 2], vec![0, 3]]);
        let iso = SemiLinearIsometry::new(&f, a, 1).unwrap();
        let u = Subspace::row_space(&f, &Matrix::from_rows(vec![vec![2, 1]]));
        let back =
            apply_isometry(&f, &apply_isometry(&f, &u, &iso).unwrap(), &iso.inverse(&f)).unwrap();
        assert_eq!(back, u);
        assert!(SemiLinearIsometry::new(&f, Matrix::identity(2), 2).is_err());
        let w = iso.apply_vector(&f, &[2, 1]).unwrap();
        assert_eq!(iso.invert_vector(&f, &w).unwrap(), vec![2, 1]);
    }

    #[test]
    fn rejects_singular_and_mismatched() {
        let f = f2();
        let singular = Matrix::from_rows(vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(
            SemiLinearIsometry::new(&f, singular, 0),
            Err(Error::NotInvertible)
        );
        let u = Subspace::full(3);
        assert!(matches!(
            apply_isometry(&f, &u, &SemiLinearIsometry::identity(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn document_round_trip() {
        let f = f2();
        let iso = SemiLinearIsometry::new(&f, hybrid_a(), 0).unwrap();
        let json = serde_json::to_string(&iso.to_document()).unwrap();
        assert_eq!(
            json,
            r#"{"A":[[1,0,0,0],[0,1,1,0],[1,1,0,0],[0,1,0,1]],"frobenius_power":0}"#
        );
        let doc: IsometryDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(SemiLinearIsometry::from_document(&f, &doc).unwrap(), iso);
    }

    fn matrix_strategy(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(0..q, rows * cols)
            .prop_map(move |d| Matrix::from_vec(rows, cols, d))
    }

    proptest! {
        #[test]
        fn preserves_distance(
            a in matrix_strategy(4, 4, 4),
            u in matrix_strategy(4, 2, 4),
            v in matrix_strategy(4, 2, 4),
            s in 0usize..2,
        ) {
            let f = BaseField::new(2, 2, None).unwrap();
            prop_assume!(a.rank(&f) == 4);
            let iso = SemiLinearIsometry::new(&f, a, s).unwrap();
            let u = Subspace::row_space(&f, &u);
            let v = Subspace::row_space(&f, &v);
            let d = subspace_distance(&f, &u, &v).unwrap();
            let iu = apply_isometry(&f, &u, &iso).unwrap();
            let iv = apply_isometry(&f, &v, &iso).unwrap();
            prop_assert_eq!(subspace_distance(&f, &iu, &iv).unwrap(), d);
            let inv = iso.inverse(&f);
            prop_assert_eq!(apply_isometry(&f, &iu, &inv).unwrap(), u);
        }
    }
}
