//! Finite-field tower `F_p ⊂ F_q ⊂ F_{q^k}`, the vector/integer bijections,
//! the companion-matrix representation and integer factorization.

mod base;
mod ext;
pub mod factor;
mod index;
pub mod moduli;
pub mod poly;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use base::{BaseField, MAX_BASE_FIELD_SIZE};
pub use ext::{ArithOp, ExtField, FieldElement};
pub use factor::{
    factorize, smoothness_report, FactorBudget, Factorization, PrimePower, SmoothnessEntry,
    SmoothnessRow,
};
pub use index::MessageIndex;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Serialized tower parameters. Coefficients are low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_q: Option<Vec<u32>>,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_k: Option<Vec<u32>>,
}

fn one() -> usize {
    1
}

/// `F_q` together with one extension `F_{q^k}`.
#[derive(Debug, Clone)]
pub struct FieldTower {
    base: Arc<BaseField>,
    ext: ExtField,
    primitive: bool,
}

impl FieldTower {
    pub fn new(base: BaseField, modulus_k: Option<Vec<u32>>, k: usize) -> Result<Self> {
        let base = Arc::new(base);
        let ext = match modulus_k {
            Some(m) => {
                if m.len() != k + 1 {
                    return Err(Error::usage(format!(
                        "modulus_k must have degree {k}, got {} coefficients",
                        m.len()
                    )));
                }
                ExtField::new(base.clone(), m)?
            }
            None => ExtField::with_default_modulus(base.clone(), k)?,
        };
        let primitive = ext.is_primitive()?;
        Ok(FieldTower {
            base,
            ext,
            primitive,
        })
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<Self> {
        let base = BaseField::new(spec.p, spec.r, spec.modulus_q.clone())?;
        Self::new(base, spec.modulus_k.clone(), spec.k)
    }

    pub fn spec(&self) -> TowerSpec {
        TowerSpec {
            p: self.base.characteristic(),
            r: self.base.degree(),
            modulus_q: (self.base.degree() > 1).then(|| self.base.modulus().to_vec()),
            k: self.ext.degree(),
            modulus_k: Some(self.ext.modulus().to_vec()),
        }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn ext(&self) -> &ExtField {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    pub fn k(&self) -> usize {
        self.ext.degree()
    }

    /// Whether `alpha` has order `q^k - 1`.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Companion matrix `P` of the degree-`k` modulus.
    pub fn companion(&self) -> Matrix {
        Matrix::companion(&self.base, self.ext.modulus()).expect("modulus is monic")
    }

    pub fn rho(&self, a: &FieldElement) -> Matrix {
        rho(&self.ext, a)
    }

    pub fn rho_inv(&self, m: &Matrix) -> Result<FieldElement> {
        rho_inv(&self.ext, m)
    }
}

/// `rho(a)`: the `k x k` matrix whose row `j` is `psi^-1(a * alpha^(j-1))`.
/// This is the image of `a` under `F_q[alpha] -> F_q[P]`, `alpha -> P`.
pub fn rho(ext: &ExtField, a: &FieldElement) -> Matrix {
    let k = ext.degree();
    let mut data = Vec::with_capacity(k * k);
    let mut row = a.clone();
    for j in 0..k {
        if j > 0 {
            row = ext.mul_alpha(&row);
        }
        data.extend_from_slice(row.coeffs());
    }
    Matrix::from_vec(k, k, data)
}

/// Reads `a` from the first row of `m` and checks that `rho(a) = m`.
pub fn rho_inv(ext: &ExtField, m: &Matrix) -> Result<FieldElement> {
    let k = ext.degree();
    if m.rows() != k || m.cols() != k {
        return Err(Error::DimensionMismatch(format!(
            "expected a {k}x{k} matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let a = ext.psi(m.row(0))?;
    if rho(ext, &a) != *m {
        return Err(Error::NotInCompanionAlgebra);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u32, modulus: &[u32]) -> FieldTower {
        FieldTower::new(
            BaseField::prime(p).unwrap(),
            Some(modulus.to_vec()),
            modulus.len() - 1,
        )
        .unwrap()
    }

    #[test]
    fn rho_examples_over_f4() {
        let t = tower(2, &[1, 1, 1]);
        let ext = t.ext();
        assert_eq!(
            t.rho(&ext.alpha()),
            Matrix::from_rows(vec![vec![0, 1], vec![1, 1]])
        );
        assert_eq!(t.rho(&ext.one()), Matrix::identity(2));
        let a2 = ext.mul(&ext.alpha(), &ext.alpha());
        assert_eq!(t.rho(&a2), Matrix::from_rows(vec![vec![1, 1], vec![1, 0]]));
        assert_eq!(t.rho(&ext.zero()), Matrix::zeros(2, 2));
    }

    #[test]
    fn rho_is_a_ring_homomorphism_on_f16() {
        let t = tower(2, &[1, 1, 0, 0, 1]);
        let ext = t.ext();
        let f = t.base();
        let all: Vec<_> = ext.elements().collect();
        for a in &all {
            let ra = t.rho(a);
            assert_eq!(t.rho_inv(&ra).unwrap(), *a);
            for b in &all {
                let rb = t.rho(b);
                assert_eq!(t.rho(&ext.add(a, b)), ra.add(f, &rb).unwrap());
                assert_eq!(t.rho(&ext.mul(a, b)), ra.mul(f, &rb).unwrap());
            }
        }
    }

    #[test]
    fn rho_of_alpha_is_the_companion_matrix() {
        for m in [&[1u32, 1, 1][..], &[1, 1, 0, 0, 1], &[1, 1, 1, 1, 1]] {
            let t = tower(2, m);
            assert_eq!(t.rho(&t.ext().alpha()), t.companion());
        }
        let t = tower(3, &[2, 0, 0, 2, 1]);
        assert_eq!(t.rho(&t.ext().alpha()), t.companion());
    }

    #[test]
    fn rho_inv_rejects_matrices_outside_the_algebra() {
        let t = tower(2, &[1, 1, 1]);
        let m = Matrix::from_rows(vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(t.rho_inv(&m), Err(Error::NotInCompanionAlgebra));
    }

    #[test]
    fn psi_commutes_with_companion_multiplication() {
        for (p, k) in [(2u32, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)] {
            let base = BaseField::prime(p).unwrap();
            let t = FieldTower::new(base, None, k).unwrap();
            let ext = t.ext();
            let pm = t.companion();
            for a in ext.elements() {
                let u = Matrix::from_vec(1, k, ext.psi_inv(&a));
                let up = u.mul(t.base(), &pm).unwrap();
                assert_eq!(ext.psi(up.row(0)).unwrap(), ext.mul(&a, &ext.alpha()));
            }
        }
    }

    #[test]
    fn tower_spec_round_trip() {
        let spec: TowerSpec = serde_json::from_str(r#"{"p":2,"k":4}"#).unwrap();
        let t = FieldTower::from_spec(&spec).unwrap();
        assert!(t.is_primitive());
        assert_eq!(t.spec().modulus_k.unwrap(), vec![1, 1, 0, 0, 1]);
        let t = FieldTower::from_spec(&TowerSpec {
            p: 2,
            r: 1,
            modulus_q: None,
            k: 4,
            modulus_k: Some(vec![1, 1, 1, 1, 1]),
        })
        .unwrap();
        assert!(!t.is_primitive());
        let bad = TowerSpec {
            p: 2,
            r: 1,
            modulus_q: None,
            k: 2,
            modulus_k: Some(vec![1, 0, 1]),
        };
        assert!(matches!(
            FieldTower::from_spec(&bad),
            Err(Error::NotIrreducible(_))
        ));
    }
}
