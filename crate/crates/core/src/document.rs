//! JSON code specifications.
//!
//! ```json
//! {"family": "desarguesian_spread", "version": 1, "p": 2, "k": 2, "m": 3, "modulus_k": [1, 1, 1]}
//! {"family": "cyclic_orbit", "version": 1, "p": 2, "n": 4, "modulus_n": [1, 1, 0, 0, 1],
//!  "initial_point": [[1, 0, 0, 0], [0, 1, 1, 0]], "kind": "primitive"}
//! {"family": "orbit_union", "version": 1, "p": 2, "n": 4, "initials": [[[1, 0, 0, 0], [0, 1, 0, 0]]]}
//! ```
//!
//! Polynomials are coefficient lists, low degree first. `r` defaults to 1.
//! Orbit generators default to the companion matrix of `modulus_n` (or of
//! the default modulus of degree `n`); `block_moduli` selects a
//! block-diagonal generator and `generator` an explicit matrix.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{BaseField, ExtField, FieldTower};
use crate::linalg::Matrix;
use crate::orbit::{CyclicOrbitCode, Generator, OrbitKind, OrbitUnionCode};
use crate::spread::SpreadCode;
use crate::subspace::Subspace;

pub const SPEC_VERSION: u32 = 1;

fn version() -> u32 {
    SPEC_VERSION
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CodeSpec {
    DesarguesianSpread(SpreadSpec),
    CyclicOrbit(OrbitSpec),
    OrbitUnion(UnionSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadSpec {
    #[serde(default = "version")]
    pub version: u32,
    pub p: u32,
    #[serde(default = "one")]
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_q: Option<Vec<u32>>,
    pub k: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_k: Option<Vec<u32>>,
}

/// Field and generator shared by the two orbit families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_q: Option<Vec<u32>>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_n: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_moduli: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSpec {
    #[serde(default = "version")]
    pub version: u32,
    #[serde(flatten)]
    pub field: GeneratorSpec,
    pub initial_point: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<OrbitKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionSpec {
    #[serde(default = "version")]
    pub version: u32,
    #[serde(flatten)]
    pub field: GeneratorSpec,
    pub initials: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<OrbitKind>,
}

/// A constructed code of any family.
#[derive(Debug, Clone)]
pub enum Code {
    Spread(SpreadCode),
    Orbit(CyclicOrbitCode),
    Union(OrbitUnionCode),
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CodeSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let v = spec.version();
        if v != SPEC_VERSION {
            return Err(Error::Parse(format!(
                "unsupported spec version {v} (expected {SPEC_VERSION})"
            )));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn version(&self) -> u32 {
        match self {
            CodeSpec::DesarguesianSpread(s) => s.version,
            CodeSpec::CyclicOrbit(s) => s.version,
            CodeSpec::OrbitUnion(s) => s.version,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            CodeSpec::DesarguesianSpread(_) => "desarguesian_spread",
            CodeSpec::CyclicOrbit(_) => "cyclic_orbit",
            CodeSpec::OrbitUnion(_) => "orbit_union",
        }
    }

    pub fn build(&self) -> Result<Code> {
        match self {
            CodeSpec::DesarguesianSpread(s) => {
                let base = BaseField::new(s.p, s.r, s.modulus_q.clone())?;
                let tower = FieldTower::new(base, s.modulus_k.clone(), s.k)?;
                Ok(Code::Spread(SpreadCode::new(tower, s.m)?))
            }
            CodeSpec::CyclicOrbit(s) => {
                let (base, generator) = s.field.build()?;
                let code = CyclicOrbitCode::new(base, &s.initial_point, generator)?;
                check_kind(s.kind, code.kind())?;
                Ok(Code::Orbit(code))
            }
            CodeSpec::OrbitUnion(s) => {
                let (base, generator) = s.field.build()?;
                let code = OrbitUnionCode::new(base, &s.initials, generator)?;
                check_kind(s.kind, code.orbits()[0].kind())?;
                Ok(Code::Union(code))
            }
        }
    }
}

fn check_kind(declared: Option<OrbitKind>, actual: OrbitKind) -> Result<()> {
    match declared {
        Some(d) if d != actual => Err(Error::usage(format!(
            "spec declares kind {d} but the generator is {actual}"
        ))),
        _ => Ok(()),
    }
}

impl GeneratorSpec {
    fn build(&self) -> Result<(Arc<BaseField>, Generator)> {
        let base = Arc::new(BaseField::new(self.p, self.r, self.modulus_q.clone())?);
        let chosen = [
            self.modulus_n.is_some(),
            self.block_moduli.is_some(),
            self.generator.is_some(),
        ];
        if chosen.iter().filter(|&&c| c).count() > 1 {
            return Err(Error::usage(
                "give at most one of modulus_n, block_moduli and generator",
            ));
        }
        let generator = if let Some(m) = &self.generator {
            Generator::Matrix(m.clone())
        } else if let Some(blocks) = &self.block_moduli {
            let exts = blocks
                .iter()
                .map(|m| ExtField::new(base.clone(), m.clone()))
                .collect::<Result<Vec<_>>>()?;
            Generator::BlockDiagonal(exts)
        } else if let Some(m) = &self.modulus_n {
            Generator::Companion(ExtField::new(base.clone(), m.clone())?)
        } else {
            Generator::Companion(ExtField::with_default_modulus(base.clone(), self.n)?)
        };
        let size = match &generator {
            Generator::Companion(e) => e.degree(),
            Generator::BlockDiagonal(b) => b.iter().map(|e| e.degree()).sum(),
            Generator::Matrix(m) => m.rows(),
        };
        if size != self.n {
            return Err(Error::DimensionMismatch(format!(
                "n = {} but the generator acts on dimension {size}",
                self.n
            )));
        }
        Ok((base, generator))
    }
}

impl Code {
    pub fn family(&self) -> &'static str {
        match self {
            Code::Spread(_) => "desarguesian_spread",
            Code::Orbit(_) => "cyclic_orbit",
            Code::Union(_) => "orbit_union",
        }
    }

    pub fn field(&self) -> &BaseField {
        match self {
            Code::Spread(c) => c.field(),
            Code::Orbit(c) => c.base(),
            Code::Union(c) => c.base(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Code::Spread(c) => c.n(),
            Code::Orbit(c) => c.n(),
            Code::Union(c) => c.orbits()[0].n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Code::Spread(c) => c.k(),
            Code::Orbit(c) => c.k(),
            Code::Union(c) => c.orbits()[0].k(),
        }
    }

    pub fn size(&self) -> BigUint {
        match self {
            Code::Spread(c) => c.size(),
            Code::Orbit(c) => c.size().clone(),
            Code::Union(c) => c.size(),
        }
    }

    /// Codewords in message order (the ad hoc order for spreads).
    pub fn codebook(&self) -> Result<Vec<Subspace>> {
        match self {
            Code::Spread(c) => Ok(c.codebook()?.to_vec()),
            Code::Orbit(c) => c.codebook(),
            Code::Union(c) => c.codebook(),
        }
    }
}
