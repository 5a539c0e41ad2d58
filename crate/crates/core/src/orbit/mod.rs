//! Cyclic orbit codes `{U P^i}` and unions of such orbits.

mod dlog;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use dlog::{crt, dlog_naive, naive_log_table, pohlig_hellman, MAX_BSGS_TABLE};

use crate::error::{Error, Result};
use crate::ff::{
    factor::factorize_u64, rho_inv, BaseField, ExtField, FactorBudget, Factorization, PrimePower,
};
use crate::linalg::{companion_power, Matrix};
use crate::subspace::{subspace_distance, Subspace};

/// Largest orbit walked element by element (codebooks, codeword search).
pub const MAX_ORBIT_WALK: u64 = 1 << 20;
/// Largest multiplicative order found by stepping through powers of a
/// general matrix generator.
pub const MAX_MATRIX_ORDER: u64 = 1 << 20;
/// Union codes up to this many codewords are checked for disjoint orbits.
pub const DISJOINT_CHECK_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Primitive,
    IrreducibleNonprimitive,
    CompletelyReducible,
    /// An arbitrary invertible matrix, handled by exhaustive search.
    General,
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitKind::Primitive => "primitive",
            OrbitKind::IrreducibleNonprimitive => "irreducible_nonprimitive",
            OrbitKind::CompletelyReducible => "completely_reducible",
            OrbitKind::General => "general",
        })
    }
}

impl FromStr for OrbitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(OrbitKind::Primitive),
            "irreducible_nonprimitive" => Ok(OrbitKind::IrreducibleNonprimitive),
            "completely_reducible" => Ok(OrbitKind::CompletelyReducible),
            "general" => Ok(OrbitKind::General),
            _ => Err(Error::usage(format!("unknown orbit kind {s:?}"))),
        }
    }
}

/// The matrix `P` generating the cyclic group acting on the initial point.
#[derive(Debug, Clone)]
pub enum Generator {
    /// Companion matrix of the extension's modulus.
    Companion(ExtField),
    /// `diag(P_1, ..., P_t)` with `P_j` the companion matrix of block `j`.
    BlockDiagonal(Vec<ExtField>),
    Matrix(Matrix),
}

/// Input to message retrieval: the matrix `P^i` reported by an error
/// decoder, or the decoded codeword itself.
#[derive(Debug, Clone)]
pub enum RetrieveInput {
    Power(Matrix),
    Codeword(Subspace),
}

/// One cyclic block: its extension and the factored order of `alpha`.
#[derive(Debug, Clone)]
struct Block {
    ext: ExtField,
    order: BigUint,
    factors: Factorization,
}

impl Block {
    fn new(ext: ExtField) -> Result<Self> {
        let order = ext.element_order(&ext.alpha())?;
        let factors = restrict_factors(ext.group_order_factors()?, &order);
        Ok(Block {
            ext,
            order,
            factors,
        })
    }
}

/// Factorization of `d` from that of a multiple of `d`.
fn restrict_factors(multiple: &Factorization, d: &BigUint) -> Factorization {
    let mut out = Vec::new();
    for pp in multiple.factors() {
        let mut rest = d.clone();
        let mut e = 0;
        while (&rest % &pp.prime).is_zero() {
            rest /= &pp.prime;
            e += 1;
        }
        if e > 0 {
            out.push(PrimePower {
                prime: pp.prime.clone(),
                exponent: e,
            });
        }
    }
    Factorization::from_factors(out)
}

#[derive(Debug, Clone)]
pub struct CyclicOrbitCode {
    base: Arc<BaseField>,
    initial: Subspace,
    generator: Generator,
    matrix: Matrix,
    blocks: Vec<Block>,
    gen_order: BigUint,
    gen_factors: Factorization,
    orbit_order: BigUint,
    kind: OrbitKind,
}

impl CyclicOrbitCode {
    pub fn new(base: Arc<BaseField>, initial: &Matrix, generator: Generator) -> Result<Self> {
        initial.check_entries(&base)?;
        let (matrix, blocks, kind) = match &generator {
            Generator::Companion(ext) => {
                check_base(&base, ext)?;
                let block = Block::new(ext.clone())?;
                let kind = if block.order == ext.multiplicative_order() {
                    OrbitKind::Primitive
                } else {
                    OrbitKind::IrreducibleNonprimitive
                };
                (Matrix::companion(&base, ext.modulus())?, vec![block], kind)
            }
            Generator::BlockDiagonal(exts) => {
                if exts.is_empty() {
                    return Err(Error::usage(
                        "block-diagonal generator needs at least one block",
                    ));
                }
                let mut mats = Vec::with_capacity(exts.len());
                let mut blocks = Vec::with_capacity(exts.len());
                for ext in exts {
                    check_base(&base, ext)?;
                    mats.push(Matrix::companion(&base, ext.modulus())?);
                    blocks.push(Block::new(ext.clone())?);
                }
                (
                    Matrix::block_diag(&mats),
                    blocks,
                    OrbitKind::CompletelyReducible,
                )
            }
            Generator::Matrix(m) => {
                m.check_entries(&base)?;
                (m.clone(), Vec::new(), OrbitKind::General)
            }
        };
        if initial.cols() != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "initial point has {} columns, generator is {}x{}",
                initial.cols(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let (gen_order, gen_factors) = if blocks.is_empty() {
            let order = matrix_order(&base, &matrix)?;
            let factors = factorize_u64(order, &FactorBudget::from_env())?;
            (BigUint::from(order), factors)
        } else {
            let congruences: Vec<_> = blocks
                .iter()
                .map(|b| (BigUint::zero(), b.order.clone()))
                .collect();
            let (_, lcm) = crt(&congruences)?;
            let mut all = Vec::new();
            for b in &blocks {
                all.extend(b.factors.factors().iter().cloned());
            }
            let merged = merge_max_exponents(all);
            (lcm, merged)
        };
        let mut code = CyclicOrbitCode {
            initial: Subspace::row_space(&base, initial),
            base,
            generator,
            matrix,
            blocks,
            gen_order,
            gen_factors,
            orbit_order: BigUint::zero(),
            kind,
        };
        code.orbit_order = code.compute_orbit_order()?;
        Ok(code)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<BaseField> {
        &self.base
    }

    pub fn initial(&self) -> &Subspace {
        &self.initial
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// `P` as a matrix.
    pub fn generator_matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn k(&self) -> usize {
        self.initial.dim()
    }

    /// `ord(P)`.
    pub fn gen_order(&self) -> &BigUint {
        &self.gen_order
    }

    pub fn gen_order_factors(&self) -> &Factorization {
        &self.gen_factors
    }

    /// Number of codewords, the least `j > 0` with `U P^j = U`.
    pub fn orbit_order(&self) -> &BigUint {
        &self.orbit_order
    }

    pub fn size(&self) -> &BigUint {
        &self.orbit_order
    }

    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    /// Orders of the diagonal blocks of `P` (a single entry for a companion
    /// generator, none for a general matrix).
    pub fn block_orders(&self) -> Vec<BigUint> {
        self.blocks.iter().map(|b| b.order.clone()).collect()
    }

    /// `P^i`, any `i >= 0`.
    pub fn generator_power(&self, i: &BigUint) -> Matrix {
        match &self.generator {
            Generator::Companion(ext) => companion_power(ext, &(i % &self.gen_order), None),
            Generator::BlockDiagonal(_) => {
                let parts: Vec<_> = self
                    .blocks
                    .iter()
                    .map(|b| companion_power(&b.ext, &(i % &b.order), None))
                    .collect();
                Matrix::block_diag(&parts)
            }
            Generator::Matrix(m) => m
                .pow(&self.base, &(i % &self.gen_order))
                .expect("generator is square"),
        }
    }

    /// `rs(U P^i)` without the message range check.
    pub fn apply_power(&self, i: &BigUint) -> Subspace {
        self.initial
            .transform(&self.base, &self.generator_power(i))
            .expect("dimensions checked at construction")
    }

    pub fn enc2(&self, i: &BigUint) -> Result<Subspace> {
        if i >= &self.orbit_order {
            return Err(Error::MessageOutOfRange {
                message: i.to_string(),
                size: self.orbit_order.to_string(),
            });
        }
        Ok(self.apply_power(i))
    }

    pub fn retrieve2(&self, input: &RetrieveInput) -> Result<BigUint> {
        match input {
            RetrieveInput::Power(m) => self.retrieve2_from_power(m),
            RetrieveInput::Codeword(u) => self.retrieve2_from_codeword(u),
        }
    }

    /// Message `i mod orbit_order` from `P^i`. For companion blocks the
    /// exponent is the discrete log of the first row read as a field element.
    pub fn retrieve2_from_power(&self, m: &Matrix) -> Result<BigUint> {
        let n = self.n();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected a {n}x{n} matrix, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        m.check_entries(&self.base)?;
        let i = match &self.generator {
            Generator::Matrix(p) => {
                let mut x = Matrix::identity(n);
                let mut j = BigUint::zero();
                loop {
                    if x == *m {
                        break j;
                    }
                    x = x.mul(&self.base, p)?;
                    j += 1u32;
                    if j >= self.gen_order {
                        return Err(Error::NotInSubgroup);
                    }
                }
            }
            _ => {
                let exps = self.block_exponents(m)?;
                self.reducible_retrieve(&exps)?
            }
        };
        Ok(i % &self.orbit_order)
    }

    /// Per-block discrete logs `i_j` of a block-diagonal `m = diag(P_j^{i_j})`.
    pub fn block_exponents(&self, m: &Matrix) -> Result<Vec<BigUint>> {
        if self.blocks.is_empty() {
            return Err(Error::usage("generator has no companion blocks"));
        }
        let mut diag = Vec::with_capacity(self.blocks.len());
        let mut start = 0;
        for b in &self.blocks {
            let d = b.ext.degree();
            diag.push(submatrix(m, start, d));
            start += d;
        }
        if Matrix::block_diag(&diag) != *m {
            return Err(Error::NotInCompanionAlgebra);
        }
        self.blocks
            .iter()
            .zip(&diag)
            .map(|(b, block)| {
                let beta = rho_inv(&b.ext, block)?;
                pohlig_hellman(&b.ext, &beta, &b.ext.alpha(), &b.factors)
            })
            .collect()
    }

    /// The unique `i mod lcm(ord P_j)` with `i ≡ i_j (mod ord P_j)`.
    pub fn reducible_retrieve(&self, per_block: &[BigUint]) -> Result<BigUint> {
        if per_block.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} block exponents, found {}",
                self.blocks.len(),
                per_block.len()
            )));
        }
        let congruences: Vec<_> = per_block
            .iter()
            .zip(&self.blocks)
            .map(|(i, b)| (i % &b.order, b.order.clone()))
            .collect();
        // each i_j was reduced, so inconsistency can only come from the input
        for ((i, _), b) in congruences.iter().zip(&self.blocks) {
            debug_assert!(i < &b.order);
        }
        Ok(crt(&congruences)?.0)
    }

    /// Message of a codeword, by walking the orbit.
    pub fn retrieve2_from_codeword(&self, u: &Subspace) -> Result<BigUint> {
        if u.ambient_dim() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "codeword lives in dimension {}, code in {}",
                u.ambient_dim(),
                self.n()
            )));
        }
        if u.dim() != self.k() {
            return Err(Error::NotACodeword);
        }
        let len = self.walk_len()?;
        let mut x = self.initial.clone();
        for j in 0..len {
            if x == *u {
                return Ok(BigUint::from(j));
            }
            x = x.transform(&self.base, &self.matrix)?;
        }
        Err(Error::NotACodeword)
    }

    /// All codewords in message order.
    pub fn codebook(&self) -> Result<Vec<Subspace>> {
        let len = self.walk_len()?;
        let mut out = Vec::with_capacity(len as usize);
        let mut x = self.initial.clone();
        for _ in 0..len {
            let next = x.transform(&self.base, &self.matrix)?;
            out.push(x);
            x = next;
        }
        Ok(out)
    }

    /// Pohlig-Hellman cost of retrieval for this generator.
    pub fn retrieval_cost(&self) -> RetrievalCost {
        RetrievalCost::new(&self.gen_factors, self.n())
    }

    fn walk_len(&self) -> Result<u64> {
        self.orbit_order
            .to_u64()
            .filter(|&l| l <= MAX_ORBIT_WALK)
            .ok_or_else(|| {
                Error::CodebookTooSmall(format!(
                    "orbit of size {} exceeds the walk limit {MAX_ORBIT_WALK}",
                    self.orbit_order
                ))
            })
    }

    fn compute_orbit_order(&self) -> Result<BigUint> {
        for d in self.gen_factors.divisors() {
            if d.is_zero() {
                continue;
            }
            if self.apply_power(&d) == self.initial {
                return Ok(d);
            }
        }
        Err(Error::usage(
            "generator order does not fix the initial point",
        ))
    }
}

fn check_base(base: &BaseField, ext: &ExtField) -> Result<()> {
    if ext.base() != base {
        return Err(Error::usage(
            "generator block is defined over a different base field",
        ));
    }
    Ok(())
}

fn merge_max_exponents(mut all: Vec<PrimePower>) -> Factorization {
    all.sort_by(|a, b| a.prime.cmp(&b.prime).then(b.exponent.cmp(&a.exponent)));
    all.dedup_by(|a, b| a.prime == b.prime);
    Factorization::from_factors(all)
}

/// Square `len x len` block of `m` starting at `(start, start)`.
fn submatrix(m: &Matrix, start: usize, len: usize) -> Matrix {
    let mut out = Matrix::zeros(len, len);
    for i in 0..len {
        for j in 0..len {
            out.set(i, j, m.get(start + i, start + j));
        }
    }
    out
}

/// Multiplicative order of an invertible matrix, by stepping through powers.
pub fn matrix_order(f: &BaseField, p: &Matrix) -> Result<u64> {
    if p.rows() != p.cols() {
        return Err(Error::DimensionMismatch("generator must be square".into()));
    }
    p.inverse(f)?;
    let id = Matrix::identity(p.rows());
    let mut x = p.clone();
    for j in 1..=MAX_MATRIX_ORDER {
        if x == id {
            return Ok(j);
        }
        x = x.mul(f, p)?;
    }
    Err(Error::usage(format!(
        "matrix order exceeds the search limit {MAX_MATRIX_ORDER}"
    )))
}

/// Least `j > 0` with `rs(U P^j) = rs(U)`, checking divisors of `ord(P)`
/// in ascending order.
pub fn orbit_order(f: &BaseField, u: &Matrix, p: &Matrix) -> Result<BigUint> {
    let code = CyclicOrbitCode::new(Arc::new(f.clone()), u, Generator::Matrix(p.clone()))?;
    Ok(code.orbit_order)
}

/// Minimum pairwise subspace distance.
pub fn min_distance(f: &BaseField, codebook: &[Subspace]) -> Result<usize> {
    if codebook.len() < 2 {
        return Err(Error::CodebookTooSmall(format!(
            "minimum distance needs two codewords, found {}",
            codebook.len()
        )));
    }
    let mut best = usize::MAX;
    for (i, u) in codebook.iter().enumerate() {
        for v in &codebook[i + 1..] {
            best = best.min(subspace_distance(f, u, v)?);
        }
    }
    Ok(best)
}

/// Predicted cost of Pohlig-Hellman retrieval for a group of the given
/// factored order acting on `F_q^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalCost {
    pub n: usize,
    /// True when every prime factor is at most `n^2`.
    pub smooth: bool,
    pub max_prime: String,
    /// `sum_i e_i (log2 |G| + sqrt(p_i))`.
    pub estimated_operations: f64,
    pub class: &'static str,
}

impl RetrievalCost {
    pub fn new(order: &Factorization, n: usize) -> Self {
        let bound = BigUint::from(n) * BigUint::from(n);
        let smooth = order.is_smooth(&bound);
        let log_g = order.value().bits().max(1) as f64;
        let estimated_operations = order
            .factors()
            .iter()
            .map(|pp| {
                let sqrt_p = pp.prime.sqrt().to_f64().unwrap_or(f64::INFINITY) + 1.0;
                pp.exponent as f64 * (log_g + sqrt_p)
            })
            .sum();
        let max_prime = order
            .max_prime()
            .map_or_else(|| "1".to_string(), |p| p.to_string());
        RetrievalCost {
            n,
            smooth,
            max_prime,
            estimated_operations,
            class: if smooth {
                "polynomial (n^2-smooth order)"
            } else {
                "superpolynomial (order not n^2-smooth)"
            },
        }
    }
}

/// Union of `z` orbits of equal size `c*` under a shared generator.
#[derive(Debug, Clone)]
pub struct OrbitUnionCode {
    orbits: Vec<CyclicOrbitCode>,
    c_star: BigUint,
}

impl OrbitUnionCode {
    pub fn new(base: Arc<BaseField>, initials: &[Matrix], generator: Generator) -> Result<Self> {
        if initials.is_empty() {
            return Err(Error::usage("union code needs at least one initial point"));
        }
        let orbits = initials
            .iter()
            .map(|u| CyclicOrbitCode::new(base.clone(), u, generator.clone()))
            .collect::<Result<Vec<_>>>()?;
        let c_star = orbits[0].orbit_order.clone();
        if let Some(bad) = orbits.iter().position(|o| o.orbit_order != c_star) {
            return Err(Error::UnequalOrbits(format!(
                "orbit 1 has {} codewords, orbit {} has {}",
                c_star,
                bad + 1,
                orbits[bad].orbit_order
            )));
        }
        let code = OrbitUnionCode { orbits, c_star };
        if code.size() <= BigUint::from(DISJOINT_CHECK_LIMIT) {
            code.check_disjoint()?;
        }
        Ok(code)
    }

    /// Orbits are equal or disjoint, so it suffices to look for each initial
    /// point in the earlier orbits.
    fn check_disjoint(&self) -> Result<()> {
        for (j, later) in self.orbits.iter().enumerate() {
            for (i, earlier) in self.orbits[..j].iter().enumerate() {
                match earlier.retrieve2_from_codeword(&later.initial) {
                    Ok(_) => {
                        return Err(Error::usage(format!(
                            "orbits {} and {} coincide",
                            i + 1,
                            j + 1
                        )))
                    }
                    Err(Error::NotACodeword) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    pub fn orbits(&self) -> &[CyclicOrbitCode] {
        &self.orbits
    }

    /// Orbit `j`, numbered from 1.
    pub fn orbit(&self, j: usize) -> Result<&CyclicOrbitCode> {
        if j == 0 || j > self.orbits.len() {
            return Err(Error::UnknownOrbit {
                id: j,
                count: self.orbits.len(),
            });
        }
        Ok(&self.orbits[j - 1])
    }

    pub fn c_star(&self) -> &BigUint {
        &self.c_star
    }

    pub fn z(&self) -> usize {
        self.orbits.len()
    }

    pub fn size(&self) -> BigUint {
        &self.c_star * BigUint::from(self.orbits.len())
    }

    pub fn base(&self) -> &BaseField {
        self.orbits[0].base()
    }

    /// `(j, U_j P^l)` with `j = i / c* + 1` and `l = i mod c*`.
    pub fn enc3(&self, i: &BigUint) -> Result<(usize, Subspace)> {
        let size = self.size();
        if i >= &size {
            return Err(Error::MessageOutOfRange {
                message: i.to_string(),
                size: size.to_string(),
            });
        }
        let j = (i / &self.c_star).to_usize().expect("below orbit count") + 1;
        Ok((j, self.orbits[j - 1].apply_power(&(i % &self.c_star))))
    }

    /// `l + (j - 1) c*` where `l` is retrieved from `P^l` within orbit `j`.
    pub fn retrieve3(&self, j: usize, power: &Matrix) -> Result<BigUint> {
        let l = self.orbit(j)?.retrieve2_from_power(power)?;
        Ok(l + &self.c_star * BigUint::from(j - 1))
    }

    /// Orbit id and exponent of a codeword, by searching every orbit.
    pub fn locate(&self, u: &Subspace) -> Result<(usize, BigUint)> {
        for (j, orbit) in self.orbits.iter().enumerate() {
            match orbit.retrieve2_from_codeword(u) {
                Ok(l) => return Ok((j + 1, l)),
                Err(Error::NotACodeword) => {}
                Err(e) => return Err(e),
            }
        }
        Err(Error::NotACodeword)
    }

    pub fn retrieve3_from_codeword(&self, u: &Subspace) -> Result<BigUint> {
        let (j, l) = self.locate(u)?;
        Ok(l + &self.c_star * BigUint::from(j - 1))
    }

    pub fn codebook(&self) -> Result<Vec<Subspace>> {
        let mut out = Vec::new();
        for o in &self.orbits {
            out.extend(o.codebook()?);
        }
        Ok(out)
    }
}
