//! Seeded operator channel and an exhaustive minimum-distance decoder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::BaseField;
use crate::linalg::Matrix;
use crate::subspace::{subspace_distance, Subspace};

/// Random draws allowed per inserted dimension before giving up.
const INSERT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChannelParams {
    pub erasures: usize,
    pub insertions: usize,
    pub seed: u64,
}

/// Deletes `erasures` dimensions of `u` at random and adjoins `insertions`
/// random dimensions that meet `u` trivially, so the received space is at
/// distance exactly `erasures + insertions` from `u`.
pub fn operator_channel(f: &BaseField, u: &Subspace, params: &ChannelParams) -> Result<Subspace> {
    let k = u.dim();
    let n = u.ambient_dim();
    if params.erasures > k {
        return Err(Error::usage(format!(
            "cannot erase {} dimensions of a {k}-dimensional codeword",
            params.erasures
        )));
    }
    if k + params.insertions > n {
        return Err(Error::usage(format!(
            "cannot insert {} dimensions outside a {k}-dimensional codeword in dimension {n}",
            params.insertions
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let q = f.order();
    let mut rows: Vec<Vec<u32>> = if k == 0 {
        Vec::new()
    } else {
        // a uniformly random basis of u, then drop the last rows
        let t = loop {
            let data = (0..k * k).map(|_| rng.gen_range(0..q)).collect();
            let t = Matrix::from_vec(k, k, data);
            if t.rank(f) == k {
                break t;
            }
        };
        let mixed = t.mul(f, u.basis())?;
        mixed
            .row_vecs()
            .into_iter()
            .take(k - params.erasures)
            .collect()
    };
    let mut avoid = u.basis().row_vecs();
    for _ in 0..params.insertions {
        let current = Subspace::row_space(f, &rows_matrix(&avoid, n));
        let v = (0..INSERT_ATTEMPTS)
            .map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect::<Vec<u32>>())
            .find(|v| !current.contains_vector(f, v))
            .ok_or_else(|| Error::usage("no vector found outside the codeword span"))?;
        avoid.push(v.clone());
        rows.push(v);
    }
    Ok(Subspace::row_space(f, &rows_matrix(&rows, n)))
}

fn rows_matrix(rows: &[Vec<u32>], n: usize) -> Matrix {
    if rows.is_empty() {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(rows.to_vec())
    }
}

/// Nearest codewords to a received space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub distance: usize,
    /// Positions in the codebook attaining `distance`, ascending.
    pub nearest: Vec<usize>,
}

impl Decoded {
    pub fn unique(&self) -> Option<usize> {
        match self.nearest.as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }
}

pub fn decode_min_distance(
    f: &BaseField,
    codebook: &[Subspace],
    received: &Subspace,
) -> Result<Decoded> {
    if codebook.is_empty() {
        return Err(Error::CodebookTooSmall(
            "cannot decode with an empty codebook".into(),
        ));
    }
    let distances = codebook
        .par_iter()
        .map(|c| subspace_distance(f, c, received))
        .collect::<Result<Vec<_>>>()?;
    let distance = *distances.iter().min().expect("nonempty");
    let nearest = distances
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == distance)
        .map(|(i, _)| i)
        .collect();
    Ok(Decoded { distance, nearest })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub seed: u64,
    pub erasures: usize,
    pub insertions: usize,
    pub message: String,
    pub sent: Matrix,
    pub received: Matrix,
    /// `d_S(sent, received)`.
    pub channel_distance: usize,
    /// Distance from the received space to the nearest codeword.
    pub decoded_distance: usize,
    pub decoded: Option<Matrix>,
    /// Messages of all nearest codewords when the decision is ambiguous.
    pub ties: Vec<String>,
    pub retrieved: Option<String>,
    pub success: bool,
}

/// Sends `sent` through the channel, decodes by minimum distance over
/// `codebook`, and retrieves with `retrieve`. A tie between nearest
/// codewords is a failure and lists every tied message.
pub fn simulate<R>(
    f: &BaseField,
    codebook: &[Subspace],
    message: &str,
    sent: &Subspace,
    params: &ChannelParams,
    retrieve: R,
) -> Result<SimulationReport>
where
    R: Fn(&Subspace) -> Result<String>,
{
    let received = operator_channel(f, sent, params)?;
    let channel_distance = subspace_distance(f, sent, &received)?;
    let decoded = decode_min_distance(f, codebook, &received)?;
    let (decoded_word, ties, retrieved) = match decoded.unique() {
        Some(i) => (
            Some(codebook[i].clone()),
            Vec::new(),
            Some(retrieve(&codebook[i])?),
        ),
        None => {
            let ties = decoded
                .nearest
                .iter()
                .map(|&i| retrieve(&codebook[i]))
                .collect::<Result<Vec<_>>>()?;
            (None, ties, None)
        }
    };
    let success = retrieved.as_deref() == Some(message);
    Ok(SimulationReport {
        seed: params.seed,
        erasures: params.erasures,
        insertions: params.insertions,
        message: message.to_string(),
        sent: sent.basis().clone(),
        received: received.basis().clone(),
        channel_distance,
        decoded_distance: decoded.distance,
        decoded: decoded_word.map(|u| u.basis().clone()),
        ties,
        retrieved,
        success,
    })
}
