//! Monte-Carlo check of the receiver's conditional entropies in the doubly
//! dirty model.
//!
//! Samples the generative model (cooperative codeword `U`, layers `X'_k`,
//! `X''_k`, effective states `β_k S_k`, noise `Z3`), estimates the joint
//! second moments of `Y3` and the conditioning codewords, and evaluates
//! `h(Y3 | W)` from the Schur complement of the empirical covariance. For a
//! Gaussian fit the sample average of `-log2 p(y | w)` equals
//! `½·log2(2πe·σ̂²)` exactly, so that is what is returned.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::prop2::prop2_terms;
use super::{CodingParams, GaussianChannel, ModelError};
use crate::linalg::{cholesky, cholesky_solve};
use crate::scalar::{gaussian_entropy, Bits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropySelector {
    /// `h(Y3)`
    Output,
    /// `h(Y3 | U, V1, V2, V23)`
    GivenCoopFreshAndDirect2,
    /// `h(Y3 | U, V1, V2, V13)`
    GivenCoopFreshAndDirect1,
    /// `h(Y3 | U, V1, V2)`
    GivenCoopAndFresh,
    /// `h(Y3 | U, V1, V2, V13, V23)`
    GivenAll,
}

impl EntropySelector {
    pub const ALL: [EntropySelector; 5] = [
        EntropySelector::Output,
        EntropySelector::GivenCoopFreshAndDirect2,
        EntropySelector::GivenCoopFreshAndDirect1,
        EntropySelector::GivenCoopAndFresh,
        EntropySelector::GivenAll,
    ];

    fn conditioning(self) -> &'static [Codeword] {
        use Codeword::*;
        match self {
            EntropySelector::Output => &[],
            EntropySelector::GivenCoopFreshAndDirect2 => &[U, V1, V2, V23],
            EntropySelector::GivenCoopFreshAndDirect1 => &[U, V1, V2, V13],
            EntropySelector::GivenCoopAndFresh => &[U, V1, V2],
            EntropySelector::GivenAll => &[U, V1, V2, V13, V23],
        }
    }

    /// The closed-form value in terms of the MMSE residuals.
    pub fn closed_form(self, ch: &GaussianChannel, cp: &CodingParams) -> Result<Bits, ModelError> {
        let t = prop2_terms(ch, cp)?;
        let n3 = ch.n3;
        let variance = match self {
            EntropySelector::Output => {
                let c = coop_amplitude(ch, cp);
                c * c + t.p_fresh_e[0] + t.p_fresh_e[1] + t.p_direct_e[0] + t.p_direct_e[1] + t.q_e[0] + t.q_e[1] + n3
            }
            EntropySelector::GivenCoopFreshAndDirect2 => t.p_direct_e[0] + t.q_hat[0] + t.q_dhat[1] + n3,
            EntropySelector::GivenCoopFreshAndDirect1 => t.p_direct_e[1] + t.q_hat[1] + t.q_dhat[0] + n3,
            EntropySelector::GivenCoopAndFresh => t.p_direct_e[0] + t.p_direct_e[1] + t.q_hat[0] + t.q_hat[1] + n3,
            EntropySelector::GivenAll => t.q_dhat[0] + t.q_dhat[1] + n3,
        };
        Ok(gaussian_entropy(variance).expect("n3 > 0"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Codeword {
    U,
    V1,
    V2,
    V13,
    V23,
}

impl Codeword {
    fn name(self) -> &'static str {
        match self {
            Codeword::U => "U",
            Codeword::V1 => "V1",
            Codeword::V2 => "V2",
            Codeword::V13 => "V13",
            Codeword::V23 => "V23",
        }
    }
}

fn coop_amplitude(ch: &GaussianChannel, cp: &CodingParams) -> f64 {
    (0..2).map(|k| libm::sqrt(cp.users[k].eta * cp.users[k].rho * ch.power(k))).sum()
}

/// Sources: `U, X'1, X'2, X''1, X''2, β1S1, β2S2, Z3`.
const SOURCES: usize = 8;
const MAX_VARS: usize = 6;

pub fn mc_entropy_oracle(
    ch: &GaussianChannel,
    cp: &CodingParams,
    which: EntropySelector,
    samples: usize,
    seed: u64,
) -> Result<Bits, ModelError> {
    if samples < 2 {
        return Err(ModelError::TooFewSamples);
    }
    let t = prop2_terms(ch, cp)?;
    let [u1, u2] = cp.users;
    let std = [
        1.0,
        libm::sqrt(t.p_fresh_e[0]),
        libm::sqrt(t.p_fresh_e[1]),
        libm::sqrt(t.p_direct_e[0]),
        libm::sqrt(t.p_direct_e[1]),
        libm::sqrt(t.q_e[0]),
        libm::sqrt(t.q_e[1]),
        libm::sqrt(ch.n3),
    ];
    let a1 = libm::sqrt(u1.eta * u1.rho * ch.p1);
    let a2 = libm::sqrt(u2.eta * u2.rho * ch.p2);
    let form = |w: Codeword| -> [f64; SOURCES] {
        match w {
            Codeword::U => [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            Codeword::V1 => [a1, 1.0, 0.0, 0.0, 0.0, u1.alpha, 0.0, 0.0],
            Codeword::V2 => [a2, 0.0, 1.0, 0.0, 0.0, 0.0, u2.alpha, 0.0],
            Codeword::V13 => [0.0, 0.0, 0.0, 1.0, 0.0, u1.alpha_direct, 0.0, 0.0],
            Codeword::V23 => [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, u2.alpha_direct, 0.0],
        }
    };
    let given = which.conditioning();
    let n = given.len() + 1;
    let mut rows = [[0.0; SOURCES]; MAX_VARS];
    rows[0] = [a1 + a2, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    for (i, w) in given.iter().enumerate() {
        rows[i + 1] = form(*w);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moments = [0.0; MAX_VARS * MAX_VARS];
    let mut z = [0.0; SOURCES];
    let mut x = [0.0; MAX_VARS];
    for _ in 0..samples {
        for i in 0..SOURCES {
            let g: f64 = StandardNormal.sample(&mut rng);
            z[i] = g * std[i];
        }
        for (v, row) in x.iter_mut().zip(&rows).take(n) {
            *v = row.iter().zip(&z).map(|(a, b)| a * b).sum();
        }
        for i in 0..n {
            for j in 0..=i {
                moments[i * MAX_VARS + j] += x[i] * x[j];
            }
        }
    }
    let m = |i: usize, j: usize| {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        moments[i * MAX_VARS + j] / samples as f64
    };

    let mut variance = m(0, 0);
    if n > 1 {
        let k = n - 1;
        let mut sww = alloc::vec![0.0; k * k];
        let mut swy = alloc::vec![0.0; k];
        for i in 0..k {
            swy[i] = m(i + 1, 0);
            for j in 0..k {
                sww[i * k + j] = m(i + 1, j + 1);
            }
        }
        let l = cholesky(&sww, k).map_err(|i| ModelError::SingularConditioning(given[i].name()))?;
        let b = cholesky_solve(&l, k, &swy);
        variance -= b.iter().zip(&swy).map(|(a, c)| a * c).sum::<f64>();
    }
    gaussian_entropy(variance).map_err(|_| ModelError::SingularConditioning("Y3"))
}
