//! Gaussian state-dependent GMAC:
//! `Y_j = X1 + X2 + S0 + S1 + S2 + Z_j` for `j ∈ {1, 2, 3}`, where `Y1`, `Y2`
//! are the feedback outputs seen by the encoders and `Y3` the receiver.
//!
//! The closed-form regions live in submodules:
//! [`prop1`] (both encoders know all interference), [`prop2`] (each encoder
//! knows only its own private state), [`prop3`] (one encoder knows an
//! arbitrarily strong state), plus [`baseline`] scenarios, optimal
//! dirty-paper coefficients in [`dpc`] and a Monte-Carlo check of the
//! conditional entropies in [`mc`].

use thiserror::Error;

use crate::geometry::GeometryError;

pub mod baseline;
pub mod dpc;
pub mod mc;
pub mod prop1;
pub mod prop2;
pub mod prop3;

pub use baseline::{baseline_region, Scenario};
pub use dpc::{dpc_orthogonality_residuals, optimal_dpc_coeffs, OrthogonalityResiduals};
pub use mc::{mc_entropy_oracle, EntropySelector};
pub use prop1::prop1_region;
pub use prop2::{prop2_region, prop2_terms, Corrections, Prop2Terms};
pub use prop3::prop3_region;

/// Variance of a private interference signal. `Unbounded` stands for the
/// `Q → ∞` limit, which only the one-informed-encoder model accepts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateVariance {
    Finite(f64),
    Unbounded,
}

impl StateVariance {
    pub fn finite(self) -> Option<f64> {
        match self {
            StateVariance::Finite(q) => Some(q),
            StateVariance::Unbounded => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == StateVariance::Finite(0.0)
    }
}

/// Linear-scale channel parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannel {
    pub p1: f64,
    pub p2: f64,
    /// Noise at encoder 1's feedback output.
    pub n1: f64,
    /// Noise at encoder 2's feedback output.
    pub n2: f64,
    /// Noise at the receiver.
    pub n3: f64,
    /// Common interference, known to both encoders.
    pub q0: f64,
    pub q1: StateVariance,
    pub q2: StateVariance,
}

impl GaussianChannel {
    /// Channel with only a common interference term (`Q1 = Q2 = 0`).
    pub fn full_csit(p: [f64; 2], n: [f64; 3], q0: f64) -> Self {
        Self {
            p1: p[0],
            p2: p[1],
            n1: n[0],
            n2: n[1],
            n3: n[2],
            q0,
            q1: StateVariance::Finite(0.0),
            q2: StateVariance::Finite(0.0),
        }
    }

    pub fn power(&self, k: usize) -> f64 {
        [self.p1, self.p2][k]
    }

    pub fn state(&self, k: usize) -> StateVariance {
        [self.q1, self.q2][k]
    }

    /// Noise at the encoder that decodes user `k`'s fresh information,
    /// i.e. the other encoder's feedback noise.
    pub fn cooperation_noise(&self, k: usize) -> f64 {
        [self.n2, self.n1][k]
    }

    /// The common state is fully removable by multi-layer dirty-paper coding,
    /// so the doubly-dirty models operate on the channel with `Q0 = 0`.
    pub fn remove_common_state(mut self) -> Self {
        self.q0 = 0.0;
        self
    }

    pub fn swap_users(self) -> Self {
        Self { p1: self.p2, p2: self.p1, n1: self.n2, n2: self.n1, q1: self.q2, q2: self.q1, ..self }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        for (name, v) in [("p1", self.p1), ("p2", self.p2), ("n1", self.n1), ("n2", self.n2), ("q0", self.q0)] {
            if !finite_nonneg(v) {
                return Err(ModelError::InvalidChannel(name));
            }
        }
        if !(self.n3 > 0.0 && self.n3.is_finite()) {
            return Err(ModelError::InvalidChannel("n3"));
        }
        for (name, q) in [("q1", self.q1), ("q2", self.q2)] {
            if let StateVariance::Finite(v) = q {
                if !finite_nonneg(v) {
                    return Err(ModelError::InvalidChannel(name));
                }
            }
        }
        Ok(())
    }
}

/// Per-encoder coding parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserCoding {
    /// Fraction of power spent on the cooperative codeword, `ρ ∈ [0, 1]`.
    pub rho: f64,
    /// Power `P'` of the fresh-information layer (decoded by the other
    /// encoder), before the `1 - ρ` scaling.
    pub p_fresh: f64,
    /// Power `P''` of the direct layer (decoded only by the receiver).
    pub p_direct: f64,
    /// Fraction of power left after partially cancelling the private state.
    pub eta: f64,
    /// Dirty-paper coefficient of the fresh layer.
    pub alpha: f64,
    /// Dirty-paper coefficient of the direct layer.
    pub alpha_direct: f64,
}

impl Default for UserCoding {
    fn default() -> Self {
        Self { rho: 0.0, p_fresh: 0.0, p_direct: 0.0, eta: 1.0, alpha: 0.0, alpha_direct: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CodingParams {
    pub users: [UserCoding; 2],
    /// Coefficient of the common state in the cooperative codeword.
    pub alpha_common: f64,
}

impl CodingParams {
    /// Power split without cooperation or cleaning; dirty-paper coefficients zero.
    pub fn split(p_fresh: [f64; 2], p_direct: [f64; 2]) -> Self {
        let mut cp = Self::default();
        for k in 0..2 {
            cp.users[k].p_fresh = p_fresh[k];
            cp.users[k].p_direct = p_direct[k];
        }
        cp
    }

    pub fn with_rho(mut self, rho: [f64; 2]) -> Self {
        self.users[0].rho = rho[0];
        self.users[1].rho = rho[1];
        self
    }

    pub fn swap_users(self) -> Self {
        Self { users: [self.users[1], self.users[0]], ..self }
    }

    /// Checks ranges and the per-encoder power constraint `P' + P'' ≤ P`.
    pub fn validate(&self, ch: &GaussianChannel) -> Result<(), ModelError> {
        for (k, u) in self.users.iter().enumerate() {
            let user = k + 1;
            let p = ch.power(k);
            for v in [u.rho, u.p_fresh, u.p_direct, u.eta, u.alpha, u.alpha_direct] {
                if !v.is_finite() || v < 0.0 {
                    return Err(ModelError::NegativeParameter { user });
                }
            }
            if u.rho > 1.0 {
                return Err(ModelError::RhoOutOfRange { user, rho: u.rho });
            }
            if u.p_fresh + u.p_direct > p * (1.0 + 1e-12) {
                return Err(ModelError::PowerSplit { user, used: u.p_fresh + u.p_direct, limit: p });
            }
            let eta_min = eta_min(p, ch.state(k));
            if u.eta > 1.0 || u.eta < eta_min - 1e-12 {
                return Err(ModelError::EtaOutOfRange { user, eta: u.eta, min: eta_min });
            }
        }
        if !self.alpha_common.is_finite() {
            return Err(ModelError::NegativeParameter { user: 0 });
        }
        Ok(())
    }
}

/// Smallest admissible cleaning fraction, `1 - min(1, Q/P)`.
pub fn eta_min(p: f64, q: StateVariance) -> f64 {
    match q {
        StateVariance::Unbounded => 0.0,
        StateVariance::Finite(_) if p <= 0.0 => 0.0,
        StateVariance::Finite(q) => 1.0 - (q / p).min(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid channel parameter {0}: must be finite and non-negative (n3 positive)")]
    InvalidChannel(&'static str),
    #[error("coding parameters of user {user} must be finite and non-negative")]
    NegativeParameter { user: usize },
    #[error("rho of user {user} is {rho}, outside [0, 1]")]
    RhoOutOfRange { user: usize, rho: f64 },
    #[error("power split of user {user} uses {used} > P = {limit}")]
    PowerSplit { user: usize, used: f64, limit: f64 },
    #[error("eta of user {user} is {eta}, outside [{min}, 1]")]
    EtaOutOfRange { user: usize, eta: f64, min: f64 },
    #[error("this model requires Q1 = Q2 = 0 (interference known to both encoders)")]
    PrivateStatePresent,
    #[error("common interference must be removed first (Q0 = 0); see GaussianChannel::remove_common_state")]
    CommonStatePresent,
    #[error("unbounded interference is only supported by prop3; use a finite Q")]
    UnboundedState,
    #[error("prop3 requires Q1 flagged unbounded and Q2 = 0; for finite Q1 use prop2")]
    Prop3Preconditions,
    #[error("singular conditioning covariance: {0} is degenerate given the other variables")]
    SingularConditioning(&'static str),
    #[error("at least 2 Monte-Carlo samples are required")]
    TooFewSamples,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
