//! Doubly dirty GMAC: encoder `k` knows only its private state `S_k`.
//!
//! Each encoder spends `(1 - η_k)·P_k` cancelling part of its state, which
//! leaves the effective interference `β_k S_k` with variance
//! `Q_ke = (√Q_k - √((1-η_k)P_k))²`, then dirty-paper codes its fresh and
//! direct layers against it. `Q̂_ke` and `Q̿_ke` are the MMSE residuals of
//! that interference after observing one or both of the user's layers.
//!
//! Zero-power layers are evaluated by their limits: an observation with
//! no signal and a zero coefficient carries no information about the state;
//! with a positive coefficient it reveals it exactly.

use super::{CodingParams, GaussianChannel, ModelError, StateVariance};
use crate::geometry::SplitRatePolytope;
use crate::scalar::{cap_ratio, clamp_rate, Bits};

/// Whether the `δ_k⁻` / `Δ⁻` corrections are evaluated or pinned at zero
/// (the four special cases of the four-case decomposition pin them).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corrections {
    #[default]
    Computed,
    ForcedZero,
}

/// All intermediate quantities of the doubly dirty region, indexed by user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop2Terms {
    pub q_e: [f64; 2],
    pub q_hat: [f64; 2],
    pub q_dhat: [f64; 2],
    pub p_fresh_e: [f64; 2],
    pub p_direct_e: [f64; 2],
    /// `C_{12}`, `C_{21}`: penalties of the fresh layers.
    pub c_cross: [Bits; 2],
    /// `C_{13}`, `C_{23}`: penalties of the direct layers.
    pub c_direct: [Bits; 2],
    pub delta: [Bits; 2],
    pub delta_minus: [Bits; 2],
    pub cap_delta: [Bits; 3],
    pub cap_delta_minus: Bits,
}

/// Six right-hand sides on `R12, R21, R13, R23, R13 + R23, R1 + R2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop2Bounds {
    pub b12: Bits,
    pub b21: Bits,
    pub b13: Bits,
    pub b23: Bits,
    pub b13_23: Bits,
    pub b_sum: Bits,
}

impl Prop2Bounds {
    pub fn to_polytope(&self) -> SplitRatePolytope {
        SplitRatePolytope::theorem1_shape(self.b12, self.b21, self.b13, self.b23, self.b13_23, self.b_sum)
    }

    pub fn to_array(&self) -> [Bits; 6] {
        [self.b12, self.b21, self.b13, self.b23, self.b13_23, self.b_sum]
    }
}

/// `α²·q/p`, the signal-to-noise ratio at which an observation
/// `X + α·T` (with `Var X = p`, `Var T = q`) sees the state `T`.
fn state_snr(alpha: f64, q: f64, p: f64) -> f64 {
    if alpha == 0.0 || q == 0.0 {
        0.0
    } else if p == 0.0 {
        f64::INFINITY
    } else {
        alpha * alpha * q / p
    }
}

/// `C(snr)` allowing `snr = ∞`.
fn penalty(snr: f64) -> Bits {
    if snr.is_infinite() {
        f64::INFINITY
    } else {
        0.5 * libm::log2(1.0 + snr)
    }
}

/// `q / (1 + Σ snr)`, the residual variance after the observations.
fn residual(q: f64, snr: f64) -> f64 {
    if q == 0.0 || snr.is_infinite() {
        0.0
    } else {
        q / (1.0 + snr)
    }
}

fn check(ch: &GaussianChannel, cp: &CodingParams) -> Result<[f64; 2], ModelError> {
    ch.validate()?;
    if ch.q0 != 0.0 {
        return Err(ModelError::CommonStatePresent);
    }
    let q = [ch.q1, ch.q2].map(StateVariance::finite);
    let [Some(q1), Some(q2)] = q else {
        return Err(ModelError::UnboundedState);
    };
    cp.validate(ch)?;
    Ok([q1, q2])
}

pub fn prop2_terms(ch: &GaussianChannel, cp: &CodingParams) -> Result<Prop2Terms, ModelError> {
    let q = check(ch, cp)?;
    let mut t = Prop2Terms {
        q_e: [0.0; 2],
        q_hat: [0.0; 2],
        q_dhat: [0.0; 2],
        p_fresh_e: [0.0; 2],
        p_direct_e: [0.0; 2],
        c_cross: [0.0; 2],
        c_direct: [0.0; 2],
        delta: [0.0; 2],
        delta_minus: [0.0; 2],
        cap_delta: [0.0; 3],
        cap_delta_minus: 0.0,
    };
    for k in 0..2 {
        let u = cp.users[k];
        let p = ch.power(k);
        let clean = libm::sqrt(q[k]) - libm::sqrt((1.0 - u.eta) * p);
        let qe = clean * clean;
        let scale = u.eta * (1.0 - u.rho);
        let (pf, pd) = (scale * u.p_fresh, scale * u.p_direct);
        let snr_f = state_snr(u.alpha, qe, pf);
        let snr_d = state_snr(u.alpha_direct, qe, pd);
        let r = residual(qe, snr_f);
        let a = 1.0 - u.alpha;
        let ad = 1.0 - u.alpha - u.alpha_direct;
        t.q_e[k] = qe;
        t.p_fresh_e[k] = pf;
        t.p_direct_e[k] = pd;
        t.q_hat[k] = a * a * r;
        t.q_dhat[k] = ad * ad * residual(qe, snr_f + snr_d);
        t.c_cross[k] = penalty(snr_f);
        // Written through the residual r rather than Q̂/(1-α)², which is
        // 0/0 at α = 1.
        t.c_direct[k] = penalty(state_snr(u.alpha_direct, r, pd));
    }
    let fresh_num = |k: usize| t.p_fresh_e[k] + t.q_e[k] - t.q_hat[k];
    for k in 0..2 {
        let den = t.p_direct_e[k] + t.q_hat[k] + t.q_dhat[1 - k] + ch.n3;
        t.delta[k] = cap_ratio(fresh_num(k), den) - t.c_cross[k];
        t.delta_minus[k] = t.delta[k].min(0.0);
    }
    let den = t.p_direct_e[0] + t.p_direct_e[1] + t.q_hat[0] + t.q_hat[1] + ch.n3;
    t.cap_delta = [
        cap_ratio(fresh_num(0), den) - t.c_cross[0],
        cap_ratio(fresh_num(1), den) - t.c_cross[1],
        cap_ratio(fresh_num(0) + fresh_num(1), den) - t.c_cross[0] - t.c_cross[1],
    ];
    t.cap_delta_minus = t.cap_delta.iter().fold(0.0_f64, |m, &d| m.min(d));
    Ok(t)
}

pub fn prop2_bounds(
    ch: &GaussianChannel,
    cp: &CodingParams,
    corrections: Corrections,
) -> Result<Prop2Bounds, ModelError> {
    let t = prop2_terms(ch, cp)?;
    let (dm, cdm) = match corrections {
        Corrections::Computed => (t.delta_minus, t.cap_delta_minus),
        Corrections::ForcedZero => ([0.0; 2], 0.0),
    };
    let [u1, u2] = cp.users;
    let den3 = t.q_dhat[0] + t.q_dhat[1] + ch.n3;
    let fresh = |k: usize, n: f64| {
        cap_ratio(t.p_fresh_e[k] + t.q_e[k] - t.q_hat[k], t.p_direct_e[k] + t.q_hat[k] + n) - t.c_cross[k]
    };
    let direct_num = |k: usize| t.p_direct_e[k] + t.q_hat[k] - t.q_dhat[k];
    let coherent =
        u1.eta * ch.p1 + u2.eta * ch.p2 + 2.0 * libm::sqrt(u1.eta * u2.eta * u1.rho * u2.rho * ch.p1 * ch.p2);
    let all_penalties = t.c_cross[0] + t.c_cross[1] + t.c_direct[0] + t.c_direct[1];
    Ok(Prop2Bounds {
        b12: clamp_rate(fresh(0, ch.n2)),
        b21: clamp_rate(fresh(1, ch.n1)),
        b13: clamp_rate(cap_ratio(direct_num(0), den3) - t.c_direct[0] + dm[0]),
        b23: clamp_rate(cap_ratio(direct_num(1), den3) - t.c_direct[1] + dm[1]),
        b13_23: clamp_rate(cap_ratio(direct_num(0) + direct_num(1), den3) - t.c_direct[0] - t.c_direct[1] + cdm),
        b_sum: clamp_rate(cap_ratio(coherent + t.q_e[0] - t.q_dhat[0] + t.q_e[1] - t.q_dhat[1], den3) - all_penalties),
    })
}

pub fn prop2_region(ch: &GaussianChannel, cp: &CodingParams) -> Result<SplitRatePolytope, ModelError> {
    prop2_region_with(ch, cp, Corrections::Computed)
}

pub fn prop2_region_with(
    ch: &GaussianChannel,
    cp: &CodingParams,
    corrections: Corrections,
) -> Result<SplitRatePolytope, ModelError> {
    Ok(prop2_bounds(ch, cp, corrections)?.to_polytope())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn channel(q: f64) -> GaussianChannel {
        GaussianChannel {
            p1: 10.0,
            p2: 10.0,
            n1: 0.1,
            n2: 0.1,
            n3: 1.0,
            q0: 0.0,
            q1: StateVariance::Finite(q),
            q2: StateVariance::Finite(q),
        }
    }

    #[test]
    fn clean_channel_has_no_penalties() {
        let mut cp = CodingParams::split([4.0, 5.0], [6.0, 5.0]);
        cp.users[0].alpha = 0.3;
        cp.users[1].alpha_direct = 0.4;
        let t = prop2_terms(&channel(0.0), &cp).unwrap();
        assert_eq!(t.q_e, [0.0; 2]);
        assert_eq!(t.q_hat, [0.0; 2]);
        assert_eq!(t.q_dhat, [0.0; 2]);
        assert_eq!(t.c_cross, [0.0; 2]);
        assert_eq!(t.c_direct, [0.0; 2]);
    }

    #[test]
    fn full_cleaning_removes_the_state() {
        let ch = channel(4.0);
        let mut cp = CodingParams::split([3.0, 3.0], [3.0, 3.0]);
        cp.users[0].eta = 0.6; // (1 - η)·P = Q
        let t = prop2_terms(&ch, &cp).unwrap();
        assert!(t.q_e[0].abs() < 1e-15);
        assert!((t.q_e[1] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn unit_fresh_coefficient() {
        let ch = channel(4.0);
        let mut cp = CodingParams::split([5.0, 0.0], [5.0, 0.0]);
        cp.users[0].alpha = 1.0;
        let t = prop2_terms(&ch, &cp).unwrap();
        assert_eq!(t.q_hat[0], 0.0);
        assert!((t.c_cross[0] - 0.5 * libm::log2(1.0 + 4.0 / 5.0)).abs() < 1e-15);
        assert_eq!(t.c_direct[0], 0.0);
    }

    #[test]
    fn corrections_are_non_positive() {
        let ch = channel(20.0);
        let mut cp = CodingParams::split([2.0, 7.0], [8.0, 3.0]).with_rho([0.2, 0.4]);
        cp.users[0].alpha = 0.9;
        cp.users[1].alpha = 1.3;
        cp.users[0].alpha_direct = 0.5;
        let t = prop2_terms(&ch, &cp).unwrap();
        assert!(t.cap_delta_minus <= 0.0 && t.delta_minus.iter().all(|d| *d <= 0.0));
        assert!(t.cap_delta_minus <= t.cap_delta[2].min(0.0));
    }

    #[test]
    fn preconditions() {
        let mut ch = channel(1.0);
        ch.q0 = 1.0;
        assert_eq!(prop2_terms(&ch, &CodingParams::default()), Err(ModelError::CommonStatePresent));
        let mut ch = channel(1.0);
        ch.q1 = StateVariance::Unbounded;
        assert_eq!(prop2_terms(&ch, &CodingParams::default()), Err(ModelError::UnboundedState));
        let mut cp = CodingParams::default();
        cp.users[0].eta = 0.5; // minimum is 1 - Q/P = 0.9
        assert!(matches!(prop2_terms(&channel(1.0), &cp), Err(ModelError::EtaOutOfRange { user: 1, .. })));
    }
}
