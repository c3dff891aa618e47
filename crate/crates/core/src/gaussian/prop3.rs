//! GMAC where only encoder 1 sees the interference and the interference is
//! arbitrarily strong (`Q1 → ∞`, `Q0 = Q2 = 0`). Encoder 1 puts all its
//! private power into one dirty-paper-coded direct layer with coefficient
//! `α13`; encoder 2 splits its power into fresh and direct layers.
//!
//! Parameters read from [`CodingParams`]: `users[0].rho`,
//! `users[0].alpha_direct` (`α13`), `users[1].rho`, `users[1].p_fresh`,
//! `users[1].p_direct`. Everything else is ignored.

use super::{CodingParams, GaussianChannel, ModelError, StateVariance};
use crate::geometry::SplitRatePolytope;
use crate::scalar::{cap_ratio, clamp_rate, half_log2, Bits};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop3Bounds {
    pub r2: Bits,
    pub sum: Bits,
}

pub fn prop3_bounds(ch: &GaussianChannel, cp: &CodingParams) -> Result<Prop3Bounds, ModelError> {
    ch.validate()?;
    if ch.q0 != 0.0 {
        return Err(ModelError::CommonStatePresent);
    }
    if ch.q1 != StateVariance::Unbounded || !ch.q2.is_zero() {
        return Err(ModelError::Prop3Preconditions);
    }
    cp.validate(ch)?;
    let a = cp.users[0].alpha_direct;
    let own = (1.0 - cp.users[0].rho) * ch.p1;
    let u2 = cp.users[1];
    let rb2 = 1.0 - u2.rho;
    // Residual interference of encoder 1's layer at the receiver.
    let leak = if own == 0.0 {
        0.0
    } else if a == 0.0 {
        f64::INFINITY
    } else {
        let t = (1.0 - a) / a;
        t * t * own
    };
    let r2 = cap_ratio(rb2 * u2.p_fresh, rb2 * u2.p_direct + ch.n1) + cap_ratio(rb2 * u2.p_direct, leak + ch.n3);
    let sum = if own == 0.0 { 0.0 } else { clamp_rate(half_log2(own / ((1.0 - a) * (1.0 - a) * own + a * a * ch.n3))) };
    Ok(Prop3Bounds { r2, sum })
}

pub fn prop3_region(ch: &GaussianChannel, cp: &CodingParams) -> Result<SplitRatePolytope, ModelError> {
    let b = prop3_bounds(ch, cp)?;
    Ok(SplitRatePolytope::total_rate_form(None, Some(b.r2), &[b.sum]))
}
