//! Scalar primitives shared by every model: dB conversion, the Gaussian
//! capacity function `C(x) = ½·log2(1 + x)` and Gaussian differential
//! entropy. All logarithms are base 2.

use core::f64::consts::{E, PI};

use thiserror::Error;

/// Rate in bits per channel use.
pub type Bits = f64;

/// Value in power decibels, `linear = 10^(dB/10)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DbValue(pub f64);

impl DbValue {
    pub fn linear(self) -> Result<f64, DomainError> {
        db_to_linear(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("capacity argument must be finite and non-negative, got {0}")]
    NegativeSnr(f64),
    #[error("dB value must be finite, got {0}")]
    NonFiniteDb(f64),
    #[error("variance must be finite and positive, got {0}")]
    NonPositiveVariance(f64),
}

/// `C(snr) = ½·log2(1 + snr)`.
pub fn capacity_fn(snr: f64) -> Result<Bits, DomainError> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(DomainError::NegativeSnr(snr));
    }
    Ok(0.5 * libm::log2(1.0 + snr))
}

pub fn db_to_linear(x: DbValue) -> Result<f64, DomainError> {
    if !x.0.is_finite() {
        return Err(DomainError::NonFiniteDb(x.0));
    }
    Ok(libm::pow(10.0, x.0 / 10.0))
}

/// `½·log2(2πe·variance)`.
pub fn gaussian_entropy(variance: f64) -> Result<Bits, DomainError> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(DomainError::NonPositiveVariance(variance));
    }
    Ok(0.5 * libm::log2(2.0 * PI * E * variance))
}

/// Capacity-style term `C(num / den)` for formulas whose arguments may
/// degenerate: `0/0` evaluates to 0, `x/0` with `x > 0` to `+∞`.
/// Negative arguments are rejected upstream; here they clamp to 0.
pub(crate) fn cap_ratio(num: f64, den: f64) -> Bits {
    if num <= 0.0 {
        return 0.0;
    }
    if den <= 0.0 || num.is_infinite() {
        return f64::INFINITY;
    }
    0.5 * libm::log2(1.0 + num / den)
}

/// `½·log2(x)` with `log2(0) = -∞`.
pub(crate) fn half_log2(x: f64) -> Bits {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        0.5 * libm::log2(x)
    }
}

/// Clamp a rate bound to be non-negative. NaN (from `∞ - ∞`) maps to 0.
pub(crate) fn clamp_rate(x: Bits) -> Bits {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}
