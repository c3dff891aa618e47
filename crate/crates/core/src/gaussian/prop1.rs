//! Region when both encoders know the (common) interference. With optimal
//! dirty-paper coefficients the interference drops out entirely, so `Q0`
//! never enters these formulas.

use super::{CodingParams, GaussianChannel, ModelError};
use crate::geometry::SplitRatePolytope;
use crate::scalar::{cap_ratio, Bits};

/// Right-hand sides of the four total-rate constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop1Bounds {
    pub r1: Bits,
    pub r2: Bits,
    /// Fresh layers plus both direct layers.
    pub sum_layers: Bits,
    /// Coherent sum of everything, the full-cooperation limit.
    pub sum_coop: Bits,
}

pub fn prop1_bounds(ch: &GaussianChannel, cp: &CodingParams) -> Result<Prop1Bounds, ModelError> {
    ch.validate()?;
    if !(ch.q1.is_zero() && ch.q2.is_zero()) {
        return Err(ModelError::PrivateStatePresent);
    }
    cp.validate(ch)?;
    let fresh = |k: usize| {
        let u = cp.users[k];
        let rb = 1.0 - u.rho;
        cap_ratio(rb * u.p_fresh, rb * u.p_direct + ch.cooperation_noise(k))
    };
    let direct = |k: usize| {
        let u = cp.users[k];
        (1.0 - u.rho) * u.p_direct
    };
    let (f1, f2) = (fresh(0), fresh(1));
    let coherent = ch.p1 + ch.p2 + 2.0 * libm::sqrt(cp.users[0].rho * cp.users[1].rho * ch.p1 * ch.p2);
    Ok(Prop1Bounds {
        r1: f1 + cap_ratio(direct(0), ch.n3),
        r2: f2 + cap_ratio(direct(1), ch.n3),
        sum_layers: f1 + f2 + cap_ratio(direct(0) + direct(1), ch.n3),
        sum_coop: cap_ratio(coherent, ch.n3),
    })
}

/// The region as a degenerate split-rate system (`R12 = R1`, `R23 = R2`).
pub fn prop1_region(ch: &GaussianChannel, cp: &CodingParams) -> Result<SplitRatePolytope, ModelError> {
    let b = prop1_bounds(ch, cp)?;
    Ok(SplitRatePolytope::total_rate_form(Some(b.r1), Some(b.r2), &[b.sum_layers, b.sum_coop]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5(q0_db: f64) -> GaussianChannel {
        GaussianChannel::full_csit([10.0, 10.0], [1.0, 1.0, libm::pow(10.0, 0.7)], libm::pow(10.0, q0_db / 10.0))
    }

    #[test]
    fn full_cooperation_triangle() {
        let ch = fig5(5.0);
        let cp = CodingParams::split([3.0, 4.0], [7.0, 6.0]).with_rho([1.0, 1.0]);
        let b = prop1_bounds(&ch, &cp).unwrap();
        assert_eq!((b.r1, b.r2, b.sum_layers), (0.0, 0.0, 0.0));
        // ½·log2(1 + 40/10^0.7), mpmath at 40 digits
        assert!((b.sum_coop - 1.583_442_002_749_850).abs() < 1e-12);
    }

    #[test]
    fn no_cooperation_is_the_mac() {
        let ch = fig5(8.0);
        let b = prop1_bounds(&ch, &CodingParams::split([0.0; 2], [10.0; 2])).unwrap();
        assert!((b.sum_layers - 1.159_595_743_575_303_6).abs() < 1e-12);
        assert!((b.r1 - 0.791_341_177_455_778_1).abs() < 1e-12);
    }

    #[test]
    fn common_interference_never_enters() {
        let cp = CodingParams::split([2.0, 5.0], [8.0, 1.0]).with_rho([0.25, 0.5]);
        let a = prop1_region(&fig5(2.0), &cp).unwrap();
        let b = prop1_region(&fig5(8.0), &cp).unwrap();
        assert_eq!(a, b);
    }
}
