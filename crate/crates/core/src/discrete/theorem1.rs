//! Rate bounds of the general state-dependent channel for one admissible pmf.

use alloc::vec::Vec;

use super::info::cmi;
use super::{validate_factorization, DiscreteError, JointPmf, Var, VarSet};
use crate::geometry::{convex_union, RateRegion2D, SplitRatePolytope};
use crate::scalar::Bits;

/// The six bounds on `(R12, R21, R13, R23)` and the corrections folded
/// into them. Bounds are clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Bounds {
    pub b12: Bits,
    pub b21: Bits,
    pub b13: Bits,
    pub b23: Bits,
    pub b13_23: Bits,
    pub b_sum: Bits,
    /// `δ1⁻`, `δ2⁻`.
    pub delta_minus: [Bits; 2],
    /// `Δ⁻ = min{0, Δ1, Δ2, Δ3}`.
    pub cap_delta_minus: Bits,
}

impl Theorem1Bounds {
    pub fn to_array(&self) -> [Bits; 6] {
        [self.b12, self.b21, self.b13, self.b23, self.b13_23, self.b_sum]
    }

    pub fn to_polytope(&self) -> SplitRatePolytope {
        SplitRatePolytope::theorem1_shape(self.b12, self.b21, self.b13, self.b23, self.b13_23, self.b_sum)
    }
}

fn set(v: &[Var]) -> VarSet {
    VarSet::of(v)
}

/// Rate gain minus binning cost: `I(A; Y3 | C) - I(A; S | C)`.
fn net(p: &JointPmf, a: &[Var], states: &[Var], c: &[Var]) -> Bits {
    let y3 = set(&[Var::Y3]);
    cmi(p, set(a), y3, set(c)) - cmi(p, set(a), set(states), set(c))
}

/// Evaluate the six bounds. The pmf must pass [`validate_factorization`].
pub fn theorem1_bounds(p: &JointPmf) -> Result<Theorem1Bounds, DiscreteError> {
    let violations = validate_factorization(p);
    if !violations.is_empty() {
        return Err(DiscreteError::Factorization(violations));
    }
    Ok(theorem1_bounds_unchecked(p))
}

pub(crate) fn theorem1_bounds_unchecked(p: &JointPmf) -> Theorem1Bounds {
    use Var::*;
    let mi = |a: &[Var], b: &[Var], c: &[Var]| cmi(p, set(a), set(b), set(c));

    let b12 = mi(&[V1], &[Y2], &[S0, S2, U, X2]) - mi(&[V1], &[S1], &[S0, U]);
    let b21 = mi(&[V2], &[Y1], &[S0, S1, U, X1]) - mi(&[V2], &[S2], &[S0, U]);

    let d1 = net(p, &[V1], &[S0, S1], &[U, V2]);
    let d2 = net(p, &[V2], &[S0, S2], &[U, V1]);
    let d3 = net(p, &[V1, V2], &[S0, S1, S2], &[U]);
    let cap_delta_minus = 0.0_f64.min(d1).min(d2).min(d3);
    let delta1_minus = net(p, &[V1], &[S0, S1], &[U, V2, V23]).min(0.0);
    let delta2_minus = net(p, &[V2], &[S0, S2], &[U, V1, V13]).min(0.0);

    let b13 = net(p, &[V13], &[S0, S1], &[U, V1, V2, V23]) + delta1_minus;
    let b23 = net(p, &[V23], &[S0, S2], &[U, V1, V2, V13]) + delta2_minus;
    let b13_23 = net(p, &[V13, V23], &[S0, S1, S2], &[U, V1, V2]) + cap_delta_minus;
    let b_sum = net(p, &[U, V1, V2, V13, V23], &[S0, S1, S2], &[]);

    Theorem1Bounds {
        b12: b12.max(0.0),
        b21: b21.max(0.0),
        b13: b13.max(0.0),
        b23: b23.max(0.0),
        b13_23: b13_23.max(0.0),
        b_sum: b_sum.max(0.0),
        delta_minus: [delta1_minus, delta2_minus],
        cap_delta_minus,
    }
}

/// Convex hull of the projected regions of a family of pmfs. With
/// `message2_empty` user 2 sends nothing (`R21 = R23 = 0`).
pub fn family_union<'a, I>(pmfs: I, message2_empty: bool) -> Result<RateRegion2D, DiscreteError>
where
    I: IntoIterator<Item = &'a JointPmf>,
{
    let mut regions = Vec::new();
    for p in pmfs {
        let mut poly = theorem1_bounds(p)?.to_polytope();
        if message2_empty {
            pin_user2(&mut poly);
        }
        regions.push(poly.project()?);
    }
    Ok(convex_union(regions.iter())?)
}

pub(crate) fn pin_user2(poly: &mut SplitRatePolytope) {
    poly.push([0.0, 0.0, 1.0, 0.0], 0.0);
    poly.push([0.0, 0.0, 0.0, 1.0], 0.0);
}
