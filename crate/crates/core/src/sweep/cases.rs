//! Four-case decomposition of the doubly dirty region and the sum-rate
//! versus signal-to-interference sweep built on it.

use alloc::vec::Vec;

use super::{trace_boundary, Axis, Executor, Model, SweepError, SweepSpec};
use crate::gaussian::{GaussianChannel, StateVariance};
use crate::geometry::{convex_union, RateRegion2D};
use crate::scalar::Bits;

/// Special cases of the doubly dirty region. Each pins some powers and
/// coefficients to zero and drops the `δ⁻`/`Δ⁻` corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CooperationCase {
    /// Case 1: no direct layers (`P'' = 0`, `α13 = α23 = 0`), so
    /// `R13 = R23 = 0`; everything goes through cooperation.
    FullCooperation,
    /// Case 2: no fresh layers and no cooperation (`P' = 0`, `α1 = α2 = 0`,
    /// `ρ = 0`), so `R12 = R21 = 0`.
    DirectOnly,
    /// Case 3: encoder 2 relays user 1 (`P''1 = P'2 = 0`, `α13 = α2 = 0`).
    RelayByEncoder2,
    /// Case 4: encoder 1 relays user 2 (`P'1 = P''2 = 0`, `α1 = α23 = 0`).
    RelayByEncoder1,
}

impl CooperationCase {
    pub const ALL: [CooperationCase; 4] = [
        CooperationCase::FullCooperation,
        CooperationCase::DirectOnly,
        CooperationCase::RelayByEncoder2,
        CooperationCase::RelayByEncoder1,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CooperationCase::FullCooperation => "case1-full-cooperation",
            CooperationCase::DirectOnly => "case2-direct-only",
            CooperationCase::RelayByEncoder2 => "case3-relay-by-encoder2",
            CooperationCase::RelayByEncoder1 => "case4-relay-by-encoder1",
        }
    }

    /// Fixed power splits and the coefficient axes left free.
    pub(super) fn pattern(self) -> ([f64; 2], &'static [Axis]) {
        use Axis::*;
        match self {
            CooperationCase::FullCooperation => ([1.0, 1.0], &[Alpha(0), Alpha(1)]),
            CooperationCase::DirectOnly => ([0.0, 0.0], &[AlphaDirect(0), AlphaDirect(1)]),
            CooperationCase::RelayByEncoder2 => ([1.0, 0.0], &[Alpha(0), AlphaDirect(1)]),
            CooperationCase::RelayByEncoder1 => ([0.0, 1.0], &[AlphaDirect(0), Alpha(1)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourCaseReport {
    /// Regions of the four cases, in [`CooperationCase::ALL`] order.
    pub cases: Vec<RateRegion2D>,
    pub hull: RateRegion2D,
    pub unrestricted: RateRegion2D,
    /// Largest distance from a vertex of the unrestricted region to the hull.
    pub excess: Bits,
}

impl FourCaseReport {
    pub fn exceeds(&self, tol: Bits) -> bool {
        self.excess > tol
    }
}

pub fn four_case_hull<E: Executor>(
    ch: &GaussianChannel,
    spec: &SweepSpec,
    exec: &E,
) -> Result<FourCaseReport, SweepError> {
    let mut cases = Vec::with_capacity(4);
    for case in CooperationCase::ALL {
        cases.push(trace_boundary(ch, spec, Model::Case(case), exec)?.region);
    }
    let hull = convex_union(cases.iter()).map_err(crate::gaussian::ModelError::from)?;
    let unrestricted = trace_boundary(ch, spec, Model::Prop2 { pure_dpc: false }, exec)?.region;
    let excess = unrestricted.vertices().iter().fold(0.0_f64, |m, v| m.max(hull.distance_to(*v)));
    Ok(FourCaseReport { cases, hull, unrestricted, excess })
}

/// Maximum sum-rate of each strategy at one signal-to-interference ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirRow {
    pub sir_db: f64,
    pub gdpc: Bits,
    pub full_cooperation: Bits,
    pub no_cooperation: Bits,
}

/// For each SIR sets `Q1 = Q2 = P / 10^(SIR/10)` and maximizes the sum rate
/// of the doubly dirty region and of cases 1 and 2.
pub fn sum_rate_vs_sir<E: Executor>(
    template: &GaussianChannel,
    sir_db: &[f64],
    spec: &SweepSpec,
    exec: &E,
) -> Result<Vec<SirRow>, SweepError> {
    if template.p1 != template.p2 {
        return Err(SweepError::Spec("sum-rate versus SIR needs a symmetric channel (P1 = P2)"));
    }
    if sir_db.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
        return Err(SweepError::Spec("SIR values must be numbers below +inf"));
    }
    let spec = SweepSpec { weights: 1, ..*spec };
    let mut rows = Vec::with_capacity(sir_db.len());
    for &sir in sir_db {
        let q = template.p1 * libm::pow(10.0, -sir / 10.0);
        let ch = GaussianChannel { q1: StateVariance::Finite(q), q2: StateVariance::Finite(q), ..*template };
        let run = |m| trace_boundary(&ch, &spec, m, exec).map(|r| r.region.max_sum_rate());
        rows.push(SirRow {
            sir_db: sir,
            gdpc: run(Model::Prop2 { pure_dpc: false })?,
            full_cooperation: run(Model::Case(CooperationCase::FullCooperation))?,
            no_cooperation: run(Model::Case(CooperationCase::DirectOnly))?,
        });
    }
    Ok(rows)
}
