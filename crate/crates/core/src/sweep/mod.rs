//! Boundary tracing for regions defined as unions over coding parameters.
//!
//! For each weight `μ` the engine maximizes `μ·R1 + (1-μ)·R2` over a
//! product grid of the cooperation, cleaning and power-split fractions,
//! with dirty-paper coefficients initialised by the single-user dirty-paper rule. The best
//! point is then refined: a full-range scan of every coefficient axis,
//! followed by `depth` levels of coordinate search with the step shrinking
//! by `shrink` per level. The returned region is the convex hull of every
//! evaluated sample, so adding samples (finer grids, deeper refinement) can
//! only grow it.
//!
//! Parallelism is delegated to an [`Executor`] whose `map` preserves order;
//! every reduction then runs serially on the ordered results, so the output
//! does not depend on the number of workers.

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::gaussian::prop2::{prop2_region_with, Corrections};
use crate::gaussian::{eta_min, prop1_region, prop3_region, CodingParams, GaussianChannel, ModelError, Scenario};
use crate::geometry::{convex_union, RatePair, RateRegion2D, SplitRatePolytope};

mod cases;

pub use cases::{four_case_hull, sum_rate_vs_sir, CooperationCase, FourCaseReport, SirRow};

/// Order-preserving parallel map.
pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    /// Grid points on each `ρ_k ∈ [0, 1]` axis.
    pub rho_points: usize,
    /// Grid points on each `η_k ∈ [η_min, 1]` axis.
    pub eta_points: usize,
    /// Grid points on each power-split axis: fraction `s` of the power on the
    /// fresh layer, `P' = s·P`, `P'' = (1 - s)·P`.
    pub split_points: usize,
    /// Points of the full-range scan of each dirty-paper coefficient.
    pub alpha_points: usize,
    /// Coordinate-search levels after the coefficient scan.
    pub depth: usize,
    /// Step reduction per refinement level.
    pub shrink: f64,
    /// Number of weights `μ`, uniform on `[0, 1]` (one weight means `μ = ½`).
    pub weights: usize,
    /// Upper end of every coefficient axis; `None` uses `2S/(S + N3)` with
    /// `S = P1 + P2 + 2√(P1P2)`.
    pub alpha_cap: Option<f64>,
    /// Seed for the randomized checks that accompany a sweep; the sweep
    /// itself is a deterministic grid search.
    pub seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            rho_points: 9,
            eta_points: 9,
            split_points: 5,
            alpha_points: 9,
            depth: 3,
            shrink: 3.0,
            weights: 21,
            alpha_cap: None,
            seed: 0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.rho_points < 2 || self.eta_points < 2 || self.split_points < 2 || self.alpha_points < 2 {
            return Err(SweepError::Spec("grid densities must be at least 2 per axis"));
        }
        if self.weights == 0 {
            return Err(SweepError::Spec("at least one weight is required"));
        }
        if !(self.shrink > 1.0 && self.shrink.is_finite()) {
            return Err(SweepError::Spec("shrink factor must be greater than 1"));
        }
        if let Some(cap) = self.alpha_cap {
            if !(cap > 0.0 && cap.is_finite()) {
                return Err(SweepError::Spec("alpha cap must be positive"));
            }
        }
        Ok(())
    }

    pub fn mu_values(&self) -> Vec<f64> {
        if self.weights == 1 {
            return alloc::vec![0.5];
        }
        let last = (self.weights - 1) as f64;
        (0..self.weights).map(|i| i as f64 / last).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    Spec(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which union to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Interference known to both encoders.
    Prop1,
    /// Doubly dirty channel; `pure_dpc` pins `η = 1` (no state cleaning).
    /// The common state, if any, is removed first.
    Prop2 {
        pure_dpc: bool,
    },
    /// One encoder knows an unbounded state.
    Prop3,
    /// One of the four special cases of the doubly dirty region.
    Case(CooperationCase),
    Baseline(Scenario),
}

/// A point of the parameter space. Power splits are fractions of `P_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub rho: [f64; 2],
    pub eta: [f64; 2],
    pub split: [f64; 2],
    pub alpha: [f64; 2],
    pub alpha_direct: [f64; 2],
}

impl Default for SweepPoint {
    fn default() -> Self {
        Self { rho: [0.0; 2], eta: [1.0; 2], split: [0.0; 2], alpha: [0.0; 2], alpha_direct: [0.0; 2] }
    }
}

impl SweepPoint {
    pub const FIELDS: [&'static str; 10] = ["rho1", "rho2", "eta1", "eta2", "s1", "s2", "a1", "a13", "a2", "a23"];

    /// Values in [`Self::FIELDS`] order; ties are broken on this order.
    pub fn key(&self) -> [f64; 10] {
        [
            self.rho[0],
            self.rho[1],
            self.eta[0],
            self.eta[1],
            self.split[0],
            self.split[1],
            self.alpha[0],
            self.alpha_direct[0],
            self.alpha[1],
            self.alpha_direct[1],
        ]
    }

    pub fn coding(&self, ch: &GaussianChannel) -> CodingParams {
        let mut cp = CodingParams::default();
        for k in 0..2 {
            let p = ch.power(k);
            let u = &mut cp.users[k];
            u.rho = self.rho[k];
            u.eta = self.eta[k];
            u.p_fresh = self.split[k] * p;
            u.p_direct = (1.0 - self.split[k]) * p;
            u.alpha = self.alpha[k];
            u.alpha_direct = self.alpha_direct[k];
        }
        cp
    }

    fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Rho(k) => self.rho[k],
            Axis::Eta(k) => self.eta[k],
            Axis::Split(k) => self.split[k],
            Axis::Alpha(k) => self.alpha[k],
            Axis::AlphaDirect(k) => self.alpha_direct[k],
        }
    }

    fn set(&mut self, axis: Axis, v: f64) {
        match axis {
            Axis::Rho(k) => self.rho[k] = v,
            Axis::Eta(k) => self.eta[k] = v,
            Axis::Split(k) => self.split[k] = v,
            Axis::Alpha(k) => self.alpha[k] = v,
            Axis::AlphaDirect(k) => self.alpha_direct[k] = v,
        }
    }
}

fn cmp_key(a: &SweepPoint, b: &SweepPoint) -> Ordering {
    for (x, y) in a.key().iter().zip(b.key().iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Rho(usize),
    Eta(usize),
    Split(usize),
    Alpha(usize),
    AlphaDirect(usize),
}

#[derive(Debug, Clone, Copy)]
struct AxisRange {
    axis: Axis,
    lo: f64,
    hi: f64,
    points: usize,
}

impl AxisRange {
    fn new(axis: Axis, lo: f64, hi: f64, points: usize) -> Self {
        let points = if hi - lo > 1e-15 { points } else { 1 };
        Self { axis, lo, hi, points }
    }

    fn value(&self, i: usize) -> f64 {
        if self.points == 1 {
            self.lo
        } else if i + 1 == self.points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64
        }
    }

    fn step(&self) -> f64 {
        if self.points > 1 {
            (self.hi - self.lo) / (self.points - 1) as f64
        } else {
            0.0
        }
    }
}

/// The parameter space of one model on one channel.
struct Plan {
    model: Model,
    channel: GaussianChannel,
    base: SweepPoint,
    grid: Vec<AxisRange>,
    search: Vec<AxisRange>,
    alpha_cap: f64,
    corrections: Corrections,
}

fn default_alpha_cap(ch: &GaussianChannel) -> f64 {
    let s = ch.p1 + ch.p2 + 2.0 * libm::sqrt(ch.p1 * ch.p2);
    2.0 * s / (s + ch.n3)
}

impl Plan {
    fn new(ch: &GaussianChannel, spec: &SweepSpec, model: Model) -> Result<Self, SweepError> {
        spec.validate()?;
        ch.validate()?;
        let channel = match model {
            Model::Prop1 => *ch,
            Model::Baseline(s) => s.effective_channel(ch),
            Model::Prop2 { .. } | Model::Prop3 | Model::Case(_) => ch.remove_common_state(),
        };
        let cap = spec.alpha_cap.unwrap_or_else(|| default_alpha_cap(&channel));
        let rho = |k| AxisRange::new(Axis::Rho(k), 0.0, 1.0, spec.rho_points);
        let split = |k| AxisRange::new(Axis::Split(k), 0.0, 1.0, spec.split_points);
        let eta = |k: usize| {
            let lo = eta_min(channel.power(k), channel.state(k));
            AxisRange::new(Axis::Eta(k), lo, 1.0, spec.eta_points)
        };
        let coef = |axis| AxisRange::new(axis, 0.0, cap, spec.alpha_points);
        use Axis::*;
        let mut base = SweepPoint::default();
        let (grid, search) = match model {
            Model::Prop1 | Model::Baseline(Scenario::GmacCsit | Scenario::GmacNoCsit) => {
                (alloc::vec![rho(0), rho(1), split(0), split(1)], Vec::new())
            }
            Model::Baseline(Scenario::MacCsit | Scenario::MacNoCsit) => (Vec::new(), Vec::new()),
            Model::Prop2 { pure_dpc } => {
                let mut g = alloc::vec![rho(0), rho(1)];
                if !pure_dpc {
                    g.push(eta(0));
                    g.push(eta(1));
                }
                g.push(split(0));
                g.push(split(1));
                (g, alloc::vec![coef(Alpha(0)), coef(AlphaDirect(0)), coef(Alpha(1)), coef(AlphaDirect(1))])
            }
            Model::Prop3 => (alloc::vec![rho(0), rho(1), split(1)], alloc::vec![coef(AlphaDirect(0))]),
            Model::Case(case) => {
                let (s, free) = case.pattern();
                base.split = s;
                let mut g = Vec::new();
                if case != CooperationCase::DirectOnly {
                    g.push(rho(0));
                    g.push(rho(1));
                }
                g.push(eta(0));
                g.push(eta(1));
                (g, free.iter().map(|a| coef(*a)).collect())
            }
        };
        let corrections = match model {
            Model::Case(_) => Corrections::ForcedZero,
            _ => Corrections::Computed,
        };
        Ok(Self { model, channel, base, grid, search, alpha_cap: cap, corrections })
    }

    /// The plans searched for `model`. The doubly dirty union also searches
    /// the four [`CooperationCase`] sub-families with the corrections kept: they
    /// are subsets of the union whose optima a single refinement start can
    /// miss.
    fn family(ch: &GaussianChannel, spec: &SweepSpec, model: Model) -> Result<Vec<Self>, SweepError> {
        let mut plans = alloc::vec![Self::new(ch, spec, model)?];
        if let Model::Prop2 { pure_dpc } = model {
            for case in CooperationCase::ALL {
                let mut sub = Self::new(ch, spec, Model::Case(case))?;
                sub.corrections = Corrections::Computed;
                if pure_dpc {
                    sub.grid.retain(|a| !matches!(a.axis, Axis::Eta(_)));
                }
                plans.push(sub);
            }
        }
        Ok(plans)
    }

    fn grid_size(&self) -> usize {
        self.grid.iter().map(|a| a.points).product()
    }

    fn grid_point(&self, mut index: usize) -> SweepPoint {
        let mut p = self.base;
        for a in self.grid.iter().rev() {
            p.set(a.axis, a.value(index % a.points));
            index /= a.points;
        }
        self.init_coefficients(&mut p);
        p
    }

    /// Single-user dirty-paper starting values for the searched coefficients.
    fn init_coefficients(&self, p: &mut SweepPoint) {
        let ch = &self.channel;
        for a in &self.search {
            let v = match a.axis {
                Axis::Alpha(k) => {
                    let s = p.eta[k] * (1.0 - p.rho[k]) * ch.power(k);
                    let (pf, pd) = (s * p.split[k], s * (1.0 - p.split[k]));
                    ratio(pf, pf + pd + ch.cooperation_noise(k))
                }
                Axis::AlphaDirect(_) if self.model == Model::Prop3 => {
                    let own = (1.0 - p.rho[0]) * ch.p1;
                    ratio(own, own + ch.n3)
                }
                Axis::AlphaDirect(k) => {
                    let pd = p.eta[k] * (1.0 - p.rho[k]) * ch.power(k) * (1.0 - p.split[k]);
                    ratio(pd, pd + ch.n3)
                }
                _ => continue,
            };
            p.set(a.axis, v.min(self.alpha_cap));
        }
    }

    fn polytope(&self, p: &SweepPoint) -> Result<SplitRatePolytope, ModelError> {
        let ch = &self.channel;
        let cp = p.coding(ch);
        match self.model {
            Model::Prop1 | Model::Baseline(_) => prop1_region(ch, &cp),
            Model::Prop2 { .. } | Model::Case(_) => prop2_region_with(ch, &cp, self.corrections),
            Model::Prop3 => prop3_region(ch, &cp),
        }
    }

    fn region(&self, p: &SweepPoint) -> Result<RateRegion2D, ModelError> {
        Ok(self.polytope(p)?.project()?)
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// Best point for one weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winner {
    pub mu: f64,
    pub value: f64,
    pub point: SweepPoint,
    /// Maximizing vertex of the winner's own region.
    pub rate: RatePair,
}

impl Winner {
    fn better_than(&self, other: &Winner) -> bool {
        match self.value.total_cmp(&other.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => cmp_key(&self.point, &other.point) == Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Convex hull over every evaluated parameter point.
    pub region: RateRegion2D,
    /// One entry per weight, in increasing `μ`.
    pub winners: Vec<Winner>,
    /// Number of parameter points evaluated.
    pub samples: usize,
}

const CHUNK: usize = 2048;

/// Trace the union region of `model` on `ch`.
pub fn trace_boundary<E: Executor>(
    ch: &GaussianChannel,
    spec: &SweepSpec,
    model: Model,
    exec: &E,
) -> Result<SweepResult, SweepError> {
    let plans = Plan::family(ch, spec, model)?;
    let mus = spec.mu_values();
    let mut hulls = Vec::new();
    let mut samples = 0;
    let mut winners: Vec<Option<Winner>> = alloc::vec![None; mus.len()];
    for plan in &plans {
        let (hull, best, n) = grid_phase(plan, &mus, exec)?;
        hulls.push(hull);
        samples += n;
        offer_all(&mut winners, best.iter().copied().map(Some));
        let refined = exec.map(mus.len(), |j| refine(plan, spec, &mus, j, best[j]));
        for r in refined {
            // a search started from one weight may also beat other weights
            let (found, hull, n) = r?;
            hulls.push(hull);
            samples += n;
            offer_all(&mut winners, found);
        }
    }
    let region = convex_union(hulls.iter()).map_err(ModelError::from)?;
    let winners = winners.into_iter().map(|w| w.expect("at least one plan")).collect();
    Ok(SweepResult { region, winners, samples })
}

/// Evaluate the whole grid of one plan: hull of every sample and the best
/// grid point per weight.
fn grid_phase<E: Executor>(
    plan: &Plan,
    mus: &[f64],
    exec: &E,
) -> Result<(RateRegion2D, Vec<Winner>, usize), ModelError> {
    let total = plan.grid_size();
    let chunks = total.div_ceil(CHUNK);
    let partial = exec.map(chunks, |c| -> Result<(RateRegion2D, Vec<Winner>), ModelError> {
        let mut regions = Vec::new();
        let mut best: Vec<Option<Winner>> = alloc::vec![None; mus.len()];
        for i in (c * CHUNK)..((c + 1) * CHUNK).min(total) {
            let p = plan.grid_point(i);
            let r = plan.region(&p)?;
            offer(&mut best, mus, &p, &r);
            regions.push(r);
        }
        let hull = convex_union(regions.iter()).unwrap_or_else(|_| RateRegion2D::origin());
        Ok((hull, best.into_iter().flatten().collect()))
    });

    let mut hulls = Vec::with_capacity(chunks);
    let mut best: Vec<Option<Winner>> = alloc::vec![None; mus.len()];
    for part in partial {
        let (hull, winners) = part?;
        hulls.push(hull);
        for (slot, w) in best.iter_mut().zip(winners) {
            if slot.is_none_or(|b| w.better_than(&b)) {
                *slot = Some(w);
            }
        }
    }
    let hull = convex_union(hulls.iter())?;
    Ok((hull, best.into_iter().map(|w| w.expect("grid is non-empty")).collect(), total))
}

fn offer_all(best: &mut [Option<Winner>], found: impl IntoIterator<Item = Option<Winner>>) {
    for (slot, w) in best.iter_mut().zip(found) {
        let Some(w) = w else { continue };
        if slot.is_none_or(|b| w.better_than(&b)) {
            *slot = Some(w);
        }
    }
}

fn offer(best: &mut [Option<Winner>], mus: &[f64], p: &SweepPoint, r: &RateRegion2D) {
    for (slot, &mu) in best.iter_mut().zip(mus) {
        let (value, rate) = r.support(mu);
        let w = Winner { mu, value, point: *p, rate };
        if slot.is_none_or(|b| w.better_than(&b)) {
            *slot = Some(w);
        }
    }
}

/// Coordinate search around `start`, the current winner of weight `mus[j]`.
/// Returns the best evaluated point for every weight, the hull of everything
/// evaluated and the number of evaluations.
fn refine(
    plan: &Plan,
    spec: &SweepSpec,
    mus: &[f64],
    j: usize,
    start: Winner,
) -> Result<(Vec<Option<Winner>>, RateRegion2D, usize), ModelError> {
    let mu = mus[j];
    let mut best = start;
    let mut all: Vec<Option<Winner>> = alloc::vec![None; mus.len()];
    all[j] = Some(start);
    let mut regions: Vec<RateRegion2D> = Vec::new();
    let mut try_point = |p: SweepPoint, best: &mut Winner, regions: &mut Vec<RateRegion2D>| -> Result<(), ModelError> {
        let r = plan.region(&p)?;
        let (value, rate) = r.support(mu);
        let w = Winner { mu, value, point: p, rate };
        if w.better_than(best) {
            *best = w;
        }
        offer(&mut all, mus, &p, &r);
        regions.push(r);
        Ok(())
    };

    for a in &plan.search {
        for i in 0..a.points {
            let mut p = best.point;
            p.set(a.axis, a.value(i));
            try_point(p, &mut best, &mut regions)?;
        }
    }
    let mut scale = 1.0;
    for _ in 0..spec.depth {
        scale /= spec.shrink;
        for a in plan.grid.iter().chain(&plan.search) {
            let h = a.step() * scale;
            if h == 0.0 {
                continue;
            }
            let centre = best.point.get(a.axis);
            for j in [-2.0, -1.0, 1.0, 2.0] {
                let v = centre + j * h;
                if v < a.lo - 1e-15 || v > a.hi + 1e-15 {
                    continue;
                }
                let mut p = best.point;
                p.set(a.axis, v.clamp(a.lo, a.hi));
                try_point(p, &mut best, &mut regions)?;
            }
        }
    }
    let n = regions.len();
    let hull = convex_union(regions.iter()).unwrap_or_else(|_| RateRegion2D::origin());
    Ok((all, hull, n))
}

/// Closed-form region of a single parameter point (what a winner row
/// stands for).
pub fn evaluate_point(
    ch: &GaussianChannel,
    spec: &SweepSpec,
    model: Model,
    point: &SweepPoint,
) -> Result<RateRegion2D, SweepError> {
    let plan = Plan::new(ch, spec, model)?;
    Ok(plan.region(point)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::StateVariance;
    use crate::geometry::region_contains;

    fn fig5() -> GaussianChannel {
        GaussianChannel::full_csit([10.0, 10.0], [1.0, 1.0, libm::pow(10.0, 0.7)], 2.0)
    }

    fn small() -> SweepSpec {
        SweepSpec {
            rho_points: 3,
            eta_points: 3,
            split_points: 3,
            alpha_points: 3,
            depth: 1,
            weights: 5,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn grid_enumeration_covers_axes() {
        let plan = Plan::new(&fig5(), &small(), Model::Prop1).unwrap();
        assert_eq!(plan.grid_size(), 81);
        assert_eq!(plan.grid_point(0).key()[..6], [0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(plan.grid_point(80).key()[..6], [1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(plan.grid_point(1).split, [0.0, 0.5]);
    }

    #[test]
    fn serial_run_is_reproducible_and_contains_mac() {
        let a = trace_boundary(&fig5(), &small(), Model::Prop1, &Serial).unwrap();
        let b = trace_boundary(&fig5(), &small(), Model::Prop1, &Serial).unwrap();
        assert_eq!(a, b);
        let mac = trace_boundary(&fig5(), &small(), Model::Baseline(Scenario::MacCsit), &Serial).unwrap();
        assert!(region_contains(&a.region, &mac.region, 1e-9));
        assert_eq!(a.winners.len(), 5);
    }

    #[test]
    fn winners_are_reproducible_points() {
        let spec = small();
        let res = trace_boundary(&fig5(), &spec, Model::Prop1, &Serial).unwrap();
        for w in &res.winners {
            let r = evaluate_point(&fig5(), &spec, Model::Prop1, &w.point).unwrap();
            let (v, _) = r.support(w.mu);
            assert!((v - w.value).abs() < 1e-12);
            assert!(r.contains_point(w.rate, 1e-9));
        }
    }

    /// Every evaluated sample competes for every weight, so each winner
    /// attains the support of the returned hull.
    #[test]
    fn winners_attain_hull_support() {
        for model in [Model::Prop1, Model::Prop2 { pure_dpc: false }] {
            let ch = if model == Model::Prop1 {
                fig5()
            } else {
                GaussianChannel { q0: 0.0, q1: StateVariance::Finite(5.0), q2: StateVariance::Finite(5.0), ..fig5() }
            };
            let res = trace_boundary(&ch, &small(), model, &Serial).unwrap();
            for w in &res.winners {
                let (v, _) = res.region.support(w.mu);
                assert!((v - w.value).abs() < 1e-9, "{model:?} mu {}: {v} vs {}", w.mu, w.value);
            }
        }
    }

    #[test]
    fn rejects_bad_spec() {
        let spec = SweepSpec { rho_points: 1, ..SweepSpec::default() };
        assert!(matches!(trace_boundary(&fig5(), &spec, Model::Prop1, &Serial), Err(SweepError::Spec(_))));
    }
}
