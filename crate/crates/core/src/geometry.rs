//! Linear constraint systems on the four split rates and their projection
//! onto the total-rate plane.
//!
//! A [`SplitRatePolytope`] holds constraints `c · (R12, R13, R21, R23) ≤ b`
//! with non-negative coefficients over non-negative variables. Projecting it
//! onto `R1 = R12 + R13`, `R2 = R21 + R23` is done by Fourier–Motzkin
//! elimination; the result is a [`RateRegion2D`], a convex down-closed
//! region stored as its upper-right (Pareto) boundary.

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::scalar::Bits;

/// Absolute tolerance used for vertex dedup and containment, in bits.
pub const DEFAULT_TOL: Bits = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitRate {
    R12 = 0,
    R13 = 1,
    R21 = 2,
    R23 = 3,
}

impl SplitRate {
    pub const ALL: [SplitRate; 4] = [SplitRate::R12, SplitRate::R13, SplitRate::R21, SplitRate::R23];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("unbounded region: split rate {0:?} has no upper bound")]
    Unbounded(SplitRate),
    #[error("constraint coefficients must be finite and non-negative")]
    InvalidCoefficient,
    #[error("constraint bound is NaN")]
    NanBound,
    #[error("cannot form the union of an empty list of regions")]
    EmptyUnion,
    #[error("region vertex is not finite")]
    NonFiniteVertex,
}

/// `coeffs · (R12, R13, R21, R23) ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConstraint {
    pub coeffs: [f64; 4],
    pub bound: Bits,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SplitRatePolytope {
    constraints: Vec<RateConstraint>,
}

impl SplitRatePolytope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constraints(&self) -> &[RateConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, coeffs: [f64; 4], bound: Bits) -> &mut Self {
        self.constraints.push(RateConstraint { coeffs, bound });
        self
    }

    /// Sum of the listed split rates bounded by `bound`.
    pub fn push_sum(&mut self, rates: &[SplitRate], bound: Bits) -> &mut Self {
        let mut coeffs = [0.0; 4];
        for r in rates {
            coeffs[r.index()] = 1.0;
        }
        self.push(coeffs, bound)
    }

    /// The six-constraint shape of the discrete achievable region: the four
    /// single rates, the pair `R13 + R23` and the full sum.
    pub fn theorem1_shape(b12: Bits, b21: Bits, b13: Bits, b23: Bits, b13_23: Bits, b_sum: Bits) -> Self {
        use SplitRate::*;
        let mut p = Self::new();
        p.push_sum(&[R12], b12)
            .push_sum(&[R21], b21)
            .push_sum(&[R13], b13)
            .push_sum(&[R23], b23)
            .push_sum(&[R13, R23], b13_23)
            .push_sum(&[R12, R13, R21, R23], b_sum);
        p
    }

    /// A region already given on total rates, carried as `R12 = R1`,
    /// `R23 = R2` with the other two splits pinned at zero.
    pub fn total_rate_form(r1: Option<Bits>, r2: Option<Bits>, sums: &[Bits]) -> Self {
        use SplitRate::*;
        let mut p = Self::new();
        if let Some(b) = r1 {
            p.push_sum(&[R12], b);
        }
        if let Some(b) = r2 {
            p.push_sum(&[R23], b);
        }
        for &s in sums {
            p.push_sum(&[R12, R23], s);
        }
        p.push_sum(&[R13], 0.0).push_sum(&[R21], 0.0);
        p
    }

    /// Exchange the roles of the two users (`R12 ↔ R21`, `R13 ↔ R23`).
    pub fn swap_users(&self) -> Self {
        let constraints = self
            .constraints
            .iter()
            .map(|c| RateConstraint { coeffs: [c.coeffs[2], c.coeffs[3], c.coeffs[0], c.coeffs[1]], bound: c.bound })
            .collect();
        Self { constraints }
    }

    pub fn project(&self) -> Result<RateRegion2D, GeometryError> {
        project_to_r1_r2(self)
    }
}

/// Inequality `a · x ≤ b` over the working variables `(R1, R2, R13, R23)`.
#[derive(Debug, Clone, Copy)]
struct Ineq {
    a: [f64; 4],
    b: f64,
}

const COEF_EPS: f64 = 1e-12;

/// Exact projection of the split-rate polytope onto `(R1, R2)`.
///
/// `R12` and `R21` are eliminated by substitution (`R12 = R1 - R13`,
/// `R21 = R2 - R23`), then `R13` and `R23` by Fourier–Motzkin with
/// redundancy pruning after each step. The 2-D system is intersected with
/// the positive quadrant and its vertices hulled.
pub fn project_to_r1_r2(p: &SplitRatePolytope) -> Result<RateRegion2D, GeometryError> {
    for c in &p.constraints {
        if c.coeffs.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(GeometryError::InvalidCoefficient);
        }
        if c.bound.is_nan() {
            return Err(GeometryError::NanBound);
        }
    }
    // Non-negative coefficients over non-negative variables: a negative
    // bound leaves only the empty set, reported as the origin.
    if p.constraints.iter().any(|c| c.bound < 0.0) {
        return Ok(RateRegion2D::origin());
    }
    for rate in SplitRate::ALL {
        let bounded = p.constraints.iter().any(|c| c.coeffs[rate.index()] > 0.0 && c.bound.is_finite());
        if !bounded {
            return Err(GeometryError::Unbounded(rate));
        }
    }

    let mut system: Vec<Ineq> = p
        .constraints
        .iter()
        .filter(|c| c.bound.is_finite())
        .map(|c| {
            let [c12, c13, c21, c23] = c.coeffs;
            Ineq { a: [c12, c21, c13 - c12, c23 - c21], b: c.bound }
        })
        .collect();
    // R12 ≥ 0, R13 ≥ 0, R21 ≥ 0, R23 ≥ 0 in the working variables, plus
    // the implied R1 ≥ 0, R2 ≥ 0 that the pruning relies on.
    system.push(Ineq { a: [-1.0, 0.0, 1.0, 0.0], b: 0.0 });
    system.push(Ineq { a: [0.0, 0.0, -1.0, 0.0], b: 0.0 });
    system.push(Ineq { a: [0.0, -1.0, 0.0, 1.0], b: 0.0 });
    system.push(Ineq { a: [0.0, 0.0, 0.0, -1.0], b: 0.0 });
    system.push(Ineq { a: [-1.0, 0.0, 0.0, 0.0], b: 0.0 });
    system.push(Ineq { a: [0.0, -1.0, 0.0, 0.0], b: 0.0 });

    for var in [2usize, 3] {
        system = match eliminate(&system, var) {
            Some(s) => prune(s),
            None => return Ok(RateRegion2D::origin()),
        };
    }

    let mut lines: Vec<([f64; 2], f64)> = system.iter().map(|q| ([q.a[0], q.a[1]], q.b)).collect();
    lines.push(([-1.0, 0.0], 0.0));
    lines.push(([0.0, -1.0], 0.0));

    let feasible = |x: f64, y: f64| lines.iter().all(|(a, b)| a[0] * x + a[1] * y <= b + 1e-9 * (1.0 + b.abs()));

    let mut points = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (a, b) = lines[i];
            let (c, d) = lines[j];
            let det = a[0] * c[1] - a[1] * c[0];
            if det.abs() < COEF_EPS {
                continue;
            }
            let x = (b * c[1] - a[1] * d) / det;
            let y = (a[0] * d - b * c[0]) / det;
            if x.is_finite() && y.is_finite() && feasible(x, y) {
                points.push(RatePair::new(x.max(0.0), y.max(0.0)));
            }
        }
    }
    Ok(RateRegion2D::from_points(points))
}

/// One Fourier–Motzkin step. Returns `None` when a contradiction `0 ≤ b < 0`
/// shows up.
fn eliminate(system: &[Ineq], var: usize) -> Option<Vec<Ineq>> {
    let mut keep = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for q in system {
        let c = q.a[var];
        if c > COEF_EPS {
            pos.push(scale(q, 1.0 / c));
        } else if c < -COEF_EPS {
            neg.push(scale(q, -1.0 / c));
        } else {
            let mut q = *q;
            q.a[var] = 0.0;
            keep.push(q);
        }
    }
    for p in &pos {
        for n in &neg {
            let mut a = [0.0; 4];
            for k in 0..4 {
                a[k] = p.a[k] + n.a[k];
            }
            a[var] = 0.0;
            keep.push(Ineq { a, b: p.b + n.b });
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for q in keep {
        if q.a.iter().all(|v| v.abs() <= COEF_EPS) {
            if q.b < -1e-9 {
                return None;
            }
            continue;
        }
        out.push(q);
    }
    Some(out)
}

fn scale(q: &Ineq, s: f64) -> Ineq {
    Ineq { a: [q.a[0] * s, q.a[1] * s, q.a[2] * s, q.a[3] * s], b: q.b * s }
}

/// Normalise to unit max-norm, merge parallel rows keeping the tightest
/// bound, and drop rows dominated on the non-negative orthant.
fn prune(system: Vec<Ineq>) -> Vec<Ineq> {
    let mut rows: Vec<Ineq> = system
        .into_iter()
        .map(|q| {
            let m = q.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            scale(&q, 1.0 / m)
        })
        .collect();
    rows.sort_by(|x, y| {
        for k in 0..4 {
            match x.a[k].total_cmp(&y.a[k]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        x.b.total_cmp(&y.b)
    });
    let mut merged: Vec<Ineq> = Vec::with_capacity(rows.len());
    for q in rows {
        if let Some(last) = merged.last_mut() {
            if (0..4).all(|k| (last.a[k] - q.a[k]).abs() <= COEF_EPS) {
                last.b = last.b.min(q.b);
                continue;
            }
        }
        merged.push(q);
    }
    // All working variables are non-negative on the feasible set, so
    // `a_j ≥ a_i` (componentwise) with `b_j ≤ b_i` makes row i redundant.
    // The non-negativity rows themselves are what justifies this, so they
    // are never dropped.
    let n = merged.len();
    let mut redundant = alloc::vec![false; n];
    for i in 0..n {
        if is_sign_row(&merged[i]) {
            continue;
        }
        for j in 0..n {
            if i == j || redundant[j] {
                continue;
            }
            let dominates =
                (0..4).all(|k| merged[j].a[k] >= merged[i].a[k] - COEF_EPS) && merged[j].b <= merged[i].b + COEF_EPS;
            if dominates {
                redundant[i] = true;
                break;
            }
        }
    }
    merged.into_iter().zip(redundant).filter_map(|(q, r)| (!r).then_some(q)).collect()
}

/// `-x_k ≤ 0` for a single working variable.
fn is_sign_row(q: &Ineq) -> bool {
    q.b == 0.0 && q.a.iter().filter(|v| **v != 0.0).count() == 1 && q.a.iter().any(|v| *v == -1.0)
}

/// A point `(R1, R2)` in bits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RatePair {
    pub r1: Bits,
    pub r2: Bits,
}

impl RatePair {
    pub const fn new(r1: Bits, r2: Bits) -> Self {
        Self { r1, r2 }
    }

    pub fn weighted(&self, mu: f64) -> f64 {
        mu * self.r1 + (1.0 - mu) * self.r2
    }
}

/// Convex, down-closed region of the non-negative quadrant, stored as its
/// Pareto boundary: vertices by increasing `R1` with non-increasing `R2`,
/// starting on the `R2` axis and ending on the `R1` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion2D {
    vertices: Vec<RatePair>,
}

impl RateRegion2D {
    pub fn origin() -> Self {
        Self { vertices: alloc::vec![RatePair::new(0.0, 0.0)] }
    }

    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    /// Down-closed convex hull of a point set. Negative coordinates are
    /// clipped to zero; non-finite points are skipped.
    pub fn from_points<I: IntoIterator<Item = RatePair>>(points: I) -> Self {
        Self::from_points_tol(points, DEFAULT_TOL)
    }

    pub fn from_points_tol<I: IntoIterator<Item = RatePair>>(points: I, tol: Bits) -> Self {
        let mut pts: Vec<RatePair> = points
            .into_iter()
            .filter(|p| p.r1.is_finite() && p.r2.is_finite())
            .map(|p| RatePair::new(p.r1.max(0.0), p.r2.max(0.0)))
            .collect();
        if pts.is_empty() {
            return Self::origin();
        }
        let max_r1 = pts.iter().fold(0.0_f64, |m, p| m.max(p.r1));
        let max_r2 = pts.iter().fold(0.0_f64, |m, p| m.max(p.r2));
        pts.push(RatePair::new(0.0, max_r2));
        // x ascending, y descending; then keep the top point of each column.
        pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(b.r2.total_cmp(&a.r2)));
        pts.dedup_by(|later, first| later.r1 == first.r1);

        let mut hull: Vec<RatePair> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // keep b only on a strict clockwise turn a → b → p
                let cross = (b.r1 - a.r1) * (p.r2 - a.r2) - (b.r2 - a.r2) * (p.r1 - a.r1);
                if cross >= -1e-15 * (1.0 + max_r1 * max_r2) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        if let Some(last) = hull.last() {
            if last.r2 > 0.0 {
                hull.push(RatePair::new(max_r1, 0.0));
            }
        }
        let mut vertices: Vec<RatePair> = Vec::with_capacity(hull.len());
        for v in hull {
            if let Some(prev) = vertices.last() {
                if (prev.r1 - v.r1).abs() <= tol && (prev.r2 - v.r2).abs() <= tol {
                    continue;
                }
            }
            vertices.push(v);
        }
        // Pin the axis intercepts exactly.
        if let Some(first) = vertices.first_mut() {
            first.r1 = 0.0;
        }
        if let Some(last) = vertices.last_mut() {
            last.r2 = 0.0;
        }
        Self { vertices }
    }

    pub fn max_r1(&self) -> Bits {
        self.vertices.last().map_or(0.0, |v| v.r1)
    }

    pub fn max_r2(&self) -> Bits {
        self.vertices.first().map_or(0.0, |v| v.r2)
    }

    pub fn max_sum_rate(&self) -> Bits {
        self.support(0.5).0 * 2.0
    }

    /// `max μ·R1 + (1-μ)·R2` over the region and a maximizing vertex.
    pub fn support(&self, mu: f64) -> (f64, RatePair) {
        let mut best = (f64::NEG_INFINITY, RatePair::default());
        for v in &self.vertices {
            let w = v.weighted(mu);
            if w > best.0 {
                best = (w, *v);
            }
        }
        best
    }

    /// Reflect across `R1 = R2`.
    pub fn mirror(&self) -> Self {
        let vertices = self.vertices.iter().rev().map(|v| RatePair::new(v.r2, v.r1)).collect();
        Self { vertices }
    }

    pub fn contains_point(&self, p: RatePair, tol: Bits) -> bool {
        if p.r1 < -tol || p.r2 < -tol || p.r1 > self.max_r1() + tol || p.r2 > self.max_r2() + tol {
            return false;
        }
        self.vertices.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
            let len = libm::sqrt(dx * dx + dy * dy);
            // interior lies to the right of a → b
            let cross = dx * (p.r2 - a.r2) - dy * (p.r1 - a.r1);
            cross <= tol * len
        })
    }

    /// Boundary of the closed polygon: origin, then the Pareto chain.
    fn polygon(&self) -> Vec<RatePair> {
        let mut poly = Vec::with_capacity(self.vertices.len() + 1);
        poly.push(RatePair::new(0.0, 0.0));
        poly.extend_from_slice(&self.vertices);
        poly
    }

    /// Euclidean distance from a point to the region (0 inside).
    pub fn distance_to(&self, p: RatePair) -> f64 {
        if self.contains_point(p, 0.0) {
            return 0.0;
        }
        let poly = self.polygon();
        let n = poly.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            best = best.min(segment_distance(p, a, b));
        }
        best
    }
}

fn segment_distance(p: RatePair, a: RatePair, b: RatePair) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let (qx, qy) = (a.r1 + t * dx - p.r1, a.r2 + t * dy - p.r2);
    libm::sqrt(qx * qx + qy * qy)
}

/// Convex hull of the union, as a Pareto boundary.
pub fn convex_union<'a, I>(regions: I) -> Result<RateRegion2D, GeometryError>
where
    I: IntoIterator<Item = &'a RateRegion2D>,
{
    let mut any = false;
    let mut points = Vec::new();
    for r in regions {
        any = true;
        points.extend_from_slice(&r.vertices);
    }
    if !any {
        return Err(GeometryError::EmptyUnion);
    }
    Ok(RateRegion2D::from_points(points))
}

/// True iff every vertex of `inner` lies in `outer` up to `tol`.
pub fn region_contains(outer: &RateRegion2D, inner: &RateRegion2D, tol: Bits) -> bool {
    inner.vertices.iter().all(|v| outer.contains_point(*v, tol))
}

/// Hausdorff distance between two regions viewed as closed planar sets.
/// For convex polygons the extremes are attained at vertices.
pub fn hausdorff_distance(a: &RateRegion2D, b: &RateRegion2D) -> f64 {
    let one_way = |x: &RateRegion2D, y: &RateRegion2D| x.vertices.iter().fold(0.0_f64, |m, v| m.max(y.distance_to(*v)));
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use SplitRate::*;

    fn pts(region: &RateRegion2D) -> Vec<(f64, f64)> {
        region.vertices().iter().map(|v| (v.r1, v.r2)).collect()
    }

    fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12)
    }

    #[test]
    fn classical_mac_pentagon() {
        let mut p = SplitRatePolytope::new();
        p.push_sum(&[R12, R13], 1.0).push_sum(&[R21, R23], 1.0).push_sum(&[R12, R13, R21, R23], 1.5);
        let r = p.project().unwrap();
        assert!(close(&pts(&r), &[(0.0, 1.0), (0.5, 1.0), (1.0, 0.5), (1.0, 0.0)]), "{:?}", pts(&r));
    }

    #[test]
    fn all_zero_bounds_give_origin() {
        let p = SplitRatePolytope::theorem1_shape(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(pts(&p.project().unwrap()), vec![(0.0, 0.0)]);
    }

    #[test]
    fn negative_bound_gives_origin() {
        let p = SplitRatePolytope::theorem1_shape(1.0, 1.0, 1.0, 1.0, -0.1, 2.0);
        assert_eq!(pts(&p.project().unwrap()), vec![(0.0, 0.0)]);
    }

    #[test]
    fn unbounded_is_an_error() {
        let mut p = SplitRatePolytope::new();
        p.push_sum(&[R12], 1.0).push_sum(&[R13], 1.0).push_sum(&[R21], 1.0);
        assert_eq!(p.project(), Err(GeometryError::Unbounded(R23)));
        let mut q = SplitRatePolytope::new();
        q.push([1.0, -1.0, 0.0, 0.0], 1.0);
        assert_eq!(q.project(), Err(GeometryError::InvalidCoefficient));
    }

    #[test]
    fn theorem1_shape_projection() {
        // b12=0.3, b21=0.2, b13=0.5, b23=0.6, pair 0.8, sum 1.2
        let p = SplitRatePolytope::theorem1_shape(0.3, 0.2, 0.5, 0.6, 0.8, 1.2);
        let r = p.project().unwrap();
        // R1 ≤ 0.8, R2 ≤ 0.8, R1+R2 ≤ min(1.2, 0.3+0.2+0.8) = 1.2
        assert!(close(&pts(&r), &[(0.0, 0.8), (0.4, 0.8), (0.8, 0.4), (0.8, 0.0)]), "{:?}", pts(&r));
    }

    #[test]
    fn total_rate_form_round_trips() {
        let p = SplitRatePolytope::total_rate_form(Some(1.0), Some(2.0), &[2.5, 2.8]);
        let r = p.project().unwrap();
        assert!(close(&pts(&r), &[(0.0, 2.0), (0.5, 2.0), (1.0, 1.5), (1.0, 0.0)]));
    }

    #[test]
    fn union_examples() {
        let a = RateRegion2D::from_points([RatePair::new(0.0, 1.0), RatePair::new(1.0, 0.0)]);
        let b = RateRegion2D::from_points([RatePair::new(0.0, 0.5), RatePair::new(1.2, 0.0)]);
        let u = convex_union([&a, &b]).unwrap();
        assert!(close(&pts(&u), &[(0.0, 1.0), (1.2, 0.0)]));
        assert!(region_contains(&u, &a, 0.0) && region_contains(&u, &b, 0.0));
        assert_eq!(convex_union([&a, &a]).unwrap(), a);
        assert_eq!(convex_union([&b, &a]).unwrap(), u);
        assert_eq!(convex_union(core::iter::empty()), Err(GeometryError::EmptyUnion));
    }

    #[test]
    fn containment_and_distance() {
        let pent = RateRegion2D::from_points([RatePair::new(0.5, 1.0), RatePair::new(1.0, 0.5)]);
        let tri = RateRegion2D::from_points([RatePair::new(0.0, 1.0), RatePair::new(1.0, 0.0)]);
        assert!(region_contains(&pent, &pent, 0.0));
        assert!(region_contains(&pent, &tri, 0.0));
        assert!(!region_contains(&tri, &pent, 1e-3));
        let d = hausdorff_distance(&pent, &tri);
        // (0.5,1) and (1,0.5) are 0.25·√2 from the chord R1+R2=1
        assert!((d - 0.25 * libm::sqrt(2.0)).abs() < 1e-12);
        assert_eq!(hausdorff_distance(&pent, &pent), 0.0);
        assert!((pent.max_sum_rate() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn hull_drops_collinear_and_dominated_points() {
        let r = RateRegion2D::from_points([
            RatePair::new(0.0, 1.0),
            RatePair::new(0.5, 0.5),
            RatePair::new(1.0, 0.0),
            RatePair::new(0.2, 0.2),
        ]);
        assert!(close(&pts(&r), &[(0.0, 1.0), (1.0, 0.0)]));
        let seg = RateRegion2D::from_points([RatePair::new(0.7, 0.0)]);
        assert!(close(&pts(&seg), &[(0.0, 0.0), (0.7, 0.0)]));
        assert_eq!(seg.mirror().vertices(), &[RatePair::new(0.0, 0.7), RatePair::new(0.0, 0.0)]);
    }
}
