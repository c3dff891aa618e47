//! Fourier–Motzkin projection against a grid enumeration, plus the
//! structural properties of projections and unions.

use gmac_core::geometry::{convex_union, region_contains, RatePair, RateRegion2D, SplitRatePolytope};
use proptest::prelude::*;

const STEP: f64 = 0.01;

/// Enumerate `(R12, R13, R21)` on the grid and take the largest feasible
/// grid value of `R23`; returns the achievable `(R1, R2)` points.
fn grid_points(constraints: &[([f64; 4], f64)]) -> Vec<(f64, f64)> {
    let cap =
        |i: usize| constraints.iter().filter(|(c, _)| c[i] > 0.0).map(|(c, b)| b / c[i]).fold(f64::INFINITY, f64::min);
    let n = |x: f64| (x / STEP + 1e-9).floor().max(-1.0) as i64;
    let (n12, n13, n21) = (n(cap(0)), n(cap(1)), n(cap(2)));
    let mut best: std::collections::BTreeMap<i64, i64> = Default::default();
    for i in 0..=n12 {
        for j in 0..=n13 {
            for k in 0..=n21 {
                let x = [i as f64 * STEP, j as f64 * STEP, k as f64 * STEP];
                let mut top = f64::INFINITY;
                let mut ok = true;
                for (c, b) in constraints {
                    let used = c[0] * x[0] + c[1] * x[1] + c[2] * x[2];
                    if c[3] > 0.0 {
                        top = top.min((b - used) / c[3]);
                    } else if used > b + 1e-12 {
                        ok = false;
                    }
                }
                if !ok || top < -1e-12 {
                    continue;
                }
                let l = n(top.max(0.0));
                let r1 = i + j;
                let r2 = k + l;
                let e = best.entry(r1).or_insert(r2);
                *e = (*e).max(r2);
            }
        }
    }
    best.into_iter().map(|(a, b)| (a as f64 * STEP, b as f64 * STEP)).collect()
}

/// Support function of a finite point set (with the origin).
fn support_points(pts: &[(f64, f64)], d: (f64, f64)) -> f64 {
    pts.iter().fold(0.0_f64, |m, p| m.max(p.0 * d.0 + p.1 * d.1))
}

fn support_region(r: &RateRegion2D, d: (f64, f64)) -> f64 {
    r.vertices().iter().fold(0.0_f64, |m, v| m.max(v.r1 * d.0 + v.r2 * d.1))
}

/// Hausdorff distance of two convex sets via their support functions over
/// unit directions (the down-closure adds the origin and axis projections,
/// which both sides share).
fn hausdorff_support(pts: &[(f64, f64)], r: &RateRegion2D) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..=2000 {
        let t = -std::f64::consts::FRAC_PI_2 + 1.5 * std::f64::consts::PI * i as f64 / 2000.0;
        let d = (t.cos(), t.sin());
        let proj: Vec<(f64, f64)> = pts.iter().flat_map(|p| [*p, (p.0, 0.0), (0.0, p.1)]).collect();
        worst = worst.max((support_points(&proj, d) - support_region(r, d)).abs());
    }
    worst
}

fn polytope(constraints: &[([f64; 4], f64)]) -> SplitRatePolytope {
    let mut p = SplitRatePolytope::new();
    for (c, b) in constraints {
        p.push(*c, *b);
    }
    p
}

fn theorem1(b: [f64; 6]) -> Vec<([f64; 4], f64)> {
    // coefficient order (R12, R13, R21, R23)
    vec![
        ([1.0, 0.0, 0.0, 0.0], b[0]),
        ([0.0, 0.0, 1.0, 0.0], b[1]),
        ([0.0, 1.0, 0.0, 0.0], b[2]),
        ([0.0, 0.0, 0.0, 1.0], b[3]),
        ([0.0, 1.0, 0.0, 1.0], b[4]),
        ([1.0, 1.0, 1.0, 1.0], b[5]),
    ]
}

#[test]
fn theorem1_shape_matches_explicit_constraints() {
    let b = [0.3, 0.7, 1.1, 0.4, 1.2, 1.9];
    let a = SplitRatePolytope::theorem1_shape(b[0], b[1], b[2], b[3], b[4], b[5]).project().unwrap();
    let e = polytope(&theorem1(b)).project().unwrap();
    assert_eq!(a, e);
}

#[test]
fn pentagon_against_grid() {
    let c = vec![([1.0, 1.0, 0.0, 0.0], 1.0), ([0.0, 0.0, 1.0, 1.0], 1.0), ([1.0, 1.0, 1.0, 1.0], 1.5)];
    let r = polytope(&c).project().unwrap();
    assert!(hausdorff_support(&grid_points(&c), &r) < 0.02);
}

fn bounds6() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(prop_oneof![Just(0.0), 0.0..2.0f64])
}

/// Up to eight constraints with 0/1 coefficient patterns and bounds ≤ 4,
/// always including the full sum so the system is bounded.
fn general_system() -> impl Strategy<Value = Vec<([f64; 4], f64)>> {
    (prop::collection::vec((1u8..16, prop_oneof![Just(0.0), 0.0..4.0f64]), 1..8), 0.5..4.0f64).prop_map(
        |(rows, total)| {
            let mut c: Vec<([f64; 4], f64)> = rows
                .into_iter()
                .map(|(mask, b)| {
                    let mut v = [0.0; 4];
                    for (i, x) in v.iter_mut().enumerate() {
                        if mask & (1 << i) != 0 {
                            *x = 1.0;
                        }
                    }
                    (v, b)
                })
                .collect();
            c.push(([1.0; 4], total.min(2.5)));
            c
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn projection_matches_grid_oracle(c in general_system()) {
        let r = polytope(&c).project().unwrap();
        let d = hausdorff_support(&grid_points(&c), &r);
        prop_assert!(d < 0.02, "distance {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn relaxing_a_bound_never_shrinks(b in bounds6(), which in 0usize..6, extra in 0.0..1.0f64) {
        let small = polytope(&theorem1(b)).project().unwrap();
        let mut b2 = b;
        b2[which] += extra;
        let big = polytope(&theorem1(b2)).project().unwrap();
        prop_assert!(region_contains(&big, &small, 1e-9));
    }

    #[test]
    fn swapping_users_mirrors(b in bounds6()) {
        let p = polytope(&theorem1(b));
        let a = p.swap_users().project().unwrap();
        let m = p.project().unwrap().mirror();
        prop_assert!(region_contains(&a, &m, 1e-9) && region_contains(&m, &a, 1e-9));
    }

    #[test]
    fn union_is_convex_and_contains_inputs(bs in prop::collection::vec(bounds6(), 1..6)) {
        let regions: Vec<RateRegion2D> =
            bs.iter().map(|b| polytope(&theorem1(*b)).project().unwrap()).collect();
        let u = convex_union(regions.iter()).unwrap();
        for r in &regions {
            prop_assert!(region_contains(&u, r, 1e-9));
        }
        let v = u.vertices();
        for w in v.windows(2) {
            prop_assert!(w[0].r1 <= w[1].r1 && w[0].r2 >= w[1].r2);
            let mid = RatePair { r1: 0.5 * (w[0].r1 + w[1].r1), r2: 0.5 * (w[0].r2 + w[1].r2) };
            prop_assert!(u.contains_point(mid, 1e-9));
        }
        for w in v.windows(3) {
            // concave chain: the middle vertex is on or above the chord
            let cross = (w[1].r1 - w[0].r1) * (w[2].r2 - w[0].r2) - (w[1].r2 - w[0].r2) * (w[2].r1 - w[0].r1);
            prop_assert!(cross <= 1e-12);
        }
        let again = convex_union(regions.iter().rev()).unwrap();
        prop_assert_eq!(&u, &again);
        prop_assert_eq!(&convex_union([&u, &u]).unwrap(), &u);
    }
}

/// A zero pair bound forces `R13 = R23 = 0`; with `R12 ≤ 0` user 1 is silent.
#[test]
fn zero_bounds_pin_rates() {
    let b = [0.0, 0.11, 0.0079, 0.03, 0.0, 0.29];
    let r = polytope(&theorem1(b)).project().unwrap();
    assert!(r.max_r1() < 1e-12);
    assert!((r.max_r2() - 0.11).abs() < 1e-12);
    assert!(hausdorff_support(&grid_points(&theorem1(b)), &r) < 0.02);
}
