use gmac_core::gaussian::prop1::prop1_bounds;
use gmac_core::gaussian::prop2::{prop2_bounds, prop2_region_with};
use gmac_core::gaussian::{
    baseline_region, dpc_orthogonality_residuals, eta_min, optimal_dpc_coeffs, prop1_region, prop2_region, prop2_terms,
    prop3_region, CodingParams, Corrections, GaussianChannel, Scenario, StateVariance,
};
use gmac_core::geometry::{hausdorff_distance, region_contains};
use gmac_core::sweep::{evaluate_point, trace_boundary, Model, Serial, SweepPoint, SweepSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn fig5(q0_db: f64) -> GaussianChannel {
    GaussianChannel::full_csit([10.0, 10.0], [1.0, 1.0, db(7.0)], db(q0_db))
}

fn doubly_dirty(q: [f64; 2]) -> GaussianChannel {
    GaussianChannel {
        q1: StateVariance::Finite(q[0]),
        q2: StateVariance::Finite(q[1]),
        ..GaussianChannel::full_csit([10.0, 10.0], [1.0, 1.0, 10.0], 0.0)
    }
}

/// Random full-CSIT channel and power split.
fn random_full_csit(rng: &mut StdRng) -> (GaussianChannel, CodingParams) {
    let p = [rng.random_range(0.1..100.0), rng.random_range(0.1..100.0)];
    let ch = GaussianChannel::full_csit(
        p,
        [rng.random_range(0.01..10.0), rng.random_range(0.01..10.0), rng.random_range(0.01..10.0)],
        rng.random_range(0.0..100.0),
    );
    let mut cp = CodingParams::default();
    for k in 0..2 {
        let used = p[k] * rng.random_range(0.0..=1.0);
        let s = rng.random_range(0.0..=1.0);
        cp.users[k].rho = rng.random_range(0.0..=1.0);
        cp.users[k].p_fresh = s * used;
        cp.users[k].p_direct = (1.0 - s) * used;
    }
    (ch, cp)
}

#[test]
fn orthogonality_over_random_grid() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..10_000 {
        let (ch, cp) = random_full_csit(&mut rng);
        let opt = optimal_dpc_coeffs(&ch, &cp).unwrap();
        let r = dpc_orthogonality_residuals(&ch, &opt);
        assert!(r.max_abs() < 1e-12, "{r:?}");
        for field in 0..5 {
            for delta in [-0.05, 0.05] {
                let mut p = opt;
                match field {
                    0 => p.alpha_common += delta,
                    1 => p.users[0].alpha += delta,
                    2 => p.users[1].alpha += delta,
                    3 => p.users[0].alpha_direct += delta,
                    _ => p.users[1].alpha_direct += delta,
                }
                assert!(dpc_orthogonality_residuals(&ch, &p).max_abs() > 1e-4);
            }
        }
    }
}

/// With every encoder at full power, `α1 + α2 + α13 + α23 = S/(S + N3)`
/// where `S` is the total received signal power.
#[test]
fn coefficients_sum_to_total_dirty_paper_factor() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..1000 {
        let (ch, mut cp) = random_full_csit(&mut rng);
        for k in 0..2 {
            let s = rng.random_range(0.0..=1.0);
            cp.users[k].p_fresh = s * ch.power(k);
            cp.users[k].p_direct = (1.0 - s) * ch.power(k);
        }
        let opt = optimal_dpc_coeffs(&ch, &cp).unwrap();
        let s = ch.p1 + ch.p2 + 2.0 * (cp.users[0].rho * cp.users[1].rho * ch.p1 * ch.p2).sqrt();
        let sum: f64 = opt.users.iter().map(|u| u.alpha + u.alpha_direct).sum::<f64>();
        assert!((sum - s / (s + ch.n3)).abs() < 1e-12);
    }
}

#[test]
fn full_cooperation_anchor() {
    // ½·log2(1 + 40/10^0.7), evaluated with 50-digit arithmetic.
    const REFERENCE: f64 = 1.583_442_002_749_850_3;
    let cp = CodingParams::split([0.0; 2], [10.0; 2]).with_rho([1.0, 1.0]);
    let b = prop1_bounds(&fig5(2.0), &cp).unwrap();
    assert!((b.sum_coop - REFERENCE).abs() < 1e-6);
    // Every layered bound vanishes at full cooperation, and no parameter
    // choice beats the coherent bound.
    let r = prop1_region(&fig5(2.0), &cp).unwrap().project().unwrap();
    assert_eq!(r.max_sum_rate(), 0.0);
    let union = trace_boundary(&fig5(2.0), &SweepSpec::default(), Model::Prop1, &Serial).unwrap();
    assert!(union.region.max_sum_rate() <= REFERENCE);
}

#[test]
fn common_interference_never_enters_full_csit_bounds() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..200 {
        let (ch, cp) = random_full_csit(&mut rng);
        let other = GaussianChannel { q0: rng.random_range(0.0..1e6), ..ch };
        assert_eq!(prop1_bounds(&ch, &cp).unwrap(), prop1_bounds(&other, &cp).unwrap());
    }
}

#[test]
fn mmse_residuals_are_ordered() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..10_000 {
        let p = [rng.random_range(0.1..50.0), rng.random_range(0.1..50.0)];
        let q = [rng.random_range(0.0..50.0), rng.random_range(0.0..50.0)];
        let ch = GaussianChannel {
            p1: p[0],
            p2: p[1],
            q1: StateVariance::Finite(q[0]),
            q2: StateVariance::Finite(q[1]),
            ..GaussianChannel::full_csit(p, [1.0, 1.0, rng.random_range(0.1..10.0)], 0.0)
        };
        let mut cp = CodingParams::default();
        for k in 0..2 {
            let u = &mut cp.users[k];
            let lo = eta_min(p[k], ch.state(k));
            u.eta = rng.random_range(lo..=1.0);
            u.rho = rng.random_range(0.0..=1.0);
            let s = rng.random_range(0.0..=1.0);
            u.p_fresh = s * p[k];
            u.p_direct = (1.0 - s) * p[k];
            u.alpha = rng.random_range(0.0..=1.0);
            u.alpha_direct = rng.random_range(0.0..=(1.0 - u.alpha));
        }
        let t = prop2_terms(&ch, &cp).unwrap();
        for k in 0..2 {
            let tol = 1e-12 * (1.0 + q[k]);
            assert!(t.q_dhat[k] <= t.q_hat[k] + tol, "{t:?}");
            assert!(t.q_hat[k] <= t.q_e[k] + tol, "{t:?}");
            assert!(t.q_e[k] <= q[k] + tol, "{t:?}");
            assert!(t.q_dhat[k] >= 0.0);
        }
        assert!(t.cap_delta_minus <= 0.0 && t.delta_minus.iter().all(|d| *d <= 0.0));
    }
}

#[test]
fn clean_doubly_dirty_equals_full_csit() {
    let ch = doubly_dirty([0.0, 0.0]);
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..500 {
        let mut cp = CodingParams::default();
        for k in 0..2 {
            let s = rng.random_range(0.0..=1.0);
            cp.users[k].rho = rng.random_range(0.0..=1.0);
            cp.users[k].p_fresh = s * 10.0;
            cp.users[k].p_direct = (1.0 - s) * 10.0;
        }
        let cp = optimal_dpc_coeffs(&ch, &cp).unwrap();
        let a = prop2_region(&ch, &cp).unwrap().project().unwrap();
        let b = prop1_region(&ch, &cp).unwrap().project().unwrap();
        assert!(hausdorff_distance(&a, &b) < 1e-9, "{a:?} vs {b:?}");
    }
}

#[test]
fn unbounded_interference_limit_matches_substitutions() {
    let mut rng = StdRng::seed_from_u64(6);
    for p1_db in [10.0, 15.0] {
        let p1 = db(p1_db);
        let inf = GaussianChannel {
            q1: StateVariance::Unbounded,
            q2: StateVariance::Finite(0.0),
            ..GaussianChannel::full_csit([p1, 10.0], [1.0, 1.0, 10.0], 0.0)
        };
        let big = GaussianChannel { q1: StateVariance::Finite(1e6 * p1), ..inf };
        for _ in 0..200 {
            let mut cp = CodingParams::default();
            let s = rng.random_range(0.0..=1.0);
            cp.users[0].rho = rng.random_range(0.0..=1.0);
            cp.users[0].p_direct = p1;
            cp.users[0].alpha_direct = rng.random_range(0.05..1.9);
            cp.users[1].rho = rng.random_range(0.0..=1.0);
            cp.users[1].p_fresh = s * 10.0;
            cp.users[1].p_direct = (1.0 - s) * 10.0;
            let a = prop3_region(&inf, &cp).unwrap().project().unwrap();
            let b = prop2_region_with(&big, &cp, Corrections::ForcedZero).unwrap().project().unwrap();
            assert!(hausdorff_distance(&a, &b) < 1e-3, "{cp:?}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn scenario_ordering_at_fig5() {
    for q0 in [2.0, 5.0, 8.0] {
        let ch = fig5(q0);
        let r = |s| baseline_region(&ch, s).unwrap();
        let (gc, mc, gn, mn) =
            (r(Scenario::GmacCsit), r(Scenario::MacCsit), r(Scenario::GmacNoCsit), r(Scenario::MacNoCsit));
        assert!(region_contains(&gn, &mn, 1e-9));
        assert!(region_contains(&gc, &gn, 1e-9));
        assert!(region_contains(&mc, &mn, 1e-9));
        assert!(region_contains(&gc, &mc, 1e-9));
        // mac-csit is the pentagon with sum C(20/10^0.7)
        assert!((mc.max_sum_rate() - 0.5 * (1.0 + 20.0 / db(7.0)).log2()).abs() < 1e-12);
    }
}

fn random_point(rng: &mut StdRng, ch: &GaussianChannel) -> SweepPoint {
    let mut p = SweepPoint::default();
    for k in 0..2 {
        p.rho[k] = rng.random_range(0.0..=1.0);
        p.split[k] = rng.random_range(0.0..=1.0);
        p.eta[k] = rng.random_range(eta_min(ch.power(k), ch.state(k))..=1.0);
        p.alpha[k] = rng.random_range(0.0..=1.0);
        p.alpha_direct[k] = rng.random_range(0.0..=1.0);
    }
    p
}

#[test]
fn more_receiver_noise_never_helps() {
    let spec = SweepSpec::default();
    let mut rng = StdRng::seed_from_u64(7);
    let cases: [(GaussianChannel, Model); 3] = [
        (fig5(5.0), Model::Prop1),
        (doubly_dirty([5.0, 20.0]), Model::Prop2 { pure_dpc: false }),
        (
            GaussianChannel {
                q1: StateVariance::Unbounded,
                q2: StateVariance::Finite(0.0),
                ..GaussianChannel::full_csit([10.0, 10.0], [1.0, 1.0, 10.0], 0.0)
            },
            Model::Prop3,
        ),
    ];
    for (ch, model) in cases {
        for _ in 0..300 {
            let p = random_point(&mut rng, &ch);
            let noisier = GaussianChannel { n3: ch.n3 * rng.random_range(1.0..10.0), ..ch };
            let a = evaluate_point(&ch, &spec, model, &p).unwrap();
            let b = evaluate_point(&noisier, &spec, model, &p).unwrap();
            assert!(region_contains(&a, &b, 1e-9), "{model:?} {p:?}");
        }
    }
}

#[test]
fn more_power_never_hurts() {
    let spec = SweepSpec::default();
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..300 {
        let ch = fig5(5.0);
        let mut p = random_point(&mut rng, &ch);
        let stronger = GaussianChannel { p1: ch.p1 * rng.random_range(1.0..10.0), ..ch };
        let a = evaluate_point(&ch, &spec, Model::Prop1, &p).unwrap();
        let b = evaluate_point(&stronger, &spec, Model::Prop1, &p).unwrap();
        assert!(region_contains(&b, &a, 1e-9));

        // doubly dirty with pure dirty-paper coding
        let ch = doubly_dirty([5.0, 20.0]);
        p.eta = [1.0, 1.0];
        let stronger = GaussianChannel { p1: ch.p1 * rng.random_range(1.0..10.0), ..ch };
        let a = evaluate_point(&ch, &spec, Model::Prop2 { pure_dpc: true }, &p).unwrap();
        let b = evaluate_point(&stronger, &spec, Model::Prop2 { pure_dpc: true }, &p).unwrap();
        assert!(region_contains(&b, &a, 1e-9), "{p:?}");
    }
}

#[test]
fn doubly_dirty_user_swap_mirrors() {
    let ch = doubly_dirty([5.0, 20.0]);
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..200 {
        let p = random_point(&mut rng, &ch);
        let cp = p.coding(&ch);
        let a = prop2_bounds(&ch, &cp, Corrections::Computed).unwrap();
        let b = prop2_bounds(&ch.swap_users(), &cp.swap_users(), Corrections::Computed).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-12 || (x.is_infinite() && x == y);
        assert!(close(a.b12, b.b21) && close(a.b13, b.b23) && close(a.b13_23, b.b13_23) && close(a.b_sum, b.b_sum));
    }
}
