//! Invariant checks on deterministic parameter grids. The only random
//! inputs (Monte-Carlo draws, fixture pmfs) come from generators seeded by
//! the sweep seed, so a report is reproducible bit for bit.

use gmac_core::discrete::table1::TableRow;
use gmac_core::discrete::validate_factorization;
use gmac_core::gaussian::prop1::prop1_bounds;
use gmac_core::gaussian::prop2::prop2_region_with;
use gmac_core::gaussian::{
    baseline_region, dpc_orthogonality_residuals, eta_min, mc_entropy_oracle, optimal_dpc_coeffs, prop1_region,
    prop2_region, prop2_terms, prop3_region, CodingParams, Corrections, EntropySelector, GaussianChannel, ModelError,
    Scenario, StateVariance,
};
use gmac_core::geometry::{hausdorff_distance, region_contains};
use gmac_core::sweep::Executor;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{ChannelSpec, Level, LoadedConfig, Units};
use crate::error::CliError;
use crate::executor::PoolExecutor;
use crate::output::{write_csv, write_json};
use crate::pmf;
use crate::{Format, RunOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        Self { name: name.into(), pass, detail }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

const THIRDS: [f64; 3] = [0.0, 0.5, 1.0];

/// Channel fields the config leaves out default to P = 10 dB, N1 = N2 = 0 dB,
/// N3 = 7 dB.
fn channel(cfg: &LoadedConfig) -> Result<GaussianChannel, CliError> {
    let n = |db: f64, lin: f64| Some(Level::Number(if cfg.config.units == Units::Db { db } else { lin }));
    let defaults = ChannelSpec {
        p1: n(10.0, 10.0),
        p2: n(10.0, 10.0),
        n1: n(0.0, 1.0),
        n2: n(0.0, 1.0),
        n3: n(7.0, 10f64.powf(0.7)),
        ..ChannelSpec::default()
    };
    cfg.channel(&defaults.overlay(&cfg.config.channel))
}

/// 81 full-power splits: `ρ_k` and fresh fraction `s_k` on {0, ½, 1}.
fn split_grid(ch: &GaussianChannel) -> Vec<CodingParams> {
    let mut out = Vec::new();
    for r1 in THIRDS {
        for r2 in THIRDS {
            for s1 in THIRDS {
                for s2 in THIRDS {
                    out.push(
                        CodingParams::split([s1 * ch.p1, s2 * ch.p2], [(1.0 - s1) * ch.p1, (1.0 - s2) * ch.p2])
                            .with_rho([r1, r2]),
                    );
                }
            }
        }
    }
    out
}

fn full_csit(ch: &GaussianChannel) -> GaussianChannel {
    GaussianChannel { q1: StateVariance::Finite(0.0), q2: StateVariance::Finite(0.0), ..*ch }
}

/// Doubly dirty version of `ch`: `Q0 = 0` and a finite private state per
/// encoder (the configured one, or `Q_k = P_k` when it is zero or unbounded).
fn doubly_dirty(ch: &GaussianChannel) -> GaussianChannel {
    let q = |k: usize| match ch.state(k) {
        StateVariance::Finite(x) if x > 0.0 => x,
        _ => ch.power(k),
    };
    GaussianChannel { q0: 0.0, q1: StateVariance::Finite(q(0)), q2: StateVariance::Finite(q(1)), ..*ch }
}

fn orthogonality(cfg: &LoadedConfig, ch: &GaussianChannel) -> Result<Check, CliError> {
    let d = cfg.config.verify.perturb;
    let ch = full_csit(ch);
    let mut worst = 0.0_f64;
    let grid = split_grid(&ch);
    for cp in &grid {
        let mut p = optimal_dpc_coeffs(&ch, cp)?;
        p.alpha_common += d.alpha0;
        p.users[0].alpha += d.alpha1;
        p.users[1].alpha += d.alpha2;
        p.users[0].alpha_direct += d.alpha13;
        p.users[1].alpha_direct += d.alpha23;
        worst = worst.max(dpc_orthogonality_residuals(&ch, &p).max_abs());
    }
    let perturbed = [d.alpha0, d.alpha1, d.alpha2, d.alpha13, d.alpha23].iter().any(|x| *x != 0.0);
    let note = if perturbed {
        format!(
            " with offsets alpha0={} alpha1={} alpha2={} alpha13={} alpha23={}",
            d.alpha0, d.alpha1, d.alpha2, d.alpha13, d.alpha23
        )
    } else {
        String::new()
    };
    Ok(Check::new(
        "orthogonality",
        worst < 1e-12,
        format!("max |residual| {worst:.3e} over {} coding points{note} (tolerance 1e-12)", grid.len()),
    ))
}

fn mmse_ordering(ch: &GaussianChannel, exec: &PoolExecutor) -> Result<Check, CliError> {
    let ch = doubly_dirty(ch);
    let q = [ch.q1.finite().unwrap(), ch.q2.finite().unwrap()];
    // per user: eta, rho, split, alpha, alpha_direct with alpha + alpha_direct <= 1
    let mut per_user: [Vec<[f64; 5]>; 2] = [Vec::new(), Vec::new()];
    for (k, list) in per_user.iter_mut().enumerate() {
        let lo = eta_min(ch.power(k), ch.state(k));
        for eta in [lo, 0.5 * (lo + 1.0), 1.0] {
            for rho in THIRDS {
                for s in THIRDS {
                    for a in THIRDS {
                        for ad in [0.0, 0.5, 1.0].into_iter().filter(|ad| a + ad <= 1.0) {
                            list.push([eta, rho, s, a, ad]);
                        }
                    }
                }
            }
        }
    }
    let n2 = per_user[1].len();
    let results = exec.map(per_user[0].len(), |i| -> Result<(usize, f64), ModelError> {
        let mut bad = 0;
        let mut worst = 0.0_f64;
        for j in 0..n2 {
            let mut cp = CodingParams::default();
            for (k, v) in [per_user[0][i], per_user[1][j]].into_iter().enumerate() {
                let u = &mut cp.users[k];
                u.eta = v[0];
                u.rho = v[1];
                u.p_fresh = v[2] * ch.power(k);
                u.p_direct = (1.0 - v[2]) * ch.power(k);
                u.alpha = v[3];
                u.alpha_direct = v[4];
            }
            let t = prop2_terms(&ch, &cp)?;
            for k in 0..2 {
                let tol = 1e-12 * (1.0 + q[k]);
                let gaps = [t.q_dhat[k] - t.q_hat[k], t.q_hat[k] - t.q_e[k], t.q_e[k] - q[k], -t.q_dhat[k]];
                let g = gaps.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
                worst = worst.max(g);
                if g > tol {
                    bad += 1;
                }
            }
            if t.cap_delta_minus > 0.0 || t.delta_minus.iter().any(|d| *d > 0.0) {
                bad += 1;
            }
        }
        Ok((bad, worst))
    });
    let mut bad = 0;
    let mut worst = f64::NEG_INFINITY;
    for r in results {
        let (b, w) = r?;
        bad += b;
        worst = worst.max(w);
    }
    let total = per_user[0].len() * n2;
    Ok(Check::new(
        "mmse-ordering",
        bad == 0,
        format!(
            "0 <= Qdhat <= Qhat <= Qe <= Q and corrections <= 0 at Q = ({}, {}): {bad} violations over {total} points (largest gap {worst:.3e})",
            q[0], q[1]
        ),
    ))
}

fn interference_independence(ch: &GaussianChannel) -> Result<Check, CliError> {
    let base = full_csit(ch);
    let levels = [0.0, base.q0, 100.0 * base.p1.max(base.p2) + 1.0];
    let mut differ = 0;
    let grid = split_grid(&base);
    for cp in &grid {
        let reference = prop1_region(&GaussianChannel { q0: 0.0, ..base }, cp)?.project().map_err(ModelError::from)?;
        for q0 in levels {
            let r = prop1_region(&GaussianChannel { q0, ..base }, cp)?.project().map_err(ModelError::from)?;
            if r != reference {
                differ += 1;
            }
        }
    }
    Ok(Check::new(
        "interference-independence",
        differ == 0,
        format!("regions with known interference identical for Q0 in {levels:?}: {differ} differences over {} coding points", grid.len()),
    ))
}

fn full_cooperation_anchor(ch: &GaussianChannel) -> Result<Check, CliError> {
    let ch = full_csit(ch);
    let cp = CodingParams::split([0.0; 2], [ch.p1, ch.p2]).with_rho([1.0, 1.0]);
    let got = prop1_bounds(&ch, &cp)?.sum_coop;
    let coherent = (ch.p1.sqrt() + ch.p2.sqrt()).powi(2);
    let want = 0.5 * (1.0 + coherent / ch.n3).log2();
    let err = (got - want).abs();
    Ok(Check::new(
        "full-cooperation-anchor",
        err < 1e-12,
        format!("coherent sum bound {got} vs C((sqrt(P1)+sqrt(P2))^2/N3) = {want} (error {err:.3e})"),
    ))
}

fn degeneration(ch: &GaussianChannel) -> Result<Check, CliError> {
    let ch = GaussianChannel { q0: 0.0, ..full_csit(ch) };
    let mut worst = 0.0_f64;
    let grid = split_grid(&ch);
    for cp in &grid {
        let cp = optimal_dpc_coeffs(&ch, cp)?;
        let a = prop2_region(&ch, &cp)?.project().map_err(ModelError::from)?;
        let b = prop1_region(&ch, &cp)?.project().map_err(ModelError::from)?;
        worst = worst.max(hausdorff_distance(&a, &b));
    }
    Ok(Check::new(
        "degeneration",
        worst < 1e-9,
        format!("doubly dirty region with Q1 = Q2 = 0 vs known-interference region: max Hausdorff {worst:.3e} over {} points (tolerance 1e-9)", grid.len()),
    ))
}

fn prop3_limit(ch: &GaussianChannel) -> Result<Check, CliError> {
    let inf = GaussianChannel { q0: 0.0, q1: StateVariance::Unbounded, q2: StateVariance::Finite(0.0), ..*ch };
    let big = GaussianChannel { q1: StateVariance::Finite(1e6 * ch.p1), ..inf };
    let mut worst = 0.0_f64;
    let mut n = 0;
    for rho1 in [0.0, 0.5, 0.9] {
        for a in [0.25, 0.5, 1.0, 1.5] {
            for rho2 in THIRDS {
                for s2 in THIRDS {
                    let mut cp = CodingParams::default();
                    cp.users[0].rho = rho1;
                    cp.users[0].p_direct = ch.p1;
                    cp.users[0].alpha_direct = a;
                    cp.users[1].rho = rho2;
                    cp.users[1].p_fresh = s2 * ch.p2;
                    cp.users[1].p_direct = (1.0 - s2) * ch.p2;
                    let x = prop3_region(&inf, &cp)?.project().map_err(ModelError::from)?;
                    let y =
                        prop2_region_with(&big, &cp, Corrections::ForcedZero)?.project().map_err(ModelError::from)?;
                    worst = worst.max(hausdorff_distance(&x, &y));
                    n += 1;
                }
            }
        }
    }
    Ok(Check::new(
        "prop3-limit",
        worst < 1e-3,
        format!("unbounded-interference region vs doubly dirty region at Q1 = 1e6*P1: max Hausdorff {worst:.3e} over {n} points (tolerance 1e-3)"),
    ))
}

fn scenario_ordering(ch: &GaussianChannel) -> Result<Check, CliError> {
    let ch = full_csit(ch);
    let r = |s| baseline_region(&ch, s);
    let (gc, mc, gn, mn) =
        (r(Scenario::GmacCsit)?, r(Scenario::MacCsit)?, r(Scenario::GmacNoCsit)?, r(Scenario::MacNoCsit)?);
    let pairs = [
        ("mac-no-csit ⊆ gmac-no-csit", region_contains(&gn, &mn, 1e-9)),
        ("gmac-no-csit ⊆ gmac-csit", region_contains(&gc, &gn, 1e-9)),
        ("mac-no-csit ⊆ mac-csit", region_contains(&mc, &mn, 1e-9)),
        ("mac-csit ⊆ gmac-csit", region_contains(&gc, &mc, 1e-9)),
    ];
    let failed: Vec<&str> = pairs.iter().filter(|p| !p.1).map(|p| p.0).collect();
    let detail = if failed.is_empty() {
        "all four containments hold at tolerance 1e-9".to_string()
    } else {
        format!("violated: {}", failed.join(", "))
    };
    Ok(Check::new("scenario-ordering", failed.is_empty(), detail))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + (hi - lo) * u
}

fn mc_entropy(cfg: &LoadedConfig, ch: &GaussianChannel, exec: &PoolExecutor) -> Result<Check, CliError> {
    let v = &cfg.config.verify;
    let seed = cfg.config.sweep.resolve().seed;
    let ch = doubly_dirty(ch);
    let errs = exec.map(v.mc_draws, |i| -> Result<f64, ModelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let mut cp = CodingParams::default();
        for k in 0..2 {
            let u = &mut cp.users[k];
            u.rho = uniform(&mut rng, 0.0, 0.9);
            u.eta = uniform(&mut rng, eta_min(ch.power(k), ch.state(k)), 1.0);
            let s = uniform(&mut rng, 0.1, 0.9);
            u.p_fresh = s * ch.power(k);
            u.p_direct = (1.0 - s) * ch.power(k);
            u.alpha = uniform(&mut rng, 0.0, 1.0);
            u.alpha_direct = uniform(&mut rng, 0.0, 1.0);
        }
        let mut worst = 0.0_f64;
        for (j, which) in EntropySelector::ALL.into_iter().enumerate() {
            let exact = which.closed_form(&ch, &cp)?;
            let est = mc_entropy_oracle(&ch, &cp, which, v.mc_samples, rng.next_u64() ^ j as u64)?;
            worst = worst.max((exact - est).abs());
        }
        Ok(worst)
    });
    let mut worst = 0.0_f64;
    for e in errs {
        worst = worst.max(e?);
    }
    Ok(Check::new(
        "mc-entropy",
        worst < 0.02,
        format!(
            "max |closed form - Monte Carlo| {worst:.4} bits over {} draws x 5 conditional entropies at {} samples (tolerance 0.02)",
            v.mc_draws, v.mc_samples
        ),
    ))
}

fn factorization(cfg: &LoadedConfig) -> Result<Vec<Check>, CliError> {
    let seed = cfg.config.sweep.resolve().seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for row in TableRow::ALL {
        let p = row.layout().random(2, &mut rng)?;
        if !validate_factorization(&p).is_empty() {
            bad.push(row.tag());
        }
    }
    let mut out = vec![Check::new(
        "factorization[table]",
        bad.is_empty(),
        if bad.is_empty() {
            format!("random binary members of all {} special-case families factorize", TableRow::ALL.len())
        } else {
            format!("families with violations: {}", bad.join(", "))
        },
    )];
    for (i, src) in cfg.config.verify.pmfs.iter().enumerate() {
        let fam = pmf::load(src, i, seed).map_err(|e| cfg.error_at("pmfs", e))?;
        let mut issues = Vec::new();
        for p in &fam.pmfs {
            issues.extend(validate_factorization(p).iter().map(|v| v.to_string()));
        }
        issues.dedup();
        let detail =
            if issues.is_empty() { format!("{} distribution(s) factorize", fam.pmfs.len()) } else { issues.join("; ") };
        out.push(Check::new(format!("factorization[{}]", fam.label), issues.is_empty(), detail));
    }
    Ok(out)
}

pub fn compute(cfg: &LoadedConfig, exec: &PoolExecutor) -> Result<Vec<Check>, CliError> {
    let ch = channel(cfg)?;
    let mut checks = vec![
        orthogonality(cfg, &ch)?,
        mmse_ordering(&ch, exec)?,
        interference_independence(&ch)?,
        full_cooperation_anchor(&ch)?,
        degeneration(&ch)?,
        prop3_limit(&ch)?,
        scenario_ordering(&ch)?,
        mc_entropy(cfg, &ch, exec)?,
    ];
    checks.extend(factorization(cfg)?);
    Ok(checks)
}

pub fn write(checks: &[Check], opts: &RunOptions) -> Result<Vec<std::path::PathBuf>, CliError> {
    let mut files = Vec::new();
    if opts.formats.contains(&Format::Csv) {
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| vec![c.name.clone(), if c.pass { "pass" } else { "fail" }.into(), c.detail.clone()])
            .collect();
        files.push(write_csv(
            &opts.out.join("verify.csv"),
            "check name, pass or fail, detail",
            &["check", "status", "detail"],
            &rows,
        )?);
    }
    if opts.formats.contains(&Format::Json) {
        let v = json!({
            "command": "verify",
            "passed": checks.iter().all(|c| c.pass),
            "checks": checks.iter().map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail })).collect::<Vec<_>>(),
        });
        files.push(write_json(&opts.out.join("verify.json"), &v)?);
    }
    Ok(files)
}
