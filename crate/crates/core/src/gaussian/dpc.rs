//! Multi-layer dirty-paper coefficients for the channel whose interference
//! is known to both encoders.
//!
//! Each codeword is `U = Xu + α0·S0`, `V_k = √(ρ_k P_k)·Xu + X'_k + α_k·S0`,
//! `V_k3 = X''_k + α_k3·S0`, with `X_k = √(ρ_k P_k)·Xu + X'_k + X''_k`.
//! The optimal coefficients are the linear-MMSE weights of each codeword's
//! signal part given `T = X1 + X2 + Z3`, which makes every estimation error
//! orthogonal to `T`.

use super::{CodingParams, GaussianChannel, ModelError};

/// `E{ε · (X1 + X2 + Z3)}` for the five estimation errors, in the order
/// `U, V1, V2, V13, V23`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityResiduals {
    pub u: f64,
    pub v: [f64; 2],
    pub v_direct: [f64; 2],
}

impl OrthogonalityResiduals {
    pub fn to_array(&self) -> [f64; 5] {
        [self.u, self.v[0], self.v[1], self.v_direct[0], self.v_direct[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, r| m.max(r.abs()))
    }
}

fn require_full_csit(ch: &GaussianChannel) -> Result<(), ModelError> {
    ch.validate()?;
    if !(ch.q1.is_zero() && ch.q2.is_zero()) {
        return Err(ModelError::PrivateStatePresent);
    }
    Ok(())
}

/// Second moment of `X1 + X2 + Z3`. It reduces to
/// `P1 + P2 + 2√(ρ1ρ2P1P2) + N3` when each encoder spends its full power.
fn total_second_moment(ch: &GaussianChannel, cp: &CodingParams) -> f64 {
    let coop = coop_amplitude(ch, cp);
    let private: f64 = cp.users.iter().map(|u| (1.0 - u.rho) * (u.p_fresh + u.p_direct)).sum();
    coop * coop + private + ch.n3
}

fn coop_amplitude(ch: &GaussianChannel, cp: &CodingParams) -> f64 {
    (0..2).map(|k| libm::sqrt(cp.users[k].rho * ch.power(k))).sum()
}

/// Fill `α0`, `α_k` and `α_k3`; every other field is kept.
pub fn optimal_dpc_coeffs(ch: &GaussianChannel, cp: &CodingParams) -> Result<CodingParams, ModelError> {
    require_full_csit(ch)?;
    cp.validate(ch)?;
    let d = total_second_moment(ch, cp);
    let c = coop_amplitude(ch, cp);
    let mut out = *cp;
    out.alpha_common = c / d;
    for k in 0..2 {
        let u = &mut out.users[k];
        let rho_bar = 1.0 - u.rho;
        u.alpha = (libm::sqrt(u.rho * ch.power(k)) * c + rho_bar * u.p_fresh) / d;
        u.alpha_direct = rho_bar * u.p_direct / d;
    }
    Ok(out)
}

/// Independent sources `Xu, X'1, X'2, X''1, X''2, Z3`.
const SOURCES: usize = 6;

fn inner(a: &[f64; SOURCES], b: &[f64; SOURCES], var: &[f64; SOURCES]) -> f64 {
    (0..SOURCES).map(|i| a[i] * b[i] * var[i]).sum()
}

/// Covariances between each estimation error and `X1 + X2 + Z3`, built from
/// the linear model over the independent sources (not from the closed-form
/// coefficients), so they vanish exactly when the coefficients are optimal.
pub fn dpc_orthogonality_residuals(ch: &GaussianChannel, cp: &CodingParams) -> OrthogonalityResiduals {
    let [u1, u2] = cp.users;
    let var = [
        1.0,
        (1.0 - u1.rho) * u1.p_fresh,
        (1.0 - u2.rho) * u2.p_fresh,
        (1.0 - u1.rho) * u1.p_direct,
        (1.0 - u2.rho) * u2.p_direct,
        ch.n3,
    ];
    let a1 = libm::sqrt(u1.rho * ch.p1);
    let a2 = libm::sqrt(u2.rho * ch.p2);
    let x1 = [a1, 1.0, 0.0, 1.0, 0.0, 0.0];
    let x2 = [a2, 0.0, 1.0, 0.0, 1.0, 0.0];
    let mut t = [0.0; SOURCES];
    for i in 0..SOURCES {
        t[i] = x1[i] + x2[i];
    }
    t[5] = 1.0;

    let error = |signal: [f64; SOURCES], alpha: f64| {
        let mut e = signal;
        for i in 0..SOURCES {
            e[i] -= alpha * t[i];
        }
        inner(&e, &t, &var)
    };
    OrthogonalityResiduals {
        u: error([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], cp.alpha_common),
        v: [error([a1, 1.0, 0.0, 0.0, 0.0, 0.0], u1.alpha), error([a2, 0.0, 1.0, 0.0, 0.0, 0.0], u2.alpha)],
        v_direct: [
            error([0.0, 0.0, 0.0, 1.0, 0.0, 0.0], u1.alpha_direct),
            error([0.0, 0.0, 0.0, 0.0, 1.0, 0.0], u2.alpha_direct),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5() -> GaussianChannel {
        GaussianChannel::full_csit([10.0, 10.0], [1.0, 1.0, libm::pow(10.0, 0.7)], libm::pow(10.0, 0.2))
    }

    #[test]
    fn no_cooperation_pattern() {
        let ch = fig5();
        let cp = optimal_dpc_coeffs(&ch, &CodingParams::split([0.0; 2], [10.0; 2])).unwrap();
        let d = 20.0 + ch.n3;
        assert_eq!(cp.alpha_common, 0.0);
        for u in cp.users {
            assert_eq!(u.alpha, 0.0);
            assert!((u.alpha_direct - 10.0 / d).abs() < 1e-15);
        }
        assert!(dpc_orthogonality_residuals(&ch, &cp).max_abs() < 1e-12);
    }

    #[test]
    fn full_cooperation_pattern() {
        let ch = fig5();
        let base = CodingParams::split([4.0, 2.0], [6.0, 8.0]).with_rho([1.0, 1.0]);
        let cp = optimal_dpc_coeffs(&ch, &base).unwrap();
        let d = 20.0 + 2.0 * 10.0 + ch.n3;
        assert!((cp.alpha_common - 2.0 * libm::sqrt(10.0) / d).abs() < 1e-15);
        assert_eq!(cp.users[0].alpha_direct, 0.0);
        assert_eq!(cp.users[1].alpha_direct, 0.0);
    }

    #[test]
    fn perturbing_common_coefficient() {
        let ch = fig5();
        let base = CodingParams::split([3.0, 5.0], [7.0, 5.0]).with_rho([0.3, 0.6]);
        let mut cp = optimal_dpc_coeffs(&ch, &base).unwrap();
        let d = total_second_moment(&ch, &cp);
        cp.alpha_common += 0.1;
        let r = dpc_orthogonality_residuals(&ch, &cp);
        assert!((r.u + 0.1 * d).abs() < 1e-12);
    }

    #[test]
    fn rejects_private_state_and_bad_split() {
        let mut ch = fig5();
        let cp = CodingParams::split([6.0, 0.0], [6.0, 0.0]);
        assert!(matches!(optimal_dpc_coeffs(&ch, &cp), Err(ModelError::PowerSplit { user: 1, .. })));
        ch.q1 = super::super::StateVariance::Finite(1.0);
        assert_eq!(optimal_dpc_coeffs(&ch, &CodingParams::default()), Err(ModelError::PrivateStatePresent));
    }
}
