//! The nine-factor structure every admissible pmf must have:
//!
//! `p(s0) p(s1|s0) p(s2|s0) p(u|s0) p(v1|s0 s1 u) p(v2|s0 s2 u)
//!  p(v13 x1|u v1 s0 s1) p(v23 x2|u v2 s0 s2) p(y1 y2 y3|x1 x2 s0 s1 s2)`.

use alloc::vec::Vec;
use core::fmt;

use super::info::cmi;
use super::{advance, check_sizes, DiscreteError, JointPmf, Var, VarSet, NUM_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorId {
    CommonState,
    State1,
    State2,
    Cooperation,
    Fresh1,
    Fresh2,
    Encoder1,
    Encoder2,
    Channel,
}

impl FactorId {
    pub const ALL: [FactorId; 9] = [
        FactorId::CommonState,
        FactorId::State1,
        FactorId::State2,
        FactorId::Cooperation,
        FactorId::Fresh1,
        FactorId::Fresh2,
        FactorId::Encoder1,
        FactorId::Encoder2,
        FactorId::Channel,
    ];

    pub fn cond(self) -> &'static [Var] {
        use Var::*;
        match self {
            FactorId::CommonState => &[],
            FactorId::State1 | FactorId::State2 | FactorId::Cooperation => &[S0],
            FactorId::Fresh1 => &[S0, S1, U],
            FactorId::Fresh2 => &[S0, S2, U],
            FactorId::Encoder1 => &[S0, S1, U, V1],
            FactorId::Encoder2 => &[S0, S2, U, V2],
            FactorId::Channel => &[S0, S1, S2, X1, X2],
        }
    }

    pub fn out(self) -> &'static [Var] {
        use Var::*;
        match self {
            FactorId::CommonState => &[S0],
            FactorId::State1 => &[S1],
            FactorId::State2 => &[S2],
            FactorId::Cooperation => &[U],
            FactorId::Fresh1 => &[V1],
            FactorId::Fresh2 => &[V2],
            FactorId::Encoder1 => &[V13, X1],
            FactorId::Encoder2 => &[V23, X2],
            FactorId::Channel => &[Y1, Y2, Y3],
        }
    }
}

fn dense_len(vars: &[Var], sizes: &[usize; NUM_VARS]) -> usize {
    vars.iter().map(|v| sizes[v.index()]).product()
}

/// Row-major index of the sub-assignment `vars` of `digits`.
fn sub_index(vars: &[Var], sizes: &[usize; NUM_VARS], digits: &[usize; NUM_VARS]) -> usize {
    vars.iter().fold(0, |acc, v| acc * sizes[v.index()] + digits[v.index()])
}

fn decode(vars: &[Var], sizes: &[usize; NUM_VARS], mut index: usize, out: &mut Vec<usize>) {
    out.clear();
    out.resize(vars.len(), 0);
    for (slot, v) in out.iter_mut().zip(vars).rev() {
        let s = sizes[v.index()];
        *slot = index % s;
        index /= s;
    }
}

const ROW_TOL: f64 = 1e-9;

impl JointPmf {
    /// Product of the nine conditional factors. For every factor and every
    /// assignment of its conditioning variables (in [`FactorId::cond`]
    /// order), `row` fills the distribution of its outputs (row-major in
    /// [`FactorId::out`] order).
    pub fn from_factors<F>(sizes: [usize; NUM_VARS], mut row: F) -> Result<JointPmf, DiscreteError>
    where
        F: FnMut(FactorId, &[usize], &mut [f64]),
    {
        let n = check_sizes(&sizes)?;
        let mut tables: Vec<Vec<f64>> = Vec::with_capacity(9);
        let mut cond_vals = Vec::new();
        for f in FactorId::ALL {
            let rows = dense_len(f.cond(), &sizes);
            let width = dense_len(f.out(), &sizes);
            let mut table = alloc::vec![0.0; rows * width];
            for r in 0..rows {
                decode(f.cond(), &sizes, r, &mut cond_vals);
                let dist = &mut table[r * width..(r + 1) * width];
                row(f, &cond_vals, dist);
                if dist.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(DiscreteError::Factor { factor: f, reason: "negative or non-finite entry" });
                }
                if (dist.iter().sum::<f64>() - 1.0).abs() > ROW_TOL {
                    return Err(DiscreteError::Factor { factor: f, reason: "conditional row does not sum to 1" });
                }
            }
            tables.push(table);
        }
        let mut probs = alloc::vec![0.0; n];
        let mut digits = [0usize; NUM_VARS];
        for slot in probs.iter_mut() {
            let mut prod = 1.0;
            for (f, t) in FactorId::ALL.iter().zip(&tables) {
                let width = dense_len(f.out(), &sizes);
                prod *= t[sub_index(f.cond(), &sizes, &digits) * width + sub_index(f.out(), &sizes, &digits)];
                if prod == 0.0 {
                    break;
                }
            }
            *slot = prod;
            advance(&mut digits, &sizes);
        }
        let total: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= total;
        }
        JointPmf::from_dense(sizes, probs)
    }
}

/// A way in which a pmf fails the required structure.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// The product of the pmf's own conditionals differs from the pmf.
    Factorization { max_error: f64 },
    /// A Markov chain `a — b — c` fails: `I(a; c | b) > 0`.
    MarkovChain { chain: &'static str, cmi: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Factorization { max_error } => {
                write!(f, "nine-factor product differs from the pmf by up to {max_error:.3e}")
            }
            Violation::MarkovChain { chain, cmi } => {
                write!(f, "Markov chain {chain} violated (conditional mutual information {cmi:.3e} bits)")
            }
        }
    }
}

const PRODUCT_TOL: f64 = 1e-10;
const MARKOV_TOL: f64 = 1e-9;

/// Check that `p` factorizes as required. Returns every violation found;
/// an empty list means the pmf is admissible.
pub fn validate_factorization(p: &JointPmf) -> Vec<Violation> {
    let sizes = *p.sizes();
    let mut out = Vec::new();

    // Conditionals of p itself: p(out | cond) = p(out, cond) / p(cond).
    let margs: Vec<(Vec<f64>, Vec<f64>)> = FactorId::ALL
        .iter()
        .map(|f| {
            let cond = VarSet::of(f.cond());
            (p.marginal(cond.union(VarSet::of(f.out()))), p.marginal(cond))
        })
        .collect();
    let mut digits = [0usize; NUM_VARS];
    let mut max_error: f64 = 0.0;
    for &pv in p.probs() {
        let mut prod = 1.0;
        for (f, (joint, cond)) in FactorId::ALL.iter().zip(&margs) {
            let cs = VarSet::of(f.cond());
            let js = cs.union(VarSet::of(f.out()));
            let den = cond[set_index(cs, &sizes, &digits)];
            if den <= 0.0 {
                prod = 0.0;
                break;
            }
            prod *= joint[set_index(js, &sizes, &digits)] / den;
        }
        max_error = max_error.max((prod - pv).abs());
        advance(&mut digits, &sizes);
    }
    if max_error > PRODUCT_TOL {
        out.push(Violation::Factorization { max_error });
    }

    use Var::*;
    // (name, A, B, C) for A — B — C
    type Chain = (&'static str, &'static [Var], &'static [Var], &'static [Var]);
    let chains: [Chain; 2] =
        [("S1S2 — S0 — U", &[S1, S2], &[S0], &[U]), ("V1V13 — S0U — V2V23", &[V1, V13], &[S0, U], &[V2, V23])];
    for (chain, a, b, c) in chains {
        let cmi = cmi(p, VarSet::of(a), VarSet::of(c), VarSet::of(b));
        if cmi > MARKOV_TOL {
            out.push(Violation::MarkovChain { chain, cmi });
        }
    }
    out
}

/// Index into a marginal over `set` (variables in the fixed order).
fn set_index(set: VarSet, sizes: &[usize; NUM_VARS], digits: &[usize; NUM_VARS]) -> usize {
    set.iter().fold(0, |acc, v| acc * sizes[v.index()] + digits[v.index()])
}

#[cfg(test)]
mod tests {
    use super::super::strides;
    use super::*;

    fn sizes_with(vars: &[Var]) -> [usize; NUM_VARS] {
        let mut s = [1; NUM_VARS];
        for v in vars {
            s[v.index()] = 2;
        }
        s
    }

    /// Binary states and cooperation codeword; `leak` lets U depend on S1.
    fn pmf(leak: f64) -> Result<JointPmf, DiscreteError> {
        use Var::*;
        let sizes = sizes_with(&[S0, S1, U, X1, Y3]);
        JointPmf::from_factors(sizes, |f, c, d| match f {
            FactorId::CommonState => d.copy_from_slice(&[0.4, 0.6]),
            FactorId::State1 => d.copy_from_slice(if c[0] == 0 { &[0.8, 0.2] } else { &[0.3, 0.7] }),
            FactorId::Cooperation => d.copy_from_slice(if c[0] == 0 { &[0.5, 0.5] } else { &[0.1, 0.9] }),
            FactorId::Encoder1 => d.copy_from_slice(if c[2] == 0 { &[0.7, 0.3] } else { &[0.2, 0.8] }),
            FactorId::Channel => {
                let y = c[3] ^ c[1];
                d[y] = 0.9;
                d[1 - y] = 0.1;
            }
            _ => d[0] = 1.0,
        })
        .map(|p| {
            if leak == 0.0 {
                return p;
            }
            // Rebuild with U correlated to S1 directly.
            let mut probs = p.probs().to_vec();
            let st = strides(&sizes);
            for (i, v) in probs.iter_mut().enumerate() {
                let s1 = (i / st[S1.index()]) % 2;
                let u = (i / st[U.index()]) % 2;
                *v *= if s1 == u { 1.0 + leak } else { 1.0 - leak };
            }
            let t: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|v| *v /= t);
            JointPmf::from_dense(sizes, probs).unwrap()
        })
    }

    #[test]
    fn product_pmf_is_admissible() {
        assert!(validate_factorization(&pmf(0.0).unwrap()).is_empty());
    }

    #[test]
    fn state_leak_names_chain() {
        let v = validate_factorization(&pmf(0.5).unwrap());
        assert!(v.iter().any(|x| matches!(x, Violation::MarkovChain { chain, .. } if chain.starts_with("S1S2"))));
    }

    #[test]
    fn rejects_bad_rows() {
        let sizes = sizes_with(&[Var::S0]);
        let e = JointPmf::from_factors(sizes, |_, _, d| d.fill(0.7)).unwrap_err();
        assert!(matches!(e, DiscreteError::Factor { factor: FactorId::CommonState, .. }));
    }
}
