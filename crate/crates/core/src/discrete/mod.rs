//! Finite-alphabet achievable region.
//!
//! A [`JointPmf`] is a dense tensor over the thirteen variables
//! `S0, S1, S2, U, V1, V2, V13, V23, X1, X2, Y1, Y2, Y3` (in that order,
//! last variable fastest). [`theorem1_bounds`] evaluates the six rate
//! bounds with their Gelfand–Pinsker penalties; [`table1`] builds the
//! special-case channels (cribbing, relaying, partial state knowledge) as
//! pmf constructors.
//!
//! An empty alphabet is represented by a singleton, which carries no
//! information. Alphabets are capped at [`MAX_ALPHABET`] symbols and the
//! tensor at [`MAX_ENTRIES`] entries.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

mod factor;
mod info;
pub mod table1;
mod theorem1;

pub use factor::{validate_factorization, FactorId, Violation};
pub use theorem1::{family_union, theorem1_bounds, Theorem1Bounds};

pub const MAX_ALPHABET: usize = 4;
pub const MAX_ENTRIES: usize = 1 << 22;
pub const NUM_VARS: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S0 = 0,
    S1,
    S2,
    U,
    V1,
    V2,
    V13,
    V23,
    X1,
    X2,
    Y1,
    Y2,
    Y3,
}

impl Var {
    pub const ALL: [Var; NUM_VARS] = [
        Var::S0,
        Var::S1,
        Var::S2,
        Var::U,
        Var::V1,
        Var::V2,
        Var::V13,
        Var::V23,
        Var::X1,
        Var::X2,
        Var::Y1,
        Var::Y2,
        Var::Y3,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["S0", "S1", "S2", "U", "V1", "V2", "V13", "V23", "X1", "X2", "Y1", "Y2", "Y3"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    /// The same role for the other user.
    pub fn swapped(self) -> Var {
        use Var::*;
        match self {
            S1 => S2,
            S2 => S1,
            V1 => V2,
            V2 => V1,
            V13 => V23,
            V23 => V13,
            X1 => X2,
            X2 => X1,
            Y1 => Y2,
            Y2 => Y1,
            v => v,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Set of variables as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet(u16);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn of(vars: &[Var]) -> Self {
        VarSet(vars.iter().fold(0, |m, v| m | (1 << v.index())))
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn intersects(self, other: VarSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        Var::ALL.into_iter().filter(move |v| self.contains(*v))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.iter() {
            f.write_str(v.name())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscreteError {
    #[error("alphabet of {var} has {size} symbols; allowed range is 1..={MAX_ALPHABET}")]
    AlphabetSize { var: Var, size: usize },
    #[error("joint tensor would have {0} entries (limit {MAX_ENTRIES})")]
    TooLarge(usize),
    #[error("probability tensor has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("probabilities must be finite and non-negative")]
    NegativeProbability,
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("variable sets overlap: {0}")]
    Overlap(VarSet),
    #[error("factor {factor:?}: {reason}")]
    Factor { factor: FactorId, reason: &'static str },
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("pmf does not have the required factorization: {}", list(.0))]
    Factorization(Vec<Violation>),
}

fn list(v: &[Violation]) -> alloc::string::String {
    use alloc::string::ToString;
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Joint pmf over the thirteen variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    sizes: [usize; NUM_VARS],
    probs: Vec<f64>,
}

const NORMALIZATION_TOL: f64 = 1e-12;

pub(crate) fn check_sizes(sizes: &[usize; NUM_VARS]) -> Result<usize, DiscreteError> {
    let mut total: usize = 1;
    for v in Var::ALL {
        let s = sizes[v.index()];
        if s == 0 || s > MAX_ALPHABET {
            return Err(DiscreteError::AlphabetSize { var: v, size: s });
        }
        total = total.saturating_mul(s);
    }
    if total > MAX_ENTRIES {
        return Err(DiscreteError::TooLarge(total));
    }
    Ok(total)
}

impl JointPmf {
    /// Dense row-major tensor in the fixed variable order.
    pub fn from_dense(sizes: [usize; NUM_VARS], probs: Vec<f64>) -> Result<Self, DiscreteError> {
        let n = check_sizes(&sizes)?;
        if probs.len() != n {
            return Err(DiscreteError::Shape { expected: n, got: probs.len() });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(DiscreteError::NegativeProbability);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(DiscreteError::NotNormalized(total));
        }
        Ok(Self { sizes, probs })
    }

    pub fn sizes(&self) -> &[usize; NUM_VARS] {
        &self.sizes
    }

    pub fn size(&self, v: Var) -> usize {
        self.sizes[v.index()]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal over `set`, as a dense tensor in variable order.
    pub fn marginal(&self, set: VarSet) -> Vec<f64> {
        let mut strides = [0usize; NUM_VARS];
        let mut len = 1;
        for v in Var::ALL.iter().rev() {
            if set.contains(*v) {
                strides[v.index()] = len;
                len *= self.sizes[v.index()];
            }
        }
        let mut out = alloc::vec![0.0; len];
        let mut digits = [0usize; NUM_VARS];
        let mut sub = 0usize;
        for &p in &self.probs {
            out[sub] += p;
            // odometer increment, last variable fastest
            for i in (0..NUM_VARS).rev() {
                digits[i] += 1;
                sub += strides[i];
                if digits[i] < self.sizes[i] {
                    break;
                }
                sub -= strides[i] * digits[i];
                digits[i] = 0;
            }
        }
        out
    }

    /// Exchange the roles of the two users.
    pub fn swap_users(&self) -> JointPmf {
        let mut perm = [Var::S0; NUM_VARS];
        for v in Var::ALL {
            perm[v.index()] = v.swapped();
        }
        self.permute_vars(&perm)
    }

    /// New pmf whose variable `v` is old variable `perm[v]`.
    fn permute_vars(&self, perm: &[Var; NUM_VARS]) -> JointPmf {
        let mut sizes = [1; NUM_VARS];
        for v in Var::ALL {
            sizes[v.index()] = self.sizes[perm[v.index()].index()];
        }
        let old_strides = strides(&self.sizes);
        let mut probs = alloc::vec![0.0; self.probs.len()];
        let mut digits = [0usize; NUM_VARS];
        for slot in probs.iter_mut() {
            let old: usize = (0..NUM_VARS).map(|i| digits[i] * old_strides[perm[i].index()]).sum();
            *slot = self.probs[old];
            advance(&mut digits, &sizes);
        }
        JointPmf { sizes, probs }
    }

    /// Rename the symbols of `v`: old symbol `a` becomes `map[a]`.
    pub fn relabel(&self, v: Var, map: &[usize]) -> JointPmf {
        let st = strides(&self.sizes);
        let i = v.index();
        let mut probs = alloc::vec![0.0; self.probs.len()];
        let mut digits = [0usize; NUM_VARS];
        for (idx, &p) in self.probs.iter().enumerate() {
            let new = idx - digits[i] * st[i] + map[digits[i]] * st[i];
            probs[new] = p;
            advance(&mut digits, &self.sizes);
        }
        JointPmf { sizes: self.sizes, probs }
    }
}

pub(crate) fn strides(sizes: &[usize; NUM_VARS]) -> [usize; NUM_VARS] {
    let mut st = [0; NUM_VARS];
    let mut len = 1;
    for i in (0..NUM_VARS).rev() {
        st[i] = len;
        len *= sizes[i];
    }
    st
}

pub(crate) fn advance(digits: &mut [usize; NUM_VARS], sizes: &[usize; NUM_VARS]) {
    for i in (0..NUM_VARS).rev() {
        digits[i] += 1;
        if digits[i] < sizes[i] {
            return;
        }
        digits[i] = 0;
    }
}

pub use info::{entropy, mutual_information};

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn two_var(x: Var, y: Var, table: [[f64; 2]; 2]) -> JointPmf {
        let mut sizes = [1; NUM_VARS];
        sizes[x.index()] = 2;
        sizes[y.index()] = 2;
        let mut probs = vec![0.0; 4];
        for a in 0..2 {
            for b in 0..2 {
                let (i, j) = if x < y { (a, b) } else { (b, a) };
                probs[i * 2 + j] = table[a][b];
            }
        }
        JointPmf::from_dense(sizes, probs).unwrap()
    }

    #[test]
    fn marginals() {
        let p = two_var(Var::X1, Var::Y3, [[0.1, 0.2], [0.3, 0.4]]);
        let m = p.marginal(VarSet::of(&[Var::X1]));
        assert!((m[0] - 0.3).abs() < 1e-15 && (m[1] - 0.7).abs() < 1e-15);
        let m = p.marginal(VarSet::of(&[Var::Y3]));
        assert!((m[0] - 0.4).abs() < 1e-15);
        assert_eq!(p.marginal(VarSet::EMPTY), vec![1.0]);
    }

    #[test]
    fn rejects_bad_tensors() {
        let mut sizes = [1; NUM_VARS];
        sizes[0] = 5;
        assert!(matches!(JointPmf::from_dense(sizes, vec![0.2; 5]), Err(DiscreteError::AlphabetSize { .. })));
        let sizes = [1; NUM_VARS];
        assert!(matches!(JointPmf::from_dense(sizes, vec![0.5]), Err(DiscreteError::NotNormalized(_))));
        assert!(matches!(JointPmf::from_dense(sizes, vec![0.5, 0.5]), Err(DiscreteError::Shape { .. })));
    }

    #[test]
    fn swap_moves_axes() {
        let p = two_var(Var::X1, Var::Y1, [[0.1, 0.2], [0.3, 0.4]]);
        let q = p.swap_users();
        assert_eq!(q.size(Var::X2), 2);
        assert_eq!(q.size(Var::X1), 1);
        assert_eq!(q.marginal(VarSet::of(&[Var::X2])), p.marginal(VarSet::of(&[Var::X1])));
    }

    #[test]
    fn relabel_permutes_symbols() {
        let p = two_var(Var::X1, Var::Y3, [[0.1, 0.2], [0.3, 0.4]]);
        let q = p.relabel(Var::X1, &[1, 0]);
        assert_eq!(q.probs(), &[0.3, 0.4, 0.1, 0.2]);
    }
}
