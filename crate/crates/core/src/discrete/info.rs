use super::{DiscreteError, JointPmf, VarSet};
use crate::scalar::Bits;

/// Probabilities below this are treated as zero.
const ZERO_MASS: f64 = 1e-15;

/// `H(set)` in bits, with `0·log 0 = 0`.
pub fn entropy(p: &JointPmf, set: VarSet) -> Bits {
    if set.is_empty() {
        return 0.0;
    }
    p.marginal(set).into_iter().filter(|&q| q > ZERO_MASS).map(|q| -q * libm::log2(q)).sum()
}

/// `I(A; B | C)` in bits. The three sets must be pairwise disjoint.
pub fn mutual_information(p: &JointPmf, a: VarSet, b: VarSet, c: VarSet) -> Result<Bits, DiscreteError> {
    for (x, y) in [(a, b), (a, c), (b, c)] {
        if x.intersects(y) {
            return Err(DiscreteError::Overlap(x.intersection(y)));
        }
    }
    Ok(cmi(p, a, b, c))
}

/// Unchecked `I(A; B | C)`; round-off below zero is clamped.
pub(crate) fn cmi(p: &JointPmf, a: VarSet, b: VarSet, c: VarSet) -> Bits {
    let h = |s: VarSet| entropy(p, s);
    let v = h(a.union(c)) + h(b.union(c)) - h(a.union(b).union(c)) - h(c);
    v.max(0.0)
}
