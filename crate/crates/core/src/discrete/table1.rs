//! Known channels recovered as special cases of the general region.
//!
//! Each [`TableRow`] fixes a [`Layout`]: which variables are absent
//! (singletons), which are copies of another variable, and which are free.
//! [`Layout::build`] turns the free conditionals into an admissible pmf.

use alloc::vec::Vec;

use rand_core::RngCore;

use super::theorem1::{pin_user2, theorem1_bounds};
use super::{DiscreteError, FactorId, JointPmf, Theorem1Bounds, Var, NUM_VARS};
use crate::geometry::RateRegion2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableRow {
    /// Generalized MAC without states.
    Gmac,
    /// MAC with perfect cribbing in both directions.
    CribbingMac,
    /// Relay channel, partial decode-and-forward.
    RelayPartialDf,
    /// MAC with partial state knowledge at the encoders.
    PartialCsitMac,
    /// One informed encoder that cribs from the other.
    OneCribbingInformedEncoder,
    /// Cribbing MAC with partial state knowledge.
    CribbingPartialCsit,
    /// Relay channel, state known at the source only.
    RelayCsitAtSource,
    /// Relay channel, state known at the relay only.
    RelayCsitAtRelay,
    /// Relay channel, degraded state knowledge.
    RelayDegradedCsit,
    /// Relay channel, common state known everywhere.
    RelayFullCsit,
}

/// How a variable is realized in a fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Free,
    /// Absent: a single-symbol alphabet.
    Empty,
    /// Deterministic copy of another variable of the same or an earlier factor.
    Copy(Var),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub roles: [Role; NUM_VARS],
    /// User 2 sends no message.
    pub message2_empty: bool,
}

impl TableRow {
    pub const ALL: [TableRow; 10] = [
        TableRow::Gmac,
        TableRow::CribbingMac,
        TableRow::RelayPartialDf,
        TableRow::PartialCsitMac,
        TableRow::OneCribbingInformedEncoder,
        TableRow::CribbingPartialCsit,
        TableRow::RelayCsitAtSource,
        TableRow::RelayCsitAtRelay,
        TableRow::RelayDegradedCsit,
        TableRow::RelayFullCsit,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            TableRow::Gmac => "gmac",
            TableRow::CribbingMac => "cribbing-mac",
            TableRow::RelayPartialDf => "relay-partial-df",
            TableRow::PartialCsitMac => "partial-csit-mac",
            TableRow::OneCribbingInformedEncoder => "one-cribbing-informed-encoder",
            TableRow::CribbingPartialCsit => "cribbing-partial-csit",
            TableRow::RelayCsitAtSource => "relay-csit-at-source",
            TableRow::RelayCsitAtRelay => "relay-csit-at-relay",
            TableRow::RelayDegradedCsit => "relay-degraded-csit",
            TableRow::RelayFullCsit => "relay-full-csit",
        }
    }

    pub fn from_tag(s: &str) -> Option<TableRow> {
        TableRow::ALL.into_iter().find(|r| r.tag() == s)
    }

    pub fn layout(self) -> Layout {
        use Role::*;
        use Var::*;
        let mut roles = [Free; NUM_VARS];
        let mut set = |v: Var, r: Role| roles[v.index()] = r;
        let mut message2_empty = false;
        match self {
            TableRow::Gmac => {
                for s in [S0, S1, S2] {
                    set(s, Empty);
                }
                set(V13, Copy(X1));
                set(V23, Copy(X2));
            }
            TableRow::CribbingMac => {
                for v in [S0, S1, S2, V13, V23] {
                    set(v, Empty);
                }
                set(X1, Copy(V1));
                set(X2, Copy(V2));
                set(Y1, Copy(X2));
                set(Y2, Copy(X1));
            }
            TableRow::RelayPartialDf => {
                for v in [S0, S1, S2, Y1, V2, V23] {
                    set(v, Empty);
                }
                set(X2, Copy(U));
                set(V13, Copy(X1));
                message2_empty = true;
            }
            TableRow::PartialCsitMac => {
                for v in [U, V1, V2, Y1, Y2] {
                    set(v, Empty);
                }
            }
            TableRow::OneCribbingInformedEncoder => {
                for v in [S0, S1, Y1, V2, V13] {
                    set(v, Empty);
                }
                set(Y2, Copy(X1));
                set(X1, Copy(V1));
            }
            TableRow::CribbingPartialCsit => {
                set(V13, Empty);
                set(V23, Empty);
                set(Y1, Copy(X2));
                set(Y2, Copy(X1));
            }
            TableRow::RelayCsitAtSource => {
                for v in [S0, S2, Y1, V2, V23] {
                    set(v, Empty);
                }
                set(X2, Copy(U));
                message2_empty = true;
            }
            TableRow::RelayCsitAtRelay => {
                for v in [S0, S1, Y1, V13, V2] {
                    set(v, Empty);
                }
                set(X1, Copy(V1));
                message2_empty = true;
            }
            TableRow::RelayDegradedCsit => {
                for v in [S2, Y1, V2, V13, V23] {
                    set(v, Empty);
                }
                message2_empty = true;
            }
            TableRow::RelayFullCsit => {
                for v in [S1, S2, Y1, V2, V23] {
                    set(v, Empty);
                }
                message2_empty = true;
            }
        }
        Layout { roles, message2_empty }
    }
}

impl Layout {
    pub fn role(&self, v: Var) -> Role {
        self.roles[v.index()]
    }

    /// Alphabet sizes with `alphabet` symbols for every free variable.
    pub fn sizes(&self, alphabet: usize) -> [usize; NUM_VARS] {
        let mut sizes = [1; NUM_VARS];
        for v in Var::ALL {
            sizes[v.index()] = self.resolve_size(v, alphabet);
        }
        sizes
    }

    fn resolve_size(&self, v: Var, alphabet: usize) -> usize {
        match self.role(v) {
            Role::Free => alphabet,
            Role::Empty => 1,
            Role::Copy(src) => self.resolve_size(src, alphabet),
        }
    }

    /// Build the pmf. For each factor and each assignment of its
    /// conditioning variables, `free` fills the distribution of the factor's
    /// free outputs (row-major in variable order). Copies and absent
    /// variables are filled in here.
    pub fn build<F>(&self, alphabet: usize, mut free: F) -> Result<JointPmf, DiscreteError>
    where
        F: FnMut(FactorId, &[usize], &mut [f64]),
    {
        let sizes = self.sizes(alphabet);
        JointPmf::from_factors(sizes, |f, cond, dist| {
            let outs = f.out();
            let free_vars: Vec<Var> = outs.iter().copied().filter(|v| self.role(*v) == Role::Free).collect();
            let width: usize = free_vars.iter().map(|v| sizes[v.index()]).product();
            let mut fdist = alloc::vec![0.0; width];
            if free_vars.is_empty() {
                fdist[0] = 1.0;
            } else {
                free(f, cond, &mut fdist);
            }
            dist.fill(0.0);
            let value_of = |v: Var, outs_vals: &[usize]| -> usize {
                if let Some(i) = f.cond().iter().position(|c| *c == v) {
                    cond[i]
                } else {
                    outs_vals[outs.iter().position(|o| *o == v).expect("copy source is in scope")]
                }
            };
            let mut vals = alloc::vec![0usize; outs.len()];
            for (fi, &mass) in fdist.iter().enumerate() {
                // place the free outputs
                let mut rem = fi;
                for v in free_vars.iter().rev() {
                    let s = sizes[v.index()];
                    vals[outs.iter().position(|o| o == v).unwrap()] = rem % s;
                    rem /= s;
                }
                for (i, v) in outs.iter().enumerate() {
                    match self.role(*v) {
                        Role::Empty => vals[i] = 0,
                        Role::Copy(src) => vals[i] = value_of(src, &vals),
                        Role::Free => {}
                    }
                }
                let idx = outs.iter().zip(&vals).fold(0, |acc, (v, x)| acc * sizes[v.index()] + x);
                dist[idx] += mass;
            }
        })
    }

    /// A pmf whose free conditionals are drawn uniformly from the simplex.
    pub fn random<R: RngCore>(&self, alphabet: usize, rng: &mut R) -> Result<JointPmf, DiscreteError> {
        self.build(alphabet, |_, _, d| random_row(rng, d))
    }

    /// Bounds with the user-2 message pinned to zero where the layout says so.
    pub fn region(&self, p: &JointPmf) -> Result<(Theorem1Bounds, RateRegion2D), DiscreteError> {
        let b = theorem1_bounds(p)?;
        let mut poly = b.to_polytope();
        if self.message2_empty {
            pin_user2(&mut poly);
        }
        Ok((b, poly.project()?))
    }
}

/// Uniform draw on the probability simplex (normalized exponentials).
fn random_row<R: RngCore>(rng: &mut R, d: &mut [f64]) {
    for x in d.iter_mut() {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        *x = -libm::log(1.0 - u);
    }
    let t: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= t);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{entropy, validate_factorization, VarSet};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_row_builds_admissible_pmfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for row in TableRow::ALL {
            let lay = row.layout();
            let p = lay.random(2, &mut rng).unwrap();
            assert!(validate_factorization(&p).is_empty(), "{row:?}");
            let (b, r) = lay.region(&p).unwrap();
            assert!(b.to_array().iter().all(|x| x.is_finite() && *x >= 0.0));
            if lay.message2_empty {
                assert!(r.max_r2() < 1e-12, "{row:?}");
            }
        }
    }

    #[test]
    fn tags_round_trip() {
        for row in TableRow::ALL {
            assert_eq!(TableRow::from_tag(row.tag()), Some(row));
        }
        assert_eq!(TableRow::from_tag("nope"), None);
    }

    #[test]
    fn copies_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = TableRow::CribbingMac.layout().random(2, &mut rng).unwrap();
        let h = |a: &[Var], c: &[Var]| entropy(&p, VarSet::of(a).union(VarSet::of(c))) - entropy(&p, VarSet::of(c));
        assert!(h(&[Var::Y2], &[Var::X1]) < 1e-12);
        assert!(h(&[Var::X2], &[Var::V2]) < 1e-12);
        assert!(h(&[Var::Y3], &[]) > 0.0);
    }

    #[test]
    fn gmac_without_states_has_no_penalties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lay = TableRow::Gmac.layout();
        for _ in 0..5 {
            let p = lay.random(2, &mut rng).unwrap();
            let (b, _) = lay.region(&p).unwrap();
            assert_eq!(b.delta_minus, [0.0, 0.0]);
        }
    }
}
