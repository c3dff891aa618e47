//! Finite-alphabet distributions from configuration entries.

use std::collections::BTreeMap;

use gmac_core::discrete::table1::TableRow;
use gmac_core::discrete::{FactorId, JointPmf, Var, NUM_VARS};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::PmfSource;

/// Key of a factor table in a `factors` entry.
pub fn factor_name(f: FactorId) -> &'static str {
    match f {
        FactorId::CommonState => "common_state",
        FactorId::State1 => "state1",
        FactorId::State2 => "state2",
        FactorId::Cooperation => "cooperation",
        FactorId::Fresh1 => "fresh1",
        FactorId::Fresh2 => "fresh2",
        FactorId::Encoder1 => "encoder1",
        FactorId::Encoder2 => "encoder2",
        FactorId::Channel => "channel",
    }
}

/// Distributions of one source and whether user 2 is silent in them.
#[derive(Debug, Clone)]
pub struct PmfFamily {
    pub label: String,
    pub pmfs: Vec<JointPmf>,
    pub message2_empty: bool,
}

fn sizes_of(map: &BTreeMap<String, usize>) -> Result<[usize; NUM_VARS], String> {
    let mut sizes = [1; NUM_VARS];
    for (name, &n) in map {
        let v = Var::from_name(name).ok_or_else(|| format!("unknown variable {name:?}"))?;
        sizes[v.index()] = n;
    }
    Ok(sizes)
}

/// Build the distributions of `src`. Fixtures are drawn from a generator
/// seeded with `seed` and the entry index, so a config always yields the
/// same family. Errors are config errors (malformed entry) given as text.
pub fn load(src: &PmfSource, index: usize, seed: u64) -> Result<PmfFamily, String> {
    match src {
        PmfSource::Dense { sizes, probs } => {
            let p = JointPmf::from_dense(sizes_of(sizes)?, probs.clone()).map_err(|e| e.to_string())?;
            Ok(PmfFamily { label: format!("dense-{index}"), pmfs: vec![p], message2_empty: false })
        }
        PmfSource::Factors { sizes, tables } => {
            let sizes = sizes_of(sizes)?;
            for key in tables.keys() {
                if !FactorId::ALL.iter().any(|f| factor_name(*f) == key) {
                    return Err(format!("unknown factor {key:?}"));
                }
            }
            let mut problem = None;
            let mut rows_seen: BTreeMap<&str, usize> = BTreeMap::new();
            let p = JointPmf::from_factors(sizes, |f, _cond, dist| {
                let name = factor_name(f);
                let r = rows_seen.entry(name).or_insert(0);
                let row = *r;
                *r += 1;
                match tables.get(name).and_then(|t| t.get(row)) {
                    Some(v) if v.len() == dist.len() => dist.copy_from_slice(v),
                    Some(v) => {
                        problem.get_or_insert(format!(
                            "factor {name} row {row} has {} entries, expected {}",
                            v.len(),
                            dist.len()
                        ));
                        dist.fill(1.0 / dist.len() as f64);
                    }
                    None if dist.len() == 1 => dist[0] = 1.0,
                    None => {
                        problem.get_or_insert(format!("factor {name} is missing row {row}"));
                        dist.fill(1.0 / dist.len() as f64);
                    }
                }
            });
            if let Some(msg) = problem {
                return Err(msg);
            }
            for (name, t) in tables {
                let used = rows_seen.get(name.as_str()).copied().unwrap_or(0);
                if t.len() != used {
                    return Err(format!("factor {name} has {} rows, expected {used}", t.len()));
                }
            }
            let p = p.map_err(|e| e.to_string())?;
            Ok(PmfFamily { label: format!("factors-{index}"), pmfs: vec![p], message2_empty: false })
        }
        PmfSource::Fixture { row, alphabet, count } => {
            let r = TableRow::from_tag(row).ok_or_else(|| format!("unknown fixture row {row:?}"))?;
            if *count == 0 {
                return Err("fixture count must be positive".into());
            }
            let lay = r.layout();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let pmfs = (0..*count)
                .map(|_| lay.random(*alphabet, &mut rng))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            Ok(PmfFamily { label: r.tag().to_string(), pmfs, message2_empty: lay.message2_empty })
        }
    }
}
