//! Random sampling of cones and semigroups for statistics on whether they
//! resolve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::Cone;
use crate::explorer::{find_cycles_within, Budget, DigraphStore, Mode};
use crate::int::Int;
use crate::semigroup::full_rank_normalize;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    pub entry_bound: i64,
    /// Applied to each sampled object separately.
    pub budget: Budget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SampleSummary {
    pub rank: usize,
    pub mode: String,
    pub characteristic: u64,
    pub count: usize,
    pub seed: u64,
    pub entry_bound: i64,
    pub distribution: String,
    /// Complete, acyclic and without barren vertices.
    pub resolved: usize,
    pub budget_exhausted: usize,
    pub with_cycles: usize,
    pub with_barren: usize,
    /// Least key on each distinct cycle found, sorted.
    pub cycle_keys: Vec<String>,
    pub store_vertices: usize,
}

/// Draws `count` objects matching the store's mode and rank and explores
/// each one in the shared store.
///
/// Each object starts from `rank..=rank + 2` generator columns with entries
/// uniform in `[-entry_bound, entry_bound]`, redrawn until the generated
/// cone is pointed and full-dimensional. In Nash mode the semigroup is then
/// rewritten in coordinates of the lattice its generators span.
pub fn sample_random(store: &mut DigraphStore, config: &SampleConfig) -> Result<SampleSummary> {
    let meta = store.meta();
    let n = meta.rank;
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "sampling rank must be 2..=5, got {n}"
        )));
    }
    if config.entry_bound < 1 {
        return Err(Error::InvalidArgument(
            "entry bound must be at least 1".into(),
        ));
    }
    let mut summary = SampleSummary {
        rank: n,
        mode: meta.mode.to_string(),
        characteristic: meta.characteristic.value(),
        count: config.count,
        seed: config.seed,
        entry_bound: config.entry_bound,
        distribution: format!(
            "columns uniform in {n}..={}, entries uniform in [-{b}, {b}], rejected unless pointed and full-dimensional",
            n + 2,
            b = config.entry_bound
        ),
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cycle_keys = std::collections::BTreeSet::new();
    for _ in 0..config.count {
        let start = loop {
            let k = rng.gen_range(n..=n + 2);
            let cols: Vec<Vec<Int>> = (0..k)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            Int::small(rng.gen_range(-config.entry_bound..=config.entry_bound))
                        })
                        .collect()
                })
                .collect();
            let cone = Cone::from_generators(n, &cols)?;
            if !cone.is_pointed() || !cone.is_full_dimensional() {
                continue;
            }
            break match meta.mode {
                Mode::Normalized => store.seed_cone(&cone)?,
                Mode::Nash => {
                    let (s, _) = full_rank_normalize(n, &cols)?;
                    store.seed_semigroup(&s)?
                }
            };
        };
        if !store
            .resolution_subgraph(&start, &config.budget)?
            .is_complete()
        {
            summary.budget_exhausted += 1;
            continue;
        }
        let reachable = store.reachable(&start);
        let cycles = find_cycles_within(store, &reachable, usize::MAX);
        let barren = reachable
            .iter()
            .any(|k| store.barren_vertices().contains(k));
        if !cycles.is_empty() {
            summary.with_cycles += 1;
            cycle_keys.extend(cycles.into_iter().map(|c| c.vertices[0].clone()));
        } else if barren {
            summary.with_barren += 1;
        } else {
            summary.resolved += 1;
        }
    }
    summary.cycle_keys = cycle_keys.into_iter().collect();
    summary.store_vertices = store.vertex_count();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::StoreMeta;
    use crate::nash::Characteristic;

    fn store(mode: Mode, rank: usize) -> DigraphStore {
        DigraphStore::new(StoreMeta {
            mode,
            characteristic: Characteristic::ZERO,
            rank,
        })
    }

    fn config(count: usize, seed: u64) -> SampleConfig {
        SampleConfig {
            count,
            seed,
            entry_bound: 5,
            budget: Budget::new(5_000, 60.0).unwrap(),
        }
    }

    #[test]
    fn empty_sample() {
        let s = sample_random(&mut store(Mode::Normalized, 2), &config(0, 1)).unwrap();
        assert_eq!((s.resolved, s.budget_exhausted, s.with_cycles), (0, 0, 0));
    }

    #[test]
    fn reproducible() {
        let a = sample_random(&mut store(Mode::Nash, 2), &config(10, 42)).unwrap();
        let b = sample_random(&mut store(Mode::Nash, 2), &config(10, 42)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.resolved, 10);
    }

    #[test]
    fn parameters_validated() {
        assert!(sample_random(&mut store(Mode::Nash, 1), &config(1, 0)).is_err());
        let mut c = config(1, 0);
        c.entry_bound = 0;
        assert!(sample_random(&mut store(Mode::Nash, 2), &c).is_err());
    }
}
