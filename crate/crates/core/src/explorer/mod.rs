//! Persistent exploration of the Nash digraphs: a store of canonical
//! vertices and edges, breadth-first expansion under budgets, cycle search
//! and DOT export.

mod cycles;
mod dot;
mod store;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

pub use cycles::{find_cycles, find_cycles_within, Cycle};
pub use dot::export_dot;
pub use store::{DigraphStore, Mode, StoreMeta, FORMAT_VERSION};

use crate::canonical::{canonical_cone, canonical_semigroup};
use crate::cone::Cone;
use crate::matrix::IntMatrix;
use crate::nash::{nash_children, normalized_nash_children};
use crate::semigroup::AffineSemigroup;
use crate::{par, Error, Result};

/// Limits for one exploration run.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_seconds: f64,
}

impl Budget {
    pub fn new(max_vertices: usize, max_seconds: f64) -> Result<Self> {
        if max_vertices == 0 || max_seconds.is_nan() || max_seconds <= 0.0 {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        Ok(Budget {
            max_vertices,
            max_seconds,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// Every vertex reachable from the start has been expanded; counts are
    /// for that reachable subgraph.
    Complete {
        vertex_count: usize,
        edge_count: usize,
    },
    /// Stopped early; `frontier` lists the reachable vertices still
    /// unexpanded.
    BudgetExhausted { frontier: Vec<String> },
}

impl Status {
    pub fn is_complete(&self) -> bool {
        matches!(self, Status::Complete { .. })
    }
}

/// Result of a level-bounded exploration.
#[derive(Clone, Debug)]
pub struct Levels {
    pub levels: Vec<Vec<String>>,
    pub status: Status,
}

impl Levels {
    pub fn contains(&self, key: &str) -> bool {
        self.levels.iter().any(|l| l.iter().any(|k| k == key))
    }

    /// Distance from the start to `key`, if met.
    pub fn depth_of(&self, key: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.iter().any(|k| k == key))
    }
}

/// Frontier vertices handed to the workers between budget checks.
const CHUNK: usize = 256;

impl DigraphStore {
    /// Inserts a cone (normalized mode) and returns its key.
    pub fn seed_cone(&mut self, cone: &Cone) -> Result<String> {
        self.check_seed(Mode::Normalized, cone.ambient_dim())?;
        let form = canonical_cone(cone)?;
        let key = form.key.to_string();
        self.insert_vertex(key.clone(), form.key.into_matrix());
        Ok(key)
    }

    /// Inserts a semigroup (Nash mode) and returns its key.
    pub fn seed_semigroup(&mut self, s: &AffineSemigroup) -> Result<String> {
        self.check_seed(Mode::Nash, s.rank())?;
        let form = canonical_semigroup(s)?;
        let key = form.key.to_string();
        self.insert_vertex(key.clone(), form.key.into_matrix());
        Ok(key)
    }

    /// Inserts the object generated by the columns of `m`, read as a cone or
    /// a semigroup according to the store's mode.
    pub fn seed_matrix(&mut self, m: &IntMatrix) -> Result<String> {
        match self.meta.mode {
            Mode::Normalized => self.seed_cone(&Cone::from_matrix(m)?),
            Mode::Nash => self.seed_semigroup(&AffineSemigroup::from_matrix(m)?),
        }
    }

    fn check_seed(&self, mode: Mode, rank: usize) -> Result<()> {
        if mode != self.meta.mode {
            return Err(Error::StoreMismatch(format!(
                "store holds {} vertices, got a {mode} object",
                self.meta.mode
            )));
        }
        if rank != self.meta.rank {
            return Err(Error::StoreMismatch(format!(
                "store has rank {}, got rank {rank}",
                self.meta.rank
            )));
        }
        Ok(())
    }

    /// Children of a stored vertex, computing and recording them if needed.
    pub fn expand(&mut self, key: &str) -> Result<Vec<String>> {
        if !self.is_expanded(key) {
            let payload = self
                .payload(key)
                .ok_or_else(|| Error::UnknownVertex(key.to_string()))?
                .clone();
            let children = compute_children(self, key, &payload)?;
            self.record(key, children)?;
        }
        Ok(self.children(key).into_iter().map(str::to_string).collect())
    }

    fn record(&mut self, key: &str, children: Vec<(String, IntMatrix)>) -> Result<()> {
        if children.is_empty() {
            self.barren.insert(key.to_string());
        }
        for (k, m) in children {
            self.insert_vertex(k.clone(), m);
            self.insert_edge(key, &k)?;
        }
        Ok(())
    }

    /// Breadth-first expansion of everything reachable from `start`.
    ///
    /// Children of one level are computed in parallel and merged in key
    /// order, so the resulting store does not depend on the thread count.
    /// Vertices expanded by earlier runs are walked, not recomputed.
    pub fn resolution_subgraph(&mut self, start: &str, budget: &Budget) -> Result<Status> {
        Ok(self.bfs(start, budget, usize::MAX)?.status)
    }

    /// Like [`resolution_subgraph`](Self::resolution_subgraph) but stops
    /// after expanding `depth` levels. `levels[k]` holds the vertices first
    /// met at distance `k` from `start`.
    pub fn descendants(&mut self, start: &str, depth: usize, budget: &Budget) -> Result<Levels> {
        self.bfs(start, budget, depth)
    }

    fn bfs(&mut self, start: &str, budget: &Budget, depth: usize) -> Result<Levels> {
        if !self.contains(start) {
            return Err(Error::UnknownVertex(start.to_string()));
        }
        let deadline = Instant::now() + Duration::from_secs_f64(budget.max_seconds.min(1e9));
        let mut visited: BTreeSet<String> = BTreeSet::from([start.to_string()]);
        let mut levels = vec![vec![start.to_string()]];
        while levels.len() <= depth {
            let frontier = levels.last().expect("nonempty");
            if frontier.is_empty() {
                levels.pop();
                let edge_count = visited.iter().map(|k| self.children(k).len()).sum();
                let status = Status::Complete {
                    vertex_count: visited.len(),
                    edge_count,
                };
                return Ok(Levels { levels, status });
            }
            let pending: Vec<(String, IntMatrix)> = frontier
                .iter()
                .filter(|k| !self.is_expanded(k))
                .map(|k| (k.clone(), self.vertices[k].clone()))
                .collect();
            for chunk in pending.chunks(CHUNK) {
                if visited.len() >= budget.max_vertices || Instant::now() >= deadline {
                    let status = self.exhausted(&visited);
                    return Ok(Levels { levels, status });
                }
                let store = &*self;
                let results = par::map(chunk, |(k, m)| compute_children(store, k, m));
                for ((k, _), children) in chunk.iter().zip(results) {
                    self.record(k, children?)?;
                }
            }
            let mut next = Vec::new();
            for k in frontier {
                for c in self.children(k) {
                    if visited.insert(c.to_string()) {
                        next.push(c.to_string());
                    }
                }
            }
            next.sort();
            levels.push(next);
        }
        let status = self.exhausted(&visited);
        Ok(Levels { levels, status })
    }

    fn exhausted(&self, visited: &BTreeSet<String>) -> Status {
        Status::BudgetExhausted {
            frontier: visited
                .iter()
                .filter(|k| !self.is_expanded(k))
                .cloned()
                .collect(),
        }
    }

    /// Keys reachable from `start` through known edges, including `start`.
    pub fn reachable(&self, start: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([start.to_string()]);
        let mut stack = vec![start.to_string()];
        while let Some(k) = stack.pop() {
            for c in self.children(&k) {
                if seen.insert(c.to_string()) {
                    stack.push(c.to_string());
                }
            }
        }
        seen
    }
}

/// Children of one vertex; pure, so it can run on any worker.
fn compute_children(
    store: &DigraphStore,
    key: &str,
    payload: &IntMatrix,
) -> Result<Vec<(String, IntMatrix)>> {
    let eps = store.epsilon_key();
    if key == eps {
        return Ok(vec![(eps, payload.clone())]);
    }
    let meta = store.meta;
    let keyed: Vec<(String, IntMatrix)> = match meta.mode {
        Mode::Normalized => {
            let cone = Cone::from_matrix(payload)?;
            normalized_nash_children(&cone, meta.characteristic)?
                .into_iter()
                .map(|(k, _)| (k.to_string(), k.into_matrix()))
                .collect()
        }
        Mode::Nash => {
            let s = AffineSemigroup::from_minimal(meta.rank, payload.columns())?;
            nash_children(&s, meta.characteristic, store.basis_cap)?
                .into_iter()
                .map(|(k, _)| (k.to_string(), k.into_matrix()))
                .collect()
        }
    };
    Ok(keyed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::ints;
    use crate::nash::Characteristic;

    fn meta(mode: Mode, rank: usize) -> StoreMeta {
        StoreMeta {
            mode,
            characteristic: Characteristic::ZERO,
            rank,
        }
    }

    fn budget() -> Budget {
        Budget::new(10_000, 60.0).unwrap()
    }

    #[test]
    fn epsilon_alone() {
        let mut s = DigraphStore::new(meta(Mode::Normalized, 2));
        let eps = s.epsilon_key();
        assert_eq!(s.expand(&eps).unwrap(), vec![eps.clone()]);
        assert_eq!(
            s.resolution_subgraph(&eps, &budget()).unwrap(),
            Status::Complete {
                vertex_count: 1,
                edge_count: 1
            }
        );
    }

    #[test]
    fn plane_cone_resolves() {
        let mut s = DigraphStore::new(meta(Mode::Normalized, 2));
        let c = Cone::from_generators(2, &[ints(&[1, 0]), ints(&[3, 5])]).unwrap();
        let start = s.seed_cone(&c).unwrap();
        let status = s.resolution_subgraph(&start, &budget()).unwrap();
        assert_eq!(
            status,
            Status::Complete {
                vertex_count: 3,
                edge_count: 4
            }
        );
        let mid = Cone::from_generators(2, &[ints(&[1, 0]), ints(&[1, 3])]).unwrap();
        let mid_key = canonical_cone(&mid).unwrap().key.to_string();
        let keys: BTreeSet<String> = s.vertex_keys().map(str::to_string).collect();
        assert_eq!(keys, BTreeSet::from([start, mid_key, s.epsilon_key()]));
    }

    #[test]
    fn budget_stops_early_and_resumes() {
        let mut s = DigraphStore::new(meta(Mode::Normalized, 2));
        let c = Cone::from_generators(2, &[ints(&[1, 0]), ints(&[7, 19])]).unwrap();
        let start = s.seed_cone(&c).unwrap();
        let status = s
            .resolution_subgraph(&start, &Budget::new(1, 60.0).unwrap())
            .unwrap();
        assert_eq!(
            status,
            Status::BudgetExhausted {
                frontier: vec![start.clone()]
            }
        );
        assert!(s
            .resolution_subgraph(&start, &budget())
            .unwrap()
            .is_complete());
        let before = s.vertex_count();
        assert!(s
            .resolution_subgraph(&start, &budget())
            .unwrap()
            .is_complete());
        assert_eq!(s.vertex_count(), before);
    }

    #[test]
    fn mode_and_rank_checked() {
        let mut s = DigraphStore::new(meta(Mode::Nash, 2));
        let c = Cone::from_generators(2, &[ints(&[1, 0]), ints(&[3, 5])]).unwrap();
        assert!(matches!(s.seed_cone(&c), Err(Error::StoreMismatch(_))));
        let t = AffineSemigroup::new(1, &[ints(&[2]), ints(&[3])]).unwrap();
        assert!(matches!(s.seed_semigroup(&t), Err(Error::StoreMismatch(_))));
        assert!(Budget::new(0, 1.0).is_err());
        assert!(Budget::new(1, 0.0).is_err());
    }

    #[test]
    fn cusp_in_nash_mode() {
        let mut s = DigraphStore::new(StoreMeta {
            mode: Mode::Nash,
            characteristic: Characteristic::new(3).unwrap(),
            rank: 1,
        });
        let start = s
            .seed_semigroup(&AffineSemigroup::new(1, &[ints(&[2]), ints(&[3])]).unwrap())
            .unwrap();
        assert!(s
            .resolution_subgraph(&start, &budget())
            .unwrap()
            .is_complete());
        assert!(s.has_edge(&start, &start));
        let cycles = find_cycles(&s, 10);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices, vec![start]);
    }
}
