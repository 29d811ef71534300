//! Canonical forms of cones and semigroups up to `GL_n(Z)`.
//!
//! A cone is keyed by the Hermite normal form of its primitive ray matrix,
//! maximized over all column orders. Columns are compared one at a time
//! (column-major lexicographic order), which lets the search fix columns
//! left to right and prune any branch whose prefix already loses. A semigroup
//! is keyed by pushing its minimal generators through every optimal transform
//! of its hull and taking the least resulting matrix, with columns sorted
//! colexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cone::{require_pointed_full, Cone};
use crate::int::Int;
use crate::linalg::{eliminate_below, reduce_above};
use crate::matrix::IntMatrix;
use crate::semigroup::AffineSemigroup;
use crate::{Error, Result};

/// Canonical representative of an equivalence class; equal keys mean
/// equivalent objects.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(IntMatrix);

impl CanonicalKey {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    /// Key of the unimodular class in rank `n`.
    pub fn unimodular(n: usize) -> CanonicalKey {
        CanonicalKey(IntMatrix::identity(n))
    }

    /// Wraps a matrix that is already in canonical form.
    pub fn from_canonical_matrix(m: IntMatrix) -> CanonicalKey {
        CanonicalKey(m)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        let entries: Vec<String> = m.entries().iter().map(Int::to_string).collect();
        write!(f, "{} x {}: {}", m.rows(), m.cols(), entries.join(","))
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({self})")
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            line: 1,
            message: format!("malformed key {s:?}: {m}"),
        };
        let (shape, body) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let (r, c) = shape.split_once('x').ok_or_else(|| bad("missing 'x'"))?;
        let r: usize = r.trim().parse().map_err(|_| bad("row count"))?;
        let c: usize = c.trim().parse().map_err(|_| bad("column count"))?;
        let vals = body
            .split(',')
            .map(|t| t.trim().parse::<Int>().map_err(|_| bad("entry")))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != r * c || r == 0 {
            return Err(bad("entry count does not match shape"));
        }
        let rows: Vec<Vec<Int>> = vals.chunks(c).map(<[Int]>::to_vec).collect();
        Ok(CanonicalKey(IntMatrix::from_rows(rows)?))
    }
}

/// Key together with a unimodular `U` taking the input to the key.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    pub transform: IntMatrix,
}

/// Canonical form of a pointed full-dimensional cone. The key's columns
/// are `U` applied to the rays, in the optimal order.
pub fn canonical_cone(cone: &Cone) -> Result<CanonicalForm> {
    require_pointed_full(cone)?;
    let (h, mut us) = optimal_transforms(cone.rays());
    Ok(CanonicalForm {
        key: CanonicalKey(h),
        transform: us.swap_remove(0),
    })
}

/// Canonical form of a semigroup with pointed full-dimensional hull.
pub fn canonical_semigroup(s: &AffineSemigroup) -> Result<CanonicalForm> {
    require_pointed_full(s.hull())?;
    let (_, us) = optimal_transforms(s.hull().rays());
    let mut best: Option<(IntMatrix, IntMatrix)> = None;
    for u in us {
        let mut cols: Vec<Vec<Int>> = s.generators().iter().map(|g| u.apply(g)).collect();
        cols.sort_by(|a, b| colex(a, b));
        let m = IntMatrix::from_columns(&cols)?;
        if best.as_ref().is_none_or(|(b, _)| m < *b) {
            best = Some((m, u));
        }
    }
    let (m, u) = best.expect("at least one optimal transform");
    Ok(CanonicalForm {
        key: CanonicalKey(m),
        transform: u,
    })
}

fn colex(a: &[Int], b: &[Int]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Objects with a canonical key.
pub trait Canonical {
    fn canonical_key(&self) -> Result<CanonicalKey>;
    fn ambient_rank(&self) -> usize;
}

impl Canonical for Cone {
    fn canonical_key(&self) -> Result<CanonicalKey> {
        Ok(canonical_cone(self)?.key)
    }

    fn ambient_rank(&self) -> usize {
        self.ambient_dim()
    }
}

impl Canonical for AffineSemigroup {
    fn canonical_key(&self) -> Result<CanonicalKey> {
        Ok(canonical_semigroup(self)?.key)
    }

    fn ambient_rank(&self) -> usize {
        self.rank()
    }
}

/// Whether two objects of the same kind are `GL_n(Z)`-equivalent.
pub fn are_equivalent<T: Canonical>(a: &T, b: &T) -> Result<bool> {
    if a.ambient_rank() != b.ambient_rank() {
        return Err(Error::Dimension("objects of different rank".into()));
    }
    Ok(a.canonical_key()? == b.canonical_key()?)
}

#[derive(Clone)]
struct Node {
    m: IntMatrix,
    u: IntMatrix,
    r: usize,
    used: Vec<bool>,
}

impl Node {
    /// Column `c` would become after being placed next.
    fn candidate(&self, c: usize) -> Vec<Int> {
        let n = self.m.rows();
        let mut g = Int::ZERO;
        for i in self.r..n {
            g = g.gcd(&self.m[(i, c)]);
        }
        let mut col = vec![Int::ZERO; n];
        if g.is_zero() {
            for (i, x) in col.iter_mut().enumerate().take(self.r) {
                *x = self.m[(i, c)].clone();
            }
        } else {
            for (i, x) in col.iter_mut().enumerate().take(self.r) {
                *x = self.m[(i, c)].mod_floor(&g);
            }
            col[self.r] = g;
        }
        col
    }

    fn commit(&mut self, c: usize) {
        self.used[c] = true;
        if self.r < self.m.rows() && eliminate_below(&mut self.m, &mut self.u, self.r, c) {
            reduce_above(&mut self.m, &mut self.u, self.r, c);
            self.r += 1;
        }
    }
}

struct Search {
    best: Option<Vec<Vec<Int>>>,
    transforms: Vec<IntMatrix>,
}

impl Search {
    fn visit(&mut self, node: &Node, prefix: &mut Vec<Vec<Int>>) {
        let k = node.used.len();
        if prefix.len() == k {
            match self
                .best
                .as_ref()
                .map(|b| prefix.as_slice().cmp(b.as_slice()))
            {
                Some(Ordering::Less) => {}
                Some(Ordering::Equal) => {
                    if !self.transforms.contains(&node.u) {
                        self.transforms.push(node.u.clone());
                    }
                }
                _ => {
                    self.best = Some(prefix.clone());
                    self.transforms = vec![node.u.clone()];
                }
            }
            return;
        }
        let cands: Vec<(usize, Vec<Int>)> = (0..k)
            .filter(|&c| !node.used[c])
            .map(|c| (c, node.candidate(c)))
            .collect();
        let top = cands
            .iter()
            .map(|(_, v)| v)
            .max()
            .expect("unused column")
            .clone();
        prefix.push(top.clone());
        let d = prefix.len();
        let losing = self
            .best
            .as_ref()
            .is_some_and(|b| prefix.as_slice() < &b[..d]);
        if !losing {
            for (c, v) in &cands {
                if *v == top {
                    let mut child = node.clone();
                    child.commit(*c);
                    self.visit(&child, prefix);
                }
            }
        }
        prefix.pop();
    }
}

/// The column-major greatest HNF over all column orders of `rays`, and every
/// distinct unimodular transform achieving it.
fn optimal_transforms(rays: &[Vec<Int>]) -> (IntMatrix, Vec<IntMatrix>) {
    let m = IntMatrix::from_columns(rays).expect("nonempty ray set");
    let n = m.rows();
    let root = Node {
        u: IntMatrix::identity(n),
        used: vec![false; m.cols()],
        m,
        r: 0,
    };
    let mut search = Search {
        best: None,
        transforms: Vec::new(),
    };
    search.visit(&root, &mut Vec::new());
    let h = IntMatrix::from_columns(&search.best.expect("search reaches a leaf")).expect("columns");
    (h, search.transforms)
}
