//! Nash blowups of semigroups, normalized Nash blowups of cones and the
//! Nash subdivision of a cone in `N`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_cone, canonical_semigroup, CanonicalKey};
use crate::cone::{require_pointed_full, Cone, LatticePolyhedron};
use crate::hilbert::hilbert_basis;
use crate::int::Int;
use crate::linalg::{det_is_unit_mod, det_rows, is_prime, rank_of_vectors};
use crate::semigroup::AffineSemigroup;
use crate::{par, Error, Result};

/// Default bound on the number of bases in the non-normalized blowup.
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// Characteristic of the base field: 0 or a prime.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(try_from = "u64", into = "u64")]
pub struct Characteristic(u64);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    pub fn new(p: u64) -> Result<Self> {
        if p == 0 || is_prime(p) {
            Ok(Characteristic(p))
        } else {
            Err(Error::InvalidCharacteristic(p))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Characteristic {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Characteristic::new(p)
    }
}

impl From<Characteristic> for u64 {
    fn from(p: Characteristic) -> u64 {
        p.0
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All `n`-subsets of `h` forming a basis of `k^n`, as sorted index lists in
/// lexicographic order.
pub fn enumerate_bases(h: &[Vec<Int>], p: Characteristic) -> Result<Vec<Vec<usize>>> {
    let n = h.first().map_or(0, Vec::len);
    let found = rank_of_vectors(h);
    if n == 0 || found < n {
        return Err(Error::RankDeficient { expected: n, found });
    }
    let per_first: Vec<Vec<Vec<usize>>> = par::map_range(h.len(), |first| {
        let mut out = Vec::new();
        let mut current = vec![first];
        extend_bases(h, n, p.0, &mut current, &mut out);
        out
    });
    Ok(per_first.into_iter().flatten().collect())
}

fn extend_bases(
    h: &[Vec<Int>],
    n: usize,
    p: u64,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == n {
        let rows: Vec<Vec<Int>> = current.iter().map(|&i| h[i].clone()).collect();
        if det_is_unit_mod(&det_rows(&rows), p) {
            out.push(current.clone());
        }
        return;
    }
    let last = *current.last().expect("nonempty prefix");
    // leave room for the remaining picks
    for next in last + 1..=h.len() - (n - current.len()) {
        current.push(next);
        extend_bases(h, n, p, current, out);
        current.pop();
    }
}

/// Sums of the bases inside `h`, deduplicated and sorted.
pub fn basis_sums(h: &[Vec<Int>], p: Characteristic) -> Result<Vec<Vec<Int>>> {
    let n = h.first().map_or(0, Vec::len);
    let sums: BTreeSet<Vec<Int>> = enumerate_bases(h, p)?
        .iter()
        .map(|b| {
            (0..n)
                .map(|j| b.iter().map(|&i| h[i][j].clone()).sum())
                .collect()
        })
        .collect();
    Ok(sums.into_iter().collect())
}

/// Charts of the Nash blowup of `s`: the pointed semigroups generated by the
/// exchange sets of each basis, minimally generated, one per distinct
/// generating set (not yet identified up to equivalence).
///
/// Fails with `TooManyBases` when the Hilbert basis holds more than `cap`
/// bases.
pub fn nash_charts(
    s: &AffineSemigroup,
    p: Characteristic,
    cap: usize,
) -> Result<Vec<AffineSemigroup>> {
    require_pointed_full(s.hull())?;
    let h = s.generators();
    let n = s.rank();
    let bases = enumerate_bases(h, p)?;
    if bases.len() > cap {
        return Err(Error::TooManyBases {
            count: bases.len(),
            cap,
        });
    }
    let lookup: HashSet<&[usize]> = bases.iter().map(Vec::as_slice).collect();
    let generator_sets: Vec<Vec<Vec<Int>>> = par::map(&bases, |basis| {
        let mut g: BTreeSet<Vec<Int>> = h.iter().cloned().collect();
        for (gi, gv) in h.iter().enumerate() {
            if basis.contains(&gi) {
                continue;
            }
            for (pos, &hi) in basis.iter().enumerate() {
                let mut swapped = basis.clone();
                swapped[pos] = gi;
                swapped.sort_unstable();
                if lookup.contains(swapped.as_slice()) {
                    g.insert(gv.iter().zip(&h[hi]).map(|(a, b)| a - b).collect());
                }
            }
        }
        g.into_iter().collect()
    });
    let distinct: Vec<Vec<Vec<Int>>> = generator_sets
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let charts: Vec<Result<Option<AffineSemigroup>>> = par::map(&distinct, |g| {
        let hull = Cone::from_generators(n, g)?;
        if !hull.is_pointed() {
            return Ok(None);
        }
        AffineSemigroup::with_hull(g, hull).map(Some)
    });
    let mut out: Vec<AffineSemigroup> = charts
        .into_iter()
        .filter_map(Result::transpose)
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.generators().cmp(b.generators()));
    out.dedup();
    Ok(out)
}

/// Children of `s` in the Nash digraph: its charts up to equivalence, keyed
/// and sorted by canonical key.
pub fn nash_children(
    s: &AffineSemigroup,
    p: Characteristic,
    cap: usize,
) -> Result<Vec<(CanonicalKey, AffineSemigroup)>> {
    let charts = nash_charts(s, p, cap)?;
    let keyed = par::map(&charts, |c| {
        Ok(Some((canonical_semigroup(c)?.key, c.clone())))
    });
    collect_unique(keyed)
}

/// Children of a pointed full-dimensional cone `c` in `M` under the
/// normalized Nash blowup: the feasible cones at the vertices of
/// `Conv(B) + c`, keyed and sorted by canonical key.
pub fn normalized_nash_children(c: &Cone, p: Characteristic) -> Result<Vec<(CanonicalKey, Cone)>> {
    let n = c.ambient_dim();
    let charts: Vec<Result<Option<(CanonicalKey, Cone)>>> =
        par::map(&vertex_normals(c, p)?, |normals| {
            let feasible = Cone::from_generators(n, normals)?.dual();
            let key = canonical_cone(&feasible)?.key;
            Ok(Some((key, feasible)))
        });
    collect_unique(charts)
}

/// For each vertex of `Conv(B) + c`, the normals of the facets through it.
fn vertex_normals(c: &Cone, p: Characteristic) -> Result<Vec<Vec<Vec<Int>>>> {
    require_pointed_full(c)?;
    let h = hilbert_basis(c)?;
    let sums = basis_sums(&h, p)?;
    let poly = LatticePolyhedron::new(sums, c.clone())?;
    Ok(poly
        .vertex_cones()?
        .into_iter()
        .map(|v| v.normals)
        .collect())
}

fn collect_unique<T>(
    items: Vec<Result<Option<(CanonicalKey, T)>>>,
) -> Result<Vec<(CanonicalKey, T)>> {
    let mut out: BTreeMap<CanonicalKey, T> = BTreeMap::new();
    for item in items {
        if let Some((k, v)) = item? {
            out.entry(k).or_insert(v);
        }
    }
    Ok(out.into_iter().collect())
}

/// A finite collection of full-dimensional cones in `N`.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient: usize,
    cones: Vec<Cone>,
}

impl Fan {
    pub fn new(ambient: usize, mut cones: Vec<Cone>) -> Self {
        cones.sort_by(|a, b| a.rays().cmp(b.rays()));
        Fan { ambient, cones }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Checks that the cones subdivide `sigma`: each lies in `sigma`, any two
    /// meet in a common face, and every facet of a cone is either shared with
    /// exactly one other cone or lies on the boundary of `sigma`.
    pub fn check_subdivision_of(&self, sigma: &Cone) -> std::result::Result<(), String> {
        if self.cones.is_empty() {
            return Err("no cones".into());
        }
        for c in &self.cones {
            if !c.is_pointed() || !c.is_full_dimensional() {
                return Err(format!(
                    "cone {:?} is not pointed and full-dimensional",
                    c.rays()
                ));
            }
            if !sigma.contains_cone(c) {
                return Err(format!("cone {:?} leaves the subdivided cone", c.rays()));
            }
        }
        for (i, a) in self.cones.iter().enumerate() {
            for b in &self.cones[i + 1..] {
                if a == b {
                    return Err(format!("cone {:?} repeated", a.rays()));
                }
                let common = a.intersection(b).map_err(|e| e.to_string())?;
                if !a.has_face(&common) || !b.has_face(&common) {
                    return Err(format!(
                        "cones {:?} and {:?} do not meet in a common face",
                        a.rays(),
                        b.rays()
                    ));
                }
            }
        }
        let mut facet_count: BTreeMap<Vec<Vec<Int>>, usize> = BTreeMap::new();
        for c in &self.cones {
            for f in c.facets() {
                let rays: Vec<Vec<Int>> = c
                    .rays()
                    .iter()
                    .filter(|r| crate::int::dot(f, r).is_zero())
                    .cloned()
                    .collect();
                *facet_count.entry(rays).or_default() += 1;
            }
        }
        for (rays, count) in facet_count {
            let on_boundary = sigma
                .facets()
                .iter()
                .any(|f| rays.iter().all(|r| crate::int::dot(f, r).is_zero()));
            let ok = if on_boundary { count == 1 } else { count == 2 };
            if !ok {
                return Err(format!("facet {rays:?} is covered {count} times"));
            }
        }
        Ok(())
    }
}

/// Nash subdivision of a pointed full-dimensional cone `sigma` in `N`.
pub fn nash_subdivision(sigma: &Cone, p: Characteristic) -> Result<Fan> {
    require_pointed_full(sigma)?;
    let n = sigma.ambient_dim();
    let cones = vertex_normals(&sigma.dual(), p)?
        .iter()
        .map(|normals| Cone::from_generators(n, normals))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fan::new(n, cones))
}

/// `Cone(e_1, ..., e_{n-1}, (1, ..., 1, j))`.
pub fn reeves_cone(n: usize, j: u64) -> Result<Cone> {
    if n < 2 || j < 1 {
        return Err(Error::InvalidArgument(format!(
            "Reeves cone needs n >= 2 and j >= 1, got n = {n}, j = {j}"
        )));
    }
    let mut gens: Vec<Vec<Int>> = (0..n - 1)
        .map(|i| (0..n).map(|k| Int::from(u64::from(i == k))).collect())
        .collect();
    let mut last = vec![Int::ONE; n];
    last[n - 1] = Int::from(j);
    gens.push(last);
    Cone::from_generators(n, &gens)
}
