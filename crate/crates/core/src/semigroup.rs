//! Affine semigroups given by generators, minimal generating sets,
//! membership and normalization of the generated lattice.

use std::collections::{BTreeSet, HashSet};

use crate::cone::Cone;
use crate::hilbert::{adjugate, hilbert_basis};
use crate::int::{dot, Int};
use crate::linalg::{determinant, hermite_normal_form, rank_of_vectors};
use crate::matrix::IntMatrix;
use crate::{Error, Result};

/// A finitely generated submonoid of `Z^n` with pointed full-dimensional
/// hull, stored through its (unique) minimal generating set.
#[derive(Clone, Debug)]
pub struct AffineSemigroup {
    generators: Vec<Vec<Int>>,
    hull: Cone,
}

impl PartialEq for AffineSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for AffineSemigroup {}

impl AffineSemigroup {
    /// The semigroup generated by `generators`, reduced to its minimal
    /// generating set.
    pub fn new(rank: usize, generators: &[Vec<Int>]) -> Result<Self> {
        let hull = Cone::from_generators(rank, generators)?;
        Self::with_hull(generators, hull)
    }

    /// As [`AffineSemigroup::new`] with the hull `Cone(generators)` given.
    pub(crate) fn with_hull(generators: &[Vec<Int>], hull: Cone) -> Result<Self> {
        let generators = minimize(generators, &hull)?;
        Ok(AffineSemigroup { generators, hull })
    }

    /// Generated by the columns of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Result<Self> {
        Self::new(m.rows(), &m.columns())
    }

    /// Wraps a generating set already known to be minimal.
    pub(crate) fn from_minimal(rank: usize, generators: Vec<Vec<Int>>) -> Result<Self> {
        let hull = Cone::from_generators(rank, &generators)?;
        let mut generators = generators;
        generators.sort();
        Ok(AffineSemigroup { generators, hull })
    }

    /// The saturated semigroup `C ∩ Z^n` of a pointed full-dimensional cone.
    pub fn saturation_of(cone: &Cone) -> Result<Self> {
        Ok(AffineSemigroup {
            generators: hilbert_basis(cone)?,
            hull: cone.clone(),
        })
    }

    pub fn rank(&self) -> usize {
        self.hull.ambient_dim()
    }

    /// Minimal generators, sorted lexicographically.
    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.generators).expect("nonempty generating set")
    }

    pub fn hull(&self) -> &Cone {
        &self.hull
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        Membership::new(&self.generators, &self.hull).test(v)
    }

    /// Equal to `Cone(S) ∩ Z^n`.
    pub fn is_saturated(&self) -> bool {
        hilbert_basis(&self.hull).is_ok_and(|h| h == self.generators)
    }

    /// Generated by a basis of `Z^n`.
    pub fn is_unimodular(&self) -> bool {
        self.generators.len() == self.rank()
            && determinant(&self.generator_matrix()).is_ok_and(|d| d.abs().is_one())
    }
}

/// Graded depth-first membership test with memoization.
///
/// Generators may be added between queries as long as they come in
/// nondecreasing grade: a point that failed can only become a member through
/// a generator of grade at most its own.
struct Membership<'a> {
    generators: Vec<Vec<Int>>,
    hull: &'a Cone,
    failed: HashSet<Vec<Int>>,
}

impl<'a> Membership<'a> {
    fn new(generators: &[Vec<Int>], hull: &'a Cone) -> Self {
        let w = hull.grading();
        let mut generators = generators.to_vec();
        generators.sort_by_key(|g| dot(&w, g));
        Membership {
            generators,
            hull,
            failed: HashSet::new(),
        }
    }

    fn add(&mut self, g: Vec<Int>) {
        self.failed.remove(&g);
        self.generators.push(g);
    }

    fn test(&mut self, v: &[Int]) -> bool {
        if v.iter().all(Int::is_zero) {
            return true;
        }
        if !self.hull.contains(v) || self.failed.contains(v) {
            return false;
        }
        // large steps first reach zero sooner
        for i in (0..self.generators.len()).rev() {
            let rest: Vec<Int> = v
                .iter()
                .zip(&self.generators[i])
                .map(|(a, b)| a - b)
                .collect();
            if self.hull.contains(&rest) && self.test(&rest) {
                return true;
            }
        }
        self.failed.insert(v.to_vec());
        false
    }
}

/// Whether `v` lies in the semigroup generated by `generators`.
pub fn semigroup_member(generators: &[Vec<Int>], v: &[Int]) -> Result<bool> {
    let n = v.len();
    let gens: Vec<Vec<Int>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if gens.is_empty() {
        return Ok(v.iter().all(Int::is_zero));
    }
    let hull = Cone::from_generators(n, &gens)?;
    if !hull.is_pointed() {
        return Err(Error::NotPointed);
    }
    Ok(Membership::new(&gens, &hull).test(v))
}

/// The unique minimal generating set of the semigroup generated by
/// `generators`, sorted lexicographically. The hull must be pointed and
/// full-dimensional.
pub fn minimal_generators(rank: usize, generators: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    minimize(generators, &Cone::from_generators(rank, generators)?)
}

fn minimize(generators: &[Vec<Int>], hull: &Cone) -> Result<Vec<Vec<Int>>> {
    let gens: Vec<Vec<Int>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !hull.is_pointed() {
        return Err(Error::NotPointed);
    }
    if !hull.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let w = hull.grading();
    let mut graded: Vec<(Int, Vec<Int>)> = gens.into_iter().map(|g| (dot(&w, &g), g)).collect();
    graded.sort();
    let mut membership = Membership::new(&[], hull);
    for (_, g) in graded {
        if !membership.test(&g) {
            membership.add(g);
        }
    }
    let mut kept = membership.generators;
    kept.sort();
    Ok(kept)
}

/// Coordinates with respect to a basis `B` of a full-rank lattice:
/// `x' = numerator * x / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeChange {
    pub numerator: IntMatrix,
    pub denominator: Int,
}

impl LatticeChange {
    /// Image of a vector of the lattice; fails if `x` is not in it.
    pub fn apply(&self, x: &[Int]) -> Result<Vec<Int>> {
        self.numerator
            .apply(x)
            .into_iter()
            .map(|c| {
                if c.mod_floor(&self.denominator).is_zero() {
                    Ok(c.div_exact(&self.denominator))
                } else {
                    Err(Error::InvalidArgument("vector outside the lattice".into()))
                }
            })
            .collect()
    }
}

/// Rewrites the semigroup generated by `generators` in coordinates of the
/// lattice it generates, so that the result generates `Z^n` as a group.
pub fn full_rank_normalize(
    rank: usize,
    generators: &[Vec<Int>],
) -> Result<(AffineSemigroup, LatticeChange)> {
    if generators.iter().any(|g| g.len() != rank) {
        return Err(Error::Dimension("generator of wrong length".into()));
    }
    let found = rank_of_vectors(generators);
    if found != rank {
        return Err(Error::RankDeficient {
            expected: rank,
            found,
        });
    }
    // rows of the row-HNF of G^T form a basis of ZG
    let gt = IntMatrix::from_rows(generators.to_vec())?;
    let (h, _) = hermite_normal_form(&gt);
    let basis: Vec<Vec<Int>> = (0..rank).map(|i| h.row(i).to_vec()).collect();
    let b = IntMatrix::from_columns(&basis)?;
    let det = determinant(&b)?;
    let mut numerator = adjugate(&b);
    let mut denominator = det;
    if denominator.is_negative() {
        for i in 0..rank {
            numerator.negate_row(i);
        }
        denominator = -denominator;
    }
    let change = LatticeChange {
        numerator,
        denominator,
    };
    let images = generators
        .iter()
        .map(|g| change.apply(g))
        .collect::<Result<Vec<_>>>()?;
    Ok((AffineSemigroup::new(rank, &images)?, change))
}
