//! Rational polyhedral cones and lattice polyhedra `Conv(P) + C`.

use std::collections::BTreeSet;

use crate::dd::extreme_rays;
use crate::int::{dot, Int};
use crate::linalg::{hermite_normal_form, primitivize, rank_of_vectors, smith_normal_form};
use crate::matrix::IntMatrix;
use crate::{Error, Result};

/// A cone `Cone(G)` in `R^n`, kept in both representations.
///
/// For pointed cones `rays` are the primitive extreme rays; otherwise they
/// are the primitive generators the cone was built from. `facets` are inward
/// normals and `equations` span the orthogonal complement of the linear span.
/// All lists are sorted, so two descriptions of the same pointed cone are
/// identical.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient: usize,
    dim: usize,
    pointed: bool,
    rays: Vec<Vec<Int>>,
    facets: Vec<Vec<Int>>,
    equations: Vec<Vec<Int>>,
}

impl Cone {
    /// The cone generated by `generators` in `R^ambient`.
    pub fn from_generators(ambient: usize, generators: &[Vec<Int>]) -> Result<Cone> {
        if ambient == 0 {
            return Err(Error::Dimension(
                "ambient dimension must be positive".into(),
            ));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != ambient) {
            return Err(Error::Dimension(format!(
                "generator of length {} in ambient dimension {ambient}",
                g.len()
            )));
        }
        let gens: Vec<Vec<Int>> = generators
            .iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .map(|g| {
                let mut g = g.clone();
                primitivize(&mut g);
                g
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if gens.is_empty() {
            return Ok(Cone {
                ambient,
                dim: 0,
                pointed: true,
                rays: Vec::new(),
                facets: Vec::new(),
                equations: IntMatrix::identity(ambient).to_rows(),
            });
        }

        // Coordinates on the linear span: the first r rows of U map span(G)
        // isomorphically onto Q^r, the remaining rows are equations.
        let gm = IntMatrix::from_columns(&gens)?;
        let (h, u) = hermite_normal_form(&gm);
        let r = (0..h.rows())
            .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .count();
        let projected: Vec<Vec<Int>> = gens.iter().map(|g| u.apply(g)[..r].to_vec()).collect();
        let equations = if r < ambient {
            let rest = IntMatrix::from_rows((r..ambient).map(|i| u.row(i).to_vec()).collect())?;
            hermite_normal_form(&rest).0.to_rows()
        } else {
            Vec::new()
        };

        let lift = |f: &[Int]| -> Vec<Int> {
            let mut out: Vec<Int> = (0..ambient)
                .map(|j| (0..r).map(|i| &f[i] * &u[(i, j)]).sum())
                .collect();
            primitivize(&mut out);
            out
        };

        let dual = extreme_rays(&projected, r).unwrap_or_default();
        let pointed = rank_of_vectors(&dual) == r;
        let (rays, facets) = if pointed {
            let rays: Vec<Vec<Int>> = gens
                .iter()
                .zip(&projected)
                .filter(|(_, p)| {
                    let tight: Vec<Vec<Int>> = dual
                        .iter()
                        .filter(|f| dot(f, p).is_zero())
                        .cloned()
                        .collect();
                    tight.len() + 1 >= r && rank_of_vectors(&tight) + 1 == r
                })
                .map(|(g, _)| g.clone())
                .collect();
            (rays, dual.iter().map(|f| lift(f)).collect())
        } else {
            (gens.clone(), dual.iter().map(|f| lift(f)).collect())
        };
        let mut facets: Vec<Vec<Int>> = facets;
        facets.sort();
        facets.dedup();
        Ok(Cone {
            ambient,
            dim: r,
            pointed,
            rays,
            facets,
            equations,
        })
    }

    /// The cone generated by the columns of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Result<Cone> {
        Cone::from_generators(m.rows(), &m.columns())
    }

    /// The pointed cone `{x : <a, x> >= 0}`; fails with `NotPointed` if the
    /// inequalities leave a nonzero lineality space.
    pub fn from_inequalities(ambient: usize, inequalities: &[Vec<Int>]) -> Result<Cone> {
        if inequalities.iter().any(|a| a.len() != ambient) {
            return Err(Error::Dimension("inequality of wrong length".into()));
        }
        let rays = extreme_rays(inequalities, ambient).ok_or(Error::NotPointed)?;
        Cone::from_generators(ambient, &rays)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn facets(&self) -> &[Vec<Int>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<Int>] {
        &self.equations
    }

    /// Rays as matrix columns.
    pub fn ray_matrix(&self) -> Result<IntMatrix> {
        IntMatrix::from_columns(&self.rays)
    }

    pub fn is_simplicial(&self) -> bool {
        self.pointed && self.rays.len() == self.dim
    }

    /// Simplicial with rays extending to a basis of `Z^n`.
    pub fn is_unimodular(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.rays.is_empty() {
            return true;
        }
        let m = IntMatrix::from_columns(&self.rays).expect("nonempty rays");
        smith_normal_form(&m)
            .invariant_factors
            .iter()
            .all(Int::is_one)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        v.len() == self.ambient
            && self.facets.iter().all(|f| !dot(f, v).is_negative())
            && self.equations.iter().all(|e| dot(e, v).is_zero())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    /// `{u : <u, v> >= 0 for all v in self}`.
    pub fn dual(&self) -> Cone {
        let mut gens = self.facets.clone();
        for e in &self.equations {
            gens.push(e.clone());
            gens.push(e.iter().map(|x| -x).collect());
        }
        Cone::from_generators(self.ambient, &gens).expect("consistent dimensions")
    }

    /// Intersection of two pointed cones.
    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension("cones live in different spaces".into()));
        }
        let mut ineq: Vec<Vec<Int>> = self.facets.iter().chain(&other.facets).cloned().collect();
        for e in self.equations.iter().chain(&other.equations) {
            ineq.push(e.clone());
            ineq.push(e.iter().map(|x| -x).collect());
        }
        if ineq.is_empty() {
            return Err(Error::NotPointed);
        }
        Cone::from_inequalities(self.ambient, &ineq)
    }

    /// Whether `sub` is a face of this pointed cone.
    pub fn has_face(&self, sub: &Cone) -> bool {
        if !self.contains_cone(sub) {
            return false;
        }
        let supporting: Vec<&Vec<Int>> = self
            .facets
            .iter()
            .filter(|f| sub.rays.iter().all(|r| dot(f, r).is_zero()))
            .collect();
        self.rays
            .iter()
            .filter(|r| supporting.iter().all(|f| dot(f, r).is_zero()))
            .all(|r| sub.contains(r))
    }

    /// Smallest positive linear form on the cone: the sum of its facets.
    pub(crate) fn grading(&self) -> Vec<Int> {
        let mut w = vec![Int::ZERO; self.ambient];
        for f in &self.facets {
            for (a, b) in w.iter_mut().zip(f) {
                *a += b;
            }
        }
        w
    }

    fn require_pointed_full(&self) -> Result<()> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        Ok(())
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Cone) -> bool {
        self.ambient == other.ambient
            && self.dim == other.dim
            && self.contains_cone(other)
            && other.contains_cone(self)
    }
}

impl Eq for Cone {}

/// `Conv(points) + recession`.
#[derive(Clone, Debug)]
pub struct LatticePolyhedron {
    points: Vec<Vec<Int>>,
    recession: Cone,
}

/// A vertex together with the normals `a` of the facets `<a, x> >= b`
/// through it; these normals generate the dual of its feasible cone.
#[derive(Clone, Debug)]
pub(crate) struct VertexCone {
    pub vertex: Vec<Int>,
    pub normals: Vec<Vec<Int>>,
}

impl LatticePolyhedron {
    pub fn new(points: Vec<Vec<Int>>, recession: Cone) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument(
                "polyhedron needs at least one point".into(),
            ));
        }
        if points.iter().any(|p| p.len() != recession.ambient_dim()) {
            return Err(Error::Dimension(
                "point and recession cone dimensions differ".into(),
            ));
        }
        let points: Vec<Vec<Int>> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(LatticePolyhedron { points, recession })
    }

    pub fn points(&self) -> &[Vec<Int>] {
        &self.points
    }

    pub fn recession(&self) -> &Cone {
        &self.recession
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> Result<Vec<Vec<Int>>> {
        Ok(self.vertex_cones()?.into_iter().map(|v| v.vertex).collect())
    }

    /// The feasible cone `Cone(P - v) + recession` at a vertex `v`.
    pub fn feasible_cone(&self, v: &[Int]) -> Result<Cone> {
        if !self.vertices()?.iter().any(|x| x == v) {
            return Err(Error::InvalidArgument("point is not a vertex".into()));
        }
        let mut gens: Vec<Vec<Int>> = self
            .points
            .iter()
            .map(|p| p.iter().zip(v).map(|(a, b)| a - b).collect())
            .collect();
        gens.extend(self.recession.rays().iter().cloned());
        Cone::from_generators(v.len(), &gens)
    }

    /// Points not of the form `q + c` with `q` another point and `c` in the
    /// recession cone. Only these can be vertices.
    fn undominated(&self) -> Vec<&Vec<Int>> {
        let rc = &self.recession;
        if !(rc.is_pointed() && rc.is_full_dimensional()) {
            return self.points.iter().collect();
        }
        let w = rc.grading();
        let mut order: Vec<(Int, &Vec<Int>)> =
            self.points.iter().map(|p| (dot(&w, p), p)).collect();
        order.sort();
        let mut kept: Vec<(Vec<Int>, &Vec<Int>)> = Vec::new();
        for (_, p) in order {
            let vals: Vec<Int> = rc.facets().iter().map(|f| dot(f, p)).collect();
            let dominated = kept
                .iter()
                .any(|(kv, _)| kv.iter().zip(&vals).all(|(a, b)| a <= b));
            if !dominated {
                kept.push((vals, p));
            }
        }
        let mut out: Vec<&Vec<Int>> = kept.into_iter().map(|(_, p)| p).collect();
        out.sort();
        out
    }

    /// Vertices with the facet normals through them, via the homogenized
    /// cone over `(p, 1)` and `(r, 0)`.
    pub(crate) fn vertex_cones(&self) -> Result<Vec<VertexCone>> {
        let n = self.recession.ambient_dim();
        if !self.recession.is_pointed() {
            return Err(Error::NotPointed);
        }
        let candidates = self.undominated();
        let mut lifted: Vec<Vec<Int>> = candidates
            .iter()
            .map(|p| {
                let mut v = (*p).clone();
                v.push(Int::ONE);
                v
            })
            .collect();
        for r in self.recession.rays() {
            let mut v = r.clone();
            v.push(Int::ZERO);
            lifted.push(v);
        }
        let facets = extreme_rays(&lifted, n + 1)
            .ok_or_else(|| Error::Dimension("polyhedron is not full-dimensional".into()))?;
        let mut out = Vec::new();
        for (p, lp) in candidates.iter().zip(&lifted) {
            let tight: Vec<Vec<Int>> = facets
                .iter()
                .filter(|f| dot(f, lp).is_zero())
                .cloned()
                .collect();
            if rank_of_vectors(&tight) == n {
                let normals = tight.into_iter().map(|mut f| {
                    f.pop();
                    f
                });
                out.push(VertexCone {
                    vertex: (*p).clone(),
                    normals: normals.collect(),
                });
            }
        }
        Ok(out)
    }
}

pub(crate) fn require_pointed_full(c: &Cone) -> Result<()> {
    c.require_pointed_full()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::ints;

    fn cone(gens: &[&[i64]]) -> Cone {
        let g: Vec<Vec<Int>> = gens.iter().map(|v| ints(v)).collect();
        Cone::from_generators(g[0].len(), &g).unwrap()
    }

    #[test]
    fn plane_cone_representations() {
        let c = cone(&[&[-1, 2], &[3, -1], &[1, 1]]);
        assert!(c.is_pointed() && c.is_full_dimensional());
        assert_eq!(c.rays(), &[ints(&[-1, 2]), ints(&[3, -1])]);
        assert_eq!(c.facets(), &[ints(&[1, 3]), ints(&[2, 1])]);
        let d = c.dual();
        assert_eq!(d.rays(), &[ints(&[1, 3]), ints(&[2, 1])]);
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn non_pointed_and_lower_dimensional() {
        let half_plane = cone(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert!(!half_plane.is_pointed());
        assert_eq!(half_plane.facets(), &[ints(&[0, 1])]);
        assert!(half_plane.contains(&ints(&[-5, 0])));

        let ray = cone(&[&[2, 4, 0], &[1, 2, 0]]);
        assert_eq!(ray.dim(), 1);
        assert!(ray.is_pointed());
        assert_eq!(ray.rays(), &[ints(&[1, 2, 0])]);
        assert!(ray.contains(&ints(&[3, 6, 0])));
        assert!(!ray.contains(&ints(&[3, 6, 1])));
        assert!(!ray.contains(&ints(&[-1, -2, 0])));
    }

    #[test]
    fn zero_cone() {
        let z = Cone::from_generators(2, &[ints(&[0, 0])]).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(z.contains(&ints(&[0, 0])));
        assert!(!z.contains(&ints(&[1, 0])));
        assert!(z.dual().is_full_dimensional());
    }

    #[test]
    fn unimodularity_and_simpliciality() {
        assert!(cone(&[&[1, 0], &[1, 1]]).is_unimodular());
        assert!(!cone(&[&[1, 0], &[1, 2]]).is_unimodular());
        assert!(cone(&[&[1, 0, 0], &[0, 1, 0]]).is_unimodular());
        let square = cone(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]);
        assert!(!square.is_simplicial());
        assert_eq!(square.facets().len(), 4);
    }

    #[test]
    fn from_inequalities_roundtrip() {
        let c = Cone::from_inequalities(2, &[ints(&[2, 1]), ints(&[1, 3])]).unwrap();
        assert_eq!(c.rays(), &[ints(&[-1, 2]), ints(&[3, -1])]);
        assert!(matches!(
            Cone::from_inequalities(2, &[ints(&[1, 0])]),
            Err(Error::NotPointed)
        ));
    }

    #[test]
    fn faces_and_intersections() {
        let a = cone(&[&[1, 0], &[1, 1]]);
        let b = cone(&[&[1, 1], &[0, 1]]);
        let common = a.intersection(&b).unwrap();
        assert_eq!(common.rays(), &[ints(&[1, 1])]);
        assert!(a.has_face(&common) && b.has_face(&common));
        let inner = cone(&[&[2, 1]]);
        assert!(!a.has_face(&inner));
    }

    #[test]
    fn polyhedron_vertices_small() {
        // Conv of the basis sums of the Hilbert basis of Cone((2,1),(1,3)),
        // plus that cone.
        let sigma_dual = cone(&[&[2, 1], &[1, 3]]);
        let pts: Vec<Vec<Int>> = [[3, 4], [3, 3], [3, 2], [2, 5], [2, 4], [2, 3]]
            .iter()
            .map(|p| ints(p))
            .collect();
        let p = LatticePolyhedron::new(pts, sigma_dual).unwrap();
        assert_eq!(
            p.vertices().unwrap(),
            vec![ints(&[2, 3]), ints(&[2, 5]), ints(&[3, 2])]
        );
        let f = p.feasible_cone(&ints(&[2, 3])).unwrap();
        assert_eq!(f.rays(), &[ints(&[0, 1]), ints(&[1, -1])]);
        assert!(p.feasible_cone(&ints(&[3, 3])).is_err());
    }

    #[test]
    fn bounded_polyhedron() {
        let zero = Cone::from_generators(2, &[]).unwrap();
        let pts: Vec<Vec<Int>> = [[0, 0], [1, 0], [0, 1], [1, 1], [0, 0]]
            .iter()
            .map(|p| ints(p))
            .collect();
        let p = LatticePolyhedron::new(pts, zero).unwrap();
        assert_eq!(p.vertices().unwrap().len(), 4);
    }
}
