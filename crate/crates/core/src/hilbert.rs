//! Hilbert bases of pointed full-dimensional cones.
//!
//! The cone is triangulated by placing its extreme rays in lexicographic
//! order; every lattice point of every half-open fundamental parallelepiped is
//! a candidate, and the candidates (plus the rays) are reduced by repeatedly
//! discarding anything that is a sum of two nonzero lattice points of the cone.

use std::collections::{BTreeSet, HashMap};

use crate::cone::{require_pointed_full, Cone};
use crate::int::{dot, Int};
use crate::linalg::{det_rows, smith_normal_form, unimodular_inverse};
use crate::matrix::IntMatrix;
use crate::{par, Result};

/// The unique minimal generating set of `C ∩ Z^n`, sorted lexicographically.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<Vec<Int>>> {
    require_pointed_full(cone)?;
    let rays = cone.rays();
    if cone.is_unimodular() {
        return Ok(rays.to_vec());
    }
    let simplices = placing_triangulation(rays);
    let blocks: Vec<Vec<Vec<Int>>> = par::map(&simplices, |s| {
        let cols: Vec<Vec<Int>> = s.iter().map(|&i| rays[i].clone()).collect();
        parallelepiped_points(&cols)
    });
    let mut candidates: BTreeSet<Vec<Int>> = rays.iter().cloned().collect();
    candidates.extend(blocks.into_iter().flatten());
    Ok(reduce(cone, candidates.into_iter().collect()))
}

/// Keeps the irreducible elements of a set of nonzero cone points that
/// contains the Hilbert basis.
pub(crate) fn reduce(cone: &Cone, candidates: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    let w = cone.grading();
    let mut graded: Vec<(Int, Vec<Int>, Vec<Int>)> = candidates
        .into_iter()
        .map(|x| {
            let vals = cone.facets().iter().map(|f| dot(f, &x)).collect();
            (dot(&w, &x), x, vals)
        })
        .collect();
    graded.sort();
    let mut kept: Vec<(Int, Vec<Int>, Vec<Int>)> = Vec::new();
    for item in graded {
        // x - h lies in the cone iff every facet value of h is at most that of x
        let reducible = kept
            .iter()
            .any(|(g, _, hv)| g < &item.0 && hv.iter().zip(&item.2).all(|(a, b)| a <= b));
        if !reducible {
            kept.push(item);
        }
    }
    let mut out: Vec<Vec<Int>> = kept.into_iter().map(|(_, x, _)| x).collect();
    out.sort();
    out
}

/// Placing triangulation of the cone over `rays` (which must be its extreme
/// rays, in the order they are placed). Simplices are index sets into `rays`.
pub(crate) fn placing_triangulation(rays: &[Vec<Int>]) -> Vec<Vec<usize>> {
    let n = rays[0].len();
    let mut initial: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        rows.push(r.clone());
        if crate::linalg::rank_of_vectors(&rows) == rows.len() {
            initial.push(i);
            if initial.len() == n {
                break;
            }
        } else {
            rows.pop();
        }
    }
    let mut simplices = vec![initial.clone()];
    if n == 1 {
        return simplices;
    }
    for v in (0..rays.len()).filter(|i| !initial.contains(i)) {
        // boundary facets occur in exactly one simplex
        let mut seen: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for s in &simplices {
            for (k, &omitted) in s.iter().enumerate() {
                let mut f = s.clone();
                f.remove(k);
                seen.entry(f)
                    .and_modify(|e| e.0 += 1)
                    .or_insert((1, omitted));
            }
        }
        let mut boundary: Vec<(Vec<usize>, usize)> = seen
            .into_iter()
            .filter(|(_, (count, _))| *count == 1)
            .map(|(f, (_, omitted))| (f, omitted))
            .collect();
        boundary.sort();
        let mut added = Vec::new();
        for (f, omitted) in boundary {
            let normal = hyperplane_normal(&f.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
            let inside = dot(&normal, &rays[omitted]);
            let side = dot(&normal, &rays[v]);
            // visible: v strictly on the other side of the facet
            if inside.signum() * side.signum() < 0 {
                let mut s = f.clone();
                s.push(v);
                s.sort();
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    simplices
}

/// A normal vector to the hyperplane spanned by `n - 1` independent vectors
/// in `R^n` (generalized cross product).
fn hyperplane_normal(vectors: &[Vec<Int>]) -> Vec<Int> {
    let n = vectors.len() + 1;
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<Int>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = det_rows(&minor);
            if j % 2 == 1 {
                -d
            } else {
                d
            }
        })
        .collect()
}

/// Nonzero lattice points of `{sum l_i r_i : 0 <= l_i < 1}` for linearly
/// independent `rays`.
pub(crate) fn parallelepiped_points(rays: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let r = IntMatrix::from_columns(rays).expect("nonempty simplex");
    let n = r.rows();
    let snf = smith_normal_form(&r);
    let d = det_rows(&r.to_rows());
    let vol = d.abs();
    if vol.is_one() {
        return Vec::new();
    }
    // Z^n / R Z^n is generated by the columns of L^{-1}, with orders d_i.
    let linv = unimodular_inverse(&snf.left).expect("left transform is unimodular");
    let factors: Vec<i64> = snf
        .invariant_factors
        .iter()
        .map(|x| x.to_i64().expect("simplex volume fits in a machine word"))
        .collect();
    let adj = adjugate(&r);
    let sign = if d.is_negative() {
        Int::small(-1)
    } else {
        Int::ONE
    };
    let mut out = Vec::new();
    let mut y = vec![0i64; n];
    loop {
        if y.iter().any(|&v| v != 0) {
            let x: Vec<Int> = (0..n)
                .map(|i| (0..n).map(|j| &linv[(i, j)] * &Int::small(y[j])).sum())
                .collect();
            // barycentric numerators over |det|, reduced into [0, |det|)
            let k: Vec<Int> = adj
                .apply(&x)
                .into_iter()
                .map(|c| (&c * &sign).mod_floor(&vol))
                .collect();
            let p: Vec<Int> = (0..n)
                .map(|i| {
                    let s: Int = (0..n).map(|j| &k[j] * &rays[j][i]).sum();
                    s.div_exact(&vol)
                })
                .collect();
            out.push(p);
        }
        // odometer over prod Z/d_i
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            y[i] += 1;
            if y[i] < factors[i] {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

/// `adj(R)` with `R adj(R) = det(R) I`.
pub(crate) fn adjugate(r: &IntMatrix) -> IntMatrix {
    let n = r.rows();
    let mut adj = IntMatrix::zeros(n, n);
    if n == 1 {
        adj[(0, 0)] = Int::ONE;
        return adj;
    }
    let rows = r.to_rows();
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Int>> = rows
                .iter()
                .enumerate()
                .filter(|&(a, _)| a != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(b, _)| b != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let c = det_rows(&minor);
            adj[(j, i)] = if (i + j) % 2 == 1 { -c } else { c };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::ints;

    fn cone(gens: &[&[i64]]) -> Cone {
        let g: Vec<Vec<Int>> = gens.iter().map(|v| ints(v)).collect();
        Cone::from_generators(g[0].len(), &g).unwrap()
    }

    fn hb(gens: &[&[i64]]) -> Vec<Vec<Int>> {
        hilbert_basis(&cone(gens)).unwrap()
    }

    /// Brute force: irreducible lattice points in a box large enough to hold
    /// the Hilbert basis (the box must contain the parallelepipeds).
    fn brute(c: &Cone, bound: i64) -> Vec<Vec<Int>> {
        let n = c.ambient_dim();
        let mut pts = Vec::new();
        let mut x = vec![-bound; n];
        loop {
            let v: Vec<Int> = ints(&x);
            if x.iter().any(|&t| t != 0) && c.contains(&v) {
                pts.push(v);
            }
            let mut i = 0;
            while i < n {
                x[i] += 1;
                if x[i] <= bound {
                    break;
                }
                x[i] = -bound;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        let set: BTreeSet<Vec<Int>> = pts.iter().cloned().collect();
        let mut out: Vec<Vec<Int>> = pts
            .iter()
            .filter(|p| {
                !set.iter().any(|q| {
                    q != *p && {
                        let d: Vec<Int> = p.iter().zip(q).map(|(a, b)| a - b).collect();
                        d.iter().any(|t| !t.is_zero()) && set.contains(&d)
                    }
                })
            })
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn plane_cones() {
        assert_eq!(
            hb(&[&[1, 0], &[3, 5]]),
            vec![ints(&[1, 0]), ints(&[1, 1]), ints(&[2, 3]), ints(&[3, 5])]
        );
        assert_eq!(
            hb(&[&[2, 1], &[1, 3]]),
            vec![ints(&[1, 1]), ints(&[1, 2]), ints(&[1, 3]), ints(&[2, 1])]
        );
        assert_eq!(hb(&[&[1, 0], &[0, 1]]), vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn agrees_with_brute_force() {
        for gens in [
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 3]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -2]],
            vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]],
            vec![vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2], vec![1, 1, 1]],
        ] {
            let g: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
            let c = cone(&g);
            assert_eq!(hilbert_basis(&c).unwrap(), brute(&c, 4), "{gens:?}");
        }
    }

    #[test]
    fn rank_one() {
        assert_eq!(hb(&[&[-3]]), vec![ints(&[-1])]);
    }

    #[test]
    fn triangulation_covers_square_cone() {
        let c = cone(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]);
        let t = placing_triangulation(c.rays());
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn parallelepiped_of_cusp() {
        let mut p = parallelepiped_points(&[ints(&[1, 0]), ints(&[1, 2])]);
        p.sort();
        assert_eq!(p, vec![ints(&[1, 1])]);
    }

    #[test]
    fn adjugate_identity() {
        let r = IntMatrix::from_i64_rows(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 4]]);
        let d = crate::linalg::determinant(&r).unwrap();
        let prod = r.mul(&adjugate(&r)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[(i, j)], if i == j { d.clone() } else { Int::ZERO });
            }
        }
    }
}
