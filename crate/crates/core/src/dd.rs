//! Double description kernel over exact integers.
//!
//! Converts an inequality description `{x : <a_i, x> >= 0}` of a pointed cone
//! into its extreme rays. Applied to generators instead of inequalities the
//! same routine produces facet normals, since the facets of `Cone(G)` are the
//! extreme rays of its dual.

use crate::int::{dot, Int};
use crate::linalg::{det_rows, primitivize};

/// Fixed-width bitset over constraint indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    #[inline]
    pub(crate) fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub(crate) fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    #[inline]
    pub(crate) fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<Int>,
    zeros: Bits,
    zero_count: u32,
}

/// Extreme rays of `{x in R^dim : <a, x> >= 0 for every a in constraints}`.
///
/// Returns `None` when the constraints have rank below `dim`, i.e. when the
/// cone is not pointed. Output rays are primitive and sorted.
pub(crate) fn extreme_rays(constraints: &[Vec<Int>], dim: usize) -> Option<Vec<Vec<Int>>> {
    let m = constraints.len();
    if dim == 0 {
        return Some(Vec::new());
    }
    // sparse constraints first, ties broken lexicographically
    let support: Vec<usize> = constraints
        .iter()
        .map(|c| c.iter().filter(|x| !x.is_zero()).count())
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        support[a]
            .cmp(&support[b])
            .then_with(|| constraints[a].cmp(&constraints[b]))
    });

    let basis = independent_prefix(constraints, &order, dim)?;
    let basis_rows: Vec<Vec<Int>> = basis.iter().map(|&i| constraints[i].clone()).collect();
    let mut rays = initial_rays(&basis_rows, &basis, m);

    let in_basis = {
        let mut b = Bits::new(m);
        for &i in &basis {
            b.set(i);
        }
        b
    };
    let threshold = dim.saturating_sub(2) as u32;

    for &k in order.iter().filter(|&&k| !in_basis.get(k)) {
        let a = &constraints[k];
        let values: Vec<Int> = rays.iter().map(|r| dot(a, &r.v)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.set(k);
                    r.zero_count += 1;
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();

        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                if rays[p].zero_count.min(rays[q].zero_count) < threshold {
                    continue;
                }
                let common = rays[p].zeros.and(&rays[q].zeros);
                let cc = common.count();
                if cc < threshold {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(i, r)| {
                    i != p && i != q && r.zero_count >= cc && common.is_subset_of(&r.zeros)
                });
                if blocked {
                    continue;
                }
                let (vp, vq) = (&values[p], &values[q]);
                let mut v: Vec<Int> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xq, xp)| &(vp * xq) - &(vq * xp))
                    .collect();
                primitivize(&mut v);
                let mut zeros = common;
                zeros.set(k);
                fresh.push(Ray {
                    v,
                    zeros,
                    zero_count: cc + 1,
                });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.set(k);
                r.zero_count += 1;
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: Vec<Vec<Int>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Some(out)
}

/// First `dim` linearly independent constraints in `order`.
fn independent_prefix(constraints: &[Vec<Int>], order: &[usize], dim: usize) -> Option<Vec<usize>> {
    let mut echelon: Vec<(usize, Vec<Int>)> = Vec::new();
    let mut chosen = Vec::new();
    for &i in order {
        let mut v = constraints[i].clone();
        for (pc, row) in &echelon {
            if v[*pc].is_zero() {
                continue;
            }
            let (a, b) = (row[*pc].clone(), v[*pc].clone());
            for j in 0..dim {
                v[j] = &(&v[j] * &a) - &(&row[j] * &b);
            }
            primitivize(&mut v);
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((pc, v));
            chosen.push(i);
            if chosen.len() == dim {
                return Some(chosen);
            }
        }
    }
    None
}

/// Rays of the simplicial cone cut out by `dim` independent constraints:
/// the columns of the adjugate, oriented into the cone.
fn initial_rays(basis_rows: &[Vec<Int>], basis: &[usize], m: usize) -> Vec<Ray> {
    let n = basis_rows.len();
    let det = det_rows(basis_rows);
    let sign = if det.is_negative() {
        Int::small(-1)
    } else {
        Int::ONE
    };
    let mut rays = Vec::with_capacity(n);
    for j in 0..n {
        // column j of adj(B): entries (-1)^{i+j} det(B without row j, column i)
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let minor: Vec<Vec<Int>> = basis_rows
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let mut c = det_rows(&minor);
            if (i + j) % 2 == 1 {
                c = -c;
            }
            v.push(&c * &sign);
        }
        primitivize(&mut v);
        let mut zeros = Bits::new(m);
        for (r, &idx) in basis.iter().enumerate() {
            if r != j {
                zeros.set(idx);
            }
        }
        rays.push(Ray {
            v,
            zeros,
            zero_count: (n - 1) as u32,
        });
    }
    rays
}
