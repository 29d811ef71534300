// Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nash_core::{Cone, Int, IntMatrix};
use rand::Rng;

pub type V = Vec<i64>;

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn to_i64(v: &[Int]) -> V {
    v.iter().map(|x| x.to_i64().expect("small entry")).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn det(m: &[V]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<V> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det(&minor)
        })
        .sum()
}

pub fn subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(k - 1, last).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

/// Normal of the hyperplane through `n - 1` vectors, by cofactors.
fn cofactor_normal(vs: &[V], n: usize) -> V {
    (0..n)
        .map(|i| {
            let minor: Vec<V> = vs
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * det(&minor)
        })
        .collect()
}

fn primitive(v: V) -> V {
    let g = v.iter().fold(0i64, |g, &x| num_gcd(g, x.abs()));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Facet normals of a full-dimensional cone, by trying every hyperplane
/// spanned by generators.
pub fn naive_facets(gens: &[V]) -> BTreeSet<V> {
    let n = gens[0].len();
    let mut out = BTreeSet::new();
    for idx in subsets(n - 1, gens.len()) {
        let vs: Vec<V> = idx.iter().map(|&i| gens[i].clone()).collect();
        let normal = cofactor_normal(&vs, n);
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        for s in [1, -1] {
            let cand: V = normal.iter().map(|x| s * x).collect();
            if gens.iter().all(|g| dot(&cand, g) >= 0) {
                out.insert(primitive(cand));
            }
        }
    }
    out
}

/// Hilbert basis of a pointed full-dimensional cone by enumerating the
/// bounding box of the generator zonotope.
pub fn naive_hilbert_basis(gens: &[V]) -> BTreeSet<V> {
    let n = gens[0].len();
    let facets: Vec<V> = naive_facets(gens).into_iter().collect();
    let grading: V = (0..n).map(|i| facets.iter().map(|f| f[i]).sum()).collect();
    let bound: V = (0..n)
        .map(|i| gens.iter().map(|g| g[i].abs()).sum())
        .collect();
    let mut points = Vec::new();
    let mut x = vec![0i64; n];
    box_points(&bound, 0, &mut x, &mut |p| {
        if p.iter().any(|&c| c != 0) && facets.iter().all(|f| dot(f, p) >= 0) {
            points.push(p.to_vec());
        }
    });
    points.sort_by_key(|p| dot(&grading, p));
    let mut basis: Vec<V> = Vec::new();
    for p in points {
        let reducible = basis.iter().any(|h| {
            let d: V = p.iter().zip(h).map(|(a, b)| a - b).collect();
            facets.iter().all(|f| dot(f, &d) >= 0)
        });
        if !reducible {
            basis.push(p);
        }
    }
    basis.into_iter().collect()
}

fn box_points(bound: &[i64], i: usize, x: &mut V, f: &mut impl FnMut(&[i64])) {
    if i == bound.len() {
        f(x);
        return;
    }
    for v in -bound[i]..=bound[i] {
        x[i] = v;
        box_points(bound, i + 1, x, f);
    }
}

pub fn random_vectors(rng: &mut impl Rng, n: usize, k: usize, bound: i64) -> Vec<V> {
    (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

/// A random pointed full-dimensional cone with small generators.
pub fn random_cone(rng: &mut impl Rng, n: usize, bound: i64) -> (Vec<V>, Cone) {
    loop {
        let k = rng.gen_range(n..=n + 2);
        let gens = random_vectors(rng, n, k, bound);
        let gi: Vec<Vec<Int>> = gens.iter().map(|g| ints(g)).collect();
        let Ok(c) = Cone::from_generators(n, &gi) else {
            continue;
        };
        if c.is_pointed() && c.is_full_dimensional() {
            return (gens, c);
        }
    }
}

/// A random matrix in GL_n(Z), built from elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut t = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        t.add_row_multiple(i, j, &Int::from(rng.gen_range(-2i64..=2)));
        if rng.gen_bool(0.2) {
            t.negate_row(i);
        }
        if rng.gen_bool(0.2) {
            t.swap_rows(i, j);
        }
    }
    t
}

pub fn transform(t: &IntMatrix, gens: &[Vec<Int>]) -> Vec<Vec<Int>> {
    gens.iter().map(|g| t.apply(g)).collect()
}

pub fn shuffle<T>(rng: &mut impl Rng, v: &mut [T]) {
    for a in (1..v.len()).rev() {
        let b = rng.gen_range(0..=a);
        v.swap(a, b);
    }
}

pub fn ray_set(c: &Cone) -> BTreeSet<V> {
    c.rays().iter().map(|r| to_i64(r)).collect()
}
