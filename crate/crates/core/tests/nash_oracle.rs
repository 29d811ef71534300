// Naive i64 reimplementation of the Nash chart computation, used to check
// the library on small semigroups.

use std::collections::{BTreeSet, HashMap};

use nash_core::explorer::{Budget, DigraphStore, Mode, StoreMeta};
use nash_core::nash::{nash_charts, DEFAULT_BASIS_CAP};
use nash_core::{AffineSemigroup, Characteristic, Int, IntMatrix};
use rand::{Rng, SeedableRng};

type V = Vec<i64>;

fn to_i64(v: &[Int]) -> V {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

fn det(m: &[V]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
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

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A strictly positive integral grading found by exhaustive search.
fn grading(gens: &[V]) -> Option<V> {
    let n = gens[0].len();
    let range: i64 = if n == 2 { 60 } else { 15 };
    let total = (2 * range + 1).pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = code % (2 * range + 1) - range;
                    code /= 2 * range + 1;
                    d
                })
                .collect::<V>()
        })
        .filter(|w| gens.iter().all(|g| dot(w, g) > 0))
        .min_by_key(|w| gens.iter().map(|g| dot(w, g)).sum::<i64>())
}

fn member(v: &V, gens: &[V], w: &V, memo: &mut HashMap<V, bool>) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if dot(w, v) <= 0 {
        return false;
    }
    if let Some(&b) = memo.get(v) {
        return b;
    }
    let ans = gens.iter().any(|g| {
        let r: V = v.iter().zip(g).map(|(a, b)| a - b).collect();
        member(&r, gens, w, memo)
    });
    memo.insert(v.clone(), ans);
    ans
}

fn minimize(gens: &BTreeSet<V>, w: &V) -> BTreeSet<V> {
    gens.iter()
        .filter(|g| {
            let others: Vec<V> = gens.iter().filter(|o| o != g).cloned().collect();
            !member(g, &others, w, &mut HashMap::new())
        })
        .cloned()
        .collect()
}

fn combinations(k: usize, n: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            combinations(k - 1, last).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

fn naive_charts(h: &[V], p: i64) -> BTreeSet<BTreeSet<V>> {
    let n = h[0].len();
    let is_basis = |idx: &[usize]| {
        let m: Vec<V> = idx.iter().map(|&i| h[i].clone()).collect();
        let d = det(&m);
        if p == 0 {
            d != 0
        } else {
            d.rem_euclid(p) != 0
        }
    };
    let mut out = BTreeSet::new();
    for basis in combinations(n, h.len()).into_iter().filter(|b| is_basis(b)) {
        let mut g: BTreeSet<V> = h.iter().cloned().collect();
        for gi in (0..h.len()).filter(|i| !basis.contains(i)) {
            for &hi in &basis {
                let swapped: Vec<usize> = basis
                    .iter()
                    .map(|&b| if b == hi { gi } else { b })
                    .collect();
                if is_basis(&swapped) {
                    g.insert(h[gi].iter().zip(&h[hi]).map(|(a, b)| a - b).collect());
                }
            }
        }
        let gens: Vec<V> = g.iter().cloned().collect();
        if let Some(w) = grading(&gens) {
            out.insert(minimize(&g, &w));
        }
    }
    out
}

fn library_charts(s: &AffineSemigroup, p: u64) -> BTreeSet<BTreeSet<V>> {
    nash_charts(s, Characteristic::new(p).unwrap(), DEFAULT_BASIS_CAP)
        .unwrap()
        .iter()
        .map(|c| c.generators().iter().map(|g| to_i64(g)).collect())
        .collect()
}

fn check(s: &AffineSemigroup, p: u64) {
    let h: Vec<V> = s.generators().iter().map(|g| to_i64(g)).collect();
    assert_eq!(
        library_charts(s, p),
        naive_charts(&h, p as i64),
        "semigroup {h:?}, p = {p}"
    );
}

#[test]
fn random_plane_semigroups_match_naive_charts() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 40 {
        let k = rng.gen_range(2..=4);
        let cols: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..2).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let m = IntMatrix::from_i64_columns(&cols.iter().map(Vec::as_slice).collect::<Vec<_>>());
        let Ok(s) = AffineSemigroup::from_matrix(&m) else {
            continue;
        };
        if !s.hull().is_pointed() || !s.hull().is_full_dimensional() {
            continue;
        }
        for p in [0, 2, 3] {
            check(&s, p);
        }
        done += 1;
    }
}

#[test]
fn space_descendants_match_naive_charts() {
    let seed = IntMatrix::from_i64_rows(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, -6]]);
    let mut store = DigraphStore::new(StoreMeta {
        mode: Mode::Nash,
        characteristic: Characteristic::ZERO,
        rank: 3,
    });
    let start = store.seed_matrix(&seed).unwrap();
    let levels = store
        .descendants(&start, 2, &Budget::new(1000, 60.0).unwrap())
        .unwrap();
    for key in levels.levels.concat() {
        let s = AffineSemigroup::from_matrix(store.payload(&key).unwrap()).unwrap();
        check(&s, 0);
    }
}
