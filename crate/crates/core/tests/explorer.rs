use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nash_core::explorer::{export_dot, find_cycles, Budget, DigraphStore, Mode, Status, StoreMeta};
use nash_core::{Characteristic, IntMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cone_b() -> IntMatrix {
    IntMatrix::from_i64_rows(&[
        &[1, 0, 0, 0, 2, 1],
        &[0, 1, 0, 0, 3, 3],
        &[0, 0, 1, 0, -2, -1],
        &[0, 0, 0, 1, -1, -1],
    ])
}

fn store(mode: Mode, p: u64, rank: usize) -> DigraphStore {
    DigraphStore::new(StoreMeta {
        mode,
        characteristic: Characteristic::new(p).unwrap(),
        rank,
    })
}

fn budget() -> Budget {
    Budget::new(100_000, 600.0).unwrap()
}

fn serialized(s: &DigraphStore) -> Vec<u8> {
    let mut out = Vec::new();
    s.write_to(&mut out).unwrap();
    out
}

fn explored_b(p: u64) -> (DigraphStore, String) {
    let mut s = store(Mode::Normalized, p, 4);
    let start = s.seed_matrix(&cone_b()).unwrap();
    assert!(s
        .resolution_subgraph(&start, &budget())
        .unwrap()
        .is_complete());
    (s, start)
}

#[test]
fn save_and_load_round_trip() {
    let (s, _) = explored_b(3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.jsonl");
    s.save(&path).unwrap();
    let back = DigraphStore::load(&path).unwrap();
    assert_eq!(back, s);
    assert_eq!(serialized(&back), serialized(&s));
}

#[test]
fn concatenated_stores_merge() {
    let (a, _) = explored_b(3);
    let mut doubled = serialized(&a);
    doubled.extend(serialized(&a));
    assert_eq!(DigraphStore::read_from(doubled.as_slice()).unwrap(), a);

    let mut b = store(Mode::Normalized, 3, 4);
    let r = b
        .seed_cone(&nash_core::nash::reeves_cone(4, 3).unwrap())
        .unwrap();
    b.resolution_subgraph(&r, &budget()).unwrap();
    let mut both = serialized(&a);
    both.extend(serialized(&b));
    let merged = DigraphStore::read_from(both.as_slice()).unwrap();
    let mut expected = a.clone();
    expected.merge(&b).unwrap();
    assert_eq!(merged, expected);
    assert_eq!(
        merged.vertex_count(),
        a.vertex_keys()
            .chain(b.vertex_keys())
            .collect::<BTreeSet<_>>()
            .len()
    );
}

#[test]
fn mismatched_meta_is_rejected() {
    let (a, _) = explored_b(3);
    let (b, _) = explored_b(2);
    let mut text = serialized(&a);
    text.extend(serialized(&b));
    assert!(DigraphStore::read_from(text.as_slice()).is_err());
    let mut a2 = a.clone();
    assert!(a2.merge(&b).is_err());
}

#[test]
fn malformed_lines_report_their_number() {
    let (a, _) = explored_b(3);
    let mut text = String::from_utf8(serialized(&a)).unwrap();
    text.push_str("{\"kind\":\"edge\",\"from\":\"nowhere\"}\n");
    let err = DigraphStore::read_from(text.as_bytes())
        .unwrap_err()
        .to_string();
    let lines = text.lines().count();
    assert!(err.contains(&format!("line {lines}")), "{err}");
}

#[test]
fn resume_matches_uninterrupted_run() {
    let (full, start) = explored_b(2);
    let mut partial = store(Mode::Normalized, 2, 4);
    partial.seed_matrix(&cone_b()).unwrap();
    let status = partial
        .resolution_subgraph(&start, &Budget::new(3, 600.0).unwrap())
        .unwrap();
    assert!(matches!(status, Status::BudgetExhausted { .. }));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.jsonl");
    partial.save(&path).unwrap();
    let mut resumed = DigraphStore::load(&path).unwrap();
    assert!(resumed
        .resolution_subgraph(&start, &budget())
        .unwrap()
        .is_complete());
    assert_eq!(serialized(&resumed), serialized(&full));
}

#[test]
fn exploration_ignores_thread_count() {
    let run = |threads: usize, mode: Mode| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| match mode {
            Mode::Normalized => serialized(&explored_b(3).0),
            Mode::Nash => {
                let mut s = store(Mode::Nash, 0, 2);
                let m = IntMatrix::from_i64_rows(&[&[3, 1, 2], &[1, 4, 2]]);
                let start = s.seed_matrix(&m).unwrap();
                assert!(s
                    .resolution_subgraph(&start, &budget())
                    .unwrap()
                    .is_complete());
                serialized(&s)
            }
        })
    };
    for mode in [Mode::Normalized, Mode::Nash] {
        let one = run(1, mode);
        assert_eq!(run(2, mode), one);
        assert_eq!(run(8, mode), one);
    }
}

#[test]
fn dot_of_epsilon_store() {
    let s = store(Mode::Normalized, 0, 2);
    let dot = export_dot(&s);
    assert_eq!(dot.matches("->").count(), 1);
    assert_eq!(dot.matches("label=").count(), 1);
    assert!(dot.starts_with("digraph") && dot.ends_with("}\n"));
}

#[test]
fn dot_of_empty_store() {
    let text =
        "{\"kind\":\"meta\",\"version\":1,\"mode\":\"nash\",\"characteristic\":0,\"rank\":2}\n";
    let s = DigraphStore::read_from(text.as_bytes()).unwrap();
    assert_eq!(s.vertex_count(), 0);
    let dot = export_dot(&s);
    assert_eq!(dot.lines().count(), 2);
}

#[test]
fn dot_of_two_cycle() {
    let mut s = store(Mode::Nash, 0, 1);
    let a = IntMatrix::from_i64_rows(&[&[2, 3]]);
    let b = IntMatrix::from_i64_rows(&[&[2, 5]]);
    s.insert_vertex("a".into(), a);
    s.insert_vertex("b".into(), b);
    s.insert_edge("a", "b").unwrap();
    s.insert_edge("b", "a").unwrap();
    let dot = export_dot(&s);
    assert!(dot.contains("\"a\" -> \"b\";") && dot.contains("\"b\" -> \"a\";"));
    let cycles = find_cycles(&s, 10);
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].vertices, vec!["a".to_string(), "b".to_string()]);
}

/// Vertices reachable from `from` by a nonempty path.
fn reach(adj: &BTreeMap<String, Vec<String>>, from: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<&str> = adj[from].iter().map(String::as_str).collect();
    while let Some(v) = queue.pop_front() {
        if seen.insert(v.to_string()) {
            queue.extend(adj[v].iter().map(String::as_str));
        }
    }
    seen
}

fn shortest_cycle_through(adj: &BTreeMap<String, Vec<String>>, v: &str) -> usize {
    let mut dist: BTreeMap<&str, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([(v, 0usize)]);
    while let Some((u, d)) = queue.pop_front() {
        for w in &adj[u] {
            if w == v {
                return d + 1;
            }
            if !dist.contains_key(w.as_str()) {
                dist.insert(w, d + 1);
                queue.push_back((w, d + 1));
            }
        }
    }
    usize::MAX
}

#[test]
fn cycles_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let mut s = store(Mode::Nash, 0, 1);
        let eps = s.epsilon_key();
        let n = rng.gen_range(1..=9);
        let keys: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        for k in &keys {
            s.insert_vertex(k.clone(), IntMatrix::from_i64_rows(&[&[2, 3]]));
        }
        let all: Vec<String> = keys.iter().cloned().chain([eps.clone()]).collect();
        for a in &keys {
            for b in &all {
                if rng.gen_bool(0.18) {
                    s.insert_edge(a, b).unwrap();
                }
            }
        }
        let mut adj: BTreeMap<String, Vec<String>> =
            all.iter().map(|k| (k.clone(), Vec::new())).collect();
        for (a, b) in s.edges() {
            if !(a == eps && b == eps) {
                adj.get_mut(a).unwrap().push(b.to_string());
            }
        }
        let closure: BTreeMap<String, BTreeSet<String>> =
            all.iter().map(|k| (k.clone(), reach(&adj, k))).collect();
        // a vertex is on a cycle iff it reaches itself; components are
        // classes of mutual reachability
        let mut expected: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        for v in &all {
            if closure[v].contains(v) {
                expected.insert(
                    all.iter()
                        .filter(|w| closure[v].contains(*w) && closure[*w].contains(v))
                        .cloned()
                        .collect(),
                );
            }
        }
        let found = find_cycles(&s, usize::MAX);
        let components: BTreeSet<BTreeSet<String>> = found
            .iter()
            .map(|c| c.component.iter().cloned().collect())
            .collect();
        assert_eq!(components, expected);
        for c in &found {
            let least = c.component.iter().min().unwrap();
            assert_eq!(&c.vertices[0], least);
            for (i, v) in c.vertices.iter().enumerate() {
                let next = &c.vertices[(i + 1) % c.len()];
                assert!(adj[v].contains(next), "{v} -> {next} is not an edge");
            }
            assert_eq!(c.len(), shortest_cycle_through(&adj, least));
        }
    }
}
