use std::collections::{BTreeSet, HashMap, VecDeque};

use super::DigraphStore;

/// A directed cycle (consecutive keys are edges, and the last key points
/// back to the first) together with the strongly connected component it was
/// found in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<String>,
    pub component: Vec<String>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// One shortest cycle per nontrivial strongly connected component, through
/// the component's least key; the loop at the unimodular vertex is ignored.
pub fn find_cycles(store: &DigraphStore, max_report: usize) -> Vec<Cycle> {
    let all: BTreeSet<String> = store.vertex_keys().map(str::to_string).collect();
    find_cycles_within(store, &all, max_report)
}

/// As [`find_cycles`], restricted to the subgraph induced by `subset`.
pub fn find_cycles_within(
    store: &DigraphStore,
    subset: &BTreeSet<String>,
    max_report: usize,
) -> Vec<Cycle> {
    let keys: Vec<&String> = subset.iter().filter(|k| store.contains(k)).collect();
    let index: HashMap<&str, usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let eps = store.epsilon_key();
    let adj: Vec<Vec<usize>> = keys
        .iter()
        .map(|k| {
            store
                .children(k)
                .into_iter()
                .filter(|c| !(*c == eps && k.as_str() == eps))
                .filter_map(|c| index.get(c).copied())
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    for comp in tarjan(&adj) {
        let root = *comp.iter().min().expect("nonempty component");
        let nontrivial = comp.len() > 1 || adj[root].contains(&root);
        if !nontrivial {
            continue;
        }
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        let path = shortest_cycle(&adj, &members, root);
        out.push(Cycle {
            vertices: path.into_iter().map(|i| keys[i].clone()).collect(),
            component: members.iter().map(|&i| keys[i].clone()).collect(),
        });
    }
    out.sort_by(|a, b| a.vertices[0].cmp(&b.vertices[0]));
    out.truncate(max_report);
    out
}

/// Breadth-first search for the shortest path `root -> ... -> root` inside
/// one component.
fn shortest_cycle(adj: &[Vec<usize>], members: &BTreeSet<usize>, root: usize) -> Vec<usize> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let mut next: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|w| members.contains(w))
            .collect();
        next.sort_unstable();
        for w in next {
            if w == root {
                let mut path = vec![v];
                let mut cur = v;
                while cur != root {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("a nontrivial component has a cycle through each member")
}

/// Iterative Tarjan; components in reverse topological order.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for s in 0..n {
        if index[s] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(s, 0)];
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s);
        on_stack[s] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}
