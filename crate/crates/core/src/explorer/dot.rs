use std::fmt::Write;

use super::DigraphStore;

/// Graphviz text for the store: one node per vertex labelled with its
/// payload matrix, one arc per edge, the unimodular vertex drawn doubled.
pub fn export_dot(store: &DigraphStore) -> String {
    let eps = store.epsilon_key();
    let mut out = String::from("digraph nash {\n");
    for (key, matrix) in store.vertices() {
        let label: Vec<String> = matrix
            .to_rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let style = if key == eps {
            ", shape=doublecircle"
        } else {
            ""
        };
        writeln!(out, "  \"{key}\" [label=\"{}\"{style}];", label.join("\\n"))
            .expect("string write");
    }
    for (from, to) in store.edges() {
        writeln!(out, "  \"{from}\" -> \"{to}\";").expect("string write");
    }
    out.push_str("}\n");
    out
}
