//! Deterministic DOT export: vertices as nodes, tau-orbits as edges, ports
//! as dangling stubs, colours and decorations as labels.

use mge_core::{FeynmanGraph, GraphicalSpecies, StructuredGraph};
use std::fmt::Write;

/// Render a graph; when a species and structure are supplied, edges carry
/// colour names and vertices carry element names.
pub fn export_dot(
    g: &FeynmanGraph,
    decorated: Option<(&GraphicalSpecies, &StructuredGraph)>,
) -> String {
    let mut out = String::from("graph mge {\n");
    let _ = writeln!(out, "  graph [ordering=out];");
    for v in 0..g.n_vertices() {
        let mut label = format!("v{v}");
        if let Some((s, st)) = decorated {
            let n = g
                .vertex_data(v)
                .expect("validated graph")
                .valency;
            if let Ok(names) = s.element_names(n) {
                label = format!("v{v}: {}", names[st.decorations[v]]);
            }
        }
        let _ = writeln!(out, "  v{v} [shape=circle, label=\"{label}\"];");
    }
    // endpoint of an edge: its vertex, or a dangling stub for ports
    let attach_of = |e: usize| -> Option<usize> {
        (0..g.n_vertices()).find(|&v| {
            g.vertex_data(v)
                .expect("validated graph")
                .incident_edges
                .contains(&e)
        })
    };
    let mut stubs = 0usize;
    let mut stub_lines = String::new();
    let mut edge_lines = String::new();
    for (o, orbit) in g.orbits().iter().enumerate() {
        let [e, te] = *orbit;
        let mut label = format!("o{o}");
        if let Some(name) = g.labels().get(&e).or_else(|| g.labels().get(&te)) {
            label = name.clone();
        }
        if let Some((s, st)) = decorated {
            let _ = write!(
                label,
                " [{}|{}]",
                s.palette().color_name(st.coloring[e]),
                s.palette().color_name(st.coloring[te])
            );
        }
        let mut endpoint = |side: usize, lines: &mut String| -> String {
            match attach_of(side) {
                Some(v) => format!("v{v}"),
                None => {
                    let id = format!("p{stubs}");
                    stubs += 1;
                    let _ = writeln!(lines, "  {id} [shape=none, label=\"\"];");
                    id
                }
            }
        };
        let a = endpoint(e, &mut stub_lines);
        let b = endpoint(te, &mut stub_lines);
        let _ = writeln!(edge_lines, "  {a} -- {b} [label=\"{label}\"];");
    }
    out.push_str(&stub_lines);
    out.push_str(&edge_lines);
    out.push_str("}\n");
    out
}
