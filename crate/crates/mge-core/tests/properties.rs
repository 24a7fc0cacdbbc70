//! Randomised invariants over generated graphs and structures.

use mge_core::{
    apply_d, canonical_form, classify_bivalent, coequalize_gluing, enumerate_etale,
    evaluate_species, line, reduced_representative, terminal_species, wheel, BivalentClass,
    FeynmanGraph, GluingDatum, Palette, RawGraph, XGraph,
};
use proptest::prelude::*;
use std::collections::BTreeMap;

/// A random graph: vertices with chosen valencies, all edge slots (plus a
/// few free port edges) paired by a shuffled fixed-point-free involution.
fn raw_graph() -> impl Strategy<Value = RawGraph> {
    (
        proptest::collection::vec(1usize..=3, 0..=3),
        0usize..=2,
    )
        .prop_flat_map(|(valencies, extra)| {
            let attached: usize = valencies.iter().sum();
            let edges = attached + attached % 2 + 2 * extra;
            Just((0..edges).collect::<Vec<usize>>())
                .prop_shuffle()
                .prop_map(move |order| {
                    let mut involution = vec![0usize; edges];
                    for pair in order.chunks(2) {
                        involution[pair[0]] = pair[1];
                        involution[pair[1]] = pair[0];
                    }
                    let mut half_edges = Vec::new();
                    let mut next = 0usize;
                    for (v, &val) in valencies.iter().enumerate() {
                        for _ in 0..val {
                            half_edges.push((next, v));
                            next += 1;
                        }
                    }
                    RawGraph {
                        edges,
                        involution,
                        half_edges,
                        vertices: valencies.len(),
                        labels: BTreeMap::new(),
                    }
                })
        })
}

/// A random graph biased towards gluing inputs: every component has a
/// vertex (no free port pairs beyond the vertex slots) and the boundary is
/// large enough to pick a pair from.
fn glueable_graph() -> impl Strategy<Value = RawGraph> {
    proptest::collection::vec(2usize..=4, 1..=3).prop_flat_map(|valencies| {
        let attached: usize = valencies.iter().sum();
        let edges = attached + 2 + attached % 2;
        Just((0..edges).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(move |order| {
                let mut involution = vec![0usize; edges];
                for pair in order.chunks(2) {
                    involution[pair[0]] = pair[1];
                    involution[pair[1]] = pair[0];
                }
                let mut half_edges = Vec::new();
                let mut next = 0usize;
                for (v, &val) in valencies.iter().enumerate() {
                    for _ in 0..val {
                        half_edges.push((next, v));
                        next += 1;
                    }
                }
                RawGraph {
                    edges,
                    involution,
                    half_edges,
                    vertices: valencies.len(),
                    labels: BTreeMap::new(),
                }
            })
    })
}

/// Relabel a graph's edges by a permutation, keeping each vertex's
/// incident-edge order.
fn relabel(raw: &RawGraph, perm: &[usize]) -> RawGraph {
    let mut involution = vec![0usize; raw.edges];
    for e in 0..raw.edges {
        involution[perm[e]] = perm[raw.involution[e]];
    }
    RawGraph {
        edges: raw.edges,
        involution,
        half_edges: raw
            .half_edges
            .iter()
            .map(|&(e, v)| (perm[e], v))
            .collect(),
        vertices: raw.vertices,
        labels: BTreeMap::new(),
    }
}

proptest! {
    #[test]
    fn raw_round_trip_is_identity(raw in raw_graph()) {
        let g = FeynmanGraph::validate(raw).unwrap();
        prop_assert_eq!(FeynmanGraph::validate(g.to_raw()).unwrap(), g);
    }

    #[test]
    fn canonical_form_is_relabelling_invariant(
        raw in raw_graph(),
        perm_seed in proptest::collection::vec(0u64..u64::MAX, 12),
    ) {
        let g = FeynmanGraph::validate(raw.clone()).unwrap();
        prop_assume!(g.n_vertices() > 0 && g.is_connected());
        // a permutation of the edge indices drawn from the seed
        let mut perm: Vec<usize> = (0..raw.edges).collect();
        for (i, s) in perm_seed.iter().enumerate() {
            if raw.edges > 1 {
                let a = i % raw.edges;
                let b = (*s as usize) % raw.edges;
                perm.swap(a, b);
            }
        }
        let h = FeynmanGraph::validate(relabel(&raw, &perm)).unwrap();
        let ports = g.boundary_and_inner().ports;
        let x = XGraph::new(g, ports.clone()).unwrap();
        let y = XGraph::new(h, ports.iter().map(|&p| perm[p]).collect()).unwrap();
        prop_assert_eq!(canonical_form(&x), canonical_form(&y));
    }

    #[test]
    fn sticks_map_twice_per_orbit(raw in raw_graph()) {
        let g = FeynmanGraph::validate(raw).unwrap();
        let stick = line(0);
        prop_assert_eq!(
            enumerate_etale(&stick, &g, None).unwrap().len(),
            2 * g.orbits().len()
        );
    }

    #[test]
    fn gluing_removes_two_edges_per_pair(raw in glueable_graph(), pick in any::<u64>()) {
        let g = FeynmanGraph::validate(raw).unwrap();
        // gluing data are only defined over graphs without stick components
        prop_assume!(g.connected_components().iter().all(|c| !c.vertex_map.is_empty()));
        let ports = g.boundary_and_inner().ports;
        // pick one admissible pair of distinct, non-dual ports
        let mut pair = None;
        'outer: for (i, &a) in ports.iter().enumerate() {
            for &b in ports.iter().skip(i + 1) {
                if g.tau(a) != b && (pick % 3 == 0 || pair.is_none()) {
                    pair = Some((a, b));
                    if pick % 3 == 0 {
                        break 'outer;
                    }
                }
            }
        }
        prop_assume!(pair.is_some());
        let (a, b) = pair.unwrap();
        let datum = GluingDatum::new(g.clone(), vec![(a, b)]).unwrap();
        let (quot, q) = coequalize_gluing(&datum).unwrap();
        prop_assert_eq!(quot.n_edges(), g.n_edges() - 2);
        prop_assert_eq!(quot.n_vertices(), g.n_vertices());
        // the coequalizer map identifies exactly the glued flags
        prop_assert_eq!(q.f_e()[a], q.f_e()[g.tau(b)]);
        prop_assert_eq!(q.f_e()[g.tau(a)], q.f_e()[b]);
    }

    #[test]
    fn relabelled_lines_and_wheels_classify_correctly(
        k in 0usize..=3,
        m in 1usize..=4,
        perm_seed in proptest::collection::vec(0u64..u64::MAX, 12),
    ) {
        for (g, expected) in [
            (line(k), BivalentClass::Line(k)),
            (wheel(m), BivalentClass::Wheel(m)),
        ] {
            let raw = g.to_raw();
            let mut perm: Vec<usize> = (0..raw.edges).collect();
            for (i, s) in perm_seed.iter().enumerate() {
                perm.swap(i % raw.edges, (*s as usize) % raw.edges);
            }
            let h = FeynmanGraph::validate(relabel(&raw, &perm)).unwrap();
            let (class, iso) = classify_bivalent(&h).unwrap();
            prop_assert_eq!(class, expected);
            prop_assert!(iso.classify().iso);
        }
    }

    #[test]
    fn reduction_is_idempotent(graph_pick in 0usize..4, structure_pick in any::<u64>()) {
        let s = terminal_species(&Palette::directed(), 2).unwrap();
        let (sp, _) = apply_d(&s).unwrap();
        let g = [line(1), line(2), wheel(1), wheel(2)][graph_pick].clone();
        let structures = evaluate_species(sp.species(), &g, None).unwrap();
        prop_assume!(!structures.is_empty());
        let st = &structures[(structure_pick as usize) % structures.len()];
        let x = XGraph::new(g.clone(), g.boundary_and_inner().ports).unwrap();
        let class = reduced_representative(&sp, &x, st).unwrap();
        if let mge_core::SimilarityClass::Admissible { graph, structure, .. } = &class {
            let again = reduced_representative(&sp, graph, structure).unwrap();
            prop_assert!(again == class);
        }
    }
}
