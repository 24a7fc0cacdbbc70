//! Paths, cycles, simple connectivity, bivalent classification, and
//! directed (oriented) graph analysis.
//!
//! A path of length `k` in `g` is a morphism `Line(k) -> g`; a cycle is a
//! morphism `Wheel(m) -> g`.  A connected graph is simply connected when it
//! admits no locally injective cycle.

use crate::graph::{line, stick, wheel, FeynmanGraph};
use crate::morphism::{enumerate_all, enumerate_etale, GraphMorphism};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has a vertex of valency {valency}, expected all bivalent")]
    NotBivalent { valency: usize },
    #[error("invalid orientation: {reason}")]
    InvalidOrientation { reason: String },
}

/// An element of a graph: an edge or a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Element {
    Edge(usize),
    Vertex(usize),
}

/// A path: a morphism from `Line(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub length: usize,
    pub morphism: GraphMorphism,
}

impl Path {
    pub fn new(morphism: GraphMorphism) -> Path {
        let k = morphism.source().n_vertices();
        debug_assert_eq!(morphism.source().n_edges(), 2 * k + 2);
        Path {
            length: k,
            morphism,
        }
    }

    /// All elements of the target in the image of this path.
    pub fn image(&self) -> Vec<Element> {
        let mut out: Vec<Element> = self
            .morphism
            .f_e()
            .iter()
            .map(|&e| Element::Edge(e))
            .chain(self.morphism.f_v().iter().map(|&v| Element::Vertex(v)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_locally_injective(&self) -> bool {
        self.morphism.classify().locally_injective
    }
}

/// An orientation: a partition `E = E_in ⊔ E_out` with `e` inward iff
/// `τe` outward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    inward: Vec<bool>,
}

impl Orientation {
    pub fn new(g: &FeynmanGraph, in_edges: &[usize]) -> Result<Orientation, TopologyError> {
        let mut inward = vec![false; g.n_edges()];
        for &e in in_edges {
            if e >= g.n_edges() {
                return Err(TopologyError::InvalidOrientation {
                    reason: format!("edge {e} out of range"),
                });
            }
            inward[e] = true;
        }
        for e in 0..g.n_edges() {
            if inward[e] == inward[g.tau(e)] {
                return Err(TopologyError::InvalidOrientation {
                    reason: format!("edges {e} and {} break tau-duality", g.tau(e)),
                });
            }
        }
        Ok(Orientation { inward })
    }

    pub fn is_inward(&self, e: usize) -> bool {
        self.inward[e]
    }

    pub fn in_edges(&self) -> Vec<usize> {
        (0..self.inward.len()).filter(|&e| self.inward[e]).collect()
    }

    /// The distinguished orientation on `Line(k)`: even edges inward.
    pub fn theta_line(k: usize) -> Orientation {
        let g = line(k);
        Orientation::new(&g, &(0..g.n_edges()).filter(|e| e % 2 == 0).collect::<Vec<_>>())
            .expect("alternating orientation is valid")
    }

    /// The orientation on `Wheel(m)` induced by the canonical map from
    /// `Line(m)`: even edges inward.
    pub fn theta_wheel(m: usize) -> Orientation {
        let g = wheel(m);
        Orientation::new(&g, &(0..g.n_edges()).filter(|e| e % 2 == 0).collect::<Vec<_>>())
            .expect("alternating orientation is valid")
    }
}

/// Breadth-first search for a path connecting two elements.
/// Returns `None` iff the elements lie in different components (or an
/// endpoint is an isolated vertex, which no line morphism can reach).
pub fn find_connecting_path(
    g: &FeynmanGraph,
    x1: Element,
    x2: Element,
) -> Option<Path> {
    // Nodes: orbits (by representative = min edge) and vertices.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    enum Node {
        Orbit(usize),
        Vertex(usize),
    }
    let orbit_rep = |e: usize| e.min(g.tau(e));
    let start = match x1 {
        Element::Edge(e) => Node::Orbit(orbit_rep(e)),
        Element::Vertex(v) => Node::Vertex(v),
    };
    let goal = match x2 {
        Element::Edge(e) => Node::Orbit(orbit_rep(e)),
        Element::Vertex(v) => Node::Vertex(v),
    };
    // adjacency
    let mut vertex_edges: Vec<Vec<usize>> = vec![Vec::new(); g.n_vertices()];
    for h in 0..g.n_half_edges() {
        vertex_edges[g.vertex_of(h)].push(g.attach(h));
    }
    let neighbors = |n: Node| -> Vec<Node> {
        match n {
            Node::Orbit(r) => {
                let mut out = Vec::new();
                for e in [r, g.tau(r)] {
                    if let Some(h) = g.half_edge_of(e) {
                        out.push(Node::Vertex(g.vertex_of(h)));
                    }
                }
                out
            }
            Node::Vertex(v) => vertex_edges[v].iter().map(|&e| Node::Orbit(orbit_rep(e))).collect(),
        }
    };
    // BFS with parent pointers
    let key = |n: Node| match n {
        Node::Orbit(r) => r,
        Node::Vertex(v) => g.n_edges() + v,
    };
    let mut parent: Vec<Option<Node>> = vec![None; g.n_edges() + g.n_vertices()];
    let mut seen = vec![false; g.n_edges() + g.n_vertices()];
    let mut queue = VecDeque::new();
    seen[key(start)] = true;
    queue.push_back(start);
    let mut found = start == goal;
    while let Some(n) = queue.pop_front() {
        if n == goal {
            found = true;
            break;
        }
        for nb in neighbors(n) {
            if !seen[key(nb)] {
                seen[key(nb)] = true;
                parent[key(nb)] = Some(n);
                queue.push_back(nb);
            }
        }
    }
    if !found {
        return None;
    }
    // reconstruct node sequence start..goal
    let mut seq = vec![goal];
    while *seq.last().unwrap() != start {
        let p = parent[key(*seq.last().unwrap())].unwrap();
        seq.push(p);
    }
    seq.reverse();
    // Build a line morphism visiting the vertex nodes of `seq` in order.
    let vertices: Vec<usize> = seq
        .iter()
        .filter_map(|n| match n {
            Node::Vertex(v) => Some(*v),
            Node::Orbit(_) => None,
        })
        .collect();
    let k = vertices.len();
    if k == 0 {
        // both endpoints are edges in the same orbit: a length-0 path
        let e = match x1 {
            Element::Edge(e) => e,
            Element::Vertex(_) => unreachable!("vertex nodes would appear in seq"),
        };
        return Some(Path::new(GraphMorphism::choose_edge(g, e)));
    }
    // connecting orbits between consecutive vertices of seq
    let connecting: Vec<usize> = seq
        .windows(2)
        .filter_map(|w| match (w[0], w[1]) {
            (Node::Vertex(_), Node::Orbit(r)) => Some(r),
            _ => None,
        })
        .collect();
    // Line(k) layout: l_0 .. l_{2k+1}; w_i incident to l_{2i-1}, l_{2i}.
    // f(l_{2i-1}) ∈ E_{v_i} (entry), f(l_{2i}) ∈ E_{v_i} (exit),
    // f(l_{2i+1}) = tau f(l_{2i}).
    let lg = line(k);
    let mut f_e = vec![usize::MAX; lg.n_edges()];
    // entry edge of v_1
    let enters = |orbit_rep_e: usize, v: usize| -> Option<usize> {
        for e in [orbit_rep_e, g.tau(orbit_rep_e)] {
            if let Some(h) = g.half_edge_of(e) {
                if g.vertex_of(h) == v {
                    return Some(e);
                }
            }
        }
        None
    };
    // exit orbit of v_i is the connecting orbit after it (if any)
    let mut ci = 0usize; // index into connecting, consumed between vertices
    // entry of first vertex: either from x1's orbit (if seq starts with an orbit)
    // or any incident edge.
    let first_entry = match seq.first().unwrap() {
        Node::Orbit(r) => enters(*r, vertices[0]).expect("adjacent by construction"),
        Node::Vertex(_) => vertex_edges[vertices[0]][0],
    };
    f_e[1] = first_entry;
    f_e[0] = g.tau(first_entry);
    for (i, &v) in vertices.iter().enumerate() {
        // exit edge of v: toward the next node
        let exit = if i + 1 < k {
            // connecting orbit ci joins v and vertices[i+1]
            let r = connecting[ci];
            ci += 1;
            // the edge of the orbit incident to v
            let e_at_v = enters(r, v).expect("adjacent by construction");
            // entry of next vertex is tau(e_at_v)
            e_at_v
        } else {
            match seq.last().unwrap() {
                Node::Orbit(r) => {
                    // path exits through x2's orbit
                    enters(*r, v).unwrap_or(vertex_edges[v][0])
                }
                Node::Vertex(_) => vertex_edges[v][0],
            }
        };
        f_e[2 * i + 2] = exit;
        f_e[2 * i + 3] = g.tau(exit);
        if i + 1 < k {
            // entry of the next vertex
            f_e[2 * i + 3] = g.tau(exit);
        }
    }
    // fill entries for middle vertices: f(l_{2i+1}) computed above as
    // tau(exit of v_i) = entry of v_{i+1}; already set.
    debug_assert!(f_e.iter().all(|&x| x != usize::MAX));
    let m = GraphMorphism::validate(&lg, g, f_e, Some(vertices)).expect("BFS walk is a path");
    let p = Path::new(m);
    debug_assert!(p.image().contains(&x1) && p.image().contains(&x2));
    Some(p)
}

/// Iteratively remove backtracking at the lowest non-injective vertex until
/// the path is locally injective.
pub fn reduce_path(p: &Path) -> Path {
    let mut cur = p.clone();
    loop {
        let k = cur.length;
        let g = cur.morphism.target().clone();
        let fe = cur.morphism.f_e().to_vec();
        let fv = cur.morphism.f_v().to_vec();
        // lowest j in 1..=k with f(l_{2j-1}) = f(l_{2j})
        let bad = (1..=k).find(|&j| fe[2 * j - 1] == fe[2 * j]);
        let Some(j) = bad else {
            return cur;
        };
        let (nfe, nfv) = if j == 1 {
            // drop the first vertex: l'_i -> l_{i+2}
            (
                (0..2 * k).map(|i| fe[i + 2]).collect::<Vec<_>>(),
                fv[1..].to_vec(),
            )
        } else if j == k {
            // drop the last vertex: l'_i -> l_i
            (fe[..2 * k].to_vec(), fv[..k - 1].to_vec())
        } else {
            // splice out vertices j and j+1
            let nfe: Vec<usize> = (0..2 * (k - 2) + 2)
                .map(|i| if i <= 2 * j - 3 { fe[i] } else { fe[i + 4] })
                .collect();
            let nfv: Vec<usize> = (0..k - 2)
                .map(|i| if i < j - 1 { fv[i] } else { fv[i + 2] })
                .collect();
            (nfe, nfv)
        };
        let nk = nfv.len();
        let m = GraphMorphism::validate(&line(nk), &g, nfe, Some(nfv))
            .expect("path reduction yields a path");
        cur = Path::new(m);
    }
}

/// Check simple connectivity; on failure return a locally injective cycle.
pub fn is_simply_connected(
    g: &FeynmanGraph,
) -> Result<(bool, Option<GraphMorphism>), TopologyError> {
    if !g.is_connected() {
        return Err(TopologyError::NotConnected);
    }
    let max_m = g.n_edges().max(1);
    for m in 1..=max_m {
        let cycles = enumerate_all(&wheel(m), g, None).unwrap_or_default();
        for c in cycles {
            if c.classify().locally_injective {
                return Ok((false, Some(c)));
            }
        }
    }
    Ok((true, None))
}

/// The standard model of a connected graph all of whose vertices are
/// bivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BivalentClass {
    Line(usize),
    Wheel(usize),
}

/// Classify a connected, purely bivalent graph as a line or wheel, with an
/// explicit isomorphism from the standard model.
pub fn classify_bivalent(
    g: &FeynmanGraph,
) -> Result<(BivalentClass, GraphMorphism), TopologyError> {
    if !g.is_connected() {
        return Err(TopologyError::NotConnected);
    }
    for v in g.valencies() {
        if v != 2 {
            return Err(TopologyError::NotBivalent { valency: v });
        }
    }
    let (class, model) = if g.n_vertices() == 0 {
        (BivalentClass::Line(0), stick())
    } else if g.boundary_and_inner().ports.is_empty() {
        (BivalentClass::Wheel(g.n_vertices()), wheel(g.n_vertices()))
    } else {
        (BivalentClass::Line(g.n_vertices()), line(g.n_vertices()))
    };
    let iso = enumerate_etale(&model, g, None)
        .ok()
        .and_then(|ms| ms.into_iter().find(|f| f.classify().iso))
        .expect("standard model is isomorphic by construction");
    Ok((class, iso))
}

/// Result of analysing a directed graph.
#[derive(Debug, Clone)]
pub struct DirectedAnalysis {
    /// Directed paths of length up to `|V|` (length 1 and above).
    pub directed_paths: Vec<Path>,
    /// Directed cycles of length up to `|E|`.
    pub directed_cycles: Vec<GraphMorphism>,
    pub is_dag: bool,
}

fn is_directed_path(p: &GraphMorphism, xi: &Orientation) -> bool {
    // theta on Line: even edges inward; f must match pointwise.
    p.f_e()
        .iter()
        .enumerate()
        .all(|(l, &e)| (l % 2 == 0) == xi.is_inward(e))
}

fn is_directed_cycle(c: &GraphMorphism, xi: &Orientation) -> bool {
    // theta on Wheel: even edges inward.
    c.f_e()
        .iter()
        .enumerate()
        .all(|(a, &e)| (a % 2 == 0) == xi.is_inward(e))
}

pub fn directed_analysis(
    g: &FeynmanGraph,
    xi: &Orientation,
) -> Result<DirectedAnalysis, TopologyError> {
    if xi.in_edges().len() * 2 != g.n_edges() {
        return Err(TopologyError::InvalidOrientation {
            reason: "orientation size does not match the graph".into(),
        });
    }
    let mut directed_paths = Vec::new();
    for k in 1..=g.n_vertices() {
        for p in enumerate_all(&line(k), g, None).unwrap_or_default() {
            if is_directed_path(&p, xi) {
                let path = Path::new(p);
                debug_assert!(path.is_locally_injective());
                directed_paths.push(path);
            }
        }
    }
    let mut directed_cycles = Vec::new();
    for m in 1..=g.n_edges().max(1) {
        for c in enumerate_all(&wheel(m), g, None).unwrap_or_default() {
            if is_directed_cycle(&c, xi) {
                debug_assert!(c.classify().locally_injective);
                directed_cycles.push(c);
            }
        }
    }
    let is_dag = directed_cycles.is_empty();
    Ok(DirectedAnalysis {
        directed_paths,
        directed_cycles,
        is_dag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{corolla, line, stick, wheel, FeynmanGraph};

    #[test]
    fn corolla_one_paths() {
        let g = corolla(1);
        let p = find_connecting_path(&g, Element::Vertex(0), Element::Edge(0)).unwrap();
        assert_eq!(p.length, 1);
        assert!(p.image().contains(&Element::Vertex(0)));
        assert!(p.image().contains(&Element::Edge(0)));
    }

    #[test]
    fn edge_and_involution_partner_connected_by_length_zero() {
        let g = wheel(2);
        for e in 0..g.n_edges() {
            let p =
                find_connecting_path(&g, Element::Edge(e), Element::Edge(g.tau(e))).unwrap();
            assert_eq!(p.length, 0);
        }
    }

    #[test]
    fn disjoint_components_not_connected() {
        let (g, _) = FeynmanGraph::disjoint_union(&[corolla(2), corolla(2)]);
        assert!(find_connecting_path(&g, Element::Vertex(0), Element::Vertex(1)).is_none());
        assert!(find_connecting_path(&g, Element::Edge(0), Element::Vertex(1)).is_none());
    }

    #[test]
    fn path_connectedness_matches_component_analysis() {
        let fixtures = vec![
            line(3),
            wheel(2),
            FeynmanGraph::disjoint_union(&[line(1), wheel(1)]).0,
            corolla(3),
        ];
        for g in fixtures {
            let comps = g.connected_components();
            // component id of each element
            let comp_of = |x: Element| -> usize {
                for (i, c) in comps.iter().enumerate() {
                    match x {
                        Element::Edge(e) => {
                            if c.edge_map.contains(&e) {
                                return i;
                            }
                        }
                        Element::Vertex(v) => {
                            if c.vertex_map.contains(&v) {
                                return i;
                            }
                        }
                    }
                }
                unreachable!()
            };
            let mut elements: Vec<Element> =
                (0..g.n_edges()).map(Element::Edge).collect();
            elements.extend((0..g.n_vertices()).map(Element::Vertex));
            for &a in &elements {
                for &b in &elements {
                    if a == b {
                        continue;
                    }
                    let connected = find_connecting_path(&g, a, b).is_some();
                    assert_eq!(connected, comp_of(a) == comp_of(b), "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn connecting_paths_are_reducible_to_locally_injective() {
        let g = wheel(3);
        for e in 0..g.n_edges() {
            for v in 0..g.n_vertices() {
                let p = find_connecting_path(&g, Element::Edge(e), Element::Vertex(v)).unwrap();
                let r = reduce_path(&p);
                assert!(r.is_locally_injective());
                assert_eq!(reduce_path(&r), r, "idempotent");
            }
        }
    }

    #[test]
    fn reduce_backtracking_path() {
        // length-2 path on Wheel(1) that backtracks at its first vertex:
        // l_1 and l_2 map to the same loop edge.
        let g = wheel(1);
        let lg = line(2);
        let f = GraphMorphism::validate(&lg, &g, vec![1, 0, 0, 1, 1, 0], Some(vec![0, 0]))
            .unwrap();
        let p = Path::new(f);
        assert!(!p.is_locally_injective());
        let r = reduce_path(&p);
        assert!(r.is_locally_injective());
        assert!(r.length < 2);
    }

    #[test]
    fn exhaustive_reduction_on_corolla_paths() {
        let g = corolla(2);
        for k in 0..=3 {
            for f in enumerate_all(&line(k), &g, None).unwrap() {
                let r = reduce_path(&Path::new(f));
                assert!(r.is_locally_injective());
                assert_eq!(reduce_path(&r), r);
            }
        }
    }

    #[test]
    fn corollas_and_lines_simply_connected() {
        for g in [corolla(1), corolla(3), line(0), line(1), line(3), stick()] {
            let (ok, witness) = is_simply_connected(&g).unwrap();
            assert!(ok, "{g:?}");
            assert!(witness.is_none());
        }
    }

    #[test]
    fn wheels_not_simply_connected() {
        for m in 1..=3 {
            let (ok, witness) = is_simply_connected(&wheel(m)).unwrap();
            assert!(!ok);
            let w = witness.unwrap();
            assert!(w.classify().locally_injective);
        }
    }

    #[test]
    fn inner_edges_iff_cycles_from_wheel_two() {
        let fixtures = vec![corolla(2), line(0), line(2), wheel(1), wheel(3)];
        for g in fixtures {
            let has_inner = !g.boundary_and_inner().inner_orbits.is_empty();
            let has_cycle = !enumerate_all(&wheel(2), &g, None).unwrap().is_empty();
            assert_eq!(has_inner, has_cycle, "{g:?}");
        }
    }

    #[test]
    fn locally_injective_into_simply_connected_is_pointwise_injective() {
        let targets = vec![line(3), corolla(4)];
        let sources = vec![line(1), line(2), corolla(4), stick()];
        for t in &targets {
            assert!(is_simply_connected(t).unwrap().0);
            for s in &sources {
                if !s.is_connected() {
                    continue;
                }
                for f in enumerate_all(s, t, None).unwrap() {
                    if f.classify().locally_injective {
                        assert!(f.is_pointwise_injective(), "{s:?} -> {t:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn bivalent_classification() {
        // stick
        let (c, _) = classify_bivalent(&stick()).unwrap();
        assert_eq!(c, BivalentClass::Line(0));
        // relabelled wheel(3): rotate edge indices
        let w = wheel(3);
        let ne = w.n_edges();
        let perm: Vec<usize> = (0..ne).map(|e| (e + 2) % ne).collect();
        let raw = crate::graph::RawGraph {
            edges: ne,
            involution: {
                let mut inv = vec![0; ne];
                for e in 0..ne {
                    inv[perm[e]] = perm[w.tau(e)];
                }
                inv
            },
            half_edges: (0..w.n_half_edges())
                .map(|h| (perm[w.attach(h)], w.vertex_of(h)))
                .collect(),
            vertices: w.n_vertices(),
            labels: Default::default(),
        };
        let w2 = FeynmanGraph::validate(raw).unwrap();
        let (c, iso) = classify_bivalent(&w2).unwrap();
        assert_eq!(c, BivalentClass::Wheel(3));
        assert!(iso.classify().iso);
        // line(2) as built
        let (c, iso) = classify_bivalent(&line(2)).unwrap();
        assert_eq!(c, BivalentClass::Line(2));
        assert!(iso.classify().iso);
        // corolla is rejected
        assert!(matches!(
            classify_bivalent(&corolla(3)),
            Err(TopologyError::NotBivalent { valency: 3 })
        ));
    }

    #[test]
    fn line_with_theta_is_dag() {
        for k in 1..=3 {
            let g = line(k);
            let xi = Orientation::theta_line(k);
            let a = directed_analysis(&g, &xi).unwrap();
            assert!(a.is_dag);
            assert!(!a.directed_paths.is_empty());
            for p in &a.directed_paths {
                assert!(p.is_locally_injective());
            }
        }
    }

    #[test]
    fn wheel_with_theta_has_directed_cycle() {
        for m in 1..=3 {
            let g = wheel(m);
            let xi = Orientation::theta_wheel(m);
            let a = directed_analysis(&g, &xi).unwrap();
            assert!(!a.is_dag);
            assert!(!a.directed_cycles.is_empty());
            for c in &a.directed_cycles {
                assert!(c.classify().locally_injective);
            }
        }
    }

    #[test]
    fn corolla_all_in_is_dag() {
        let g = corolla(3);
        // orientation: attached edges inward, ports outward
        let in_edges: Vec<usize> = (3..6).collect();
        let xi = Orientation::new(&g, &in_edges).unwrap();
        let a = directed_analysis(&g, &xi).unwrap();
        assert!(a.is_dag);
    }

    #[test]
    fn invalid_orientations_rejected() {
        let g = line(1);
        assert!(Orientation::new(&g, &[0, 1]).is_err());
        assert!(Orientation::new(&g, &[]).is_err());
        assert!(Orientation::new(&g, &[0, 2]).is_ok());
    }

    #[test]
    fn etale_between_connected_dags_is_mono() {
        // oriented line fixtures: every etale morphism between them that
        // respects the orientations is pointwise injective.
        for k in 1..=2 {
            for n in k..=4 {
                let xi_s = Orientation::theta_line(k);
                let xi_t = Orientation::theta_line(n);
                for f in enumerate_etale(&line(k), &line(n), None).unwrap() {
                    let respects = f
                        .f_e()
                        .iter()
                        .enumerate()
                        .all(|(e, &ie)| xi_s.is_inward(e) == xi_t.is_inward(ie));
                    if respects {
                        assert!(f.is_pointwise_injective());
                        assert!(f.classify().mono);
                    }
                }
            }
        }
    }

    #[test]
    fn theta_wheel_agrees_with_canonical_line_map() {
        // the canonical Line(m) -> Wheel(m) sends theta_line to theta_wheel
        for m in 1..=3 {
            let xi_l = Orientation::theta_line(m);
            let xi_w = Orientation::theta_wheel(m);
            let found = enumerate_etale(&line(m), &wheel(m), None)
                .unwrap()
                .into_iter()
                .any(|f| {
                    f.f_e()
                        .iter()
                        .enumerate()
                        .all(|(e, &ie)| xi_l.is_inward(e) == xi_w.is_inward(ie))
                });
            assert!(found, "m = {m}");
        }
    }
}
