//! Feynman graphs as validated finite-set diagrams.
//!
//! A graph is a diagram `E <-s- H -t-> V` of finite sets together with an
//! involution `tau` on `E` that has no fixed points, where the attachment
//! map `s` is injective.  Edges not in the image of `s` are *ports* (the
//! boundary); edges whose whole `tau`-orbit lies in the image of `s` are
//! *inner* edges.  All indices are dense `usize` values; human-readable
//! labels are carried in a side table.

use std::collections::BTreeMap;
use thiserror::Error;

/// Validation errors for raw graph diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("involution has fixed point at edge {edge} (exceptional-loop shape)")]
    FixedPointInvolution { edge: usize },
    #[error("attachment map is not injective: half-edges {first} and {second} both attach to edge {edge}")]
    NonInjectiveAttach {
        edge: usize,
        first: usize,
        second: usize,
    },
    #[error("tau is not an involution at edge {edge}: tau(tau({edge})) = {image}")]
    NotAnInvolution { edge: usize, image: usize },
    #[error("index out of range: {what} {index} (bound {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("unknown vertex {vertex}")]
    UnknownVertex { vertex: usize },
    #[error("invalid parameter for standard graph: {reason}")]
    InvalidParameter { reason: String },
}

/// Raw diagram of finite-set maps, accepted for inspection before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGraph {
    /// Number of edges `|E|`.
    pub edges: usize,
    /// Involution `tau: E -> E`, as a dense table.
    pub involution: Vec<usize>,
    /// Half-edges as `(edge, vertex)` pairs: `s(h)` and `t(h)`.
    pub half_edges: Vec<(usize, usize)>,
    /// Number of vertices `|V|`.
    pub vertices: usize,
    /// Optional human-readable edge labels (port names, X-labels).
    pub labels: BTreeMap<usize, String>,
}

/// A validated Feynman graph.  Immutable: every "modification" constructs a
/// new graph together with witnessing index maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeynmanGraph {
    n_edges: usize,
    n_vertices: usize,
    /// `s: H -> E`, injective.
    attach: Vec<usize>,
    /// `t: H -> V`.
    target: Vec<usize>,
    /// `tau: E -> E`, fixed-point-free involution.
    involution: Vec<usize>,
    /// Edge labels (ports of standard graphs keep their construction names).
    labels: BTreeMap<usize, String>,
}

/// Standard graph constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    /// Two edges swapped by `tau`, no vertices.
    Stick,
    /// One vertex with the given boundary labels.
    Corolla(Vec<String>),
    /// Chain of `k` bivalent vertices with ports `1_L`, `2_L`.
    Line(usize),
    /// Cycle of `m >= 1` bivalent vertices, empty boundary.
    Wheel(usize),
    /// Two vertices joined by one inner orbit; boundaries `X` and `Y`,
    /// glued along ports named `x0` (on the X side) and `y0` (on the Y side).
    MGraph {
        x: Vec<String>,
        y: Vec<String>,
        x0: String,
        y0: String,
    },
    /// One vertex with boundary `X` and a loop obtained by gluing `x0`, `y0`.
    NGraph {
        x: Vec<String>,
        x0: String,
        y0: String,
    },
    /// A single vertex with no edges.
    IsolatedVertex,
}

/// Boundary / inner decomposition of the edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryInner {
    /// `E0 = E \ im(s)`, sorted.
    pub ports: Vec<usize>,
    /// Maximal tau-closed subset of `im(s)`, sorted.
    pub inner: Vec<usize>,
    /// Inner tau-orbits as `[e, tau e]` with `e < tau e`.
    pub inner_orbits: Vec<[usize; 2]>,
}

/// Local data at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    /// `H_v = t^{-1}(v)`, sorted.
    pub incident_half_edges: Vec<usize>,
    /// `E_v = s(H_v)`, in the order of `incident_half_edges`.
    pub incident_edges: Vec<usize>,
    /// `|v| = |H_v|`.
    pub valency: usize,
}

/// A connected component together with its inclusion into the parent graph.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: FeynmanGraph,
    /// Component edge index -> parent edge index.
    pub edge_map: Vec<usize>,
    /// Component half-edge index -> parent half-edge index.
    pub half_edge_map: Vec<usize>,
    /// Component vertex index -> parent vertex index.
    pub vertex_map: Vec<usize>,
    /// True when the component is a single tau-orbit with no vertices.
    pub is_stick: bool,
}

/// Inclusion maps of a summand into a disjoint union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    pub edge_map: Vec<usize>,
    pub half_edge_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl FeynmanGraph {
    /// Validate a raw diagram.  On success all type invariants hold.
    pub fn validate(raw: RawGraph) -> Result<FeynmanGraph, GraphError> {
        let ne = raw.edges;
        if raw.involution.len() != ne {
            return Err(GraphError::IndexOutOfRange {
                what: "involution table length",
                index: raw.involution.len(),
                bound: ne,
            });
        }
        for (e, &ie) in raw.involution.iter().enumerate() {
            if ie >= ne {
                return Err(GraphError::IndexOutOfRange {
                    what: "involution image of edge",
                    index: ie,
                    bound: ne,
                });
            }
            if ie == e {
                return Err(GraphError::FixedPointInvolution { edge: e });
            }
        }
        for (e, &ie) in raw.involution.iter().enumerate() {
            if raw.involution[ie] != e {
                return Err(GraphError::NotAnInvolution {
                    edge: e,
                    image: raw.involution[ie],
                });
            }
        }
        let mut attach = Vec::with_capacity(raw.half_edges.len());
        let mut target = Vec::with_capacity(raw.half_edges.len());
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (h, &(e, v)) in raw.half_edges.iter().enumerate() {
            if e >= ne {
                return Err(GraphError::IndexOutOfRange {
                    what: "half-edge attachment",
                    index: e,
                    bound: ne,
                });
            }
            if v >= raw.vertices {
                return Err(GraphError::IndexOutOfRange {
                    what: "half-edge vertex",
                    index: v,
                    bound: raw.vertices,
                });
            }
            if let Some(&first) = seen.get(&e) {
                return Err(GraphError::NonInjectiveAttach {
                    edge: e,
                    first,
                    second: h,
                });
            }
            seen.insert(e, h);
            attach.push(e);
            target.push(v);
        }
        for &e in raw.labels.keys() {
            if e >= ne {
                return Err(GraphError::IndexOutOfRange {
                    what: "label edge",
                    index: e,
                    bound: ne,
                });
            }
        }
        Ok(FeynmanGraph {
            n_edges: ne,
            n_vertices: raw.vertices,
            attach,
            target,
            involution: raw.involution,
            labels: raw.labels,
        })
    }

    /// Build one of the standard graphs.
    pub fn standard(kind: GraphKind) -> Result<FeynmanGraph, GraphError> {
        let raw = match kind {
            GraphKind::Stick => RawGraph {
                edges: 2,
                involution: vec![1, 0],
                half_edges: vec![],
                vertices: 0,
                labels: [(0, "1".to_string()), (1, "2".to_string())].into(),
            },
            GraphKind::Corolla(x) => {
                // Edges 0..n are the ports X, edges n..2n their partners
                // (attached copies), one vertex.
                let n = x.len();
                let mut labels = BTreeMap::new();
                for (i, name) in x.iter().enumerate() {
                    labels.insert(i, name.clone());
                }
                RawGraph {
                    edges: 2 * n,
                    involution: (0..2 * n).map(|e| (e + n) % (2 * n)).collect(),
                    half_edges: (0..n).map(|i| (n + i, 0)).collect(),
                    vertices: 1,
                    labels,
                }
            }
            GraphKind::Line(k) => {
                // Edges l_0 .. l_{2k+1}; tau(l_{2i}) = l_{2i+1};
                // vertex w_i (1-based) incident to {l_{2i-1}, l_{2i}}.
                let mut half_edges = Vec::new();
                for i in 1..=k {
                    half_edges.push((2 * i - 1, i - 1));
                    half_edges.push((2 * i, i - 1));
                }
                RawGraph {
                    edges: 2 * k + 2,
                    involution: (0..2 * k + 2)
                        .map(|e| if e % 2 == 0 { e + 1 } else { e - 1 })
                        .collect(),
                    half_edges,
                    vertices: k,
                    labels: [(0, "1_L".to_string()), (2 * k + 1, "2_L".to_string())].into(),
                }
            }
            GraphKind::Wheel(m) => {
                if m == 0 {
                    return Err(GraphError::InvalidParameter {
                        reason: "Wheel(0) is not a graph".into(),
                    });
                }
                // Edges a_1 .. a_{2m} (0-based 0..2m); tau(a_{2i}) = a_{2i+1}
                // cyclically; vertex v_i incident to {a_{2i-1}, a_{2i}}.
                let mut half_edges = Vec::new();
                for i in 1..=m {
                    half_edges.push((2 * i - 2, i - 1));
                    half_edges.push((2 * i - 1, i - 1));
                }
                RawGraph {
                    edges: 2 * m,
                    // 0-based: a_j has index j-1. tau pairs (a_{2i}, a_{2i+1})
                    // i.e. indices (2i-1, 2i) mod 2m.
                    involution: (0..2 * m)
                        .map(|e| if e % 2 == 1 { (e + 1) % (2 * m) } else { (e + 2 * m - 1) % (2 * m) })
                        .collect(),
                    half_edges,
                    vertices: m,
                    labels: BTreeMap::new(),
                }
            }
            GraphKind::MGraph { x, y, x0, y0 } => {
                // Ports: X then Y.  Attached copies X', Y'.  Then the inner
                // orbit {x0, y0}: x0 attached at v_X, y0 attached at v_Y.
                let (nx, ny) = (x.len(), y.len());
                let n = nx + ny;
                let mut labels = BTreeMap::new();
                for (i, name) in x.iter().chain(y.iter()).enumerate() {
                    labels.insert(i, name.clone());
                }
                labels.insert(2 * n, x0);
                labels.insert(2 * n + 1, y0);
                let mut half_edges = Vec::new();
                for i in 0..nx {
                    half_edges.push((n + i, 0));
                }
                half_edges.push((2 * n, 0));
                for i in 0..ny {
                    half_edges.push((n + nx + i, 1));
                }
                half_edges.push((2 * n + 1, 1));
                let mut involution: Vec<usize> = (0..2 * n).map(|e| (e + n) % (2 * n)).collect();
                involution.push(2 * n + 1);
                involution.push(2 * n);
                RawGraph {
                    edges: 2 * n + 2,
                    involution,
                    half_edges,
                    vertices: 2,
                    labels,
                }
            }
            GraphKind::NGraph { x, x0, y0 } => {
                // Ports X, attached copies X', then the loop orbit {x0, y0}
                // with both halves attached to the single vertex.
                let n = x.len();
                let mut labels = BTreeMap::new();
                for (i, name) in x.iter().enumerate() {
                    labels.insert(i, name.clone());
                }
                labels.insert(2 * n, x0);
                labels.insert(2 * n + 1, y0);
                let mut half_edges: Vec<(usize, usize)> = (0..n).map(|i| (n + i, 0)).collect();
                half_edges.push((2 * n, 0));
                half_edges.push((2 * n + 1, 0));
                let mut involution: Vec<usize> = (0..2 * n).map(|e| (e + n) % (2 * n)).collect();
                involution.push(2 * n + 1);
                involution.push(2 * n);
                RawGraph {
                    edges: 2 * n + 2,
                    involution,
                    half_edges,
                    vertices: 1,
                    labels,
                }
            }
            GraphKind::IsolatedVertex => RawGraph {
                edges: 0,
                involution: vec![],
                half_edges: vec![],
                vertices: 1,
                labels: BTreeMap::new(),
            },
        };
        FeynmanGraph::validate(raw)
    }

    /// The empty graph (initial object).
    pub fn empty() -> FeynmanGraph {
        FeynmanGraph::validate(RawGraph {
            edges: 0,
            involution: vec![],
            half_edges: vec![],
            vertices: 0,
            labels: BTreeMap::new(),
        })
        .expect("empty diagram is valid")
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn n_half_edges(&self) -> usize {
        self.attach.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// `s(h)`.
    pub fn attach(&self, h: usize) -> usize {
        self.attach[h]
    }

    /// `t(h)`.
    pub fn vertex_of(&self, h: usize) -> usize {
        self.target[h]
    }

    /// `tau(e)`.
    pub fn tau(&self, e: usize) -> usize {
        self.involution[e]
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn label(&self, e: usize) -> Option<&str> {
        self.labels.get(&e).map(|s| s.as_str())
    }

    /// Replace the label table (used when re-labelling boundaries).
    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> FeynmanGraph {
        self.labels = labels;
        self
    }

    /// Half-edge attached to `e`, if `e` is in the image of `s`.
    pub fn half_edge_of(&self, e: usize) -> Option<usize> {
        self.attach.iter().position(|&a| a == e)
    }

    /// True when `e` is a port (not in the image of `s`).
    pub fn is_port(&self, e: usize) -> bool {
        self.half_edge_of(e).is_none()
    }

    /// Boundary / inner decomposition.
    pub fn boundary_and_inner(&self) -> BoundaryInner {
        let attached: Vec<bool> = {
            let mut a = vec![false; self.n_edges];
            for &e in &self.attach {
                a[e] = true;
            }
            a
        };
        let ports: Vec<usize> = (0..self.n_edges).filter(|&e| !attached[e]).collect();
        let inner: Vec<usize> = (0..self.n_edges)
            .filter(|&e| attached[e] && attached[self.involution[e]])
            .collect();
        let inner_orbits: Vec<[usize; 2]> = inner
            .iter()
            .copied()
            .filter(|&e| e < self.involution[e])
            .map(|e| [e, self.involution[e]])
            .collect();
        BoundaryInner {
            ports,
            inner,
            inner_orbits,
        }
    }

    /// Tau-orbits as `[e, tau e]` pairs with `e < tau e`, sorted.
    pub fn orbits(&self) -> Vec<[usize; 2]> {
        (0..self.n_edges)
            .filter(|&e| e < self.involution[e])
            .map(|e| [e, self.involution[e]])
            .collect()
    }

    /// Local data at `v`.
    pub fn vertex_data(&self, v: usize) -> Result<VertexData, GraphError> {
        if v >= self.n_vertices {
            return Err(GraphError::UnknownVertex { vertex: v });
        }
        let incident_half_edges: Vec<usize> = (0..self.attach.len())
            .filter(|&h| self.target[h] == v)
            .collect();
        let incident_edges: Vec<usize> =
            incident_half_edges.iter().map(|&h| self.attach[h]).collect();
        let valency = incident_half_edges.len();
        Ok(VertexData {
            incident_half_edges,
            incident_edges,
            valency,
        })
    }

    /// Valencies of all vertices.
    pub fn valencies(&self) -> Vec<usize> {
        let mut val = vec![0usize; self.n_vertices];
        for &v in &self.target {
            val[v] += 1;
        }
        val
    }

    /// Union-find partition of `E ⊔ V`; returns representative ids where
    /// element `e` is index `e` and vertex `v` is index `n_edges + v`.
    fn component_ids(&self) -> Vec<usize> {
        let n = self.n_edges + self.n_vertices;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        };
        for e in 0..self.n_edges {
            union(&mut parent, e, self.involution[e]);
        }
        for h in 0..self.attach.len() {
            union(&mut parent, self.attach[h], self.n_edges + self.target[h]);
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }

    /// Connected components with inclusion maps; maximal and pairwise
    /// disjoint, stick components flagged.
    pub fn connected_components(&self) -> Vec<Component> {
        let ids = self.component_ids();
        let mut reps: Vec<usize> = ids.clone();
        reps.sort_unstable();
        reps.dedup();
        let mut out = Vec::new();
        for rep in reps {
            let edge_map: Vec<usize> = (0..self.n_edges).filter(|&e| ids[e] == rep).collect();
            let vertex_map: Vec<usize> = (0..self.n_vertices)
                .filter(|&v| ids[self.n_edges + v] == rep)
                .collect();
            let half_edge_map: Vec<usize> = (0..self.attach.len())
                .filter(|&h| ids[self.attach[h]] == rep)
                .collect();
            let edge_index: BTreeMap<usize, usize> =
                edge_map.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            let vertex_index: BTreeMap<usize, usize> =
                vertex_map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let raw = RawGraph {
                edges: edge_map.len(),
                involution: edge_map.iter().map(|&e| edge_index[&self.involution[e]]).collect(),
                half_edges: half_edge_map
                    .iter()
                    .map(|&h| (edge_index[&self.attach[h]], vertex_index[&self.target[h]]))
                    .collect(),
                vertices: vertex_map.len(),
                labels: edge_map
                    .iter()
                    .enumerate()
                    .filter_map(|(i, e)| self.labels.get(e).map(|l| (i, l.clone())))
                    .collect(),
            };
            let graph = FeynmanGraph::validate(raw).expect("component of a valid graph is valid");
            let is_stick = vertex_map.is_empty() && edge_map.len() == 2;
            out.push(Component {
                graph,
                edge_map,
                half_edge_map,
                vertex_map,
                is_stick,
            });
        }
        out
    }

    /// True when the graph is connected (at most one component; the empty
    /// graph is *not* connected per the component-count convention used in
    /// the connectivity proposition, but is handled separately by callers).
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Pointwise disjoint union, with inclusion maps.
    pub fn disjoint_union(graphs: &[FeynmanGraph]) -> (FeynmanGraph, Vec<Inclusion>) {
        let mut edges = 0usize;
        let mut vertices = 0usize;
        let mut involution = Vec::new();
        let mut half_edges = Vec::new();
        let mut labels = BTreeMap::new();
        let mut inclusions = Vec::new();
        let mut half_off = 0usize;
        for g in graphs {
            let inc = Inclusion {
                edge_map: (0..g.n_edges).map(|e| e + edges).collect(),
                half_edge_map: (0..g.attach.len()).map(|h| h + half_off).collect(),
                vertex_map: (0..g.n_vertices).map(|v| v + vertices).collect(),
            };
            involution.extend(g.involution.iter().map(|&e| e + edges));
            half_edges.extend(
                g.attach
                    .iter()
                    .zip(g.target.iter())
                    .map(|(&e, &v)| (e + edges, v + vertices)),
            );
            for (&e, l) in &g.labels {
                labels.insert(e + edges, l.clone());
            }
            edges += g.n_edges;
            vertices += g.n_vertices;
            half_off += g.attach.len();
            inclusions.push(inc);
        }
        let g = FeynmanGraph::validate(RawGraph {
            edges,
            involution,
            half_edges,
            vertices,
            labels,
        })
        .expect("disjoint union of valid graphs is valid");
        (g, inclusions)
    }

    /// Grading check helper: edges attached to vertices of valency `n`.
    pub fn edges_at_valency(&self, n: usize) -> Vec<usize> {
        let val = self.valencies();
        (0..self.attach.len())
            .filter(|&h| val[self.target[h]] == n)
            .map(|h| self.attach[h])
            .collect()
    }

    /// Convert back to a raw diagram (inverse of `validate` up to identity).
    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            edges: self.n_edges,
            involution: self.involution.clone(),
            half_edges: self
                .attach
                .iter()
                .zip(self.target.iter())
                .map(|(&e, &v)| (e, v))
                .collect(),
            vertices: self.n_vertices,
            labels: self.labels.clone(),
        }
    }
}

/// Convenience constructors used across the crate and tests.
pub fn stick() -> FeynmanGraph {
    FeynmanGraph::standard(GraphKind::Stick).unwrap()
}

pub fn corolla(n: usize) -> FeynmanGraph {
    FeynmanGraph::standard(GraphKind::Corolla(
        (1..=n).map(|i| i.to_string()).collect(),
    ))
    .unwrap()
}

pub fn line(k: usize) -> FeynmanGraph {
    FeynmanGraph::standard(GraphKind::Line(k)).unwrap()
}

pub fn wheel(m: usize) -> FeynmanGraph {
    FeynmanGraph::standard(GraphKind::Wheel(m)).unwrap()
}

pub fn isolated_vertex() -> FeynmanGraph {
    FeynmanGraph::standard(GraphKind::IsolatedVertex).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stick_layout() {
        let g = stick();
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.n_vertices(), 0);
        let bi = g.boundary_and_inner();
        assert_eq!(bi.ports, vec![0, 1]);
        assert!(bi.inner.is_empty());
    }

    #[test]
    fn exceptional_loop_rejected() {
        let raw = RawGraph {
            edges: 1,
            involution: vec![0],
            half_edges: vec![],
            vertices: 0,
            labels: BTreeMap::new(),
        };
        assert_eq!(
            FeynmanGraph::validate(raw),
            Err(GraphError::FixedPointInvolution { edge: 0 })
        );
    }

    #[test]
    fn non_injective_attach_rejected() {
        let raw = RawGraph {
            edges: 2,
            involution: vec![1, 0],
            half_edges: vec![(0, 0), (0, 0)],
            vertices: 1,
            labels: BTreeMap::new(),
        };
        assert!(matches!(
            FeynmanGraph::validate(raw),
            Err(GraphError::NonInjectiveAttach { edge: 0, .. })
        ));
    }

    #[test]
    fn not_an_involution_rejected() {
        let raw = RawGraph {
            edges: 3,
            involution: vec![1, 2, 0],
            half_edges: vec![],
            vertices: 0,
            labels: BTreeMap::new(),
        };
        assert!(matches!(
            FeynmanGraph::validate(raw),
            Err(GraphError::NotAnInvolution { .. })
        ));
    }

    #[test]
    fn empty_graph_valid() {
        let g = FeynmanGraph::empty();
        assert_eq!(g.connected_components().len(), 0);
    }

    #[test]
    fn corolla_counts() {
        let g = corolla(3);
        assert_eq!(g.n_edges(), 6);
        assert_eq!(g.n_half_edges(), 3);
        assert_eq!(g.n_vertices(), 1);
        let bi = g.boundary_and_inner();
        assert_eq!(bi.ports.len(), 3);
        assert!(bi.inner.is_empty());
        assert_eq!(g.vertex_data(0).unwrap().valency, 3);
    }

    #[test]
    fn line_counts() {
        for k in 0..5 {
            let g = line(k);
            assert_eq!(g.n_edges(), 2 * k + 2);
            assert_eq!(g.n_vertices(), k);
            let bi = g.boundary_and_inner();
            assert_eq!(bi.ports, vec![0, 2 * k + 1]);
            assert_eq!(g.label(0), Some("1_L"));
            assert_eq!(g.label(2 * k + 1), Some("2_L"));
            assert_eq!(bi.inner_orbits.len(), k.saturating_sub(1));
        }
        // Inner orbits of Line(k): the k-1 orbits between consecutive vertices.
        assert_eq!(line(3).boundary_and_inner().inner_orbits.len(), 2);
        assert_eq!(line(1).boundary_and_inner().inner_orbits.len(), 0);
    }

    #[test]
    fn wheel_counts() {
        for m in 1..5 {
            let g = wheel(m);
            assert_eq!(g.n_edges(), 2 * m);
            assert_eq!(g.n_vertices(), m);
            let bi = g.boundary_and_inner();
            assert!(bi.ports.is_empty());
            assert_eq!(bi.inner.len(), 2 * m);
            assert_eq!(bi.inner_orbits.len(), m);
            for v in 0..m {
                assert_eq!(g.vertex_data(v).unwrap().valency, 2);
            }
        }
        assert!(FeynmanGraph::standard(GraphKind::Wheel(0)).is_err());
    }

    #[test]
    fn wheel_one_is_loop_with_two_half_edges() {
        let g = wheel(1);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.n_half_edges(), 2);
        assert_eq!(g.tau(0), 1);
    }

    #[test]
    fn mgraph_layout() {
        let g = FeynmanGraph::standard(GraphKind::MGraph {
            x: vec!["x1".into(), "x2".into()],
            y: vec!["y1".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        })
        .unwrap();
        assert_eq!(g.n_vertices(), 2);
        let bi = g.boundary_and_inner();
        assert_eq!(bi.ports.len(), 3);
        assert_eq!(bi.inner_orbits.len(), 1);
        assert_eq!(g.label(bi.inner_orbits[0][0]), Some("x0"));
        assert_eq!(g.label(bi.inner_orbits[0][1]), Some("y0"));
    }

    #[test]
    fn ngraph_layout() {
        let g = FeynmanGraph::standard(GraphKind::NGraph {
            x: vec!["a".into(), "b".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        })
        .unwrap();
        assert_eq!(g.n_vertices(), 1);
        let vd = g.vertex_data(0).unwrap();
        // E_v contains both halves of the loop orbit.
        assert!(vd.incident_edges.contains(&4) && vd.incident_edges.contains(&5));
        assert_eq!(vd.valency, 4);
    }

    #[test]
    fn components_and_unions() {
        let (g, incs) = FeynmanGraph::disjoint_union(&[stick(), wheel(1), corolla(2)]);
        assert_eq!(incs.len(), 3);
        let comps = g.connected_components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps.iter().filter(|c| c.is_stick).count(), 1);
        let (u, _) = FeynmanGraph::disjoint_union(&[]);
        assert_eq!(u, FeynmanGraph::empty());
        let (shrub, _) = FeynmanGraph::disjoint_union(&[stick(), stick()]);
        assert_eq!(shrub.connected_components().len(), 2);
        let (cw, _) = FeynmanGraph::disjoint_union(&[corolla(2), wheel(1)]);
        assert_eq!(cw.n_edges(), 6);
        assert_eq!(cw.n_vertices(), 2);
    }

    #[test]
    fn isolated_vertex_component() {
        let g = isolated_vertex();
        assert_eq!(g.vertex_data(0).unwrap().valency, 0);
        let comps = g.connected_components();
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].is_stick);
    }

    #[test]
    fn stick_components_are_orbits_in_boundary() {
        let (g, _) = FeynmanGraph::disjoint_union(&[stick(), line(2)]);
        let bi = g.boundary_and_inner();
        let comps = g.connected_components();
        let stick_orbits: usize = comps.iter().filter(|c| c.is_stick).count();
        // orbits entirely inside E0
        let boundary_orbits = g
            .orbits()
            .iter()
            .filter(|o| bi.ports.contains(&o[0]) && bi.ports.contains(&o[1]))
            .count();
        assert_eq!(stick_orbits, boundary_orbits);
    }
}
