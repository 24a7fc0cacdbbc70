//! Gluing-data coequalizers, edge-breaking covers, and colimits of
//! non-degenerate graphs of graphs (graph substitution).

use crate::graph::{FeynmanGraph, RawGraph};
use crate::morphism::GraphMorphism;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error("not a gluing datum: {reason}")]
    NotAGluingDatum { reason: String },
    #[error("edge {edge} does not span an inner orbit")]
    NotInnerOrbit { edge: usize },
    #[error("degenerate graph of graphs: piece at vertex {vertex} has a stick component")]
    DegenerateGraphOfGraphs { vertex: usize },
    #[error("malformed graph of graphs: {reason}")]
    MalformedGraphOfGraphs { reason: String },
}

/// A gluing datum: a shrub `S = ⨿_i (|)` with parallel morphisms
/// `δ1, δ2: S ⇉ g` that are injective with disjoint images, such that
/// `δ1(1_i)` and `δ2(2_i)` are ports.  Stored as the pairs
/// `(δ1(1_i), δ2(2_i))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingDatum {
    target: FeynmanGraph,
    pairs: Vec<(usize, usize)>,
}

impl GluingDatum {
    pub fn new(
        target: FeynmanGraph,
        pairs: Vec<(usize, usize)>,
    ) -> Result<GluingDatum, ColimitError> {
        if target
            .connected_components()
            .iter()
            .any(|c| c.is_stick)
        {
            return Err(ColimitError::NotAGluingDatum {
                reason: "target has a stick component".into(),
            });
        }
        let mut im1: Vec<usize> = Vec::new();
        let mut im2: Vec<usize> = Vec::new();
        for &(a, b) in &pairs {
            if a >= target.n_edges() || b >= target.n_edges() {
                return Err(ColimitError::NotAGluingDatum {
                    reason: format!("edge pair ({a}, {b}) out of range"),
                });
            }
            if !target.is_port(a) {
                return Err(ColimitError::NotAGluingDatum {
                    reason: format!("delta_1 image {a} is not a port"),
                });
            }
            if !target.is_port(b) {
                return Err(ColimitError::NotAGluingDatum {
                    reason: format!("delta_2 image {b} is not a port"),
                });
            }
            im1.extend([a, target.tau(a)]);
            im2.extend([b, target.tau(b)]);
        }
        let inj = |xs: &[usize]| {
            let mut v = xs.to_vec();
            v.sort_unstable();
            let n = v.len();
            v.dedup();
            v.len() == n
        };
        if !inj(&im1) {
            return Err(ColimitError::NotAGluingDatum {
                reason: "delta_1 is not injective".into(),
            });
        }
        if !inj(&im2) {
            return Err(ColimitError::NotAGluingDatum {
                reason: "delta_2 is not injective".into(),
            });
        }
        if im1.iter().any(|x| im2.contains(x)) {
            return Err(ColimitError::NotAGluingDatum {
                reason: "delta_1 and delta_2 images are not disjoint".into(),
            });
        }
        Ok(GluingDatum { target, pairs })
    }

    pub fn target(&self) -> &FeynmanGraph {
        &self.target
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

fn uf_find(parent: &mut Vec<usize>, x: usize) -> usize {
    if parent[x] != x {
        let r = uf_find(parent, parent[x]);
        parent[x] = r;
    }
    parent[x]
}

fn uf_union(parent: &mut Vec<usize>, a: usize, b: usize) {
    let (ra, rb) = (uf_find(parent, a), uf_find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
}

/// Coequalize a gluing datum.  Returns the quotient graph and the
/// projection, which is an etale (weak) monomorphism that is the identity
/// on half-edges and vertices.
pub fn coequalize_gluing(
    d: &GluingDatum,
) -> Result<(FeynmanGraph, GraphMorphism), ColimitError> {
    let g = &d.target;
    let ne = g.n_edges();
    let mut parent: Vec<usize> = (0..ne).collect();
    for &(a, b) in &d.pairs {
        // delta_1(1_i) = a ~ delta_2(1_i) = tau(b); delta_1(2_i) = tau(a) ~ b
        uf_union(&mut parent, a, g.tau(b));
        uf_union(&mut parent, g.tau(a), b);
    }
    // classes, indexed by sorted representative
    let mut reps: Vec<usize> = (0..ne).map(|e| uf_find(&mut parent, e)).collect();
    let mut class_ids: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in reps.iter() {
        let next = class_ids.len();
        class_ids.entry(r).or_insert(next);
    }
    let class_of: Vec<usize> = reps.drain(..).map(|r| class_ids[&r]).collect();
    let n_classes = class_ids.len();
    // induced involution; must be well-defined and fixed-point free
    let mut inv: Vec<Option<usize>> = vec![None; n_classes];
    for e in 0..ne {
        let (c, tc) = (class_of[e], class_of[g.tau(e)]);
        match inv[c] {
            None => inv[c] = Some(tc),
            Some(prev) if prev == tc => {}
            Some(_) => {
                return Err(ColimitError::NotAGluingDatum {
                    reason: "involution does not descend to the quotient".into(),
                })
            }
        }
    }
    let involution: Vec<usize> = inv.into_iter().map(|x| x.unwrap()).collect();
    // labels survive on classes that remain ports, via any labelled member
    let mut labels = BTreeMap::new();
    for (e, lbl) in g.labels() {
        labels.entry(class_of[*e]).or_insert_with(|| lbl.clone());
    }
    let raw = RawGraph {
        edges: n_classes,
        involution,
        half_edges: (0..g.n_half_edges())
            .map(|h| (class_of[g.attach(h)], g.vertex_of(h)))
            .collect(),
        vertices: g.n_vertices(),
        labels,
    };
    let quotient = FeynmanGraph::validate(raw).map_err(|e| ColimitError::NotAGluingDatum {
        reason: format!("quotient is not a graph: {e}"),
    })?;
    let proj = GraphMorphism::validate(
        g,
        &quotient,
        class_of,
        Some((0..g.n_vertices()).collect()),
    )
    .expect("coequalizer projection is a morphism");
    Ok((quotient, proj))
}

/// Break the inner orbits containing the given edges: each broken orbit
/// `{e, τe}` is replaced by two half-broken orbits `{e, e*}`, `{τe, (τe)*}`
/// with fresh ports `e*`, `(τe)*`.  Returns the cover `g_Î` and the
/// canonical surjective (weak) monomorphism into `g`.
pub fn break_edges(
    g: &FeynmanGraph,
    edges: &[usize],
) -> Result<(FeynmanGraph, GraphMorphism), ColimitError> {
    let bi = g.boundary_and_inner();
    // normalize to orbit representatives (min edge), deduped, sorted
    let mut orbit_reps: Vec<usize> = Vec::new();
    for &e in edges {
        if e >= g.n_edges() {
            return Err(ColimitError::NotInnerOrbit { edge: e });
        }
        let r = e.min(g.tau(e));
        if !bi.inner_orbits.iter().any(|o| o[0].min(o[1]) == r) {
            return Err(ColimitError::NotInnerOrbit { edge: e });
        }
        orbit_reps.push(r);
    }
    orbit_reps.sort_unstable();
    orbit_reps.dedup();
    let ne = g.n_edges();
    let n_new = 2 * orbit_reps.len();
    let mut involution: Vec<usize> = (0..ne).map(|e| g.tau(e)).collect();
    involution.extend(vec![0; n_new]);
    let mut f_e: Vec<usize> = (0..ne).collect();
    for (i, &r) in orbit_reps.iter().enumerate() {
        let (star_r, star_tr) = (ne + 2 * i, ne + 2 * i + 1);
        involution[r] = star_r;
        involution[star_r] = r;
        involution[g.tau(r)] = star_tr;
        involution[star_tr] = g.tau(r);
        f_e.push(g.tau(r)); // e* maps onto tau(e)
        f_e.push(r); // (tau e)* maps onto e
    }
    let raw = RawGraph {
        edges: ne + n_new,
        involution,
        half_edges: (0..g.n_half_edges())
            .map(|h| (g.attach(h), g.vertex_of(h)))
            .collect(),
        vertices: g.n_vertices(),
        labels: g.labels().clone(),
    };
    let cover = FeynmanGraph::validate(raw).expect("breaking edges yields a graph");
    let mono = GraphMorphism::validate(&cover, g, f_e, Some((0..g.n_vertices()).collect()))
        .expect("covering inclusion is a morphism");
    Ok((cover, mono))
}

/// A `g`-shaped graph of graphs: for each vertex `v` of the base, a piece
/// graph together with the bijection matching its ports to the incident
/// half-edges of `v` (`ports[i]` pairs with the `i`-th incident half-edge).
/// Stick elements of the base are fixed to sticks, so only the vertex data
/// is free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOfGraphs {
    pub base: FeynmanGraph,
    pub pieces: Vec<Piece>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub graph: FeynmanGraph,
    pub ports: Vec<usize>,
}

impl GraphOfGraphs {
    pub fn new(base: FeynmanGraph, pieces: Vec<Piece>) -> Result<GraphOfGraphs, ColimitError> {
        if pieces.len() != base.n_vertices() {
            return Err(ColimitError::MalformedGraphOfGraphs {
                reason: format!(
                    "{} pieces for {} vertices",
                    pieces.len(),
                    base.n_vertices()
                ),
            });
        }
        for (v, piece) in pieces.iter().enumerate() {
            let vd = base.vertex_data(v).unwrap();
            let bi = piece.graph.boundary_and_inner();
            let mut sorted = piece.ports.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if piece.ports.len() != vd.valency || sorted != bi.ports {
                return Err(ColimitError::MalformedGraphOfGraphs {
                    reason: format!(
                        "piece at vertex {v} does not match the boundary bijection"
                    ),
                });
            }
        }
        Ok(GraphOfGraphs { base, pieces })
    }

    /// The identity graph of graphs: each vertex maps to its corolla.
    pub fn identity(base: &FeynmanGraph) -> GraphOfGraphs {
        let pieces = (0..base.n_vertices())
            .map(|v| {
                let n = base.vertex_data(v).unwrap().valency;
                Piece {
                    graph: crate::graph::corolla(n),
                    ports: (0..n).collect(),
                }
            })
            .collect();
        GraphOfGraphs::new(base.clone(), pieces).expect("corollas match valencies")
    }

    pub fn is_degenerate(&self) -> Option<usize> {
        self.pieces
            .iter()
            .position(|p| p.graph.connected_components().iter().any(|c| c.is_stick))
    }
}

/// The computed colimit of a non-degenerate graph of graphs.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub graph: FeynmanGraph,
    /// Injective map `E(base) -> E(colimit)`, the identity on ports.
    pub base_edge_map: Vec<usize>,
    /// Canonical etale monomorphism per vertex piece.
    pub piece_inclusions: Vec<GraphMorphism>,
}

/// Compute the colimit by coequalizing the gluing datum induced on the
/// disjoint union of the pieces (plus pass-through base sticks).
pub fn colimit_graph_of_graphs(gog: &GraphOfGraphs) -> Result<Colimit, ColimitError> {
    if let Some(v) = gog.is_degenerate() {
        return Err(ColimitError::DegenerateGraphOfGraphs { vertex: v });
    }
    let base = &gog.base;
    // union of pieces; base stick orbits are appended afterwards as fresh
    // stick components of the union.
    let piece_graphs: Vec<FeynmanGraph> = gog.pieces.iter().map(|p| p.graph.clone()).collect();
    let (union, inclusions) = FeynmanGraph::disjoint_union(&piece_graphs);
    // append base stick orbits
    let base_bi = base.boundary_and_inner();
    let stick_orbits: Vec<[usize; 2]> = base
        .orbits()
        .into_iter()
        .filter(|o| base.is_port(o[0]) && base.is_port(o[1]))
        .collect();
    // port of the piece matched to a given attached base edge
    let piece_port_of = |e: usize| -> usize {
        let h = base.half_edge_of(e).expect("attached edge");
        let v = base.vertex_of(h);
        let vd = base.vertex_data(v).unwrap();
        let pos = vd
            .incident_half_edges
            .iter()
            .position(|&hh| hh == h)
            .unwrap();
        inclusions[v].edge_map[gog.pieces[v].ports[pos]]
    };
    // labels of non-stick base ports land on the matching piece ports
    let mut raw = union.to_raw();
    for (e, lbl) in base.labels() {
        if base.is_port(*e) && !base.is_port(base.tau(*e)) {
            raw.labels.insert(piece_port_of(base.tau(*e)), lbl.clone());
        }
    }
    let labeled = FeynmanGraph::validate(raw).expect("labelled union is a graph");
    // gluing pairs: one per inner orbit of the base
    let pairs: Vec<(usize, usize)> = base_bi
        .inner_orbits
        .iter()
        .map(|o| (piece_port_of(o[0]), piece_port_of(o[1])))
        .collect();
    let datum = GluingDatum::new(labeled, pairs)?;
    let (quotient, proj) = coequalize_gluing(&datum)?;
    // append base stick orbits, which pass through untouched
    let mut raw = quotient.to_raw();
    let mut stick_edge_of: BTreeMap<usize, usize> = BTreeMap::new();
    for o in &stick_orbits {
        let (a, b) = (raw.edges, raw.edges + 1);
        raw.involution.push(b);
        raw.involution.push(a);
        raw.edges += 2;
        stick_edge_of.insert(o[0], a);
        stick_edge_of.insert(o[1], b);
        for (&be, &ce) in [(&o[0], &a), (&o[1], &b)] {
            if let Some(lbl) = base.labels().get(&be) {
                raw.labels.insert(ce, lbl.clone());
            }
        }
    }
    let colim = FeynmanGraph::validate(raw).expect("colimit with sticks is a graph");
    // base edge map (projection edge images stay valid in the extension)
    let base_edge_map: Vec<usize> = (0..base.n_edges())
        .map(|e| {
            if let Some(&se) = stick_edge_of.get(&e) {
                se
            } else if base.is_port(e) {
                // port: image of the matching piece port
                proj.f_e()[piece_port_of(base.tau(e))]
            } else {
                // attached: the attached side within its piece
                proj.f_e()[union.tau(piece_port_of(e))]
            }
        })
        .collect();
    let piece_inclusions: Vec<GraphMorphism> = (0..base.n_vertices())
        .map(|v| {
            let inc = &inclusions[v];
            let fe: Vec<usize> = inc.edge_map.iter().map(|&e| proj.f_e()[e]).collect();
            let fv: Vec<usize> = inc.vertex_map.clone();
            GraphMorphism::validate(&gog.pieces[v].graph, &colim, fe, Some(fv))
                .expect("piece inclusion is a morphism")
        })
        .collect();
    Ok(Colimit {
        graph: colim,
        base_edge_map,
        piece_inclusions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{corolla, line, stick, wheel, GraphKind};
    use crate::morphism::{enumerate_all, enumerate_etale};

    fn isomorphic(a: &FeynmanGraph, b: &FeynmanGraph) -> bool {
        enumerate_etale(a, b, None)
            .map(|ms| ms.iter().any(|f| f.classify().iso))
            .unwrap_or(false)
    }

    #[test]
    fn glue_two_corollas_into_m_graph() {
        // glue port x0 of Corolla(X ⊔ {x0}) to port y0 of Corolla(Y ⊔ {y0})
        let (g, incs) = FeynmanGraph::disjoint_union(&[corolla(2), corolla(2)]);
        // port 1 of each corolla plays x0 / y0
        let x0 = incs[0].edge_map[1];
        let y0 = incs[1].edge_map[1];
        let d = GluingDatum::new(g, vec![(x0, y0)]).unwrap();
        let (glued, proj) = coequalize_gluing(&d).unwrap();
        let m = FeynmanGraph::standard(GraphKind::MGraph {
            x: vec!["x1".into()],
            y: vec!["y1".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        })
        .unwrap();
        assert!(isomorphic(&glued, &m));
        let c = proj.classify();
        assert!(c.etale && c.mono && !proj.is_pointwise_injective());
        assert_eq!(glued.n_half_edges(), 4);
        assert_eq!(glued.n_vertices(), 2);
    }

    #[test]
    fn glue_corolla_to_itself_into_n_graph() {
        let g = corolla(3);
        // glue ports 1 and 2, leaving port 0 on the boundary
        let d = GluingDatum::new(g, vec![(1, 2)]).unwrap();
        let (glued, _) = coequalize_gluing(&d).unwrap();
        let n = FeynmanGraph::standard(GraphKind::NGraph {
            x: vec!["a".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        })
        .unwrap();
        assert!(isomorphic(&glued, &n));
    }

    #[test]
    fn glue_line_ends_into_wheel() {
        for m in 1..=3 {
            let g = line(m);
            let ne = g.n_edges();
            let d = GluingDatum::new(g, vec![(0, ne - 1)]).unwrap();
            let (glued, _) = coequalize_gluing(&d).unwrap();
            assert!(isomorphic(&glued, &wheel(m)), "m = {m}");
        }
    }

    #[test]
    fn invalid_gluing_rejected() {
        // non-port images
        assert!(GluingDatum::new(wheel(1), vec![(0, 1)]).is_err());
        // overlapping images
        let g = corolla(2);
        assert!(GluingDatum::new(g.clone(), vec![(0, 0)]).is_err());
        // stick target
        assert!(GluingDatum::new(stick(), vec![]).is_err());
    }

    #[test]
    fn break_nothing_is_identity() {
        let g = wheel(2);
        let (cover, mono) = break_edges(&g, &[]).unwrap();
        assert_eq!(cover, g);
        assert!(mono.classify().iso);
    }

    #[test]
    fn break_wheel_one_gives_corolla_two() {
        let g = wheel(1);
        let (cover, mono) = break_edges(&g, &[0]).unwrap();
        assert!(isomorphic(&cover, &corolla(2)));
        let c = mono.classify();
        assert!(c.epi && c.mono && !mono.is_pointwise_injective());
    }

    #[test]
    fn break_all_inner_orbits_gives_corollas() {
        let fixtures = vec![wheel(2), line(3), wheel(3)];
        for g in fixtures {
            let inner: Vec<usize> = g
                .boundary_and_inner()
                .inner_orbits
                .iter()
                .map(|o| o[0])
                .collect();
            let (cover, mono) = break_edges(&g, &inner).unwrap();
            let comps = cover.connected_components();
            assert_eq!(comps.len(), g.n_vertices());
            for c in &comps {
                assert_eq!(c.graph.n_vertices(), 1);
                let val = c.graph.vertex_data(0).unwrap().valency;
                assert!(isomorphic(&c.graph, &corolla(val)));
            }
            assert!(mono.classify().epi);
            // boundary grew by 2 * |inner|
            assert_eq!(
                cover.boundary_and_inner().ports.len(),
                g.boundary_and_inner().ports.len() + 2 * inner.len()
            );
        }
    }

    #[test]
    fn coequalizing_broken_orbits_recovers_graph() {
        let fixtures = vec![wheel(2), line(2), wheel(1)];
        for g in fixtures {
            let inner: Vec<usize> = g
                .boundary_and_inner()
                .inner_orbits
                .iter()
                .map(|o| o[0])
                .collect();
            let (cover, _) = break_edges(&g, &inner).unwrap();
            let ne = g.n_edges();
            // fresh ports come in pairs (e*, (tau e)*) appended in order
            let pairs: Vec<(usize, usize)> =
                (0..inner.len()).map(|i| (ne + 2 * i, ne + 2 * i + 1)).collect();
            let d = GluingDatum::new(cover, pairs).unwrap();
            let (glued, _) = coequalize_gluing(&d).unwrap();
            assert!(isomorphic(&glued, &g), "{g:?}");
        }
    }

    #[test]
    fn breaking_not_inner_rejected() {
        let g = line(1);
        // orbit {0,1} is half-attached, not inner
        assert!(matches!(
            break_edges(&g, &[0]),
            Err(ColimitError::NotInnerOrbit { edge: 0 })
        ));
    }

    #[test]
    fn identity_graph_of_graphs_recovers_base() {
        let fixtures = vec![wheel(1), wheel(3), line(2), corolla(3)];
        for g in fixtures {
            let gog = GraphOfGraphs::identity(&g);
            let colim = colimit_graph_of_graphs(&gog).unwrap();
            assert!(isomorphic(&colim.graph, &g), "{g:?}");
            // ports are preserved
            assert_eq!(
                colim.graph.boundary_and_inner().ports.len(),
                g.boundary_and_inner().ports.len()
            );
            for inc in &colim.piece_inclusions {
                let c = inc.classify();
                assert!(c.etale && c.mono);
            }
        }
    }

    #[test]
    fn edge_count_formula() {
        // substitute the M-graph for one vertex of Wheel(2); the other
        // vertex keeps its corolla.
        let base = wheel(2);
        let m = FeynmanGraph::standard(GraphKind::MGraph {
            x: vec!["x1".into()],
            y: vec!["y1".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        })
        .unwrap();
        let m_ports = m.boundary_and_inner().ports;
        assert_eq!(m_ports.len(), 2);
        let gog = GraphOfGraphs::new(
            base.clone(),
            vec![
                Piece {
                    graph: m.clone(),
                    ports: m_ports.clone(),
                },
                Piece {
                    graph: corolla(2),
                    ports: vec![0, 1],
                },
            ],
        )
        .unwrap();
        let colim = colimit_graph_of_graphs(&gog).unwrap();
        // |E(colim)| = |E(base)| + sum over vertices of inner edge counts
        let m_inner = 2 * m.boundary_and_inner().inner_orbits.len();
        assert_eq!(
            colim.graph.n_edges(),
            base.n_edges() + m_inner
        );
        // base edge map is injective
        let mut seen = colim.base_edge_map.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), base.n_edges());
        // connectivity is preserved
        assert!(colim.graph.is_connected());
    }

    #[test]
    fn degenerate_rejected() {
        let base = wheel(1);
        let gog = GraphOfGraphs {
            base,
            pieces: vec![Piece {
                graph: stick(),
                ports: vec![0, 1],
            }],
        };
        assert!(matches!(
            colimit_graph_of_graphs(&gog),
            Err(ColimitError::DegenerateGraphOfGraphs { vertex: 0 })
        ));
    }

    #[test]
    fn component_count_preserved() {
        let (base, _) = FeynmanGraph::disjoint_union(&[wheel(1), corolla(2), stick()]);
        let gog = GraphOfGraphs::identity(&base);
        let colim = colimit_graph_of_graphs(&gog).unwrap();
        assert_eq!(
            colim.graph.connected_components().len(),
            base.connected_components().len()
        );
    }

    #[test]
    fn universal_property_spot_check() {
        // cocones over the identity Wheel(1)-shaped graph of graphs into
        // small targets biject with morphisms out of the colimit.
        let base = wheel(1);
        let gog = GraphOfGraphs::identity(&base);
        let colim = colimit_graph_of_graphs(&gog).unwrap();
        let piece = &gog.pieces[0].graph;
        let p1 = gog.pieces[0].ports[0];
        let p2 = gog.pieces[0].ports[1];
        for target in [wheel(1), wheel(2), corolla(2)] {
            // cocones: morphisms piece -> target with f(p1) = tau f(p2)
            // and f(tau p1) = f(p2) (the two stick legs agree)
            let cocones: Vec<_> = enumerate_all(piece, &target, None)
                .unwrap()
                .into_iter()
                .filter(|f| {
                    f.f_e()[p1] == target.tau(f.f_e()[p2])
                        && f.f_e()[piece.tau(p1)] == f.f_e()[p2]
                })
                .collect();
            let out: Vec<_> = enumerate_all(&colim.graph, &target, None).unwrap();
            // composing with the inclusion maps cocones to morphisms out
            let inc = &colim.piece_inclusions[0];
            let mut composed: Vec<_> = out
                .iter()
                .map(|f| f.compose(inc).unwrap())
                .collect();
            composed.sort();
            composed.dedup();
            // factorization is unique: distinct morphisms out stay distinct
            assert_eq!(composed.len(), out.len(), "uniqueness");
            // and existence: every cocone arises this way
            let mut cocone_sorted = cocones.clone();
            cocone_sorted.sort();
            assert_eq!(composed, cocone_sorted, "existence for {target:?}");
        }
    }
}
