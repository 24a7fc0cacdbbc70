//! The pointed graph category: vertex deletion, star morphisms and their
//! factorization into a deletion followed by an etale morphism, exhaustive
//! star-hom enumeration, and similarity classes of structured graphs.
//!
//! A *star morphism* extends an ordinary morphism by letting vertices map to
//! edge orbits of the target: a bivalent vertex may collapse onto an orbit
//! (its two edges covering the orbit), and a single isolated vertex may
//! collapse onto any orbit.  Every star morphism factors uniquely (up to
//! isomorphism) as the deletion of the collapsed vertices followed by an
//! etale morphism from the deleted graph.

use crate::graph::{stick, FeynmanGraph, GraphError, RawGraph};
use crate::morphism::{
    canonical_form_with, enumerate_etale, GraphMorphism, MorphismError, XGraph,
};
use crate::species::{PointedSpecies, SpeciesError, StructuredGraph};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Errors for pointed-graph operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointedError {
    #[error("vertex {vertex} is not bivalent (and not the isolated special case)")]
    NotBivalent { vertex: usize },
    #[error("star diagram does not commute: {reason}")]
    NotCommuting { reason: String },
    #[error("star pullback condition fails: {reason}")]
    PullbackFails { reason: String },
    #[error("size bound exceeded: {size} > {bound}")]
    SizeBoundExceeded { size: usize, bound: usize },
    #[error("structured graphs carry different labellings: {reason}")]
    LabelMismatch { reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Species(#[from] SpeciesError),
}

/// Image of a vertex under a star morphism: an ordinary vertex of the
/// target, or a tau-orbit (given by its minimal edge) the vertex collapses
/// onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StarVertexImage {
    Vertex(usize),
    Orbit(usize),
}

/// A validated star morphism together with its canonical factorization.
#[derive(Debug, Clone)]
pub struct StarMorphism {
    source: FeynmanGraph,
    target: FeynmanGraph,
    /// Total, tau-equivariant edge map.
    f_e: Vec<usize>,
    /// Vertex map into `V' ⊔ Ẽ'`.
    f_v: Vec<StarVertexImage>,
    /// The deleted vertices `W_f`, sorted.
    deletion: Vec<usize>,
    /// Edge map of the deletion morphism, `E(source) -> E(source \ W)`.
    delta_edge: Vec<usize>,
    /// The etale residual `source \ W -> target`.
    residual: GraphMorphism,
}

impl PartialEq for StarMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.f_e == other.f_e
            && self.f_v == other.f_v
    }
}
impl Eq for StarMorphism {}

impl StarMorphism {
    pub fn source(&self) -> &FeynmanGraph {
        &self.source
    }

    pub fn target(&self) -> &FeynmanGraph {
        &self.target
    }

    pub fn f_e(&self) -> &[usize] {
        &self.f_e
    }

    pub fn f_v(&self) -> &[StarVertexImage] {
        &self.f_v
    }

    /// The deletion set `W_f`, recovered as the preimage of the orbits.
    pub fn deletion(&self) -> &[usize] {
        &self.deletion
    }

    /// Edge map of the deletion `source -> source \ W_f`.
    pub fn delta_edge(&self) -> &[usize] {
        &self.delta_edge
    }

    /// The etale second factor `source \ W_f -> target`.
    pub fn residual(&self) -> &GraphMorphism {
        &self.residual
    }

    /// Whether the star morphism contains no collapse (it lies in the
    /// unpointed category).
    pub fn is_etale(&self) -> bool {
        self.deletion.is_empty()
    }

    /// Wrap an etale morphism as a star morphism with empty deletion set.
    pub fn from_etale(m: &GraphMorphism) -> Result<StarMorphism, PointedError> {
        let f_v = m.f_v().iter().map(|&v| StarVertexImage::Vertex(v)).collect();
        validate_star_morphism(m.source(), m.target(), m.f_e().to_vec(), f_v)
    }

    /// Composition `second ∘ self`.
    pub fn compose_with(&self, second: &StarMorphism) -> Result<StarMorphism, PointedError> {
        if self.target != second.source {
            return Err(PointedError::NotCommuting {
                reason: "composition of star morphisms with mismatched middle graph".into(),
            });
        }
        let f_e: Vec<usize> = self.f_e.iter().map(|&e| second.f_e[e]).collect();
        let f_v: Vec<StarVertexImage> = self
            .f_v
            .iter()
            .map(|&img| match img {
                StarVertexImage::Vertex(v) => second.f_v[v],
                StarVertexImage::Orbit(r) => {
                    let e = second.f_e[r];
                    StarVertexImage::Orbit(e.min(second.target.tau(e)))
                }
            })
            .collect();
        validate_star_morphism(&self.source, &second.target, f_e, f_v)
    }
}

/// Delete a set of vertices.  `w` may contain bivalent vertices (chains are
/// re-stitched, full cycles collapse to fresh stick orbits) or, when the
/// graph is a single isolated vertex, that vertex (yielding a stick).
/// Returns the deleted graph and the deletion star morphism.
pub fn vertex_deletion(
    g: &FeynmanGraph,
    w: &[usize],
) -> Result<(FeynmanGraph, StarMorphism), PointedError> {
    let wset: BTreeSet<usize> = w.iter().copied().collect();
    for &v in &wset {
        if v >= g.n_vertices() {
            return Err(PointedError::Graph(GraphError::UnknownVertex { vertex: v }));
        }
    }
    // the z special case: deleting a lone isolated vertex yields a stick
    if g.n_vertices() == 1 && g.n_edges() == 0 && wset.contains(&0) {
        let quot = stick();
        let star = StarMorphism {
            source: g.clone(),
            target: quot.clone(),
            f_e: vec![],
            f_v: vec![StarVertexImage::Orbit(0)],
            deletion: vec![0],
            delta_edge: vec![],
            residual: GraphMorphism::identity(&quot),
        };
        return Ok((quot, star));
    }
    let vdata: Vec<_> = (0..g.n_vertices())
        .map(|v| g.vertex_data(v).expect("validated graph"))
        .collect();
    for &v in &wset {
        if vdata[v].valency != 2 {
            return Err(PointedError::NotBivalent { vertex: v });
        }
    }
    // edges attached at deleted vertices disappear
    let mut removed = vec![false; g.n_edges()];
    for &v in &wset {
        for &e in &vdata[v].incident_edges {
            removed[e] = true;
        }
    }
    let mut new_e = vec![usize::MAX; g.n_edges()];
    let mut surviving = Vec::new();
    for e in 0..g.n_edges() {
        if !removed[e] {
            new_e[e] = surviving.len();
            surviving.push(e);
        }
    }
    // walk the chains and cycles of deleted vertices
    let in_w = |v: usize| wset.contains(&v);
    // the deleted neighbour reached by crossing the orbit of edge `e`
    let w_neighbor = |e: usize| -> Option<usize> {
        g.half_edge_of(g.tau(e))
            .map(|h| g.vertex_of(h))
            .filter(|&u| in_w(u))
    };
    let other_edge = |v: usize, e: usize| -> usize {
        let es = &vdata[v].incident_edges;
        if es[0] == e {
            es[1]
        } else {
            es[0]
        }
    };
    let mut f_e = vec![usize::MAX; g.n_edges()];
    for (e, &ne) in new_e.iter().enumerate() {
        if ne != usize::MAX {
            f_e[e] = ne;
        }
    }
    let mut tau_new: Vec<usize> = vec![usize::MAX; surviving.len()];
    for (ne, &e) in surviving.iter().enumerate() {
        if !removed[g.tau(e)] {
            tau_new[ne] = new_e[g.tau(e)];
        }
    }
    let mut visited: BTreeSet<usize> = BTreeSet::new();
    let mut orbit_of_deleted: BTreeMap<usize, usize> = BTreeMap::new();
    let mut n_fresh = 0usize;
    for &v0 in &wset {
        if visited.contains(&v0) {
            continue;
        }
        // search for an endpoint of the component containing v0
        let mut cur = v0;
        let mut via = vdata[v0].incident_edges[0];
        let mut steps = 0usize;
        let mut is_cycle = false;
        while let Some(u) = w_neighbor(via) {
            steps += 1;
            if steps > wset.len() {
                is_cycle = true;
                break;
            }
            via = other_edge(u, g.tau(via));
            cur = u;
        }
        if is_cycle {
            // fresh stick orbit for the collapsed cycle
            let s1 = surviving.len() + 2 * n_fresh;
            let s2 = s1 + 1;
            n_fresh += 1;
            let mut u = v0;
            let mut q = vdata[v0].incident_edges[0];
            loop {
                visited.insert(u);
                orbit_of_deleted.insert(u, s1);
                let p = other_edge(u, q);
                f_e[q] = s1;
                f_e[p] = s2;
                let next = w_neighbor(q).expect("cycle is closed");
                if next == v0 {
                    break;
                }
                q = other_edge(next, g.tau(q));
                u = next;
            }
        } else {
            // `cur` is an endpoint leaving through `via`
            let o1 = g.tau(via);
            let (mut u, mut p) = (cur, via);
            let o2 = loop {
                visited.insert(u);
                let q = other_edge(u, p);
                f_e[p] = usize::MAX; // fill after o2 is known
                f_e[q] = new_e[o1];
                orbit_of_deleted.insert(u, new_e[o1]);
                match w_neighbor(q) {
                    Some(next) => {
                        p = g.tau(q);
                        u = next;
                    }
                    None => break g.tau(q),
                }
            };
            // second pass: 1-side edges map to the 2-side out-edge
            let (mut u, mut p) = (cur, via);
            loop {
                let q = other_edge(u, p);
                f_e[p] = new_e[o2];
                match w_neighbor(q) {
                    Some(next) => {
                        p = g.tau(q);
                        u = next;
                    }
                    None => break,
                }
            }
            tau_new[new_e[o1]] = new_e[o2];
            tau_new[new_e[o2]] = new_e[o1];
            let rep = new_e[o1].min(new_e[o2]);
            for (_, slot) in orbit_of_deleted.iter_mut().filter(|(k, _)| in_w(**k)) {
                // normalize chain reps picked above
                if *slot == new_e[o1] || *slot == new_e[o2] {
                    *slot = rep;
                }
            }
        }
    }
    // assemble the quotient graph
    let n_quot_edges = surviving.len() + 2 * n_fresh;
    let mut involution = vec![usize::MAX; n_quot_edges];
    for (ne, &t) in tau_new.iter().enumerate() {
        involution[ne] = t;
    }
    for i in 0..n_fresh {
        involution[surviving.len() + 2 * i] = surviving.len() + 2 * i + 1;
        involution[surviving.len() + 2 * i + 1] = surviving.len() + 2 * i;
    }
    let mut new_v = vec![usize::MAX; g.n_vertices()];
    let mut kept = Vec::new();
    for v in 0..g.n_vertices() {
        if !in_w(v) {
            new_v[v] = kept.len();
            kept.push(v);
        }
    }
    let mut half_edges = Vec::new();
    for h in 0..g.n_half_edges() {
        let v = g.vertex_of(h);
        if !in_w(v) {
            half_edges.push((new_e[g.attach(h)], new_v[v]));
        }
    }
    let mut labels = BTreeMap::new();
    for (e, lbl) in g.labels() {
        if !removed[*e] {
            labels.insert(new_e[*e], lbl.clone());
        }
    }
    let quot = FeynmanGraph::validate(RawGraph {
        edges: n_quot_edges,
        involution,
        half_edges,
        vertices: kept.len(),
        labels,
    })?;
    let f_v: Vec<StarVertexImage> = (0..g.n_vertices())
        .map(|v| {
            if in_w(v) {
                StarVertexImage::Orbit(orbit_of_deleted[&v])
            } else {
                StarVertexImage::Vertex(new_v[v])
            }
        })
        .collect();
    let star = StarMorphism {
        source: g.clone(),
        target: quot.clone(),
        f_e: f_e.clone(),
        f_v,
        deletion: wset.iter().copied().collect(),
        delta_edge: f_e,
        residual: GraphMorphism::identity(&quot),
    };
    Ok((quot, star))
}

/// Validate a star morphism from its raw edge and vertex maps, checking
/// equivariance, the collapse conditions, and the pullback condition (the
/// residual of the factorization must be etale).
pub fn validate_star_morphism(
    src: &FeynmanGraph,
    tgt: &FeynmanGraph,
    f_e: Vec<usize>,
    f_v: Vec<StarVertexImage>,
) -> Result<StarMorphism, PointedError> {
    if f_e.len() != src.n_edges() || f_v.len() != src.n_vertices() {
        return Err(PointedError::NotCommuting {
            reason: "edge or vertex map has the wrong length".into(),
        });
    }
    for (e, &img) in f_e.iter().enumerate() {
        if img >= tgt.n_edges() {
            return Err(PointedError::NotCommuting {
                reason: format!("edge image {img} out of range"),
            });
        }
        if f_e[src.tau(e)] != tgt.tau(img) {
            return Err(PointedError::NotCommuting {
                reason: format!("edge map is not tau-equivariant at edge {e}"),
            });
        }
    }
    let mut deleted = Vec::new();
    for (v, &img) in f_v.iter().enumerate() {
        let vd = src.vertex_data(v)?;
        match img {
            StarVertexImage::Vertex(v2) => {
                if v2 >= tgt.n_vertices() {
                    return Err(PointedError::NotCommuting {
                        reason: format!("vertex image {v2} out of range"),
                    });
                }
                let vd2 = tgt.vertex_data(v2)?;
                let images: BTreeSet<usize> =
                    vd.incident_edges.iter().map(|&e| f_e[e]).collect();
                if !images.iter().all(|e| vd2.incident_edges.contains(e)) {
                    return Err(PointedError::NotCommuting {
                        reason: format!("edges at vertex {v} do not land at its image"),
                    });
                }
                if images.len() != vd.valency || vd.valency != vd2.valency {
                    return Err(PointedError::PullbackFails {
                        reason: format!("vertex {v} is not mapped by a local bijection"),
                    });
                }
            }
            StarVertexImage::Orbit(r) => {
                if r >= tgt.n_edges() || r != r.min(tgt.tau(r)) {
                    return Err(PointedError::NotCommuting {
                        reason: format!("orbit image {r} is not a minimal orbit representative"),
                    });
                }
                deleted.push(v);
                match vd.valency {
                    2 => {
                        let (a, b) = (vd.incident_edges[0], vd.incident_edges[1]);
                        if f_e[a] != tgt.tau(f_e[b])
                            || f_e[a].min(f_e[b]) != r
                            || f_e[a] == f_e[b]
                        {
                            return Err(PointedError::PullbackFails {
                                reason: format!(
                                    "edges at collapsed vertex {v} do not cover its orbit"
                                ),
                            });
                        }
                    }
                    0 => {
                        if src.n_vertices() != 1 || src.n_edges() != 0 {
                            return Err(PointedError::PullbackFails {
                                reason: "an isolated vertex may only collapse when it is the whole graph"
                                    .into(),
                            });
                        }
                    }
                    _ => {
                        return Err(PointedError::PullbackFails {
                            reason: format!("collapsed vertex {v} has valency {}", vd.valency),
                        });
                    }
                }
            }
        }
    }
    // factorize: delete W_f, then induce the residual
    let (quot, delta) = vertex_deletion(src, &deleted)?;
    let mut res_fe = vec![usize::MAX; quot.n_edges()];
    for e in 0..src.n_edges() {
        let q = delta.f_e[e];
        if res_fe[q] == usize::MAX {
            res_fe[q] = f_e[e];
        } else if res_fe[q] != f_e[e] {
            return Err(PointedError::PullbackFails {
                reason: format!("edge map does not factor through the deletion at edge {e}"),
            });
        }
    }
    // the z case: the fresh stick has no preimage; read its image off f_v
    if src.n_edges() == 0 && quot.n_edges() == 2 {
        if let StarVertexImage::Orbit(r) = f_v[0] {
            res_fe[0] = r;
            res_fe[1] = tgt.tau(r);
        }
    }
    let mut res_fv = vec![usize::MAX; quot.n_vertices()];
    for (v, &img) in f_v.iter().enumerate() {
        if let (StarVertexImage::Vertex(v2), StarVertexImage::Vertex(nv)) = (img, delta.f_v[v]) {
            res_fv[nv] = v2;
        }
    }
    let residual = GraphMorphism::validate(&quot, tgt, res_fe, Some(res_fv)).map_err(|e| {
        PointedError::PullbackFails {
            reason: format!("residual is not a morphism: {e}"),
        }
    })?;
    if !residual.classify().etale {
        return Err(PointedError::PullbackFails {
            reason: "residual of the factorization is not etale".into(),
        });
    }
    Ok(StarMorphism {
        source: src.clone(),
        target: tgt.clone(),
        f_e,
        f_v,
        deletion: deleted,
        delta_edge: delta.f_e.clone(),
        residual,
    })
}

/// Exhaustively enumerate the star morphisms `src -> tgt` via the
/// factorization: unions over deletion sets of etale enumerations, plus the
/// isolated-vertex collapse family.
pub fn enumerate_star_morphisms(
    src: &FeynmanGraph,
    tgt: &FeynmanGraph,
    bound: Option<usize>,
) -> Result<Vec<StarMorphism>, PointedError> {
    let mut out: Vec<StarMorphism> = Vec::new();
    // the z family: a lone isolated vertex collapses onto any target orbit
    if src.n_vertices() == 1 && src.n_edges() == 0 {
        for o in tgt.orbits() {
            out.push(validate_star_morphism(
                src,
                tgt,
                vec![],
                vec![StarVertexImage::Orbit(o[0].min(o[1]))],
            )?);
        }
    }
    let bivalent: Vec<usize> = (0..src.n_vertices())
        .filter(|&v| src.vertex_data(v).map(|d| d.valency) == Ok(2))
        .collect();
    if bivalent.len() > 16 {
        return Err(PointedError::SizeBoundExceeded {
            size: bivalent.len(),
            bound: 16,
        });
    }
    for mask in 0..(1usize << bivalent.len()) {
        let w: Vec<usize> = bivalent
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let (quot, delta) = vertex_deletion(src, &w)?;
        for m in enumerate_etale(&quot, tgt, bound)? {
            let f_e: Vec<usize> = delta.f_e.iter().map(|&q| m.f_e()[q]).collect();
            let f_v: Vec<StarVertexImage> = delta
                .f_v
                .iter()
                .map(|&img| match img {
                    StarVertexImage::Vertex(nv) => StarVertexImage::Vertex(m.f_v()[nv]),
                    StarVertexImage::Orbit(r) => {
                        let e = m.f_e()[r];
                        StarVertexImage::Orbit(e.min(tgt.tau(e)))
                    }
                })
                .collect();
            out.push(validate_star_morphism(src, tgt, f_e, f_v)?);
        }
    }
    out.sort_by(|a, b| (&a.f_e, &a.f_v).cmp(&(&b.f_e, &b.f_v)));
    out.dedup();
    Ok(out)
}

/// A similarity class of structured X-graphs: an admissible reduced
/// representative, or one of the two exceptional stick-valued classes.
#[derive(Debug, Clone)]
pub enum SimilarityClass {
    /// Reduced admissible structure, compared by its canonical encoding.
    Admissible {
        graph: XGraph,
        structure: StructuredGraph,
        canonical: Vec<u8>,
    },
    /// Class of the labelled stick `(|, c)` (arity-2 unit structures).
    UnitLine { color: usize },
    /// Class of the contracted unit of an involution orbit (arity-0
    /// wheel-of-units and isolated-vertex structures).
    UnitWheel { orbit: usize },
}

impl PartialEq for SimilarityClass {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                SimilarityClass::Admissible { canonical: a, .. },
                SimilarityClass::Admissible { canonical: b, .. },
            ) => a == b,
            (SimilarityClass::UnitLine { color: a }, SimilarityClass::UnitLine { color: b }) => {
                a == b
            }
            (SimilarityClass::UnitWheel { orbit: a }, SimilarityClass::UnitWheel { orbit: b }) => {
                a == b
            }
            _ => false,
        }
    }
}
impl Eq for SimilarityClass {}

/// Canonical byte encoding of a structured X-graph (colouring and
/// decorations folded into the canonical search).
pub fn canonical_structure(
    s: &crate::species::GraphicalSpecies,
    x: &XGraph,
    alpha: &StructuredGraph,
) -> Result<Vec<u8>, PointedError> {
    let g = &x.graph;
    let nat: Vec<Vec<usize>> = (0..g.n_vertices())
        .map(|v| g.vertex_data(v).expect("validated graph").incident_edges)
        .collect();
    let coloring = &alpha.coloring;
    let decorations = &alpha.decorations;
    Ok(canonical_form_with(
        g,
        &x.ports,
        |e| coloring[e] as u32,
        |v, slot_edges| {
            let n = nat[v].len();
            // transport the decoration along the candidate slot ordering
            let mut sigma = vec![0usize; n];
            for (j, &e) in slot_edges.iter().enumerate() {
                let pos = nat[v].iter().position(|&x| x == e).expect("incident edge");
                sigma[pos] = j;
            }
            let psi = s
                .act(n, &sigma, decorations[v])
                .expect("validated structure");
            (psi as u32).to_be_bytes().to_vec()
        },
    ))
}

/// Compute the reduced representative of a structured X-graph over a
/// pointed species: delete all unit-decorated vertices, or recognise the
/// exceptional all-unit classes.
pub fn reduced_representative(
    sp: &PointedSpecies,
    x: &XGraph,
    alpha: &StructuredGraph,
) -> Result<SimilarityClass, PointedError> {
    let s = sp.species();
    let g = &x.graph;
    let alpha = StructuredGraph::validate(
        s,
        g,
        alpha.coloring.clone(),
        alpha.decorations.clone(),
    )?;
    let n_colors = s.palette().n_colors();
    let units: BTreeSet<usize> = (0..n_colors).map(|c| sp.unit(c)).collect();
    let contracted: BTreeSet<usize> = (0..n_colors).map(|c| sp.contracted_unit(c)).collect();
    let w_alpha: Vec<usize> = (0..g.n_vertices())
        .filter(|&v| {
            let valency = g.vertex_data(v).expect("validated graph").valency;
            (valency == 2 && units.contains(&alpha.decorations[v]))
                || (valency == 0 && contracted.contains(&alpha.decorations[v]))
        })
        .collect();
    if w_alpha.len() == g.n_vertices() {
        // all vertices carry units: one of the exceptional classes
        return match x.arity() {
            2 => Ok(SimilarityClass::UnitLine {
                // lines of unit-decorated vertices are keyed by the unit's
                // colour, dual to the colour flowing out of the first port
                color: s.palette().omega(alpha.coloring[x.ports[0]]),
            }),
            0 => {
                let orbit = if g.n_edges() > 0 {
                    s.palette().orbit_rep(alpha.coloring[0])
                } else {
                    // isolated vertex carrying a contracted unit
                    s.palette()
                        .orbit_reps()
                        .into_iter()
                        .find(|&r| sp.contracted_unit(r) == alpha.decorations[0])
                        .ok_or_else(|| PointedError::LabelMismatch {
                            reason: "contracted unit does not match any colour orbit".into(),
                        })?
                };
                Ok(SimilarityClass::UnitWheel { orbit })
            }
            a => Err(PointedError::LabelMismatch {
                reason: format!("all-unit structure with arity {a}"),
            }),
        };
    }
    let (quot, delta) = vertex_deletion(g, &w_alpha)?;
    let mut coloring = vec![usize::MAX; quot.n_edges()];
    let removed: BTreeSet<usize> = w_alpha
        .iter()
        .flat_map(|&v| g.vertex_data(v).expect("validated graph").incident_edges)
        .collect();
    for e in 0..g.n_edges() {
        if !removed.contains(&e) {
            coloring[delta.f_e[e]] = alpha.coloring[e];
        }
    }
    let mut decorations = vec![usize::MAX; quot.n_vertices()];
    for (v, &img) in delta.f_v.iter().enumerate() {
        if let StarVertexImage::Vertex(nv) = img {
            decorations[nv] = alpha.decorations[v];
        }
    }
    let structure = StructuredGraph::validate(s, &quot, coloring, decorations)?;
    let ports: Vec<usize> = x.ports.iter().map(|&p| delta.f_e[p]).collect();
    let reduced = XGraph::new(quot, ports)?;
    let canonical = canonical_structure(s, &reduced, &structure)?;
    Ok(SimilarityClass::Admissible {
        graph: reduced,
        structure,
        canonical,
    })
}

/// Whether two structured X-graphs are similar (same reduced
/// representative).  Both must carry the same arity of labelling.
pub fn similarity_equal(
    sp: &PointedSpecies,
    a: (&XGraph, &StructuredGraph),
    b: (&XGraph, &StructuredGraph),
) -> Result<bool, PointedError> {
    if a.0.arity() != b.0.arity() {
        return Err(PointedError::LabelMismatch {
            reason: format!("arities {} and {} differ", a.0.arity(), b.0.arity()),
        });
    }
    Ok(reduced_representative(sp, a.0, a.1)? == reduced_representative(sp, b.0, b.1)?)
}
