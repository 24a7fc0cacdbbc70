//! The graphical category of Kleisli morphisms, the free unital modular
//! operad on a graph, factorisation-category connectivity witnesses, and the
//! Segal-condition checker for finite presheaves.

use crate::colimit::{colimit_graph_of_graphs, Colimit, ColimitError, GraphOfGraphs};
use crate::graph::{corolla, isolated_vertex, stick, wheel, FeynmanGraph, GraphError, RawGraph};
use crate::morphism::{enumerate_etale, GraphMorphism, MorphismError, XGraph};
use crate::pointed::{
    canonical_structure, enumerate_star_morphisms, reduced_representative, validate_star_morphism,
    vertex_deletion, PointedError, SimilarityClass, StarMorphism, StarVertexImage,
};
use crate::species::{
    apply_d, evaluate_species, GraphicalSpecies, Palette, PointedSpecies, RawArity, SpeciesError,
    StructuredGraph,
};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

/// Errors for Kleisli hom-sets, factorisation categories and Segal checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerveError {
    #[error("size bound exceeded: {size} > {bound}")]
    SizeBoundExceeded { size: usize, bound: usize },
    #[error("mismatch: {reason}")]
    Mismatch { reason: String },
    #[error("incomplete presheaf: {reason}")]
    IncompletePresheaf { reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Species(#[from] SpeciesError),
    #[error(transparent)]
    Pointed(#[from] PointedError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
}

// --- the free unital modular operad on a graph -------------------------------

/// The free (unital) modular operad on a graph `H`: the representable
/// species with colours the edges of `H` and arity-`n` elements the etale
/// morphisms from the `n`-corolla, freely pointed with units and contracted
/// units per edge.
pub struct FreeOperad {
    h: FeynmanGraph,
    pointed: PointedSpecies,
    elems: Vec<Vec<GraphMorphism>>,
}

impl FreeOperad {
    pub fn new(h: &FeynmanGraph, max_arity: usize) -> Result<FreeOperad, NerveError> {
        let colors: Vec<String> = (0..h.n_edges()).map(|e| format!("e{e}")).collect();
        let omega: Vec<usize> = (0..h.n_edges()).map(|e| h.tau(e)).collect();
        let palette = Palette::new(colors, omega)?;
        let mut elems: Vec<Vec<GraphMorphism>> = Vec::with_capacity(max_arity + 1);
        let mut arities = Vec::with_capacity(max_arity + 1);
        for n in 0..=max_arity {
            let maps = enumerate_etale(&corolla(n), h, None)?;
            let names: Vec<String> = maps
                .iter()
                .map(|m| format!("v{}:{:?}", m.f_v().first().copied().unwrap_or(0), m.f_e()))
                .collect();
            // slot x of an element is the attached edge n + x of the corolla
            let projections: Vec<Vec<usize>> = (0..n)
                .map(|x| maps.iter().map(|m| m.f_e()[n + x]).collect())
                .collect();
            let mut transpositions = Vec::new();
            for t in 0..n.saturating_sub(1) {
                let mut table = Vec::with_capacity(maps.len());
                for m in &maps {
                    let mut f_e = m.f_e().to_vec();
                    f_e.swap(t, t + 1);
                    f_e.swap(n + t, n + t + 1);
                    let pos = maps
                        .iter()
                        .position(|m2| m2.f_e() == f_e.as_slice())
                        .expect("precomposition with an automorphism stays etale");
                    table.push(pos);
                }
                transpositions.push(table);
            }
            arities.push(RawArity {
                elements: names,
                transpositions,
                projections,
            });
            elems.push(maps);
        }
        let species = GraphicalSpecies::new(palette, arities)?;
        let (pointed, _) = apply_d(&species)?;
        Ok(FreeOperad {
            h: h.clone(),
            pointed,
            elems,
        })
    }

    pub fn target(&self) -> &FeynmanGraph {
        &self.h
    }

    pub fn pointed(&self) -> &PointedSpecies {
        &self.pointed
    }

    /// Convert a star morphism into `H` to a structured graph over the
    /// freely pointed representable species: kept vertices carry their
    /// local etale morphism, deleted bivalent vertices carry units, and a
    /// collapsed isolated vertex carries a contracted unit.
    pub fn structure_of_star(&self, star: &StarMorphism) -> Result<StructuredGraph, NerveError> {
        let g = star.source();
        let s = self.pointed.species();
        let coloring: Vec<usize> = star.f_e().to_vec();
        let deleted: BTreeSet<usize> = star.deletion().iter().copied().collect();
        let mut decorations = Vec::with_capacity(g.n_vertices());
        for v in 0..g.n_vertices() {
            let vd = g.vertex_data(v)?;
            if deleted.contains(&v) {
                if vd.valency == 0 {
                    let StarVertexImage::Orbit(r) = star.f_v()[v] else {
                        return Err(NerveError::Mismatch {
                            reason: "deleted vertex without an orbit image".into(),
                        });
                    };
                    decorations.push(self.pointed.contracted_unit(s.palette().orbit_rep(r)));
                } else {
                    decorations.push(self.pointed.unit(coloring[vd.incident_edges[0]]));
                }
            } else {
                let n = vd.valency;
                let f_e: Vec<usize> = (0..2 * n)
                    .map(|e| {
                        if e < n {
                            self.h.tau(coloring[vd.incident_edges[e]])
                        } else {
                            coloring[vd.incident_edges[e - n]]
                        }
                    })
                    .collect();
                let idx = self.elems[n]
                    .iter()
                    .position(|m| m.f_e() == f_e.as_slice())
                    .ok_or_else(|| NerveError::Mismatch {
                        reason: format!("local morphism at vertex {v} is not etale"),
                    })?;
                decorations.push(idx);
            }
        }
        Ok(StructuredGraph::validate(
            s,
            g,
            coloring,
            decorations,
        )?)
    }

    /// The similarity class of a pair (X-graph, star morphism into `H`).
    pub fn class_of_star(
        &self,
        x: &XGraph,
        star: &StarMorphism,
    ) -> Result<SimilarityClass, NerveError> {
        if *star.source() != x.graph {
            return Err(NerveError::Mismatch {
                reason: "star morphism is not defined on the given X-graph".into(),
            });
        }
        let structure = self.structure_of_star(star)?;
        Ok(reduced_representative(&self.pointed, x, &structure)?)
    }
}

/// An element of the free operad evaluated on a graph.
#[derive(Debug, Clone, PartialEq)]
pub enum FreeOperadElement {
    /// Over the stick: the choice of an edge of the target.
    Color(usize),
    /// Over a corolla: a similarity class of (X-graph, star morphism).
    Class(SimilarityClass),
    /// Over a general graph: a compatible family — edge colours plus one
    /// class per vertex.
    Family {
        edge_colors: Vec<usize>,
        vertex_classes: Vec<SimilarityClass>,
    },
}

/// Boundary colour tuple of a similarity class.
fn class_boundary(s: &GraphicalSpecies, class: &SimilarityClass) -> Vec<usize> {
    match class {
        SimilarityClass::Admissible {
            graph, structure, ..
        } => graph
            .ports
            .iter()
            .map(|&p| s.palette().omega(structure.coloring[p]))
            .collect(),
        SimilarityClass::UnitLine { color } => vec![*color, s.palette().omega(*color)],
        SimilarityClass::UnitWheel { .. } => vec![],
    }
}

/// Enumerate connected X-graphs with the given arity, at most `bound`
/// vertices, and vertex valencies drawn from `valencies`, up to isomorphism.
fn generate_x_graphs(
    arity: usize,
    valencies: &BTreeSet<usize>,
    bound: usize,
) -> Result<Vec<XGraph>, NerveError> {
    let mut out: Vec<XGraph> = Vec::new();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let pool: Vec<usize> = valencies.iter().copied().filter(|&d| d > 0).collect();
    if arity == 0 && valencies.contains(&0) {
        let x = XGraph::new(isolated_vertex(), vec![])?;
        seen.insert(crate::morphism::canonical_form(&x));
        out.push(x);
    }
    // non-decreasing valency profiles
    let mut profiles: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(p) = stack.pop() {
        if !p.is_empty() {
            profiles.push(p.clone());
        }
        if p.len() == bound {
            continue;
        }
        let min = p.last().copied().unwrap_or(0);
        for &d in pool.iter().filter(|&&d| d >= min) {
            let mut q = p.clone();
            q.push(d);
            stack.push(q);
        }
    }
    for profile in profiles {
        let total: usize = profile.iter().sum();
        if total < arity || !(total - arity).is_multiple_of(2) {
            continue;
        }
        // slots in vertex order; pair them into inner orbits or leave
        // `arity` of them as attached partners of ports
        let slot_vertex: Vec<usize> = profile
            .iter()
            .enumerate()
            .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
            .collect();
        let mut partner: Vec<Option<usize>> = vec![None; total]; // inner partner
        let mut is_port_slot = vec![false; total];
        pair_slots(
            0,
            arity,
            &mut partner,
            &mut is_port_slot,
            &mut |partner, is_port_slot| {
                build_graph_from_pairing(&profile, &slot_vertex, partner, is_port_slot, arity)
                    .into_iter()
                    .for_each(|x| {
                        let key = crate::morphism::canonical_form(&x);
                        if seen.insert(key) {
                            out.push(x);
                        }
                    });
            },
        );
    }
    Ok(out)
}

fn pair_slots<F>(
    from: usize,
    ports_left: usize,
    partner: &mut Vec<Option<usize>>,
    is_port_slot: &mut Vec<bool>,
    visit: &mut F,
) where
    F: FnMut(&[Option<usize>], &[bool]),
{
    let Some(i) = (from..partner.len()).find(|&i| partner[i].is_none() && !is_port_slot[i]) else {
        if ports_left == 0 {
            visit(partner, is_port_slot);
        }
        return;
    };
    if ports_left > 0 {
        is_port_slot[i] = true;
        pair_slots(i + 1, ports_left - 1, partner, is_port_slot, visit);
        is_port_slot[i] = false;
    }
    for j in i + 1..partner.len() {
        if partner[j].is_some() || is_port_slot[j] {
            continue;
        }
        partner[i] = Some(j);
        partner[j] = Some(i);
        pair_slots(i + 1, ports_left, partner, is_port_slot, visit);
        partner[i] = None;
        partner[j] = None;
    }
}

fn build_graph_from_pairing(
    profile: &[usize],
    slot_vertex: &[usize],
    partner: &[Option<usize>],
    is_port_slot: &[bool],
    arity: usize,
) -> Vec<XGraph> {
    let total = slot_vertex.len();
    let mut edges = total;
    let mut involution = vec![0usize; total];
    let mut ports_in_order: Vec<usize> = Vec::new();
    for i in 0..total {
        if is_port_slot[i] {
            // attach a fresh port edge as the involution partner
            involution.push(i);
            involution[i] = edges;
            ports_in_order.push(edges);
            edges += 1;
        } else {
            involution[i] = partner[i].expect("complete pairing");
        }
    }
    let half_edges: Vec<(usize, usize)> = (0..total).map(|i| (i, slot_vertex[i])).collect();
    let Ok(g) = FeynmanGraph::validate(RawGraph {
        edges,
        involution,
        half_edges,
        vertices: profile.len(),
        labels: BTreeMap::new(),
    }) else {
        return vec![];
    };
    if !g.is_connected() {
        return vec![];
    }
    // every labelling of the ports
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..arity).collect();
    loop {
        let ports: Vec<usize> = perm.iter().map(|&i| ports_in_order[i]).collect();
        if let Ok(x) = XGraph::new(g.clone(), ports) {
            out.push(x);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All similarity classes of pairs (X-graph with at most `bound` vertices,
/// star morphism into the target of `fo`) at the given arity.
pub fn corolla_classes(
    fo: &FreeOperad,
    arity: usize,
    bound: usize,
) -> Result<Vec<SimilarityClass>, NerveError> {
    let mut valencies: BTreeSet<usize> = fo.h.valencies().into_iter().collect();
    valencies.insert(2);
    if arity == 0 {
        valencies.insert(0);
    }
    let mut classes: Vec<SimilarityClass> = Vec::new();
    for x in generate_x_graphs(arity, &valencies, bound)? {
        for star in enumerate_star_morphisms(&x.graph, &fo.h, None)? {
            let class = fo.class_of_star(&x, &star)?;
            if !classes.contains(&class) {
                classes.push(class);
            }
        }
    }
    Ok(classes)
}

/// Evaluate the free unital modular operad on `H` at a graph `G`: edge
/// choices over the stick, similarity classes over corollas, and compatible
/// families over general graphs.  `vertex_bound` caps representative sizes.
pub fn free_operad_hom(
    g: &FeynmanGraph,
    h: &FeynmanGraph,
    vertex_bound: usize,
) -> Result<Vec<FreeOperadElement>, NerveError> {
    if g.n_vertices() == 0 {
        return Ok((0..h.n_edges()).map(FreeOperadElement::Color).collect());
    }
    let max_arity = g
        .valencies()
        .into_iter()
        .chain(h.valencies())
        .max()
        .unwrap_or(0)
        .max(2);
    let fo = FreeOperad::new(h, max_arity)?;
    let bi = g.boundary_and_inner();
    if g.n_vertices() == 1 && bi.inner_orbits.is_empty() {
        let n = g.vertex_data(0)?.valency;
        return Ok(corolla_classes(&fo, n, vertex_bound)?
            .into_iter()
            .map(FreeOperadElement::Class)
            .collect());
    }
    // general case: compatible families over the elements of g
    let s = fo.pointed.species().clone();
    let mut per_arity: BTreeMap<usize, Vec<SimilarityClass>> = BTreeMap::new();
    for v in 0..g.n_vertices() {
        let n = g.vertex_data(v)?.valency;
        if let std::collections::btree_map::Entry::Vacant(e) = per_arity.entry(n) {
            e.insert(corolla_classes(&fo, n, vertex_bound)?);
        }
    }
    let orbits = g.orbits();
    let mut out = Vec::new();
    let mut choice = vec![0usize; orbits.len()];
    let n_colors = h.n_edges();
    'outer: loop {
        let mut coloring = vec![0usize; g.n_edges()];
        for (o, &c) in orbits.iter().zip(&choice) {
            coloring[o[0]] = c;
            coloring[o[1]] = h.tau(c);
        }
        // per-vertex classes whose boundary matches the colouring
        let mut options: Vec<Vec<&SimilarityClass>> = Vec::with_capacity(g.n_vertices());
        let mut feasible = true;
        for v in 0..g.n_vertices() {
            let vd = g.vertex_data(v)?;
            let want: Vec<usize> = vd.incident_edges.iter().map(|&e| coloring[e]).collect();
            let opts: Vec<&SimilarityClass> = per_arity[&vd.valency]
                .iter()
                .filter(|c| class_boundary(&s, c) == want)
                .collect();
            if opts.is_empty() {
                feasible = false;
                break;
            }
            options.push(opts);
        }
        if feasible {
            let mut pick = vec![0usize; options.len()];
            loop {
                out.push(FreeOperadElement::Family {
                    edge_colors: coloring.clone(),
                    vertex_classes: pick
                        .iter()
                        .zip(&options)
                        .map(|(&i, opts)| opts[i].clone())
                        .collect(),
                });
                if !advance(&mut pick, |i| options[i].len()) {
                    break;
                }
            }
        }
        if !advance(&mut choice, |_| n_colors) {
            break 'outer;
        }
    }
    Ok(out)
}

fn advance<F: Fn(usize) -> usize>(counter: &mut [usize], radix: F) -> bool {
    for (i, c) in counter.iter_mut().enumerate() {
        *c += 1;
        if *c < radix(i) {
            return true;
        }
        *c = 0;
    }
    false
}

// --- Kleisli morphisms --------------------------------------------------------

/// A morphism of the graphical category: a non-degenerate graph of graphs
/// over the source together with a star morphism from its colimit to the
/// target.
#[derive(Debug, Clone)]
pub struct KlgrMorphism {
    gog: GraphOfGraphs,
    star: StarMorphism,
    colimit: Colimit,
}

impl KlgrMorphism {
    pub fn new(gog: GraphOfGraphs, star: StarMorphism) -> Result<KlgrMorphism, NerveError> {
        if gog.is_degenerate().is_some() {
            return Err(NerveError::Mismatch {
                reason: "representatives use non-degenerate graphs of graphs".into(),
            });
        }
        let colimit = colimit_graph_of_graphs(&gog)?;
        if colimit.graph != *star.source() {
            return Err(NerveError::Mismatch {
                reason: "star morphism is not defined on the colimit".into(),
            });
        }
        Ok(KlgrMorphism {
            gog,
            star,
            colimit,
        })
    }

    pub fn source(&self) -> &FeynmanGraph {
        &self.gog.base
    }

    pub fn target(&self) -> &FeynmanGraph {
        self.star.target()
    }

    pub fn gog(&self) -> &GraphOfGraphs {
        &self.gog
    }

    pub fn star(&self) -> &StarMorphism {
        &self.star
    }

    /// The restricted star morphism on the piece over base vertex `v`.
    fn piece_star(&self, v: usize) -> Result<(XGraph, StarMorphism), NerveError> {
        let piece = &self.gog.pieces[v];
        let inc = &self.colimit.piece_inclusions[v];
        let f_e: Vec<usize> = inc.f_e().iter().map(|&e| self.star.f_e()[e]).collect();
        let f_v: Vec<StarVertexImage> = inc
            .f_v()
            .iter()
            .map(|&u| self.star.f_v()[u])
            .collect();
        let restricted =
            validate_star_morphism(&piece.graph, self.star.target(), f_e, f_v)?;
        Ok((
            XGraph::new(piece.graph.clone(), piece.ports.clone())?,
            restricted,
        ))
    }
}

/// Decide whether two representatives denote the same Kleisli morphism:
/// the edge assignments on the base must agree, and over every base vertex
/// the restricted pairs must be similar.
pub fn klgr_equal(a: &KlgrMorphism, b: &KlgrMorphism) -> Result<bool, NerveError> {
    if a.gog.base != b.gog.base {
        return Err(NerveError::Mismatch {
            reason: "sources differ".into(),
        });
    }
    if a.star.target() != b.star.target() {
        return Err(NerveError::Mismatch {
            reason: "targets differ".into(),
        });
    }
    let base = &a.gog.base;
    for e in 0..base.n_edges() {
        if a.star.f_e()[a.colimit.base_edge_map[e]] != b.star.f_e()[b.colimit.base_edge_map[e]] {
            return Ok(false);
        }
    }
    let max_arity = a
        .colimit
        .graph
        .valencies()
        .into_iter()
        .chain(b.colimit.graph.valencies())
        .max()
        .unwrap_or(0)
        .max(2);
    let fo = FreeOperad::new(a.star.target(), max_arity)?;
    for v in 0..base.n_vertices() {
        let (xa, sa) = a.piece_star(v)?;
        let (xb, sb) = b.piece_star(v)?;
        if fo.class_of_star(&xa, &sa)? != fo.class_of_star(&xb, &sb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// --- factorisation categories -------------------------------------------------

/// Connectivity report of a factorisation category, enumerated up to a
/// vertex bound from a representative structured X-graph.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    /// Number of objects found within the bound (up to isomorphism).
    pub objects: usize,
    /// Whether all objects are connected through pointed morphisms.
    pub pointed_connected: bool,
    /// Whether all objects are connected through etale morphisms alone.
    pub unpointed_connected: bool,
    /// Longest zig-zag (number of single unit insertions or deletions)
    /// needed to reach the canonical reduced object.
    pub max_zigzag: usize,
    /// The vertex bound used for the enumeration.
    pub vertex_bound: usize,
}

/// Insert a unit-decorated bivalent vertex on the orbit of `edge`.
fn insert_unit_vertex(
    sp: &PointedSpecies,
    x: &XGraph,
    alpha: &StructuredGraph,
    edge: usize,
) -> Result<(XGraph, StructuredGraph), NerveError> {
    let g = &x.graph;
    let e = edge;
    let te = g.tau(e);
    let mut raw = g.to_raw();
    let (na, nb) = (raw.edges, raw.edges + 1);
    raw.edges += 2;
    raw.involution[e] = na;
    raw.involution.push(e);
    raw.involution.push(te);
    raw.involution[te] = nb;
    let w = raw.vertices;
    raw.vertices += 1;
    raw.half_edges.push((na, w));
    raw.half_edges.push((nb, w));
    let quot = FeynmanGraph::validate(raw)?;
    let s = sp.species();
    let gamma = alpha.coloring[e];
    let mut coloring = alpha.coloring.clone();
    coloring.push(s.palette().omega(gamma));
    coloring.push(gamma);
    let mut decorations = alpha.decorations.clone();
    decorations.push(sp.unit(s.palette().omega(gamma)));
    let structure = StructuredGraph::validate(s, &quot, coloring, decorations)?;
    Ok((XGraph::new(quot, x.ports.clone())?, structure))
}

/// Delete one unit-decorated bivalent vertex; `None` when the result would
/// leave the category of admissible X-graphs.
fn delete_unit_vertex(
    sp: &PointedSpecies,
    x: &XGraph,
    alpha: &StructuredGraph,
    v: usize,
) -> Result<Option<(XGraph, StructuredGraph)>, NerveError> {
    let g = &x.graph;
    if g.n_vertices() <= 1 {
        return Ok(None);
    }
    let vd = g.vertex_data(v)?;
    if vd.valency != 2 {
        return Ok(None);
    }
    let s = sp.species();
    let is_unit = (0..s.palette().n_colors()).any(|c| sp.unit(c) == alpha.decorations[v]);
    if !is_unit {
        return Ok(None);
    }
    let (quot, delta) = vertex_deletion(g, &[v])?;
    if quot.n_vertices() == 0 {
        return Ok(None);
    }
    let removed: BTreeSet<usize> = vd.incident_edges.iter().copied().collect();
    let mut coloring = vec![usize::MAX; quot.n_edges()];
    for e in 0..g.n_edges() {
        if !removed.contains(&e) {
            coloring[delta.f_e()[e]] = alpha.coloring[e];
        }
    }
    let mut decorations = vec![usize::MAX; quot.n_vertices()];
    for (u, &img) in delta.f_v().iter().enumerate() {
        if let StarVertexImage::Vertex(nu) = img {
            decorations[nu] = alpha.decorations[u];
        }
    }
    let structure = StructuredGraph::validate(s, &quot, coloring, decorations)?;
    let ports: Vec<usize> = x.ports.iter().map(|&p| delta.f_e()[p]).collect();
    Ok(Some((XGraph::new(quot, ports)?, structure)))
}

/// Whether a morphism of the given flavour connects two objects (ports
/// preserved positionally).
fn objects_linked(
    a: &XGraph,
    b: &XGraph,
    pointed: bool,
) -> Result<bool, NerveError> {
    let check = |f_e: &[usize]| a.ports.iter().zip(&b.ports).all(|(&p, &q)| f_e[p] == q);
    if pointed {
        for m in enumerate_star_morphisms(&a.graph, &b.graph, None)? {
            if check(m.f_e()) {
                return Ok(true);
            }
        }
    } else {
        for m in enumerate_etale(&a.graph, &b.graph, None)? {
            if check(m.f_e()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Enumerate the factorisation-category objects of the class of `(x, α)` up
/// to `vertex_bound` vertices and report connectivity, both in the pointed
/// category and in the etale-only (unpointed) variant.
pub fn factorization_category_witness(
    sp: &PointedSpecies,
    x: &XGraph,
    alpha: &StructuredGraph,
    vertex_bound: usize,
) -> Result<FactorizationReport, NerveError> {
    let s = sp.species();
    let class = reduced_representative(sp, x, alpha)?;
    // seed objects: the given representative plus the exceptional minimal
    // representatives of the stick-valued classes
    let mut seeds: Vec<(XGraph, StructuredGraph)> = vec![(x.clone(), alpha.clone())];
    match &class {
        SimilarityClass::UnitWheel { orbit } => {
            let iso = XGraph::new(isolated_vertex(), vec![])?;
            let st = StructuredGraph::validate(
                s,
                &iso.graph,
                vec![],
                vec![sp.contracted_unit(*orbit)],
            )?;
            seeds.push((iso, st));
            let w = wheel(1);
            let st = StructuredGraph::validate(
                s,
                &w,
                vec![*orbit, s.palette().omega(*orbit)],
                vec![sp.unit(*orbit)],
            )?;
            seeds.push((XGraph::new(w, vec![])?, st));
        }
        SimilarityClass::UnitLine { color } => {
            let c = *color;
            let g = corolla(2);
            let st = StructuredGraph::validate(
                s,
                &g,
                vec![
                    s.palette().omega(c),
                    c,
                    c,
                    s.palette().omega(c),
                ],
                vec![sp.unit(c)],
            )?;
            seeds.push((XGraph::new(g, vec![0, 1])?, st));
        }
        SimilarityClass::Admissible { .. } => {}
    }
    // breadth-first closure under single unit insertions and deletions
    let mut objects: Vec<(XGraph, StructuredGraph, usize /*seed component*/)> = Vec::new();
    let mut keys: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut dist: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    for (ci, (sx, sa)) in seeds.into_iter().enumerate() {
        let key = canonical_structure(s, &sx, &sa)?;
        if keys.contains_key(&key) {
            continue;
        }
        keys.insert(key, objects.len());
        queue.push_back(objects.len());
        objects.push((sx, sa, ci));
        dist.push(0);
    }
    while let Some(i) = queue.pop_front() {
        let (cx, ca, comp) = objects[i].clone();
        let d = dist[i];
        let mut neighbors: Vec<(XGraph, StructuredGraph)> = Vec::new();
        if cx.graph.n_vertices() < vertex_bound {
            for o in cx.graph.orbits() {
                neighbors.push(insert_unit_vertex(sp, &cx, &ca, o[0])?);
            }
        }
        for v in 0..cx.graph.n_vertices() {
            if let Some(n) = delete_unit_vertex(sp, &cx, &ca, v)? {
                neighbors.push(n);
            }
        }
        for (nx, na) in neighbors {
            let key = canonical_structure(s, &nx, &na)?;
            if let std::collections::btree_map::Entry::Vacant(en) = keys.entry(key) {
                en.insert(objects.len());
                queue.push_back(objects.len());
                objects.push((nx, na, comp));
                dist.push(d + 1);
            }
        }
    }
    // sanity: every object stays in the class
    for (ox, oa, _) in &objects {
        debug_assert_eq!(reduced_representative(sp, ox, oa)?, class);
    }
    // connectivity across seed components through explicit morphisms
    let comps: BTreeSet<usize> = objects.iter().map(|(_, _, c)| c).copied().collect();
    let connected = |pointed: bool| -> Result<bool, NerveError> {
        if comps.len() <= 1 {
            return Ok(true);
        }
        fn find(parent: &mut [usize], i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        let mut parent: Vec<usize> = (0..objects.len()).collect();
        // objects reached through the same zig-zag search are already linked
        for i in 1..objects.len() {
            if let Some(j) = (0..i).find(|&j| objects[j].2 == objects[i].2) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
        for i in 0..objects.len() {
            for j in 0..objects.len() {
                if i == j || find(&mut parent, i) == find(&mut parent, j) {
                    continue;
                }
                if objects_linked(&objects[i].0, &objects[j].0, pointed)? {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let roots: BTreeSet<usize> = (0..objects.len()).map(|i| find(&mut parent, i)).collect();
        Ok(roots.len() == 1)
    };
    // the unpointed variant additionally loses the insertion/deletion moves,
    // so it is connected only when a single object remains or etale
    // morphisms link everything pairwise
    let unpointed = if objects.len() == 1 {
        true
    } else {
        let mut ok = true;
        'pairs: for i in 0..objects.len() {
            for j in 0..objects.len() {
                if i != j
                    && !objects_linked(&objects[i].0, &objects[j].0, false)?
                    && !objects_linked(&objects[j].0, &objects[i].0, false)?
                {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        ok
    };
    Ok(FactorizationReport {
        objects: objects.len(),
        pointed_connected: connected(true)?,
        unpointed_connected: unpointed,
        max_zigzag: dist.iter().copied().max().unwrap_or(0),
        vertex_bound,
    })
}

/// The documented counterexample: over the free species on the stick, the
/// contracted-unit element of the stick has factorisation objects (the
/// isolated vertex and the wheels of units) that no etale morphism
/// connects, while the pointed category connects them.
pub fn unpointed_counterexample() -> Result<FactorizationReport, NerveError> {
    let fo = FreeOperad::new(&stick(), 2)?;
    let sp = fo.pointed();
    let s = sp.species();
    let iso = XGraph::new(isolated_vertex(), vec![])?;
    let alpha =
        StructuredGraph::validate(s, &iso.graph, vec![], vec![sp.contracted_unit(0)])?;
    factorization_category_witness(sp, &iso, &alpha, 2)
}

// --- finite presheaves and the Segal condition --------------------------------

/// An extensional finite presheaf: named graphs, value-name lists, and
/// restriction tables along explicitly listed etale morphisms (keyed by the
/// edge map).
#[derive(Debug, Clone)]
pub struct FinitePresheaf {
    pub objects: Vec<(String, FeynmanGraph)>,
    pub values: Vec<Vec<String>>,
    /// `(source object, target object, f_E)` — the table sends an index of
    /// `P(target)` to an index of `P(source)`.
    pub restrictions: BTreeMap<(usize, usize, Vec<usize>), Vec<usize>>,
}

impl FinitePresheaf {
    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|(n, _)| n == name)
    }

    /// Check table shapes and functoriality over the listed morphisms.
    pub fn validate(&self) -> Result<(), NerveError> {
        if self.values.len() != self.objects.len() {
            return Err(NerveError::IncompletePresheaf {
                reason: "value table count differs from object count".into(),
            });
        }
        for ((a, b, f_e), table) in &self.restrictions {
            if table.len() != self.values[*b].len()
                || table.iter().any(|&i| i >= self.values[*a].len())
            {
                return Err(NerveError::IncompletePresheaf {
                    reason: format!("restriction table {a}->{b} has the wrong shape"),
                });
            }
            if f_e.len() != self.objects[*a].1.n_edges() {
                return Err(NerveError::IncompletePresheaf {
                    reason: format!("restriction key {a}->{b} has the wrong edge count"),
                });
            }
        }
        // functoriality on listed composable pairs
        for ((a, b, f1), t1) in &self.restrictions {
            for ((b2, c, f2), t2) in &self.restrictions {
                if b2 != b {
                    continue;
                }
                let comp: Vec<usize> = f1.iter().map(|&e| f2[e]).collect();
                if let Some(tc) = self.restrictions.get(&(*a, *c, comp)) {
                    for v in 0..self.values[*c].len() {
                        if tc[v] != t1[t2[v]] {
                            return Err(NerveError::IncompletePresheaf {
                                reason: format!(
                                    "restriction tables are not functorial over {a}->{b}->{c}"
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Diagnostic outcome of a Segal check.
#[derive(Debug, Clone)]
pub struct SegalReport {
    pub object: String,
    pub el_objects: usize,
    pub families: usize,
    pub values: usize,
    pub passed: bool,
    /// Matching families not hit by any value of `P(G)`.
    pub missing: Vec<String>,
    /// Value pairs of `P(G)` restricting to the same family.
    pub duplicated: Vec<String>,
}

fn is_element_shape(g: &FeynmanGraph) -> bool {
    g.n_vertices() == 0
        || (g.n_vertices() == 1 && g.boundary_and_inner().inner_orbits.is_empty())
}

/// Solve a finite limit: one value index per object subject to
/// `value[src] == table[value[tgt]]` constraints.
fn solve_limit(
    sizes: &[usize],
    constraints: &[(usize, usize, Vec<usize>)],
    cap: usize,
) -> Result<Vec<Vec<usize>>, NerveError> {
    let mut per_object: Vec<Vec<(usize, usize, bool)>> = vec![vec![]; sizes.len()];
    for (k, &(a, b, _)) in constraints.iter().enumerate() {
        let last = a.max(b);
        per_object[last].push((k, a.min(b), a < b));
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut assignment: Vec<usize> = Vec::new();
    let mut steps = 0usize;
    fn rec(
        sizes: &[usize],
        constraints: &[(usize, usize, Vec<usize>)],
        per_object: &[Vec<(usize, usize, bool)>],
        assignment: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        steps: &mut usize,
        cap: usize,
    ) -> Result<(), NerveError> {
        let t = assignment.len();
        if t == sizes.len() {
            out.push(assignment.clone());
            return Ok(());
        }
        for v in 0..sizes[t] {
            *steps += 1;
            if *steps > cap {
                return Err(NerveError::SizeBoundExceeded {
                    size: *steps,
                    bound: cap,
                });
            }
            assignment.push(v);
            let ok = per_object[t].iter().all(|&(k, other, src_is_min)| {
                let (a, b, ref table) = constraints[k];
                let _ = (other, src_is_min);
                let (va, vb) = (assignment[a], assignment[b]);
                va == table[vb]
            });
            if ok {
                rec(sizes, constraints, per_object, assignment, out, steps, cap)?;
            }
            assignment.pop();
        }
        Ok(())
    }
    rec(
        sizes,
        constraints,
        &per_object,
        &mut assignment,
        &mut out,
        &mut steps,
        cap,
    )?;
    Ok(out)
}

/// Check the Segal condition at one object of a finite presheaf: the values
/// must map bijectively onto the matching families over the object's
/// elements.
pub fn segal_check(p: &FinitePresheaf, gname: &str) -> Result<SegalReport, NerveError> {
    p.validate()?;
    let gi = p
        .object_index(gname)
        .ok_or_else(|| NerveError::IncompletePresheaf {
            reason: format!("object {gname} is not listed"),
        })?;
    let g = p.objects[gi].1.clone();
    // the elements of g: etale morphisms from listed stick/corolla objects
    let mut el: Vec<(usize, Vec<usize>)> = Vec::new(); // (shape object, b.f_e)
    for (ai, (_, ag)) in p.objects.iter().enumerate() {
        if !is_element_shape(ag) {
            continue;
        }
        for b in enumerate_etale(ag, &g, None)? {
            if !p
                .restrictions
                .contains_key(&(ai, gi, b.f_e().to_vec()))
            {
                return Err(NerveError::IncompletePresheaf {
                    reason: format!(
                        "restriction along an element {} -> {gname} is missing",
                        p.objects[ai].0
                    ),
                });
            }
            el.push((ai, b.f_e().to_vec()));
        }
    }
    // shapes must cover every valency of g and the stick
    if g.n_edges() > 0 && !el.iter().any(|(ai, _)| p.objects[*ai].1.n_vertices() == 0) {
        return Err(NerveError::IncompletePresheaf {
            reason: "no stick object is listed".into(),
        });
    }
    for v in 0..g.n_vertices() {
        let n = g.vertex_data(v)?.valency;
        if !el
            .iter()
            .any(|(ai, fe)| p.objects[*ai].1.n_vertices() == 1 && fe.len() == 2 * n)
        {
            return Err(NerveError::IncompletePresheaf {
                reason: format!("no corolla object covers valency {n}"),
            });
        }
    }
    // morphisms of the element category
    let mut constraints: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, (ai, fa)) in el.iter().enumerate() {
        for (j, (bi, fb)) in el.iter().enumerate() {
            if i == j {
                continue;
            }
            for m in enumerate_etale(&p.objects[*ai].1, &p.objects[*bi].1, None)? {
                let commutes = m
                    .f_e()
                    .iter()
                    .enumerate()
                    .all(|(e, &ie)| fb[ie] == fa[e]);
                if !commutes {
                    continue;
                }
                let table = p
                    .restrictions
                    .get(&(*ai, *bi, m.f_e().to_vec()))
                    .ok_or_else(|| NerveError::IncompletePresheaf {
                        reason: format!(
                            "restriction along {} -> {} is missing",
                            p.objects[*ai].0, p.objects[*bi].0
                        ),
                    })?;
                constraints.push((i, j, table.clone()));
            }
        }
    }
    let sizes: Vec<usize> = el.iter().map(|(ai, _)| p.values[*ai].len()).collect();
    let families = solve_limit(&sizes, &constraints, 1 << 22)?;
    // canonical map P(G) -> lim
    let mut images: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in 0..p.values[gi].len() {
        let fam: Vec<usize> = el
            .iter()
            .map(|(ai, fe)| p.restrictions[&(*ai, gi, fe.clone())][v])
            .collect();
        images.entry(fam).or_default().push(v);
    }
    let fam_name = |fam: &[usize]| -> String {
        fam.iter()
            .enumerate()
            .map(|(i, &v)| {
                format!("{}={}", p.objects[el[i].0].0, p.values[el[i].0][v])
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut missing = Vec::new();
    let mut duplicated = Vec::new();
    for fam in &families {
        match images.get(fam) {
            None => missing.push(fam_name(fam)),
            Some(vs) if vs.len() > 1 => duplicated.push(format!(
                "{} <- {{{}}}",
                fam_name(fam),
                vs.iter()
                    .map(|&v| p.values[gi][v].clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
            Some(_) => {}
        }
    }
    // values restricting to non-matching tuples also break the bijection
    for (fam, vs) in &images {
        if !families.contains(fam) {
            missing.push(format!(
                "value {} restricts to a non-matching family",
                vs.iter()
                    .map(|&v| p.values[gi][v].clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }
    let passed = missing.is_empty() && duplicated.is_empty();
    Ok(SegalReport {
        object: gname.to_string(),
        el_objects: el.len(),
        families: families.len(),
        values: p.values[gi].len(),
        passed,
        missing,
        duplicated,
    })
}

/// Restrict a structured graph along an etale morphism from a stick or
/// corolla shape.
fn restrict_structure(
    s: &GraphicalSpecies,
    m: &GraphMorphism,
    st: &StructuredGraph,
) -> Result<StructuredGraph, NerveError> {
    let a = m.source();
    let coloring: Vec<usize> = m.f_e().iter().map(|&e| st.coloring[e]).collect();
    let mut decorations = Vec::with_capacity(a.n_vertices());
    for v in 0..a.n_vertices() {
        let vd = a.vertex_data(v)?;
        let w = m.f_v()[v];
        let wd = m.target().vertex_data(w)?;
        let n = vd.valency;
        let mut sigma = vec![0usize; n];
        for (x, &e) in vd.incident_edges.iter().enumerate() {
            let pos = wd
                .incident_edges
                .iter()
                .position(|&f| f == m.f_e()[e])
                .ok_or_else(|| NerveError::Mismatch {
                    reason: "morphism is not a local bijection".into(),
                })?;
            sigma[pos] = x;
        }
        decorations.push(s.act(n, &sigma, st.decorations[w])?);
    }
    Ok(StructuredGraph::validate(s, a, coloring, decorations)?)
}

/// Build the extensional presheaf induced by a graphical species on the
/// given named graphs (a stick object and corolla objects for every
/// occurring valency are added automatically).
pub fn species_presheaf(
    s: &GraphicalSpecies,
    named: &[(&str, FeynmanGraph)],
    bound: Option<usize>,
) -> Result<FinitePresheaf, NerveError> {
    let mut objects: Vec<(String, FeynmanGraph)> = vec![("stick".to_string(), stick())];
    let mut needed: BTreeSet<usize> = BTreeSet::new();
    for (_, g) in named {
        needed.extend(g.valencies());
    }
    for &n in &needed {
        objects.push((format!("corolla{n}"), corolla(n)));
    }
    for (name, g) in named {
        if objects.iter().any(|(n, _)| n == name) {
            return Err(NerveError::Mismatch {
                reason: format!("object name {name} is already taken"),
            });
        }
        objects.push((name.to_string(), g.clone()));
    }
    let mut structures: Vec<Vec<StructuredGraph>> = Vec::with_capacity(objects.len());
    let mut values: Vec<Vec<String>> = Vec::with_capacity(objects.len());
    for (_, g) in &objects {
        let sts = evaluate_species(s, g, bound)?;
        values.push((0..sts.len()).map(|i| format!("s{i}")).collect());
        structures.push(sts);
    }
    let mut restrictions = BTreeMap::new();
    for (ai, (_, ag)) in objects.iter().enumerate() {
        if !is_element_shape(ag) {
            continue;
        }
        for (bi, (_, bg)) in objects.iter().enumerate() {
            for m in enumerate_etale(ag, bg, None)? {
                let table: Vec<usize> = structures[bi]
                    .iter()
                    .map(|st| {
                        let r = restrict_structure(s, &m, st)?;
                        structures[ai]
                            .iter()
                            .position(|c| *c == r)
                            .ok_or_else(|| NerveError::Mismatch {
                                reason: "restricted structure is not listed".into(),
                            })
                    })
                    .collect::<Result<_, _>>()?;
                restrictions.insert((ai, bi, m.f_e().to_vec()), table);
            }
        }
    }
    let p = FinitePresheaf {
        objects,
        values,
        restrictions,
    };
    p.validate()?;
    Ok(p)
}

/// Restrict a structured graph along a star morphism from a stick, corolla
/// or isolated-vertex shape (units decorate deleted vertices).
fn restrict_structure_star(
    sp: &PointedSpecies,
    b: &StarMorphism,
    st: &StructuredGraph,
) -> Result<StructuredGraph, NerveError> {
    let s = sp.species();
    let a = b.source();
    let coloring: Vec<usize> = b.f_e().iter().map(|&e| st.coloring[e]).collect();
    let deleted: BTreeSet<usize> = b.deletion().iter().copied().collect();
    let mut decorations = Vec::with_capacity(a.n_vertices());
    for v in 0..a.n_vertices() {
        let vd = a.vertex_data(v)?;
        if deleted.contains(&v) {
            if vd.valency == 0 {
                let StarVertexImage::Orbit(r) = b.f_v()[v] else {
                    return Err(NerveError::Mismatch {
                        reason: "deleted vertex without an orbit image".into(),
                    });
                };
                let c = st.coloring[r];
                decorations.push(sp.contracted_unit(s.palette().orbit_rep(c)));
            } else {
                decorations.push(sp.unit(coloring[vd.incident_edges[0]]));
            }
            continue;
        }
        let StarVertexImage::Vertex(w) = b.f_v()[v] else {
            return Err(NerveError::Mismatch {
                reason: "kept vertex with an orbit image".into(),
            });
        };
        let wd = b.target().vertex_data(w)?;
        let n = vd.valency;
        let mut sigma = vec![0usize; n];
        for (x, &e) in vd.incident_edges.iter().enumerate() {
            let pos = wd
                .incident_edges
                .iter()
                .position(|&f| f == b.f_e()[e])
                .ok_or_else(|| NerveError::Mismatch {
                    reason: "star morphism is not locally bijective at a kept vertex".into(),
                })?;
            sigma[pos] = x;
        }
        decorations.push(s.act(n, &sigma, st.decorations[w])?);
    }
    Ok(StructuredGraph::validate(s, a, coloring, decorations)?)
}

/// Verify that the limit of a pointed species over the pointed elements of
/// `g` agrees with the limit over the plain (etale) elements — the
/// finality of the unpointed element category.
pub fn finality_check(sp: &PointedSpecies, g: &FeynmanGraph) -> Result<bool, NerveError> {
    let s = sp.species();
    let mut shape_arities: BTreeSet<usize> = g.valencies().into_iter().collect();
    shape_arities.insert(0);
    shape_arities.insert(2);
    let mut shapes: Vec<FeynmanGraph> = vec![stick()];
    shapes.extend(shape_arities.iter().map(|&n| corolla(n)));
    let mut shape_values: Vec<Vec<StructuredGraph>> = Vec::new();
    for sh in &shapes {
        shape_values.push(evaluate_species(s, sh, Some(1 << 16))?);
    }
    // pointed elements: star morphisms from the shapes into g
    let mut el: Vec<(usize, StarMorphism)> = Vec::new();
    for (si, sh) in shapes.iter().enumerate() {
        for b in enumerate_star_morphisms(sh, g, None)? {
            el.push((si, b));
        }
    }
    let g_values = evaluate_species(s, g, Some(1 << 16))?;
    // restriction tables of each element
    let mut el_tables: Vec<Vec<usize>> = Vec::with_capacity(el.len());
    for (si, b) in &el {
        let mut table = Vec::with_capacity(g_values.len());
        for st in &g_values {
            let r = restrict_structure_star(sp, b, st)?;
            let idx = shape_values[*si]
                .iter()
                .position(|c| *c == r)
                .ok_or_else(|| NerveError::Mismatch {
                    reason: "restricted structure is not a listed value".into(),
                })?;
            table.push(idx);
        }
        el_tables.push(table);
    }
    // morphisms between pointed elements
    let mut constraints: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, (ai, ba)) in el.iter().enumerate() {
        for (j, (bi, bb)) in el.iter().enumerate() {
            if i == j {
                continue;
            }
            for m in enumerate_star_morphisms(&shapes[*ai], &shapes[*bi], None)? {
                let composed = match m.compose_with(bb) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                if composed != *ba {
                    continue;
                }
                let table: Vec<usize> = shape_values[*bi]
                    .iter()
                    .map(|st| {
                        let r = restrict_structure_star(sp, &m, st)?;
                        shape_values[*ai]
                            .iter()
                            .position(|c| *c == r)
                            .ok_or_else(|| NerveError::Mismatch {
                                reason: "restriction left the listed values".into(),
                            })
                    })
                    .collect::<Result<_, _>>()?;
                constraints.push((i, j, table));
            }
        }
    }
    let sizes: Vec<usize> = el.iter().map(|(si, _)| shape_values[*si].len()).collect();
    let pointed_families = solve_limit(&sizes, &constraints, 1 << 22)?;
    // the plain (etale) sub-diagram
    let etale_idx: Vec<usize> = (0..el.len()).filter(|&i| el[i].1.is_etale()).collect();
    let pos_of: BTreeMap<usize, usize> = etale_idx
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p))
        .collect();
    let e_sizes: Vec<usize> = etale_idx
        .iter()
        .map(|&i| shape_values[el[i].0].len())
        .collect();
    let e_constraints: Vec<(usize, usize, Vec<usize>)> = constraints
        .iter()
        .filter_map(|(i, j, t)| {
            let (pi, pj) = (pos_of.get(i)?, pos_of.get(j)?);
            // keep only constraints arising from etale morphisms between
            // etale elements: those are exactly the table-compatible ones
            Some((*pi, *pj, t.clone()))
        })
        .collect();
    let plain_families = solve_limit(&e_sizes, &e_constraints, 1 << 22)?;
    // project pointed families to the etale coordinates
    let mut projected: BTreeSet<Vec<usize>> = BTreeSet::new();
    for fam in &pointed_families {
        projected.insert(etale_idx.iter().map(|&i| fam[i]).collect());
    }
    let plain_set: BTreeSet<Vec<usize>> = plain_families.into_iter().collect();
    Ok(projected == plain_set
        && pointed_families.len() == projected.len()
        && g_values.len() == plain_set.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimit::Piece;
    use crate::graph::{line, GraphKind};
    use crate::species::terminal_species;

    #[test]
    fn free_operad_on_the_stick_over_a_graph() {
        for h in [stick(), line(1), wheel(2)] {
            let out = free_operad_hom(&stick(), &h, 2).unwrap();
            assert_eq!(out.len(), h.n_edges());
            assert!(out
                .iter()
                .enumerate()
                .all(|(e, x)| *x == FreeOperadElement::Color(e)));
        }
    }

    #[test]
    fn contracted_unit_is_the_only_closed_class_over_the_stick() {
        let out = free_operad_hom(&isolated_vertex(), &stick(), 2).unwrap();
        assert_eq!(out.len(), 1);
        assert!(matches!(
            out[0],
            FreeOperadElement::Class(SimilarityClass::UnitWheel { .. })
        ));
    }

    #[test]
    fn zero_connected_identification() {
        // the collapsed isolated vertex and the collapsed wheels of every
        // size represent the same class
        let fo = FreeOperad::new(&stick(), 2).unwrap();
        let c0 = XGraph::new(isolated_vertex(), vec![]).unwrap();
        let z = &enumerate_star_morphisms(&c0.graph, &stick(), None).unwrap()[0];
        let base = fo.class_of_star(&c0, z).unwrap();
        for m in 1..=3 {
            let w = XGraph::new(wheel(m), vec![]).unwrap();
            let stars = enumerate_star_morphisms(&w.graph, &stick(), None).unwrap();
            assert!(!stars.is_empty());
            for k in &stars {
                assert_eq!(fo.class_of_star(&w, k).unwrap(), base);
            }
        }
    }

    #[test]
    fn class_sets_are_stable_under_bound_growth() {
        let fo = FreeOperad::new(&line(1), 3).unwrap();
        let small = corolla_classes(&fo, 2, 1).unwrap();
        let large = corolla_classes(&fo, 2, 3).unwrap();
        assert!(!small.is_empty());
        for c in &small {
            assert!(large.contains(c));
        }
    }

    #[test]
    fn families_over_a_line_of_unit_classes() {
        // over the stick, every bivalent vertex class is a unit line, and
        // the boundary colours chain the orbit choices together
        let out = free_operad_hom(&line(2), &stick(), 2).unwrap();
        assert_eq!(out.len(), 2);
        for f in &out {
            let FreeOperadElement::Family { vertex_classes, .. } = f else {
                panic!("general graphs yield families");
            };
            assert!(vertex_classes
                .iter()
                .all(|c| matches!(c, SimilarityClass::UnitLine { .. })));
        }
    }

    #[test]
    fn klgr_equality_is_reflexive_and_detects_unit_detours() {
        let g = line(1);
        let h = line(1);
        // identity representative
        let gog1 = GraphOfGraphs::identity(&g);
        let col1 = colimit_graph_of_graphs(&gog1).unwrap();
        // choose the etale identification of the colimit with h that is
        // the identity on base edges
        let iso = enumerate_etale(&col1.graph, &h, None)
            .unwrap()
            .into_iter()
            .find(|m| (0..g.n_edges()).all(|e| m.f_e()[col1.base_edge_map[e]] == e))
            .unwrap();
        let a = KlgrMorphism::new(gog1, StarMorphism::from_etale(&iso).unwrap()).unwrap();
        assert!(klgr_equal(&a, &a).unwrap());
        // a representative with a unit detour: the piece is a line with an
        // extra vertex, and the star morphism deletes it
        let gog2 = GraphOfGraphs::new(
            g.clone(),
            vec![Piece {
                graph: line(2),
                ports: vec![0, 5],
            }],
        )
        .unwrap();
        let col2 = colimit_graph_of_graphs(&gog2).unwrap();
        let stars = enumerate_star_morphisms(&col2.graph, &h, None).unwrap();
        let mut equal = 0usize;
        let mut different = 0usize;
        for st in stars {
            let b = KlgrMorphism::new(gog2.clone(), st).unwrap();
            if klgr_equal(&a, &b).unwrap() {
                equal += 1;
            } else {
                different += 1;
            }
        }
        assert!(equal > 0, "some detour representative equals the identity");
        assert!(different > 0, "other star morphisms differ");
    }

    #[test]
    fn klgr_equality_rejects_mismatched_sources() {
        let gog1 = GraphOfGraphs::identity(&line(1));
        let col1 = colimit_graph_of_graphs(&gog1).unwrap();
        let m = enumerate_etale(&col1.graph, &line(1), None).unwrap()[0].clone();
        let a = KlgrMorphism::new(gog1, StarMorphism::from_etale(&m).unwrap()).unwrap();
        let gog2 = GraphOfGraphs::identity(&line(2));
        let col2 = colimit_graph_of_graphs(&gog2).unwrap();
        let m2 = enumerate_etale(&col2.graph, &line(2), None).unwrap()[0].clone();
        let b = KlgrMorphism::new(gog2, StarMorphism::from_etale(&m2).unwrap()).unwrap();
        assert!(matches!(
            klgr_equal(&a, &b),
            Err(NerveError::Mismatch { .. })
        ));
    }

    #[test]
    fn factorization_category_is_connected_on_pointed_fixtures() {
        let s = terminal_species(&Palette::directed(), 4).unwrap();
        let (sp, _) = apply_d(&s).unwrap();
        let g = line(2);
        let ports = g.boundary_and_inner().ports;
        let x = XGraph::new(g.clone(), ports).unwrap();
        let alpha = evaluate_species(sp.species(), &g, Some(1 << 16))
            .unwrap()
            .into_iter()
            .find(|st| {
                st.decorations
                    .iter()
                    .all(|&d| (0..2).all(|c| sp.unit(c) != d))
            })
            .unwrap();
        let report = factorization_category_witness(&sp, &x, &alpha, 4).unwrap();
        assert!(report.objects > 1);
        assert!(report.pointed_connected);
        assert!(report.max_zigzag >= 1);
    }

    #[test]
    fn unpointed_factorizations_disconnect() {
        let report = unpointed_counterexample().unwrap();
        assert!(report.objects >= 2, "both exceptional objects are found");
        assert!(report.pointed_connected);
        assert!(!report.unpointed_connected);
    }

    fn mgraph() -> FeynmanGraph {
        FeynmanGraph::standard(GraphKind::MGraph {
            x: vec!["x1".into(), "x2".into()],
            y: vec!["y1".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        })
        .unwrap()
    }

    #[test]
    fn species_presheaves_satisfy_the_segal_condition() {
        let s = terminal_species(&Palette::directed(), 4).unwrap();
        let p = species_presheaf(
            &s,
            &[
                ("m", mgraph()),
                ("w2", wheel(2)),
                ("l2", line(2)),
            ],
            Some(1 << 16),
        )
        .unwrap();
        for g in ["m", "w2", "l2", "corolla2"] {
            let report = segal_check(&p, g).unwrap();
            assert!(report.passed, "{g}: {:?}", (report.missing, report.duplicated));
            assert_eq!(report.values, report.families);
        }
    }

    #[test]
    fn corrupted_presheaves_fail_with_named_witnesses() {
        let s = terminal_species(&Palette::directed(), 3).unwrap();
        let p = species_presheaf(&s, &[("m", mgraph())], Some(1 << 16)).unwrap();
        let mi = p.object_index("m").unwrap();
        // dropping one value leaves a matching family unaccounted for
        let mut dropped = p.clone();
        let last = dropped.values[mi].len() - 1;
        dropped.values[mi].pop();
        for table in dropped.restrictions.values_mut() {
            // only tables out of m shrink
            if table.len() == last + 1 {
                table.pop();
            }
        }
        // keys into m are unaffected (m is not an element shape)
        let report = segal_check(&dropped, "m").unwrap();
        assert!(!report.passed);
        assert!(!report.missing.is_empty());
        // duplicating a value breaks injectivity
        let mut duped = p.clone();
        duped.values[mi].push("dup".into());
        for ((_, b, _), table) in duped.restrictions.iter_mut() {
            if *b == mi {
                let first = table[0];
                table.push(first);
            }
        }
        let report = segal_check(&duped, "m").unwrap();
        assert!(!report.passed);
        assert!(!report.duplicated.is_empty());
    }

    #[test]
    fn segal_check_requires_listed_elements() {
        let s = terminal_species(&Palette::monochrome(), 3).unwrap();
        let mut p = species_presheaf(&s, &[("w2", wheel(2))], Some(1 << 16)).unwrap();
        // remove the corolla object's restriction tables into w2
        let wi = p.object_index("w2").unwrap();
        let ci = p.object_index("corolla2").unwrap();
        p.restrictions.retain(|(a, b, _), _| !(*a == ci && *b == wi));
        assert!(matches!(
            segal_check(&p, "w2"),
            Err(NerveError::IncompletePresheaf { .. })
        ));
    }

    #[test]
    fn corollas_pass_vacuously() {
        let s = terminal_species(&Palette::monochrome(), 3).unwrap();
        let p = species_presheaf(&s, &[], Some(1 << 16)).unwrap();
        // the auto-added corolla objects have no valencies beyond their own
        let report = segal_check(&p, "stick").unwrap();
        assert!(report.passed);
    }

    #[test]
    fn pointed_and_unpointed_element_limits_agree() {
        let s = terminal_species(&Palette::directed(), 3).unwrap();
        let (sp, _) = apply_d(&s).unwrap();
        for g in [line(2), wheel(2)] {
            assert!(finality_check(&sp, &g).unwrap(), "finality fails on {g:?}");
        }
    }
}
