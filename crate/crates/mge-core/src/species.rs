//! Graphical species: finitely presented presheaves of arities over an
//! involutive palette, structured graphs, evaluation on graphs as a limit,
//! and the unit-adjoining endofunctor `D`.
//!
//! A species is stored on the skeleton: for each arity `n` up to a maximum,
//! a finite element set with a symmetric-group action (presented by the
//! adjacent transpositions) and colour projections `ch_x` into the palette.
//! The action of an arbitrary permutation is recovered from the generator
//! tables; validation checks that the generators actually assemble into a
//! group action by exploring the whole symmetric group.

use crate::graph::FeynmanGraph;
use std::collections::BTreeMap;
use thiserror::Error;

/// Validation and evaluation errors for species data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpeciesError {
    #[error("invalid palette: {reason}")]
    InvalidPalette { reason: String },
    #[error("invalid arity {n} data: {reason}")]
    InvalidArity { n: usize, reason: String },
    #[error("transposition tables at arity {n} do not generate a group action: {reason}")]
    NotAGroupAction { n: usize, reason: String },
    #[error("colour projections at arity {n} are not equivariant")]
    ProjectionNotEquivariant { n: usize },
    #[error("size bound exceeded: {size} > {bound}")]
    SizeBoundExceeded { size: usize, bound: usize },
    #[error("unit is not equivariant for the palette involution at colour {color}")]
    UnitNotEquivariant { color: usize },
    #[error("contracted unit differs across the involution orbit of colour {color}")]
    ContractedUnitNotOmegaInvariant { color: usize },
    #[error("unit map is not injective: colours {first} and {second} share a unit")]
    UnitNotInjective { first: usize, second: usize },
    #[error("structure is incompatible with the graph: {reason}")]
    IncompatibleStructure { reason: String },
    #[error("species map is not well-formed: {reason}")]
    InvalidSpeciesMap { reason: String },
}

/// Default cap on the number of enumerated structures.
pub const DEFAULT_EVAL_BOUND: usize = 4096;

/// Hard cap on stored arities; the symmetric-group action is explored in
/// full during validation, so factorially larger arities are refused.
pub const MAX_ARITY: usize = 7;

/// A finite colour set with an involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    colors: Vec<String>,
    omega: Vec<usize>,
}

impl Palette {
    /// Validate an involutive palette.
    pub fn new(colors: Vec<String>, omega: Vec<usize>) -> Result<Palette, SpeciesError> {
        if omega.len() != colors.len() {
            return Err(SpeciesError::InvalidPalette {
                reason: format!(
                    "involution table has length {} for {} colours",
                    omega.len(),
                    colors.len()
                ),
            });
        }
        for (c, &w) in omega.iter().enumerate() {
            if w >= colors.len() {
                return Err(SpeciesError::InvalidPalette {
                    reason: format!("involution image {w} of colour {c} out of range"),
                });
            }
            if omega[w] != c {
                return Err(SpeciesError::InvalidPalette {
                    reason: format!("omega(omega({c})) = {} is not {c}", omega[w]),
                });
            }
        }
        Ok(Palette { colors, omega })
    }

    /// The one-colour palette with the identity involution.
    pub fn monochrome() -> Palette {
        Palette {
            colors: vec!["*".into()],
            omega: vec![0],
        }
    }

    /// The two-colour palette `{in, out}` with the swap involution.
    pub fn directed() -> Palette {
        Palette {
            colors: vec!["in".into(), "out".into()],
            omega: vec![1, 0],
        }
    }

    pub fn n_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_name(&self, c: usize) -> &str {
        &self.colors[c]
    }

    /// The involution.
    pub fn omega(&self, c: usize) -> usize {
        self.omega[c]
    }

    /// Canonical representative of the involution orbit of `c`.
    pub fn orbit_rep(&self, c: usize) -> usize {
        c.min(self.omega[c])
    }

    /// All involution-orbit representatives, sorted.
    pub fn orbit_reps(&self) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&c| c <= self.omega[c])
            .collect()
    }
}

/// Raw arity data, accepted for inspection before validation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawArity {
    /// Element names; indices are the element ids.
    pub elements: Vec<String>,
    /// For each adjacent transposition `s_i = (i, i+1)` with `i < n-1`, the
    /// induced map on elements.
    pub transpositions: Vec<Vec<usize>>,
    /// For each position `x < n`, the colour projection `ch_x` on elements.
    pub projections: Vec<Vec<usize>>,
}

/// Validated arity data with the fully expanded symmetric-group action.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ArityData {
    elements: Vec<String>,
    transpositions: Vec<Vec<usize>>,
    projections: Vec<Vec<usize>>,
    /// Full action table: one-line permutation -> map on elements.
    action: BTreeMap<Vec<usize>, Vec<usize>>,
}

/// A finitely presented graphical species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicalSpecies {
    palette: Palette,
    arities: Vec<ArityData>,
}

/// Compose one-line permutations: `(a . b)(x) = a(b(x))`.
fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

impl GraphicalSpecies {
    /// Validate raw arity tables over a palette.  `arities[n]` presents the
    /// arity-`n` set; the vector length fixes the maximum arity.
    pub fn new(palette: Palette, arities: Vec<RawArity>) -> Result<GraphicalSpecies, SpeciesError> {
        if arities.len() > MAX_ARITY + 1 {
            return Err(SpeciesError::SizeBoundExceeded {
                size: arities.len() - 1,
                bound: MAX_ARITY,
            });
        }
        let mut validated = Vec::with_capacity(arities.len());
        for (n, raw) in arities.into_iter().enumerate() {
            validated.push(validate_arity(&palette, n, raw)?);
        }
        Ok(GraphicalSpecies {
            palette,
            arities: validated,
        })
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    /// Largest arity with stored data.
    pub fn max_arity(&self) -> usize {
        self.arities.len().saturating_sub(1)
    }

    fn arity(&self, n: usize) -> Result<&ArityData, SpeciesError> {
        self.arities
            .get(n)
            .ok_or(SpeciesError::SizeBoundExceeded {
                size: n,
                bound: self.max_arity(),
            })
    }

    pub fn n_elements(&self, n: usize) -> Result<usize, SpeciesError> {
        Ok(self.arity(n)?.elements.len())
    }

    pub fn element_names(&self, n: usize) -> Result<&[String], SpeciesError> {
        Ok(&self.arity(n)?.elements)
    }

    /// Colour projection `ch_x` of element `phi` at arity `n`.
    pub fn ch(&self, n: usize, x: usize, phi: usize) -> Result<usize, SpeciesError> {
        Ok(self.arity(n)?.projections[x][phi])
    }

    /// Full colour tuple of an element.
    pub fn color_tuple(&self, n: usize, phi: usize) -> Result<Vec<usize>, SpeciesError> {
        let a = self.arity(n)?;
        Ok((0..n).map(|x| a.projections[x][phi]).collect())
    }

    /// Action of a permutation of `{0..n-1}` (one-line notation) on an
    /// element of arity `n`.
    pub fn act(&self, n: usize, perm: &[usize], phi: usize) -> Result<usize, SpeciesError> {
        let a = self.arity(n)?;
        let map = a
            .action
            .get(perm)
            .ok_or_else(|| SpeciesError::InvalidArity {
                n,
                reason: format!("{perm:?} is not a permutation of 0..{n}"),
            })?;
        Ok(map[phi])
    }

    /// Raw tables, suitable for serialization.
    pub fn to_raw(&self) -> (Palette, Vec<RawArity>) {
        let arities = self
            .arities
            .iter()
            .map(|a| RawArity {
                elements: a.elements.clone(),
                transpositions: a.transpositions.clone(),
                projections: a.projections.clone(),
            })
            .collect();
        (self.palette.clone(), arities)
    }
}

/// Check the generator tables and expand them into a full group action.
fn validate_arity(
    palette: &Palette,
    n: usize,
    raw: RawArity,
) -> Result<ArityData, SpeciesError> {
    let m = raw.elements.len();
    let gens = n.saturating_sub(1);
    if raw.transpositions.len() != gens {
        return Err(SpeciesError::InvalidArity {
            n,
            reason: format!(
                "expected {gens} transposition tables, got {}",
                raw.transpositions.len()
            ),
        });
    }
    if raw.projections.len() != n {
        return Err(SpeciesError::InvalidArity {
            n,
            reason: format!("expected {n} projection tables, got {}", raw.projections.len()),
        });
    }
    for (i, t) in raw.transpositions.iter().enumerate() {
        if t.len() != m || t.iter().any(|&img| img >= m) {
            return Err(SpeciesError::InvalidArity {
                n,
                reason: format!("transposition table {i} is not a map on {m} elements"),
            });
        }
    }
    for (x, p) in raw.projections.iter().enumerate() {
        if p.len() != m || p.iter().any(|&c| c >= palette.n_colors()) {
            return Err(SpeciesError::InvalidArity {
                n,
                reason: format!("projection table {x} is not a map into the palette"),
            });
        }
    }
    // Explore the symmetric group from the identity: every permutation must
    // receive a single well-defined element map, whatever word reaches it.
    let identity_perm: Vec<usize> = (0..n).collect();
    let identity_map: Vec<usize> = (0..m).collect();
    let mut action = BTreeMap::new();
    action.insert(identity_perm.clone(), identity_map);
    let mut queue = vec![identity_perm];
    while let Some(perm) = queue.pop() {
        let map = action[&perm].clone();
        for i in 0..gens {
            let mut s = (0..n).collect::<Vec<_>>();
            s.swap(i, i + 1);
            let next_perm = compose_perm(&s, &perm);
            let next_map: Vec<usize> = map.iter().map(|&e| raw.transpositions[i][e]).collect();
            match action.get(&next_perm) {
                Some(existing) if *existing != next_map => {
                    return Err(SpeciesError::NotAGroupAction {
                        n,
                        reason: format!("inconsistent action at permutation {next_perm:?}"),
                    });
                }
                Some(_) => {}
                None => {
                    action.insert(next_perm.clone(), next_map);
                    queue.push(next_perm);
                }
            }
        }
    }
    // Equivariance of projections on generators: ch_{s_i(x)}(s_i . phi) = ch_x(phi).
    for i in 0..gens {
        for x in 0..n {
            let sx = if x == i {
                i + 1
            } else if x == i + 1 {
                i
            } else {
                x
            };
            for phi in 0..m {
                if raw.projections[sx][raw.transpositions[i][phi]] != raw.projections[x][phi] {
                    return Err(SpeciesError::ProjectionNotEquivariant { n });
                }
            }
        }
    }
    Ok(ArityData {
        elements: raw.elements,
        transpositions: raw.transpositions,
        projections: raw.projections,
        action,
    })
}

/// The terminal species over a palette: arity `n` is the set of colour
/// tuples, permutations permute the tuple, projections are the coordinates.
pub fn terminal_species(palette: &Palette, max_arity: usize) -> Result<GraphicalSpecies, SpeciesError> {
    let k = palette.n_colors();
    let mut arities = Vec::with_capacity(max_arity + 1);
    for n in 0..=max_arity {
        let count = k.pow(n as u32);
        let tuple = |idx: usize| -> Vec<usize> {
            let mut t = Vec::with_capacity(n);
            let mut rest = idx;
            for _ in 0..n {
                t.push(rest % k);
                rest /= k;
            }
            t
        };
        let index = |t: &[usize]| -> usize { t.iter().rev().fold(0, |acc, &c| acc * k + c) };
        let elements = (0..count)
            .map(|idx| {
                let t = tuple(idx);
                t.iter()
                    .map(|&c| palette.color_name(c))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let transpositions = (0..n.saturating_sub(1))
            .map(|i| {
                (0..count)
                    .map(|idx| {
                        let mut t = tuple(idx);
                        t.swap(i, i + 1);
                        index(&t)
                    })
                    .collect()
            })
            .collect();
        let projections = (0..n)
            .map(|x| (0..count).map(|idx| tuple(idx)[x]).collect())
            .collect();
        arities.push(RawArity {
            elements,
            transpositions,
            projections,
        });
    }
    GraphicalSpecies::new(palette.clone(), arities)
}

/// A species with a chosen unit and contracted unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedSpecies {
    species: GraphicalSpecies,
    /// `unit[c]` is the element of arity 2 with colours `(c, omega c)`.
    unit: Vec<usize>,
    /// `contracted[c]` is the element of arity 0 attached to the orbit of `c`.
    contracted: Vec<usize>,
}

impl PointedSpecies {
    /// Check all pointing invariants.
    pub fn new(
        species: GraphicalSpecies,
        unit: Vec<usize>,
        contracted: Vec<usize>,
    ) -> Result<PointedSpecies, SpeciesError> {
        let k = species.palette().n_colors();
        if unit.len() != k || contracted.len() != k {
            return Err(SpeciesError::InvalidArity {
                n: 2,
                reason: "unit tables must be indexed by the palette".into(),
            });
        }
        let swap = [1usize, 0];
        for c in 0..k {
            let w = species.palette().omega(c);
            if unit[c] >= species.n_elements(2)? {
                return Err(SpeciesError::InvalidArity {
                    n: 2,
                    reason: format!("unit of colour {c} out of range"),
                });
            }
            if contracted[c] >= species.n_elements(0)? {
                return Err(SpeciesError::InvalidArity {
                    n: 0,
                    reason: format!("contracted unit of colour {c} out of range"),
                });
            }
            // units live in the (c, omega c) fibre and the involution swaps them
            if species.color_tuple(2, unit[c])? != vec![c, w] {
                return Err(SpeciesError::UnitNotEquivariant { color: c });
            }
            if species.act(2, &swap, unit[c])? != unit[w] {
                return Err(SpeciesError::UnitNotEquivariant { color: c });
            }
            if contracted[c] != contracted[w] {
                return Err(SpeciesError::ContractedUnitNotOmegaInvariant { color: c });
            }
        }
        for c in 0..k {
            for d in c + 1..k {
                if unit[c] == unit[d] {
                    return Err(SpeciesError::UnitNotInjective { first: c, second: d });
                }
            }
        }
        Ok(PointedSpecies {
            species,
            unit,
            contracted,
        })
    }

    pub fn species(&self) -> &GraphicalSpecies {
        &self.species
    }

    /// The unit of colour `c` as an element of arity 2.
    pub fn unit(&self, c: usize) -> usize {
        self.unit[c]
    }

    /// The contracted unit of the orbit of `c` as an element of arity 0.
    pub fn contracted_unit(&self, c: usize) -> usize {
        self.contracted[c]
    }

    /// Whether another candidate pointing coincides with this one.
    pub fn agrees_with(&self, unit: &[usize], contracted: &[usize]) -> bool {
        self.unit == unit && self.contracted == contracted
    }
}

/// Construct a pointed species from explicit tables, checking all invariants.
pub fn validate_pointed(
    species: GraphicalSpecies,
    unit: Vec<usize>,
    contracted: Vec<usize>,
) -> Result<PointedSpecies, SpeciesError> {
    PointedSpecies::new(species, unit, contracted)
}

/// A palette-preserving map of species: per-arity element maps commuting
/// with the group actions and colour projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesMap {
    maps: Vec<Vec<usize>>,
}

impl SpeciesMap {
    pub fn validate(
        src: &GraphicalSpecies,
        dst: &GraphicalSpecies,
        maps: Vec<Vec<usize>>,
    ) -> Result<SpeciesMap, SpeciesError> {
        if src.palette() != dst.palette() {
            return Err(SpeciesError::InvalidSpeciesMap {
                reason: "palettes differ".into(),
            });
        }
        if maps.len() != src.max_arity() + 1 || dst.max_arity() < src.max_arity() {
            return Err(SpeciesError::InvalidSpeciesMap {
                reason: "arity ranges do not line up".into(),
            });
        }
        for (n, map) in maps.iter().enumerate() {
            if map.len() != src.n_elements(n)? {
                return Err(SpeciesError::InvalidSpeciesMap {
                    reason: format!("arity {n} map has the wrong length"),
                });
            }
            for (phi, &img) in map.iter().enumerate() {
                if img >= dst.n_elements(n)? {
                    return Err(SpeciesError::InvalidSpeciesMap {
                        reason: format!("arity {n} image {img} out of range"),
                    });
                }
                if src.color_tuple(n, phi)? != dst.color_tuple(n, img)? {
                    return Err(SpeciesError::InvalidSpeciesMap {
                        reason: format!("arity {n} map does not preserve colours"),
                    });
                }
            }
            // equivariance on generators
            for i in 0..n.saturating_sub(1) {
                let mut s = (0..n).collect::<Vec<_>>();
                s.swap(i, i + 1);
                for phi in 0..src.n_elements(n)? {
                    if dst.act(n, &s, map[phi])? != map[src.act(n, &s, phi)?] {
                        return Err(SpeciesError::InvalidSpeciesMap {
                            reason: format!("arity {n} map is not equivariant"),
                        });
                    }
                }
            }
        }
        Ok(SpeciesMap { maps })
    }

    pub fn apply(&self, n: usize, phi: usize) -> usize {
        self.maps[n][phi]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }
}

/// Freely adjoin a unit and a contracted unit per colour, returning the
/// pointed species together with the inclusion of the original species.
pub fn apply_d(s: &GraphicalSpecies) -> Result<(PointedSpecies, SpeciesMap), SpeciesError> {
    let (palette, mut arities) = s.to_raw();
    while arities.len() < 3 {
        let n = arities.len();
        arities.push(RawArity {
            elements: vec![],
            transpositions: vec![vec![]; n.saturating_sub(1)],
            projections: vec![vec![]; n],
        });
    }
    let k = palette.n_colors();
    // arity 2: adjoin eps_c per colour, swapped pairwise by sigma_2
    let base2 = arities[2].elements.len();
    let mut unit = Vec::with_capacity(k);
    for c in 0..k {
        unit.push(base2 + c);
        arities[2]
            .elements
            .push(format!("eps+{}", palette.color_name(c)));
        arities[2].projections[0].push(c);
        arities[2].projections[1].push(palette.omega(c));
    }
    for c in 0..k {
        arities[2].transpositions[0].push(base2 + palette.omega(c));
    }
    // arity 0: adjoin o_c per involution orbit
    let base0 = arities[0].elements.len();
    let reps = palette.orbit_reps();
    let mut contracted = vec![0usize; k];
    for (i, &r) in reps.iter().enumerate() {
        arities[0]
            .elements
            .push(format!("o+{}", palette.color_name(r)));
        contracted[r] = base0 + i;
        contracted[palette.omega(r)] = base0 + i;
    }
    let ds = GraphicalSpecies::new(palette, arities)?;
    let inclusion = SpeciesMap::validate(
        s,
        &ds,
        (0..=s.max_arity())
            .map(|n| (0..s.n_elements(n).unwrap()).collect())
            .collect(),
    )?;
    let pointed = PointedSpecies::new(ds, unit, contracted)?;
    Ok((pointed, inclusion))
}

/// The monad multiplication of `D`: collapse the units adjoined by a second
/// application of `apply_d` onto those adjoined by the first.
pub fn mu_d(s: &GraphicalSpecies) -> Result<SpeciesMap, SpeciesError> {
    let (ds, _) = apply_d(s)?;
    let (dds, _) = apply_d(ds.species())?;
    let src = dds.species();
    let dst = ds.species();
    let k = s.palette().n_colors();
    let reps = s.palette().orbit_reps();
    let mut maps: Vec<Vec<usize>> = (0..=src.max_arity())
        .map(|n| (0..src.n_elements(n).unwrap()).collect())
        .collect();
    // the freshly adjoined copies sit at the tail of arities 2 and 0
    for c in 0..k {
        maps[2][dst.n_elements(2)? + c] = ds.unit(c);
    }
    for (i, &r) in reps.iter().enumerate() {
        maps[0][dst.n_elements(0)? + i] = ds.contracted_unit(r);
    }
    SpeciesMap::validate(src, dst, maps)
}

/// An element of `S(g)`: an edge colouring compatible with the involution
/// and a decoration of every vertex by an element of the matching arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructuredGraph {
    /// Colour per edge, `c(tau e) = omega(c(e))`.
    pub coloring: Vec<usize>,
    /// Element of `S_{|v|}` per vertex, with `ch_x` matching the colour of
    /// the `x`-th incident edge (in half-edge order).
    pub decorations: Vec<usize>,
}

impl StructuredGraph {
    /// Check compatibility of a colouring/decoration pair with a graph.
    pub fn validate(
        species: &GraphicalSpecies,
        g: &FeynmanGraph,
        coloring: Vec<usize>,
        decorations: Vec<usize>,
    ) -> Result<StructuredGraph, SpeciesError> {
        if coloring.len() != g.n_edges() || decorations.len() != g.n_vertices() {
            return Err(SpeciesError::IncompatibleStructure {
                reason: "colouring or decoration table has the wrong length".into(),
            });
        }
        let k = species.palette().n_colors();
        for (e, &c) in coloring.iter().enumerate() {
            if c >= k {
                return Err(SpeciesError::IncompatibleStructure {
                    reason: format!("colour {c} of edge {e} out of range"),
                });
            }
            if coloring[g.tau(e)] != species.palette().omega(c) {
                return Err(SpeciesError::IncompatibleStructure {
                    reason: format!("edge {e} and its involution partner have non-dual colours"),
                });
            }
        }
        for v in 0..g.n_vertices() {
            let vd = g.vertex_data(v).map_err(|_| SpeciesError::IncompatibleStructure {
                reason: format!("unknown vertex {v}"),
            })?;
            let n = vd.valency;
            if decorations[v] >= species.n_elements(n)? {
                return Err(SpeciesError::IncompatibleStructure {
                    reason: format!("decoration of vertex {v} out of range at arity {n}"),
                });
            }
            for (x, &e) in vd.incident_edges.iter().enumerate() {
                if species.ch(n, x, decorations[v])? != coloring[e] {
                    return Err(SpeciesError::IncompatibleStructure {
                        reason: format!(
                            "projection {x} of the decoration at vertex {v} disagrees with edge {e}"
                        ),
                    });
                }
            }
        }
        Ok(StructuredGraph {
            coloring,
            decorations,
        })
    }
}

/// Exhaustively enumerate `S(g)`, the limit of `S` over the elements of `g`.
pub fn evaluate_species(
    species: &GraphicalSpecies,
    g: &FeynmanGraph,
    bound: Option<usize>,
) -> Result<Vec<StructuredGraph>, SpeciesError> {
    let bound = bound.unwrap_or(DEFAULT_EVAL_BOUND);
    let k = species.palette().n_colors();
    let orbits = g.orbits();
    let vertex_data: Vec<_> = (0..g.n_vertices())
        .map(|v| g.vertex_data(v).expect("validated graph"))
        .collect();
    for vd in &vertex_data {
        // fail loudly before enumerating when an arity is missing
        species.n_elements(vd.valency)?;
    }
    let mut out = Vec::new();
    let mut coloring = vec![0usize; g.n_edges()];
    let mut choice = vec![0usize; orbits.len()];
    loop {
        for (o, &c) in orbits.iter().zip(&choice) {
            coloring[o[0]] = c;
            coloring[o[1]] = species.palette().omega(c);
        }
        // per-vertex compatible decorations under this colouring
        let mut per_vertex: Vec<Vec<usize>> = Vec::with_capacity(vertex_data.len());
        let mut feasible = true;
        for vd in &vertex_data {
            let n = vd.valency;
            let opts: Vec<usize> = (0..species.n_elements(n)?)
                .filter(|&phi| {
                    vd.incident_edges
                        .iter()
                        .enumerate()
                        .all(|(x, &e)| species.ch(n, x, phi).unwrap() == coloring[e])
                })
                .collect();
            if opts.is_empty() {
                feasible = false;
                break;
            }
            per_vertex.push(opts);
        }
        if feasible {
            let mut pick = vec![0usize; per_vertex.len()];
            loop {
                let decorations: Vec<usize> = per_vertex
                    .iter()
                    .zip(&pick)
                    .map(|(opts, &i)| opts[i])
                    .collect();
                out.push(StructuredGraph {
                    coloring: coloring.clone(),
                    decorations,
                });
                if out.len() > bound {
                    return Err(SpeciesError::SizeBoundExceeded {
                        size: out.len(),
                        bound,
                    });
                }
                if !advance(&mut pick, |i| per_vertex[i].len()) {
                    break;
                }
            }
        }
        if !advance(&mut choice, |_| k) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// Odometer step over mixed radices; false when the counter wraps to zero.
fn advance(counter: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in 0..counter.len() {
        counter[i] += 1;
        if counter[i] < radix(i) {
            return true;
        }
        counter[i] = 0;
    }
    false
}
