//! Finite modular-operad presentations: partial multiplication (⋄) and
//! contraction (ζ) tables over a graphical species, the coherence-axiom
//! checker (M1–M4 plus commutativity, equivariance and unit laws), and
//! evaluation of structured graphs by iterated edge collapse — the algebra
//! structure map for the monad of connected graphs.
//!
//! Boundary convention: `diamond(n, i, φ, m, j, ψ)` glues position `i` of φ
//! (colour c) to position `j` of ψ (colour ωc); the result's boundary is the
//! remaining positions of φ in order, followed by those of ψ.
//! `zeta(n, i, j, φ)` contracts the dual pair of positions `i`, `j`; the
//! result keeps the remaining positions in order.

use crate::graph::{FeynmanGraph, GraphError, RawGraph};
use crate::morphism::{MorphismError, XGraph};
use crate::species::{GraphicalSpecies, SpeciesError, StructuredGraph};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors for operad presentations and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("edge {edge} is not inner")]
    NotInner { edge: usize },
    #[error("partial table is undefined: {reason}")]
    PartialMapUndefined { reason: String },
    #[error("invalid presentation: {reason}")]
    InvalidPresentation { reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Species(#[from] SpeciesError),
}

/// Key of a multiplication entry: `(n, i, φ, m, j, ψ)`.
pub type DiamondKey = (usize, usize, usize, usize, usize, usize);
/// Key of a contraction entry: `(n, i, j, φ)`.
pub type ZetaKey = (usize, usize, usize, usize);

/// A finite modular-operad presentation: explicit partial multiplication
/// and contraction tables over a graphical species, with an optional unit.
#[derive(Debug, Clone)]
pub struct OperadPresentation {
    species: GraphicalSpecies,
    diamond: BTreeMap<DiamondKey, usize>,
    zeta: BTreeMap<ZetaKey, usize>,
    /// Unit element per colour (an element of `S₂` with colours `(c, ωc)`).
    unit: Option<Vec<usize>>,
}

impl OperadPresentation {
    /// Validate explicit tables against the species: key ranges, dual-colour
    /// conditions, result colour tuples, and (if present) the unit shape.
    pub fn new(
        species: GraphicalSpecies,
        diamond: BTreeMap<DiamondKey, usize>,
        zeta: BTreeMap<ZetaKey, usize>,
        unit: Option<Vec<usize>>,
    ) -> Result<OperadPresentation, OperadError> {
        let omega = |c: usize| species.palette().omega(c);
        for (&(n, i, phi, m, j, psi), &r) in &diamond {
            if i >= n || j >= m {
                return Err(OperadError::InvalidPresentation {
                    reason: format!("multiplication key position out of range: {i}/{n}, {j}/{m}"),
                });
            }
            let tf = species.color_tuple(n, phi)?;
            let tg = species.color_tuple(m, psi)?;
            if tf[i] != omega(tg[j]) {
                return Err(OperadError::InvalidPresentation {
                    reason: "multiplication entry glues non-dual colours".into(),
                });
            }
            let mut want = drop1(&tf, i);
            want.extend(drop1(&tg, j));
            if species.color_tuple(n + m - 2, r)? != want {
                return Err(OperadError::InvalidPresentation {
                    reason: "multiplication result has the wrong colour tuple".into(),
                });
            }
        }
        for (&(n, i, j, phi), &r) in &zeta {
            if i >= n || j >= n || i == j {
                return Err(OperadError::InvalidPresentation {
                    reason: format!("contraction key positions out of range: {i}, {j} in {n}"),
                });
            }
            let t = species.color_tuple(n, phi)?;
            if t[i] != omega(t[j]) {
                return Err(OperadError::InvalidPresentation {
                    reason: "contraction entry contracts non-dual colours".into(),
                });
            }
            let want: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|(x, _)| *x != i && *x != j)
                .map(|(_, &c)| c)
                .collect();
            if species.color_tuple(n - 2, r)? != want {
                return Err(OperadError::InvalidPresentation {
                    reason: "contraction result has the wrong colour tuple".into(),
                });
            }
        }
        if let Some(eps) = &unit {
            if eps.len() != species.palette().n_colors() {
                return Err(OperadError::InvalidPresentation {
                    reason: "one unit per colour is required".into(),
                });
            }
            for (c, &e) in eps.iter().enumerate() {
                if species.color_tuple(2, e)? != vec![c, omega(c)] {
                    return Err(OperadError::InvalidPresentation {
                        reason: format!("unit of colour {c} has the wrong colour tuple"),
                    });
                }
            }
        }
        Ok(OperadPresentation {
            species,
            diamond,
            zeta,
            unit,
        })
    }

    /// Tabulate a presentation from closures over all dual-coloured keys
    /// representable within the species' arity range.  Closures returning
    /// `None` leave the entry undefined (the tables are partial).
    pub fn tabulate(
        species: GraphicalSpecies,
        diamond_fn: &dyn Fn(usize, usize, usize, usize, usize, usize) -> Option<usize>,
        zeta_fn: &dyn Fn(usize, usize, usize, usize) -> Option<usize>,
        unit: Option<Vec<usize>>,
    ) -> Result<OperadPresentation, OperadError> {
        let omega = |c: usize| species.palette().omega(c);
        let max = species.max_arity();
        let mut diamond = BTreeMap::new();
        for n in 1..=max {
            for m in 1..=max {
                if n + m < 2 || n + m - 2 > max {
                    continue;
                }
                for phi in 0..species.n_elements(n)? {
                    let tf = species.color_tuple(n, phi)?;
                    for psi in 0..species.n_elements(m)? {
                        let tg = species.color_tuple(m, psi)?;
                        for i in 0..n {
                            for j in 0..m {
                                if tf[i] != omega(tg[j]) {
                                    continue;
                                }
                                if let Some(r) = diamond_fn(n, i, phi, m, j, psi) {
                                    diamond.insert((n, i, phi, m, j, psi), r);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut zeta = BTreeMap::new();
        for n in 2..=max {
            for phi in 0..species.n_elements(n)? {
                let t = species.color_tuple(n, phi)?;
                for i in 0..n {
                    for j in 0..n {
                        if i == j || t[i] != omega(t[j]) {
                            continue;
                        }
                        if let Some(r) = zeta_fn(n, i, j, phi) {
                            zeta.insert((n, i, j, phi), r);
                        }
                    }
                }
            }
        }
        OperadPresentation::new(species, diamond, zeta, unit)
    }

    pub fn species(&self) -> &GraphicalSpecies {
        &self.species
    }

    pub fn unit(&self) -> Option<&[usize]> {
        self.unit.as_deref()
    }

    pub fn diamond_table(&self) -> &BTreeMap<DiamondKey, usize> {
        &self.diamond
    }

    pub fn zeta_table(&self) -> &BTreeMap<ZetaKey, usize> {
        &self.zeta
    }

    /// Look up a multiplication entry; undefined entries are an error.
    pub fn diamond(
        &self,
        n: usize,
        i: usize,
        phi: usize,
        m: usize,
        j: usize,
        psi: usize,
    ) -> Result<usize, OperadError> {
        self.diamond
            .get(&(n, i, phi, m, j, psi))
            .copied()
            .ok_or_else(|| OperadError::PartialMapUndefined {
                reason: format!("no multiplication entry at ({n},{i},{phi})·({m},{j},{psi})"),
            })
    }

    /// Look up a contraction entry; undefined entries are an error.
    pub fn zeta(&self, n: usize, i: usize, j: usize, phi: usize) -> Result<usize, OperadError> {
        self.zeta
            .get(&(n, i, j, phi))
            .copied()
            .ok_or_else(|| OperadError::PartialMapUndefined {
                reason: format!("no contraction entry at ({n},{i},{j},{phi})"),
            })
    }
}

fn drop1(v: &[usize], i: usize) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(x, _)| *x != i)
        .map(|(_, &c)| c)
        .collect()
}

/// One failing axiom instance with the two evaluation paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: String,
    pub detail: String,
}

/// Report of an axiom-checking run.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failing_axioms(&self) -> Vec<String> {
        let mut v: Vec<String> = self.failures.iter().map(|f| f.axiom.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Exhaustively verify the coherence axioms of a presentation over all
/// instantiations whose entries are defined: associativity (M1), order of
/// contraction (M2), commutation of multiplication and contraction (M3),
/// parallel multiplication of pairs (M4), plus commutativity and
/// equivariance of both operations and the unit laws.
pub fn check_axioms(p: &OperadPresentation) -> Result<AxiomReport, OperadError> {
    let s = &p.species;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut fail = |axiom: &str, detail: String| {
        failures.push(AxiomFailure {
            axiom: axiom.to_string(),
            detail,
        })
    };

    // commutativity: φ ⋄ ψ equals ψ ⋄ φ up to the block swap of boundaries
    for (&(n, i, phi, m, j, psi), &r) in &p.diamond {
        checked += 1;
        match p.diamond.get(&(m, j, psi, n, i, phi)) {
            None => fail(
                "commutativity",
                format!("swapped entry missing for ({n},{i},{phi})·({m},{j},{psi})"),
            ),
            Some(&r2) => {
                let sigma: Vec<usize> = (0..n + m - 2)
                    .map(|x| if x < m - 1 { x + (n - 1) } else { x - (m - 1) })
                    .collect();
                if s.act(n + m - 2, &sigma, r2)? != r {
                    fail(
                        "commutativity",
                        format!(
                            "({n},{i},{phi})·({m},{j},{psi}) = {r} but the swap gives {r2}"
                        ),
                    );
                }
            }
        }
    }

    // equivariance of ⋄ in each argument, over adjacent transpositions
    for (&(n, i, phi, m, j, psi), &r) in &p.diamond {
        for t in 0..n.saturating_sub(1) {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(t, t + 1);
            let phi2 = s.act(n, &sigma, phi)?;
            let i2 = sigma[i];
            if let Some(&r2) = p.diamond.get(&(n, i2, phi2, m, j, psi)) {
                checked += 1;
                // induced permutation on the composite boundary
                let old_labels: Vec<usize> = (0..n).filter(|&x| x != i).collect();
                let new_labels: Vec<usize> = (0..n).filter(|&x| x != i2).collect();
                let mut pi: Vec<usize> = (0..n + m - 2).collect();
                for (pos, &l) in old_labels.iter().enumerate() {
                    pi[pos] = new_labels
                        .iter()
                        .position(|&x| x == sigma[l])
                        .expect("label survives");
                }
                if s.act(n + m - 2, &pi, r)? != r2 {
                    fail(
                        "equivariance",
                        format!("multiplication not equivariant at ({n},{i},{phi}) swap {t}"),
                    );
                }
            }
        }
        for t in 0..m.saturating_sub(1) {
            let mut sigma: Vec<usize> = (0..m).collect();
            sigma.swap(t, t + 1);
            let psi2 = s.act(m, &sigma, psi)?;
            let j2 = sigma[j];
            if let Some(&r2) = p.diamond.get(&(n, i, phi, m, j2, psi2)) {
                checked += 1;
                let old_labels: Vec<usize> = (0..m).filter(|&x| x != j).collect();
                let new_labels: Vec<usize> = (0..m).filter(|&x| x != j2).collect();
                let mut pi: Vec<usize> = (0..n + m - 2).collect();
                for (pos, &l) in old_labels.iter().enumerate() {
                    pi[n - 1 + pos] = n - 1
                        + new_labels
                            .iter()
                            .position(|&x| x == sigma[l])
                            .expect("label survives");
                }
                if s.act(n + m - 2, &pi, r)? != r2 {
                    fail(
                        "equivariance",
                        format!("multiplication not equivariant at ({m},{j},{psi}) swap {t}"),
                    );
                }
            }
        }
    }

    // symmetry and equivariance of ζ
    for (&(n, i, j, phi), &r) in &p.zeta {
        checked += 1;
        if p.zeta.get(&(n, j, i, phi)) != Some(&r) {
            fail(
                "contraction-symmetry",
                format!("ζ({n},{i},{j},{phi}) has no matching symmetric entry"),
            );
        }
        for t in 0..n - 1 {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(t, t + 1);
            let phi2 = s.act(n, &sigma, phi)?;
            if let Some(&r2) = p.zeta.get(&(n, sigma[i], sigma[j], phi2)) {
                checked += 1;
                let old_labels: Vec<usize> = (0..n).filter(|&x| x != i && x != j).collect();
                let new_labels: Vec<usize> =
                    (0..n).filter(|&x| x != sigma[i] && x != sigma[j]).collect();
                let mut pi: Vec<usize> = (0..n - 2).collect();
                for (pos, &l) in old_labels.iter().enumerate() {
                    pi[pos] = new_labels
                        .iter()
                        .position(|&x| x == sigma[l])
                        .expect("label survives");
                }
                if s.act(n - 2, &pi, r)? != r2 {
                    fail(
                        "equivariance",
                        format!("contraction not equivariant at ({n},{i},{j},{phi}) swap {t}"),
                    );
                }
            }
        }
    }

    // unit laws: gluing a unit is a boundary relabelling; ε(ωc) = σ₂·ε(c)
    if let Some(eps) = &p.unit {
        let omega = |c: usize| s.palette().omega(c);
        for (c, &e) in eps.iter().enumerate() {
            checked += 1;
            if s.act(2, &[1, 0], e)? != eps[omega(c)] {
                fail("unit", format!("ε({}) is not σ₂·ε({c})", omega(c)));
            }
        }
        for (&(n, i, phi, m, j, psi), &r) in &p.diamond {
            if m != 2 || j != 1 || psi != eps[s.ch(n, i, phi)?] {
                continue;
            }
            checked += 1;
            // result should be φ with position i moved to the end
            let rho: Vec<usize> = (0..n)
                .map(|x| {
                    if x == i {
                        n - 1
                    } else if x > i {
                        x - 1
                    } else {
                        x
                    }
                })
                .collect();
            if s.act(n, &rho, phi)? != r {
                fail(
                    "unit",
                    format!("({n},{i},{phi}) ⋄ ε is not the relabelled element"),
                );
            }
        }
    }

    // (M1) associativity
    let max = s.max_arity();
    for n in 1..=max {
        for m in 2..=max {
            for k in 1..=max {
                if n + m < 2 || n + m - 2 > max || n + m + k < 4 || n + m + k - 4 > max {
                    continue;
                }
                for phi in 0..s.n_elements(n)? {
                    for psi in 0..s.n_elements(m)? {
                        for chi in 0..s.n_elements(k)? {
                            for i in 0..n {
                                for j in 0..m {
                                    for jp in 0..m {
                                        if jp == j {
                                            continue;
                                        }
                                        for l in 0..k {
                                            let ab = p.diamond.get(&(n, i, phi, m, j, psi));
                                            let bc = p.diamond.get(&(m, jp, psi, k, l, chi));
                                            let (Some(&ab), Some(&bc)) = (ab, bc) else {
                                                continue;
                                            };
                                            let pos1 =
                                                n - 1 + jp - usize::from(j < jp);
                                            let pos2 = j - usize::from(jp < j);
                                            let lhs = p
                                                .diamond
                                                .get(&(n + m - 2, pos1, ab, k, l, chi));
                                            let rhs = p
                                                .diamond
                                                .get(&(n, i, phi, m + k - 2, pos2, bc));
                                            let (Some(&lhs), Some(&rhs)) = (lhs, rhs) else {
                                                continue;
                                            };
                                            checked += 1;
                                            if lhs != rhs {
                                                fail(
                                                    "M1",
                                                    format!(
                                                        "associativity fails: ({n},{i},{phi}), ({m},{j},{jp},{psi}), ({k},{l},{chi}): {lhs} vs {rhs}"
                                                    ),
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // (M2) order of contraction
    for n in 4..=max {
        for phi in 0..s.n_elements(n)? {
            for i1 in 0..n {
                for i2 in 0..n {
                    for j1 in 0..n {
                        for j2 in 0..n {
                            let mut sorted = vec![i1, i2, j1, j2];
                            sorted.sort_unstable();
                            sorted.dedup();
                            if sorted.len() != 4 {
                                continue;
                            }
                            let Some(&zi) = p.zeta.get(&(n, i1, i2, phi)) else {
                                continue;
                            };
                            let Some(&zj) = p.zeta.get(&(n, j1, j2, phi)) else {
                                continue;
                            };
                            let sh = |pos: usize, removed: [usize; 2]| {
                                pos - removed.iter().filter(|&&x| x < pos).count()
                            };
                            let lhs = p
                                .zeta
                                .get(&(n - 2, sh(j1, [i1, i2]), sh(j2, [i1, i2]), zi));
                            let rhs = p
                                .zeta
                                .get(&(n - 2, sh(i1, [j1, j2]), sh(i2, [j1, j2]), zj));
                            let (Some(&lhs), Some(&rhs)) = (lhs, rhs) else {
                                continue;
                            };
                            checked += 1;
                            if lhs != rhs {
                                fail(
                                    "M2",
                                    format!(
                                        "contraction order matters at ({n},{phi}): {lhs} vs {rhs}"
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    // (M3) multiplication and contraction commute
    for n in 3..=max {
        for m in 1..=max {
            if n + m - 2 > max {
                continue;
            }
            for phi in 0..s.n_elements(n)? {
                for psi in 0..s.n_elements(m)? {
                    for i1 in 0..n {
                        for i2 in 0..n {
                            if i1 == i2 {
                                continue;
                            }
                            for g in 0..n {
                                if g == i1 || g == i2 {
                                    continue;
                                }
                                for h in 0..m {
                                    let Some(&z) = p.zeta.get(&(n, i1, i2, phi)) else {
                                        continue;
                                    };
                                    let Some(&d) = p.diamond.get(&(n, g, phi, m, h, psi))
                                    else {
                                        continue;
                                    };
                                    let sh =
                                        |pos: usize, rm: &[usize]| {
                                            pos - rm.iter().filter(|&&x| x < pos).count()
                                        };
                                    let lhs = p.diamond.get(&(
                                        n - 2,
                                        sh(g, &[i1, i2]),
                                        z,
                                        m,
                                        h,
                                        psi,
                                    ));
                                    let rhs = p.zeta.get(&(
                                        n + m - 2,
                                        sh(i1, &[g]),
                                        sh(i2, &[g]),
                                        d,
                                    ));
                                    let (Some(&lhs), Some(&rhs)) = (lhs, rhs) else {
                                        continue;
                                    };
                                    checked += 1;
                                    if lhs != rhs {
                                        fail(
                                            "M3",
                                            format!(
                                                "commutation fails at ({n},{i1},{i2},{g},{phi})·({m},{h},{psi}): {lhs} vs {rhs}"
                                            ),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // (M4) parallel multiplication of pairs
    for n in 2..=max {
        for m in 2..=max {
            if n + m - 2 > max {
                continue;
            }
            for phi in 0..s.n_elements(n)? {
                for psi in 0..s.n_elements(m)? {
                    for a in 0..n {
                        for b in 0..n {
                            if a == b {
                                continue;
                            }
                            for u in 0..m {
                                for v in 0..m {
                                    if u == v {
                                        continue;
                                    }
                                    let Some(&c1) = p.diamond.get(&(n, a, phi, m, u, psi))
                                    else {
                                        continue;
                                    };
                                    let Some(&c2) = p.diamond.get(&(n, b, phi, m, v, psi))
                                    else {
                                        continue;
                                    };
                                    let bp = b - usize::from(b > a);
                                    let vp = n - 1 + v - usize::from(v > u);
                                    let ap = a - usize::from(a > b);
                                    let up = n - 1 + u - usize::from(u > v);
                                    let lhs = p.zeta.get(&(n + m - 2, bp, vp, c1));
                                    let rhs = p.zeta.get(&(n + m - 2, ap, up, c2));
                                    let (Some(&lhs), Some(&rhs)) = (lhs, rhs) else {
                                        continue;
                                    };
                                    checked += 1;
                                    if lhs != rhs {
                                        fail(
                                            "M4",
                                            format!(
                                                "parallel multiplication fails at ({n},{a},{b},{phi})·({m},{u},{v},{psi}): {lhs} vs {rhs}"
                                            ),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(AxiomReport { checked, failures })
}

/// An ordering of the inner τ-orbits of a structured graph (indices into
/// the graph's inner-orbit list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsePlan {
    pub order: Vec<usize>,
}

/// Collapse one inner τ-orbit of a structured X-graph: distinct endpoints
/// merge into one vertex decorated by ⋄, a loop contracts by ζ.  Returns the
/// collapsed structured graph and the edge map (`None` for removed edges).
#[allow(clippy::type_complexity)]
pub fn collapse_edge(
    p: &OperadPresentation,
    x: &XGraph,
    alpha: &StructuredGraph,
    edge: usize,
) -> Result<(XGraph, StructuredGraph, Vec<Option<usize>>), OperadError> {
    let g = &x.graph;
    let e = edge;
    let te = g.tau(e);
    let (Some(he), Some(hte)) = (g.half_edge_of(e), g.half_edge_of(te)) else {
        return Err(OperadError::NotInner { edge });
    };
    let (v1, v2) = (g.vertex_of(he), g.vertex_of(hte));
    let mut edge_map: Vec<Option<usize>> = Vec::with_capacity(g.n_edges());
    let mut next = 0usize;
    for f in 0..g.n_edges() {
        if f == e || f == te {
            edge_map.push(None);
        } else {
            edge_map.push(Some(next));
            next += 1;
        }
    }
    let coloring: Vec<usize> = (0..g.n_edges())
        .filter(|&f| f != e && f != te)
        .map(|f| alpha.coloring[f])
        .collect();
    let mut labels = BTreeMap::new();
    for (f, lbl) in g.labels() {
        if let Some(nf) = edge_map[*f] {
            labels.insert(nf, lbl.clone());
        }
    }
    let mut half_edges: Vec<(usize, usize)> = Vec::new();
    let mut decorations: Vec<usize> = Vec::new();
    if v1 != v2 {
        // case 1: merge the endpoints, decorate by ⋄
        let d1 = g.vertex_data(v1)?;
        let d2 = g.vertex_data(v2)?;
        let i1 = d1.incident_edges.iter().position(|&f| f == e).unwrap();
        let i2 = d2.incident_edges.iter().position(|&f| f == te).unwrap();
        let merged = p.diamond(
            d1.valency,
            i1,
            alpha.decorations[v1],
            d2.valency,
            i2,
            alpha.decorations[v2],
        )?;
        let mut new_v = 0usize;
        for v in 0..g.n_vertices() {
            if v == v2 {
                continue;
            }
            if v == v1 {
                for &f in d1.incident_edges.iter().filter(|&&f| f != e) {
                    half_edges.push((edge_map[f].unwrap(), new_v));
                }
                for &f in d2.incident_edges.iter().filter(|&&f| f != te) {
                    half_edges.push((edge_map[f].unwrap(), new_v));
                }
                decorations.push(merged);
            } else {
                for &f in &g.vertex_data(v)?.incident_edges {
                    half_edges.push((edge_map[f].unwrap(), new_v));
                }
                decorations.push(alpha.decorations[v]);
            }
            new_v += 1;
        }
    } else {
        // case 2: a loop contracts by ζ
        let d = g.vertex_data(v1)?;
        let i = d.incident_edges.iter().position(|&f| f == e).unwrap();
        let j = d.incident_edges.iter().position(|&f| f == te).unwrap();
        let contracted = p.zeta(d.valency, i, j, alpha.decorations[v1])?;
        for v in 0..g.n_vertices() {
            if v == v1 {
                for &f in d.incident_edges.iter().filter(|&&f| f != e && f != te) {
                    half_edges.push((edge_map[f].unwrap(), v));
                }
                decorations.push(contracted);
            } else {
                for &f in &g.vertex_data(v)?.incident_edges {
                    half_edges.push((edge_map[f].unwrap(), v));
                }
                decorations.push(alpha.decorations[v]);
            }
        }
    }
    let involution: Vec<usize> = (0..g.n_edges())
        .filter(|&f| f != e && f != te)
        .map(|f| edge_map[g.tau(f)].unwrap())
        .collect();
    let quot = FeynmanGraph::validate(RawGraph {
        edges: next,
        involution,
        half_edges,
        vertices: g.n_vertices() - usize::from(v1 != v2),
        labels,
    })?;
    let structure = StructuredGraph::validate(&p.species, &quot, coloring, decorations)?;
    let ports: Vec<usize> = x.ports.iter().map(|&pt| edge_map[pt].unwrap()).collect();
    Ok((XGraph::new(quot, ports)?, structure, edge_map))
}

/// Evaluate a structured X-graph by collapsing all inner orbits (default:
/// ascending orbit order), returning the element of `S_X` decorating the
/// final corolla, with its boundary matched to the ports of `x`.
pub fn evaluate(
    p: &OperadPresentation,
    x: &XGraph,
    alpha: &StructuredGraph,
    plan: Option<&CollapsePlan>,
) -> Result<usize, OperadError> {
    let alpha = StructuredGraph::validate(
        &p.species,
        &x.graph,
        alpha.coloring.clone(),
        alpha.decorations.clone(),
    )?;
    let inner = x.graph.boundary_and_inner().inner_orbits;
    let order: Vec<usize> = match plan {
        Some(plan) => {
            let mut sorted = plan.order.clone();
            sorted.sort_unstable();
            if sorted != (0..inner.len()).collect::<Vec<_>>() {
                return Err(OperadError::InvalidPresentation {
                    reason: "collapse plan is not a permutation of the inner orbits".into(),
                });
            }
            plan.order.clone()
        }
        None => (0..inner.len()).collect(),
    };
    // track each original orbit through the collapses by a live edge
    let mut live: Vec<Option<usize>> = inner.iter().map(|o| Some(o[0])).collect();
    let mut cur_x = x.clone();
    let mut cur_alpha = alpha;
    let mut cur_ports: Vec<usize> = cur_x.ports.clone();
    for &idx in &order {
        let e = live[idx].expect("orbits collapse once per plan");
        let (nx, nalpha, edge_map) = collapse_edge(p, &cur_x, &cur_alpha, e)?;
        for l in live.iter_mut() {
            *l = l.and_then(|f| edge_map[f]);
        }
        cur_ports = cur_ports.iter().map(|&pt| edge_map[pt].unwrap()).collect();
        cur_x = nx;
        cur_alpha = nalpha;
    }
    let g = &cur_x.graph;
    debug_assert_eq!(g.n_vertices(), 1);
    let vd = g.vertex_data(0)?;
    let n = vd.valency;
    let mut sigma = vec![0usize; n];
    for (k, &pt) in cur_ports.iter().enumerate() {
        let pos = vd
            .incident_edges
            .iter()
            .position(|&f| f == g.tau(pt))
            .expect("ports pair with the final corolla's edges");
        sigma[pos] = k;
    }
    Ok(p.species.act(n, &sigma, cur_alpha.decorations[0])?)
}

/// Insert a unit-decorated bivalent vertex into an inner orbit of a
/// structured X-graph (the orbit given by one of its edges).
pub fn insert_unit(
    p: &OperadPresentation,
    x: &XGraph,
    alpha: &StructuredGraph,
    edge: usize,
) -> Result<(XGraph, StructuredGraph), OperadError> {
    let eps = p.unit.as_ref().ok_or_else(|| OperadError::InvalidPresentation {
        reason: "the presentation has no unit".into(),
    })?;
    let g = &x.graph;
    let e = edge;
    let te = g.tau(e);
    if g.half_edge_of(e).is_none() || g.half_edge_of(te).is_none() {
        return Err(OperadError::NotInner { edge });
    }
    // split e—τe into e—a and b—τe with a fresh bivalent vertex on (a, b)
    let mut raw = g.to_raw();
    let (a, b) = (raw.edges, raw.edges + 1);
    raw.edges += 2;
    raw.involution[e] = a;
    raw.involution.push(e);
    raw.involution.push(te);
    raw.involution[te] = b;
    let w = raw.vertices;
    raw.vertices += 1;
    raw.half_edges.push((a, w));
    raw.half_edges.push((b, w));
    let quot = FeynmanGraph::validate(raw)?;
    let gamma = alpha.coloring[e];
    let omega = |c: usize| p.species.palette().omega(c);
    let mut coloring = alpha.coloring.clone();
    coloring.push(omega(gamma)); // a, dual to e
    coloring.push(gamma); // b, dual to τe
    let mut decorations = alpha.decorations.clone();
    decorations.push(eps[omega(gamma)]);
    let structure = StructuredGraph::validate(&p.species, &quot, coloring, decorations)?;
    Ok((XGraph::new(quot, x.ports.clone())?, structure))
}

/// Verify unit behaviour of a pointed presentation: evaluation is invariant
/// under unit insertion on the given samples, and every wheel of units
/// evaluates to the contracted unit ζ(ε_c).
pub fn unit_behavior(
    p: &OperadPresentation,
    samples: &[(XGraph, StructuredGraph)],
    max_wheel: usize,
) -> Result<AxiomReport, OperadError> {
    let eps = p.unit.as_ref().ok_or_else(|| OperadError::InvalidPresentation {
        reason: "the presentation has no unit".into(),
    })?;
    let omega = |c: usize| p.species.palette().omega(c);
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for (x, alpha) in samples {
        let base = evaluate(p, x, alpha, None)?;
        for orbit in x.graph.boundary_and_inner().inner_orbits {
            checked += 1;
            let (x2, alpha2) = insert_unit(p, x, alpha, orbit[0])?;
            if evaluate(p, &x2, &alpha2, None)? != base {
                failures.push(AxiomFailure {
                    axiom: "unit-insertion".into(),
                    detail: format!("inserting a unit on orbit {orbit:?} changes the value"),
                });
            }
        }
    }
    for c in 0..p.species.palette().n_colors() {
        // ζ(ε_c) from the one-vertex wheel
        let expected = p.zeta(2, 0, 1, eps[c])?;
        for m in 1..=max_wheel {
            checked += 1;
            let g = crate::graph::wheel(m);
            let coloring: Vec<usize> = (0..2 * m)
                .map(|f| if f % 2 == 0 { c } else { omega(c) })
                .collect();
            let decorations = vec![eps[c]; m];
            let alpha = StructuredGraph::validate(&p.species, &g, coloring, decorations)?;
            let x = XGraph::new(g, vec![])?;
            if evaluate(p, &x, &alpha, None)? != expected {
                failures.push(AxiomFailure {
                    axiom: "unit-wheel".into(),
                    detail: format!("a wheel of {m} units does not evaluate to ζ(ε_{c})"),
                });
            }
        }
    }
    Ok(AxiomReport { checked, failures })
}

/// Run `evaluate` over every collapse order of a structured graph with at
/// most `max_orbits` inner orbits; returns the distinct results.
pub fn evaluate_all_orders(
    p: &OperadPresentation,
    x: &XGraph,
    alpha: &StructuredGraph,
    max_orbits: usize,
) -> Result<Vec<usize>, OperadError> {
    let n = x.graph.boundary_and_inner().inner_orbits.len();
    if n > max_orbits {
        return Err(OperadError::InvalidPresentation {
            reason: format!("{n} inner orbits exceed the all-orders bound {max_orbits}"),
        });
    }
    let mut results = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |ord| {
        let plan = CollapsePlan {
            order: ord.to_vec(),
        };
        evaluate(p, x, alpha, Some(&plan)).map(|r| results.push(r))
    })?;
    results.sort_unstable();
    results.dedup();
    Ok(results)
}

fn permute<F>(items: &mut [usize], k: usize, visit: &mut F) -> Result<(), OperadError>
where
    F: FnMut(&[usize]) -> Result<(), OperadError>,
{
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit)?;
        items.swap(k, i);
    }
    Ok(())
}

// --- standard fixtures ------------------------------------------------------

/// The additive-genus species over a palette: elements of arity `n` are
/// pairs (colour tuple, genus ≤ `max_genus`); the symmetric groups permute
/// the tuple and fix the genus.
pub fn genus_species(
    palette: &crate::species::Palette,
    max_arity: usize,
    max_genus: usize,
) -> Result<GraphicalSpecies, SpeciesError> {
    use crate::species::RawArity;
    let k = palette.n_colors();
    let gcount = max_genus + 1;
    let tuple = |n: usize, idx: usize| -> Vec<usize> {
        (0..n).map(|x| idx / k.pow(x as u32) % k).collect()
    };
    let tuple_idx = |t: &[usize]| -> usize {
        t.iter()
            .enumerate()
            .map(|(x, &c)| c * k.pow(x as u32))
            .sum()
    };
    let mut arities = Vec::with_capacity(max_arity + 1);
    for n in 0..=max_arity {
        let tcount = k.pow(n as u32);
        let elements: Vec<String> = (0..tcount * gcount)
            .map(|i| format!("t{:?}g{}", tuple(n, i / gcount), i % gcount))
            .collect();
        let mut transpositions = Vec::new();
        for t in 0..n.saturating_sub(1) {
            let map: Vec<usize> = (0..tcount * gcount)
                .map(|i| {
                    let mut tp = tuple(n, i / gcount);
                    tp.swap(t, t + 1);
                    tuple_idx(&tp) * gcount + i % gcount
                })
                .collect();
            transpositions.push(map);
        }
        let projections: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..tcount * gcount)
                    .map(|i| tuple(n, i / gcount)[x])
                    .collect()
            })
            .collect();
        arities.push(RawArity {
            elements,
            transpositions,
            projections,
        });
    }
    GraphicalSpecies::new(palette.clone(), arities)
}

/// The genus modular operad on `genus_species`: ⋄ adds genera, ζ increments.
/// With `corrupted` the contraction only increments on colour 0 — on a
/// palette with a second colour this breaks exactly the parallel
/// multiplication axiom.
pub fn genus_presentation(
    species: &GraphicalSpecies,
    max_genus: usize,
    corrupted: bool,
) -> Result<OperadPresentation, OperadError> {
    let s = species.clone();
    let k = s.palette().n_colors();
    let gcount = max_genus + 1;
    let tuple = |n: usize, idx: usize| -> Vec<usize> {
        (0..n).map(|x| idx / gcount / k.pow(x as u32) % k).collect()
    };
    let tuple_idx = |t: &[usize]| -> usize {
        t.iter()
            .enumerate()
            .map(|(x, &c)| c * k.pow(x as u32))
            .sum()
    };
    let diamond_fn = |n: usize, i: usize, phi: usize, m: usize, j: usize, psi: usize| {
        let (g1, g2) = (phi % gcount, psi % gcount);
        if g1 + g2 > max_genus {
            return None;
        }
        let mut t = drop1(&tuple(n, phi), i);
        t.extend(drop1(&tuple(m, psi), j));
        Some(tuple_idx(&t) * gcount + g1 + g2)
    };
    let zeta_fn = |n: usize, i: usize, j: usize, phi: usize| {
        let g = phi % gcount;
        let t = tuple(n, phi);
        let inc = if corrupted {
            usize::from(t[i] == 0 || t[j] == 0)
        } else {
            1
        };
        if g + inc > max_genus {
            return None;
        }
        let rest: Vec<usize> = t
            .iter()
            .enumerate()
            .filter(|(x, _)| *x != i && *x != j)
            .map(|(_, &c)| c)
            .collect();
        Some(tuple_idx(&rest) * gcount + g + inc)
    };
    // ε_c: the genus-0 element with tuple (c, ωc)
    let unit: Vec<usize> = (0..k)
        .map(|c| tuple_idx(&[c, s.palette().omega(c)]) * gcount)
        .collect();
    OperadPresentation::tabulate(species.clone(), &diamond_fn, &zeta_fn, Some(unit))
}

/// The trivial presentation on a terminal species: every entry is the
/// unique element of the target colour tuple.
pub fn terminal_presentation(
    species: &GraphicalSpecies,
) -> Result<OperadPresentation, OperadError> {
    let s = species.clone();
    let find = move |n: usize, want: &[usize]| -> Option<usize> {
        (0..s.n_elements(n).ok()?).find(|&e| s.color_tuple(n, e).ok().as_deref() == Some(want))
    };
    let s1 = species.clone();
    let s2 = species.clone();
    let f1 = find.clone();
    let f2 = find;
    let diamond_fn = move |n: usize, i: usize, phi: usize, m: usize, j: usize, psi: usize| {
        let mut t = drop1(&s1.color_tuple(n, phi).ok()?, i);
        t.extend(drop1(&s1.color_tuple(m, psi).ok()?, j));
        f1(n + m - 2, &t)
    };
    let zeta_fn = move |n: usize, i: usize, j: usize, phi: usize| {
        let t = s2.color_tuple(n, phi).ok()?;
        let rest: Vec<usize> = t
            .iter()
            .enumerate()
            .filter(|(x, _)| *x != i && *x != j)
            .map(|(_, &c)| c)
            .collect();
        f2(n - 2, &rest)
    };
    let k = species.palette().n_colors();
    let omega: Vec<usize> = (0..k).map(|c| species.palette().omega(c)).collect();
    let s3 = species.clone();
    let unit: Vec<usize> = (0..k)
        .map(|c| {
            (0..s3.n_elements(2).unwrap())
                .find(|&e| s3.color_tuple(2, e).unwrap() == vec![c, omega[c]])
                .expect("terminal species has every colour tuple")
        })
        .collect();
    OperadPresentation::tabulate(species.clone(), &diamond_fn, &zeta_fn, Some(unit))
}
