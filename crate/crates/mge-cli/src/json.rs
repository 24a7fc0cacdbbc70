//! Self-describing JSON schema for all workspace artifacts, with a `kind`
//! discriminator per document.

use mge_core::{
    FeynmanGraph, GraphOfGraphs, GraphicalSpecies, OperadPresentation, Palette, Piece, RawArity,
    RawGraph, StructuredGraph, XGraph,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A workspace document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Document {
    Graph(GraphDoc),
    Structured(StructuredDoc),
    Species(SpeciesDoc),
    Presentation(PresentationDoc),
    Gluing(GluingDoc),
    Gog(GogDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub edges: usize,
    pub involution: Vec<usize>,
    pub half_edges: Vec<(usize, usize)>,
    pub vertices: usize,
    /// Edge labels keyed by the edge index (as a decimal string).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
    /// Present when the document carries an X-graph port order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ports: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredDoc {
    pub graph: GraphDoc,
    pub coloring: Vec<usize>,
    pub decorations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaletteDoc {
    pub colors: Vec<String>,
    pub omega: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArityDoc {
    pub elements: Vec<String>,
    pub transpositions: Vec<Vec<usize>>,
    pub projections: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesDoc {
    pub palette: PaletteDoc,
    pub arities: Vec<ArityDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiamondEntry {
    pub n: usize,
    pub i: usize,
    pub phi: usize,
    pub m: usize,
    pub j: usize,
    pub psi: usize,
    pub result: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaEntry {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub phi: usize,
    pub result: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub species: SpeciesDoc,
    pub diamond: Vec<DiamondEntry>,
    pub zeta: Vec<ZetaEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingDoc {
    pub graph: GraphDoc,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub graph: GraphDoc,
    pub ports: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GogDoc {
    pub base: GraphDoc,
    pub pieces: Vec<PieceDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &FeynmanGraph) -> GraphDoc {
        let raw = g.to_raw();
        GraphDoc {
            edges: raw.edges,
            involution: raw.involution,
            half_edges: raw.half_edges,
            vertices: raw.vertices,
            labels: raw
                .labels
                .into_iter()
                .map(|(e, l)| (e.to_string(), l))
                .collect(),
            ports: None,
        }
    }

    pub fn from_x_graph(x: &XGraph) -> GraphDoc {
        let mut doc = GraphDoc::from_graph(&x.graph);
        doc.ports = Some(x.ports.clone());
        doc
    }

    pub fn to_graph(&self) -> anyhow::Result<FeynmanGraph> {
        let labels = self
            .labels
            .iter()
            .map(|(e, l)| {
                let e: usize = e
                    .parse()
                    .map_err(|_| anyhow::anyhow!("label key {e:?} is not an edge index"))?;
                Ok((e, l.clone()))
            })
            .collect::<anyhow::Result<BTreeMap<usize, String>>>()?;
        Ok(FeynmanGraph::validate(RawGraph {
            edges: self.edges,
            involution: self.involution.clone(),
            half_edges: self.half_edges.clone(),
            vertices: self.vertices,
            labels,
        })?)
    }

    pub fn to_x_graph(&self) -> anyhow::Result<XGraph> {
        let g = self.to_graph()?;
        let ports = match &self.ports {
            Some(p) => p.clone(),
            None => g.boundary_and_inner().ports,
        };
        Ok(XGraph::new(g, ports)?)
    }
}

impl StructuredDoc {
    pub fn from_parts(x: &XGraph, st: &StructuredGraph) -> StructuredDoc {
        StructuredDoc {
            graph: GraphDoc::from_x_graph(x),
            coloring: st.coloring.clone(),
            decorations: st.decorations.clone(),
        }
    }

    pub fn to_parts(&self, s: &GraphicalSpecies) -> anyhow::Result<(XGraph, StructuredGraph)> {
        let x = self.graph.to_x_graph()?;
        let st = StructuredGraph::validate(
            s,
            &x.graph,
            self.coloring.clone(),
            self.decorations.clone(),
        )?;
        Ok((x, st))
    }
}

impl SpeciesDoc {
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_species(s: &GraphicalSpecies) -> SpeciesDoc {
        let (palette, arities) = s.to_raw();
        SpeciesDoc {
            palette: PaletteDoc {
                colors: palette.colors().to_vec(),
                omega: (0..palette.n_colors()).map(|c| palette.omega(c)).collect(),
            },
            arities: arities
                .into_iter()
                .map(|a| ArityDoc {
                    elements: a.elements,
                    transpositions: a.transpositions,
                    projections: a.projections,
                })
                .collect(),
        }
    }

    pub fn to_species(&self) -> anyhow::Result<GraphicalSpecies> {
        let palette = Palette::new(self.palette.colors.clone(), self.palette.omega.clone())?;
        let arities = self
            .arities
            .iter()
            .map(|a| RawArity {
                elements: a.elements.clone(),
                transpositions: a.transpositions.clone(),
                projections: a.projections.clone(),
            })
            .collect();
        Ok(GraphicalSpecies::new(palette, arities)?)
    }
}

impl PresentationDoc {
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_presentation(p: &OperadPresentation) -> PresentationDoc {
        PresentationDoc {
            species: SpeciesDoc::from_species(p.species()),
            diamond: p
                .diamond_table()
                .iter()
                .map(|(&(n, i, phi, m, j, psi), &result)| DiamondEntry {
                    n,
                    i,
                    phi,
                    m,
                    j,
                    psi,
                    result,
                })
                .collect(),
            zeta: p
                .zeta_table()
                .iter()
                .map(|(&(n, i, j, phi), &result)| ZetaEntry {
                    n,
                    i,
                    j,
                    phi,
                    result,
                })
                .collect(),
            unit: p.unit().map(|u| u.to_vec()),
        }
    }

    pub fn to_presentation(&self) -> anyhow::Result<OperadPresentation> {
        let species = self.species.to_species()?;
        let diamond = self
            .diamond
            .iter()
            .map(|e| ((e.n, e.i, e.phi, e.m, e.j, e.psi), e.result))
            .collect();
        let zeta = self
            .zeta
            .iter()
            .map(|e| ((e.n, e.i, e.j, e.phi), e.result))
            .collect();
        Ok(OperadPresentation::new(
            species,
            diamond,
            zeta,
            self.unit.clone(),
        )?)
    }
}

impl GogDoc {
    pub fn to_gog(&self) -> anyhow::Result<GraphOfGraphs> {
        let base = self.base.to_graph()?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(Piece {
                    graph: p.graph.to_graph()?,
                    ports: p.ports.clone(),
                })
            })
            .collect::<anyhow::Result<_>>()?;
        Ok(GraphOfGraphs::new(base, pieces)?)
    }
}

/// Parse a document from JSON text.
pub fn parse(text: &str) -> anyhow::Result<Document> {
    Ok(serde_json::from_str(text)?)
}

/// Serialize a document deterministically (pretty, trailing newline).
pub fn serialize(doc: &Document) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("document serialization");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mge_core::{line, terminal_species, wheel};

    #[test]
    fn documents_round_trip() {
        let s = terminal_species(&Palette::directed(), 3).unwrap();
        let p = mge_core::terminal_presentation(&s).unwrap();
        let docs = vec![
            Document::Graph(GraphDoc::from_graph(&wheel(2))),
            Document::Graph(GraphDoc::from_x_graph(
                &XGraph::new(line(2), vec![0, 5]).unwrap(),
            )),
            Document::Species(SpeciesDoc::from_species(&s)),
            Document::Presentation(PresentationDoc::from_presentation(&p)),
            Document::Gluing(GluingDoc {
                graph: GraphDoc::from_graph(&line(2)),
                pairs: vec![(0, 5)],
            }),
            Document::Gog(GogDoc {
                base: GraphDoc::from_graph(&line(1)),
                pieces: vec![PieceDoc {
                    graph: GraphDoc::from_graph(&line(2)),
                    ports: vec![0, 5],
                }],
            }),
        ];
        for doc in docs {
            let text = serialize(&doc);
            let back = parse(&text).unwrap();
            assert_eq!(doc, back);
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn converted_documents_rebuild_the_same_values() {
        let g = wheel(3);
        assert_eq!(GraphDoc::from_graph(&g).to_graph().unwrap(), g);
        let s = terminal_species(&Palette::monochrome(), 3).unwrap();
        assert_eq!(SpeciesDoc::from_species(&s).to_species().unwrap(), s);
        let p = mge_core::terminal_presentation(&s).unwrap();
        let p2 = PresentationDoc::from_presentation(&p)
            .to_presentation()
            .unwrap();
        assert_eq!(p2.diamond_table(), p.diamond_table());
        assert_eq!(p2.zeta_table(), p.zeta_table());
        assert_eq!(p2.unit(), p.unit());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse(r#"{"kind":"graph","edges":0,"involution":[],"half_edges":[],"vertices":0,"bogus":1}"#).is_err());
    }
}
