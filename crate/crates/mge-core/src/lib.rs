#![allow(clippy::needless_range_loop)]

//! Graphical calculus of modular operads: Feynman graphs, etale morphisms,
//! graph substitution, species, the monads involved, edge-collapse
//! evaluation, and Segal-condition checking.

pub mod graph;
pub mod morphism;
pub mod colimit;
pub mod monads;
pub mod nerve;
pub mod operad;
pub mod pointed;
pub mod species;
pub mod topology;

pub use graph::{
    corolla, isolated_vertex, line, stick, wheel, BoundaryInner, Component, FeynmanGraph,
    GraphError, GraphKind, Inclusion, RawGraph, VertexData,
};
pub use morphism::{
    canonical_form, canonical_form_with, enumerate_all, enumerate_etale,
    enumerate_x_isomorphisms, preimage, pullback, GraphMorphism, MorphismClassification,
    MorphismError, XGraph, DEFAULT_BOUND,
};
pub use colimit::{
    break_edges, coequalize_gluing, colimit_graph_of_graphs, Colimit, ColimitError, GluingDatum,
    GraphOfGraphs, Piece,
};
pub use species::{
    apply_d, evaluate_species, mu_d, terminal_species, validate_pointed, GraphicalSpecies,
    Palette, PointedSpecies, RawArity, SpeciesError, SpeciesMap, StructuredGraph,
    DEFAULT_EVAL_BOUND, MAX_ARITY,
};
pub use monads::{
    check_beck_axioms, check_beck_axioms_with, check_monad_laws, check_t_star_laws, eta_t,
    lambda_td_to_dt, lambda_with, mu_t, t_star, BeckReport, DValue, MonadError, TElement, TStar,
};
pub use nerve::{
    corolla_classes, factorization_category_witness, finality_check, free_operad_hom, klgr_equal,
    segal_check, species_presheaf, unpointed_counterexample, FactorizationReport, FinitePresheaf,
    FreeOperad, FreeOperadElement, KlgrMorphism, NerveError, SegalReport,
};
pub use operad::{
    check_axioms, collapse_edge, evaluate, evaluate_all_orders, genus_presentation,
    genus_species, insert_unit, terminal_presentation, unit_behavior, AxiomFailure, AxiomReport,
    CollapsePlan, DiamondKey, OperadError, OperadPresentation, ZetaKey,
};
pub use pointed::{
    canonical_structure, enumerate_star_morphisms, reduced_representative, similarity_equal,
    validate_star_morphism, vertex_deletion, PointedError, SimilarityClass, StarMorphism,
    StarVertexImage,
};
pub use topology::{
    classify_bivalent, directed_analysis, find_connecting_path, is_simply_connected, reduce_path,
    BivalentClass, DirectedAnalysis, Element, Orientation, Path, TopologyError,
};
