//! `mge`: validate and inspect graphs, count hom-sets, compute colimits and
//! collapses, run the law-checking suites, check Segal conditions, and
//! export DOT renderings.

mod dot;
mod json;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use json::{Document, GraphDoc, StructuredDoc};
use mge_core::{
    apply_d, check_axioms, check_beck_axioms_with, check_monad_laws, check_t_star_laws,
    classify_bivalent, coequalize_gluing, colimit_graph_of_graphs, collapse_edge, corolla,
    enumerate_all, enumerate_etale, enumerate_star_morphisms, evaluate, evaluate_all_orders,
    evaluate_species, genus_presentation, genus_species, isolated_vertex, line, segal_check,
    species_presheaf, stick, terminal_presentation, terminal_species, unit_behavior, wheel,
    BivalentClass, FeynmanGraph, GluingDatum, GraphKind, GraphicalSpecies, OperadPresentation,
    Palette, StructuredGraph, XGraph,
};
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mge", version, about = "graph calculus workbench")]
struct Cli {
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    /// Size/vertex/fuel bound for enumerations and law checkers.
    #[arg(long, global = true, env = "MGE_BOUND")]
    bound: Option<usize>,
    /// Seed for sample selection in the law checkers.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a JSON workspace file.
    Validate { file: String },
    /// Show structural information about a graph.
    Info { graph: String },
    /// Count (and optionally list) morphisms between two graphs.
    Hom {
        src: String,
        tgt: String,
        /// Count etale morphisms only.
        #[arg(long)]
        etale: bool,
        /// Count pointed (star) morphisms.
        #[arg(long, conflicts_with = "etale")]
        star: bool,
        /// Print the edge map of every morphism.
        #[arg(long)]
        list: bool,
    },
    /// Coequalize a gluing datum (kind "gluing") into a graph.
    Glue { file: String },
    /// Compute the colimit of a graph of graphs (kind "gog").
    Substitute { file: String },
    /// Collapse one inner edge orbit of a structured graph.
    Collapse {
        presentation: String,
        structured: String,
        #[arg(long)]
        edge: usize,
    },
    /// Evaluate a structured graph down to a single element.
    Evaluate {
        presentation: String,
        structured: String,
        /// Exhaust every collapse order and compare the results.
        #[arg(long)]
        all_orders: bool,
    },
    /// Check the modular-operad coherence axioms of a presentation.
    CheckAxioms { presentation: String },
    /// Check the monad laws of T and (on the freely pointed species) T*.
    CheckMonad { species: String },
    /// Check the four distributive-law axioms.
    CheckDistributive {
        species: String,
        /// Use the deliberately broken law variant.
        #[arg(long)]
        broken: bool,
    },
    /// Check the Segal condition of the species-induced presheaf.
    Segal {
        species: String,
        /// Graphs to check (builtin names or files); a default suite is
        /// used when empty.
        graphs: Vec<String>,
    },
    /// Render a graph (or structured graph, given a species) as DOT.
    Dot {
        input: String,
        #[arg(long)]
        species: Option<String>,
    },
}

fn read_document(path: &str) -> anyhow::Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    json::parse(&text).with_context(|| format!("parsing {path}"))
}

fn builtin_graph(name: &str) -> Option<anyhow::Result<FeynmanGraph>> {
    let standard = |kind| Some(FeynmanGraph::standard(kind).map_err(Into::into));
    if let Some(n) = name.strip_prefix("corolla") {
        let n: usize = n.parse().ok()?;
        return Some(Ok(corolla(n)));
    }
    if let Some(k) = name.strip_prefix("line") {
        let k: usize = k.parse().ok()?;
        return Some(Ok(line(k)));
    }
    if let Some(m) = name.strip_prefix("wheel") {
        let m: usize = m.parse().ok()?;
        if m == 0 {
            return Some(Err(anyhow!("wheels have at least one vertex")));
        }
        return Some(Ok(wheel(m)));
    }
    match name {
        "stick" => Some(Ok(stick())),
        "isolated" => Some(Ok(isolated_vertex())),
        "mgraph" => standard(GraphKind::MGraph {
            x: vec!["x1".into(), "x2".into()],
            y: vec!["y1".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        }),
        "ngraph" => standard(GraphKind::NGraph {
            x: vec!["x1".into()],
            x0: "x0".into(),
            y0: "y0".into(),
        }),
        _ => None,
    }
}

fn resolve_graph(arg: &str) -> anyhow::Result<FeynmanGraph> {
    if let Some(g) = builtin_graph(arg) {
        return g;
    }
    if Path::new(arg).exists() {
        return match read_document(arg)? {
            Document::Graph(doc) => doc.to_graph(),
            Document::Structured(doc) => doc.graph.to_graph(),
            _ => bail!("{arg} is not a graph document"),
        };
    }
    bail!("unknown graph {arg:?} (not a builtin name or an existing file)")
}

fn bichrome() -> Palette {
    Palette::new(vec!["r".into(), "b".into()], vec![0, 1]).expect("valid palette")
}

fn resolve_species(arg: &str) -> anyhow::Result<GraphicalSpecies> {
    match arg {
        "terminal-mono" => Ok(terminal_species(&Palette::monochrome(), 4)?),
        "terminal-directed" => Ok(terminal_species(&Palette::directed(), 4)?),
        "genus" => Ok(genus_species(&Palette::monochrome(), 4, 4)?),
        "genus-bichrome" => Ok(genus_species(&bichrome(), 3, 3)?),
        _ if Path::new(arg).exists() => match read_document(arg)? {
            Document::Species(doc) => doc.to_species(),
            Document::Presentation(doc) => Ok(doc.to_presentation()?.species().clone()),
            _ => bail!("{arg} is not a species document"),
        },
        _ => bail!("unknown species {arg:?}"),
    }
}

fn resolve_presentation(arg: &str) -> anyhow::Result<OperadPresentation> {
    match arg {
        "genus" => Ok(genus_presentation(
            &genus_species(&Palette::monochrome(), 4, 4)?,
            4,
            false,
        )?),
        "genus-bichrome" => Ok(genus_presentation(
            &genus_species(&bichrome(), 3, 3)?,
            3,
            false,
        )?),
        "genus-bichrome-corrupted" => Ok(genus_presentation(
            &genus_species(&bichrome(), 3, 3)?,
            3,
            true,
        )?),
        "terminal-mono" => Ok(terminal_presentation(&terminal_species(
            &Palette::monochrome(),
            4,
        )?)?),
        "terminal-directed" => Ok(terminal_presentation(&terminal_species(
            &Palette::directed(),
            4,
        )?)?),
        _ if Path::new(arg).exists() => match read_document(arg)? {
            Document::Presentation(doc) => doc.to_presentation(),
            _ => bail!("{arg} is not a presentation document"),
        },
        _ => bail!("unknown presentation {arg:?}"),
    }
}

fn read_structured(
    arg: &str,
    s: &GraphicalSpecies,
) -> anyhow::Result<(XGraph, StructuredGraph)> {
    match read_document(arg)? {
        Document::Structured(doc) => doc.to_parts(s),
        _ => bail!("{arg} is not a structured-graph document"),
    }
}

/// Deterministic generator for seeded sample selection.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }
}

/// Structured samples over the fixture graphs, seed-subsampled, keeping
/// only samples the presentation can fully evaluate.
fn axiom_samples(
    p: &OperadPresentation,
    seed: u64,
    limit: usize,
) -> anyhow::Result<Vec<(XGraph, StructuredGraph)>> {
    let mut rng = Lcg(seed.wrapping_add(0x9e3779b97f4a7c15));
    let mut out = Vec::new();
    for g in [line(1), line(2), line(3), wheel(1), wheel(2), wheel(3)] {
        let ports = g.boundary_and_inner().ports;
        let x = XGraph::new(g.clone(), ports)?;
        for st in evaluate_species(p.species(), &g, None)? {
            if evaluate(p, &x, &st, None).is_err() {
                continue;
            }
            out.push((x.clone(), st));
        }
    }
    while out.len() > limit {
        let i = (rng.next() as usize) % out.len();
        out.swap_remove(i);
    }
    Ok(out)
}

/// Write to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn print_json_or(json: bool, value: serde_json::Value, plain: String) {
    if json {
        emit(&serde_json::to_string_pretty(&value).expect("report"));
    } else {
        emit(&plain);
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let bound = cli.bound;
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Validate { file } => {
            let doc = read_document(&file)?;
            let kind = match &doc {
                Document::Graph(d) => {
                    d.to_graph()?;
                    if d.ports.is_some() {
                        d.to_x_graph()?;
                    }
                    "graph"
                }
                Document::Structured(_) => {
                    // structure indices are species-relative; check the shape
                    let Document::Structured(d) = &doc else {
                        unreachable!()
                    };
                    let g = d.graph.to_graph()?;
                    if d.coloring.len() != g.n_edges() || d.decorations.len() != g.n_vertices() {
                        bail!("structure tables do not match the graph");
                    }
                    "structured"
                }
                Document::Species(d) => {
                    d.to_species()?;
                    "species"
                }
                Document::Presentation(d) => {
                    d.to_presentation()?;
                    "presentation"
                }
                Document::Gluing(d) => {
                    GluingDatum::new(d.graph.to_graph()?, d.pairs.clone())?;
                    "gluing"
                }
                Document::Gog(d) => {
                    d.to_gog()?;
                    "gog"
                }
            };
            print_json_or(
                cli.json,
                serde_json::json!({"ok": true, "kind": kind}),
                format!("ok: {kind}"),
            );
            Ok(0)
        }
        Command::Info { graph } => {
            let g = resolve_graph(&graph)?;
            let bi = g.boundary_and_inner();
            let classification = classify_bivalent(&g)
                .ok()
                .map(|(c, _)| match c {
                    BivalentClass::Line(k) => format!("line({k})"),
                    BivalentClass::Wheel(m) => format!("wheel({m})"),
                });
            print_json_or(
                cli.json,
                serde_json::json!({
                    "vertices": g.n_vertices(),
                    "edges": g.n_edges(),
                    "orbits": g.orbits().len(),
                    "ports": bi.ports,
                    "inner_orbits": bi.inner_orbits.len(),
                    "valencies": g.valencies(),
                    "connected": g.is_connected(),
                    "classification": classification,
                }),
                format!(
                    "vertices: {}\nedges: {}\norbits: {}\nports: {:?}\ninner orbits: {}\nvalencies: {:?}\nconnected: {}\nclassification: {}",
                    g.n_vertices(),
                    g.n_edges(),
                    g.orbits().len(),
                    bi.ports,
                    bi.inner_orbits.len(),
                    g.valencies(),
                    g.is_connected(),
                    classification.as_deref().unwrap_or("-"),
                ),
            );
            Ok(0)
        }
        Command::Hom {
            src,
            tgt,
            etale,
            star,
            list,
        } => {
            let a = resolve_graph(&src)?;
            let b = resolve_graph(&tgt)?;
            let (kind, tables): (&str, Vec<Vec<usize>>) = if star {
                (
                    "star",
                    enumerate_star_morphisms(&a, &b, bound)?
                        .into_iter()
                        .map(|m| m.f_e().to_vec())
                        .collect(),
                )
            } else if etale {
                (
                    "etale",
                    enumerate_etale(&a, &b, bound)?
                        .into_iter()
                        .map(|m| m.f_e().to_vec())
                        .collect(),
                )
            } else {
                (
                    "all",
                    enumerate_all(&a, &b, bound)?
                        .into_iter()
                        .map(|m| m.f_e().to_vec())
                        .collect(),
                )
            };
            let mut plain = format!("{}", tables.len());
            if list {
                for t in &tables {
                    plain.push_str(&format!("\n{t:?}"));
                }
            }
            print_json_or(
                cli.json,
                serde_json::json!({
                    "kind": kind,
                    "count": tables.len(),
                    "morphisms": if list { Some(&tables) } else { None },
                }),
                plain,
            );
            Ok(0)
        }
        Command::Glue { file } => {
            let Document::Gluing(doc) = read_document(&file)? else {
                bail!("{file} is not a gluing document");
            };
            let datum = GluingDatum::new(doc.graph.to_graph()?, doc.pairs)?;
            let (g, _) = coequalize_gluing(&datum)?;
            emit(&json::serialize(&Document::Graph(GraphDoc::from_graph(&g))));
            Ok(0)
        }
        Command::Substitute { file } => {
            let Document::Gog(doc) = read_document(&file)? else {
                bail!("{file} is not a graph-of-graphs document");
            };
            let colimit = colimit_graph_of_graphs(&doc.to_gog()?)?;
            emit(&json::serialize(&Document::Graph(GraphDoc::from_graph(
                &colimit.graph,
            ))));
            Ok(0)
        }
        Command::Collapse {
            presentation,
            structured,
            edge,
        } => {
            let p = resolve_presentation(&presentation)?;
            let (x, st) = read_structured(&structured, p.species())?;
            let (x2, st2, _) = collapse_edge(&p, &x, &st, edge)?;
            emit(&json::serialize(&Document::Structured(
                StructuredDoc::from_parts(&x2, &st2),
            )));
            Ok(0)
        }
        Command::Evaluate {
            presentation,
            structured,
            all_orders,
        } => {
            let p = resolve_presentation(&presentation)?;
            let (x, st) = read_structured(&structured, p.species())?;
            if all_orders {
                let results = evaluate_all_orders(&p, &x, &st, bound.unwrap_or(8))?;
                let names: Vec<&str> = results
                    .iter()
                    .map(|&r| {
                        p.species()
                            .element_names(x.arity())
                            .map(|ns| ns[r].as_str())
                            .unwrap_or("?")
                    })
                    .collect();
                let plain = if results.len() == 1 {
                    format!("plan-independent: {}", names[0])
                } else {
                    format!("plan-dependent: {names:?}")
                };
                print_json_or(
                    cli.json,
                    serde_json::json!({
                        "plan_independent": results.len() == 1,
                        "results": results,
                        "names": names,
                    }),
                    plain,
                );
                Ok(if results.len() == 1 { 0 } else { 1 })
            } else {
                let r = evaluate(&p, &x, &st, None)?;
                let name = p
                    .species()
                    .element_names(x.arity())?
                    .get(r)
                    .cloned()
                    .unwrap_or_default();
                print_json_or(
                    cli.json,
                    serde_json::json!({"result": r, "name": name}),
                    format!("{r} ({name})"),
                );
                Ok(0)
            }
        }
        Command::CheckAxioms { presentation } => {
            let p = resolve_presentation(&presentation)?;
            let mut report = check_axioms(&p)?;
            if p.unit().is_some() {
                let samples = axiom_samples(&p, seed, bound.unwrap_or(64))?;
                match unit_behavior(&p, &samples, 4) {
                    Ok(units) => {
                        report.checked += units.checked;
                        report.failures.extend(units.failures);
                    }
                    // partial tables can leave unit composites undefined;
                    // that only masks further diagnostics when the axiom
                    // check already failed
                    Err(e) if !report.passed() => {
                        eprintln!("note: unit behavior left undetermined: {e}");
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let passed = report.passed();
            let failures: Vec<String> = report
                .failures
                .iter()
                .map(|f| format!("{}: {}", f.axiom, f.detail))
                .collect();
            print_json_or(
                cli.json,
                serde_json::json!({
                    "checked": report.checked,
                    "passed": passed,
                    "failures": failures,
                }),
                if passed {
                    format!("pass ({} instances checked)", report.checked)
                } else {
                    format!("FAIL\n{}", failures.join("\n"))
                },
            );
            Ok(if passed { 0 } else { 1 })
        }
        Command::CheckMonad { species } => {
            let s = resolve_species(&species)?;
            let fuel = bound.unwrap_or(150);
            let t = check_monad_laws(&s, fuel)?;
            let (sp, _) = apply_d(&s)?;
            let tstar = check_t_star_laws(&sp, fuel.min(100))?;
            let passed = t.passed() && tstar.passed();
            let failures: Vec<String> = t
                .failures
                .iter()
                .map(|f| format!("T: {f}"))
                .chain(tstar.failures.iter().map(|f| format!("T*: {f}")))
                .collect();
            print_json_or(
                cli.json,
                serde_json::json!({
                    "checked": t.checked + tstar.checked,
                    "passed": passed,
                    "failures": failures,
                }),
                if passed {
                    format!("pass ({} instances checked)", t.checked + tstar.checked)
                } else {
                    format!("FAIL\n{}", failures.join("\n"))
                },
            );
            Ok(if passed { 0 } else { 1 })
        }
        Command::CheckDistributive { species, broken } => {
            let s = resolve_species(&species)?;
            let report = check_beck_axioms_with(&s, bound.unwrap_or(200), broken)?;
            let passed = report.passed();
            print_json_or(
                cli.json,
                serde_json::json!({
                    "checked": report.checked,
                    "passed": passed,
                    "failures": report.failures,
                }),
                if passed {
                    format!("pass ({} instances checked)", report.checked)
                } else {
                    format!("FAIL\n{}", report.failures.join("\n"))
                },
            );
            Ok(if passed { 0 } else { 1 })
        }
        Command::Segal { species, graphs } => {
            let s = resolve_species(&species)?;
            let names: Vec<String> = if graphs.is_empty() {
                ["mgraph", "ngraph", "wheel2", "line2"]
                    .iter()
                    .map(|n| n.to_string())
                    .collect()
            } else {
                graphs
            };
            let named: Vec<(&str, FeynmanGraph)> = names
                .iter()
                .map(|n| Ok((n.as_str(), resolve_graph(n)?)))
                .collect::<anyhow::Result<_>>()?;
            let presheaf = species_presheaf(&s, &named, bound.or(Some(1 << 16)))?;
            let mut all_passed = true;
            let mut reports = Vec::new();
            for (n, _) in &named {
                let r = segal_check(&presheaf, n)?;
                all_passed &= r.passed;
                reports.push(r);
            }
            let plain: Vec<String> = reports
                .iter()
                .map(|r| {
                    if r.passed {
                        format!("{}: pass ({} values = {} families)", r.object, r.values, r.families)
                    } else {
                        format!(
                            "{}: FAIL missing={:?} duplicated={:?}",
                            r.object, r.missing, r.duplicated
                        )
                    }
                })
                .collect();
            print_json_or(
                cli.json,
                serde_json::json!(reports
                    .iter()
                    .map(|r| serde_json::json!({
                        "object": r.object,
                        "passed": r.passed,
                        "values": r.values,
                        "families": r.families,
                        "missing": r.missing,
                        "duplicated": r.duplicated,
                    }))
                    .collect::<Vec<_>>()),
                plain.join("\n"),
            );
            Ok(if all_passed { 0 } else { 1 })
        }
        Command::Dot { input, species } => {
            if Path::new(&input).exists() {
                if let Document::Structured(doc) = read_document(&input)? {
                    let text = match &species {
                        Some(sp) => {
                            let s = resolve_species(sp)?;
                            let (x, st) = doc.to_parts(&s)?;
                            dot::export_dot(&x.graph, Some((&s, &st)))
                        }
                        None => dot::export_dot(&doc.graph.to_graph()?, None),
                    };
                    emit(text.trim_end());
                    return Ok(0);
                }
            }
            let g = resolve_graph(&input)?;
            emit(dot::export_dot(&g, None).trim_end());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
