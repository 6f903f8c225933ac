use std::error::Error;
use std::io::Read;

use positroidlab::analysis::{self, SweepKind};
use positroidlab::necklace::{self, Necklace};
use positroidlab::perm::{leq_circ, AffinePerm, Perm};
use positroidlab::plabic::{generate_graph, LabelMode, PlabicGraph};
use positroidlab::positroid::{dimension, KSubset, Positroid};
use positroidlab::seed::{self, Sampler, Seed};
use positroidlab::twist::{self, EdgeWeights, QMatrix};
use positroidlab::wsc::{self, WsCollection};
use positroidlab::gallery;
use serde_json::{json, Value};

use crate::args::*;
use crate::SCHEMA;

type Res<T> = Result<T, Box<dyn Error>>;

pub struct Output {
    pub text: String,
    /// False when a check ran and found a counterexample.
    pub verified: bool,
}

fn emit(command: &str, result: Value) -> Output {
    let v = json!({ "schema": SCHEMA, "command": command, "result": result });
    Output { text: format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), verified: true }
}

fn check(command: &str, result: Value, ok: bool) -> Output {
    Output { verified: ok, ..emit(command, result) }
}

fn text(s: String) -> Output {
    let text = if s.ends_with('\n') { s } else { s + "\n" };
    Output { text, verified: true }
}

fn perm(s: &str) -> Res<Perm> {
    Ok(s.parse::<Perm>()?)
}

fn subset(s: &str) -> Res<KSubset> {
    KSubset::parse(s).ok_or_else(|| format!("cannot parse subset {s:?}").into())
}

fn subsets(v: &[String]) -> Res<Vec<KSubset>> {
    v.iter().map(|s| subset(s)).collect()
}

fn strings<T: ToString>(v: impl IntoIterator<Item = T>) -> Vec<String> {
    v.into_iter().map(|x| x.to_string()).collect()
}

fn read_source(spec: &str) -> Res<String> {
    if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(spec)?)
    }
}

fn load_graph(spec: &str) -> Res<PlabicGraph> {
    if let Some(name) = spec.strip_prefix("gallery:") {
        return gallery::all()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| {
                let names: Vec<&str> = gallery::all().iter().map(|(n, _)| *n).collect();
                format!("unknown gallery graph {name:?}; known: {}", names.join(", ")).into()
            });
    }
    if let Some(pi) = spec.strip_prefix("gen:") {
        return Ok(generate_graph(&perm(pi)?));
    }
    let v: Value = serde_json::from_str(&read_source(spec)?)?;
    // accept the wrapped output of `plabic gen`
    let v = v.get("result").cloned().unwrap_or(v);
    Ok(PlabicGraph::from_json(&v)?)
}

fn load_matrix(spec: &str) -> Res<QMatrix> {
    let raw = if spec.trim_start().starts_with('{') { spec.to_string() } else { read_source(spec)? };
    let v: Value = serde_json::from_str(&raw)?;
    let v = v.get("result").cloned().unwrap_or(v);
    let v = v.get("matrix").cloned().unwrap_or(v);
    Ok(serde_json::from_value(v)?)
}

fn load_necklace(a: &NecklaceArgs) -> Res<Necklace> {
    match (&a.pi, &a.rho, &a.iota) {
        (Some(pi), None, None) => Ok(Necklace::forward(&perm(pi)?)),
        (Some(pi), None, Some(iota)) => {
            let (pi, iota) = (perm(pi)?, perm(iota)?);
            if !leq_circ(&iota, &pi)? {
                return Err(format!("{iota} is not below {pi} in circular weak order").into());
            }
            Ok(necklace::necklace_below(&pi, &iota))
        }
        (None, Some(rho), Some(iota)) => Ok(Necklace::grassmannlike(&perm(rho)?, &perm(iota)?)),
        _ => Err("give --pi, --pi with --iota, or --rho with --iota".into()),
    }
}

fn position(nk: &Necklace, a: usize) -> Res<usize> {
    if a >= 1 && a <= nk.n() {
        Ok(a)
    } else {
        Err(format!("position {a} outside 1..={}", nk.n()).into())
    }
}

fn necklace_json(nk: &Necklace) -> Value {
    let mut v = serde_json::to_value(nk).unwrap();
    v["display"] = json!(nk.to_string());
    v["trip"] = json!(nk.trip().to_string());
    v["weakly_separated"] = json!(nk.is_weakly_separated());
    v
}

fn graph_out(command: &str, g: &PlabicGraph, dot: bool) -> Output {
    if dot {
        text(g.to_dot())
    } else {
        emit(command, g.to_json())
    }
}

fn mode(source: bool) -> LabelMode {
    if source {
        LabelMode::Source
    } else {
        LabelMode::Target
    }
}

fn graph_seed(g: &GraphArg) -> Res<(PlabicGraph, Seed)> {
    let graph = load_graph(&g.graph)?;
    let s = seed::seed_from_graph(&graph, LabelMode::Target)?;
    Ok((graph, s))
}

pub fn run(cli: &Cli) -> Res<Output> {
    let seed = cli.seed;
    match &cli.command {
        Command::Perm(c) => run_perm(c),
        Command::Necklace(c) => run_necklace(c),
        Command::Positroid(c) => run_positroid(c),
        Command::Plabic(c) => run_plabic(c),
        Command::Wsc(c) => run_wsc(c),
        Command::Seed(c) => run_seed(c, seed),
        Command::Twist(c) => run_twist(c, seed),
        Command::Analysis(c) => run_analysis(c, seed, cli.jobs),
    }
}

fn run_perm(c: &PermCmd) -> Res<Output> {
    Ok(match c {
        PermCmd::Type { pi } => {
            let (k, n) = perm(pi)?.type_of();
            emit("perm type", json!({ "k": k, "n": n }))
        }
        PermCmd::Lift { pi } => {
            let f = perm(pi)?.lift();
            emit("perm lift", json!({ "window": f.window(), "length": f.length() }))
        }
        PermCmd::Length { pi, window } => {
            let f = match (pi, window) {
                (Some(p), None) => perm(p)?.lift(),
                (None, Some(w)) => w.parse::<AffinePerm>()?,
                _ => return Err("give a permutation or --window".into()),
            };
            emit("perm length", json!(f.length()))
        }
        PermCmd::Leq { iota, pi } => emit("perm leq", json!(leq_circ(&perm(iota)?, &perm(pi)?)?)),
    })
}

fn run_necklace(c: &NecklaceCmd) -> Res<Output> {
    Ok(match c {
        NecklaceCmd::Forward { pi } => emit("necklace forward", necklace_json(&Necklace::forward(&perm(pi)?))),
        NecklaceCmd::Reverse { pi, shift } => {
            emit("necklace reverse", necklace_json(&Necklace::reverse(&perm(pi)?, *shift)))
        }
        NecklaceCmd::Grassmannlike { rho, iota } => {
            let nk = Necklace::grassmannlike(&perm(rho)?, &perm(iota)?);
            nk.check_recurrence()?;
            emit("necklace grassmannlike", necklace_json(&nk))
        }
        NecklaceCmd::Toggle { necklace, at } => {
            let nk = load_necklace(necklace)?;
            position(&nk, *at)?;
            let class = nk.classify_toggle(*at);
            let out = nk.toggle(*at)?;
            emit("necklace toggle", json!({ "class": class, "necklace": necklace_json(&out) }))
        }
        NecklaceCmd::Classify { necklace, at } => {
            let nk = load_necklace(necklace)?;
            let positions: Vec<usize> = match at {
                Some(a) => vec![position(&nk, *a)?],
                None => (1..=nk.n()).collect(),
            };
            let classes: Vec<Value> =
                positions.iter().map(|&a| json!({ "position": a, "class": nk.classify_toggle(a) })).collect();
            emit("necklace classify", json!(classes))
        }
        NecklaceCmd::Dual { necklace } => emit("necklace dual", necklace_json(&load_necklace(necklace)?.dual())),
        NecklaceCmd::Units { pi, iota } => {
            let u = necklace::unit_monomial_path(&perm(pi)?, &perm(iota)?)?;
            emit("necklace units", serde_json::to_value(&u)?)
        }
    })
}

fn run_positroid(c: &PositroidCmd) -> Res<Output> {
    Ok(match c {
        PositroidCmd::Contains { pi, subset: s } => {
            let m = Positroid::new(&perm(pi)?);
            let s = subset(s)?;
            if s.len() != m.k() || s.members().iter().any(|&a| a > m.n()) {
                return Err(format!("{s} is not a {}-subset of [1,{}]", m.k(), m.n()).into());
            }
            emit("positroid contains", json!(m.contains(&s)))
        }
        PositroidCmd::Enumerate { pi } => {
            let m = Positroid::new(&perm(pi)?);
            emit("positroid enumerate", json!(strings(m.enumerate())))
        }
        PositroidCmd::Dim { pi } => emit("positroid dim", json!(dimension(&perm(pi)?))),
    })
}

fn run_plabic(c: &PlabicCmd) -> Res<Output> {
    Ok(match c {
        PlabicCmd::Gen { pi, dot } => graph_out("plabic gen", &generate_graph(&perm(pi)?), *dot),
        PlabicCmd::Trips { g } => {
            let graph = load_graph(&g.graph)?;
            let (trips, _) = graph.trip_data()?;
            let list: Vec<Value> = trips
                .iter()
                .map(|t| json!({ "source": t.source, "target": t.target, "left_faces": t.left_faces }))
                .collect();
            emit("plabic trips", json!({ "trip_perm": graph.trip_perm()?.to_string(), "trips": list }))
        }
        PlabicCmd::Faces { g, source } => {
            let graph = load_graph(&g.graph)?;
            let labels = graph.face_labels(mode(*source))?;
            let fd = graph.faces();
            let faces: Vec<Value> = fd
                .faces
                .iter()
                .map(|f| json!({ "id": f.id, "boundary": f.boundary, "label": labels[f.id].to_string() }))
                .collect();
            emit("plabic faces", json!(faces))
        }
        PlabicCmd::Quiver { g, dot } => {
            let graph = load_graph(&g.graph)?;
            let q = graph.dual_quiver();
            let labels = strings(graph.face_labels(LabelMode::Target)?);
            if *dot {
                text(q.to_dot(&labels))
            } else {
                emit("plabic quiver", json!({ "labels": labels, "quiver": q }))
            }
        }
        PlabicCmd::Relabel { g, sigma, dot } => {
            let graph = load_graph(&g.graph)?;
            graph_out("plabic relabel", &graph.relabel(&perm(sigma)?), *dot)
        }
        PlabicCmd::SquareMove { g, face, dot } => {
            let graph = load_graph(&g.graph)?;
            let f = graph.face_with_label(&subset(face)?)?;
            graph_out("plabic square-move", &graph.square_move(f)?, *dot)
        }
        PlabicCmd::Reduced { g } => {
            let graph = load_graph(&g.graph)?;
            let r = graph.reducedness_report()?;
            let ok = r.reduced();
            let mut v = serde_json::to_value(&r)?;
            v["reduced"] = json!(ok);
            check("plabic reduced", v, ok)
        }
    })
}

fn run_wsc(c: &WscCmd) -> Res<Output> {
    Ok(match c {
        WscCmd::Check { n, subsets: s } => {
            let s = subsets(s)?;
            if let Some(a) = s.iter().flat_map(|x| x.members()).find(|&a| a > *n) {
                return Err(format!("element {a} outside [1,{n}]").into());
            }
            match wsc::first_violation(&s) {
                None => check("wsc check", json!({ "weakly_separated": true }), true),
                Some((a, b)) => check(
                    "wsc check",
                    json!({ "weakly_separated": false, "violation": [a.to_string(), b.to_string()] }),
                    false,
                ),
            }
        }
        WscCmd::Complete { pi, subsets: s } => {
            let pi = perm(pi)?;
            let c = WsCollection::new(pi.n(), subsets(s)?)?;
            let full = wsc::complete_to_maximal(&c, &Positroid::new(&pi))?;
            emit("wsc complete", full.to_json())
        }
        WscCmd::TilingSvg { n, subsets: s, necklace } => {
            let c = WsCollection::new(*n, subsets(s)?)?;
            let curve = if necklace.pi.is_some() || necklace.rho.is_some() {
                Some(load_necklace(necklace)?)
            } else {
                None
            };
            text(wsc::tiling(&c).to_svg(curve.as_ref()))
        }
        WscCmd::Interior { necklace } => {
            let nk = load_necklace(necklace)?;
            emit("wsc interior", json!(strings(wsc::necklace_interior(&nk)?)))
        }
    })
}

fn run_seed(c: &SeedCmd, rng_seed: u64) -> Res<Output> {
    Ok(match c {
        SeedCmd::FromGraph { g, source, dot } => {
            let graph = load_graph(&g.graph)?;
            let s = seed::seed_from_graph(&graph, mode(*source))?;
            if *dot {
                let labels: Vec<String> = (0..s.len()).map(|i| s.label_string(i)).collect();
                text(s.quiver().to_dot(&labels))
            } else {
                emit("seed from-graph", s.to_json())
            }
        }
        SeedCmd::Mutate { g, seq } => {
            let (_, s) = graph_seed(g)?;
            let order = s.json_order();
            let internal = seq
                .iter()
                .map(|&i| order.get(i).copied().ok_or_else(|| format!("no vertex {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            emit("seed mutate", s.mutate_sequence(&internal)?.to_json())
        }
        SeedCmd::Closure { g, limit } => {
            let (_, s) = graph_seed(g)?;
            let seeds = seed::mutation_closure(&s, *limit);
            let names: Vec<String> = s.initial().iter().map(|x| format!("D{x}")).collect();
            let vars: Vec<String> = seed::cluster_variables(&seeds).iter().map(|l| l.render(&names)).collect();
            emit(
                "seed closure",
                json!({
                    "seeds": seeds.len(),
                    "complete": seeds.len() < *limit,
                    "cluster_variables": vars,
                }),
            )
        }
        SeedCmd::QuasiCheck { g, other, points } => {
            let (graph, a) = graph_seed(g)?;
            let (_, b) = graph_seed(&GraphArg { graph: other.clone() })?;
            let sampler = Sampler::new(&graph.trip_perm()?, *points, rng_seed);
            match seed::quasi_equivalent(&a, &b, &sampler) {
                Ok(cert) => check("seed quasi-check", json!({ "equivalent": true, "certificate": cert.to_json() }), true),
                Err(f) => check(
                    "seed quasi-check",
                    json!({ "equivalent": false, "reason": serde_json::to_value(&f)?, "message": f.to_string() }),
                    false,
                ),
            }
        }
        SeedCmd::QuasiSearch { g, other, depth, points } => {
            let (graph, a) = graph_seed(g)?;
            let (_, b) = graph_seed(&GraphArg { graph: other.clone() })?;
            let sampler = Sampler::new(&graph.trip_perm()?, *points, rng_seed);
            match seed::quasi_transformation_search(&a, &b, *depth, &sampler) {
                Some(path) => {
                    let mut shown = Vec::new();
                    let mut cur = a.clone();
                    // report each step in the numbering of the seed it acts on
                    for &p in &path.mutations {
                        let o = cur.json_order();
                        shown.push(o.iter().position(|&x| x == p).unwrap());
                        cur = cur.mutate(p)?;
                    }
                    check(
                        "seed quasi-search",
                        json!({ "found": true, "mutations": shown, "certificate": path.certificate.to_json() }),
                        true,
                    )
                }
                None => check("seed quasi-search", json!({ "found": false, "depth": depth }), false),
            }
        }
    })
}

fn point_json(m: &QMatrix) -> Value {
    let p: serde_json::Map<String, Value> =
        m.plueckers().iter().map(|(s, x)| (s.to_string(), json!(twist::fmt_q(x)))).collect();
    json!({ "matrix": m.to_json(), "plueckers": p })
}

fn run_twist(c: &TwistCmd, rng_seed: u64) -> Res<Output> {
    let mut rng = twist::seeded_rng(rng_seed);
    Ok(match c {
        TwistCmd::Sample { pi } => emit("twist sample", point_json(&twist::sample_point(&perm(pi)?, &mut rng))),
        TwistCmd::Boundary { g, ones } => {
            let graph = load_graph(&g.graph)?;
            let w = if *ones { EdgeWeights::ones(&graph) } else { EdgeWeights::random(&graph, &mut rng) };
            emit("twist boundary", point_json(&twist::boundary_measurement(&graph, &w)?))
        }
        TwistCmd::Right { necklace, matrix } | TwistCmd::Left { necklace, matrix } => {
            let right = matches!(c, TwistCmd::Right { .. });
            let nk = load_necklace(necklace)?;
            let m = match matrix {
                Some(s) => load_matrix(s)?,
                None => twist::sample_point_for(&nk, &mut rng),
            };
            let t = if right { twist::right_twist(&nk, &m)? } else { twist::left_twist(&nk, &m)? };
            let name = if right { "twist right" } else { "twist left" };
            emit(name, json!({ "input": m.to_json(), "output": t.to_json() }))
        }
        TwistCmd::Roundtrip { necklace, points } => {
            let nk = load_necklace(necklace)?;
            let mut reports = Vec::new();
            for _ in 0..*points {
                let m = twist::sample_point_for(&nk, &mut rng);
                reports.push(twist::twist_roundtrip_check(&nk, &m)?);
            }
            let ok = reports.iter().all(|r| r.passed());
            check("twist roundtrip", json!({ "passed": ok, "reports": reports }), ok)
        }
        TwistCmd::Diagram { g, points } => {
            let graph = load_graph(&g.graph)?;
            let mut reports = Vec::new();
            for _ in 0..*points {
                let w = EdgeWeights::random(&graph, &mut rng);
                reports.push(twist::diagram_check(&graph, &w)?);
            }
            let ok = reports.iter().all(|r| r.report.passed());
            check("twist diagram", json!({ "passed": ok, "reports": reports }), ok)
        }
    })
}

fn run_analysis(c: &AnalysisCmd, rng_seed: u64, jobs: Option<usize>) -> Res<Output> {
    Ok(match c {
        AnalysisCmd::Sep { pi } => emit("analysis sep", json!(strings(analysis::sep_set(&perm(pi)?)?))),
        AnalysisCmd::ToggleGraph { pi, dot, all } => {
            let tg = analysis::toggle_graph(&perm(pi)?)?;
            if *dot {
                text(tg.to_dot(*all))
            } else {
                emit("analysis toggle-graph", tg.to_json())
            }
        }
        AnalysisCmd::Connected { pi } => {
            let tg = analysis::toggle_graph(&perm(pi)?)?;
            emit(
                "analysis connected",
                json!({ "connected": tg.is_connected_to_bottom(), "components": tg.num_components() }),
            )
        }
        AnalysisCmd::Schubert { pi } => {
            let pi = perm(pi)?;
            emit(
                "analysis schubert",
                json!({
                    "kind": analysis::is_schubert(&pi),
                    "sep_is_whole_ideal": analysis::sep_is_whole_ideal(&pi)?,
                }),
            )
        }
        AnalysisCmd::Sweep { kind, n_max } => {
            let kind: SweepKind = kind.parse()?;
            let report = analysis::sweep(kind, *n_max, jobs, rng_seed)?;
            let ok = report.all_passed();
            check("analysis sweep", serde_json::to_value(&report)?, ok)
        }
    })
}
