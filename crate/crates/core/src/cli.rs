//! The `farey` command line.
//!
//! Exit codes: 0 on success, 1 when a check comes out negative (the output
//! then carries a witness), 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amalgam::{amalgamate_in_k, free_amalgam, Glue};
use crate::decomp::{build_g_tree, independent_in};
use crate::error::Error;
use crate::farey::{build_level, level_counts};
use crate::graph::dot::{to_dot, DotAttributes};
use crate::graph::{Graph, VertexId};
use crate::kclass::{is_in_k, is_strong, Strength};
use crate::lprime::{
    enumerate_cycle_types, enumerate_cycle_types_at, eval_d, eval_p_c, eval_y, p_delta_witnesses, Bounds,
    CycleCatalog, EpsilonDescriptor, Fingerprinter, QfFingerprint,
};
use crate::model::{build_generic, build_tree_model, classification_mismatch, t_compliance, ExtensionWeights, ModelSpec};

pub const SCHEMA: &str = "farey-lab/1";

/// Environment variable naming the cycle catalog cache file.
pub const CACHE_ENV: &str = "FAREY_LAB_CACHE";

#[derive(Parser, Debug)]
#[command(name = "farey", version, about = "Farey graph levels, peelings, block trees and cycle predicates")]
pub struct Cli {
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Pred {
    Pc,
    Pdelta,
    D,
    Y,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the coloured Farey level F_n.
    Build {
        #[arg(long)]
        level: u32,
        /// Restrict to the vertices born by this level.
        #[arg(long)]
        view: Option<u32>,
    },
    /// Decide membership in 𝒦.
    CheckK {
        #[arg(long)]
        input: PathBuf,
    },
    /// Peel a graph down to a base set.
    Peel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        base: Vec<VertexId>,
    },
    /// Decide whether a vertex set is strong in the graph.
    Strong {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Vec<VertexId>,
    },
    /// Amalgamate two graphs over a common subgraph.
    Amalgamate {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long, value_delimiter = ',')]
        glue_b: Vec<VertexId>,
        #[arg(long, value_delimiter = ',')]
        glue_c: Vec<VertexId>,
        /// The free amalgam, without keeping the result in 𝒦.
        #[arg(long)]
        free: bool,
    },
    /// Glue Farey levels along a forest.
    TreeModel {
        #[arg(long)]
        input: PathBuf,
    },
    /// Grow a graph by seeded strong one-point extensions.
    Generic {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0.2)]
        isolated: f64,
        #[arg(long, default_value_t = 0.4)]
        pendant: f64,
        #[arg(long, default_value_t = 0.4)]
        apex: f64,
    },
    /// The block tree of edge classes and cut vertices.
    Blocks {
        #[arg(long)]
        input: PathBuf,
    },
    /// Algebraic closure of a vertex set.
    Acl {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<VertexId>,
    },
    /// The gate of a vertex towards the hull of a set.
    Gate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: VertexId,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<VertexId>,
    },
    /// Whether B and C are independent over A.
    Indep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        a: Vec<VertexId>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<VertexId>,
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<VertexId>,
    },
    /// The catalog of minimal triangulated cycle types.
    Cycles {
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// Search this Farey level instead of the saturating one (bypasses the cache).
        #[arg(long)]
        level: Option<u32>,
    },
    /// Evaluate one predicate.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        pred: Pred,
        #[arg(long)]
        x: VertexId,
        #[arg(long)]
        y: VertexId,
        #[arg(long)]
        z: Option<VertexId>,
        /// Cycle type name, for `pc`.
        #[arg(long = "type")]
        ty: Option<String>,
        /// Comma-separated type names, for `pdelta`.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        d1: Option<String>,
        #[arg(long)]
        d2: Option<String>,
        #[arg(long)]
        d3: Option<String>,
        /// Farey level, for `d` and `y`.
        #[arg(long)]
        level: Option<u32>,
        /// List every witness instead of the first.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
    },
    /// Bounded quantifier-free fingerprints of vertices over a tuple.
    Fingerprint {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        over: Vec<VertexId>,
        /// Defaults to every vertex.
        #[arg(long, value_delimiter = ',')]
        subjects: Option<Vec<VertexId>>,
        #[arg(long, default_value_t = 8)]
        max_cycle_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_delta_len: usize,
        #[arg(long, default_value_t = 4)]
        max_epsilon_len: usize,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Vertex, edge and blue-edge counts of Farey levels.
    Counts {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        from: Option<u32>,
    },
    /// Re-emit a graph file.
    Export {
        #[arg(long)]
        input: PathBuf,
    },
}

enum Payload {
    Json(Value),
    Text(String),
}

struct Outcome {
    payload: Payload,
    negative: bool,
}

impl Outcome {
    fn json<T: Serialize>(v: &T) -> Result<Self, String> {
        Ok(Outcome {
            payload: Payload::Json(envelope(v)?),
            negative: false,
        })
    }

    fn negative_if(mut self, neg: bool) -> Self {
        self.negative = neg;
        self
    }
}

fn envelope<T: Serialize>(v: &T) -> Result<Value, String> {
    let v = serde_json::to_value(v).map_err(|e| e.to_string())?;
    Ok(match v {
        Value::Object(mut m) => {
            m.insert("schema".into(), json!(SCHEMA));
            Value::Object(m)
        }
        other => json!({ "schema": SCHEMA, "result": other }),
    })
}

fn lib(e: Error) -> String {
    e.to_string()
}

fn read_text(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    read_json(path)
}

fn graph_dot(g: &Graph) -> Payload {
    Payload::Text(to_dot(g, "G", &DotAttributes::default()))
}

/// Loads the catalog from the cache file when it covers `max_vertices`,
/// otherwise computes it and refreshes the cache.
fn load_catalog(max_vertices: usize, warn: &mut dyn Write) -> Result<CycleCatalog, String> {
    let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    if let Some(path) = &cache {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(mut cat) = serde_json::from_str::<CycleCatalog>(&text) {
                if cat.max_vertices >= max_vertices {
                    cat.types.retain(|t| t.graph.vertex_count() <= max_vertices);
                    cat.max_vertices = max_vertices;
                    cat.search_level = max_vertices.saturating_sub(2).max(1) as u32;
                    return Ok(cat);
                }
            }
        }
    }
    let cat = enumerate_cycle_types(max_vertices).map_err(lib)?;
    if let Some(path) = &cache {
        let text = serde_json::to_string(&cat).map_err(|e| e.to_string())?;
        if let Err(e) = fs::write(path, text) {
            let _ = writeln!(warn, "warning: could not write {}: {e}", path.display());
        }
    }
    Ok(cat)
}

fn strength_json(s: &Strength) -> Value {
    match s {
        Strength::Strong(p) => json!({ "strong": true, "peel": p }),
        Strength::NotStrong { stuck } => json!({ "strong": false, "stuck": stuck }),
    }
}

fn execute(cli: Cli, warn: &mut dyn Write) -> Result<Outcome, String> {
    let dot = cli.format == Format::Dot;
    let no_dot = |verb: &str| -> Result<(), String> {
        if dot {
            Err(format!("--format dot is not available for {verb}"))
        } else {
            Ok(())
        }
    };
    match cli.command {
        Command::Build { level, view } => {
            let mut f = build_level(level).map_err(lib)?;
            if let Some(m) = view {
                f = f.union_limit_view(m).map_err(lib)?;
            }
            if dot {
                return Ok(Outcome {
                    payload: Payload::Text(f.to_dot()),
                    negative: false,
                });
            }
            Outcome::json(&f.to_json())
        }
        Command::CheckK { input } => {
            no_dot("check-k")?;
            let g = read_graph(&input)?;
            let r = is_in_k(&g);
            Ok(Outcome::json(&r)?.negative_if(!r.member))
        }
        Command::Peel { input, base } | Command::Strong { input, set: base } => {
            no_dot("peel and strong")?;
            let g = read_graph(&input)?;
            let s = is_strong(&base, &g).map_err(lib)?;
            let mut v = strength_json(&s);
            v["base"] = json!(base);
            Ok(Outcome::json(&v)?.negative_if(!s.is_strong()))
        }
        Command::Amalgamate {
            b,
            c,
            glue_b,
            glue_c,
            free,
        } => {
            let (gb, gc) = (read_graph(&b)?, read_graph(&c)?);
            let glue = Glue::new(glue_b, glue_c);
            let r = if free {
                free_amalgam(&gb, &gc, &glue)
            } else {
                amalgamate_in_k(&gb, &gc, &glue)
            }
            .map_err(lib)?;
            if dot {
                return Ok(Outcome {
                    payload: graph_dot(&r.graph),
                    negative: false,
                });
            }
            Outcome::json(&r)
        }
        Command::TreeModel { input } => {
            let spec: ModelSpec = read_json(&input)?;
            let m = build_tree_model(&spec).map_err(lib)?;
            if dot {
                return Ok(Outcome {
                    payload: graph_dot(&m.graph),
                    negative: false,
                });
            }
            let mismatch = classification_mismatch(&m);
            let mut v = serde_json::to_value(&m).map_err(|e| e.to_string())?;
            v["classification_mismatch"] = json!(mismatch);
            Ok(Outcome::json(&v)?.negative_if(mismatch.is_some()))
        }
        Command::Generic {
            seed,
            steps,
            isolated,
            pendant,
            apex,
        } => {
            let weights = ExtensionWeights { isolated, pendant, apex };
            let (g, log) = build_generic(seed, steps, weights).map_err(lib)?;
            if dot {
                return Ok(Outcome {
                    payload: graph_dot(&g),
                    negative: false,
                });
            }
            let report = t_compliance(&g);
            Outcome::json(&json!({
                "seed": seed,
                "graph": g,
                "extensions": log,
                "compliance": report,
            }))
        }
        Command::Blocks { input } => {
            let g = read_graph(&input)?;
            let t = build_g_tree(&g);
            if dot {
                return Ok(Outcome {
                    payload: Payload::Text(t.to_dot()),
                    negative: false,
                });
            }
            Outcome::json(&json!({
                "tree": t,
                "cut_vertices": t.cut_vertices(),
                "is_forest": t.is_forest(),
            }))
        }
        Command::Acl { input, set } => {
            no_dot("acl")?;
            let g = read_graph(&input)?;
            let h = build_g_tree(&g).hull(&set).map_err(lib)?;
            Outcome::json(&json!({ "set": set, "acl": h.vertex_set, "tree_nodes": h.tree_nodes }))
        }
        Command::Gate { input, x, set } => {
            no_dot("gate")?;
            let g = read_graph(&input)?;
            let gate = build_g_tree(&g).gate(x, &set).map_err(lib)?;
            Outcome::json(&json!({ "x": x, "set": set, "gate": gate }))
        }
        Command::Indep { input, a, b, c } => {
            no_dot("indep")?;
            let g = read_graph(&input)?;
            let tree = build_g_tree(&g);
            let r = independent_in(&g, &tree, &b, &a, &c).map_err(lib)?;
            Ok(Outcome::json(&r)?.negative_if(!r.independent))
        }
        Command::Cycles { max_vertices, level } => {
            no_dot("cycles")?;
            let cat = match level {
                Some(l) => enumerate_cycle_types_at(max_vertices, l).map_err(lib)?,
                None => load_catalog(max_vertices, warn)?,
            };
            let by_span: Vec<Value> = cat
                .by_span()
                .into_iter()
                .map(|(span, ts)| json!({ "span": span, "types": ts.iter().map(|t| &t.name).collect::<Vec<_>>() }))
                .collect();
            let mut v = serde_json::to_value(&cat).map_err(|e| e.to_string())?;
            v["by_span"] = json!(by_span);
            Outcome::json(&v)
        }
        Command::Eval {
            input,
            pred,
            x,
            y,
            z,
            ty,
            delta,
            d1,
            d2,
            d3,
            level,
            all,
            max_vertices,
        } => {
            no_dot("eval")?;
            let g = read_graph(&input)?;
            let need = |o: Option<String>, flag: &str| o.ok_or_else(|| format!("--pred needs --{flag}"));
            let v = match pred {
                Pred::Pc => {
                    let cat = load_catalog(max_vertices, warn)?;
                    let t = cat.get(&need(ty, "type")?).map_err(lib)?.clone();
                    let copy = eval_p_c(&g, &t, x, y).map_err(lib)?;
                    json!({ "pred": "pc", "type": t.name, "holds": copy.is_some(), "copy": copy })
                }
                Pred::Pdelta => {
                    let cat = load_catalog(max_vertices, warn)?;
                    let d = cat.delta(&need(delta, "delta")?).map_err(lib)?;
                    let ws = p_delta_witnesses(&g, &d, x, y, if all { None } else { Some(1) }).map_err(lib)?;
                    let mut v = json!({ "pred": "pdelta", "delta": d, "holds": !ws.is_empty() });
                    if all {
                        v["witnesses"] = json!(ws);
                    } else if let Some(w) = ws.first() {
                        v["connecting_points"] = json!(w.connecting_points);
                        v["copies"] = json!(w.copies);
                    }
                    v
                }
                Pred::D => {
                    let z = z.ok_or("--pred d needs --z")?;
                    let level = level.ok_or("--pred d needs --level")?;
                    let ext = eval_d(&g, level, x, y, z).map_err(lib)?;
                    json!({ "pred": "d", "level": level, "holds": !ext.is_empty(), "extensions": ext })
                }
                Pred::Y => {
                    let z = z.ok_or("--pred y needs --z")?;
                    let level = level.ok_or("--pred y needs --level")?;
                    let cat = load_catalog(max_vertices, warn)?;
                    let parse = |s: Option<String>| cat.delta(s.as_deref().unwrap_or(""));
                    let e = EpsilonDescriptor {
                        d1: parse(d1).map_err(lib)?,
                        d2: parse(d2).map_err(lib)?,
                        d3: parse(d3).map_err(lib)?,
                        level,
                    };
                    let w = eval_y(&g, &e, x, y, z).map_err(lib)?;
                    json!({ "pred": "y", "epsilon": e, "holds": w.is_some(), "witness": w })
                }
            };
            Outcome::json(&v)
        }
        Command::Fingerprint {
            input,
            over,
            subjects,
            max_cycle_vertices,
            max_delta_len,
            max_epsilon_len,
            max_level,
            jobs,
        } => {
            no_dot("fingerprint")?;
            let g = read_graph(&input)?;
            let bounds = Bounds {
                max_cycle_vertices,
                max_delta_len,
                max_epsilon_len,
                max_level,
            };
            bounds.validate().map_err(lib)?;
            let subjects: Vec<VertexId> = subjects.unwrap_or_else(|| g.vertices().collect());
            for &b in subjects.iter().chain(&over) {
                if !g.contains_vertex(b) {
                    return Err(lib(Error::UnknownVertex {
                        vertex: b,
                        vertex_count: g.vertex_count(),
                    }));
                }
            }
            let cat = load_catalog(max_cycle_vertices, warn)?;
            let jobs = jobs.unwrap_or(1).max(1);
            let chunk = subjects.len().div_ceil(jobs).max(1);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| e.to_string())?;
            let fps: Vec<QfFingerprint> = pool.install(|| {
                subjects
                    .par_chunks(chunk)
                    .map(|part| {
                        let mut f = Fingerprinter::new(&g, &over, bounds, &cat)?;
                        part.iter().map(|&b| f.fingerprint(b)).collect::<Result<Vec<_>, Error>>()
                    })
                    .collect::<Result<Vec<Vec<_>>, Error>>()
            })
            .map_err(lib)?
            .into_iter()
            .flatten()
            .collect();
            let mut classes: Vec<Vec<VertexId>> = Vec::new();
            let mut reps: Vec<&QfFingerprint> = Vec::new();
            for (i, fp) in fps.iter().enumerate() {
                match reps.iter().position(|r| *r == fp) {
                    Some(k) => classes[k].push(subjects[i]),
                    None => {
                        reps.push(fp);
                        classes.push(vec![subjects[i]]);
                    }
                }
            }
            let rows: Vec<Value> = subjects
                .iter()
                .zip(&fps)
                .map(|(b, fp)| json!({ "subject": b, "subject_atoms": fp.subject, "pair_atoms": fp.pairs }))
                .collect();
            Outcome::json(&json!({
                "over": over,
                "bounds": bounds,
                "fingerprints": rows,
                "classes": classes,
            }))
        }
        Command::Counts { level, from } => {
            no_dot("counts")?;
            let from = from.unwrap_or(level);
            if from > level {
                return Err(format!("--from {from} is above --level {level}"));
            }
            let rows = (from..=level)
                .map(|n| {
                    level_counts(n).map(|c| {
                        json!({ "level": n, "vertices": c.vertices, "edges": c.edges, "blue_edges": c.blue_edges })
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(lib)?;
            Outcome::json(&json!({ "counts": rows }))
        }
        Command::Export { input } => {
            let g = read_graph(&input)?;
            if dot {
                return Ok(Outcome {
                    payload: graph_dot(&g),
                    negative: false,
                });
            }
            Outcome::json(&g)
        }
    }
}

/// Runs the command line on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let output = cli.output.clone();
    let outcome = match execute(cli, err) {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let mut text = match outcome.payload {
        Payload::Json(v) => serde_json::to_string_pretty(&v).expect("values always serialise"),
        Payload::Text(t) => t,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let written = match &output {
        Some(p) => fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return 2;
    }
    i32::from(outcome.negative)
}
