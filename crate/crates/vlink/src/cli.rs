//! Command-line interface. Every subcommand prints text by default and a
//! JSON object tagged with `"schema": "vlink.<command>/1"` under `--json`.
//!
//! Exit status: 0 success, 1 invalid input, 2 inadmissible weighting or
//! blocked move, 3 search cap exceeded, 4 oracle mismatch or a failed
//! property.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use vlink_core::carter::{genus, RibbonGraph};
use vlink_core::cover::{build_double_cover, preferred_lift, verify_lift_oracle};
use vlink_core::invariants::{
    ascending_number_by_changes, ascending_witness, bridge_count, min_genus_subdiagram,
    ASCENDING_ORACLE_CAP, SUBDIAGRAM_CAP,
};
use vlink_core::moves::MoveContext;
use vlink_core::parity::{admissible_weightings, project, Colouring, Weighting};
use vlink_core::{parse, Diagram, Error};

use crate::harness::{fuzz, FuzzConfig};
use crate::random::random_diagram;
use crate::weights::{parse_weighting, weighting_edges};

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "vlink",
    version,
    about = "Carter genus, curve parities and Reidemeister moves for virtual link diagrams"
)]
pub struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A Gauss code given inline or read from a file.
#[derive(Debug, Args)]
pub struct CodeArg {
    /// Signed Gauss code, components separated by ';' (e.g. "O1+U2+;U1+O2+").
    #[arg(required_unless_present = "input", allow_hyphen_values = true)]
    pub code: Option<String>,
    /// Read the code from a file instead.
    #[arg(long, short, conflicts_with = "code")]
    pub input: Option<PathBuf>,
}

/// A colouring: weighting file plus base colours.
#[derive(Debug, Args)]
pub struct ColourArgs {
    /// JSON list of weight-1 edges, [{"component":k,"position":i}, ...]. Default: no edges.
    #[arg(long, short)]
    pub weights: Option<PathBuf>,
    /// Base colour per component as a bit string (e.g. "01"). Default: all 0.
    #[arg(long, short)]
    pub base: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a code and print it normalized.
    Parse(CodeArg),
    /// Carter surface genus, per surface component and in total.
    Genus(CodeArg),
    /// Faces of the Carter surface as sequences of half-edges.
    Faces(CodeArg),
    /// Basis of the space of admissible weightings.
    Weightings(CodeArg),
    /// Parity of every crossing under a colouring.
    Parity {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        colour: ColourArgs,
    },
    /// Delete the odd crossings.
    Project {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        colour: ColourArgs,
    },
    /// Statistics of the double cover and, given base colours, the lift.
    Cover {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        colour: ColourArgs,
    },
    /// Compare the lift through the double cover with the projection.
    Oracle {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        colour: ColourArgs,
        /// Also require both to equal this code up to relabelling.
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<String>,
    },
    /// Reidemeister moves available to the coloured diagram.
    Moves {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        colour: ColourArgs,
    },
    /// Random walk through moves checking the parity axioms and genus rules.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
        #[arg(long, default_value_t = 2)]
        max_components: usize,
    },
    /// Bridge count of the diagram.
    Bridge(CodeArg),
    /// Least warping degree over traversal orders and basepoints.
    Ascending {
        #[command(flatten)]
        code: CodeArg,
        /// Cross-check by brute force over crossing changes.
        #[arg(long)]
        oracle: bool,
        /// Largest diagram the brute-force check accepts.
        #[arg(long, default_value_t = ASCENDING_ORACLE_CAP)]
        cap: usize,
    },
    /// Subdiagrams of least Carter genus.
    Minsub {
        #[command(flatten)]
        code: CodeArg,
        /// List every inclusion-minimal witness, not just the first.
        #[arg(long)]
        all_witnesses: bool,
        #[arg(long, default_value_t = SUBDIAGRAM_CAP)]
        cap: usize,
    },
    /// A seeded random diagram.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_crossings: usize,
        #[arg(long, default_value_t = 1)]
        max_components: usize,
    },
}

/// What a command produced.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub status: i32,
}

#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::OddComponent(_) | Error::Inadmissible | Error::CurveBlocksMove => {
                EXIT_INADMISSIBLE
            }
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        status: EXIT_INVALID,
        message: message.into(),
    }
}

fn ok(text: String, json: Value) -> Result<Output, Failure> {
    Ok(Output {
        text,
        json,
        status: 0,
    })
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn diagram(arg: &CodeArg) -> Result<Diagram, Failure> {
    let text = match (&arg.code, &arg.input) {
        (Some(code), _) => code.clone(),
        (None, Some(path)) => read(path)?,
        (None, None) => return Err(invalid("no code given")),
    };
    Ok(parse(text.trim())?)
}

fn weighting(d: &Diagram, args: &ColourArgs) -> Result<Weighting, Failure> {
    match &args.weights {
        Some(path) => parse_weighting(d, &read(path)?).map_err(|e| invalid(e.to_string())),
        None => Ok(Weighting::zero(d)),
    }
}

fn base_colours(d: &Diagram, base: Option<&str>) -> Result<Vec<bool>, Failure> {
    let Some(base) = base else {
        return Ok(vec![false; d.component_count()]);
    };
    let colours: Vec<bool> = base
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(invalid(format!("base colours must be 0 or 1, got {c:?}"))),
        })
        .collect::<Result<_, _>>()?;
    if colours.len() != d.component_count() {
        return Err(invalid(format!(
            "{} base colours given for {} components",
            colours.len(),
            d.component_count()
        )));
    }
    Ok(colours)
}

/// Parses the colouring and insists on admissibility.
fn colouring(d: &Diagram, args: &ColourArgs) -> Result<Colouring, Failure> {
    coloured_by(d, weighting(d, args)?, args.base.as_deref())
}

fn coloured_by(d: &Diagram, w: Weighting, base: Option<&str>) -> Result<Colouring, Failure> {
    let col = Colouring::new(d, w, base_colours(d, base)?)?;
    MoveContext::new(d, &col)?;
    Ok(col)
}

fn schema(command: &str) -> String {
    format!("vlink.{command}/1")
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Parse(arg) => {
            let d = diagram(arg)?;
            let text = format!(
                "{}\ncanonical {}\ncrossings {}, components {}\n",
                d,
                d.canonical(),
                d.crossing_count(),
                d.component_count()
            );
            ok(
                text,
                json!({
                    "schema": schema("parse"),
                    "code": d.serialize(),
                    "canonical": d.canonical().serialize(),
                    "crossings": d.crossing_count(),
                    "components": d.component_count(),
                }),
            )
        }
        Command::Genus(arg) => {
            let d = diagram(arg)?;
            let g = genus(&d);
            let mut text = String::new();
            let mut pieces = Vec::new();
            for c in &g.components {
                let links: Vec<String> = c.link_components.iter().map(|k| k.to_string()).collect();
                let _ = writeln!(
                    text,
                    "surface of components {}: V {} E {} F {}, genus {}",
                    links.join(","),
                    c.vertices,
                    c.edges,
                    c.faces,
                    c.genus
                );
                pieces.push(json!({
                    "link_components": c.link_components,
                    "vertices": c.vertices,
                    "edges": c.edges,
                    "faces": c.faces,
                    "genus": c.genus,
                }));
            }
            let _ = writeln!(text, "total genus {}", g.total);
            ok(
                text,
                json!({ "schema": schema("genus"), "surfaces": pieces, "total": g.total }),
            )
        }
        Command::Faces(arg) => {
            let d = diagram(arg)?;
            let faces = RibbonGraph::new(&d).faces();
            let rows: Vec<Vec<String>> = faces
                .iter()
                .map(|f| f.half_edges.iter().map(|h| h.to_string()).collect())
                .collect();
            let text = rows.iter().map(|r| r.join(" ") + "\n").collect();
            ok(
                text,
                json!({ "schema": schema("faces"), "count": rows.len(), "faces": rows }),
            )
        }
        Command::Weightings(arg) => {
            let d = diagram(arg)?;
            let space = admissible_weightings(&d);
            let mut text = format!("dimension {}\n", space.dimension());
            let basis: Vec<Value> = space
                .basis()
                .iter()
                .map(|w| {
                    let edges: Vec<String> = w.support().iter().map(|e| e.to_string()).collect();
                    let _ = writeln!(text, "{}", edges.join(" "));
                    json!(weighting_edges(w))
                })
                .collect();
            ok(
                text,
                json!({ "schema": schema("weightings"), "dimension": space.dimension(), "basis": basis }),
            )
        }
        Command::Parity { code, colour } => {
            let d = diagram(code)?;
            let col = colouring(&d, colour)?;
            let mut text = String::new();
            let mut map = serde_json::Map::new();
            for (c, p) in col.parities().iter() {
                let _ = writeln!(text, "{c} {p}");
                map.insert(c.to_string(), json!(p.is_odd()));
            }
            ok(text, json!({ "schema": schema("parity"), "odd": map }))
        }
        Command::Project { code, colour } => {
            let d = diagram(code)?;
            let col = colouring(&d, colour)?;
            let p = project(&d, &col);
            ok(
                format!("{p}\n"),
                json!({ "schema": schema("project"), "code": p.serialize(), "crossings": p.crossing_count() }),
            )
        }
        Command::Cover { code, colour } => {
            let d = diagram(code)?;
            let w = weighting(&d, colour)?;
            let stats = build_double_cover(&d, &w)?.stats();
            let base = colour.base.as_deref();
            let mut text = format!(
                "vertices {} edges {} faces {} components {} euler {}\n",
                stats.vertices,
                stats.edges,
                stats.faces,
                stats.components,
                stats.euler_characteristic
            );
            let mut out = json!({
                "schema": schema("cover"),
                "vertices": stats.vertices,
                "edges": stats.edges,
                "faces": stats.faces,
                "components": stats.components,
                "euler_characteristic": stats.euler_characteristic,
            });
            if base.is_some() {
                let col = coloured_by(&d, w, base)?;
                let lift = preferred_lift(&d, &col)?;
                let _ = writeln!(text, "lift {lift}");
                out["lift"] = json!(lift.serialize());
            }
            ok(text, out)
        }
        Command::Oracle {
            code,
            colour,
            expect,
        } => {
            let d = diagram(code)?;
            let col = colouring(&d, colour)?;
            let r = verify_lift_oracle(&d, &col)?;
            let expected = expect
                .as_deref()
                .map(parse)
                .transpose()?
                .map(|e| e.canonical());
            let agrees = r.agrees() && expected.as_ref().is_none_or(|e| *e == r.lift);
            let mut text = format!(
                "lift {} (genus {})\nprojection {} (genus {})\n",
                r.lift, r.lift_genus, r.projection, r.projection_genus
            );
            if let Some(e) = &expected {
                let _ = writeln!(text, "expected {e}");
            }
            text.push_str(if agrees { "agree\n" } else { "MISMATCH\n" });
            let json = json!({
                "schema": schema("oracle"),
                "lift": r.lift.serialize(),
                "projection": r.projection.serialize(),
                "lift_genus": r.lift_genus,
                "projection_genus": r.projection_genus,
                "expected": expected.map(|e| e.serialize()),
                "agrees": agrees,
            });
            Ok(Output {
                text,
                json,
                status: if agrees { 0 } else { EXIT_MISMATCH },
            })
        }
        Command::Moves { code, colour } => {
            let d = diagram(code)?;
            let col = colouring(&d, colour)?;
            let moves = MoveContext::new(&d, &col)?.moves();
            let names: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
            let text = names.iter().map(|m| m.clone() + "\n").collect();
            ok(
                text,
                json!({ "schema": schema("moves"), "count": names.len(), "moves": names }),
            )
        }
        Command::Fuzz {
            seed,
            steps,
            max_crossings,
            max_components,
        } => {
            let cfg = FuzzConfig {
                max_components: (*max_components).max(1),
                ..FuzzConfig::new(*seed, *steps, *max_crossings)
            };
            let r = fuzz(cfg);
            let p = &r.projection;
            let clean = r.axioms_clean() && r.genus_violations() == 0 && p.fails == 0;
            let text = format!(
                "steps {} restarts {}\n\
                 axiom violations {}\nmove errors {}\noutside disagreements {}\nlift mismatches {}\n\
                 genus violations {}\n\
                 even R2 projected genus: {} applicable, {} hold, {} fail ({} with the surface preserved, {} confirmed)\n\
                 {}\n",
                r.steps,
                r.restarts,
                r.axiom_violations,
                r.move_errors,
                r.outside_disagreements,
                r.lift_mismatches,
                r.genus_violations(),
                p.applicable,
                p.holds,
                p.fails,
                p.fails_surface_preserved,
                p.fails_confirmed,
                if clean { "clean" } else { "FAILURES" }
            );
            let mut json = serde_json::to_value(&r).expect("reports serialize");
            json["schema"] = json!(schema("fuzz"));
            json["clean"] = json!(clean);
            Ok(Output {
                text,
                json,
                status: if clean { 0 } else { EXIT_MISMATCH },
            })
        }
        Command::Bridge(arg) => {
            let b = bridge_count(&diagram(arg)?);
            ok(
                format!("{b}\n"),
                json!({ "schema": schema("bridge"), "bridge_count": b }),
            )
        }
        Command::Ascending { code, oracle, cap } => {
            let d = diagram(code)?;
            let (a, ctx) = ascending_witness(&d);
            let mut text = format!(
                "{a}\norder {:?} basepoints {:?}\n",
                ctx.order, ctx.basepoints
            );
            let mut json = json!({
                "schema": schema("ascending"),
                "ascending_number": a,
                "order": ctx.order,
                "basepoints": ctx.basepoints,
            });
            let mut status = 0;
            if *oracle {
                let b = ascending_number_by_changes(&d, *cap)?;
                let _ = writeln!(text, "oracle {b}");
                json["oracle"] = json!(b);
                if a != b {
                    text.push_str("MISMATCH\n");
                    status = EXIT_MISMATCH;
                }
            }
            Ok(Output { text, json, status })
        }
        Command::Minsub {
            code,
            all_witnesses,
            cap,
        } => {
            let d = diagram(code)?;
            let r = min_genus_subdiagram(&d, *cap)?;
            let shown = if *all_witnesses {
                &r.witnesses[..]
            } else {
                &r.witnesses[..1]
            };
            let sets: Vec<Vec<u32>> = shown
                .iter()
                .map(|w| w.iter().map(|c| c.0).collect())
                .collect();
            let mut text = format!("{}\n", r.minimum);
            for s in &sets {
                let labels: Vec<String> = s.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(text, "virtualize {{{}}}", labels.join(","));
            }
            ok(
                text,
                json!({
                    "schema": schema("minsub"),
                    "minimum": r.minimum,
                    "witness_count": r.witnesses.len(),
                    "witnesses": sets,
                }),
            )
        }
        Command::Random {
            seed,
            max_crossings,
            max_components,
        } => {
            let d = random_diagram(*seed, *max_crossings, *max_components);
            ok(
                format!("{d}\n"),
                json!({ "schema": schema("random"), "code": d.serialize() }),
            )
        }
    }
}

/// Runs the command and writes its output; returns the exit status.
pub fn main_with(cli: &Cli, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32 {
    match run(cli) {
        Ok(o) => {
            let written = if cli.json {
                writeln!(out, "{}", o.json)
            } else {
                write!(out, "{}", o.text)
            };
            if let Err(e) = written {
                let _ = writeln!(err, "vlink: {e}");
                return EXIT_INVALID;
            }
            o.status
        }
        Err(f) => {
            let _ = writeln!(err, "vlink: {}", f.message);
            f.status
        }
    }
}
