use std::io::Read;
use std::path::PathBuf;

use geodesy_core::graph::{Graph, Path, VertexId};
use geodesy_core::layout::Drawing;
use geodesy_core::shortest::{all_pairs_shortest, geodetic_report};
use geodesy_core::{
    certify_philogeodetic, clustered_convex_layout, diameter_two_graph, export_svg, find_witness_pair,
    subdivided_complete, KstParams,
};
use log::info;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::manifest::Artifact;
use crate::{Command, Format};

pub struct Outcome {
    pub output: String,
    pub inputs: Vec<Artifact>,
    /// Set when the result was produced but a checked property failed.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(output: String, inputs: Vec<Artifact>) -> Self {
        Outcome { output, inputs, failure: None }
    }
}

/// A graph together with a drawing of it, as emitted by `layout-thm2`.
#[derive(Serialize)]
struct BundleOut<'a> {
    graph: &'a Graph,
    drawing: &'a Drawing,
}

#[derive(Deserialize)]
struct BundleIn {
    graph: Graph,
    drawing: Drawing,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("results serialize");
    s.push('\n');
    s
}

fn read_source(path: Option<&PathBuf>) -> Result<(String, Artifact), CliError> {
    match path.filter(|p| p.as_os_str() != "-") {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::input("E_IO", format!("cannot read {}: {e}", p.display())))?;
            let art = Artifact::new(p.display().to_string(), text.as_bytes());
            Ok((text, art))
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::input("E_IO", format!("cannot read standard input: {e}")))?;
            let art = Artifact::new("-", text.as_bytes());
            Ok((text, art))
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input("E_JSON", format!("{origin}: malformed {what}: {e}")))
}

fn origin(path: Option<&PathBuf>) -> String {
    path.filter(|p| p.as_os_str() != "-").map_or_else(|| "<stdin>".into(), |p| p.display().to_string())
}

fn is_bundle(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("graph") && o.contains_key("drawing")))
        .unwrap_or(false)
}

/// Reads a bare graph, or the graph half of a bundle.
fn load_graph(input: Option<&PathBuf>) -> Result<(Graph, Vec<Artifact>), CliError> {
    let (text, art) = read_source(input)?;
    let graph = if is_bundle(&text) {
        parse::<BundleIn>(&text, "bundle", &origin(input))?.graph
    } else {
        parse(&text, "graph", &origin(input))?
    };
    Ok((graph, vec![art]))
}

/// Reads a bundle, or a bare graph plus a separate drawing file.
fn load_drawn(input: Option<&PathBuf>, drawing: Option<&PathBuf>) -> Result<(Graph, Drawing, Vec<Artifact>), CliError> {
    let (text, art) = read_source(input)?;
    let mut inputs = vec![art];
    if is_bundle(&text) {
        if drawing.is_some() {
            return Err(CliError::input("E_PARAM", "input already contains a drawing; drop --drawing"));
        }
        let b: BundleIn = parse(&text, "bundle", &origin(input))?;
        return Ok((b.graph, b.drawing, inputs));
    }
    let graph: Graph = parse(&text, "graph", &origin(input))?;
    let Some(dpath) = drawing else {
        return Err(CliError::input("E_PARAM", "a drawing is required: pass a bundle or --drawing FILE"));
    };
    if input.is_none_or(|p| p.as_os_str() == "-") && dpath.as_os_str() == "-" {
        return Err(CliError::input("E_PARAM", "graph and drawing cannot both come from standard input"));
    }
    let (dtext, dart) = read_source(Some(dpath))?;
    inputs.push(dart);
    let d: Drawing = parse(&dtext, "drawing", &origin(Some(dpath)))?;
    Ok((graph, d, inputs))
}

fn parse_path(g: &Graph, text: &str) -> Result<Path, CliError> {
    let ids = text
        .split(',')
        .map(|s| s.trim().parse::<u32>().map(VertexId))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::input("E_PARAM", format!("path {text:?} is not a comma-separated list of vertex ids")))?;
    Path::new(g, ids).map_err(|e| CliError::input("E_PARAM", format!("path {text:?}: {e}")))
}

fn only_json(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Svg => Err(CliError::input("E_PARAM", format!("{command} has no drawing to render; use --format json"))),
    }
}

pub fn execute(command: &Command, format: Format) -> Result<Outcome, CliError> {
    match command {
        Command::GenKst { s, t } => {
            only_json(format, "gen-kst")?;
            let g = subdivided_complete(KstParams { s: *s, t: *t })?;
            info!("generated K({s},{t}): n = {}, m = {}", g.n(), g.m());
            Ok(Outcome::ok(json(&g), vec![]))
        }
        Command::GenGk { k, modulus } => {
            only_json(format, "gen-gk")?;
            let g = diameter_two_graph(*k, modulus.as_deref())?;
            info!("generated G_{k}: n = {}, m = {}", g.n(), g.m());
            Ok(Outcome::ok(json(&g), vec![]))
        }
        Command::Check { input } => {
            only_json(format, "check")?;
            let (g, inputs) = load_graph(input.as_ref())?;
            let table = all_pairs_shortest(&g)?;
            let report = geodetic_report(&table);
            #[derive(Serialize)]
            struct CheckOut<'a> {
                n: usize,
                m: usize,
                #[serde(flatten)]
                report: &'a geodesy_core::GeodeticReport,
            }
            let output = json(&CheckOut { n: g.n(), m: g.m(), report: &report });
            let failure = report.witness.as_ref().map(|w| {
                CliError::property(
                    "E_NOT_GEODETIC",
                    format!("{} and {} are both shortest {}-{} paths", w.paths[0], w.paths[1], w.u, w.v),
                )
            });
            Ok(Outcome { output, inputs, failure })
        }
        Command::LayoutThm2 { input } => {
            let (g, inputs) = load_graph(input.as_ref())?;
            let d = clustered_convex_layout(&g)?;
            info!("laid out {} vertices", g.n());
            let output = match format {
                Format::Json => json(&BundleOut { graph: &g, drawing: &d }),
                Format::Svg => export_svg(&g, &d, None)?,
            };
            Ok(Outcome::ok(output, inputs))
        }
        Command::Analyze { input, drawing, require_philogeodetic } => {
            let (g, d, inputs) = load_drawn(input.as_ref(), drawing.as_ref())?;
            let table = all_pairs_shortest(&g)?;
            let report = certify_philogeodetic(&g, &d, &table)?;
            info!("{} pairs, {} pruned, max meets {}", report.pairs, report.pruned, report.max_meets);
            let output = match format {
                Format::Json => json(&report),
                Format::Svg => export_svg(&g, &d, report.worst_pairs.first())?,
            };
            let failure = (*require_philogeodetic && !report.philogeodetic).then(|| {
                CliError::property(
                    "E_NOT_PHILOGEODETIC",
                    format!("{} pair(s) of shortest paths meet {} times", report.worst_pair_count, report.max_meets),
                )
            });
            Ok(Outcome { output, inputs, failure })
        }
        Command::Witness { input, drawing } => {
            let (g, d, inputs) = load_drawn(input.as_ref(), drawing.as_ref())?;
            let found = find_witness_pair(&g, &d)?;
            let output = match (format, &found) {
                (Format::Json, _) => json(&found),
                (Format::Svg, Some(w)) => export_svg(&g, &d, Some(&w.paths))?,
                (Format::Svg, None) => export_svg(&g, &d, None)?,
            };
            let failure =
                found.is_none().then(|| CliError::property("E_NO_WITNESS", "no anchor pair has a 4-cycle in its crossing graph"));
            Ok(Outcome { output, inputs, failure })
        }
        // always SVG, whatever --format says
        Command::ExportSvg { input, drawing, highlight, witness } => {
            let (g, d, inputs) = load_drawn(input.as_ref(), drawing.as_ref())?;
            let pair = if *witness {
                let w = find_witness_pair(&g, &d)?
                    .ok_or_else(|| CliError::property("E_NO_WITNESS", "no witness pair to highlight"))?;
                Some(w.paths)
            } else {
                match highlight.as_slice() {
                    [] => None,
                    [p, q] => Some([parse_path(&g, p)?, parse_path(&g, q)?]),
                    other => {
                        return Err(CliError::input(
                            "E_PARAM",
                            format!("--highlight needs exactly two paths, got {}", other.len()),
                        ))
                    }
                }
            };
            if let Some([p, q]) = &pair {
                if p == q || *p == q.reversed() {
                    return Err(CliError::input("E_PARAM", "highlighted paths must differ"));
                }
            }
            Ok(Outcome::ok(export_svg(&g, &d, pair.as_ref())?, inputs))
        }
    }
}
