//! End-to-end acceptance run. Each criterion prints one PASS or FAIL line;
//! the process exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path as FsPath;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use geodesy_core::bounds::{crossing_lemma_bound, incidence_counts, incidence_inequality_holds, incidence_lemma_applies};
use geodesy_core::generators::KstStructure;
use geodesy_core::graph::{Path, VertexId};
use geodesy_core::layout::central_segment_in;
use geodesy_core::meets::MeetIndex;
use geodesy_core::shortest::{all_pairs_shortest, geodetic_report, unique_shortest_path};
use geodesy_core::{
    bipartite_incidence_subgraph, certify_philogeodetic, clustered_convex_layout, diameter_two_graph, find_witness_pair,
    segment_intersections, subdivided_complete, validate_drawing, Graph, KstParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "../../core/tests/support/mod.rs"]
mod support;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn kst(s: u32, t: u32) -> Graph {
    subdivided_complete(KstParams { s, t }).expect("valid parameters")
}

fn counts() -> Outcome {
    let g = kst(8, 2);
    ensure!((g.n(), g.m()) == (64, 84), "K(8,2) has n={}, m={}", g.n(), g.m());
    for k in 2..=5u32 {
        let gk = diameter_two_graph(k, None).map_err(|e| e.to_string())?;
        let b = bipartite_incidence_subgraph(&gk).map_err(|e| e.to_string())?;
        let k = k as usize;
        ensure!(gk.n() == 2 * k * k + k, "G_{k} has {} vertices", gk.n());
        ensure!(b.m() == k * k * (k + 1), "G_{k} incidence subgraph has {} edges", b.m());
    }
    Ok("K(8,2) n=64 m=84; G_k n=2k^2+k, incidences k^2(k+1) for k=2..5".into())
}

/// Checks a non-geodetic witness against the graph directly: two distinct
/// walks between the same ends, of the same length, which is the distance.
fn verify_witness(g: &Graph, u: VertexId, v: VertexId, paths: &[Path; 2]) -> Result<(), String> {
    let (count, len) = support::brute_force_count(g, u, v);
    ensure!(paths[0] != paths[1], "witness paths coincide");
    for p in paths {
        ensure!(p.first() == u && p.last() == v, "witness {p} does not join {u} and {v}");
        ensure!(p.len() == len, "witness {p} has length {} but the distance is {len}", p.len());
        for (a, b) in p.edges() {
            ensure!(g.has_edge(a, b), "witness {p} uses a non-edge");
        }
    }
    ensure!(count > 1u32.into(), "brute force finds a single shortest {u}-{v} path");
    Ok(())
}

fn geodetic_suite() -> Outcome {
    for s in 3..=8 {
        for t in 0..=4 {
            let g = kst(s, t);
            let report = geodetic_report(&all_pairs_shortest(&g).map_err(|e| e.to_string())?);
            ensure!(report.is_geodetic == (t % 2 == 0), "K({s},{t}) geodetic = {}", report.is_geodetic);
            if let Some(w) = &report.witness {
                verify_witness(&g, w.u, w.v, &w.paths)?;
            }
        }
    }
    for k in 2..=5 {
        let g = diameter_two_graph(k, None).map_err(|e| e.to_string())?;
        let report = geodetic_report(&all_pairs_shortest(&g).map_err(|e| e.to_string())?);
        ensure!(report.is_geodetic && report.diameter == 2, "G_{k}: geodetic {}, diameter {}", report.is_geodetic, report.diameter);
    }
    let mut small = String::new();
    for s in 3..=8 {
        let d = all_pairs_shortest(&kst(s, 2)).map_err(|e| e.to_string())?.diameter();
        if s == 3 {
            // K(3,2) is the 9-cycle
            ensure!(d == 4, "K(3,2) has diameter {d}");
            small = format!("; K(3,2) is C9 with diameter {d}");
        } else {
            ensure!(d == 5, "K({s},2) has diameter {d}");
        }
    }
    Ok(format!(
        "K(s,t) geodetic iff t even (s=3..8, t=0..4, odd-t witnesses verified); G_k geodetic of diameter 2 (k=2..5); K(s,2) diameter 5 for s=4..8{small}"
    ))
}

fn layout_reproduction() -> Outcome {
    let g = kst(8, 2);
    let d = clustered_convex_layout(&g).map_err(|e| e.to_string())?;
    ensure!(validate_drawing(&g, &d).map_err(|e| e.to_string())?.valid(), "drawing is invalid");

    let structure = KstStructure::from_graph(&g).map_err(|e| e.to_string())?;
    let central = structure.central_index().ok_or("no central segment")?;
    let crossings = segment_intersections(&g, &d).map_err(|e| e.to_string())?;
    for rec in &crossings {
        ensure!(rec.edge_ids.iter().all(|&e| structure.segment(e).1 == central), "crossing off the central segments");
    }

    let centrals: BTreeSet<(VertexId, VertexId)> = structure
        .branch_pairs()
        .map(|(u, v)| central_segment_in(&structure, u, v).map(|c| c.edge))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let table = all_pairs_shortest(&g).map_err(|e| e.to_string())?;
    for u in g.vertices() {
        for v in g.vertices().filter(|&v| v > u) {
            let p = unique_shortest_path(&table, u, v).map_err(|e| e.to_string())?;
            let used = p.edges().filter(|&(a, b)| centrals.contains(&(a.min(b), a.max(b)))).count();
            ensure!(used <= 2, "{p} contains {used} central segments");
        }
    }

    let report = certify_philogeodetic(&g, &d, &table).map_err(|e| e.to_string())?;
    ensure!(report.max_meets == 4, "max_meets = {}", report.max_meets);
    let [p, q] = report.worst_pairs.first().ok_or("no worst pair recorded")?;
    let components = support::oracle(&d, p, q);
    ensure!(components.len() == 4, "oracle counts {} meets on the worst pair", components.len());
    let w = find_witness_pair(&g, &d).map_err(|e| e.to_string())?.ok_or("no witness pair")?;
    ensure!(w.verified_meets == 4, "witness meets {} times", w.verified_meets);
    Ok(format!(
        "K(8,2): valid, {} central crossings, <=2 central segments per path, max_meets 4 over {} pairs, witness {} / {}",
        crossings.len(),
        report.pairs,
        w.paths[0],
        w.paths[1]
    ))
}

fn witness_machinery() -> Outcome {
    let g = kst(9, 2);
    let d = clustered_convex_layout(&g).map_err(|e| e.to_string())?;
    let w = find_witness_pair(&g, &d).map_err(|e| e.to_string())?.ok_or("no witness pair on K(9,2)")?;
    let index = MeetIndex::new(&g, &d).map_err(|e| e.to_string())?;
    let meets = index.count_meets(&w.paths[0], &w.paths[1]).map_err(|e| e.to_string())?.meet_count();
    ensure!(meets == 4, "count_meets = {meets}");
    let table = all_pairs_shortest(&g).map_err(|e| e.to_string())?;
    for p in &w.paths {
        let expected = unique_shortest_path(&table, p.first(), p.last()).map_err(|e| e.to_string())?;
        ensure!(&expected == p, "{p} is not the shortest path between its ends");
    }
    let geometric = support::oracle(&d, &w.paths[0], &w.paths[1]).len();
    ensure!(geometric == 4, "geometric oracle counts {geometric} meets");
    Ok(format!("K(9,2): anchors {} {}, paths {} / {} meet 4 times (re-verified)", w.anchors[0], w.anchors[1], w.paths[0], w.paths[1]))
}

fn incidence_arithmetic() -> Outcome {
    for (k, expected) in [(127, false), (128, false), (129, true), (131, true)] {
        let holds = incidence_inequality_holds(k).map_err(|e| e.to_string())?;
        ensure!(holds == expected, "inequality at k={k} is {holds}");
    }
    for k in 2..=40u64 {
        let c = incidence_counts(k);
        let strict = c.m_incidence > 4 * c.n;
        ensure!(strict == (k >= 8), "m > 4n is {strict} at k={k}");
        ensure!(incidence_lemma_applies(k) == strict, "lemma precondition disagrees at k={k}");
        ensure!(crossing_lemma_bound(c.n, c.m_incidence).is_ok() == strict, "crossing lemma guard disagrees at k={k}");
    }
    Ok("inequality false at 127, 128 and true at 129, 131; m > 4n exactly when k >= 8 (k=2..40)".into())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f72_6163);
    let mut graphs = 0;
    for round in 0..80 {
        let n = rng.gen_range(2..=12);
        let g = support::random_connected(&mut rng, n, [0.2, 0.35, 0.6][round % 3]);
        graphs += compare_counts(&g)?;
    }
    for g in [kst(3, 1), kst(3, 2), kst(4, 1), kst(4, 2), kst(5, 0), kst(6, 0)] {
        graphs += compare_counts(&g)?;
    }
    for k in [2, 3] {
        graphs += compare_counts(&diameter_two_graph(k, None).map_err(|e| e.to_string())?)?;
    }

    let mut fixtures = 0;
    while fixtures < 240 {
        let (g, d) = support::random_drawn_graph(&mut rng);
        let index = MeetIndex::new(&g, &d).map_err(|e| e.to_string())?;
        for _ in 0..6 {
            let (Some(p), Some(q)) = (support::random_walk(&g, &mut rng, 6), support::random_walk(&g, &mut rng, 6))
            else {
                continue;
            };
            if p == q || p == q.reversed() {
                continue;
            }
            catch_unwind(AssertUnwindSafe(|| support::check(&index, &p, &q)))
                .map_err(|_| format!("meet mismatch on {p} / {q}"))?;
            fixtures += 1;
        }
    }
    Ok(format!("{graphs} graphs with <=12 vertices match brute force; {fixtures} path pairs match the geometric oracle"))
}

fn compare_counts(g: &Graph) -> Result<usize, String> {
    let table = all_pairs_shortest(g).map_err(|e| e.to_string())?;
    for u in g.vertices() {
        for v in g.vertices() {
            let (count, len) = support::brute_force_count(g, u, v);
            ensure!(table.count(u, v) == &count && table.dist(u, v) as usize == len, "mismatch at {u}-{v}");
        }
    }
    Ok(1)
}

fn run_pipeline(dir: &FsPath) -> Result<Vec<(String, Vec<u8>)>, String> {
    let bin = env!("CARGO_BIN_EXE_geodesy");
    let steps: [&[&str]; 5] = [
        &["gen-kst", "--s", "8", "--t", "2", "--out", "graph.json", "--manifest", "gen.manifest.json"],
        &["layout-thm2", "graph.json", "--out", "bundle.json", "--manifest", "layout.manifest.json"],
        &["analyze", "bundle.json", "--out", "report.json", "--manifest", "analyze.manifest.json"],
        &["export-svg", "bundle.json", "--witness", "--out", "witness.svg", "--manifest", "svg.manifest.json"],
        &["analyze", "bundle.json", "--format", "svg", "--out", "worst.svg"],
    ];
    for args in steps {
        let status = Command::new(bin).args(args).current_dir(dir).status().map_err(|e| e.to_string())?;
        ensure!(status.success(), "geodesy {} exited with {status}", args.join(" "));
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    files.sort();
    files.into_iter().map(|f| std::fs::read(dir.join(&f)).map(|b| (f, b)).map_err(|e| e.to_string())).collect()
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_pipeline(a.path())?;
    let second = run_pipeline(b.path())?;
    ensure!(first.len() == second.len(), "runs produced different file sets");
    for ((fa, ba), (fb, bb)) in first.iter().zip(&second) {
        ensure!(fa == fb && ba == bb, "{fa} differs between runs");
    }
    let bytes: usize = first.iter().map(|(_, b)| b.len()).sum();
    Ok(format!("gen -> layout -> analyze -> export-svg twice: {} files, {bytes} bytes, identical", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("counts", Duration::from_secs(1), counts),
        ("geodetic suite", Duration::from_secs(30), geodetic_suite),
        ("layout reproduction", Duration::from_secs(300), layout_reproduction),
        ("witness pair", Duration::from_secs(300), witness_machinery),
        ("incidence arithmetic", Duration::from_secs(1), incidence_arithmetic),
        ("oracle equivalence", Duration::from_secs(120), oracle_equivalence),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
