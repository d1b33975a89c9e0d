//! Charging crossings of a drawn K(s,t) to branch vertices, the bipartite
//! crossing graph of an anchor pair, and extraction of a pair of shortest
//! paths that meet four times.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::generators::KstStructure;
use crate::graph::{Graph, Path, VertexId, VertexRole};
use crate::layout::Drawing;
use crate::meets::{segment_intersections, AnalysisError, CrossingRecord, MeetIndex};

/// One charged crossing: the record and the branch vertices it is charged to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charge {
    pub crossing: CrossingRecord,
    /// Branch pair of each crossing edge path, ordered like `crossing.edge_ids`.
    pub paths: [(VertexId, VertexId); 2],
    /// Branch vertices charged through each of the two edge paths.
    pub via: [Vec<VertexId>; 2],
}

impl Charge {
    /// All charged branch vertices, ascending; between 2 and 4 of them.
    pub fn charged(&self) -> BTreeSet<VertexId> {
        self.via.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone)]
pub struct ChargeMap {
    structure: KstStructure,
    charges: Vec<Charge>,
    /// Indices into `charges`, per branch vertex.
    by_branch: BTreeMap<VertexId, Vec<usize>>,
    /// Crossings between edge paths that share a branch vertex; never charged.
    skipped: usize,
}

impl ChargeMap {
    pub fn structure(&self) -> &KstStructure {
        &self.structure
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }

    /// Charges assigned to branch vertex `b`, in crossing order.
    pub fn charged_to(&self, b: VertexId) -> impl Iterator<Item = &Charge> {
        self.by_branch.get(&b).into_iter().flatten().map(|&i| &self.charges[i])
    }

    pub fn charge_of(&self, b: VertexId) -> usize {
        self.by_branch.get(&b).map_or(0, Vec::len)
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Crossings charged to `u` through one edge path and to `v` through the other.
    pub fn mutual_charge(&self, u: VertexId, v: VertexId) -> usize {
        self.charged_to(u).filter(|c| mutual(c, u, v).is_some()).count()
    }
}

/// For a crossing charged to `u` via one side and `v` via the other, the
/// opposite branch vertices `(x, y)` of the edge paths `[ux]` and `[vy]`.
fn mutual(c: &Charge, u: VertexId, v: VertexId) -> Option<(VertexId, VertexId)> {
    let other = |(a, b): (VertexId, VertexId), w: VertexId| if a == w { b } else { a };
    (0..2).find_map(|side| {
        let (su, sv) = (side, 1 - side);
        (c.via[su].contains(&u) && c.via[sv].contains(&v))
            .then(|| (other(c.paths[su], u), other(c.paths[sv], v)))
    })
}

/// Charges every crossing between independent subdivided edges: a crossing on
/// segment `i` of `[uv]` (counted from `u < v`) goes to `u` below the central
/// index, to `v` above it, and to both on the central segment.
pub fn charge_crossings(g: &Graph, d: &Drawing) -> Result<ChargeMap, AnalysisError> {
    let structure = KstStructure::from_graph(g)?;
    let central = structure.central_index().ok_or(AnalysisError::OddSubdivision(structure.t))?;
    let records = segment_intersections(g, d)?;
    let mut charges = Vec::new();
    let mut by_branch: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    let mut skipped = 0;
    for rec in records {
        let segs = rec.edge_ids.map(|e| structure.segment(e));
        let (p0, p1) = (segs[0].0, segs[1].0);
        if p0.0 == p1.0 || p0.0 == p1.1 || p0.1 == p1.0 || p0.1 == p1.1 {
            skipped += 1;
            continue;
        }
        let via = segs.map(|((u, v), i)| match i.cmp(&central) {
            std::cmp::Ordering::Less => vec![u],
            std::cmp::Ordering::Greater => vec![v],
            std::cmp::Ordering::Equal => vec![u, v],
        });
        let idx = charges.len();
        for b in via.iter().flatten() {
            by_branch.entry(*b).or_default().push(idx);
        }
        charges.push(Charge { crossing: rec, paths: [p0, p1], via });
    }
    Ok(ChargeMap { structure, charges, by_branch, skipped })
}

/// X(u, v): left vertex `x` stands for edge path `[ux]`, right vertex `y` for
/// `[vy]`; `x ~ y` when a crossing of the two is charged to `u` and to `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteCrossingGraph {
    pub anchors: (VertexId, VertexId),
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
    pub adjacency: BTreeSet<(VertexId, VertexId)>,
}

impl BipartiteCrossingGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, x: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.range((x, VertexId(0))..=(x, VertexId(u32::MAX))).map(|&(_, y)| y)
    }
}

pub fn build_crossing_graph(cm: &ChargeMap, u: VertexId, v: VertexId) -> Result<BipartiteCrossingGraph, AnalysisError> {
    for w in [u, v] {
        if !cm.structure.branches().contains(&w) {
            return Err(AnalysisError::NotABranch(w));
        }
    }
    if u == v {
        return Err(AnalysisError::IdenticalPaths);
    }
    let others: Vec<VertexId> = cm.structure.branches().iter().copied().filter(|&b| b != u && b != v).collect();
    let adjacency = cm.charged_to(u).filter_map(|c| mutual(c, u, v)).collect();
    Ok(BipartiteCrossingGraph { anchors: (u, v), left: others.clone(), right: others, adjacency })
}

/// A 4-cycle `x1 y1 x2 y2` in X: left vertices `x1 < x2`, right `y1 < y2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourCycle {
    pub left: [VertexId; 2],
    pub right: [VertexId; 2],
}

/// The lexicographically first pair of left vertices with two common
/// neighbours, together with their two smallest common neighbours.
pub fn find_c4(x: &BipartiteCrossingGraph) -> Option<FourCycle> {
    let nbrs: Vec<(VertexId, BTreeSet<VertexId>)> =
        x.left.iter().map(|&l| (l, x.neighbors(l).collect())).filter(|(_, n): &(_, BTreeSet<_>)| n.len() >= 2).collect();
    for (i, (x1, n1)) in nbrs.iter().enumerate() {
        for (x2, n2) in &nbrs[i + 1..] {
            let mut common = n1.intersection(n2);
            if let (Some(&y1), Some(&y2)) = (common.next(), common.next()) {
                return Some(FourCycle { left: [*x1, *x2], right: [y1, y2] });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub anchors: [VertexId; 2],
    /// Opposite branch vertices `x, y` of the edge paths `[ux], [uy]`.
    #[serde(rename = "C_u")]
    pub c_u: [VertexId; 2],
    /// Opposite branch vertices `a, b` of the edge paths `[va], [vb]`.
    #[serde(rename = "C_v")]
    pub c_v: [VertexId; 2],
    /// `[x', y']` and `[a', b']`.
    pub endpoints: [[VertexId; 2]; 2],
    pub paths: [Path; 2],
    pub mutual_charge: usize,
    pub verified_meets: usize,
}

/// Scans anchor pairs by descending mutual charge for a 4-cycle in X and
/// turns the first one found into two shortest paths through `u` and `v`
/// that meet at least four times.
pub fn find_witness_pair(g: &Graph, d: &Drawing) -> Result<Option<WitnessPair>, AnalysisError> {
    let structure = KstStructure::from_graph(g)?;
    if structure.t % 2 == 1 {
        return Err(AnalysisError::OddSubdivision(structure.t));
    }
    if structure.t < 2 {
        return Err(AnalysisError::TooFewSubdivisions(structure.t));
    }
    let cm = charge_crossings(g, d)?;
    let branches = cm.structure.branches().to_vec();
    let mut anchors: Vec<(usize, VertexId, VertexId)> = Vec::new();
    for (i, &u) in branches.iter().enumerate() {
        for &v in &branches[i + 1..] {
            let mc = cm.mutual_charge(u, v);
            if mc > 0 {
                anchors.push((mc, u, v));
            }
        }
    }
    anchors.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    for (mc, u, v) in anchors {
        let x = build_crossing_graph(&cm, u, v)?;
        let Some(c4) = find_c4(&x) else { continue };
        let half = cm.structure.t as usize / 2 + 1;
        // from w out to the far end of the central segment of [w, to]
        let arm = |w: VertexId, to: VertexId| -> Vec<VertexId> {
            let mut path = cm.structure.subdivided_path(w, to).expect("branch pair");
            path.truncate(half + 1);
            path
        };
        let through = |w: VertexId, ends: [VertexId; 2]| -> Path {
            let mut vs = arm(w, ends[0]);
            vs.reverse();
            vs.extend(&arm(w, ends[1])[1..]);
            Path::new(g, vs).expect("walk along subdivided edges")
        };
        let [x1, y1] = c4.left;
        let [a1, b1] = c4.right;
        let paths = [through(u, [x1, y1]), through(v, [a1, b1])];
        let endpoints = [[paths[0].first(), paths[0].last()], [paths[1].first(), paths[1].last()]];
        verify_shortest(g, &paths, [u, v], structure.t)?;
        let index = MeetIndex::new(g, d)?;
        let verified_meets = index.count_meets(&paths[0], &paths[1])?.meet_count();
        if verified_meets < 4 {
            return Err(AnalysisError::WitnessCheck(format!(
                "paths {} and {} meet only {verified_meets} times",
                paths[0], paths[1]
            )));
        }
        return Ok(Some(WitnessPair {
            anchors: [u, v],
            c_u: [x1, y1],
            c_v: [a1, b1],
            endpoints,
            paths,
            mutual_charge: mc,
            verified_meets,
        }));
    }
    Ok(None)
}

fn verify_shortest(g: &Graph, paths: &[Path; 2], through: [VertexId; 2], t: u32) -> Result<(), AnalysisError> {
    let table = crate::shortest::all_pairs_shortest(g)?;
    for (p, w) in paths.iter().zip(through) {
        let expected = crate::shortest::unique_shortest_path(&table, p.first(), p.last())?;
        if &expected != p || p.len() != t as usize + 2 || !p.contains(w) {
            return Err(AnalysisError::WitnessCheck(format!("{p} is not the unique shortest path of length {} through {w}", t + 2)));
        }
        if !matches!(g.role(w), VertexRole::Branch) {
            return Err(AnalysisError::NotABranch(w));
        }
    }
    Ok(())
}
