//! Meets between drawn paths and philogeodetic certification.
//!
//! A meet is a connected component of the intersection of two drawn paths.
//! On a valid straight-line drawing the intersection consists of shared
//! vertices, shared edges and proper crossings between distinct segments, so
//! components are computed combinatorially from a precomputed crossing table:
//! shared vertices joined by shared edges form one piece each, and a crossing
//! point is its own piece unless it lies inside a shared edge.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::generators::GeneratorError;
use crate::geometry::{ccw_from, proper_crossing, BoundingBox, Point2, Rational};
use crate::graph::{Graph, GraphError, Path, VertexId};
use crate::layout::{validate_drawing, Drawing, LayoutError, ValidityReport};
use crate::shortest::{geodetic_report, unique_shortest_path, GeodeticReport, ShortestPathTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Structure(#[from] GeneratorError),
    #[error("drawing is invalid: {0:?}")]
    InvalidDrawing(ValidityReport),
    #[error("graph is not geodetic: {0:?}")]
    NotGeodetic(Box<GeodeticReport>),
    #[error("meet analysis needs two distinct paths")]
    IdenticalPaths,
    #[error("subdivision count t = {0} is odd; the charging scheme needs a central segment")]
    OddSubdivision(u32),
    #[error("witness extraction needs t >= 2, got t = {0}")]
    TooFewSubdivisions(u32),
    #[error("{0} is not a branch vertex")]
    NotABranch(VertexId),
    #[error("witness check failed: {0}")]
    WitnessCheck(String),
}

/// A proper crossing between two non-adjacent edges of a drawing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingRecord {
    /// Edge ids (positions in [`Graph::edges`]), ascending.
    pub edge_ids: [usize; 2],
    pub edges: [(VertexId, VertexId); 2],
    pub point: Point2,
    /// Position of the point along each edge, from its smaller endpoint, in (0, 1).
    pub params: [Rational; 2],
}

fn ensure_valid(g: &Graph, d: &Drawing) -> Result<(), AnalysisError> {
    let report = validate_drawing(g, d)?;
    if report.valid() {
        Ok(())
    } else {
        Err(AnalysisError::InvalidDrawing(report))
    }
}

/// All proper crossings between segments of non-adjacent edges, sorted by edge-id pair.
pub fn segment_intersections(g: &Graph, d: &Drawing) -> Result<Vec<CrossingRecord>, AnalysisError> {
    ensure_valid(g, d)?;
    Ok(crossings_unchecked(g, d))
}

fn crossings_unchecked(g: &Graph, d: &Drawing) -> Vec<CrossingRecord> {
    let edges = g.edges();
    let boxes: Vec<BoundingBox> = edges
        .iter()
        .map(|&e| {
            let (a, b) = d.segment(e);
            BoundingBox::of([a, b]).expect("two points")
        })
        .collect();
    let rows: Vec<Vec<CrossingRecord>> = (0..edges.len())
        .into_par_iter()
        .map(|i| {
            let (u, v) = edges[i];
            let (a, b) = d.segment((u, v));
            let mut row = Vec::new();
            for j in i + 1..edges.len() {
                let (w, z) = edges[j];
                if w == u || w == v || z == u || z == v || !boxes[i].intersects(&boxes[j]) {
                    continue;
                }
                let (c, e) = d.segment((w, z));
                if let Some(x) = proper_crossing(a, b, c, e) {
                    row.push(CrossingRecord {
                        edge_ids: [i, j],
                        edges: [(u, v), (w, z)],
                        point: x.point,
                        params: [x.along_first, x.along_second],
                    });
                }
            }
            row
        })
        .collect();
    rows.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeetKind {
    ProperCrossing,
    VertexTouch,
    SharedSubpath,
}

/// One connected component of the intersection of two drawn paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Meet {
    pub kind: MeetKind,
    /// Shared vertices in the order of the first path.
    pub vertices: Vec<VertexId>,
    /// Crossing points belonging to this component, in the order of the first path.
    pub points: Vec<Point2>,
    /// The component avoids all four endpoints and the paths pass through it
    /// from one side to the other.
    pub is_crossing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeetReport {
    pub pair: [Path; 2],
    pub meets: Vec<Meet>,
}

impl MeetReport {
    pub fn meet_count(&self) -> usize {
        self.meets.len()
    }
}

/// Paths with the lookups the meet computation needs.
#[derive(Debug, Clone)]
pub struct PreparedPath {
    path: Path,
    edges: Vec<usize>,
    mask: Vec<u64>,
    bbox: BoundingBox,
}

impl PreparedPath {
    pub fn path(&self) -> &Path {
        &self.path
    }

    fn has_vertex(&self, v: VertexId) -> bool {
        self.mask[v.index() / 64] >> (v.index() % 64) & 1 == 1
    }

    fn edge_position(&self, e: usize) -> Option<usize> {
        self.edges.iter().position(|&x| x == e)
    }
}

struct Cluster {
    /// Every edge through the crossing point.
    edges: Vec<usize>,
}

/// Crossing table of a validated drawing, reused across many path pairs.
pub struct MeetIndex<'a> {
    graph: &'a Graph,
    drawing: &'a Drawing,
    crossings: Vec<CrossingRecord>,
    crossing_at: Vec<u32>,
    cluster_of: Vec<u32>,
    clusters: Vec<Cluster>,
}

const NONE: u32 = u32::MAX;

impl<'a> MeetIndex<'a> {
    pub fn new(graph: &'a Graph, drawing: &'a Drawing) -> Result<Self, AnalysisError> {
        ensure_valid(graph, drawing)?;
        Ok(Self::from_crossings(graph, drawing, crossings_unchecked(graph, drawing)))
    }

    /// Builds the index from crossings already computed by [`segment_intersections`].
    pub fn from_crossings(graph: &'a Graph, drawing: &'a Drawing, crossings: Vec<CrossingRecord>) -> Self {
        let m = graph.m();
        let mut crossing_at = vec![NONE; m * m];
        for (c, rec) in crossings.iter().enumerate() {
            let [e, f] = rec.edge_ids;
            crossing_at[e * m + f] = c as u32;
            crossing_at[f * m + e] = c as u32;
        }
        // Crossings at the same point form one cluster.
        let mut order: Vec<usize> = (0..crossings.len()).collect();
        order.sort_by(|&a, &b| crossings[a].point.cmp(&crossings[b].point));
        let mut cluster_of = vec![NONE; crossings.len()];
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut prev: Option<usize> = None;
        for &c in &order {
            if prev.is_none_or(|p| crossings[p].point != crossings[c].point) {
                clusters.push(Cluster { edges: Vec::new() });
            }
            let k = clusters.len() - 1;
            cluster_of[c] = k as u32;
            clusters[k].edges.extend(crossings[c].edge_ids);
            prev = Some(c);
        }
        for cl in &mut clusters {
            cl.edges.sort_unstable();
            cl.edges.dedup();
        }
        MeetIndex { graph, drawing, crossings, crossing_at, cluster_of, clusters }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn drawing(&self) -> &Drawing {
        self.drawing
    }

    pub fn crossings(&self) -> &[CrossingRecord] {
        &self.crossings
    }

    /// Number of distinct crossing points.
    pub fn crossing_points(&self) -> usize {
        self.clusters.len()
    }

    pub fn prepare(&self, path: &Path) -> Result<PreparedPath, AnalysisError> {
        let g = self.graph;
        let path = Path::new(g, path.vertices().to_vec())?;
        let edges = path
            .edges()
            .map(|(u, v)| g.edge_id(u, v).ok_or(GraphError::NotAdjacent(u, v)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut mask = vec![0u64; g.n().div_ceil(64).max(1)];
        for v in path.vertices() {
            mask[v.index() / 64] |= 1 << (v.index() % 64);
        }
        let bbox = BoundingBox::of(path.vertices().iter().map(|&v| self.drawing.position(v))).expect("non-empty path");
        Ok(PreparedPath { path, edges, mask, bbox })
    }

    fn components(&self, p: &PreparedPath, q: &PreparedPath) -> Components {
        let m = self.graph.m();
        let pv = p.path.vertices();
        let mut uf = UnionFind::default();
        let mut node_of_index = vec![usize::MAX; pv.len()];
        let mut nodes = Vec::new();
        for (i, &v) in pv.iter().enumerate() {
            if q.has_vertex(v) {
                node_of_index[i] = uf.add();
                nodes.push(Node::Vertex(i));
            }
        }
        let mut shared_edges: Vec<(usize, usize)> = Vec::new();
        for (i, &e) in p.edges.iter().enumerate() {
            if q.edge_position(e).is_some() {
                uf.union(node_of_index[i], node_of_index[i + 1]);
                shared_edges.push((e, i));
            }
        }
        let mut cluster_nodes: Vec<u32> = Vec::new();
        for (i, &e) in p.edges.iter().enumerate() {
            for &f in &q.edges {
                if e == f {
                    continue;
                }
                let c = self.crossing_at[e * m + f];
                if c == NONE {
                    continue;
                }
                let cl = self.cluster_of[c as usize];
                if cluster_nodes.contains(&cl) {
                    continue;
                }
                cluster_nodes.push(cl);
                let node = uf.add();
                nodes.push(Node::Crossing { record: c as usize, p_edge: i });
                // a crossing inside a shared edge belongs to that shared piece
                for &g in &self.clusters[cl as usize].edges {
                    if let Some(&(_, at)) = shared_edges.iter().find(|&&(se, _)| se == g) {
                        uf.union(node, node_of_index[at]);
                    }
                }
            }
        }
        Components { uf, nodes }
    }

    /// Number of meets without materializing them.
    pub fn meet_count(&self, p: &PreparedPath, q: &PreparedPath) -> usize {
        let mut comps = self.components(p, q);
        comps.uf.roots()
    }

    pub fn count_meets(&self, p: &Path, q: &Path) -> Result<MeetReport, AnalysisError> {
        let pp = self.prepare(p)?;
        let qq = self.prepare(q)?;
        self.count_prepared(&pp, &qq)
    }

    pub fn count_prepared(&self, p: &PreparedPath, q: &PreparedPath) -> Result<MeetReport, AnalysisError> {
        if p.path == q.path || p.path == q.path.reversed() {
            return Err(AnalysisError::IdenticalPaths);
        }
        let mut comps = self.components(p, q);
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for node in 0..comps.nodes.len() {
            groups.entry(comps.uf.find(node)).or_default().push(node);
        }
        let pv = p.path.vertices();
        let mut keyed: Vec<((usize, Rational), Meet)> = groups
            .into_values()
            .map(|members| {
                let mut vertex_idx = Vec::new();
                let mut points: Vec<((usize, Rational), Point2)> = Vec::new();
                for &node in &members {
                    match comps.nodes[node] {
                        Node::Vertex(i) => vertex_idx.push(i),
                        Node::Crossing { record, p_edge } => {
                            let key = (p_edge, self.param_along_path(p, p_edge, record));
                            points.push((key, self.crossings[record].point.clone()));
                        }
                    }
                }
                vertex_idx.sort_unstable();
                points.sort();
                let key = match (vertex_idx.first(), points.first()) {
                    (Some(&i), Some((pk, _))) => std::cmp::min((i, Rational::from_integer(0.into())), pk.clone()),
                    (Some(&i), None) => (i, Rational::from_integer(0.into())),
                    (None, Some((pk, _))) => pk.clone(),
                    (None, None) => unreachable!("components are non-empty"),
                };
                let shared_edge = vertex_idx.windows(2).any(|w| {
                    w[1] == w[0] + 1 && q.edge_position(p.edges[w[0]]).is_some()
                });
                let kind = if vertex_idx.is_empty() {
                    MeetKind::ProperCrossing
                } else if shared_edge {
                    MeetKind::SharedSubpath
                } else {
                    MeetKind::VertexTouch
                };
                let is_crossing = if vertex_idx.is_empty() { true } else { self.transversal(p, q, &vertex_idx) };
                let meet = Meet {
                    kind,
                    vertices: vertex_idx.iter().map(|&i| pv[i]).collect(),
                    points: points.into_iter().map(|(_, pt)| pt).collect(),
                    is_crossing,
                };
                (key, meet)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(MeetReport { pair: [p.path.clone(), q.path.clone()], meets: keyed.into_iter().map(|(_, m)| m).collect() })
    }

    /// Position of a crossing along the `p_edge`-th edge of `p`, in path direction.
    fn param_along_path(&self, p: &PreparedPath, p_edge: usize, record: usize) -> Rational {
        let rec = &self.crossings[record];
        let e = p.edges[p_edge];
        let t = if rec.edge_ids[0] == e { &rec.params[0] } else { &rec.params[1] };
        let from = p.path.vertices()[p_edge];
        let (lo, _) = self.graph.edges()[e];
        if from == lo {
            t.clone()
        } else {
            Rational::one() - t
        }
    }

    /// Side test for a component made of shared vertices `p[i0..=i1]`.
    fn transversal(&self, p: &PreparedPath, q: &PreparedPath, idx: &[usize]) -> bool {
        let pv = p.path.vertices();
        let qv = q.path.vertices();
        let (i0, i1) = (idx[0], idx[idx.len() - 1]);
        if i1 - i0 + 1 != idx.len() {
            return false;
        }
        let qpos: Vec<usize> = idx.iter().map(|&i| qv.iter().position(|&w| w == pv[i]).expect("shared")).collect();
        let forward = qpos.windows(2).all(|w| w[1] == w[0] + 1);
        let backward = qpos.windows(2).all(|w| w[0] == w[1] + 1);
        if !(forward || backward) {
            return false;
        }
        if i0 == 0 || i1 == pv.len() - 1 {
            return false;
        }
        let (j0, j1) = (qpos[0], qpos[qpos.len() - 1]);
        if j0.min(j1) == 0 || j0.max(j1) == qv.len() - 1 {
            return false;
        }
        let dir = |from: VertexId, to: VertexId| {
            let (a, b) = (self.drawing.position(from), self.drawing.position(to));
            (&b.x - &a.x, &b.y - &a.y)
        };
        // q's neighbors just outside the shared part, at p[i0] and p[i1].
        let (q_before, q_after) = if forward { (qv[j0 - 1], qv[j1 + 1]) } else { (qv[j0 + 1], qv[j1 - 1]) };
        let s = pv[i0];
        if i0 == i1 {
            let a = dir(s, pv[i0 - 1]);
            let a2 = dir(s, pv[i0 + 1]);
            let b = dir(s, q_before);
            let b2 = dir(s, q_after);
            let before_a2 = |v: &(Rational, Rational)| ccw_from(&a, v, &a2) == Ordering::Less;
            return before_a2(&b) != before_a2(&b2);
        }
        let r = dir(s, pv[i0 + 1]);
        let left_start = ccw_from(&r, &dir(s, q_before), &dir(s, pv[i0 - 1])) == Ordering::Less;
        let e = pv[i1];
        let r2 = dir(e, pv[i1 - 1]);
        let left_end = ccw_from(&r2, &dir(e, q_after), &dir(e, pv[i1 + 1])) == Ordering::Greater;
        left_start != left_end
    }
}

enum Node {
    Vertex(usize),
    Crossing { record: usize, p_edge: usize },
}

struct Components {
    uf: UnionFind,
    nodes: Vec<Node>,
}

#[derive(Default)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn roots(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Meets between two drawn paths of `g`.
pub fn count_meets(g: &Graph, d: &Drawing, p: &Path, q: &Path) -> Result<MeetReport, AnalysisError> {
    MeetIndex::new(g, d)?.count_meets(p, q)
}

/// Summary of meet counts over all pairs of shortest paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhilogeodeticReport {
    pub max_meets: usize,
    pub philogeodetic: bool,
    /// Pairs attaining `max_meets`, in pair order, at most [`WORST_PAIRS_KEPT`].
    pub worst_pairs: Vec<[Path; 2]>,
    pub worst_pair_count: u64,
    /// Number of path pairs per meet count.
    pub histogram: BTreeMap<usize, u64>,
    pub paths: usize,
    pub pairs: u64,
    /// Pairs skipped because their bounding boxes are disjoint.
    pub pruned: u64,
}

pub const WORST_PAIRS_KEPT: usize = 16;

/// Unique shortest paths `u -> v` for all `u < v`, in pair order.
pub fn all_unique_paths(table: &ShortestPathTable) -> Result<Vec<Path>, GraphError> {
    let n = table.n();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            out.push(unique_shortest_path(table, VertexId::from(u), VertexId::from(v))?);
        }
    }
    Ok(out)
}

/// Counts meets for every unordered pair of distinct shortest paths with at
/// least one edge. The drawing is philogeodetic iff no pair meets twice.
pub fn certify_philogeodetic(
    g: &Graph,
    d: &Drawing,
    table: &ShortestPathTable,
) -> Result<PhilogeodeticReport, AnalysisError> {
    let geo = geodetic_report(table);
    if !geo.is_geodetic {
        return Err(AnalysisError::NotGeodetic(Box::new(geo)));
    }
    let index = MeetIndex::new(g, d)?;
    certify_with_index(&index, table)
}

pub fn certify_with_index(index: &MeetIndex<'_>, table: &ShortestPathTable) -> Result<PhilogeodeticReport, AnalysisError> {
    let prepared = all_unique_paths(table)?
        .iter()
        .map(|p| index.prepare(p))
        .collect::<Result<Vec<_>, _>>()?;

    struct Row {
        histogram: BTreeMap<usize, u64>,
        max: usize,
        worst: Vec<usize>,
        worst_count: u64,
        pruned: u64,
    }
    let rows: Vec<Row> = (0..prepared.len())
        .into_par_iter()
        .map(|i| {
            let mut row = Row { histogram: BTreeMap::new(), max: 0, worst: Vec::new(), worst_count: 0, pruned: 0 };
            for j in i + 1..prepared.len() {
                let count = if prepared[i].bbox.intersects(&prepared[j].bbox) {
                    index.meet_count(&prepared[i], &prepared[j])
                } else {
                    row.pruned += 1;
                    0
                };
                *row.histogram.entry(count).or_default() += 1;
                match count.cmp(&row.max) {
                    Ordering::Greater => {
                        row.max = count;
                        row.worst.clear();
                        row.worst.push(j);
                        row.worst_count = 1;
                    }
                    Ordering::Equal => {
                        row.worst_count += 1;
                        if row.worst.len() < WORST_PAIRS_KEPT {
                            row.worst.push(j);
                        }
                    }
                    Ordering::Less => {}
                }
            }
            row
        })
        .collect();

    let max_meets = rows.iter().map(|r| r.max).max().unwrap_or(0);
    let mut histogram = BTreeMap::new();
    let mut worst_pairs = Vec::new();
    let mut worst_pair_count = 0;
    let mut pruned = 0;
    for (i, row) in rows.iter().enumerate() {
        for (&k, &c) in &row.histogram {
            *histogram.entry(k).or_default() += c;
        }
        pruned += row.pruned;
        if row.max == max_meets && max_meets > 0 {
            worst_pair_count += row.worst_count;
            for &j in &row.worst {
                if worst_pairs.len() < WORST_PAIRS_KEPT {
                    worst_pairs.push([prepared[i].path.clone(), prepared[j].path.clone()]);
                }
            }
        }
    }
    let pairs = histogram.values().sum();
    Ok(PhilogeodeticReport {
        max_meets,
        philogeodetic: max_meets <= 1,
        worst_pairs,
        worst_pair_count,
        histogram,
        paths: prepared.len(),
        pairs,
        pruned,
    })
}
