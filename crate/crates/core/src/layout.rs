//! Straight-line drawings with exact coordinates, their validation, and the
//! clustered convex layout of uniformly subdivided complete graphs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::generators::{GeneratorError, KstStructure};
use crate::geometry::{
    collinear_overlap, format_rational, on_open_segment, parse_rational, proper_crossing, rat, BoundingBox, Point2,
    Rational,
};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("drawing has no position for vertex {0}")]
    MissingPosition(VertexId),
    #[error("drawing places {drawn} vertices but the graph has {expected}")]
    SizeMismatch { drawn: usize, expected: usize },
    #[error("subdivision count t = {0} is odd; no single central segment exists")]
    OddSubdivision(u32),
    #[error(transparent)]
    Structure(#[from] GeneratorError),
    #[error("({0}, {1}) is not a pair of distinct branch vertices")]
    NotABranchPair(VertexId, VertexId),
    #[error("layout produced an invalid drawing: {0:?}")]
    Internal(ValidityReport),
}

/// Vertex positions; edge `uv` is drawn as the segment between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing {
    positions: Vec<Point2>,
}

impl Drawing {
    pub fn new(positions: Vec<Point2>) -> Self {
        Drawing { positions }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, v: VertexId) -> &Point2 {
        &self.positions[v.index()]
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn segment(&self, (u, v): (VertexId, VertexId)) -> (&Point2, &Point2) {
        (self.position(u), self.position(v))
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::of(&self.positions)
    }

    fn covers(&self, g: &Graph) -> Result<(), LayoutError> {
        if self.positions.len() < g.n() {
            return Err(LayoutError::MissingPosition(VertexId::from(self.positions.len())));
        }
        if self.positions.len() > g.n() {
            return Err(LayoutError::SizeMismatch { drawn: self.positions.len(), expected: g.n() });
        }
        Ok(())
    }
}

impl Serialize for Drawing {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Positions<'a>(&'a [Point2]);
        impl Serialize for Positions<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (i, p) in self.0.iter().enumerate() {
                    map.serialize_entry(&i.to_string(), &[format_rational(&p.x), format_rational(&p.y)])?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("positions", &Positions(&self.positions))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Drawing {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            positions: BTreeMap<String, [String; 2]>,
        }
        let doc = Doc::deserialize(deserializer)?;
        let mut indexed = BTreeMap::new();
        for (key, [x, y]) in doc.positions {
            let id: usize = key.parse().map_err(|_| D::Error::custom(format!("position key {key:?} is not a vertex id")))?;
            let x = parse_rational(&x).map_err(D::Error::custom)?;
            let y = parse_rational(&y).map_err(D::Error::custom)?;
            indexed.insert(id, Point2::new(x, y));
        }
        let mut positions = Vec::with_capacity(indexed.len());
        for (expected, (id, p)) in indexed.into_iter().enumerate() {
            if id != expected {
                return Err(D::Error::custom(format!("drawing has no position for vertex {expected}")));
            }
            positions.push(p);
        }
        Ok(Drawing { positions })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    CoincidentVertices,
    VertexOnEdge,
    CollinearOverlap,
}

/// `vertices` lists the two coincident vertices, the vertex followed by the
/// edge it lies on, or the endpoints of both overlapping edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks distinct vertex positions, no vertex inside a non-incident edge and
/// no two edges overlapping in more than a point. Concurrent crossings are allowed.
pub fn validate_drawing(g: &Graph, d: &Drawing) -> Result<ValidityReport, LayoutError> {
    d.covers(g)?;
    let mut violations = Vec::new();

    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| d.positions[a].cmp(&d.positions[b]).then(a.cmp(&b)));
    for w in order.windows(2) {
        if d.positions[w[0]] == d.positions[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            violations.push(Violation {
                kind: ViolationKind::CoincidentVertices,
                vertices: vec![VertexId::from(a), VertexId::from(b)],
            });
        }
    }

    let boxes: Vec<BoundingBox> = g
        .edges()
        .iter()
        .map(|&e| {
            let (a, b) = d.segment(e);
            BoundingBox::of([a, b]).expect("two points")
        })
        .collect();

    let per_edge: Vec<Vec<Violation>> = g
        .edges()
        .par_iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let (a, b) = d.segment((u, v));
            let mut found = Vec::new();
            for w in g.vertices() {
                if w != u && w != v && on_open_segment(a, b, d.position(w)) {
                    found.push(Violation { kind: ViolationKind::VertexOnEdge, vertices: vec![w, u, v] });
                }
            }
            for (j, &(x, y)) in g.edges().iter().enumerate().skip(i + 1) {
                if !boxes[i].intersects(&boxes[j]) {
                    continue;
                }
                let (c, e) = d.segment((x, y));
                if collinear_overlap(a, b, c, e) {
                    found.push(Violation { kind: ViolationKind::CollinearOverlap, vertices: vec![u, v, x, y] });
                }
            }
            found
        })
        .collect();
    violations.extend(per_edge.into_iter().flatten());
    violations.sort_by(|a, b| a.kind.cmp(&b.kind).then_with(|| a.vertices.cmp(&b.vertices)));
    Ok(ValidityReport { violations })
}

/// Positions of the branch vertices: `i`-th branch at `(i, i²)`.
pub fn moment_curve_point(i: usize) -> Point2 {
    let i = i as i64;
    Point2::from_ints(i, i * i)
}

/// Straight-line layout of K(s,t) for even `t`.
///
/// Branch vertices sit on the moment curve. On every chord `uv`, the `t/2`
/// subdivision vertices nearest `u` are spread evenly over `(0, λ⁻)` and the
/// ones nearest `v` over `(λ⁺, 1)`, where `[λ⁻, λ⁺]` spans all crossings of
/// the chord with independent chords (both `1/2` when there are none). Every
/// crossing then lies on the central segment of both chords involved.
pub fn clustered_convex_layout(g: &Graph) -> Result<Drawing, LayoutError> {
    let kst = KstStructure::from_graph(g)?;
    if kst.t % 2 == 1 {
        return Err(LayoutError::OddSubdivision(kst.t));
    }
    let half = kst.t as i64 / 2;
    let mut positions = vec![Point2::from_ints(0, 0); g.n()];
    for (i, &b) in kst.branches().iter().enumerate() {
        positions[b.index()] = moment_curve_point(i);
    }

    let pairs: Vec<(VertexId, VertexId)> = kst.branch_pairs().collect();
    let spans: Vec<(Rational, Rational)> = pairs
        .par_iter()
        .map(|&(u, v)| {
            let (a, b) = (&positions[u.index()], &positions[v.index()]);
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for &(w, z) in &pairs {
                if w == u || w == v || z == u || z == v {
                    continue;
                }
                if let Some(c) = proper_crossing(a, b, &positions[w.index()], &positions[z.index()]) {
                    if lo.as_ref().is_none_or(|l| c.along_first < *l) {
                        lo = Some(c.along_first.clone());
                    }
                    if hi.as_ref().is_none_or(|h| c.along_first > *h) {
                        hi = Some(c.along_first);
                    }
                }
            }
            let mid = Rational::new(1.into(), 2.into());
            (lo.unwrap_or_else(|| mid.clone()), hi.unwrap_or(mid))
        })
        .collect();

    for (&(u, v), (lo, hi)) in pairs.iter().zip(&spans) {
        let path = kst.subdivided_path(u, v).expect("pair comes from the structure");
        let (a, b) = (positions[u.index()].clone(), positions[v.index()].clone());
        let slots = rat(half + 1);
        for j in 1..=half {
            let near_u = rat(j) * lo / &slots;
            positions[path[j as usize].index()] = a.lerp(&b, &near_u);
            let near_v = Rational::one() - rat(half - j + 1) * (Rational::one() - hi) / &slots;
            positions[path[(half + j) as usize].index()] = a.lerp(&b, &near_v);
        }
    }

    let drawing = Drawing::new(positions);
    let report = validate_drawing(g, &drawing)?;
    if !report.valid() {
        return Err(LayoutError::Internal(report));
    }
    Ok(drawing)
}

/// One segment of a subdivided edge `[uv]`, numbered from `u` starting at 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentRef {
    pub edge: (VertexId, VertexId),
    pub index: usize,
    pub central: bool,
}

/// The middle segment of `[uv]`: between subdivision positions `t/2` and `t/2 + 1`,
/// or the edge `uv` itself when `t = 0`.
pub fn central_segment(g: &Graph, u: VertexId, v: VertexId) -> Result<SegmentRef, LayoutError> {
    let kst = KstStructure::from_graph(g)?;
    central_segment_in(&kst, u, v)
}

pub fn central_segment_in(kst: &KstStructure, u: VertexId, v: VertexId) -> Result<SegmentRef, LayoutError> {
    let index = kst.central_index().ok_or(LayoutError::OddSubdivision(kst.t))?;
    let path = kst.subdivided_path(u, v).ok_or(LayoutError::NotABranchPair(u, v))?;
    Ok(SegmentRef { edge: (path[index - 1], path[index]), index, central: true })
}

/// The drawing of K_s induced by a drawing of K(s,t): branch positions and one
/// polyline per complete-graph edge through its subdivision positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolylineDrawing {
    pub branches: Vec<(VertexId, Point2)>,
    pub polylines: BTreeMap<(VertexId, VertexId), Vec<Point2>>,
}

impl PolylineDrawing {
    /// Proper crossings between polylines of independent edges, found by
    /// scanning all segment pairs of every such polyline pair.
    pub fn independent_crossings(&self) -> usize {
        let keys: Vec<_> = self.polylines.keys().copied().collect();
        let mut total = 0;
        for (i, &(u, v)) in keys.iter().enumerate() {
            for &(w, z) in &keys[i + 1..] {
                if w == u || w == v || z == u || z == v {
                    continue;
                }
                let p = &self.polylines[&(u, v)];
                let q = &self.polylines[&(w, z)];
                for s in p.windows(2) {
                    for r in q.windows(2) {
                        if proper_crossing(&s[0], &s[1], &r[0], &r[1]).is_some() {
                            total += 1;
                        }
                    }
                }
            }
        }
        total
    }
}

pub fn induced_complete_drawing(g: &Graph, d: &Drawing) -> Result<PolylineDrawing, LayoutError> {
    d.covers(g)?;
    let kst = KstStructure::from_graph(g)?;
    let branches = kst.branches().iter().map(|&b| (b, d.position(b).clone())).collect();
    let polylines = kst
        .branch_pairs()
        .map(|(u, v)| {
            let path = kst.subdivided_path(u, v).expect("pair comes from the structure");
            ((u, v), path.iter().map(|&w| d.position(w).clone()).collect())
        })
        .collect();
    Ok(PolylineDrawing { branches, polylines })
}

/// True when no three of the given points are collinear.
pub fn no_three_collinear(points: &[Point2]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                if crate::geometry::cross(&points[i], &points[j], &points[k]).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}
