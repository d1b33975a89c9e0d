//! Constructors for the graph families: uniformly subdivided complete graphs
//! and the point/line graphs of affine planes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{field_of_order, FieldError};
use crate::graph::{build_graph, Graph, GraphError, GraphMeta, VertexId, VertexRole};
use crate::plane::{affine_plane, AffinePlane, PlaneError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("need at least 2 branch vertices, got s = {0}")]
    TooFewBranches(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a subdivided complete graph: {0}")]
    NotSubdividedComplete(String),
}

/// Parameters of K(s,t): `s` branch vertices, `t` subdivision vertices per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KstParams {
    pub s: u32,
    pub t: u32,
}

pub fn binomial2(s: u64) -> u64 {
    s * s.saturating_sub(1) / 2
}

/// K(s,t). Branch ids are `0..s`; subdivision ids follow, grouped by parent
/// edge in lexicographic order and by position from the smaller endpoint.
pub fn subdivided_complete(params: KstParams) -> Result<Graph, GeneratorError> {
    let KstParams { s, t } = params;
    if s < 2 {
        return Err(GeneratorError::TooFewBranches(s));
    }
    let pairs = binomial2(s as u64) as usize;
    let n = s as usize + t as usize * pairs;
    let mut roles = BTreeMap::new();
    for b in 0..s {
        roles.insert(VertexId(b), VertexRole::Branch);
    }
    let mut edges = Vec::with_capacity(pairs * (t as usize + 1));
    let mut next = s;
    for u in 0..s {
        for v in u + 1..s {
            let mut prev = u;
            for position in 1..=t {
                roles.insert(VertexId(next), VertexRole::Subdivision { edge: (VertexId(u), VertexId(v)), position });
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, v));
        }
    }
    Ok(build_graph(n, &edges, roles, Some(GraphMeta::Kst { s, t }))?)
}

/// The point/line graph of an affine plane: points are ids `0..k²`, lines
/// follow grouped by parallel class. Incident point-line pairs and parallel
/// line pairs are adjacent; points are pairwise non-adjacent.
pub fn scapellato_graph(plane: &AffinePlane) -> Result<Graph, GeneratorError> {
    let k = plane.order();
    let np = plane.points().len();
    let n = np + plane.lines().len();
    let mut roles = BTreeMap::new();
    for p in 0..np {
        roles.insert(VertexId::from(p), VertexRole::Point);
    }
    let mut edges = Vec::new();
    for (l, line) in plane.lines().iter().enumerate() {
        let lid = (np + l) as u32;
        roles.insert(VertexId(lid), VertexRole::Line { class: line.class });
        edges.extend(line.points.iter().map(|&p| (p as u32, lid)));
    }
    for class in plane.parallel_classes() {
        for (i, &a) in class.iter().enumerate() {
            for &b in &class[i + 1..] {
                edges.push(((np + a) as u32, (np + b) as u32));
            }
        }
    }
    let field = plane.field();
    let meta = GraphMeta::Gk {
        k,
        p: field.characteristic(),
        m: field.degree(),
        modulus: field.modulus().map(<[u32]>::to_vec),
    };
    Ok(build_graph(n, &edges, roles, Some(meta))?)
}

/// G_k for a prime power `k`; non-prime-powers are rejected.
pub fn diameter_two_graph(k: u32, modulus: Option<&[u32]>) -> Result<Graph, GeneratorError> {
    let field = field_of_order(k, modulus)?;
    let plane = affine_plane(&field)?;
    scapellato_graph(&plane)
}

/// Drops the line-line edges, keeping only point-line incidences.
pub fn bipartite_incidence_subgraph(gk: &Graph) -> Result<Graph, GeneratorError> {
    let is_point = |v: VertexId| matches!(gk.role(v), VertexRole::Point);
    let is_line = |v: VertexId| matches!(gk.role(v), VertexRole::Line { .. });
    if !gk.vertices().any(is_point) || !gk.vertices().any(is_line) {
        return Err(GraphError::MissingRoles("point/line").into());
    }
    Ok(gk.edge_subgraph(|u, v| (is_point(u) && is_line(v)) || (is_line(u) && is_point(v))))
}

/// Branch/subdivision structure of a K(s,t) graph, recovered from its roles.
#[derive(Debug, Clone)]
pub struct KstStructure {
    pub s: u32,
    pub t: u32,
    branches: Vec<VertexId>,
    /// Vertex sequence of `[uv]` from `u` to `v`, keyed by `(u, v)` with `u < v`.
    paths: BTreeMap<(VertexId, VertexId), Vec<VertexId>>,
    /// For each graph edge id: its branch pair and 1-based segment index from the smaller branch.
    segment_of: Vec<((VertexId, VertexId), usize)>,
}

impl KstStructure {
    pub fn from_graph(g: &Graph) -> Result<Self, GeneratorError> {
        let bad = |msg: String| GeneratorError::NotSubdividedComplete(msg);
        let branches: Vec<VertexId> = g.vertices().filter(|&v| matches!(g.role(v), VertexRole::Branch)).collect();
        let s = branches.len() as u32;
        if s < 2 {
            return Err(GraphError::MissingRoles("branch").into());
        }
        let mut interior: BTreeMap<(VertexId, VertexId), Vec<(u32, VertexId)>> = BTreeMap::new();
        for v in g.vertices() {
            match g.role(v) {
                VertexRole::Branch => {}
                VertexRole::Subdivision { edge, position } => {
                    let key = (edge.0.min(edge.1), edge.0.max(edge.1));
                    interior.entry(key).or_default().push((*position, v));
                }
                other => return Err(bad(format!("vertex {v} has role {other:?}"))),
            }
        }
        let t = interior.values().next().map_or(0, Vec::len) as u32;
        let mut paths = BTreeMap::new();
        for (i, &u) in branches.iter().enumerate() {
            for &v in &branches[i + 1..] {
                let mut subs = interior.remove(&(u, v)).unwrap_or_default();
                subs.sort_unstable();
                if subs.len() as u32 != t || subs.iter().enumerate().any(|(j, &(pos, _))| pos != j as u32 + 1) {
                    return Err(bad(format!("edge ({u}, {v}) is not subdivided into positions 1..={t}")));
                }
                let mut path = vec![u];
                path.extend(subs.into_iter().map(|(_, w)| w));
                path.push(v);
                paths.insert((u, v), path);
            }
        }
        if let Some(key) = interior.keys().next() {
            return Err(bad(format!("subdivision vertices on non-branch pair {key:?}")));
        }

        let mut segment_of = vec![None; g.m()];
        for (&key, path) in &paths {
            for (i, w) in path.windows(2).enumerate() {
                let e = g
                    .edge_id(w[0], w[1])
                    .ok_or_else(|| bad(format!("missing edge ({}, {}) on [{}{}]", w[0], w[1], key.0, key.1)))?;
                segment_of[e] = Some((key, i + 1));
            }
        }
        let segment_of = segment_of
            .into_iter()
            .enumerate()
            .map(|(e, seg)| seg.ok_or_else(|| bad(format!("edge {:?} lies on no subdivided edge", g.edges()[e]))))
            .collect::<Result<Vec<_>, _>>()?;
        if g.m() != paths.len() * (t as usize + 1) {
            return Err(bad("unexpected edge count".into()));
        }
        Ok(KstStructure { s, t, branches, paths, segment_of })
    }

    pub fn branches(&self) -> &[VertexId] {
        &self.branches
    }

    /// Branch pairs `(u, v)` with `u < v` in lexicographic order.
    pub fn branch_pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.paths.keys().copied()
    }

    /// Vertices of `[uv]` oriented from `u` to `v`.
    pub fn subdivided_path(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        if u < v {
            self.paths.get(&(u, v)).cloned()
        } else {
            self.paths.get(&(v, u)).map(|p| p.iter().rev().copied().collect())
        }
    }

    /// Branch pair and segment index (from the smaller branch) of graph edge `e`.
    pub fn segment(&self, e: usize) -> ((VertexId, VertexId), usize) {
        self.segment_of[e]
    }

    /// 1-based index of the central segment, when `t` is even.
    pub fn central_index(&self) -> Option<usize> {
        self.t.is_multiple_of(2).then_some(self.t as usize / 2 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::finite_field;

    #[test]
    fn kst_counts_and_ids() {
        let g = subdivided_complete(KstParams { s: 8, t: 2 }).unwrap();
        assert_eq!((g.n(), g.m()), (64, 84));
        assert_eq!(g.role(VertexId(8)), &VertexRole::Subdivision { edge: (VertexId(0), VertexId(1)), position: 1 });
        assert_eq!(g.role(VertexId(9)), &VertexRole::Subdivision { edge: (VertexId(0), VertexId(1)), position: 2 });
        assert!(g.has_edge(VertexId(0), VertexId(8)));
        assert!(g.has_edge(VertexId(9), VertexId(1)));
    }

    #[test]
    fn zero_subdivisions_is_complete() {
        let g = subdivided_complete(KstParams { s: 5, t: 0 }).unwrap();
        assert_eq!((g.n(), g.m()), (5, 10));
        assert!(g.vertices().all(|v| g.degree(v) == 4));
        assert_eq!(
            subdivided_complete(KstParams { s: 1, t: 2 }).unwrap_err(),
            GeneratorError::TooFewBranches(1)
        );
    }

    #[test]
    fn structure_recovers_paths() {
        let g = subdivided_complete(KstParams { s: 4, t: 4 }).unwrap();
        let k = KstStructure::from_graph(&g).unwrap();
        assert_eq!((k.s, k.t), (4, 4));
        let p = k.subdivided_path(VertexId(2), VertexId(0)).unwrap();
        assert_eq!(p.first(), Some(&VertexId(2)));
        assert_eq!(p.last(), Some(&VertexId(0)));
        assert_eq!(p.len(), 6);
        assert_eq!(k.central_index(), Some(3));
        let e = g.edge_id(VertexId(0), VertexId(4)).unwrap();
        assert_eq!(k.segment(e), ((VertexId(0), VertexId(1)), 1));
    }

    #[test]
    fn gk_small_counts() {
        let plane = affine_plane(&finite_field(3, 1, None).unwrap()).unwrap();
        let g = scapellato_graph(&plane).unwrap();
        assert_eq!((g.n(), g.m()), (21, 48));
        let b = bipartite_incidence_subgraph(&g).unwrap();
        assert_eq!((b.n(), b.m()), (21, 36));
        for v in g.vertices() {
            let expected = if matches!(g.role(v), VertexRole::Point) { 4 } else { 5 };
            assert_eq!(g.degree(v), expected);
        }
    }

    #[test]
    fn non_prime_power_order() {
        assert_eq!(
            diameter_two_graph(6, None).unwrap_err(),
            GeneratorError::Field(FieldError::NotPrimePower(6))
        );
    }

    #[test]
    fn bipartite_needs_roles() {
        let g = subdivided_complete(KstParams { s: 3, t: 0 }).unwrap();
        assert!(bipartite_incidence_subgraph(&g).is_err());
    }
}
