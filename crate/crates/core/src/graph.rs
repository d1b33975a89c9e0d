//! Undirected simple graphs with per-vertex roles and construction metadata.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Dense vertex index. Ids of a [`Graph`] are always `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What a vertex stands for in the construction that produced the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VertexRole {
    /// A vertex of the underlying complete graph.
    Branch,
    /// Interior vertex of the subdivided edge `edge`, `position` counted from
    /// the smaller branch id starting at 1.
    Subdivision {
        edge: (VertexId, VertexId),
        position: u32,
    },
    /// A point of an affine plane.
    Point,
    /// A line of an affine plane, tagged with its parallel class.
    Line { class: u32 },
    Plain,
}

/// Records which family generated a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GraphMeta {
    /// Complete graph on `s` vertices, every edge subdivided `t` times.
    Kst { s: u32, t: u32 },
    /// Points and lines of an affine plane of order `k = p^m`.
    Gk {
        k: u32,
        p: u32,
        m: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge ({0}, {0})")]
    Loop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EdgeOutOfRange { u: u32, v: u32, n: usize },
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("invalid role for vertex {vertex}: {reason}")]
    InvalidRole { vertex: VertexId, reason: String },
    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(VertexId, VertexId),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("path repeats vertex {0}")]
    RepeatedVertex(VertexId),
    #[error("shortest path between {u} and {v} is not unique: {first} and {second}")]
    Ambiguous {
        u: VertexId,
        v: VertexId,
        first: Path,
        second: Path,
    },
    #[error("paths {0} and {1} do not intersect in a common subpath")]
    NotContiguous(Path, Path),
    #[error("graph lacks {0} roles")]
    MissingRoles(&'static str),
}

/// Ordered vertex sequence of a walk without repeated vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<VertexId>);

impl Path {
    /// Checks adjacency and simplicity against `g`.
    pub fn new(g: &Graph, vertices: Vec<VertexId>) -> Result<Self, GraphError> {
        let mut seen = vec![false; g.n()];
        for &v in &vertices {
            if v.index() >= g.n() {
                return Err(GraphError::VertexOutOfRange { vertex: v.0, n: g.n() });
            }
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(GraphError::RepeatedVertex(v));
            }
        }
        for w in vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(GraphError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(Path(vertices))
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<VertexId>) -> Self {
        Path(vertices)
    }

    pub fn single(v: VertexId) -> Self {
        Path(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().expect("paths are non-empty")
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    /// Consecutive vertex pairs in path order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Simple undirected graph. Edges are stored normalized (`u < v`) and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
    roles: Vec<VertexRole>,
    meta: Option<GraphMeta>,
}

/// Builds a normalized graph. Vertices absent from `roles` get [`VertexRole::Plain`].
pub fn build_graph(
    n: usize,
    edges: &[(u32, u32)],
    roles: BTreeMap<VertexId, VertexRole>,
    meta: Option<GraphMeta>,
) -> Result<Graph, GraphError> {
    let mut normalized = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u as usize >= n || v as usize >= n {
            return Err(GraphError::EdgeOutOfRange { u, v, n });
        }
        if u == v {
            return Err(GraphError::Loop(VertexId(u)));
        }
        normalized.push((VertexId(u.min(v)), VertexId(u.max(v))));
    }
    normalized.sort_unstable();
    if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
        return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
    }

    let mut role_vec = vec![VertexRole::Plain; n];
    for (v, role) in roles {
        if v.index() >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v.0, n });
        }
        role_vec[v.index()] = role;
    }
    check_roles(&role_vec, meta.as_ref())?;

    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in &normalized {
        adjacency[u.index()].push(v);
        adjacency[v.index()].push(u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph { n, edges: normalized, adjacency, roles: role_vec, meta })
}

fn check_roles(roles: &[VertexRole], meta: Option<&GraphMeta>) -> Result<(), GraphError> {
    for (i, role) in roles.iter().enumerate() {
        let vertex = VertexId::from(i);
        let bad = |reason: String| Err(GraphError::InvalidRole { vertex, reason });
        match role {
            VertexRole::Subdivision { edge, position } => {
                if *position == 0 {
                    return bad("subdivision positions start at 1".into());
                }
                if edge.0 == edge.1 || edge.0.index() >= roles.len() || edge.1.index() >= roles.len() {
                    return bad(format!("parent edge ({}, {}) is not a branch pair", edge.0, edge.1));
                }
                if let Some(GraphMeta::Kst { t, .. }) = meta {
                    if position > t {
                        return bad(format!("position {position} exceeds t = {t}"));
                    }
                }
            }
            VertexRole::Line { class } => {
                if let Some(GraphMeta::Gk { k, .. }) = meta {
                    if class > k {
                        return bad(format!("parallel class {class} exceeds k = {k}"));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

impl Graph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted, normalized edge list. The position in this list is the edge id.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId::from)
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Position of `{u, v}` in [`Graph::edges`].
    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn role(&self, v: VertexId) -> &VertexRole {
        &self.roles[v.index()]
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn meta(&self) -> Option<&GraphMeta> {
        self.meta.as_ref()
    }

    /// Returns `Err` with the pair (0, w) for the smallest unreachable `w`.
    pub fn check_connected(&self) -> Result<(), GraphError> {
        if self.n == 0 {
            return Ok(());
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !std::mem::replace(&mut seen[w.index()], true) {
                    queue.push_back(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(w) => Err(GraphError::Disconnected(VertexId(0), VertexId::from(w))),
            None => Ok(()),
        }
    }

    /// Same vertex set and roles, only the edges accepted by `keep`.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(VertexId, VertexId) -> bool) -> Graph {
        let edges: Vec<_> = self.edges.iter().copied().filter(|&(u, v)| keep(u, v)).collect();
        let mut adjacency = vec![Vec::new(); self.n];
        for &(u, v) in &edges {
            adjacency[u.index()].push(v);
            adjacency[v.index()].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { n: self.n, edges, adjacency, roles: self.roles.clone(), meta: self.meta.clone() }
    }
}

/// Role map keyed by decimal vertex ids, emitted in numeric order.
struct RoleMap(Vec<VertexRole>);

impl Serialize for RoleMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (i, role) in self.0.iter().enumerate() {
            map.serialize_entry(&i.to_string(), role)?;
        }
        map.end()
    }
}

#[derive(Deserialize)]
struct GraphDocument {
    n: usize,
    edges: Vec<[u32; 2]>,
    #[serde(default, deserialize_with = "deserialize_roles")]
    roles: BTreeMap<VertexId, VertexRole>,
    #[serde(default)]
    meta: Option<GraphMeta>,
}

fn deserialize_roles<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> Result<BTreeMap<VertexId, VertexRole>, D::Error> {
    let raw = BTreeMap::<String, VertexRole>::deserialize(deserializer)?;
    raw.into_iter()
        .map(|(k, role)| {
            k.parse::<u32>()
                .map(|id| (VertexId(id), role))
                .map_err(|_| D::Error::custom(format!("role key {k:?} is not a vertex id")))
        })
        .collect()
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            n: usize,
            edges: Vec<[u32; 2]>,
            roles: RoleMap,
            #[serde(skip_serializing_if = "Option::is_none")]
            meta: &'a Option<GraphMeta>,
        }
        Doc {
            n: self.n,
            edges: self.edges.iter().map(|(u, v)| [u.0, v.0]).collect(),
            roles: RoleMap(self.roles.clone()),
            meta: &self.meta,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = GraphDocument::deserialize(deserializer)?;
        let edges: Vec<(u32, u32)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        build_graph(doc.n, &edges, doc.roles, doc.meta).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        build_graph(n, edges, BTreeMap::new(), None)
    }

    #[test]
    fn triangle() {
        let g = plain(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.vertices().all(|v| g.degree(v) == 2));
        assert_eq!(g.edges()[0], (VertexId(0), VertexId(1)));
    }

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert_eq!(plain(2, &[(0, 0)]), Err(GraphError::Loop(VertexId(0))));
        assert_eq!(
            plain(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(VertexId(0), VertexId(1)))
        );
        assert!(matches!(plain(2, &[(0, 2)]), Err(GraphError::EdgeOutOfRange { u: 0, v: 2, .. })));
    }

    #[test]
    fn role_ranges_follow_meta() {
        let mut roles = BTreeMap::new();
        roles.insert(VertexId(0), VertexRole::Branch);
        roles.insert(VertexId(1), VertexRole::Branch);
        roles.insert(VertexId(2), VertexRole::Subdivision { edge: (VertexId(0), VertexId(1)), position: 2 });
        let meta = Some(GraphMeta::Kst { s: 2, t: 1 });
        let err = build_graph(3, &[(0, 2), (1, 2)], roles, meta).unwrap_err();
        assert!(matches!(err, GraphError::InvalidRole { vertex: VertexId(2), .. }));
    }

    #[test]
    fn disconnected_pair_is_reported() {
        let g = plain(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.check_connected(), Err(GraphError::Disconnected(VertexId(0), VertexId(2))));
    }

    #[test]
    fn json_sorts_edges_and_roles_numerically() {
        let mut roles = BTreeMap::new();
        for i in 0..11u32 {
            roles.insert(VertexId(i), VertexRole::Plain);
        }
        let edges: Vec<_> = (0..10u32).map(|i| (i + 1, i)).collect();
        let g = build_graph(11, &edges, roles, None).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with(r#"{"n":11,"edges":[[0,1],[1,2]"#));
        let two = text.find(r#""2":"#).unwrap();
        let ten = text.find(r#""10":"#).unwrap();
        assert!(two < ten);
        let back: Graph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn path_validation() {
        let g = plain(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(Path::new(&g, vec![VertexId(0), VertexId(1), VertexId(2)]).is_ok());
        assert_eq!(
            Path::new(&g, vec![VertexId(0), VertexId(2)]),
            Err(GraphError::NotAdjacent(VertexId(0), VertexId(2)))
        );
        assert_eq!(
            Path::new(&g, vec![VertexId(0), VertexId(1), VertexId(0)]),
            Err(GraphError::RepeatedVertex(VertexId(0)))
        );
    }
}
