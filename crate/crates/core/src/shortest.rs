//! All-pairs BFS with shortest-path multiplicities and the geodetic certificate.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Graph, GraphError, Path, VertexId};

const UNREACHED: u32 = u32::MAX;

/// Distances, shortest-path counts and predecessor sets for every ordered pair.
#[derive(Debug, Clone)]
pub struct ShortestPathTable {
    n: usize,
    dist: Vec<u32>,
    count: Vec<BigUint>,
    preds: Vec<Vec<Vec<VertexId>>>,
}

struct SourceRow {
    dist: Vec<u32>,
    count: Vec<BigUint>,
    preds: Vec<Vec<VertexId>>,
}

fn bfs_from(g: &Graph, source: VertexId) -> SourceRow {
    let n = g.n();
    let mut dist = vec![UNREACHED; n];
    let mut count = vec![BigUint::zero(); n];
    let mut preds = vec![Vec::new(); n];
    dist[source.index()] = 0;
    count[source.index()] = BigUint::one();
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let next = dist[v.index()] + 1;
        for &w in g.neighbors(v) {
            let wi = w.index();
            if dist[wi] == UNREACHED {
                dist[wi] = next;
                queue.push_back(w);
            }
            if dist[wi] == next {
                let add = count[v.index()].clone();
                count[wi] += add;
                preds[wi].push(v);
            }
        }
    }
    // BFS pops in nondecreasing distance but neighbor order interleaves sources.
    for p in &mut preds {
        p.sort_unstable();
    }
    SourceRow { dist, count, preds }
}

/// Runs one BFS per source (in parallel) and merges the rows by source index.
pub fn all_pairs_shortest(g: &Graph) -> Result<ShortestPathTable, GraphError> {
    g.check_connected()?;
    let n = g.n();
    let rows: Vec<SourceRow> = (0..n).into_par_iter().map(|s| bfs_from(g, VertexId::from(s))).collect();
    let mut dist = Vec::with_capacity(n * n);
    let mut count = Vec::with_capacity(n * n);
    let mut preds = Vec::with_capacity(n);
    for row in rows {
        dist.extend(row.dist);
        count.extend(row.count);
        preds.push(row.preds);
    }
    Ok(ShortestPathTable { n, dist, count, preds })
}

impl ShortestPathTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> u32 {
        self.dist[u.index() * self.n + v.index()]
    }

    pub fn count(&self, u: VertexId, v: VertexId) -> &BigUint {
        &self.count[u.index() * self.n + v.index()]
    }

    /// Neighbors of `v` one step closer to `u`, sorted.
    pub fn preds(&self, u: VertexId, v: VertexId) -> &[VertexId] {
        &self.preds[u.index()][v.index()]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Shortest `u`-`v` paths in lexicographic order, at most `limit` of them.
    pub fn shortest_paths_lex(&self, u: VertexId, v: VertexId, limit: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = vec![u];
        self.extend_lex(v, &mut stack, limit, &mut out);
        out
    }

    fn extend_lex(&self, target: VertexId, stack: &mut Vec<VertexId>, limit: usize, out: &mut Vec<Path>) {
        if out.len() >= limit {
            return;
        }
        let cur = *stack.last().expect("stack starts with the source");
        if cur == target {
            out.push(Path::from_vertices_unchecked(stack.clone()));
            return;
        }
        // Next hops toward `target` are exactly the predecessors of `cur` seen from `target`.
        for &next in self.preds(target, cur) {
            stack.push(next);
            self.extend_lex(target, stack, limit, out);
            stack.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
}

/// Two distinct shortest paths between the same endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodeticWitness {
    pub u: VertexId,
    pub v: VertexId,
    pub paths: [Path; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodeticReport {
    pub is_geodetic: bool,
    pub witness: Option<GeodeticWitness>,
    pub diameter: u32,
}

/// Scans pairs `u < v` in lexicographic order for a multiplicity above one.
pub fn geodetic_report(table: &ShortestPathTable) -> GeodeticReport {
    let n = table.n();
    let witness = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (VertexId::from(u), VertexId::from(v))))
        .find(|&(u, v)| !table.count(u, v).is_one())
        .map(|(u, v)| {
            let mut found = table.shortest_paths_lex(u, v, 2).into_iter();
            let first = found.next().expect("count > 1 implies two paths");
            let second = found.next().expect("count > 1 implies two paths");
            GeodeticWitness { u, v, paths: [first, second] }
        });
    GeodeticReport { is_geodetic: witness.is_none(), witness, diameter: table.diameter() }
}

pub fn is_geodetic(g: &Graph) -> Result<GeodeticReport, GraphError> {
    Ok(geodetic_report(&all_pairs_shortest(g)?))
}

/// The shortest path from `u` to `v`, or [`GraphError::Ambiguous`] with the two
/// lexicographically smallest ones.
pub fn unique_shortest_path(table: &ShortestPathTable, u: VertexId, v: VertexId) -> Result<Path, GraphError> {
    for w in [u, v] {
        if w.index() >= table.n() {
            return Err(GraphError::VertexOutOfRange { vertex: w.0, n: table.n() });
        }
    }
    if !table.count(u, v).is_one() {
        let mut found = table.shortest_paths_lex(u, v, 2).into_iter();
        let first = found.next().expect("connected table");
        let second = found.next().expect("count > 1 implies two paths");
        return Err(GraphError::Ambiguous { u, v, first, second });
    }
    let mut vertices = vec![v];
    let mut cur = v;
    while cur != u {
        cur = table.preds(u, cur)[0];
        vertices.push(cur);
    }
    vertices.reverse();
    Ok(Path::from_vertices_unchecked(vertices))
}

/// Common part of two shortest paths, oriented along `p`.
///
/// Fails with [`GraphError::NotContiguous`] when the shared vertices do not form
/// one subpath of both inputs, which cannot happen for shortest paths of a
/// geodetic graph.
pub fn shared_subpath(p: &Path, q: &Path) -> Result<Option<Path>, GraphError> {
    let in_p: Vec<(usize, usize)> = p
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| q.vertices().iter().position(|w| w == v).map(|j| (i, j)))
        .collect();
    let Some(&(first_i, first_j)) = in_p.first() else {
        return Ok(None);
    };
    let contiguous_p = in_p.iter().enumerate().all(|(k, &(i, _))| i == first_i + k);
    let forward = in_p.iter().enumerate().all(|(k, &(_, j))| j == first_j + k);
    let backward = in_p.iter().enumerate().all(|(k, &(_, j))| first_j >= k && j == first_j - k);
    if !contiguous_p || !(forward || backward) {
        return Err(GraphError::NotContiguous(p.clone(), q.clone()));
    }
    let vertices = in_p.iter().map(|&(i, _)| p.vertices()[i]).collect();
    Ok(Some(Path::from_vertices_unchecked(vertices)))
}

/// All shortest `u`-`v` paths found by exhaustive search over simple paths of
/// increasing length. Does not consult a BFS table; used as a cross-check.
pub fn enumerate_shortest_paths(g: &Graph, u: VertexId, v: VertexId) -> Result<Vec<Path>, GraphError> {
    g.check_connected()?;
    for w in [u, v] {
        if w.index() >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: w.0, n: g.n() });
        }
    }
    let mut on_path = vec![false; g.n()];
    on_path[u.index()] = true;
    for length in 0..g.n() {
        let mut found = Vec::new();
        let mut stack = vec![u];
        simple_paths_of_length(g, v, length, &mut stack, &mut on_path, &mut found);
        if !found.is_empty() {
            found.sort();
            return Ok(found);
        }
    }
    Err(GraphError::Disconnected(u, v))
}

fn simple_paths_of_length(
    g: &Graph,
    target: VertexId,
    remaining: usize,
    stack: &mut Vec<VertexId>,
    on_path: &mut [bool],
    out: &mut Vec<Path>,
) {
    let cur = *stack.last().unwrap();
    if remaining == 0 {
        if cur == target {
            out.push(Path::from_vertices_unchecked(stack.clone()));
        }
        return;
    }
    if cur == target {
        return;
    }
    for &next in g.neighbors(cur) {
        if on_path[next.index()] {
            continue;
        }
        on_path[next.index()] = true;
        stack.push(next);
        simple_paths_of_length(g, target, remaining - 1, stack, on_path, out);
        stack.pop();
        on_path[next.index()] = false;
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::graph::build_graph;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        build_graph(n as usize, &edges, BTreeMap::new(), None).unwrap()
    }

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn four_cycle_has_two_antipodal_paths() {
        let g = cycle(4);
        let t = all_pairs_shortest(&g).unwrap();
        assert_eq!(t.dist(v(0), v(2)), 2);
        assert_eq!(t.count(v(0), v(2)), &BigUint::from(2u32));
        assert_eq!(t.preds(v(0), v(2)), &[v(1), v(3)]);
        let paths = enumerate_shortest_paths(&g, v(0), v(2)).unwrap();
        assert_eq!(paths.len(), 2);
        let report = geodetic_report(&t);
        assert!(!report.is_geodetic);
        let w = report.witness.unwrap();
        assert_eq!((w.u, w.v), (v(0), v(2)));
        assert_eq!(w.paths[0].vertices(), &[v(0), v(1), v(2)]);
        assert_eq!(w.paths[1].vertices(), &[v(0), v(3), v(2)]);
    }

    #[test]
    fn odd_cycle_is_geodetic() {
        let report = is_geodetic(&cycle(5)).unwrap();
        assert!(report.is_geodetic);
        assert_eq!(report.witness, None);
        assert_eq!(report.diameter, 2);
    }

    #[test]
    fn ambiguity_carries_both_paths() {
        let t = all_pairs_shortest(&cycle(6)).unwrap();
        match unique_shortest_path(&t, v(0), v(3)) {
            Err(GraphError::Ambiguous { first, second, .. }) => {
                assert_eq!(first.vertices(), &[v(0), v(1), v(2), v(3)]);
                assert_eq!(second.vertices(), &[v(0), v(5), v(4), v(3)]);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn zero_length_path() {
        let t = all_pairs_shortest(&cycle(5)).unwrap();
        let p = unique_shortest_path(&t, v(3), v(3)).unwrap();
        assert_eq!(p.vertices(), &[v(3)]);
        assert_eq!(p.len(), 0);
        let q = unique_shortest_path(&t, v(4), v(1)).unwrap();
        assert_eq!(q.vertices(), &[v(4), v(0), v(1)]);
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = build_graph(3, &[(0, 1)], BTreeMap::new(), None).unwrap();
        assert_eq!(all_pairs_shortest(&g).unwrap_err(), GraphError::Disconnected(v(0), v(2)));
        assert!(enumerate_shortest_paths(&g, v(0), v(1)).is_err());
    }

    #[test]
    fn shared_subpath_cases() {
        let p = Path::from_vertices_unchecked(vec![v(0), v(1), v(2), v(3)]);
        assert_eq!(shared_subpath(&p, &p).unwrap(), Some(p.clone()));
        let q = Path::from_vertices_unchecked(vec![v(5), v(2), v(1), v(4)]);
        assert_eq!(shared_subpath(&p, &q).unwrap().unwrap().vertices(), &[v(1), v(2)]);
        let r = Path::from_vertices_unchecked(vec![v(3), v(7)]);
        assert_eq!(shared_subpath(&p, &r).unwrap().unwrap().vertices(), &[v(3)]);
        let disjoint = Path::from_vertices_unchecked(vec![v(8), v(9)]);
        assert_eq!(shared_subpath(&p, &disjoint).unwrap(), None);
        let split = Path::from_vertices_unchecked(vec![v(0), v(6), v(2)]);
        assert!(matches!(shared_subpath(&p, &split), Err(GraphError::NotContiguous(..))));
        let reordered = Path::from_vertices_unchecked(vec![v(1), v(0), v(2)]);
        assert!(shared_subpath(&p, &reordered).is_err());
    }
}
