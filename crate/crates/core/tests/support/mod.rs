//! Test-side oracles and seeded fixture generators shared by the oracle
//! suites and the acceptance run. Nothing here calls the code under test
//! except to build inputs and validate drawings.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use geodesy_core::geometry::{orientation, Point2, Rational};
use geodesy_core::graph::{build_graph, Graph, Path, VertexId};
use geodesy_core::layout::{validate_drawing, Drawing};
use geodesy_core::meets::{MeetIndex, MeetKind};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A closed segment, possibly degenerate to a point.
#[derive(Debug, Clone)]
struct Piece(Point2, Point2);

fn param_on(a: &Point2, b: &Point2, p: &Point2) -> Rational {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

fn segment_intersection(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Option<Piece> {
    let rx = &b.x - &a.x;
    let ry = &b.y - &a.y;
    let sx = &d.x - &c.x;
    let sy = &d.y - &c.y;
    let denom = &rx * &sy - &ry * &sx;
    let zero = Rational::zero();
    let one = Rational::one();
    if !denom.is_zero() {
        let qx = &c.x - &a.x;
        let qy = &c.y - &a.y;
        let t = (&qx * &sy - &qy * &sx) / &denom;
        let u = (&qx * &ry - &qy * &rx) / &denom;
        if t < zero || t > one || u < zero || u > one {
            return None;
        }
        let p = a.lerp(b, &t);
        return Some(Piece(p.clone(), p));
    }
    if orientation(a, b, c) != Ordering::Equal {
        return None;
    }
    let tc = param_on(a, b, c);
    let td = param_on(a, b, d);
    let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
    let lo = if lo > zero { lo } else { zero };
    let hi = if hi < one { hi } else { one };
    if lo > hi {
        return None;
    }
    Some(Piece(a.lerp(b, &lo), a.lerp(b, &hi)))
}

fn pieces_touch(p: &Piece, q: &Piece) -> bool {
    segment_intersection(&p.0, &p.1, &q.0, &q.1).is_some()
}

fn segment_intersection_any(p: &Piece, q: &Piece) -> bool {
    if p.0 == p.1 && q.0 == q.1 {
        return p.0 == q.0;
    }
    if p.0 == p.1 {
        return on_closed(&q.0, &q.1, &p.0);
    }
    if q.0 == q.1 {
        return on_closed(&p.0, &p.1, &q.0);
    }
    pieces_touch(p, q)
}

fn on_closed(a: &Point2, b: &Point2, p: &Point2) -> bool {
    orientation(a, b, p) == Ordering::Equal && {
        let t = param_on(a, b, p);
        t >= Rational::zero() && t <= Rational::one()
    }
}

pub struct OracleComponent {
    pub has_vertex: bool,
}

/// Components of the intersection of the drawn paths `p` and `q`.
pub fn oracle(d: &Drawing, p: &Path, q: &Path) -> Vec<OracleComponent> {
    let mut pieces = Vec::new();
    for (a, b) in p.edges() {
        for (c, e) in q.edges() {
            if let Some(piece) = segment_intersection(d.position(a), d.position(b), d.position(c), d.position(e)) {
                pieces.push(piece);
            }
        }
    }
    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if segment_intersection_any(&pieces[i], &pieces[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let vertex_points: BTreeSet<&Point2> = d.positions().iter().collect();
    let roots: BTreeSet<usize> = (0..pieces.len()).map(|i| find(&mut parent, i)).collect();
    roots
        .into_iter()
        .map(|r| OracleComponent {
            has_vertex: (0..pieces.len()).filter(|&i| find(&mut parent, i) == r).any(|i| {
                let pc = &pieces[i];
                vertex_points.iter().any(|v| if pc.0 == pc.1 { **v == pc.0 } else { on_closed(&pc.0, &pc.1, v) })
            }),
        })
        .collect()
}

/// Panics unless the meet report matches the oracle, in both argument orders.
pub fn check(index: &MeetIndex<'_>, p: &Path, q: &Path) {
    let report = index.count_meets(p, q).unwrap();
    let expected = oracle(index.drawing(), p, q);
    assert_eq!(report.meet_count(), expected.len(), "pair {p} / {q}: {report:?}");
    let with_vertex = report.meets.iter().filter(|m| m.kind != MeetKind::ProperCrossing).count();
    assert_eq!(with_vertex, expected.iter().filter(|c| c.has_vertex).count(), "pair {p} / {q}");
    let back = index.count_meets(q, p).unwrap();
    assert_eq!(back.meet_count(), report.meet_count());
}

pub fn random_walk(g: &Graph, rng: &mut ChaCha8Rng, max_len: usize) -> Option<Path> {
    let start = VertexId(rng.gen_range(0..g.n() as u32));
    let mut vs = vec![start];
    let len = rng.gen_range(1..=max_len);
    for _ in 0..len {
        let cur = *vs.last().unwrap();
        let options: Vec<VertexId> = g.neighbors(cur).iter().copied().filter(|w| !vs.contains(w)).collect();
        match options.choose(rng) {
            Some(&w) => vs.push(w),
            None => break,
        }
    }
    (vs.len() >= 2).then(|| Path::new(g, vs).unwrap())
}

/// A random graph on 5 to 9 grid points with a valid straight-line drawing.
pub fn random_drawn_graph(rng: &mut ChaCha8Rng) -> (Graph, Drawing) {
    loop {
        let n = rng.gen_range(5..=9);
        let mut pts = BTreeSet::new();
        while pts.len() < n {
            pts.insert((rng.gen_range(0..7i64), rng.gen_range(0..7i64)));
        }
        let mut pts: Vec<_> = pts.into_iter().collect();
        pts.shuffle(rng);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.gen_bool(0.45) {
                    edges.push((u, v));
                }
            }
        }
        let g = build_graph(n, &edges, Default::default(), None).unwrap();
        let d = Drawing::new(pts.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect());
        if g.m() >= 4 && validate_drawing(&g, &d).unwrap().valid() {
            return (g, d);
        }
    }
}


pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = build_graph(n, &edges, Default::default(), None).unwrap();
        if g.check_connected().is_ok() {
            return g;
        }
    }
}

/// All shortest `u`-`v` paths by depth-first search over simple paths,
/// without distance labels: returns the number of minimum-length paths
/// and that length.
pub fn brute_force_count(g: &Graph, u: VertexId, v: VertexId) -> (BigUint, usize) {
    fn walk(g: &Graph, cur: VertexId, v: VertexId, seen: &mut Vec<bool>, len: usize, best: &mut (usize, u64)) {
        if len > best.0 {
            return;
        }
        if cur == v {
            if len < best.0 {
                *best = (len, 1);
            } else {
                best.1 += 1;
            }
            return;
        }
        for &w in g.neighbors(cur) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                walk(g, w, v, seen, len + 1, best);
                seen[w.index()] = false;
            }
        }
    }
    let mut seen = vec![false; g.n()];
    seen[u.index()] = true;
    let mut best = (usize::MAX, 0);
    walk(g, u, v, &mut seen, 0, &mut best);
    (BigUint::from(best.1), best.0)
}
