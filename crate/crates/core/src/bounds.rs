//! Exact crossing-count bounds used in the lower-bound arguments.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("crossing lemma needs m > 4n, but m = {m} and 4n = {four_n}")]
    TooFewEdges { m: u64, four_n: u64 },
    #[error("complete-graph bound needs C(s,2) >= 4s, but s = {0}")]
    TooFewBranches(u64),
    #[error("order k must be at least 2, got {0}")]
    OrderTooSmall(u64),
}

/// `m³ / (64 n²)`, the crossing lemma's lower bound for a graph with `m > 4n`.
pub fn crossing_lemma_bound(n: u64, m: u64) -> Result<Rational, BoundError> {
    if m <= 4 * n {
        return Err(BoundError::TooFewEdges { m, four_n: 4 * n });
    }
    Ok(lemma(n, m))
}

fn lemma(n: u64, m: u64) -> Rational {
    let (n, m) = (BigInt::from(n), BigInt::from(m));
    Rational::new(&m * &m * &m, BigInt::from(64) * &n * &n)
}

/// The same bound for K_s, `C(s,2)³ / (64 s²) = s (s-1)³ / 512`, under the
/// non-strict hypothesis `C(s,2) >= 4s`, i.e. `s >= 9`.
pub fn complete_graph_crossing_bound(s: u64) -> Result<Rational, BoundError> {
    let pairs = s * s.saturating_sub(1) / 2;
    if pairs < 4 * s {
        return Err(BoundError::TooFewBranches(s));
    }
    Ok(lemma(s, pairs))
}

/// Vertex and edge counts of G_k and of its point-line incidence subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IncidenceCounts {
    pub k: u64,
    /// `2k² + k`.
    pub n: u64,
    /// Edges of G_k: incidences plus parallel line pairs.
    pub m_full: u64,
    /// `k²(k+1)` point-line incidences.
    pub m_incidence: u64,
}

pub fn incidence_counts(k: u64) -> IncidenceCounts {
    let n = 2 * k * k + k;
    let m_incidence = k * k * (k + 1);
    let parallel_pairs = (k + 1) * k * (k - 1) / 2;
    IncidenceCounts { k, n, m_full: m_incidence + parallel_pairs, m_incidence }
}

/// Whether the incidence subgraph has enough edges for the crossing lemma.
pub fn incidence_lemma_applies(k: u64) -> bool {
    let c = incidence_counts(k);
    c.m_incidence > 4 * c.n
}

/// Both sides of `(2k² + k − 1) / 2 < k³ / 128`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceInequality {
    pub k: u64,
    /// `(2k² + k − 1) / 2`.
    pub lhs: Rational,
    /// `k³ / 128`.
    pub rhs: Rational,
}

impl IncidenceInequality {
    pub fn holds(&self) -> bool {
        self.lhs < self.rhs
    }
}

pub fn incidence_inequality(k: u64) -> Result<IncidenceInequality, BoundError> {
    if k < 2 {
        return Err(BoundError::OrderTooSmall(k));
    }
    let big = BigInt::from(k);
    let lhs = Rational::new(BigInt::from(2) * &big * &big + &big - 1, BigInt::from(2));
    let rhs = Rational::new(&big * &big * &big, BigInt::from(128));
    Ok(IncidenceInequality { k, lhs, rhs })
}

/// True iff `(2k² + k − 1) / 2 < k³ / 128` in exact arithmetic.
pub fn incidence_inequality_holds(k: u64) -> Result<bool, BoundError> {
    incidence_inequality(k).map(|i| i.holds())
}

/// The smallest `k >= 2` for which the inequality holds.
pub fn incidence_threshold() -> u64 {
    (2..).find(|&k| incidence_inequality_holds(k).unwrap_or(false)).expect("cubic eventually dominates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, ratio};

    #[test]
    fn lemma_boundary() {
        assert_eq!(crossing_lemma_bound(10, 40), Err(BoundError::TooFewEdges { m: 40, four_n: 40 }));
        assert_eq!(crossing_lemma_bound(136, 576).unwrap(), ratio(576 * 576 * 576, 64 * 136 * 136));
    }

    #[test]
    fn complete_graph_at_nine() {
        assert_eq!(complete_graph_crossing_bound(9).unwrap(), rat(9));
        assert_eq!(complete_graph_crossing_bound(8), Err(BoundError::TooFewBranches(8)));
        for s in 9..20u64 {
            assert_eq!(complete_graph_crossing_bound(s).unwrap(), ratio((s * (s - 1).pow(3)) as i64, 512));
        }
    }

    #[test]
    fn inequality_values() {
        let i = incidence_inequality(131).unwrap();
        assert_eq!(i.lhs, rat(17226));
        assert_eq!(i.rhs, ratio(2248091, 128));
        let i = incidence_inequality(128).unwrap();
        assert_eq!((i.lhs, i.rhs), (ratio(32895, 2), rat(16384)));
        assert_eq!(incidence_threshold(), 129);
        assert!(incidence_inequality(1).is_err());
    }

    #[test]
    fn lemma_applies_from_eight() {
        assert!(!incidence_lemma_applies(7));
        assert!(incidence_lemma_applies(8));
        assert_eq!(incidence_counts(8).n, 136);
        assert_eq!(incidence_counts(3).m_full, 48);
    }
}
