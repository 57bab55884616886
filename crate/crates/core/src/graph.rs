//! Bipartite graphs with one-sided bitset adjacency, and bi-hole certificates.
//!
//! Vertices are dense 0-based indices on each side. Rows are indexed by the
//! A side; the B side's adjacency is derived on demand.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which part of the bipartition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// An `n_a x n_b` bipartite graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_a: usize,
    n_b: usize,
    rows: Vec<FixedBitSet>,
    edge_count: usize,
}

impl BipartiteGraph {
    /// Builds a graph from `(a, b)` pairs. Duplicate pairs collapse.
    pub fn new(n_a: usize, n_b: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![FixedBitSet::with_capacity(n_b); n_a];
        for &(a, b) in edges {
            if a >= n_a || b >= n_b {
                return Err(Error::EdgeOutOfRange { a, b, n_a, n_b });
            }
            rows[a].insert(b);
        }
        Ok(Self::from_rows(n_b, rows))
    }

    pub fn empty(n_a: usize, n_b: usize) -> Self {
        Self::from_rows(n_b, vec![FixedBitSet::with_capacity(n_b); n_a])
    }

    pub fn complete(n_a: usize, n_b: usize) -> Self {
        let mut row = FixedBitSet::with_capacity(n_b);
        row.insert_range(..);
        Self::from_rows(n_b, vec![row; n_a])
    }

    /// Rows must all have length `n_b`.
    pub(crate) fn from_rows(n_b: usize, rows: Vec<FixedBitSet>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == n_b));
        let edge_count = rows.iter().map(|r| r.count_ones(..)).sum();
        Self {
            n_a: rows.len(),
            n_b,
            rows,
            edge_count,
        }
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn part_size(&self, side: Side) -> usize {
        match side {
            Side::A => self.n_a,
            Side::B => self.n_b,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_square(&self) -> bool {
        self.n_a == self.n_b
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    /// Neighborhood of `a` as a bitset over B.
    pub fn row(&self, a: usize) -> &FixedBitSet {
        &self.rows[a]
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[a].ones()
    }

    pub fn degree(&self, a: usize) -> usize {
        self.rows[a].count_ones(..)
    }

    /// Neighborhood of `b` as a bitset over A.
    pub fn column(&self, b: usize) -> FixedBitSet {
        let mut col = FixedBitSet::with_capacity(self.n_a);
        for (a, row) in self.rows.iter().enumerate() {
            if row.contains(b) {
                col.insert(a);
            }
        }
        col
    }

    pub fn b_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_b];
        for row in &self.rows {
            for b in row.ones() {
                deg[b] += 1;
            }
        }
        deg
    }

    /// Edges in lexicographic `(a, b)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.ones().map(move |b| (a, b)))
    }

    pub fn degree_profile(&self, side: Side) -> DegreeProfile {
        let degrees = match side {
            Side::A => (0..self.n_a).map(|a| self.degree(a)).collect(),
            Side::B => self.b_degrees(),
        };
        DegreeProfile::new(degrees)
    }

    pub fn max_a_degree(&self) -> usize {
        (0..self.n_a).map(|a| self.degree(a)).max().unwrap_or(0)
    }

    /// Rejects the graph unless every A-vertex has degree at most `bound`.
    pub fn check_a_degree(&self, bound: usize) -> Result<()> {
        for a in 0..self.n_a {
            let degree = self.degree(a);
            if degree > bound {
                return Err(Error::DegreeTooLarge {
                    vertex: a,
                    degree,
                    bound,
                });
            }
        }
        Ok(())
    }

    /// Side size `n` if the graph is `n x n`.
    pub fn square_size(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.n_a)
        } else {
            Err(Error::NotSquare {
                n_a: self.n_a,
                n_b: self.n_b,
            })
        }
    }

    /// The bipartite complement: same parts, `(a, b)` present iff absent here.
    pub fn complement(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut c = r.clone();
                c.toggle_range(..);
                c
            })
            .collect();
        Self::from_rows(self.n_b, rows)
    }

    /// Swaps the roles of A and B.
    pub fn transpose(&self) -> Self {
        let rows = (0..self.n_b).map(|b| self.column(b)).collect();
        Self::from_rows(self.n_a, rows)
    }

    /// Subgraph induced on the listed A- and B-vertices. Vertex `a_keep[i]`
    /// becomes `i` in the result, likewise for B.
    pub fn induced(&self, a_keep: &[usize], b_keep: &[usize]) -> Self {
        let rows = a_keep
            .iter()
            .map(|&a| {
                let mut row = FixedBitSet::with_capacity(b_keep.len());
                for (j, &b) in b_keep.iter().enumerate() {
                    if self.rows[a].contains(b) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Self::from_rows(b_keep.len(), rows)
    }

    /// A copy of this graph with extra edges.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Self> {
        let mut rows = self.rows.clone();
        for &(a, b) in extra {
            if a >= self.n_a || b >= self.n_b {
                return Err(Error::EdgeOutOfRange {
                    a,
                    b,
                    n_a: self.n_a,
                    n_b: self.n_b,
                });
            }
            rows[a].insert(b);
        }
        Ok(Self::from_rows(self.n_b, rows))
    }

    /// A copy of this graph with the listed edges removed (absent ones are ignored).
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Self {
        let mut rows = self.rows.clone();
        for &(a, b) in removed {
            if a < self.n_a && b < self.n_b {
                rows[a].set(b, false);
            }
        }
        Self::from_rows(self.n_b, rows)
    }

    /// Pads every A-vertex up to degree `min(target, n_b)` by joining it to the
    /// lowest-indexed B-vertices it is not yet adjacent to. Bi-holes of the
    /// padded graph are bi-holes of `self`.
    pub fn pad_a_degrees(&self, target: usize) -> Self {
        let target = target.min(self.n_b);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = r.clone();
                let mut deg = row.count_ones(..);
                let mut b = 0;
                while deg < target {
                    if !row.contains(b) {
                        row.insert(b);
                        deg += 1;
                    }
                    b += 1;
                }
                row
            })
            .collect();
        Self::from_rows(self.n_b, rows)
    }

    /// A-vertices with at least one neighbor in `set` (a bitset over B).
    pub fn neighborhood_of_b_set(&self, set: &FixedBitSet) -> Vec<usize> {
        (0..self.n_a)
            .filter(|&a| !self.rows[a].is_disjoint(set))
            .collect()
    }
}

/// Per-vertex degrees on one side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub max: usize,
    pub min: usize,
}

impl DegreeProfile {
    pub fn new(degrees: Vec<usize>) -> Self {
        let max = degrees.iter().copied().max().unwrap_or(0);
        let min = degrees.iter().copied().min().unwrap_or(0);
        Self { degrees, max, min }
    }
}

/// A claimed bi-hole `(X, Y)` with `X ⊆ A`, `Y ⊆ B`. Indices are kept sorted
/// and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiHoleCertificate {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl BiHoleCertificate {
    pub fn new(mut x: Vec<usize>, mut y: Vec<usize>) -> Self {
        x.sort_unstable();
        x.dedup();
        y.sort_unstable();
        y.dedup();
        Self { x, y }
    }

    /// Size of the bi-hole; the smaller of the two sides if unbalanced.
    pub fn size(&self) -> usize {
        self.x.len().min(self.y.len())
    }

    pub fn is_balanced(&self) -> bool {
        self.x.len() == self.y.len()
    }

    /// Maps local indices back through `a_map`/`b_map` (local `i` ↦ `map[i]`).
    pub fn lift(&self, a_map: &[usize], b_map: &[usize]) -> Self {
        Self::new(
            self.x.iter().map(|&i| a_map[i]).collect(),
            self.y.iter().map(|&j| b_map[j]).collect(),
        )
    }

    /// Drops trailing indices so both sides have exactly `k` vertices.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            x: self.x.iter().copied().take(k).collect(),
            y: self.y.iter().copied().take(k).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// True iff the certificate is balanced and spans no edge of `g`.
pub fn verify_bihole(g: &BipartiteGraph, c: &BiHoleCertificate) -> Result<bool> {
    for (side, set, size) in [('A', &c.x, g.n_a()), ('B', &c.y, g.n_b())] {
        if let Some(&index) = set.iter().find(|&&v| v >= size) {
            return Err(Error::CertificateOutOfRange { side, index, size });
        }
    }
    if !c.is_balanced() {
        return Ok(false);
    }
    let mut y = FixedBitSet::with_capacity(g.n_b());
    y.extend(c.y.iter().copied());
    Ok(c.x.iter().all(|&a| g.row(a).is_disjoint(&y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c8() -> BipartiteGraph {
        BipartiteGraph::new(
            4,
            4,
            &[
                (0, 0),
                (0, 1),
                (1, 1),
                (1, 2),
                (2, 2),
                (2, 3),
                (3, 3),
                (3, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_graph_has_no_edges() {
        let g = BipartiteGraph::new(2, 2, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g, BipartiteGraph::empty(2, 2));
    }

    #[test]
    fn cycle_has_all_a_degrees_two() {
        let g = c8();
        assert_eq!(g.edge_count(), 8);
        let p = g.degree_profile(Side::A);
        assert_eq!(p.degrees, vec![2, 2, 2, 2]);
        assert_eq!((p.min, p.max), (2, 2));
    }

    #[test]
    fn complete_from_all_pairs() {
        let pairs: Vec<_> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        let g = BipartiteGraph::new(3, 3, &pairs).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g, BipartiteGraph::complete(3, 3));
    }

    #[test]
    fn duplicates_collapse() {
        let g = BipartiteGraph::new(2, 2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        let err = BipartiteGraph::new(2, 3, &[(0, 0), (1, 3)]).unwrap_err();
        assert_eq!(
            err,
            Error::EdgeOutOfRange {
                a: 1,
                b: 3,
                n_a: 2,
                n_b: 3
            }
        );
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            BipartiteGraph::complete(3, 3).complement(),
            BipartiteGraph::empty(3, 3)
        );
        let matching = BipartiteGraph::new(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let c = matching.complement();
        assert_eq!(c.edge_count(), 6);
        assert!((0..3).all(|a| c.degree(a) == 2));
        assert_eq!(c.complement(), matching);
    }

    #[test]
    fn complement_of_non_multiple_of_64_width() {
        let g = BipartiteGraph::new(2, 70, &[(0, 69), (1, 0)]).unwrap();
        let c = g.complement();
        assert_eq!(c.edge_count(), 2 * 70 - 2);
        assert!(!c.has_edge(0, 69));
        assert!(c.has_edge(0, 68));
    }

    #[test]
    fn verify_examples() {
        let empty = BipartiteGraph::empty(3, 3);
        let full = BiHoleCertificate::new(vec![0, 1, 2], vec![0, 1, 2]);
        assert!(verify_bihole(&empty, &full).unwrap());

        let k33 = BipartiteGraph::complete(3, 3);
        assert!(!verify_bihole(&k33, &BiHoleCertificate::new(vec![0], vec![0])).unwrap());

        let g = c8();
        assert!(verify_bihole(&g, &BiHoleCertificate::new(vec![0], vec![2])).unwrap());
        assert!(!verify_bihole(&g, &BiHoleCertificate::new(vec![0], vec![1])).unwrap());
    }

    #[test]
    fn verify_rejects_unbalanced_and_out_of_range() {
        let g = BipartiteGraph::empty(3, 3);
        assert!(!verify_bihole(&g, &BiHoleCertificate::new(vec![0, 1], vec![0])).unwrap());
        assert!(matches!(
            verify_bihole(&g, &BiHoleCertificate::new(vec![3], vec![0])),
            Err(Error::CertificateOutOfRange {
                side: 'A',
                index: 3,
                ..
            })
        ));
        assert!(matches!(
            verify_bihole(&g, &BiHoleCertificate::new(vec![0], vec![5])),
            Err(Error::CertificateOutOfRange {
                side: 'B',
                index: 5,
                ..
            })
        ));
    }

    #[test]
    fn transpose_and_induced() {
        let g = c8();
        let t = g.transpose();
        assert_eq!(t.edge_count(), 8);
        assert!(t.has_edge(1, 0));
        assert_eq!(t.transpose(), g);

        let sub = g.induced(&[0, 2], &[0, 2, 3]);
        assert_eq!(sub.n_a(), 2);
        assert_eq!(sub.n_b(), 3);
        assert_eq!(
            sub.edges().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1), (1, 2)]
        );
    }

    #[test]
    fn padding_reaches_target_degree() {
        let g = BipartiteGraph::new(3, 4, &[(0, 2), (1, 0), (1, 3)]).unwrap();
        let p = g.pad_a_degrees(2);
        assert!((0..3).all(|a| p.degree(a) == 2));
        assert!(g.edges().all(|(a, b)| p.has_edge(a, b)));
        assert_eq!(
            BipartiteGraph::empty(2, 1).pad_a_degrees(3).max_a_degree(),
            1
        );
    }

    #[test]
    fn certificate_normalizes_and_serializes() {
        let c = BiHoleCertificate::new(vec![3, 1, 1], vec![2, 0]);
        assert_eq!(c.x, vec![1, 3]);
        assert_eq!(c.to_json(), r#"{"x":[1,3],"y":[0,2]}"#);
        let back: BiHoleCertificate = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
