//! Exact maximum bi-hole search.
//!
//! [`max_bihole`] runs a branch and bound over subsets of A, keeping the set
//! of B-vertices that are still non-adjacent to every chosen A-vertex. Once
//! the optimum `k` is known, the reported certificate is the one with the
//! lexicographically smallest `x` (found by [`has_bihole`]).

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BiHoleCertificate, BipartiteGraph};

/// Largest part size [`brute_force_bihole`] will enumerate over.
pub const BRUTE_FORCE_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub k: usize,
    pub certificate: BiHoleCertificate,
    pub nodes_explored: u64,
    /// False when the node budget ran out; `k` is then only a lower bound.
    pub optimal: bool,
}

struct Search<'g> {
    g: &'g BipartiteGraph,
    best: usize,
    best_x: Vec<usize>,
    best_compat: FixedBitSet,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl Search<'_> {
    fn visit(&mut self, chosen: &mut Vec<usize>, cands: &[usize], compat: &FixedBitSet) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.exhausted = true;
            return;
        }

        let width = compat.count_ones(..);
        let value = chosen.len().min(width);
        if value > self.best {
            self.best = value;
            self.best_x = chosen.clone();
            self.best_compat = compat.clone();
        }

        // A candidate is only worth adding if it leaves more than `best`
        // compatible B-vertices.
        let cands: Vec<usize> = cands
            .iter()
            .copied()
            .filter(|&a| width - compat.intersection_count(self.g.row(a)) > self.best)
            .collect();

        for (i, &a) in cands.iter().enumerate() {
            let remaining = cands.len() - i;
            if (chosen.len() + remaining).min(width) <= self.best {
                break;
            }
            let mut next = compat.clone();
            next.difference_with(self.g.row(a));
            chosen.push(a);
            self.visit(chosen, &cands[i + 1..], &next);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Exact maximum bi-hole of `g`, with an optional node budget.
pub fn max_bihole(g: &BipartiteGraph, budget: Option<u64>) -> SolveResult {
    let mut order: Vec<usize> = (0..g.n_a()).collect();
    order.sort_by_key(|&a| (std::cmp::Reverse(g.degree(a)), a));

    let mut all_b = FixedBitSet::with_capacity(g.n_b());
    all_b.insert_range(..);

    let mut search = Search {
        g,
        best: 0,
        best_x: Vec::new(),
        best_compat: all_b.clone(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    search.visit(&mut Vec::new(), &order, &all_b);

    let k = search.best;
    if search.exhausted {
        let certificate =
            BiHoleCertificate::new(search.best_x, search.best_compat.ones().collect()).truncated(k);
        return SolveResult {
            k,
            certificate,
            nodes_explored: search.nodes,
            optimal: false,
        };
    }

    let mut nodes = search.nodes;
    let certificate =
        lex_first_bihole(g, k, &mut nodes).expect("a bi-hole of the optimal size exists");
    SolveResult {
        k,
        certificate,
        nodes_explored: nodes,
        optimal: true,
    }
}

/// A bi-hole of size exactly `k`, if one exists. The returned certificate has
/// the lexicographically smallest `x` and, for that `x`, the smallest `y`.
pub fn has_bihole(g: &BipartiteGraph, k: usize) -> Option<BiHoleCertificate> {
    let mut nodes = 0;
    lex_first_bihole(g, k, &mut nodes)
}

fn lex_first_bihole(g: &BipartiteGraph, k: usize, nodes: &mut u64) -> Option<BiHoleCertificate> {
    if k == 0 {
        return Some(BiHoleCertificate::default());
    }
    if k > g.n_a() || k > g.n_b() {
        return None;
    }
    let mut all_b = FixedBitSet::with_capacity(g.n_b());
    all_b.insert_range(..);
    let mut chosen = Vec::with_capacity(k);
    lex_dfs(g, k, 0, &mut chosen, &all_b, nodes)
}

fn lex_dfs(
    g: &BipartiteGraph,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    compat: &FixedBitSet,
    nodes: &mut u64,
) -> Option<BiHoleCertificate> {
    *nodes += 1;
    if chosen.len() == k {
        return Some(BiHoleCertificate::new(
            chosen.clone(),
            compat.ones().take(k).collect(),
        ));
    }
    let need = k - chosen.len();
    for a in start..g.n_a() {
        if g.n_a() - a < need {
            break;
        }
        let mut next = compat.clone();
        next.difference_with(g.row(a));
        if next.count_ones(..) < k {
            continue;
        }
        chosen.push(a);
        let found = lex_dfs(g, k, a + 1, chosen, &next, nodes);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Reference oracle: enumerates every subset of the smaller part.
pub fn brute_force_bihole(g: &BipartiteGraph) -> Result<SolveResult> {
    let small = g.n_a().min(g.n_b());
    if small > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            size: small,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if g.n_a() <= g.n_b() {
        Ok(brute_force_over_a(g))
    } else {
        let r = brute_force_over_a(&g.transpose());
        Ok(SolveResult {
            certificate: BiHoleCertificate::new(r.certificate.y, r.certificate.x),
            ..r
        })
    }
}

fn brute_force_over_a(g: &BipartiteGraph) -> SolveResult {
    let n_a = g.n_a();
    let mut best = (0, Vec::new(), Vec::new());
    let mut nodes = 0u64;
    for mask in 0u32..(1u32 << n_a) {
        nodes += 1;
        let subset: Vec<usize> = (0..n_a).filter(|&a| mask >> a & 1 == 1).collect();
        let mut common = FixedBitSet::with_capacity(g.n_b());
        common.insert_range(..);
        for &a in &subset {
            common.difference_with(g.row(a));
        }
        let k = subset.len().min(common.count_ones(..));
        if k > best.0 {
            best = (k, subset, common.ones().collect());
        }
    }
    let (k, x, y) = best;
    SolveResult {
        k,
        certificate: BiHoleCertificate::new(x, y).truncated(k),
        nodes_explored: nodes,
        optimal: true,
    }
}
