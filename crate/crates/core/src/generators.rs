//! Extremal and random bipartite constructions: even cycles, binomial random
//! graphs with degree trimming, the bipartite pairing (configuration) model,
//! and K_{t,t}-free graphs with large one-sided degrees.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};

/// The cycle `C_{2n}`: `a_i ~ b_i` and `a_i ~ b_{i+1 mod n}`.
pub fn even_cycle(n: usize) -> Result<BipartiteGraph> {
    if n < 2 {
        return Err(Error::param("n", "even cycle needs n >= 2"));
    }
    let edges: Vec<_> = (0..n).flat_map(|i| [(i, i), (i, (i + 1) % n)]).collect();
    BipartiteGraph::new(n, n, &edges)
}

/// `G(n_a, n_b, p)`: every pair is an edge independently with probability `p`.
pub fn random_binomial_bipartite<R: Rng + ?Sized>(
    n_a: usize,
    n_b: usize,
    p: f64,
    rng: &mut R,
) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} not in [0, 1]")));
    }
    let rows = (0..n_a)
        .map(|_| {
            let mut row = FixedBitSet::with_capacity(n_b);
            for b in 0..n_b {
                if rng.random_bool(p) {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    Ok(BipartiteGraph::from_rows(n_b, rows))
}

/// Induced subgraph on `target_n` A-vertices of degree at most `delta_cap`
/// (drawn uniformly among all such vertices) and the first `target_n`
/// B-vertices.
pub fn trim_to_low_degree<R: Rng + ?Sized>(
    g: &BipartiteGraph,
    delta_cap: usize,
    target_n: usize,
    rng: &mut R,
) -> Result<BipartiteGraph> {
    let low: Vec<usize> = (0..g.n_a()).filter(|&a| g.degree(a) <= delta_cap).collect();
    if low.len() < target_n {
        return Err(Error::RetriesExhausted {
            what: "trim_to_low_degree",
            attempts: 1,
            detail: format!(
                ": only {} A-vertices have degree <= {delta_cap}, need {target_n}",
                low.len()
            ),
        });
    }
    if g.n_b() < target_n {
        return Err(Error::param(
            "target_n",
            format!("B has only {} vertices", g.n_b()),
        ));
    }
    let mut a_keep: Vec<usize> = index::sample(rng, low.len(), target_n)
        .into_iter()
        .map(|i| low[i])
        .collect();
    a_keep.sort_unstable();
    let b_keep: Vec<usize> = (0..target_n).collect();
    Ok(g.induced(&a_keep, &b_keep))
}

/// The upper-bound construction for large Δ: sample `G(2n, 2n, Δ'/2n)` with
/// `Δ' = Δ/2`, then keep `n` A-vertices of degree at most Δ. Regenerates on
/// failure, up to `max_attempts` samples.
pub fn trimmed_binomial<R: Rng + ?Sized>(
    n: usize,
    delta: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<(BipartiteGraph, usize)> {
    if n == 0 || delta == 0 {
        return Err(Error::param("n/delta", "need n >= 1 and delta >= 1"));
    }
    let big_n = 2 * n;
    let p = (delta as f64 / 2.0 / big_n as f64).min(1.0);
    for attempt in 0..max_attempts {
        let h = random_binomial_bipartite(big_n, big_n, p, rng)?;
        if let Ok(g) = trim_to_low_degree(&h, delta, n, rng) {
            return Ok((g, attempt));
        }
    }
    Err(Error::RetriesExhausted {
        what: "trimmed_binomial",
        attempts: max_attempts,
        detail: String::new(),
    })
}

/// A pairing of the `Δn` labelled half-edges on each side. X half-edge
/// `i·Δ + j` belongs to `x_i`; `matching[h]` is the Y half-edge paired with X
/// half-edge `h`, which belongs to `y_{matching[h] / Δ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingState {
    pub n: usize,
    pub delta: usize,
    pub matching: Vec<usize>,
}

impl PairingState {
    /// Uniform random perfect matching between the two half-edge sets.
    pub fn random<R: Rng + ?Sized>(n: usize, delta: usize, rng: &mut R) -> Self {
        let mut matching: Vec<usize> = (0..n * delta).collect();
        matching.shuffle(rng);
        Self { n, delta, matching }
    }

    pub fn is_perfect_matching(&self) -> bool {
        let mut seen = vec![false; self.n * self.delta];
        self.matching.len() == seen.len()
            && self
                .matching
                .iter()
                .all(|&h| h < seen.len() && !std::mem::replace(&mut seen[h], true))
    }

    /// Projected multigraph edges, one per half-edge pair, in X half-edge order.
    pub fn projected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.matching
            .iter()
            .enumerate()
            .map(|(h, &m)| (h / self.delta, m / self.delta))
    }

    pub fn multiplicities(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for e in self.projected_edges() {
            *counts.entry(e).or_insert(0) += 1;
        }
        counts
    }

    pub fn is_simple(&self) -> bool {
        let mut rows = vec![FixedBitSet::with_capacity(self.n); self.n];
        self.projected_edges().all(|(a, b)| !rows[a].put(b))
    }

    /// The projected graph, if it has no parallel edges.
    pub fn to_graph(&self) -> Option<BipartiteGraph> {
        if !self.is_simple() {
            return None;
        }
        let edges: Vec<_> = self.projected_edges().collect();
        Some(BipartiteGraph::new(self.n, self.n, &edges).expect("indices in range"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingSample {
    pub graph: BipartiteGraph,
    /// Pairings discarded for having parallel edges.
    pub rejections: usize,
    /// Switchings applied (only for [`pairing_model_switched`]).
    pub switches: usize,
}

fn check_pairing_params(n: usize, delta: usize) -> Result<()> {
    if n < 1 || delta < 1 {
        return Err(Error::param("n/delta", "need n >= 1 and delta >= 1"));
    }
    if delta > n {
        return Err(Error::param(
            "delta",
            format!("no simple {delta}-regular graph on {n}+{n} vertices"),
        ));
    }
    Ok(())
}

/// Uniform random simple Δ-regular `n x n` bipartite graph: uniform pairings
/// are drawn until the projection is simple. Every simple graph arises from
/// exactly `(Δ!)^{2n}` pairings, so the accepted graph is uniform.
pub fn pairing_model<R: Rng + ?Sized>(
    n: usize,
    delta: usize,
    rng: &mut R,
    max_rejects: usize,
) -> Result<PairingSample> {
    check_pairing_params(n, delta)?;
    for rejections in 0..=max_rejects {
        if let Some(graph) = PairingState::random(n, delta, rng).to_graph() {
            return Ok(PairingSample {
                graph,
                rejections,
                switches: 0,
            });
        }
    }
    Err(Error::RetriesExhausted {
        what: "pairing_model",
        attempts: max_rejects + 1,
        detail: ": every pairing had parallel edges".into(),
    })
}

/// Simple Δ-regular `n x n` bipartite graph from a single pairing whose
/// parallel edges are removed by random degree-preserving switchings
/// `(a,b),(a',b') → (a,b'),(a',b)`. Not exactly uniform, but usable for Δ
/// where the simplicity probability `≈ e^{-(Δ-1)²/2}` rules out rejection.
pub fn pairing_model_switched<R: Rng + ?Sized>(
    n: usize,
    delta: usize,
    rng: &mut R,
) -> Result<PairingSample> {
    check_pairing_params(n, delta)?;
    let state = PairingState::random(n, delta, rng);
    let mut edges: Vec<(usize, usize)> = state.projected_edges().collect();
    let mut counts = state.multiplicities();
    let max_steps = 1000 * edges.len().max(1);
    let mut switches = 0;
    let mut steps = 0;
    let mut i = 0;
    while i < edges.len() {
        let (a, b) = edges[i];
        if counts[&(a, b)] == 1 {
            i += 1;
            continue;
        }
        steps += 1;
        if steps > max_steps {
            return Err(Error::RetriesExhausted {
                what: "pairing_model_switched",
                attempts: max_steps,
                detail: ": could not remove parallel edges".into(),
            });
        }
        let j = rng.random_range(0..edges.len());
        let (a2, b2) = edges[j];
        if a2 == a || b2 == b || counts.contains_key(&(a, b2)) || counts.contains_key(&(a2, b)) {
            continue;
        }
        for old in [(a, b), (a2, b2)] {
            let c = counts.get_mut(&old).expect("edge present");
            *c -= 1;
            if *c == 0 {
                counts.remove(&old);
            }
        }
        edges[i] = (a, b2);
        edges[j] = (a2, b);
        counts.insert((a, b2), 1);
        counts.insert((a2, b), 1);
        switches += 1;
    }
    Ok(PairingSample {
        graph: BipartiteGraph::new(n, n, &edges)?,
        rejections: 0,
        switches,
    })
}

fn choose(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Calls `visit(subset, common)` for every `t`-subset of rows of `g` whose
/// common neighborhood has at least `min_common` vertices.
fn for_each_row_subset(
    g: &BipartiteGraph,
    t: usize,
    min_common: usize,
    visit: &mut dyn FnMut(&[usize], &FixedBitSet),
) {
    fn rec(
        g: &BipartiteGraph,
        t: usize,
        min_common: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        common: &FixedBitSet,
        visit: &mut dyn FnMut(&[usize], &FixedBitSet),
    ) {
        if chosen.len() == t {
            visit(chosen, common);
            return;
        }
        for a in start..g.n_a() {
            if g.n_a() - a < t - chosen.len() {
                break;
            }
            let mut next = common.clone();
            next.intersect_with(g.row(a));
            if next.count_ones(..) < min_common {
                continue;
            }
            chosen.push(a);
            rec(g, t, min_common, a + 1, chosen, &next, visit);
            chosen.pop();
        }
    }
    let mut all = FixedBitSet::with_capacity(g.n_b());
    all.insert_range(..);
    rec(g, t, min_common, 0, &mut Vec::new(), &all, visit);
}

/// Number of K_{t,t} subgraphs (pairs of t-sets `X ⊆ A`, `Y ⊆ B` spanning a
/// complete bipartite graph).
pub fn count_ktt(g: &BipartiteGraph, t: usize) -> u64 {
    assert!(t >= 1, "count_ktt needs t >= 1");
    let owned;
    let g = if g.n_a() <= g.n_b() {
        g
    } else {
        owned = g.transpose();
        &owned
    };
    let mut total = 0u64;
    for_each_row_subset(g, t, t, &mut |_, common| {
        total += choose(common.count_ones(..), t)
    });
    total
}

/// Number of K_{t,t} copies that contain vertex `v` of the given side.
pub fn per_vertex_ktt(g: &BipartiteGraph, t: usize, side: Side, v: usize) -> u64 {
    assert!(t >= 1, "per_vertex_ktt needs t >= 1");
    let owned;
    let g = match side {
        Side::A => g,
        Side::B => {
            owned = g.transpose();
            &owned
        }
    };
    // Copies through a: choose Y among N(a); X is a plus t-1 further common
    // neighbors of Y.
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    let cols = g.transpose();
    let local = cols.induced(&nbrs, &(0..g.n_a()).collect::<Vec<_>>());
    let mut total = 0u64;
    for_each_row_subset(&local, t, t, &mut |_, common| {
        total += choose(common.count_ones(..) - 1, t - 1)
    });
    total
}

/// All K_{t,t} copies as `(X, Y)`, ordered by `X` then `Y` lexicographically.
pub fn ktt_copies(g: &BipartiteGraph, t: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for_each_row_subset(g, t, t, &mut |xs, common| {
        let ys: Vec<usize> = common.ones().collect();
        for_each_subset(&ys, t, &mut |y| out.push((xs.to_vec(), y.to_vec())));
    });
    out
}

fn for_each_subset(items: &[usize], t: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        t: usize,
        start: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == t {
            visit(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < t - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, t, i + 1, cur, visit);
            cur.pop();
        }
    }
    rec(items, t, 0, &mut Vec::with_capacity(t), visit);
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KttRepairReport {
    pub n: usize,
    pub t: usize,
    pub c: f64,
    pub p: f64,
    /// `C(N,t)·C(n,t)·p^{t²}` for the `N x n` sample.
    pub expected_copies: f64,
    /// Copies in the accepted `N x n` sample.
    pub sample_copies: u64,
    /// Per-vertex cap `(4t/n)·C(N,t)²·p^{t²}` used to select A′.
    pub per_vertex_cap: f64,
    /// `⌈pn/2⌉`.
    pub degree_floor: usize,
    pub resamples: usize,
    /// Copies in the graph induced on A′ ∪ B, before repair.
    pub copies_before: u64,
    pub edges_removed: u64,
    pub min_degree_after: usize,
    /// Copy counts `X(v)` in the sample for the selected A′, in output order.
    pub per_vertex_copy_counts: Vec<u64>,
    /// `(c/4 - 4t c^{t²}) n^{1 - 2/(t+1)}`; reported only.
    pub degree_target: f64,
}

fn ln_choose(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// K_{t,t}-free `n x n` graph with large A-side degrees, by sampling
/// `G(2n, n, p)` with `p = c(2n)^{-2/(t+1)}`, keeping `n` A-vertices that lie
/// in few copies and deleting one edge from every remaining copy.
///
/// A sample is accepted when it has at most twice the expected number of
/// copies and at least `n` A-vertices with degree `≥ pn/2` and at most
/// `per_vertex_cap` copies; otherwise it is redrawn.
pub fn ktt_free_construction<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    c: f64,
    rng: &mut R,
    max_resamples: usize,
) -> Result<(BipartiteGraph, KttRepairReport)> {
    if t < 2 {
        return Err(Error::param("t", "need t >= 2"));
    }
    if n < t || c <= 0.0 {
        return Err(Error::param("n/c", "need n >= t and c > 0"));
    }
    let big_n = 2 * n;
    let p = c * (big_n as f64).powf(-2.0 / (t as f64 + 1.0));
    if p >= 1.0 {
        return Err(Error::param("n", format!("p = {p} is not below 1")));
    }
    let t2 = (t * t) as f64;
    let expected_copies = (ln_choose(big_n, t) + ln_choose(n, t) + t2 * p.ln()).exp();
    let per_vertex_cap =
        4.0 * t as f64 / n as f64 * (2.0 * ln_choose(big_n, t) + t2 * p.ln()).exp();
    let degree_floor = (p * n as f64 / 2.0).ceil() as usize;

    for resamples in 0..=max_resamples {
        let g = random_binomial_bipartite(big_n, n, p, rng)?;
        let sample_copies = count_ktt(&g, t);
        if sample_copies as f64 > 2.0 * expected_copies {
            continue;
        }
        let mut eligible: Vec<(usize, u64)> = (0..big_n)
            .filter(|&a| g.degree(a) >= degree_floor)
            .map(|a| (a, per_vertex_ktt(&g, t, Side::A, a)))
            .filter(|&(_, x)| x as f64 <= per_vertex_cap)
            .collect();
        if eligible.len() < n {
            continue;
        }
        // Prefer vertices whose degree survives the repair best.
        eligible.sort_by_key(|&(a, x)| (std::cmp::Reverse(g.degree(a) as i64 - x as i64), a));
        eligible.truncate(n);
        eligible.sort_unstable();
        let a_keep: Vec<usize> = eligible.iter().map(|&(a, _)| a).collect();
        let b_keep: Vec<usize> = (0..n).collect();
        let h_prime = g.induced(&a_keep, &b_keep);

        let copies_before = count_ktt(&h_prime, t);
        let (h, edges_removed) = remove_ktt_copies(&h_prime, t);
        let min_degree_after = (0..n).map(|a| h.degree(a)).min().unwrap_or(0);
        let report = KttRepairReport {
            n,
            t,
            c,
            p,
            expected_copies,
            sample_copies,
            per_vertex_cap,
            degree_floor,
            resamples,
            copies_before,
            edges_removed,
            min_degree_after,
            per_vertex_copy_counts: eligible.iter().map(|&(_, x)| x).collect(),
            degree_target: (c / 4.0 - 4.0 * t as f64 * c.powf(t2))
                * (n as f64).powf(1.0 - 2.0 / (t as f64 + 1.0)),
        };
        return Ok((h, report));
    }
    Err(Error::RetriesExhausted {
        what: "ktt_free_construction",
        attempts: max_resamples + 1,
        detail: String::new(),
    })
}

/// Deletes the lexicographically smallest edge of every K_{t,t} copy still
/// intact, in enumeration order, and recounts until none remain.
pub fn remove_ktt_copies(g: &BipartiteGraph, t: usize) -> (BipartiteGraph, u64) {
    let mut current = g.clone();
    let mut removed = 0u64;
    loop {
        let copies = ktt_copies(&current, t);
        if copies.is_empty() {
            return (current, removed);
        }
        let mut deleted: Vec<(usize, usize)> = Vec::new();
        for (xs, ys) in &copies {
            let intact = xs.iter().all(|&a| {
                ys.iter()
                    .all(|&b| current.has_edge(a, b) && !deleted.contains(&(a, b)))
            });
            if intact {
                deleted.push((xs[0], ys[0]));
            }
        }
        removed += deleted.len() as u64;
        current = current.without_edges(&deleted);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::max_bihole;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn even_cycle_examples() {
        assert_eq!(even_cycle(2).unwrap(), BipartiteGraph::complete(2, 2));
        let c8 = even_cycle(4).unwrap();
        assert_eq!(c8.edge_count(), 8);
        assert_eq!(max_bihole(&c8, None).k, 1);
        assert_eq!(max_bihole(&even_cycle(7).unwrap(), None).k, 3);
        assert!(even_cycle(1).is_err());
    }

    #[test]
    fn binomial_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            random_binomial_bipartite(4, 5, 0.0, &mut rng).unwrap(),
            BipartiteGraph::empty(4, 5)
        );
        assert_eq!(
            random_binomial_bipartite(4, 5, 1.0, &mut rng).unwrap(),
            BipartiteGraph::complete(4, 5)
        );
        assert!(random_binomial_bipartite(4, 5, 1.5, &mut rng).is_err());
    }

    #[test]
    fn binomial_mean_degree_concentrates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (n, d) = (200usize, 10.0f64);
        let p = d / n as f64;
        // Mean A-degree of one sample has sd sqrt(p(1-p)n / n) = sqrt(p(1-p)).
        let sd = (p * (1.0 - p)).sqrt();
        for _ in 0..100 {
            let g = random_binomial_bipartite(n, n, p, &mut rng).unwrap();
            let mean = g.edge_count() as f64 / n as f64;
            assert!((mean - d).abs() <= 3.0 * sd, "mean {mean}");
        }
    }

    #[test]
    fn trim_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = trim_to_low_degree(&BipartiteGraph::empty(8, 8), 0, 5, &mut rng).unwrap();
        assert_eq!(g, BipartiteGraph::empty(5, 5));
        assert!(trim_to_low_degree(&BipartiteGraph::complete(4, 4), 3, 1, &mut rng).is_err());

        let mut successes = 0;
        for _ in 0..40 {
            let h = random_binomial_bipartite(40, 40, 5.0 / 40.0, &mut rng).unwrap();
            if let Ok(g) = trim_to_low_degree(&h, 10, 20, &mut rng) {
                assert_eq!((g.n_a(), g.n_b()), (20, 20));
                assert!(g.max_a_degree() <= 10);
                successes += 1;
            }
        }
        assert!(successes > 0);
    }

    #[test]
    fn pairing_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = pairing_model(6, 1, &mut rng, 0).unwrap();
        assert_eq!(s.rejections, 0);
        assert!((0..6).all(|a| s.graph.degree(a) == 1));

        let s = pairing_model(20, 3, &mut rng, 10_000).unwrap();
        assert_eq!(s.graph.degree_profile(Side::A).min, 3);
        assert_eq!(s.graph.degree_profile(Side::A).max, 3);
        assert_eq!(s.graph.degree_profile(Side::B).min, 3);
        assert_eq!(s.graph.degree_profile(Side::B).max, 3);

        assert!(pairing_model(3, 4, &mut rng, 10).is_err());
        assert!(pairing_model(0, 1, &mut rng, 10).is_err());
    }

    #[test]
    fn pairing_state_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let st = PairingState::random(7, 3, &mut rng);
        assert!(st.is_perfect_matching());
        let mut a_deg = [0; 7];
        let mut b_deg = [0; 7];
        for (a, b) in st.projected_edges() {
            a_deg[a] += 1;
            b_deg[b] += 1;
        }
        assert!(a_deg.iter().chain(&b_deg).all(|&d| d == 3));
        assert_eq!(st.multiplicities().values().sum::<usize>(), 21);
        let broken = PairingState {
            n: 1,
            delta: 3,
            matching: vec![0, 0, 1],
        };
        assert!(!broken.is_perfect_matching());
    }

    #[test]
    fn switched_pairing_is_regular_and_simple() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for &(n, d) in &[(10, 9), (40, 12), (200, 32)] {
            let s = pairing_model_switched(n, d, &mut rng).unwrap();
            let pa = s.graph.degree_profile(Side::A);
            let pb = s.graph.degree_profile(Side::B);
            assert_eq!((pa.min, pa.max, pb.min, pb.max), (d, d, d, d));
            assert_eq!(s.graph.edge_count(), n * d);
        }
        // Complete graph is the only 3-regular option on 3+3.
        let s = pairing_model_switched(3, 3, &mut rng).unwrap();
        assert_eq!(s.graph, BipartiteGraph::complete(3, 3));
    }

    #[test]
    fn ktt_count_examples() {
        assert_eq!(count_ktt(&BipartiteGraph::complete(3, 3), 2), 9);
        assert_eq!(count_ktt(&even_cycle(4).unwrap(), 2), 0);
        assert_eq!(count_ktt(&even_cycle(2).unwrap(), 2), 1);
        assert_eq!(count_ktt(&BipartiteGraph::complete(3, 5), 3), 10);
        assert_eq!(count_ktt(&BipartiteGraph::complete(5, 3), 3), 10);
        assert_eq!(count_ktt(&BipartiteGraph::complete(4, 4), 1), 16);
    }

    #[test]
    fn per_vertex_double_counting() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = random_binomial_bipartite(9, 7, 0.6, &mut rng).unwrap();
            for t in 1..=3 {
                let total = count_ktt(&g, t);
                let sum_a: u64 = (0..9).map(|a| per_vertex_ktt(&g, t, Side::A, a)).sum();
                let sum_b: u64 = (0..7).map(|b| per_vertex_ktt(&g, t, Side::B, b)).sum();
                assert_eq!(sum_a, t as u64 * total);
                assert_eq!(sum_b, t as u64 * total);
                assert_eq!(ktt_copies(&g, t).len() as u64, total);
            }
        }
    }

    #[test]
    fn repair_removes_every_copy() {
        let g = BipartiteGraph::complete(4, 4);
        let before = count_ktt(&g, 2);
        let (h, removed) = remove_ktt_copies(&g, 2);
        assert_eq!(count_ktt(&h, 2), 0);
        assert!(removed <= before);
        assert_eq!(h.edge_count() as u64, 16 - removed);
    }

    #[test]
    fn ktt_free_small_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (h, rep) = ktt_free_construction(32, 2, 0.5, &mut rng, 200).unwrap();
        assert_eq!((h.n_a(), h.n_b()), (32, 32));
        assert_eq!(count_ktt(&h, 2), 0);
        assert!(rep.edges_removed <= rep.copies_before);
        let max_x = rep
            .per_vertex_copy_counts
            .iter()
            .copied()
            .max()
            .unwrap_or(0);
        let floor = rep.p * 32.0 / 2.0 - max_x as f64;
        assert!((0..32).all(|a| h.degree(a) as f64 >= floor));
        assert!(ktt_free_construction(4, 1, 0.5, &mut rng, 1).is_err());
        assert!(ktt_free_construction(4, 2, 5.0, &mut rng, 1).is_err());
    }
}
