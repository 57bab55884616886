//! Bi-hole constructions that come with a size guarantee.
//!
//! | procedure | guarantee on `n x n`, A-degrees ≤ Δ |
//! |---|---|
//! | [`bihole_maxdeg2`] | `⌈n/2⌉ - 1` for Δ = 2 |
//! | [`bihole_general_delta`] | `⌊(n-2)/Δ⌋` |
//! | [`bihole_xi_chain`] | `≈ L(Δ)·n`, `L` from [`crate::bounds::lower_constant_exact`] |
//! | [`bihole_random_subset`] | `⌊xn⌋`, `x = ½ log Δ / Δ`, for `n ≥ 5Δ log Δ` |
//! | [`bihole_dense_regime`] | `t` on the order of `log n` when degrees are ≤ `(1-ε)n` |
//!
//! Randomized procedures take an explicit RNG; equal seeds give equal output.

use fixedbitset::FixedBitSet;
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{self, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::graph::{BiHoleCertificate, BipartiteGraph};

/// Smallest Δ from which the h-inequality holds at `n = ⌈5Δ log Δ⌉` (exact
/// sweep up to Δ = 128, see [`bounds::empirical_delta0`]).
pub const EMPIRICAL_DELTA0: usize = 6;

/// Default per-level retry budget for the randomized procedures.
pub const DEFAULT_MAX_RETRIES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxComponent {
    /// Vertices of B in this component, ascending.
    pub vertices: Vec<usize>,
    /// Edge ids (= A-vertices), ascending.
    pub edges: Vec<usize>,
    pub dense: bool,
}

/// Multigraph on B with one edge `{b, b'}` per A-vertex whose (padded)
/// neighborhood is `{b, b'}`. Edge `i` corresponds to A-vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxiliaryMultigraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<AuxComponent>,
}

impl AuxiliaryMultigraph {
    /// `g` must have every A-degree exactly 2.
    pub fn from_degree_two(g: &BipartiteGraph) -> Self {
        let edges: Vec<(usize, usize)> = (0..g.n_a())
            .map(|a| {
                let mut it = g.neighbors(a);
                let b1 = it.next().expect("degree 2");
                let b2 = it.next().expect("degree 2");
                (b1, b2)
            })
            .collect();

        let n = g.n_b();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for &(u, v) in &edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }

        let mut slot = vec![usize::MAX; n];
        let mut components: Vec<AuxComponent> = Vec::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            if slot[r] == usize::MAX {
                slot[r] = components.len();
                components.push(AuxComponent {
                    vertices: Vec::new(),
                    edges: Vec::new(),
                    dense: false,
                });
            }
            components[slot[r]].vertices.push(v);
        }
        for (i, &(u, _)) in edges.iter().enumerate() {
            let r = find(&mut parent, u);
            components[slot[r]].edges.push(i);
        }
        for c in &mut components {
            c.dense = c.edges.len() >= c.vertices.len();
        }
        Self {
            n_vertices: n,
            edges,
            components,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Maxdeg2Outcome {
    pub certificate: BiHoleCertificate,
    /// Number of B-vertices touched by the selected edge set.
    pub selected_vertices: usize,
    pub aux: Option<AuxiliaryMultigraph>,
}

/// Bi-hole of size `⌈n/2⌉ - 1` in an `n x n` graph with A-degrees at most 2.
pub fn bihole_maxdeg2(g: &BipartiteGraph) -> Result<BiHoleCertificate> {
    Ok(bihole_maxdeg2_detailed(g)?.certificate)
}

/// [`bihole_maxdeg2`] together with the auxiliary multigraph and the vertex
/// count of the selected subgraph.
pub fn bihole_maxdeg2_detailed(g: &BipartiteGraph) -> Result<Maxdeg2Outcome> {
    let n = g.square_size()?;
    g.check_a_degree(2)?;
    let k = n.div_ceil(2).saturating_sub(1);
    if k == 0 {
        return Ok(Maxdeg2Outcome {
            certificate: BiHoleCertificate::default(),
            selected_vertices: 0,
            aux: None,
        });
    }

    let padded = g.pad_a_degrees(2);
    let aux = AuxiliaryMultigraph::from_degree_two(&padded);

    // Dense components first, each group by descending edge count.
    let mut order: Vec<&AuxComponent> = aux.components.iter().collect();
    order.sort_by_key(|c| (!c.dense, std::cmp::Reverse(c.edges.len()), c.vertices[0]));

    let mut chosen_edges: Vec<usize> = Vec::with_capacity(k);
    let mut touched = FixedBitSet::with_capacity(n);
    for comp in order {
        let remaining = k - chosen_edges.len();
        if remaining == 0 {
            break;
        }
        if comp.edges.len() <= remaining {
            for &e in &comp.edges {
                let (u, v) = aux.edges[e];
                touched.insert(u);
                touched.insert(v);
            }
            chosen_edges.extend_from_slice(&comp.edges);
        } else {
            grow_connected(&aux, comp, remaining, &mut chosen_edges, &mut touched);
        }
    }
    debug_assert_eq!(chosen_edges.len(), k);

    let selected_vertices = touched.count_ones(..);
    let y: Vec<usize> = (0..n).filter(|&b| !touched.contains(b)).take(k).collect();
    debug_assert_eq!(y.len(), k);
    Ok(Maxdeg2Outcome {
        certificate: BiHoleCertificate::new(chosen_edges, y),
        selected_vertices,
        aux: Some(aux),
    })
}

/// Breadth-first edge selection inside one component: `count` edges forming
/// a connected subgraph.
fn grow_connected(
    aux: &AuxiliaryMultigraph,
    comp: &AuxComponent,
    count: usize,
    chosen: &mut Vec<usize>,
    touched: &mut FixedBitSet,
) {
    let start = comp.vertices[0];
    let mut queue = std::collections::VecDeque::from([start]);
    let mut seen = FixedBitSet::with_capacity(aux.n_vertices);
    seen.insert(start);
    let mut used = FixedBitSet::with_capacity(aux.edges.len());
    let mut taken = 0;
    while let Some(v) = queue.pop_front() {
        for &e in &comp.edges {
            if taken == count {
                return;
            }
            let (p, q) = aux.edges[e];
            if used.contains(e) || (p != v && q != v) {
                continue;
            }
            used.insert(e);
            chosen.push(e);
            taken += 1;
            touched.insert(p);
            touched.insert(q);
            let other = if p == v { q } else { p };
            if !seen.put(other) {
                queue.push_back(other);
            }
        }
    }
}

/// Bi-hole of size at least `⌊(n-2)/Δ⌋`: fix a small set `X ⊆ B`; either
/// `X` and `A \ N(X)` form the bi-hole, or recurse on `N(X) x (B \ X)` whose
/// A-degrees drop to Δ-1.
pub fn bihole_general_delta(g: &BipartiteGraph, delta: usize) -> Result<BiHoleCertificate> {
    if delta < 2 {
        return Err(Error::param("delta", "need delta >= 2"));
    }
    g.square_size()?;
    g.check_a_degree(delta)?;
    general_delta_rec(g, delta)
}

fn general_delta_rec(g: &BipartiteGraph, delta: usize) -> Result<BiHoleCertificate> {
    if delta == 2 {
        return bihole_maxdeg2(g);
    }
    let n = g.n_a();
    let s = n.saturating_sub(2) / delta;
    if s == 0 {
        return Ok(BiHoleCertificate::default());
    }
    // X: the s B-vertices of smallest degree.
    let b_deg = g.b_degrees();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&b| (b_deg[b], b));
    let mut x = FixedBitSet::with_capacity(n);
    x.extend(by_degree[..s].iter().copied());

    let nx = g.neighborhood_of_b_set(&x);
    if nx.len() <= n - s {
        let mut in_nx = FixedBitSet::with_capacity(n);
        in_nx.extend(nx.iter().copied());
        let free: Vec<usize> = (0..n).filter(|&a| !in_nx.contains(a)).take(s).collect();
        return Ok(BiHoleCertificate::new(free, x.ones().collect()));
    }
    let a_keep: Vec<usize> = nx.into_iter().take(n - s).collect();
    let b_keep: Vec<usize> = (0..n).filter(|&b| !x.contains(b)).collect();
    let sub = g.induced(&a_keep, &b_keep);
    Ok(general_delta_rec(&sub, delta - 1)?.lift(&a_keep, &b_keep))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionLevel {
    pub delta: usize,
    pub part_size: usize,
    pub xi: f64,
    /// The accepted set `S ⊆ B`, in original B indices.
    pub subset: Vec<usize>,
    pub neighborhood_size: usize,
    /// Side length of the square graph passed to the next level.
    pub next_part_size: usize,
    pub draws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionTrace {
    pub levels: Vec<ReductionLevel>,
    /// Δ of the final (Δ ≤ 2) stage.
    pub terminal_delta: usize,
    pub terminal_part_size: usize,
    /// True when the input had no edges and the full bi-hole was returned.
    pub short_circuit: bool,
    pub certificate: BiHoleCertificate,
}

/// Repeatedly shrinks Δ by one: draw `S ⊆ B` of size `n - ⌊ξn⌋` until
/// `|N(S)| ≥ ⌊ξn⌋`, then continue on `N(S) x (B \ S)`, where A-degrees are
/// at most Δ-1. At Δ = 2 the maximum-degree-2 construction finishes.
pub fn bihole_xi_chain<R: Rng + ?Sized>(
    g: &BipartiteGraph,
    delta: usize,
    rng: &mut R,
    max_retries: usize,
) -> Result<(BiHoleCertificate, ReductionTrace)> {
    if delta < 3 {
        return Err(Error::param("delta", "need delta >= 3"));
    }
    let n = g.square_size()?;
    g.check_a_degree(delta)?;
    if g.edge_count() == 0 {
        let cert = BiHoleCertificate::new((0..n).collect(), (0..n).collect());
        let trace = ReductionTrace {
            levels: Vec::new(),
            terminal_delta: 2,
            terminal_part_size: n,
            short_circuit: true,
            certificate: cert.clone(),
        };
        return Ok((cert, trace));
    }

    let mut cur = g.clone();
    let mut a_map: Vec<usize> = (0..n).collect();
    let mut b_map: Vec<usize> = (0..n).collect();
    let mut levels = Vec::new();

    for d in (3..=delta).rev() {
        let size = cur.n_a();
        // Vertices of smaller degree only make |N(S)| smaller; pad to exactly d.
        let padded = cur.pad_a_degrees(d);
        let xi = bounds::xi_of_delta(d, DEFAULT_TOL);
        let keep = (xi * size as f64).floor() as usize;
        let s_size = size - keep;

        let mut accepted = None;
        for draw in 1..=max_retries {
            let mut s = FixedBitSet::with_capacity(size);
            s.extend(index::sample(rng, size, s_size));
            let ns = padded.neighborhood_of_b_set(&s);
            if ns.len() >= keep {
                accepted = Some((draw, s, ns));
                break;
            }
        }
        let Some((draws, s, ns)) = accepted else {
            let trace = ReductionTrace {
                levels,
                terminal_delta: d,
                terminal_part_size: size,
                short_circuit: false,
                certificate: BiHoleCertificate::default(),
            };
            return Err(Error::ChainExhausted {
                delta: d,
                attempts: max_retries,
                trace: Box::new(trace),
            });
        };

        let a_keep: Vec<usize> = ns.iter().copied().take(keep).collect();
        let b_keep: Vec<usize> = (0..size).filter(|&b| !s.contains(b)).collect();
        levels.push(ReductionLevel {
            delta: d,
            part_size: size,
            xi,
            subset: s.ones().map(|b| b_map[b]).collect(),
            neighborhood_size: ns.len(),
            next_part_size: keep,
            draws,
        });
        cur = padded.induced(&a_keep, &b_keep);
        a_map = a_keep.iter().map(|&i| a_map[i]).collect();
        b_map = b_keep.iter().map(|&j| b_map[j]).collect();
    }

    let cert = bihole_maxdeg2(&cur)?.lift(&a_map, &b_map);
    let trace = ReductionTrace {
        levels,
        terminal_delta: 2,
        terminal_part_size: cur.n_a(),
        short_circuit: false,
        certificate: cert.clone(),
    };
    Ok((cert, trace))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomSubsetOutcome {
    pub certificate: BiHoleCertificate,
    /// `⌊xn⌋` with `x = ½ log Δ / Δ`.
    pub guarantee: usize,
    /// Whether Δ is at or above [`EMPIRICAL_DELTA0`].
    pub guarantee_certified: bool,
    pub subset_size: usize,
    pub t_size: usize,
    pub draws: usize,
}

/// Random-subset construction: draw `S ⊆ B` of size `⌊(1-2x)n⌋ - 2`, let `T`
/// be the A-vertices with at most 2 neighbors outside `S`, and run the
/// maximum-degree-2 construction on `T x (B \ S)` once `|T| ≥ |B \ S|`.
pub fn bihole_random_subset<R: Rng + ?Sized>(
    g: &BipartiteGraph,
    delta: usize,
    rng: &mut R,
    max_retries: usize,
) -> Result<RandomSubsetOutcome> {
    if delta < 2 {
        return Err(Error::param("delta", "need delta >= 2"));
    }
    let n = g.square_size()?;
    g.check_a_degree(delta)?;
    let d = delta as f64;
    if (n as f64) < 5.0 * d * d.ln() {
        return Err(Error::param(
            "n",
            format!("n = {n} is below 5·Δ·log Δ = {:.1}", 5.0 * d * d.ln()),
        ));
    }
    let x = bounds::random_subset_x(delta);
    let guarantee = (x * n as f64).floor() as usize;
    let guarantee_certified = delta >= EMPIRICAL_DELTA0;
    let s_size = bounds::random_subset_size(x, n).expect("n is in the regime");
    if g.edge_count() == 0 {
        return Ok(RandomSubsetOutcome {
            certificate: BiHoleCertificate::new((0..n).collect(), (0..n).collect()),
            guarantee,
            guarantee_certified,
            subset_size: s_size,
            t_size: n,
            draws: 0,
        });
    }

    let rest = n - s_size;
    let mut observed = Vec::with_capacity(max_retries);
    for draw in 1..=max_retries {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend(index::sample(rng, n, s_size));
        let t: Vec<usize> = (0..n)
            .filter(|&a| g.degree(a) - g.row(a).intersection_count(&s) <= 2)
            .collect();
        observed.push(t.len());
        if t.len() < rest {
            continue;
        }
        let a_keep: Vec<usize> = t.iter().copied().take(rest).collect();
        let b_keep: Vec<usize> = (0..n).filter(|&b| !s.contains(b)).collect();
        let sub = g.induced(&a_keep, &b_keep);
        let certificate = bihole_maxdeg2(&sub)?.lift(&a_keep, &b_keep);
        return Ok(RandomSubsetOutcome {
            certificate,
            guarantee,
            guarantee_certified,
            subset_size: s_size,
            t_size: t.len(),
            draws: draw,
        });
    }
    let (min, max) = (
        observed.iter().min().copied().unwrap_or(0),
        observed.iter().max().copied().unwrap_or(0),
    );
    let mean = observed.iter().sum::<usize>() as f64 / observed.len().max(1) as f64;
    Err(Error::RetriesExhausted {
        what: "bihole_random_subset",
        attempts: max_retries,
        detail: format!(": |T| min {min}, mean {mean:.1}, max {max}; needed {rest}"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseOutcome {
    pub certificate: BiHoleCertificate,
    pub target_t: usize,
    pub achieved: usize,
}

/// `⌊log n / (2 log(1/ε))⌋`.
pub fn default_dense_t(n: usize, eps: f64) -> usize {
    ((n as f64).ln() / (2.0 * (1.0 / eps).ln()))
        .floor()
        .max(0.0) as usize
}

/// K_{t,t} in the bipartite complement of a graph whose A-degrees are at
/// most `(1-ε)n`. Greedy double counting: repeatedly add the B-vertex whose
/// complement-neighborhood keeps the most surviving A-vertices; since the
/// complement has `≥ εn²` edges the survivors shrink by a factor of about ε
/// per step.
pub fn bihole_dense_regime(g: &BipartiteGraph, eps: f64, t: Option<usize>) -> Result<DenseOutcome> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps", format!("{eps} not in (0, 1)")));
    }
    let n = g.square_size()?;
    g.check_a_degree(((1.0 - eps) * n as f64 + 1e-9).floor() as usize)?;
    let target_t = t.unwrap_or_else(|| default_dense_t(n, eps));

    let cols = g.complement().transpose();
    let mut survivors = FixedBitSet::with_capacity(n);
    survivors.insert_range(..);
    let mut available = survivors.clone();
    let mut chosen: Vec<usize> = Vec::new();
    let mut best = BiHoleCertificate::default();

    while chosen.len() < survivors.count_ones(..) {
        let pick = available
            .ones()
            .map(|b| (survivors.intersection_count(cols.row(b)), b))
            .max_by_key(|&(c, b)| (c, std::cmp::Reverse(b)));
        let Some((count, b)) = pick else { break };
        if count == 0 {
            break;
        }
        survivors.intersect_with(cols.row(b));
        available.set(b, false);
        chosen.push(b);
        let value = chosen.len().min(count);
        if value > best.size() {
            best = BiHoleCertificate::new(
                survivors.ones().take(value).collect(),
                chosen[..value].to_vec(),
            );
        }
    }
    Ok(DenseOutcome {
        achieved: best.size(),
        certificate: best,
        target_t,
    })
}
