//! Seeded experiment drivers behind the CLI.
//!
//! Every trial gets its own RNG seeded by [`derive_seed`], so results do not
//! depend on how trials are scheduled across threads. Records are sorted by
//! trial index before they are emitted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, DEFAULT_TOL};
use crate::constructive::{self, DEFAULT_MAX_RETRIES};
use crate::error::{Error, Result};
use crate::exact;
use crate::generators;
use crate::graph::{verify_bihole, BiHoleCertificate, BipartiteGraph};
use crate::io;

pub const SCHEMA: u32 = 1;

/// Largest `n` for which [`cmd_verify_f2`] runs the exact solver.
pub const VERIFY_F2_MAX_N: usize = 12;

/// Rejection budget for pairing-model instances in [`cmd_montecarlo`].
pub const PAIRING_MAX_REJECTS: usize = 100_000;

/// splitmix64 finalizer applied to `seed ^ (index · golden)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, index))
}

/// Runs `f` on a pool with `threads` workers (`0` = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param("threads", e.to_string()))?;
    Ok(pool.install(f))
}

/// Wraps a payload with the schema version.
#[derive(Debug, Serialize)]
pub struct Envelope<T> {
    pub schema: u32,
    #[serde(flatten)]
    pub body: T,
}

/// Single-line JSON document with a trailing newline.
pub fn to_json<T: Serialize>(body: &T) -> String {
    let mut s = serde_json::to_string(&Envelope {
        schema: SCHEMA,
        body,
    })
    .expect("serializable");
    s.push('\n');
    s
}

/// Header plus one line per row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::param("csv", e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::param("csv", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    /// Uniform simple Δ-regular graphs by rejection.
    Pairing,
    /// Pairing model with switchings instead of rejection.
    PairingSwitched,
    /// `G(2n, 2n, Δ/4n)` trimmed to `n` A-vertices of degree ≤ Δ.
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exact,
    Maxdeg2,
    General,
    XiChain,
    RandomSubset,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub delta: usize,
    pub t: Option<usize>,
    pub tol: f64,
    pub algorithm: Algorithm,
    pub kind: InstanceKind,
    pub format: OutputFormat,
    pub budget: Option<u64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            n: 12,
            delta: 3,
            t: None,
            tol: DEFAULT_TOL,
            algorithm: Algorithm::Exact,
            kind: InstanceKind::Pairing,
            format: OutputFormat::Json,
            budget: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::param("n/trials", "need n >= 1 and trials >= 1"));
        }
        if self.delta == 0 {
            return Err(Error::param("delta", "need delta >= 1"));
        }
        if self.algorithm == Algorithm::Exact
            && self.budget.is_none()
            && self.n > 2 * exact::BRUTE_FORCE_LIMIT
        {
            return Err(Error::param(
                "n",
                "exact measurement without --budget is limited to n <= 28",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub rejections: usize,
    pub switches: usize,
    pub edges: usize,
    pub achieved: Option<usize>,
    /// False if the exact solver hit its budget.
    pub optimal: bool,
    pub verified: bool,
    pub guarantee: usize,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub generated: usize,
    pub generation_failures: usize,
    pub min: Option<usize>,
    pub mean: Option<f64>,
    pub max: Option<usize>,
    pub guarantee: usize,
    /// `L(Δ)·n`, for Δ ≥ 3.
    pub lower_reference: Option<f64>,
    /// `β(Δ)·n`, for Δ ≥ 3.
    pub upper_reference: Option<f64>,
    pub failures: usize,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub config: ExperimentConfig,
    pub summary: MonteCarloSummary,
    pub records: Vec<TrialRecord>,
}

/// Size every algorithm is held to on an `n x n` instance with A-degrees ≤ Δ.
fn trial_guarantee(algorithm: Algorithm, n: usize, delta: usize) -> usize {
    match algorithm {
        Algorithm::RandomSubset if delta >= constructive::EMPIRICAL_DELTA0 => {
            let x = bounds::random_subset_x(delta);
            ((x * n as f64).floor() as usize).max(bounds::guaranteed_bihole(n, delta))
        }
        Algorithm::Dense => 0,
        _ => bounds::guaranteed_bihole(n, delta),
    }
}

fn generate(
    kind: InstanceKind,
    n: usize,
    delta: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(BipartiteGraph, usize, usize)> {
    match kind {
        InstanceKind::Pairing => {
            let s = generators::pairing_model(n, delta, rng, PAIRING_MAX_REJECTS)?;
            Ok((s.graph, s.rejections, 0))
        }
        InstanceKind::PairingSwitched => {
            let s = generators::pairing_model_switched(n, delta, rng)?;
            Ok((s.graph, 0, s.switches))
        }
        InstanceKind::Binomial => {
            let (g, attempts) = generators::trimmed_binomial(n, delta, rng, 1000)?;
            Ok((g, attempts, 0))
        }
    }
}

/// Measured bi-hole: size, optimality flag and certificate.
fn measure(
    g: &BipartiteGraph,
    config: &ExperimentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, bool, BiHoleCertificate)> {
    let delta = config.delta;
    let cert = match config.algorithm {
        Algorithm::Exact => {
            let r = exact::max_bihole(g, config.budget);
            return Ok((r.k, r.optimal, r.certificate));
        }
        Algorithm::Maxdeg2 => constructive::bihole_maxdeg2(g)?,
        Algorithm::General => constructive::bihole_general_delta(g, delta)?,
        Algorithm::XiChain => constructive::bihole_xi_chain(g, delta, rng, DEFAULT_MAX_RETRIES)?.0,
        Algorithm::RandomSubset => {
            constructive::bihole_random_subset(g, delta, rng, DEFAULT_MAX_RETRIES)?.certificate
        }
        Algorithm::Dense => {
            let eps = 1.0 - delta as f64 / g.n_a() as f64;
            constructive::bihole_dense_regime(g, eps, config.t)?.certificate
        }
    };
    Ok((cert.size(), true, cert))
}

fn run_trial(config: &ExperimentConfig, trial: usize) -> Option<TrialRecord> {
    let seed = derive_seed(config.seed, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, rejections, switches) = generate(config.kind, config.n, config.delta, &mut rng).ok()?;
    let guarantee = trial_guarantee(config.algorithm, config.n, config.delta);
    let mut record = TrialRecord {
        trial,
        seed,
        rejections,
        switches,
        edges: g.edge_count(),
        achieved: None,
        optimal: false,
        verified: false,
        guarantee,
        pass: false,
        error: None,
    };
    match measure(&g, config, &mut rng) {
        Ok((k, optimal, cert)) => {
            record.achieved = Some(k);
            record.optimal = optimal;
            record.verified = verify_bihole(&g, &cert).unwrap_or(false) && cert.size() == k;
            record.pass = record.verified && k >= guarantee;
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    Some(record)
}

/// Random instances of the configured kind, measured with the configured
/// algorithm. Generation failures are counted, not fatal.
pub fn cmd_montecarlo(config: &ExperimentConfig) -> Result<MonteCarloReport> {
    config.validate()?;
    let mut records: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .filter_map(|i| run_trial(config, i))
        .collect();
    records.sort_by_key(|r| r.trial);

    let achieved: Vec<usize> = records.iter().filter_map(|r| r.achieved).collect();
    let failures = records.iter().filter(|r| !r.pass).count();
    let n = config.n as f64;
    let (lower_reference, upper_reference) = if config.delta >= 3 {
        (
            Some(bounds::lower_constant(config.delta) * n),
            Some(bounds::beta_threshold(config.delta, config.tol)? * n),
        )
    } else {
        (None, None)
    };
    let summary = MonteCarloSummary {
        trials: config.trials,
        generated: records.len(),
        generation_failures: config.trials - records.len(),
        min: achieved.iter().min().copied(),
        mean: (!achieved.is_empty())
            .then(|| achieved.iter().sum::<usize>() as f64 / achieved.len() as f64),
        max: achieved.iter().max().copied(),
        guarantee: trial_guarantee(config.algorithm, config.n, config.delta),
        lower_reference,
        upper_reference,
        failures,
        all_pass: failures == 0,
    };
    Ok(MonteCarloReport {
        config: config.clone(),
        summary,
        records,
    })
}

/// Random `n x n` graph in which every A-vertex picks a degree in
/// `0..=max_degree` uniformly and then that many distinct uniform neighbors.
pub fn random_bounded_degree_graph<R: Rng + ?Sized>(
    n: usize,
    max_degree: usize,
    rng: &mut R,
) -> BipartiteGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        let d = rng.random_range(0..=max_degree).min(n);
        for b in rand::seq::index::sample(rng, n, d) {
            edges.push((a, b));
        }
    }
    BipartiteGraph::new(n, n, &edges).expect("indices in range")
}

/// [`random_bounded_degree_graph`] with degrees in {0, 1, 2}.
pub fn random_maxdeg2_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BipartiteGraph {
    random_bounded_degree_graph(n, 2, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyF2Row {
    pub n: usize,
    pub expected: usize,
    pub cycle_k: usize,
    pub random_min: usize,
    pub random_max: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyF2Violation {
    pub n: usize,
    /// `None` for the cycle check.
    pub trial: Option<usize>,
    pub detail: String,
    /// Offending instance in the edge-list format.
    pub graph: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyF2Report {
    pub n_max: usize,
    pub trials_per_n: usize,
    pub seed: u64,
    pub rows: Vec<VerifyF2Row>,
    pub violations: Vec<VerifyF2Violation>,
    pub pass: bool,
}

/// For each `2 ≤ n ≤ n_max`: the exact optimum on `C_{2n}` equals
/// `⌈n/2⌉ - 1`, and on random A-degree-≤2 graphs the maximum-degree-2
/// construction reaches that size without exceeding the exact optimum.
pub fn cmd_verify_f2(n_max: usize, trials_per_n: usize, seed: u64) -> Result<VerifyF2Report> {
    if n_max > VERIFY_F2_MAX_N {
        return Err(Error::param(
            "n_max",
            format!("{n_max} exceeds the exact-solver limit {VERIFY_F2_MAX_N}"),
        ));
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in 2..=n_max {
        let expected = n.div_ceil(2) - 1;
        let cycle = generators::even_cycle(n)?;
        let cycle_k = exact::max_bihole(&cycle, None).k;
        let mut pass = true;
        if cycle_k != expected {
            pass = false;
            violations.push(VerifyF2Violation {
                n,
                trial: None,
                detail: format!("exact k on the 2n-cycle is {cycle_k}, expected {expected}"),
                graph: io::write_graph(&cycle),
            });
        }

        let n_seed = derive_seed(seed, n as u64);
        let outcomes: Vec<(usize, usize, Option<VerifyF2Violation>)> = (0..trials_per_n)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(n_seed, trial as u64);
                let g = random_maxdeg2_graph(n, &mut rng);
                let exact_k = exact::max_bihole(&g, None).k;
                let violation = |detail: String| VerifyF2Violation {
                    n,
                    trial: Some(trial),
                    detail,
                    graph: io::write_graph(&g),
                };
                match constructive::bihole_maxdeg2(&g) {
                    Ok(c) => {
                        let k = c.size();
                        let bad = if !verify_bihole(&g, &c).unwrap_or(false) {
                            Some(violation("certificate does not verify".into()))
                        } else if k < expected {
                            Some(violation(format!("size {k} below {expected}")))
                        } else if k > exact_k {
                            Some(violation(format!("size {k} above exact optimum {exact_k}")))
                        } else {
                            None
                        };
                        (k, exact_k, bad)
                    }
                    Err(e) => (0, exact_k, Some(violation(e.to_string()))),
                }
            })
            .collect();

        let sizes: Vec<usize> = outcomes.iter().map(|o| o.0).collect();
        for (_, _, v) in outcomes {
            if let Some(v) = v {
                pass = false;
                violations.push(v);
            }
        }
        rows.push(VerifyF2Row {
            n,
            expected,
            cycle_k,
            random_min: sizes.iter().min().copied().unwrap_or(0),
            random_max: sizes.iter().max().copied().unwrap_or(0),
            pass,
        });
    }
    Ok(VerifyF2Report {
        n_max,
        trials_per_n,
        seed,
        pass: violations.is_empty(),
        rows,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub delta: usize,
    pub lower: f64,
    pub upper: f64,
    pub published_lower: f64,
    pub published_upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub mismatches: usize,
    pub pass: bool,
}

/// Lower and upper constants for Δ = 3..10 next to the published values.
pub fn cmd_table() -> Result<TableReport> {
    let computed = bounds::bounds_table(3, 10)?;
    let rows: Vec<TableRow> = computed
        .iter()
        .map(|r| {
            let (pl, pu) = bounds::published_row(r.delta).expect("published row");
            TableRow {
                delta: r.delta,
                lower: r.lower,
                upper: r.upper,
                published_lower: pl,
                published_upper: pu,
                lower_ok: (r.lower - pl).abs() <= bounds::LOWER_TABLE_TOL,
                upper_ok: (r.upper - pu).abs() <= bounds::UPPER_TABLE_TOL,
            }
        })
        .collect();
    let mismatches = rows.iter().filter(|r| !r.lower_ok || !r.upper_ok).count();
    Ok(TableReport {
        rows,
        mismatches,
        pass: mismatches == 0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructRequest {
    pub algorithm: Algorithm,
    pub delta: Option<usize>,
    pub eps: Option<f64>,
    pub t: Option<usize>,
    pub seed: u64,
    pub max_retries: usize,
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub delta: usize,
    pub certificate: BiHoleCertificate,
    pub size: usize,
    pub guarantee: usize,
    pub verified: bool,
    pub pass: bool,
    /// Algorithm-specific output (reduction trace, draw counts, ...).
    pub details: serde_json::Value,
}

/// Runs one algorithm on `g`. Δ defaults to the maximum A-degree.
pub fn cmd_construct(g: &BipartiteGraph, req: &ConstructRequest) -> Result<ConstructReport> {
    let n = g.square_size()?;
    let delta = req.delta.unwrap_or_else(|| g.max_a_degree());
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(req.seed, 0));
    let (certificate, details, guarantee) = match req.algorithm {
        Algorithm::Exact => {
            let r = exact::max_bihole(g, req.budget);
            let d = serde_json::json!({ "nodes_explored": r.nodes_explored, "optimal": r.optimal });
            (r.certificate, d, bounds::guaranteed_bihole(n, delta))
        }
        Algorithm::Maxdeg2 => {
            let out = constructive::bihole_maxdeg2_detailed(g)?;
            let d = serde_json::json!({ "selected_vertices": out.selected_vertices });
            (out.certificate, d, n.div_ceil(2).saturating_sub(1))
        }
        Algorithm::General => (
            constructive::bihole_general_delta(g, delta)?,
            serde_json::Value::Null,
            bounds::guaranteed_bihole(n, delta),
        ),
        Algorithm::XiChain => {
            let (c, trace) = constructive::bihole_xi_chain(g, delta, &mut rng, req.max_retries)?;
            (
                c,
                serde_json::to_value(&trace).expect("serializable"),
                bounds::guaranteed_bihole(n, delta),
            )
        }
        Algorithm::RandomSubset => {
            let out = constructive::bihole_random_subset(g, delta, &mut rng, req.max_retries)?;
            let d = serde_json::json!({
                "guarantee_certified": out.guarantee_certified,
                "subset_size": out.subset_size,
                "t_size": out.t_size,
                "draws": out.draws,
            });
            let guarantee = trial_guarantee(Algorithm::RandomSubset, n, delta);
            (out.certificate, d, guarantee)
        }
        Algorithm::Dense => {
            let eps = req
                .eps
                .unwrap_or_else(|| 1.0 - delta as f64 / n.max(1) as f64);
            let out = constructive::bihole_dense_regime(g, eps, req.t)?;
            let d = serde_json::json!({ "eps": eps, "target_t": out.target_t });
            (out.certificate, d, 0)
        }
    };
    let verified = verify_bihole(g, &certificate)?;
    Ok(ConstructReport {
        algorithm: req.algorithm,
        n,
        delta,
        size: certificate.size(),
        pass: verified && certificate.size() >= guarantee,
        certificate,
        guarantee,
        verified,
        details,
    })
}
