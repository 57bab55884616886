use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use bihole::bounds::{self, DEFAULT_TOL};
use bihole::constructive::DEFAULT_MAX_RETRIES;
use bihole::harness::{
    self, derive_seed, to_csv, to_json, Algorithm, ConstructRequest, ExperimentConfig,
    InstanceKind, OutputFormat,
};
use bihole::{exact, generators, io, verify_bihole, BiHoleCertificate, Error};

#[derive(Parser)]
#[command(
    name = "bihole",
    version,
    about = "Bi-holes in degree-bounded bipartite graphs"
)]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Cycle,
    Binomial,
    Pairing,
    PairingSwitched,
    Kttfree,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph in the edge-list format; metadata goes to `<out>.json`
    /// (or stderr when writing to stdout).
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 100_000)]
        max_rejects: usize,
    },
    /// Exact maximum bi-hole.
    Solve {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run one constructive procedure.
    Construct {
        file: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
        retries: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Numeric bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Check the maximum-degree-2 law on cycles and random instances.
    VerifyF2 {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Seeded sweep over random instances.
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::Exact)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = InstanceKind::Pairing)]
        kind: InstanceKind,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Lower and upper constants for Δ = 3..10 against the published table.
    Table,
}

#[derive(Subcommand)]
enum BoundsCommand {
    Table {
        #[arg(long, default_value_t = 3)]
        delta_min: usize,
        #[arg(long, default_value_t = 10)]
        delta_max: usize,
    },
    H {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
    },
    Beta {
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    DeltaT {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
}

#[derive(Serialize)]
struct CertRow {
    size: usize,
    x: String,
    y: String,
}

fn cert_row(c: &BiHoleCertificate) -> CertRow {
    let join = |v: &[usize]| {
        v.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    CertRow {
        size: c.size(),
        x: join(&c.x),
        y: join(&c.y),
    }
}

/// Primary output plus whether every asserted guarantee held.
struct Output {
    text: String,
    pass: bool,
}

fn render<T: Serialize, R: Serialize>(
    format: OutputFormat,
    json: &T,
    rows: &[R],
) -> Result<String, Error> {
    match format {
        OutputFormat::Json => Ok(to_json(json)),
        OutputFormat::Csv => to_csv(rows),
    }
}

fn read_graph_file(path: &Path) -> Result<bihole::BipartiteGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    io::read_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<Output, String> {
    let fmt = cli.format;
    let e = |err: Error| err.to_string();
    match &cli.command {
        Command::Gen {
            kind,
            n,
            delta,
            t,
            c,
            max_rejects,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cli.seed, 0));
            let (g, meta) = match kind {
                GenKind::Cycle => (
                    generators::even_cycle(*n).map_err(e)?,
                    serde_json::json!({ "kind": "cycle", "n": n }),
                ),
                GenKind::Binomial => {
                    let (g, attempts) =
                        generators::trimmed_binomial(*n, *delta, &mut rng, 1000).map_err(e)?;
                    let meta = serde_json::json!({
                        "kind": "binomial", "n": n, "delta": delta, "attempts": attempts,
                    });
                    (g, meta)
                }
                GenKind::Pairing => {
                    let s =
                        generators::pairing_model(*n, *delta, &mut rng, *max_rejects).map_err(e)?;
                    let meta = serde_json::json!({
                        "kind": "pairing", "n": n, "delta": delta, "rejections": s.rejections,
                    });
                    (s.graph, meta)
                }
                GenKind::PairingSwitched => {
                    let s = generators::pairing_model_switched(*n, *delta, &mut rng).map_err(e)?;
                    let meta = serde_json::json!({
                        "kind": "pairing-switched", "n": n, "delta": delta, "switches": s.switches,
                    });
                    (s.graph, meta)
                }
                GenKind::Kttfree => {
                    let (g, report) =
                        generators::ktt_free_construction(*n, *t, *c, &mut rng, 1000).map_err(e)?;
                    let meta = serde_json::json!({ "kind": "kttfree", "repair": report });
                    (g, meta)
                }
            };
            let mut meta = meta;
            meta["seed"] = cli.seed.into();
            meta["edges"] = g.edge_count().into();
            let sidecar = to_json(&meta);
            match &cli.out {
                Some(path) => {
                    let mut side = path.clone().into_os_string();
                    side.push(".json");
                    std::fs::write(&side, sidecar).map_err(|err| err.to_string())?;
                }
                None => eprint!("{sidecar}"),
            }
            Ok(Output {
                text: io::write_graph(&g),
                pass: true,
            })
        }
        Command::Solve { file, budget } => {
            let g = read_graph_file(file)?;
            let r = exact::max_bihole(&g, *budget);
            let verified = verify_bihole(&g, &r.certificate).map_err(e)?;
            #[derive(Serialize)]
            struct SolveOut<'a> {
                #[serde(flatten)]
                result: &'a exact::SolveResult,
                verified: bool,
            }
            #[derive(Serialize)]
            struct Row {
                k: usize,
                nodes_explored: u64,
                optimal: bool,
                verified: bool,
                x: String,
                y: String,
            }
            let cr = cert_row(&r.certificate);
            let row = Row {
                k: r.k,
                nodes_explored: r.nodes_explored,
                optimal: r.optimal,
                verified,
                x: cr.x,
                y: cr.y,
            };
            let text = render(
                fmt,
                &SolveOut {
                    result: &r,
                    verified,
                },
                &[row],
            )
            .map_err(e)?;
            Ok(Output {
                text,
                pass: verified,
            })
        }
        Command::Construct {
            file,
            algorithm,
            delta,
            eps,
            t,
            retries,
            budget,
        } => {
            let g = read_graph_file(file)?;
            let req = ConstructRequest {
                algorithm: *algorithm,
                delta: *delta,
                eps: *eps,
                t: *t,
                seed: cli.seed,
                max_retries: *retries,
                budget: *budget,
            };
            let report = harness::with_threads(cli.threads, || harness::cmd_construct(&g, &req))
                .map_err(e)?
                .map_err(e)?;
            #[derive(Serialize)]
            struct Row {
                n: usize,
                delta: usize,
                size: usize,
                guarantee: usize,
                verified: bool,
                pass: bool,
                x: String,
                y: String,
            }
            let cr = cert_row(&report.certificate);
            let row = Row {
                n: report.n,
                delta: report.delta,
                size: report.size,
                guarantee: report.guarantee,
                verified: report.verified,
                pass: report.pass,
                x: cr.x,
                y: cr.y,
            };
            Ok(Output {
                text: render(fmt, &report, &[row]).map_err(e)?,
                pass: report.pass,
            })
        }
        Command::Bounds { which } => match which {
            BoundsCommand::Table {
                delta_min,
                delta_max,
            } => {
                let rows = bounds::bounds_table(*delta_min, *delta_max).map_err(e)?;
                let body = serde_json::json!({ "rows": rows });
                Ok(Output {
                    text: render(fmt, &body, &rows).map_err(e)?,
                    pass: true,
                })
            }
            BoundsCommand::H { n, delta } => {
                let h = bounds::check_h_inequality(*n, *delta).map_err(e)?;
                Ok(Output {
                    text: render(fmt, &h, std::slice::from_ref(&h)).map_err(e)?,
                    pass: h.holds,
                })
            }
            BoundsCommand::Beta { delta, tol } => {
                #[derive(Serialize)]
                struct Beta {
                    delta: usize,
                    beta: f64,
                }
                let b = Beta {
                    delta: *delta,
                    beta: bounds::beta_threshold(*delta, *tol).map_err(e)?,
                };
                Ok(Output {
                    text: render(fmt, &b, std::slice::from_ref(&b)).map_err(e)?,
                    pass: true,
                })
            }
            BoundsCommand::DeltaT { t, n, c } => {
                let d = bounds::delta_t_bounds(*t, *n, *c).map_err(e)?;
                Ok(Output {
                    text: render(fmt, &d, std::slice::from_ref(&d)).map_err(e)?,
                    pass: true,
                })
            }
        },
        Command::VerifyF2 { n_max, trials } => {
            let r = harness::with_threads(cli.threads, || {
                harness::cmd_verify_f2(*n_max, *trials, cli.seed)
            })
            .map_err(e)?
            .map_err(e)?;
            Ok(Output {
                text: render(fmt, &r, &r.rows).map_err(e)?,
                pass: r.pass,
            })
        }
        Command::Montecarlo {
            n,
            delta,
            trials,
            algorithm,
            kind,
            t,
            tol,
            budget,
        } => {
            let config = ExperimentConfig {
                seed: cli.seed,
                trials: *trials,
                n: *n,
                delta: *delta,
                t: *t,
                tol: *tol,
                algorithm: *algorithm,
                kind: *kind,
                format: fmt,
                budget: *budget,
            };
            let r = harness::with_threads(cli.threads, || harness::cmd_montecarlo(&config))
                .map_err(e)?
                .map_err(e)?;
            Ok(Output {
                text: render(fmt, &r, &r.records).map_err(e)?,
                pass: r.summary.all_pass,
            })
        }
        Command::Table => {
            let r = harness::cmd_table().map_err(e)?;
            Ok(Output {
                text: render(fmt, &r, &r.rows).map_err(e)?,
                pass: r.pass,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(err) = written {
                eprintln!("error: {err}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
