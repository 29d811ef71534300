use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nash_core::analysis::analyze;
use nash_core::explorer::{
    export_dot, find_cycles, find_cycles_within, Budget, DigraphStore, Mode, Status, StoreMeta,
};
use nash_core::hilbert::hilbert_basis;
use nash_core::nash::{nash_subdivision, reeves_cone};
use nash_core::sampling::{sample_random, SampleConfig};
use nash_core::semigroup::minimal_generators;
use nash_core::{
    canonical_cone, canonical_semigroup, AffineSemigroup, Characteristic, Cone, Int, IntMatrix,
};

#[derive(Parser)]
#[command(
    name = "toric-nash",
    version,
    about = "Nash blowups of affine toric varieties"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Characteristic of the base field: 0 or a prime.
    #[arg(long = "char", global = true, default_value_t = 0)]
    characteristic: u64,
    /// Nash blowups of semigroups, or normalized blowups of cones.
    #[arg(long, global = true, default_value = "normalized")]
    mode: Mode,
    /// JSON-lines digraph store, created if missing.
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 100_000)]
    max_vertices: usize,
    #[arg(long, global = true, default_value_t = 3600.0)]
    max_seconds: f64,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Whether input columns generate the cone in M or its dual in N.
    #[arg(long, global = true, value_enum, default_value_t = Side::M)]
    side: Side,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "N", alias = "n")]
    N,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert basis of a cone, or minimal generators of a semigroup.
    Hilbert { input: PathBuf },
    /// Rays of the dual cone.
    Dual { input: PathBuf },
    /// Canonical key and matrix.
    Canon { input: PathBuf },
    /// Descendants under iterated blowups, level by level.
    Children {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Nash subdivision of a cone in N.
    Subdivide { input: PathBuf },
    /// Expands everything reachable from the input.
    Explore { input: PathBuf },
    /// Cycles among the vertices of the store.
    Cycles {
        #[arg(long, default_value_t = 100)]
        max: usize,
    },
    /// Singularity report for the toric variety of a cone.
    Analyze { input: PathBuf },
    /// Generator matrix of the Reeves cone of size n and parameter j.
    Reeves { n: usize, j: u64 },
    /// Explores random cones or semigroups.
    Sample {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
    /// Writes the store as a Graphviz digraph.
    ExportDot {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.opts.json;
    let result = match cli.opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("cannot start worker threads")
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = error_kind(&e);
            let message = format!("{e:#}");
            if json {
                eprintln!("{}", json!({ "error": kind, "message": message }));
            } else {
                eprintln!("error[{kind}]: {message}");
            }
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let o = &cli.opts;
    let p = Characteristic::new(o.characteristic)?;
    match &cli.command {
        Command::Hilbert { input } => {
            let m = read_matrix(input)?;
            let basis = match o.mode {
                Mode::Normalized => hilbert_basis(&cone_in_m(&m, o.side)?)?,
                Mode::Nash => {
                    require_m_side(o.side)?;
                    minimal_generators(m.rows(), &m.columns())?
                }
            };
            emit_matrix(o, "hilbert_basis", &IntMatrix::from_columns(&basis)?)
        }
        Command::Dual { input } => {
            let m = read_matrix(input)?;
            let c = Cone::from_matrix(&m)?;
            emit_matrix(o, "dual_rays", &IntMatrix::from_columns(c.dual().rays())?)
        }
        Command::Canon { input } => {
            let m = read_matrix(input)?;
            let form = match o.mode {
                Mode::Normalized => canonical_cone(&cone_in_m(&m, o.side)?)?,
                Mode::Nash => {
                    require_m_side(o.side)?;
                    canonical_semigroup(&AffineSemigroup::from_matrix(&m)?)?
                }
            };
            if o.json {
                println!(
                    "{}",
                    json!({ "key": form.key.to_string(), "matrix": rows(form.key.matrix()) })
                );
            } else {
                println!("{}", form.key);
                print!("{}", form.key.matrix().to_text());
            }
            Ok(())
        }
        Command::Children { input, depth } => {
            let m = read_matrix(input)?;
            let mut store = open_store(o, m.rows())?;
            let start = seed(&mut store, &m, o.side)?;
            let levels = store.descendants(&start, *depth, &budget(o)?)?;
            save_store(o, &store)?;
            if o.json {
                let levels: Vec<Value> = levels
                    .levels
                    .iter()
                    .map(|l| l.iter().map(|k| vertex_json(&store, k)).collect())
                    .collect();
                let children = store.children(&start);
                println!(
                    "{}",
                    json!({ "start": start, "children": children, "levels": levels })
                );
            } else {
                println!(
                    "children of the start: {}",
                    store.children(&start).join(", ")
                );
                for (d, level) in levels.levels.iter().enumerate() {
                    println!("level {d}: {} vertices", level.len());
                    for k in level {
                        println!("  {k}");
                    }
                }
                if let Status::BudgetExhausted { frontier } = &levels.status {
                    if !frontier.is_empty() && levels.levels.len() <= *depth {
                        println!(
                            "budget exhausted with {} unexpanded vertices",
                            frontier.len()
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Subdivide { input } => {
            let m = read_matrix(input)?;
            let c = Cone::from_matrix(&m)?;
            let sigma = match o.side {
                Side::N => c,
                Side::M => c.dual(),
            };
            let fan = nash_subdivision(&sigma, p)?;
            let valid = fan.check_subdivision_of(&sigma);
            if o.json {
                let cones: Vec<Value> = fan
                    .maximal_cones()
                    .iter()
                    .map(|c| json!(ray_rows(c)))
                    .collect();
                let check = valid.as_ref().err().cloned();
                println!(
                    "{}",
                    json!({ "cones": cones, "valid": check.is_none(), "problem": check })
                );
            } else {
                for (i, c) in fan.maximal_cones().iter().enumerate() {
                    println!("cone {i}:");
                    print!("{}", IntMatrix::from_columns(c.rays())?.to_text());
                }
                match &valid {
                    Ok(()) => println!("subdivision: valid"),
                    Err(e) => println!("subdivision: invalid ({e})"),
                }
            }
            Ok(())
        }
        Command::Explore { input } => {
            let m = read_matrix(input)?;
            let mut store = open_store(o, m.rows())?;
            let start = seed(&mut store, &m, o.side)?;
            let status = store.resolution_subgraph(&start, &budget(o)?)?;
            save_store(o, &store)?;
            let reachable = store.reachable(&start);
            let cycles = find_cycles_within(&store, &reachable, 100);
            let barren: Vec<&String> = reachable
                .iter()
                .filter(|k| store.barren_vertices().contains(*k))
                .collect();
            let (complete, detail) = match &status {
                Status::Complete {
                    vertex_count,
                    edge_count,
                } => (
                    true,
                    json!({ "vertices": vertex_count, "edges": edge_count }),
                ),
                Status::BudgetExhausted { frontier } => {
                    (false, json!({ "frontier": frontier.len() }))
                }
            };
            if o.json {
                let cycles: Vec<&Vec<String>> = cycles.iter().map(|c| &c.vertices).collect();
                println!(
                    "{}",
                    json!({ "start": start, "complete": complete, "status": detail,
                            "cycles": cycles, "barren": barren })
                );
            } else {
                println!("start: {start}");
                match &status {
                    Status::Complete {
                        vertex_count,
                        edge_count,
                    } => println!("complete: {vertex_count} vertices, {edge_count} edges"),
                    Status::BudgetExhausted { frontier } => {
                        println!("budget exhausted: {} unexpanded vertices", frontier.len())
                    }
                }
                println!("cycles: {}", cycles.len());
                for c in &cycles {
                    println!("  length {}: {}", c.len(), c.vertices.join(" -> "));
                }
                if !barren.is_empty() {
                    println!("vertices without charts: {}", barren.len());
                }
            }
            Ok(())
        }
        Command::Cycles { max } => {
            let store = load_store(o)?;
            let cycles = find_cycles(&store, *max);
            if o.json {
                let out: Vec<Value> = cycles
                    .iter()
                    .map(|c| json!({ "length": c.len(), "vertices": c.vertices, "component_size": c.component.len() }))
                    .collect();
                println!("{}", json!({ "cycles": out }));
            } else {
                println!("{} cycles", cycles.len());
                for c in &cycles {
                    println!(
                        "length {} (component of {}): {}",
                        c.len(),
                        c.component.len(),
                        c.vertices.join(" -> ")
                    );
                }
            }
            Ok(())
        }
        Command::Analyze { input } => {
            let m = read_matrix(input)?;
            let r = analyze(&cone_in_m(&m, o.side)?)?;
            if o.json {
                println!("{}", serde_json::to_string(&r)?);
            } else {
                let list = |v: &[Int]| v.iter().map(Int::to_string).collect::<Vec<_>>().join(" ");
                println!("rank: {}", r.rank);
                println!("simplicial: {}", r.simplicial);
                if let Some(i) = &r.index {
                    println!("index: {i}");
                }
                match &r.gorenstein_witness {
                    Some(w) => println!("gorenstein: true (m = {})", list(w)),
                    None => println!("gorenstein: false"),
                }
                println!("cyclic quotient: {}", r.cyclic_quotient);
                println!("invariant factors: {}", list(&r.invariant_factors));
                println!("hilbert basis size: {}", r.hilbert_basis_size);
                println!("hypersurface: {}", r.hypersurface);
                println!("unimodular: {}", r.unimodular);
            }
            Ok(())
        }
        Command::Reeves { n, j } => {
            reeves_cone(*n, *j)?;
            let j = i64::try_from(*j).context("j is too large")?;
            let cols: Vec<Vec<i64>> = (0..*n)
                .map(|c| {
                    (0..*n)
                        .map(|r| match (c + 1 == *n, r + 1 == *n) {
                            (true, true) => j,
                            (true, false) => 1,
                            _ => i64::from(r == c),
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
            emit_matrix(o, "generators", &IntMatrix::from_i64_columns(&refs))
        }
        Command::Sample { rank, count, bound } => {
            let mut store = open_store(o, *rank)?;
            let summary = sample_random(
                &mut store,
                &SampleConfig {
                    count: *count,
                    seed: o.seed,
                    entry_bound: *bound,
                    budget: budget(o)?,
                },
            )?;
            save_store(o, &store)?;
            if o.json {
                println!("{}", serde_json::to_string(&summary)?);
            } else {
                println!(
                    "sampled {} rank-{} objects ({} mode, p = {})",
                    summary.count, summary.rank, summary.mode, summary.characteristic
                );
                println!(
                    "distribution: {} (seed {})",
                    summary.distribution, summary.seed
                );
                println!("resolved: {}", summary.resolved);
                println!("budget exhausted: {}", summary.budget_exhausted);
                println!("with cycles: {}", summary.with_cycles);
                println!("with chartless vertices: {}", summary.with_barren);
                for k in &summary.cycle_keys {
                    println!("  cycle through {k}");
                }
                println!("store vertices: {}", summary.store_vertices);
            }
            Ok(())
        }
        Command::ExportDot { output } => {
            let store = load_store(o)?;
            let dot = export_dot(&store);
            match output {
                Some(path) => {
                    fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{dot}"),
            }
            Ok(())
        }
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(e) = cause.downcast_ref::<nash_core::Error>() {
            return e.kind();
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "other"
}

fn read_matrix(path: &Path) -> Result<IntMatrix> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(IntMatrix::parse(&text)?)
}

fn require_m_side(side: Side) -> Result<()> {
    if side == Side::N {
        return Err(nash_core::Error::InvalidArgument(
            "semigroups are given by generators in M".into(),
        )
        .into());
    }
    Ok(())
}

/// The cone `C = σ^∨` in `M` described by the input columns.
fn cone_in_m(m: &IntMatrix, side: Side) -> Result<Cone> {
    let c = Cone::from_matrix(m)?;
    Ok(match side {
        Side::M => c,
        Side::N => c.dual(),
    })
}

fn seed(store: &mut DigraphStore, m: &IntMatrix, side: Side) -> Result<String> {
    Ok(match store.meta().mode {
        Mode::Normalized => store.seed_cone(&cone_in_m(m, side)?)?,
        Mode::Nash => {
            require_m_side(side)?;
            store.seed_matrix(m)?
        }
    })
}

fn budget(o: &Opts) -> Result<Budget> {
    Ok(Budget::new(o.max_vertices, o.max_seconds)?)
}

fn open_store(o: &Opts, rank: usize) -> Result<DigraphStore> {
    let meta = StoreMeta {
        mode: o.mode,
        characteristic: Characteristic::new(o.characteristic)?,
        rank,
    };
    match &o.store {
        Some(path) if path.exists() => {
            let store =
                DigraphStore::load(path).with_context(|| format!("loading {}", path.display()))?;
            if store.meta() != meta {
                return Err(nash_core::Error::StoreMismatch(format!(
                    "{} holds {:?}, requested {:?}",
                    path.display(),
                    store.meta(),
                    meta
                ))
                .into());
            }
            Ok(store)
        }
        _ => Ok(DigraphStore::new(meta)),
    }
}

fn load_store(o: &Opts) -> Result<DigraphStore> {
    let Some(path) = &o.store else {
        bail!(nash_core::Error::InvalidArgument(
            "this command needs --store".into()
        ));
    };
    DigraphStore::load(path).with_context(|| format!("loading {}", path.display()))
}

fn save_store(o: &Opts, store: &DigraphStore) -> Result<()> {
    if let Some(path) = &o.store {
        store
            .save(path)
            .with_context(|| format!("saving {}", path.display()))?;
    }
    Ok(())
}

fn rows(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.to_rows()
}

fn ray_rows(c: &Cone) -> Vec<Vec<Int>> {
    c.rays().to_vec()
}

fn vertex_json(store: &DigraphStore, key: &str) -> Value {
    json!({ "key": key, "matrix": store.payload(key).map(rows) })
}

fn emit_matrix(o: &Opts, name: &str, m: &IntMatrix) -> Result<()> {
    if o.json {
        println!("{}", json!({ name: rows(m) }));
    } else {
        print!("{}", m.to_text());
    }
    Ok(())
}
