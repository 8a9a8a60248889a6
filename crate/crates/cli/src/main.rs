mod error;
mod io;
mod report;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plap_core::combinatorics::{self, SignaturePool};
use plap_core::cutoff::{self, BracketOptions};
use plap_core::generate::{self, RandomSpec, SignMode};
use plap_core::plap::{self, SolverConfig};
use plap_core::{linalg, SignedGraph};
use serde_json::json;

use crate::error::CliError;
use crate::report::{grid_csv, Check, GridRow, Report};

#[derive(Parser)]
#[command(name = "plap", version, about = "Signed-graph p-Laplacian spectra, cut-off eigenvalues and inertia bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Graph JSON file, `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
    /// Report destination, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct Enumeration {
    /// Largest exhaustive enumeration.
    #[arg(long, default_value_t = cutoff::DEFAULT_BUDGET)]
    budget: usize,
    /// Largest component handled by exact enumeration.
    #[arg(long, default_value_t = cutoff::DEFAULT_ENUMERATION_CAP)]
    cap: usize,
}

impl Enumeration {
    fn options(&self, seed: u64) -> BracketOptions {
        BracketOptions {
            budget: self.budget,
            enumeration_cap: self.cap,
            seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Largest,
    Smallest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Monotonicity,
    Interlacing,
    Limit,
    Tensor,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Signs {
    Positive,
    Negative,
    Random,
    Antibalanced,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a graph, reporting its structure.
    Validate {
        #[command(flatten)]
        io: Io,
    },
    /// Extremal p-Laplacian eigenpair.
    Spectrum {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "largest")]
        which: Which,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra comma-separated exponents for the CSV table.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
        /// CSV destination for the p-grid table.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Brackets for cut-off adjacency eigenvalues.
    Cutoff {
        #[command(flatten)]
        io: Io,
        /// An index in 1..=n or `all`.
        #[arg(long, default_value = "all")]
        k: String,
        /// Fail unless every requested bracket is closed.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        enumeration: Enumeration,
    },
    /// Eigenvalue bounds and the inertia checks.
    Bounds {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        inertia: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use all 2^|E| signatures (|E| <= 16).
        #[arg(long)]
        all_signatures: bool,
        #[command(flatten)]
        enumeration: Enumeration,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination for the monotonicity p-grid.
        #[arg(long)]
        csv: Option<String>,
        #[command(flatten)]
        enumeration: Enumeration,
    },
    /// Write a graph from a standard family.
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Make every edge negative.
        #[arg(long, global = true)]
        negative: bool,
        #[arg(long, global = true, default_value = "-")]
        out: String,
    },
}

#[derive(Subcommand)]
enum Family {
    Complete { n: usize },
    Star { m: usize },
    Path { n: usize },
    Cycle { n: usize },
    Hypercube { d: u32 },
    Bipartite { a: usize, b: usize },
    Random {
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "positive")]
        signs: Signs,
        /// Random weights, measure and potential.
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        connected: bool,
    },
}

fn command_echo() -> Vec<String> {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    args.insert(0, "plap".into());
    args
}

fn emit(report: &Report, out: &str) -> Result<i32, CliError> {
    io::write_output(out, &report.to_json())?;
    Ok(report.exit_code())
}

fn structure(g: &SignedGraph) -> serde_json::Value {
    let class = g.classify_balance();
    let sc = g.structural_constants();
    json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "components": g.components().len(),
        "balance": class.kind,
        "balanced_witness": class.balanced_witness.map(|t| t.to_i8()),
        "antibalanced_witness": class.antibalanced_witness.map(|t| t.to_i8()),
        "d": sc.d,
        "c": sc.c,
        "isolated_vertices": g.isolated_vertices(),
    })
}

fn validate(io: &Io) -> Result<i32, CliError> {
    let loaded = io::load_graph(&io.input)?;
    let mut report = Report::new(command_echo(), Some(loaded.digest), None);
    report.push(Check::new("graph.valid", "graph.schema", true, json!({})));
    report.values = structure(&loaded.graph);
    emit(&report, &io.out)
}

fn spectrum(io: &Io, p: f64, which: Which, seed: u64, grid: &[f64], csv: Option<&str>) -> Result<i32, CliError> {
    let loaded = io::load_graph(&io.input)?;
    let g = &loaded.graph;
    let cfg = SolverConfig::default().with_seed(seed);
    let solve = |p: f64| match which {
        Which::Largest => plap::solve_largest(g, p, &cfg),
        Which::Smallest => plap::solve_smallest(g, p, &cfg),
    };
    let mut report = Report::new(command_echo(), Some(loaded.digest), Some(seed));
    let d = g.structural_constants().d;
    let mut ps = vec![p];
    ps.extend(grid.iter().copied().filter(|&q| q != p));
    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for &q in &ps {
        match solve(q) {
            Ok(pair) => {
                rows.push(GridRow::new(q, pair.lambda, pair.residual, d));
                pairs.push(pair);
            }
            Err(plap_core::Error::NonConvergence {
                best_residual,
                iterations,
            }) => {
                report.push(
                    Check::new(format!("solver.p{q}.converged"), "solver.residual", false, json!({ "p": q }))
                        .with_witnesses(json!({ "best_residual": best_residual, "iterations": iterations })),
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    for pair in &pairs {
        report.push(Check::new(
            format!("solver.p{}.converged", pair.p),
            "solver.residual",
            true,
            json!({ "residual": pair.residual, "scale": pair.scale, "tol": cfg.tol }),
        ));
    }
    report.values = json!({
        "which": match which { Which::Largest => "largest", Which::Smallest => "smallest" },
        "pairs": pairs,
    });
    if let Some(path) = csv {
        io::write_output(path, &grid_csv(&rows))?;
    }
    emit(&report, &io.out)
}

fn cutoff_cmd(io: &Io, k: &str, exact: bool, enumeration: &Enumeration) -> Result<i32, CliError> {
    let loaded = io::load_graph(&io.input)?;
    let g = &loaded.graph;
    let opts = enumeration.options(0);
    let all = cutoff::brackets_all(g, &opts)?;
    let selected: Vec<_> = if k == "all" {
        all
    } else {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Usage(format!("--k expects an index or `all`, got `{k}`")))?;
        if k == 0 || k > g.n() {
            return Err(CliError::Usage(format!("--k {k} out of range 1..={}", g.n())));
        }
        vec![all[k - 1].clone()]
    };
    let mut report = Report::new(command_echo(), Some(loaded.digest), None);
    report.push(Check::new(
        "cutoff.consistent",
        "cutoff.bracket-order",
        selected.iter().all(|b| b.lower <= b.upper),
        json!({ "tol": cutoff::EXACT_TOL }),
    ));
    if exact {
        let open: Vec<usize> = selected.iter().filter(|b| !b.exact).map(|b| b.k).collect();
        report.push(
            Check::new("cutoff.exact", "cutoff.bracket-closed", open.is_empty(), json!({}))
                .with_witnesses(json!({ "open_indices": open })),
        );
    }
    report.values = json!({ "brackets": selected });
    emit(&report, &io.out)
}

fn bounds(io: &Io, inertia: bool, seed: u64, all_signatures: bool, enumeration: &Enumeration) -> Result<i32, CliError> {
    let loaded = io::load_graph(&io.input)?;
    let g = &loaded.graph;
    let opts = enumeration.options(seed);
    let mut report = Report::new(command_echo(), Some(loaded.digest), Some(seed));
    let lower = cutoff::lower_bounds_all(g, opts.budget)?;
    let upper = cutoff::upper_bounds_all(g, &opts)?;
    let spectrum = linalg::normalized_eigenvalues(g);
    let mut values = json!({
        "lower": lower.iter().map(|x| x.0).collect::<Vec<_>>(),
        "upper": upper,
        "normalized_adjacency_spectrum": spectrum,
    });
    if inertia {
        let pool = if all_signatures {
            SignaturePool::exhaustive(g)?
        } else {
            SignaturePool::standard(g, 8, seed)
        };
        let rep = combinatorics::inertia_report(g, &pool, &opts)?;
        for c in &rep.checks {
            report.push(
                Check::new(format!("inertia.{}", c.name), "inertia", c.passed, json!({}))
                    .with_witnesses(if c.passed {
                        serde_json::Value::Null
                    } else {
                        json!({ "detail": c.detail, "graph": g.to_spec() })
                    }),
            );
        }
        values["inertia"] = json!({
            "alpha": rep.alpha,
            "alpha_exact": rep.alpha_exact,
            "independent_set": rep.independent_set,
            "beta": rep.beta,
            "edge_cover": rep.edge_cover,
            "matching_size": rep.matching_size,
            "zero_count_upper_proxy": rep.zero_count_upper_proxy,
            "per_signature": rep.per_signature,
            "exact_ln": rep.exact_ln,
            "cvetkovic": rep.cvetkovic_value,
        });
    }
    report.values = values;
    emit(&report, &io.out)
}

fn verify_cmd(
    suite: Suite,
    io: &Io,
    seed: u64,
    csv: Option<&str>,
    enumeration: &Enumeration,
) -> Result<i32, CliError> {
    let loaded = io::load_graph(&io.input)?;
    let g = &loaded.graph;
    let opts = enumeration.options(seed);
    let mut report = Report::new(command_echo(), Some(loaded.digest), Some(seed));
    let mut rows = Vec::new();
    let run = |s: Suite| -> Result<verify::SuiteOutput, CliError> {
        match s {
            Suite::Monotonicity => verify::monotonicity(g, seed),
            Suite::Interlacing => verify::interlacing(g, &opts),
            Suite::Limit => verify::limit(g, seed),
            Suite::Tensor => verify::tensor_suite(g, seed, &opts),
            Suite::All => unreachable!(),
        }
    };
    let suites = match suite {
        Suite::All => vec![Suite::Monotonicity, Suite::Interlacing, Suite::Limit, Suite::Tensor],
        s => vec![s],
    };
    for s in suites {
        let out = run(s)?;
        report.extend(out.checks);
        rows.extend(out.rows);
    }
    report.values = json!({ "graph": structure(g), "grid": rows });
    if let Some(path) = csv {
        io::write_output(path, &grid_csv(&rows))?;
    }
    emit(&report, &io.out)
}

fn generate_cmd(family: &Family, negative: bool, out: &str) -> Result<i32, CliError> {
    let g = match *family {
        Family::Complete { n } => nonempty(n).map(generate::complete)?,
        Family::Star { m } => nonempty(m).map(generate::star)?,
        Family::Path { n } => nonempty(n).map(generate::path)?,
        Family::Cycle { n } => nonempty(n).map(generate::cycle)?,
        Family::Hypercube { d } => {
            if d > 20 {
                return Err(CliError::Usage("hypercube dimension must be at most 20".into()));
            }
            generate::hypercube(d)
        }
        Family::Bipartite { a, b } => nonempty(a + b).map(|_| generate::complete_bipartite(a, b))?,
        Family::Random {
            n,
            prob,
            seed,
            signs,
            weighted,
            connected,
        } => {
            let signs = match signs {
                Signs::Positive => SignMode::Positive,
                Signs::Negative => SignMode::Negative,
                Signs::Random => SignMode::Random,
                Signs::Antibalanced => SignMode::Antibalanced,
            };
            let spec = RandomSpec::new(n, prob, seed)
                .signs(signs)
                .weighted(weighted)
                .connected(connected);
            generate::random(&spec).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let g = if negative { generate::all_negative(&g) } else { g };
    io::write_output(out, &io::graph_json(&g))?;
    Ok(0)
}

fn nonempty(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        Err(CliError::Usage("graph must have at least one vertex".into()))
    } else {
        Ok(n)
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("PLAP_THREADS") {
        let threads: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("PLAP_THREADS must be a positive integer, got `{v}`")))?;
        if threads == 0 {
            return Err(CliError::Usage("PLAP_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Validate { io } => validate(io),
        Command::Spectrum {
            io,
            p,
            which,
            seed,
            grid,
            csv,
        } => spectrum(io, *p, *which, *seed, grid, csv.as_deref()),
        Command::Cutoff {
            io,
            k,
            exact,
            enumeration,
        } => cutoff_cmd(io, k, *exact, enumeration),
        Command::Bounds {
            io,
            inertia,
            seed,
            all_signatures,
            enumeration,
        } => bounds(io, *inertia, *seed, *all_signatures, enumeration),
        Command::Verify {
            suite,
            io,
            seed,
            csv,
            enumeration,
        } => verify_cmd(*suite, io, *seed, csv.as_deref(), enumeration),
        Command::Generate {
            family,
            negative,
            out,
        } => generate_cmd(family, *negative, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("plap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
