use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use unfold_core::bform::{planar_integral, IntegralParams, DEFAULT_TOL};
use unfold_core::certify::{enumerate_certificates, Filters};
use unfold_core::digraph::{
    check_loop_space_identity, is_strongly_connected, loop_space_dim, random_strongly_connected,
};
use unfold_core::report::{
    dense_triangles, render_entries, render_table, OutputFormat, StatsReport,
};
use unfold_core::{make_certificate, AngleSystem, Certificate, Digraph, Error, GcdPolicy};

/// Arithmetic certificates for dense orbits of unfolded rational triangles.
#[derive(Parser, Debug)]
#[command(name = "unfold", version)]
struct Cli {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify one triangle with angles q_i pi / (q1 + q2 + q3).
    Certify {
        #[arg(allow_negative_numbers = true)]
        q1: i64,
        #[arg(allow_negative_numbers = true)]
        q2: i64,
        #[arg(allow_negative_numbers = true)]
        q3: i64,
        /// Emit the certificate as JSON.
        #[arg(long)]
        json: bool,
        /// Divide out a common factor instead of rejecting it.
        #[arg(long)]
        reduce: bool,
    },
    /// Certify every triple up to k_max.
    Enumerate {
        #[arg(long)]
        k_max: u64,
        #[command(flatten)]
        filters: FilterArgs,
        #[arg(long, default_value = "tsv")]
        format: OutputFormat,
    },
    /// Dense-orbit triangles grouped by k (odd k, distinct q, gcd 1).
    Table {
        #[arg(long)]
        k_max: u64,
    },
    /// Counts and dense fraction for odd k and distinct q.
    Stats {
        #[arg(long)]
        k_max: u64,
        #[arg(long, default_value = "tsv")]
        format: OutputFormat,
    },
    /// Loop-space checks on directed graphs.
    Digraph {
        #[command(subcommand)]
        command: DigraphCommand,
    },
    /// Evaluate the planar integral and decide whether it vanishes.
    Bform {
        #[arg(long)]
        a1: Ratio<i64>,
        #[arg(long)]
        a2: Ratio<i64>,
        #[arg(long, default_value_t = 0)]
        eps1: u8,
        #[arg(long, default_value_t = 0)]
        eps2: u8,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct FilterArgs {
    /// Keep only odd k.
    #[arg(long)]
    odd: bool,
    /// Keep only triples with distinct entries.
    #[arg(long)]
    distinct: bool,
    /// Keep only triples with gcd 1.
    #[arg(long)]
    gcd_one: bool,
}

impl From<FilterArgs> for Filters {
    fn from(f: FilterArgs) -> Self {
        Filters {
            odd_k: f.odd,
            distinct_q: f.distinct,
            gcd_one: f.gcd_one,
        }
    }
}

#[derive(Subcommand, Debug)]
enum DigraphCommand {
    /// Check dim L = |E| - |V| + 1 and loop contraction on random graphs.
    Verify {
        #[arg(long)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long, default_value_t = 14)]
        max_edges: usize,
    },
    /// Loop-space dimension of a graph read from a file.
    Dim {
        #[arg(long)]
        file: PathBuf,
    },
}

/// A failed run and its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::invariant(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = pool.install(|| run(&cli.command));
    match outcome.and_then(|text| emit(cli.out.as_ref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Certify {
            q1,
            q2,
            q3,
            json,
            reduce,
        } => certify(*q1, *q2, *q3, *json, *reduce),
        Command::Enumerate {
            k_max,
            filters,
            format,
        } => Ok(render_entries(
            &enumerate_certificates(*k_max, (*filters).into())?,
            *format,
        )?),
        Command::Table { k_max } => Ok(render_table(&dense_triangles(*k_max)?)),
        Command::Stats { k_max, format } => stats(*k_max, *format),
        Command::Digraph { command } => match command {
            DigraphCommand::Verify {
                random,
                seed,
                max_vertices,
                max_edges,
            } => digraph_verify(*random, *seed, *max_vertices, *max_edges),
            DigraphCommand::Dim { file } => digraph_dim(file),
        },
        Command::Bform {
            a1,
            a2,
            eps1,
            eps2,
            tol,
            json,
        } => bform(*a1, *a2, *eps1, *eps2, *tol, *json),
    }
}

fn certify(q1: i64, q2: i64, q3: i64, json: bool, reduce: bool) -> Outcome {
    let policy = if reduce {
        GcdPolicy::Reduce
    } else {
        GcdPolicy::Strict
    };
    let sys = AngleSystem::triangle(q1, q2, q3, policy)?;
    let cert = make_certificate(&sys)?;
    if json {
        let mut s = serde_json::to_string_pretty(&cert).expect("certificate serializes");
        s.push('\n');
        return Ok(s);
    }
    Ok(certificate_text(&cert))
}

fn join<I: IntoIterator<Item = T>, T: ToString>(items: I) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn certificate_text(c: &Certificate) -> String {
    let t = &c.trace;
    let mut s = String::new();
    let mut line = |key: &str, value: String| writeln!(s, "{key:<24}{value}").unwrap();
    line("triangle", c.sys.to_string());
    line("genus", c.genus.to_string());
    line("stratum", c.stratum.to_string());
    line("marked_points", c.stratum.marked_points.to_string());
    line("rank_lower_bound", c.rank_lower_bound.to_string());
    line("full_rank", c.full_rank_certified.to_string());
    line(
        "hyperelliptic_excluded",
        c.hyperelliptic_excluded.to_string(),
    );
    line("verdict", c.verdict.to_string());
    line("D", join(&t.divisors));
    line("E", join(t.links.iter().map(|(a, b)| format!("{a}~{b}"))));
    line("A", join(t.units.iter()));
    line("A_closure_size", t.closure.len().to_string());
    line(
        "classes",
        join(
            t.classes
                .iter()
                .map(|c| format!("{{{}}}", join(c).replace(' ', ","))),
        ),
    );
    s
}

fn stats(k_max: u64, format: OutputFormat) -> Outcome {
    let report = StatsReport::compute(k_max)?;
    for w in report.warnings() {
        eprintln!("warning: {w}");
    }
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Tsv | OutputFormat::Csv => Ok(report.render()),
    }
}

fn digraph_verify(count: usize, seed: u64, max_vertices: usize, max_edges: usize) -> Outcome {
    if max_vertices == 0 || max_edges < max_vertices {
        return Err(Failure::input("need 1 <= --max-vertices <= --max-edges"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graphs: Vec<Digraph> = (0..count)
        .map(|_| random_strongly_connected(&mut rng, max_vertices, max_edges))
        .collect();
    let checks = graphs
        .par_iter()
        .map(check_loop_space_identity)
        .collect::<Result<Vec<_>, _>>()?;
    let mut s = String::new();
    let mut failed = 0;
    for (i, (g, c)) in graphs.iter().zip(&checks).enumerate() {
        if !c.passed {
            failed += 1;
            writeln!(
                s,
                "FAIL\tgraph {i}: dim {} contracted {:?}\n{}",
                c.loop_space_dim,
                c.contracted_dim,
                g.to_text()
            )
            .unwrap();
        }
    }
    writeln!(s, "passed {}/{count} (seed {seed})", count - failed).unwrap();
    if failed > 0 {
        print!("{s}");
        return Err(Failure::invariant(format!(
            "{failed} graphs violate the loop-space identity"
        )));
    }
    Ok(s)
}

fn digraph_dim(path: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let g: Digraph = text.parse()?;
    let dim = loop_space_dim(&g)?;
    let rank = g.cycle_rank();
    let mut s = format!("{dim}\t{rank}\n");
    if !is_strongly_connected(&g) {
        s.push_str("note: not strongly connected, so dim L = |E| - |V| + 1 is not asserted\n");
    } else if dim as i64 != rank {
        print!("{s}");
        return Err(Failure::invariant(format!(
            "dim L = {dim} but |E| - |V| + 1 = {rank}"
        )));
    }
    Ok(s)
}

fn bform(a1: Ratio<i64>, a2: Ratio<i64>, eps1: u8, eps2: u8, tol: f64, json: bool) -> Outcome {
    let params = IntegralParams::new(a1, a2, eps1, eps2)?;
    let res = planar_integral(&params, tol)?;
    if json {
        let v = serde_json::json!({
            "params": params,
            "result": res,
            "nonvanishing": res.is_nonvanishing(),
        });
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&v).expect("serializes")
        ));
    }
    let mut s = String::new();
    writeln!(s, "value\t{:.15e} {:+.3e}i", res.value.re, res.value.im).unwrap();
    writeln!(s, "error_estimate\t{:.3e}", res.error_estimate).unwrap();
    writeln!(s, "regions\t{}", res.regions_evaluated).unwrap();
    writeln!(s, "evaluations\t{}", res.evaluations).unwrap();
    writeln!(s, "nonvanishing\t{}", res.is_nonvanishing()).unwrap();
    Ok(s)
}
