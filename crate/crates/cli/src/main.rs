use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use turanlab::constructions::{g_construction, h1_construction, h2_construction, matching_partition};
use turanlab::formulas::{evaluate, FormulaId, FormulaInputs};
use turanlab::rainbow::{find_rainbow_matching, is_fk_colored, latin_square_coloring, ColoredHypergraph};
use turanlab::shifting::{shift, stabilize};
use turanlab::{MultipartiteHypergraph, Shape, Vertex};
use turanlab_cli::{parse_list, parse_tuples, run_sweep, CliError, SweepConfig};

#[derive(Parser)]
#[command(name = "turanlab", version, about = "Extremal multipartite hypergraph workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    F,
    G,
    H,
    Thm11,
    Thm12,
    Lemma21,
    Emc,
    RainbowBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum Build {
    H1,
    H2,
    G,
    Partition,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed form.
    Formula {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        k: usize,
        /// Comma separated part sizes.
        #[arg(long, default_value = "")]
        sizes: String,
        #[arg(long)]
        n: Option<usize>,
        /// Exit 3 when the formula's hypothesis fails.
        #[arg(long)]
        strict: bool,
    },
    /// Print an extremal construction as hypergraph JSON.
    Construct {
        #[arg(long, value_enum)]
        which: Build,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        sizes: String,
    },
    /// Print the perfect-matching partition of the complete r-partite r-graph.
    Partition {
        #[arg(long)]
        sizes: String,
    },
    /// Compare the exact search against a closed form over a grid.
    Verify {
        /// TOML or JSON sweep file; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        max_sizes: Option<String>,
        /// Explicit tuples such as `1,2;2,2`.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long, env = "TURANLAB_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        witnesses: bool,
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        require_conclusive: bool,
    },
    /// Shift a hypergraph to a stable one, or apply a single shift.
    Shift {
        /// Hypergraph JSON file, `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        /// `part,index` of the vertex receiving edges.
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
    },
    /// Search a colored r-partite r-graph for a rainbow matching.
    Rainbow {
        #[arg(long, conflicts_with = "latin", required_unless_present = "latin")]
        input: Option<PathBuf>,
        /// Use the n-by-n Latin square coloring instead of a file.
        #[arg(long)]
        latin: Option<usize>,
        #[arg(long)]
        k: usize,
    },
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_vertex(text: &str) -> Result<Vertex, CliError> {
    match parse_list(text)?[..] {
        [p, i] => Ok(Vertex::new(p, i)),
        _ => Err(CliError::Usage(format!("vertex `{text}` must be `part,index`"))),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Formula { which, r, s, k, sizes, n, strict } => {
            let id = match which {
                Which::F => FormulaId::F,
                Which::G => FormulaId::G,
                Which::H => FormulaId::H,
                Which::Thm11 => FormulaId::Thm11,
                Which::Thm12 => FormulaId::Thm12,
                Which::Lemma21 => FormulaId::Lemma21,
                Which::Emc => FormulaId::Emc,
                Which::RainbowBound => FormulaId::RainbowBound,
            };
            let sizes = parse_list(&sizes)?;
            if let (Some(r), false) = (r, sizes.is_empty()) {
                if r != sizes.len() {
                    return Err(CliError::Usage(format!("--r {r} does not match {} sizes", sizes.len())));
                }
            }
            let res = evaluate(id, FormulaInputs { s, r, k, sizes, n })?;
            print_json(&res)?;
            if strict && !res.hypothesis_ok {
                return Err(CliError::Hypothesis);
            }
        }
        Command::Construct { which, s, k, sizes } => {
            let sizes = parse_list(&sizes)?;
            match which {
                Build::Partition => print_json(&matching_partition(&Shape::new(sizes.len(), sizes)?)?)?,
                Build::H1 => print_json(&h1_construction(&Shape::new(s, sizes)?, k)?)?,
                Build::H2 => print_json(&h2_construction(&Shape::new(s, sizes)?, k)?)?,
                Build::G => print_json(&g_construction(&Shape::new(2, sizes)?, k)?)?,
            }
        }
        Command::Partition { sizes } => {
            let sizes = parse_list(&sizes)?;
            print_json(&matching_partition(&Shape::new(sizes.len(), sizes)?)?)?;
        }
        Command::Verify {
            config,
            theorem,
            r,
            s,
            k,
            max_size,
            max_sizes,
            sizes,
            node_budget,
            jobs,
            output,
            seed,
            witnesses,
            timings,
            require_conclusive,
        } => {
            let mut cfg = match &config {
                Some(path) => SweepConfig::load(path)?,
                None => SweepConfig::default(),
            };
            if let Some(x) = theorem {
                cfg.theorem = x;
            }
            if let Some(x) = r {
                cfg.r = parse_list(&x)?;
            }
            if let Some(x) = s {
                cfg.s = parse_list(&x)?;
            }
            if let Some(x) = k {
                cfg.k = parse_list(&x)?;
            }
            if let Some(x) = max_size {
                cfg.max_size = Some(x);
            }
            if let Some(x) = max_sizes {
                cfg.max_sizes = Some(parse_list(&x)?);
            }
            if let Some(x) = sizes {
                cfg.sizes = parse_tuples(&x)?;
            }
            if let Some(x) = node_budget {
                cfg.node_budget = x;
            }
            if jobs.is_some() {
                cfg.jobs = jobs;
            }
            if output.is_some() {
                cfg.output = output;
            }
            if let Some(x) = seed {
                cfg.seed = x;
            }
            cfg.witnesses |= witnesses;
            cfg.timings |= timings;

            let report = run_sweep(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    let csv = report.write(path)?;
                    eprintln!("wrote {} and {}", path.display(), csv.display());
                }
                None => print!("{}", report.to_json()),
            }
            let s = &report.summary;
            eprintln!(
                "{} points: {} agree, {} fail, {} flagged, {} inconclusive",
                s.points, s.agree, s.failures, s.flagged_mismatches, s.inconclusive
            );
            report.verdict(require_conclusive)?;
        }
        Command::Shift { input, u, v } => {
            let h = MultipartiteHypergraph::from_json(&read_input(&input)?)?;
            match (u, v) {
                (Some(u), Some(v)) => print_json(&shift(&h, parse_vertex(&u)?, parse_vertex(&v)?)?)?,
                _ => print_json(&stabilize(&h))?,
            }
        }
        Command::Rainbow { input, latin, k } => {
            let c = match (input, latin) {
                (_, Some(n)) => latin_square_coloring(n)?,
                (Some(path), None) => ColoredHypergraph::from_json(&read_input(&path)?)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let matching = match find_rainbow_matching(&c, k) {
                Some(m) => serde_json::to_value(m)?,
                None => json!("none"),
            };
            print_json(&json!({ "k": k, "fk_colored": is_fk_colored(&c, k), "matching": matching }))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
