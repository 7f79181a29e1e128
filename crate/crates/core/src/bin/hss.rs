//! Command-line front end: construct the point-set families, check a set
//! against the special-set characterizations, run the per-statement
//! verification checks, run the backtracking search, and print count tables.
//!
//! Exit status: 0 on pass/success, 1 on a verified failure (witness found),
//! 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hermitian_special_sets::constructions::{self, SAlphaBetaParams};
use hermitian_special_sets::projective::{PointSet, PointSetFile};
use hermitian_special_sets::search::{self, SearchConfig, SearchMode};
use hermitian_special_sets::{verify, Felt, Field, Hermitian};

#[derive(Parser)]
#[command(
    name = "hss",
    about = "Exact computations on special sets of the Hermitian surface H(3,q^2)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a point-set family as JSON.
    Construct(ConstructArgs),
    /// Run both special-set characterizations on a family or a file.
    Check(CheckArgs),
    /// Run a statement check and print its report.
    Verify(VerifyArgs),
    /// Run the backtracking search.
    Search(SearchArgs),
    /// Print the count table for a given q.
    Counts(CountsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Veronesean,
    StandardForm,
    Elliptic,
    EllipticPlusP,
    SAlphaBeta,
    Nonclassical,
    Surface,
    StandardLine,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum)]
    family: Family,
    /// Parameter x for the standard form, as base-p coefficients "c0,c1,..".
    #[arg(long)]
    x: Option<String>,
    /// Parameter α for the two-parameter family.
    #[arg(long)]
    alpha: Option<String>,
    /// Parameter β for the two-parameter family.
    #[arg(long)]
    beta: Option<String>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Read the point set from a JSON file written by `construct`.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    q: u64,
    /// Statement id (see --list).
    #[arg(long, required_unless_present_any = ["all", "list"])]
    statement: Option<String>,
    /// Run every registered statement.
    #[arg(long)]
    all: bool,
    /// List the registered statement ids.
    #[arg(long)]
    list: bool,
    /// Seed for sampled coverage modes.
    #[arg(long, default_value_t = 12345)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliSearchMode {
    /// Exhaustive special-set mode at q = 3, bound-engine mode beyond.
    Auto,
    SpecialSet,
    Main1,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value = "auto")]
    mode: CliSearchMode,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    max_solutions: Option<usize>,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Disable the lossless first-two-points normalization.
    #[arg(long)]
    no_symmetry: bool,
    /// Disable pruning (brute-force oracle mode; pair with --depth).
    #[arg(long)]
    no_pruning: bool,
    /// Stop extension at this many points.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct CountsArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long, default_value_t = 12345)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Factor q as p^e for an odd prime p, rejecting everything else.
fn parse_q(q: u64) -> Result<(u64, u32), String> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(format!("q = {q} must be an odd prime power"));
    }
    let mut p = 3;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 2;
    }
    if !q.is_multiple_of(p) {
        p = q; // q itself is prime
    }
    let mut e = 0u32;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    if m != 1 {
        return Err(format!("q = {q} is not a prime power"));
    }
    Ok((p, e))
}

fn hermitian_for(q: u64) -> Result<Hermitian, String> {
    let (p, e) = parse_q(q)?;
    Hermitian::for_q(p, e).map_err(|e| e.to_string())
}

fn parse_element(f: &Field, text: &str, name: &str) -> Result<Felt, String> {
    let coeffs: Result<Vec<u64>, _> = text.split(',').map(|s| s.trim().parse::<u64>()).collect();
    let coeffs = coeffs.map_err(|e| format!("bad coefficient vector for {name}: {e}"))?;
    f.from_coeffs(&coeffs)
        .map_err(|e| format!("bad value for {name}: {e}"))
}

fn build_family(
    h: &Hermitian,
    family: Family,
    x: &Option<String>,
    alpha: &Option<String>,
    beta: &Option<String>,
) -> Result<PointSet, String> {
    let f = h.field();
    match family {
        Family::Veronesean => Ok(constructions::veronesean(h)),
        Family::StandardForm => {
            let x = match x {
                Some(text) => parse_element(f, text, "x")?,
                None => f.zero(),
            };
            constructions::standard_form(h, x).map_err(|e| e.to_string())
        }
        Family::Elliptic => Ok(constructions::elliptic_quadric(h)),
        Family::EllipticPlusP => Ok(constructions::elliptic_quadric(h).union_with(&[h.p_point()])),
        Family::SAlphaBeta => {
            let alpha = match alpha {
                Some(text) => parse_element(f, text, "alpha")?,
                None => return Err("--alpha is required for this family".into()),
            };
            let beta = match beta {
                Some(text) => parse_element(f, text, "beta")?,
                None => return Err("--beta is required for this family".into()),
            };
            let params = SAlphaBetaParams::new(f, alpha, beta).map_err(|e| e.to_string())?;
            Ok(constructions::s_alpha_beta(h, &params))
        }
        Family::Nonclassical => {
            let params = constructions::find_nonclassical_params(f).map_err(|e| e.to_string())?;
            Ok(constructions::s_alpha_beta(h, &params))
        }
        Family::Surface => Ok(h.surface_set()),
        Family::StandardLine => Ok(h.standard_line()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Construct(args) => {
            let h = hermitian_for(args.q)?;
            let set = build_family(&h, args.family, &args.x, &args.alpha, &args.beta)?;
            let file = PointSetFile::encode(h.field(), &set);
            let json = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
            match args.out {
                Some(path) => std::fs::write(path, json).map_err(|e| e.to_string())?,
                None => println!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let (h, set) = match (&args.input, args.family) {
                (Some(path), None) => {
                    let data = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
                    let file: PointSetFile =
                        serde_json::from_str(&data).map_err(|e| e.to_string())?;
                    let (field, set) = file.decode().map_err(|e| e.to_string())?;
                    (Hermitian::new(field), set)
                }
                (None, Some(family)) => {
                    let q = args.q.ok_or("--q is required with --family")?;
                    let h = hermitian_for(q)?;
                    let set = build_family(&h, family, &args.x, &args.alpha, &args.beta)?;
                    (h, set)
                }
                _ => return Err("provide exactly one of --family or --input".into()),
            };
            let verdict = verify::check_special_set(&h, &set);
            println!("{}", verdict.report.to_json());
            Ok(exit_for(verdict.report.passed()))
        }
        Command::Verify(args) => {
            if args.list {
                for id in verify::STATEMENTS {
                    println!("{id}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let h = hermitian_for(args.q)?;
            let mut all_passed = true;
            let ids: Vec<&str> = if args.all {
                verify::STATEMENTS.to_vec()
            } else {
                vec![args.statement.as_deref().unwrap()]
            };
            for id in ids {
                match verify::run_statement(&h, id, args.seed) {
                    Ok(report) => {
                        all_passed &= report.passed();
                        println!("{}", report.to_json());
                    }
                    Err(hermitian_special_sets::Error::UnknownStatement(s)) => {
                        return Err(format!("unknown statement id: {s}"));
                    }
                    Err(hermitian_special_sets::Error::UnsupportedQ(q)) => {
                        if args.all {
                            eprintln!("skipping {id}: not supported at q = {q}");
                        } else {
                            return Err(format!("{id} is not supported at q = {q}"));
                        }
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            Ok(exit_for(all_passed))
        }
        Command::Search(args) => {
            let h = hermitian_for(args.q)?;
            let mode = match args.mode {
                CliSearchMode::Auto if args.q <= 3 => CliSearchMode::SpecialSet,
                CliSearchMode::Auto => CliSearchMode::Main1,
                explicit => explicit,
            };
            match mode {
                CliSearchMode::Auto => unreachable!(),
                CliSearchMode::Main1 => {
                    let report = search::search_main1_sets(&h).map_err(|e| e.to_string())?;
                    println!("{}", report.to_json());
                    Ok(exit_for(report.passed()))
                }
                CliSearchMode::SpecialSet => {
                    let cfg = SearchConfig {
                        mode: SearchMode::SpecialSet,
                        symmetry_breaking: !args.no_symmetry,
                        pruning: !args.no_pruning,
                        max_solutions: args.max_solutions,
                        depth_limit: args.depth,
                        node_limit: args.node_limit,
                        thread_count: args.threads,
                        checkpoint_path: args.checkpoint,
                        checkpoint_every: 100_000,
                    };
                    let outcome =
                        search::search_special_sets(&h, &cfg).map_err(|e| e.to_string())?;
                    // one JSON line per solution, then the report
                    for set in &outcome.solutions {
                        let file = PointSetFile::encode(h.field(), set);
                        let line =
                            serde_json::to_string(&file.points).map_err(|e| e.to_string())?;
                        println!("{{\"solution\":{line}}}");
                    }
                    println!("{}", outcome.report.to_json());
                    Ok(exit_for(outcome.report.passed()))
                }
            }
        }
        Command::Counts(args) => {
            let h = hermitian_for(args.q)?;
            let report = verify::check_counts(&h, args.seed);
            match args.format {
                OutputFormat::Json => println!("{}", report.to_json()),
                OutputFormat::Csv => {
                    println!("key,value");
                    for (k, v) in &report.counts {
                        println!("{k},{v}");
                    }
                }
            }
            Ok(exit_for(report.passed()))
        }
    }
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
