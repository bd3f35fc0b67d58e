//! Command-line front end: construct systems, verify files, certify
//! chromatic numbers and uniqueness, and run the subset partitioner.
//!
//! Exit codes are the machine contract:
//! * `construct`: 0 written, 2 invalid parameters, 1 self-verification
//!   failure;
//! * `verify`: 0 all checks pass, 1 problems found, 2 parse error;
//! * `chromatic`/`unique`: 0 with a JSON verdict on stdout, 3 when the
//!   budget ran out and `--strict` was given, 2 parse error;
//! * `baranyai`: 0 written, 2 infeasible request;
//! * `export`: 0 written, 2 parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use starsys::chromatic::{
    chromatic_number, find_colouring, is_uniquely_k_colourable, ChromaticOutcome, SearchBudget,
    SearchOutcome, UniquenessOutcome,
};
use starsys::constructions::{
    build_2chromatic_estar, build_equitable_2chromatic_3star, build_unique_2chromatic_estar,
    extend_kchromatic_3star, extend_kchromatic_estar, extend_unique_2chromatic,
    extend_unique_kchromatic, lift_3star_chromatic, lift_estar_chromatic,
    lift_unique_to_strong_equitable_k, make_unique_kchromatic, ConstructionError,
    ConstructionResult,
};
use starsys::io;
use starsys::verify::{check_colouring, validate_decomposition};

#[derive(Parser)]
#[command(name = "starsys", version, about = "e-star systems: construction and certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a system from one of the construction families.
    Construct(ConstructArgs),
    /// Check a system file (and optionally a colouring file).
    Verify {
        system: PathBuf,
        #[arg(long)]
        colouring: Option<PathBuf>,
    },
    /// Certify the chromatic number by exhaustive search.
    Chromatic {
        system: PathBuf,
        /// Stop looking above this many colours.
        #[arg(long, default_value_t = 32)]
        max_k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Exit 3 when the budget runs out.
        #[arg(long)]
        strict: bool,
    },
    /// Decide uniqueness of k-colourings.
    Unique {
        system: PathBuf,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        strict: bool,
    },
    /// Partition all e-subsets of [m] into disjoint classes of given sizes.
    Baranyai {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        e: u32,
        /// Comma-separated class sizes, e.g. `2,2,2` or `2x10,1x7`.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a system file as JSON.
    Export {
        system: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction family: 2.1, 2.2, 2.3, 3.1, 3.2, 3.3, 4.1, 4.2, 4.3,
    /// 4.4 or 4.5.
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Order of the intermediate base where the family starts from one.
    #[arg(long)]
    base_n: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Colouring file path; defaults to `<out>.col`.
    #[arg(long)]
    col_out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    /// Wall-clock limit in seconds; the STARLIGHT_BUDGET_SECONDS
    /// environment variable overrides the default.
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl BudgetArgs {
    fn to_budget(&self) -> SearchBudget {
        let env_default = std::env::var("STARLIGHT_BUDGET_SECONDS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(300.0);
        SearchBudget {
            max_nodes: self.budget_nodes,
            max_seconds: self.budget_seconds.unwrap_or(env_default),
            workers: self.workers.max(1),
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Construct(args) => construct(args),
        Command::Verify { system, colouring } => verify(&system, colouring.as_deref()),
        Command::Chromatic {
            system,
            max_k,
            budget,
            strict,
        } => chromatic(&system, max_k, budget.to_budget(), strict),
        Command::Unique {
            system,
            k,
            budget,
            strict,
        } => unique(&system, k, budget.to_budget(), strict),
        Command::Baranyai {
            m,
            e,
            sizes,
            seed,
            out,
        } => baranyai(m, e, &sizes, seed, out.as_deref()),
        Command::Export { system, format } => export(&system, &format),
    }
}

fn invalid(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn construct(args: ConstructArgs) -> ExitCode {
    let result = match dispatch_construct(&args) {
        Ok(r) => r,
        Err(DispatchError::Invalid(msg)) => return invalid(&msg),
        Err(DispatchError::Construction(ConstructionError::SelfCheckFailed(msg))) => {
            eprintln!("self-verification failed: {msg}");
            return ExitCode::from(1);
        }
        Err(DispatchError::Construction(err)) => return invalid(&err.to_string()),
    };
    let col_out = args
        .col_out
        .clone()
        .unwrap_or_else(|| append_ext(&args.out, "col"));
    let claims_out = append_ext(&args.out, "claims.json");
    let claims_json = match serde_json::to_string_pretty(&result.claims) {
        Ok(j) => j,
        Err(err) => return invalid(&format!("claims serialization: {err}")),
    };
    for (path, data) in [
        (&args.out, io::write_system(&result.system)),
        (&col_out, io::write_colouring(&result.colouring)),
        (&claims_out, claims_json + "\n"),
    ] {
        if let Err(err) = std::fs::write(path, data) {
            eprintln!("error writing {}: {err}", path.display());
            return ExitCode::from(1);
        }
    }
    println!(
        "wrote order-{} system with {} blocks to {}",
        result.system.n(),
        result.system.block_count(),
        args.out.display()
    );
    ExitCode::SUCCESS
}

fn append_ext(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

enum DispatchError {
    Invalid(String),
    Construction(ConstructionError),
}

impl From<ConstructionError> for DispatchError {
    fn from(err: ConstructionError) -> Self {
        DispatchError::Construction(err)
    }
}

fn dispatch_construct(args: &ConstructArgs) -> Result<ConstructionResult, DispatchError> {
    let need = |opt: Option<u32>, name: &str| {
        opt.ok_or_else(|| {
            DispatchError::Invalid(format!(
                "--{name} is required for theorem {}",
                args.theorem
            ))
        })
    };
    match args.theorem.as_str() {
        "2.1" => Ok(build_equitable_2chromatic_3star(need(args.n, "n")?)?),
        "2.2" => {
            let base = build_equitable_2chromatic_3star(args.base_n.unwrap_or(6))?;
            Ok(extend_kchromatic_3star(&base, None, need(args.n, "n")?)?)
        }
        "2.3" => {
            let k = args.k.unwrap_or(3);
            if k < 3 {
                return Err(DispatchError::Invalid("--k must be at least 3".into()));
            }
            let mut cur = build_equitable_2chromatic_3star(args.base_n.unwrap_or(6))?;
            while cur.claims.k < k {
                cur = lift_3star_chromatic(&cur, args.seed)?;
            }
            Ok(cur)
        }
        "3.1" => Ok(build_2chromatic_estar(need(args.e, "e")?)?),
        "3.2" => {
            let e = need(args.e, "e")?;
            let base = match args.base_n {
                Some(b) if b != 2 * e => {
                    extend_kchromatic_estar(&build_2chromatic_estar(e)?, None, b)?
                }
                _ => build_2chromatic_estar(e)?,
            };
            Ok(extend_kchromatic_estar(&base, None, need(args.n, "n")?)?)
        }
        "3.3" => {
            let k = args.k.unwrap_or(3);
            if k < 3 {
                return Err(DispatchError::Invalid("--k must be at least 3".into()));
            }
            let mut cur = build_2chromatic_estar(need(args.e, "e")?)?;
            while cur.claims.k < k {
                cur = lift_estar_chromatic(&cur, args.seed)?;
            }
            Ok(cur)
        }
        "4.1" => Ok(build_unique_2chromatic_estar(need(args.e, "e")?)?),
        "4.2" => {
            let base = build_unique_2chromatic_estar(need(args.e, "e")?)?;
            Ok(extend_unique_2chromatic(&base, need(args.n, "n")?)?)
        }
        "4.3" => {
            let cur = unique_chain(need(args.e, "e")?, args.k.unwrap_or(3), args.seed)?;
            Ok(lift_unique_to_strong_equitable_k(&cur)?)
        }
        "4.4" => {
            let k = args.k.unwrap_or(3);
            let cur = unique_chain(need(args.e, "e")?, k, args.seed)?;
            let lifted = lift_unique_to_strong_equitable_k(&cur)?;
            Ok(make_unique_kchromatic(&lifted, args.seed)?)
        }
        "4.5" => {
            let k = args.k.unwrap_or(3);
            let cur = unique_chain(need(args.e, "e")?, k, args.seed)?;
            let lifted = lift_unique_to_strong_equitable_k(&cur)?;
            let unique = make_unique_kchromatic(&lifted, args.seed)?;
            Ok(extend_unique_kchromatic(&unique, need(args.n, "n")?)?)
        }
        other => Err(DispatchError::Invalid(format!(
            "unknown theorem {other:?}; expected one of 2.1, 2.2, 2.3, 3.1, 3.2, 3.3, 4.1, 4.2, 4.3, 4.4, 4.5"
        ))),
    }
}

/// Uniquely (k-1)-chromatic chain: the 2-colour gadget, then alternating
/// copy-lift and uniqueness-gadget steps.
fn unique_chain(e: u32, k: u32, seed: u64) -> Result<ConstructionResult, DispatchError> {
    if k < 3 {
        return Err(DispatchError::Invalid("--k must be at least 3".into()));
    }
    let mut cur = build_unique_2chromatic_estar(e)?;
    while cur.claims.k < k - 1 {
        let lifted = lift_unique_to_strong_equitable_k(&cur)?;
        cur = make_unique_kchromatic(&lifted, seed)?;
    }
    Ok(cur)
}

fn verify(system: &Path, colouring: Option<&Path>) -> ExitCode {
    let text = match std::fs::read_to_string(system) {
        Ok(t) => t,
        Err(err) => return parse_failure(&format!("{}: {err}", system.display())),
    };
    let sys = match io::parse_system(&text) {
        Ok(s) => s,
        Err(err) => return parse_failure(&format!("{}: {err}", system.display())),
    };
    let report = validate_decomposition(&sys);
    println!(
        "decomposition: {} ({} blocks, expected {}; {} uncovered, {} multiply covered)",
        if report.ok { "ok" } else { "NOT OK" },
        report.block_count_actual,
        report.block_count_expected,
        report.uncovered_count,
        report.multiply_covered_count,
    );
    for &(u, v) in report.uncovered_edges.iter().take(16) {
        println!("  uncovered: {{{u}, {v}}}");
    }
    for &((u, v), c) in report.multiply_covered_edges.iter().take(16) {
        println!("  covered {c} times: {{{u}, {v}}}");
    }
    let mut ok = report.ok;
    if let Some(col_path) = colouring {
        let text = match std::fs::read_to_string(col_path) {
            Ok(t) => t,
            Err(err) => return parse_failure(&format!("{}: {err}", col_path.display())),
        };
        let col = match io::parse_colouring(&text) {
            Ok(c) => c,
            Err(err) => return parse_failure(&format!("{}: {err}", col_path.display())),
        };
        if col.n() != sys.n() {
            return parse_failure(&format!(
                "colouring covers {} vertices, system has order {}",
                col.n(),
                sys.n()
            ));
        }
        let creport = check_colouring(&sys, &col);
        println!(
            "colouring: {} (class sizes {:?}, equitable: {}, strongly equitable: {})",
            if creport.proper { "proper" } else { "NOT PROPER" },
            creport.class_sizes,
            creport.equitable,
            creport.strongly_equitable,
        );
        ok &= creport.proper;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn parse_failure(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn chromatic(system: &Path, max_k: u32, budget: SearchBudget, strict: bool) -> ExitCode {
    let sys = match std::fs::read_to_string(system)
        .map_err(|e| e.to_string())
        .and_then(|t| io::parse_system(&t).map_err(|e| e.to_string()))
    {
        Ok(s) => s,
        Err(err) => return parse_failure(&err),
    };
    if max_k < sys.n() {
        // Bounded probe: try k = 1..=max_k only.
        for k in 1..=max_k {
            match find_colouring(&sys, k, budget) {
                SearchOutcome::Colourable(_) => {
                    println!("{}", serde_json::json!({ "chi": k }));
                    return ExitCode::SUCCESS;
                }
                SearchOutcome::NotColourable(_) => continue,
                SearchOutcome::BudgetExceeded(stats) => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "chi_lo": k,
                            "chi_hi": null,
                            "nodes": stats.nodes,
                        })
                    );
                    return if strict {
                        ExitCode::from(3)
                    } else {
                        ExitCode::SUCCESS
                    };
                }
            }
        }
        println!(
            "{}",
            serde_json::json!({ "chi_lo": max_k + 1, "chi_hi": null })
        );
        return ExitCode::SUCCESS;
    }
    match chromatic_number(&sys, budget) {
        ChromaticOutcome::Determined(cert) => {
            println!(
                "{}",
                serde_json::json!({
                    "chi": cert.chi,
                    "refutation_nodes": cert.refutation.map(|r| r.nodes),
                })
            );
            ExitCode::SUCCESS
        }
        ChromaticOutcome::Bounded { lo, hi, stats } => {
            println!(
                "{}",
                serde_json::json!({ "chi_lo": lo, "chi_hi": hi, "nodes": stats.nodes })
            );
            if strict {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}

fn unique(system: &Path, k: u32, budget: SearchBudget, strict: bool) -> ExitCode {
    let sys = match std::fs::read_to_string(system)
        .map_err(|e| e.to_string())
        .and_then(|t| io::parse_system(&t).map_err(|e| e.to_string()))
    {
        Ok(s) => s,
        Err(err) => return parse_failure(&err),
    };
    let (verdict, exceeded) = match is_uniquely_k_colourable(&sys, k, budget) {
        UniquenessOutcome::Unique(_) => ("unique", false),
        UniquenessOutcome::Multiple(_, _) => ("multiple", false),
        UniquenessOutcome::NotColourable(_) => ("not_colourable", false),
        UniquenessOutcome::BudgetExceeded(_) => ("budget_exceeded", true),
    };
    println!("{}", serde_json::json!({ "k": k, "verdict": verdict }));
    if exceeded && strict {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn parse_sizes(spec: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        match token.split_once('x') {
            Some((size, count)) => {
                let size: usize = size
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad size {token:?}"))?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad count {token:?}"))?;
                out.extend(std::iter::repeat(size).take(count));
            }
            None => out.push(token.parse().map_err(|_| format!("bad size {token:?}"))?),
        }
    }
    Ok(out)
}

fn baranyai(m: u32, e: u32, sizes: &str, seed: u64, out: Option<&Path>) -> ExitCode {
    let sizes = match parse_sizes(sizes) {
        Ok(s) => s,
        Err(msg) => return invalid(&msg),
    };
    match starsys::baranyai::partition_all_subsets(m, e, &sizes, seed) {
        Ok(partition) => {
            let text = io::write_partition(&partition);
            match out {
                Some(path) => {
                    if let Err(err) = std::fs::write(path, text) {
                        eprintln!("error writing {}: {err}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(err) => invalid(&err.to_string()),
    }
}

fn export(system: &Path, format: &str) -> ExitCode {
    if format != "json" {
        return invalid(&format!("unsupported format {format:?}"));
    }
    let sys = match std::fs::read_to_string(system)
        .map_err(|e| e.to_string())
        .and_then(|t| io::parse_system(&t).map_err(|e| e.to_string()))
    {
        Ok(s) => s,
        Err(err) => return parse_failure(&err),
    };
    // A claims sidecar written by `construct` rides along when present.
    let claims = std::fs::read_to_string(append_ext(system, "claims.json"))
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok());
    println!("{}", io::system_to_json(&sys, claims.as_ref()));
    ExitCode::SUCCESS
}
