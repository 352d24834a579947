use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use fusion_forge::catalog;
use fusion_forge::classify::{self, Job, SearchOutcome, SCHEMA};
use fusion_forge::completer::CompleterOptions;
use fusion_forge::dimension::{fp_dimensions, pointed_part};
use fusion_forge::document::{self, RingDocument};
use fusion_forge::sieve::{sieve, Rule, RuleFlags, SearchSpec, Verdict};
use fusion_forge::spectral::{character_table_with_seed, codegrees, seed_from_env};
use fusion_forge::symmetry::{antiautomorphisms, automorphism_group, conformance_suite, fixed_point_free_in};
use fusion_forge::{validate, Error, FusionRing};

/// Exact fusion rings with fixed-point-free automorphisms of prime order.
#[derive(Parser)]
#[command(name = "fusion-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fusion ring axioms; exits 0 iff the ring is valid.
    Validate { file: PathBuf },
    /// Dimensions, pointed part, codegrees, characters and automorphisms.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Stream the codegree/dimension candidates for one rank and prime as JSON lines.
    Sieve {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        prime: usize,
        /// Turn off a pruning rule (repeatable).
        #[arg(long = "disable", value_name = "RULE")]
        disabled: Vec<String>,
    },
    /// Complete the sieve survivors into rings.
    Search {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        prime: Option<usize>,
        /// Search every rank from --rank up to this one.
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Built-in rings.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Reproducible reports.
    Report {
        #[command(subcommand)]
        command: ReportCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Show { name: String },
    /// Write a builtin (or all of them) as ring JSON.
    Export {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        /// File for one ring, directory with --all; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Classify ranks 1 to 8 over every admissible prime and tabulate.
    FigureA {
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        jobs: Jobs,
    },
}

#[derive(Args)]
struct Jobs {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

/// A failure of the input rather than of the tool.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct DomainFailure(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<DomainFailure>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Precondition(_) | Error::UnknownBuiltin(_) | Error::Unsupported(_)) => 2,
        Some(Error::Shape(_) | Error::Invalid(_) | Error::Document(_) | Error::Json(_)) => 1,
        Some(Error::IndexOutOfRange { .. } | Error::NotAGroup(_)) => 1,
        Some(Error::Numerical(_)) | None => {
            if e.downcast_ref::<std::io::Error>().is_some() {
                2
            } else {
                3
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Analyze { file, json } => cmd_analyze(&file, json),
        Command::Sieve { rank, prime, disabled } => cmd_sieve(rank, prime, &disabled),
        Command::Search { rank, prime, max_rank, out, jobs } => {
            let hi = max_rank.unwrap_or(rank);
            if hi < rank {
                return Err(Error::Precondition(format!("--max-rank {hi} is below --rank {rank}")).into());
            }
            let primes = prime.map(|p| vec![p]);
            let outcome = run_search(rank..=hi, primes.as_deref(), jobs.jobs)?;
            write_search(&outcome, &out)?;
            let candidates = outcome.candidates.len();
            println!(
                "{} candidates, {} rings; manifest at {}",
                candidates,
                outcome.rings.len(),
                out.join("manifest.json").display()
            );
            if candidates == 0 {
                bail!(DomainFailure("no candidates".into()));
            }
            Ok(())
        }
        Command::Catalog { command } => cmd_catalog(command),
        Command::Report { command: ReportCommand::FigureA { out, jobs } } => {
            let outcome = run_search(1..=8, None, jobs.jobs)?;
            let fig = classify::figure(&outcome);
            let text = classify::render_figure(&fig);
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            fs::write(out.join("figure-a.txt"), &text)?;
            fs::write(out.join("figure-a.json"), serde_json::to_string_pretty(&fig)? + "\n")?;
            print!("{text}");
            Ok(())
        }
    }
}

fn read_ring(file: &Path) -> Result<FusionRing> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    Ok(document::parse(&text)?)
}

fn cmd_validate(file: &Path) -> Result<()> {
    let ring = read_ring(file)?;
    let report = validate(&ring);
    println!("{report}");
    if report.is_valid() {
        Ok(())
    } else {
        bail!(DomainFailure(format!("{} is not a fusion ring", file.display())))
    }
}

fn analysis(ring: &FusionRing) -> Result<Value> {
    let report = validate(ring);
    if !report.is_valid() {
        bail!(DomainFailure(format!("ring is invalid:\n{report}")));
    }
    let dims = fp_dimensions(ring)?;
    let pointed = pointed_part(ring);
    let cods = codegrees(ring);
    let characters = if ring.is_commutative() {
        Some(character_table_with_seed(ring, seed_from_env())?)
    } else {
        None
    };
    let autos = automorphism_group(ring);
    let antis = antiautomorphisms(ring);
    let fpf = fixed_point_free_in(autos.clone());
    let mut conformance = Vec::new();
    for (map, _) in &fpf {
        conformance.push(json!({ "map": map.perm, "report": conformance_suite(ring, map)? }));
    }
    Ok(json!({
        "schema": SCHEMA,
        "name": ring.name(),
        "rank": ring.rank(),
        "labels": (0..ring.rank()).map(|i| ring.label(i)).collect::<Vec<_>>(),
        "validation": report,
        "dimensions": dims,
        "pointed_part": { "basis": pointed.basis, "group": pointed.group },
        "codegrees": {
            "charpoly": cods.charpoly.to_string(),
            "integer_roots": cods.integer_roots,
            "residual": cods.residual.to_string(),
            "all_integer": cods.all_integer,
        },
        "characters": characters,
        "automorphisms": autos.iter().map(|m| &m.perm).collect::<Vec<_>>(),
        "antiautomorphisms": antis.iter().map(|m| &m.perm).collect::<Vec<_>>(),
        "fixed_point_free": fpf.iter().map(|(m, p)| json!({ "map": m.perm, "prime": p })).collect::<Vec<_>>(),
        "conformance": conformance,
    }))
}

fn cmd_analyze(file: &Path, as_json: bool) -> Result<()> {
    let ring = read_ring(file)?;
    let value = analysis(&ring)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&value)?);
        return Ok(());
    }
    let dims = fp_dimensions(&ring)?;
    let cods = codegrees(&ring);
    let pointed = pointed_part(&ring);
    println!("ring      {}", ring.name().unwrap_or("(unnamed)"));
    println!("rank      {}", ring.rank());
    match &dims.exact {
        Some(d) => println!("dims      {:?}  FPdim {}", d, dims.fpdim_total_exact.unwrap_or_default()),
        None => println!("dims      {:?}  FPdim {:.6}", dims.dims, dims.fpdim_total),
    }
    println!("pointed   {:?}  group {}", pointed.basis, pointed.group);
    println!("charpoly  {}", cods.charpoly);
    println!("codegrees {:?}{}", cods.integer_roots, if cods.all_integer { "" } else { " (not all integer)" });
    if let Some(chars) = value["characters"].get("rows") {
        println!("characters");
        for row in chars.as_array().into_iter().flatten() {
            println!("  {row}");
        }
    }
    println!("automorphisms {}", value["automorphisms"].as_array().map_or(0, Vec::len));
    let fpf = fixed_point_free_in(automorphism_group(&ring));
    if fpf.is_empty() {
        println!("no fixed-point-free automorphism of prime order");
    }
    for (map, p) in &fpf {
        println!("fixed-point-free, order {p}: {map}");
        print!("{}", conformance_suite(&ring, map)?);
    }
    Ok(())
}

fn parse_rule(name: &str) -> Result<Rule> {
    Rule::ALL
        .iter()
        .copied()
        .find(|r| r.name() == name)
        .ok_or_else(|| Error::Precondition(format!("unknown rule `{name}`")).into())
}

fn cmd_sieve(rank: usize, prime: usize, disabled: &[String]) -> Result<()> {
    let mut flags = RuleFlags::all();
    for name in disabled {
        flags.set(parse_rule(name)?, false);
    }
    let spec = SearchSpec::new(rank, prime)?.with_flags(flags);
    let out = sieve(&spec);
    if out.lists.is_empty() {
        bail!(DomainFailure(format!("no codegree lists for rank {rank}, prime {prime}")));
    }
    let mut lines = String::new();
    for list in &out.lists {
        let cands: Vec<_> = out.candidates.iter().filter(|c| c.list == *list).collect();
        if cands.is_empty() {
            let row = json!({ "F": list.fpdim, "codegrees": list.codegrees, "dims": null, "pruned": "dim-type" });
            lines.push_str(&format!("{row}\n"));
        }
        for c in cands {
            let pruned = match c.verdict() {
                Verdict::Keep => Value::Null,
                Verdict::Prune(rule) => rule.name().into(),
            };
            let row = json!({ "F": list.fpdim, "codegrees": list.codegrees, "dims": c.dims, "pruned": pruned });
            lines.push_str(&format!("{row}\n"));
        }
    }
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(lines.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        other => other?,
    }
    Ok(())
}

fn run_search(
    ranks: std::ops::RangeInclusive<usize>,
    primes: Option<&[usize]>,
    jobs: Option<usize>,
) -> Result<SearchOutcome> {
    let ranks: Vec<usize> = ranks.collect();
    let mut planned: Vec<Job> = Vec::new();
    for &rank in &ranks {
        planned.extend(classify::plan(rank, primes, RuleFlags::all())?);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().context("starting worker pool")?;
    let options = CompleterOptions::default();
    let outcomes = pool.install(|| {
        planned
            .par_iter()
            .map(|job| classify::run_job(job, &options))
            .collect::<fusion_forge::Result<Vec<_>>>()
    })?;
    Ok(classify::merge(ranks, outcomes)?)
}

fn write_search(outcome: &SearchOutcome, out: &Path) -> Result<()> {
    let dir = out.join("rings");
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for r in &outcome.rings {
        let file = dir.join(format!("{}-{}.json", r.name, &r.hash[..12]));
        fs::write(&file, document::emit(&r.ring))?;
    }
    fs::write(out.join("manifest.json"), serde_json::to_string_pretty(outcome)? + "\n")?;
    Ok(())
}

fn cmd_catalog(command: CatalogCommand) -> Result<()> {
    match command {
        CatalogCommand::List => {
            for name in catalog::BUILTIN_NAMES {
                println!("{name}");
            }
            println!("D5family(a,+|-)");
            println!("ehaag_matrix");
        }
        CatalogCommand::Show { name } => {
            if name == "ehaag_matrix" {
                print!("{}", catalog::ehaag_matrix());
                return Ok(());
            }
            let ring = catalog::builtin(&name)?;
            println!("{name}: rank {}", ring.rank());
            for i in 0..ring.rank() {
                println!("N_{}  (dual {})", ring.label(i), ring.label(ring.dual(i)));
                print!("{}", ring.multiplication_matrix(i)?);
            }
        }
        CatalogCommand::Export { name, all, out } => {
            if all {
                let dir = out.unwrap_or_else(|| PathBuf::from("."));
                fs::create_dir_all(&dir)?;
                for ring in catalog::all_builtins() {
                    let name = ring.name().unwrap_or("unnamed").to_string();
                    fs::write(dir.join(format!("{name}.json")), document::emit(&ring))?;
                }
                return Ok(());
            }
            let Some(name) = name else {
                return Err(Error::Precondition("export needs a NAME or --all".into()).into());
            };
            let text = RingDocument::from_ring(&catalog::builtin(&name)?).to_json_string();
            match out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}
