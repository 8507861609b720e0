//! `tauu`: factorization analysis in finite commutative rings with
//! zero-divisors.
//!
//! Exit codes: 0 on success, 1 when a property check fails or a theorem
//! run produces a counterexample, 2 on usage errors.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use std::str::FromStr;
use tauu_core::theorem::{self, CorpusEntry, TheoremId};
use tauu_core::{Analyzer, AssocMode, Element, Grade, PropName, Ring, TauRelation};

#[derive(Parser)]
#[command(name = "tauu", version, about = "tau-factorization and tau-U-factorization toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RingArg {
    /// Ring spec: `Z<n>`, `Z6xZ8`, or `table:<path>`.
    #[arg(long)]
    ring: String,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    ring: RingArg,
    /// Relation spec: `full`, `comaximal`, `pairs:<path>`, or
    /// `prod(spec1,...,specN)`.
    #[arg(long)]
    tau: String,
}

#[derive(Subcommand)]
enum Command {
    /// Carrier, units, nonzero non-units, flags, and chain height.
    RingInfo(RingArg),
    /// Enumerate tau-factorizations of an element.
    Factorize {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        elem: String,
        #[arg(long, default_value = "assoc")]
        beta: String,
        /// Length cap (default |R|+2; the TAUU_CAP environment variable
        /// overrides the default for cap-stability experiments).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Enumerate the essential multisets of tau-U-factorizations.
    Ufactorize {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        elem: String,
        #[arg(long, default_value = "assoc")]
        beta: String,
    },
    /// Irreducibility grades of an element, with witnesses.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        elem: String,
    },
    /// Essential divisor inventory of an element.
    Inventory {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        elem: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = "assoc")]
        beta: String,
    },
    /// Structural report of a relation (multiplicative, divisive, ...).
    CheckRelation(PairArgs),
    /// Decide a ring-level property.
    CheckRing {
        #[command(flatten)]
        pair: PairArgs,
        /// Property name, e.g. `U-BFR`, `atomic`, `tau-presimplifiable`.
        #[arg(long)]
        prop: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Verify theorems on one pair or a corpus file.
    Verify {
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        /// Corpus file with one `ring-spec | relation-spec` per line.
        #[arg(long)]
        corpus: Option<String>,
        /// Comma-separated theorem ids, or `all`.
        #[arg(long, default_value = "all")]
        ids: String,
    },
    /// Print the default corpus.
    Corpus,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_ring(spec: &str) -> tauu_core::Result<Ring> {
    let ring = Ring::parse(spec)?;
    if ring.oversized() {
        eprintln!(
            "warning: |{}| = {} exceeds 64; exhaustive checks may be slow",
            ring.spec(),
            ring.size()
        );
    }
    Ok(ring)
}

fn parse_pair(pair: &PairArgs) -> tauu_core::Result<(Ring, TauRelation)> {
    let ring = parse_ring(&pair.ring.ring)?;
    let tau = TauRelation::parse(&ring, &pair.tau)?;
    for w in tau.warnings() {
        eprintln!("warning: {w}");
    }
    // TauRelation borrows nothing from Ring, so the pair can move together.
    Ok((ring, tau))
}

fn parse_elem(ring: &Ring, text: &str) -> tauu_core::Result<Element> {
    ring.parse_element(text)
}

fn env_cap() -> Option<usize> {
    std::env::var("TAUU_CAP").ok().and_then(|v| v.parse().ok())
}

fn run(cli: &Cli) -> tauu_core::Result<ExitCode> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::RingInfo(arg) => {
            let ring = parse_ring(&arg.ring)?;
            output::ring_info(&ring, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Factorize { pair, elem, beta, cap } => {
            let (ring, tau) = parse_pair(pair)?;
            let a = parse_elem(&ring, elem)?;
            let beta = AssocMode::from_str(beta)?;
            let an = Analyzer::new(&ring, &tau);
            let result = an.enumerate_tau_factorizations(a, beta, cap.or_else(env_cap))?;
            output::factorize(&ring, a, &result, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Ufactorize { pair, elem, beta } => {
            let (ring, tau) = parse_pair(pair)?;
            let a = parse_elem(&ring, elem)?;
            let beta = AssocMode::from_str(beta)?;
            let an = Analyzer::new(&ring, &tau);
            let result = an.enumerate_tau_u_factorizations(a, beta)?;
            output::ufactorize(&ring, a, &result, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { pair, elem } => {
            let (ring, tau) = parse_pair(pair)?;
            let a = parse_elem(&ring, elem)?;
            let an = Analyzer::new(&ring, &tau);
            let report = an.irreducibility(a)?;
            output::classify(&ring, &report, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Inventory { pair, elem, alpha, beta } => {
            let (ring, tau) = parse_pair(pair)?;
            let a = parse_elem(&ring, elem)?;
            let alpha = alpha.as_deref().map(Grade::from_str).transpose()?;
            let beta = AssocMode::from_str(beta)?;
            let an = Analyzer::new(&ring, &tau);
            let inventory = an.essential_divisor_inventory(a, beta, alpha)?;
            output::inventory(&ring, a, &inventory, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckRelation(pair) => {
            let (ring, tau) = parse_pair(pair)?;
            let an = Analyzer::new(&ring, &tau);
            let report = an.relation_report();
            output::relation(&ring, &tau, &report, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckRing { pair, prop, alpha, beta } => {
            let (ring, tau) = parse_pair(pair)?;
            let name = PropName::from_str(prop)?;
            let alpha = alpha.as_deref().map(Grade::from_str).transpose()?;
            let beta = beta.as_deref().map(AssocMode::from_str).transpose()?;
            let an = Analyzer::new(&ring, &tau);
            let verdict = an.check_property(name, alpha, beta);
            output::verdict(&ring, &verdict, json);
            Ok(if verdict.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { ring, tau, corpus, ids } => {
            let entries = match (corpus, ring, tau) {
                (Some(path), None, None) => {
                    let text = std::fs::read_to_string(path)?;
                    theorem::parse_corpus(&text)?
                }
                (None, Some(r), Some(t)) => vec![CorpusEntry::new(r, t)],
                _ => {
                    return Err(tauu_core::Error::InvalidSpec(
                        "pass either --corpus FILE or both --ring and --tau".into(),
                    ))
                }
            };
            let ids = parse_ids(ids)?;
            let report = theorem::run_corpus(&entries, &ids)?;
            output::corpus_report(&report, json);
            Ok(if report.fail == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Corpus => {
            for entry in theorem::default_corpus() {
                println!("{} | {}", entry.ring_spec, entry.tau_spec);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_ids(text: &str) -> tauu_core::Result<Vec<TheoremId>> {
    if text.trim() == "all" {
        return Ok(TheoremId::all());
    }
    text.split(',').map(|s| TheoremId::from_str(s.trim())).collect()
}
