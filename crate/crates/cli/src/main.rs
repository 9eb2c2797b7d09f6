use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wjh_core::capelli::{verify_lemma_m1, LambdaMode};
use wjh_core::checks::{
    is_jordan_hom, is_weighted_jordan_hom, lemma_l0_equivalences, preserves_zero_jordan_pairs, satisfies_txy,
    zero_jordan_pairs, CheckVerdict, PairScan, Witness,
};
use wjh_core::gallery::{char2_example, corollary_c1_certificate, grassmann_example};
use wjh_core::report::{emit_report, Report, ReportFormat, ReportWitness};
use wjh_core::ring::DEFAULT_ENUM_CAP;
use wjh_core::search::{run_search, Predicate, SearchConfig, SearchMode, DEFAULT_QUICK_REJECT};
use wjh_core::suites::{run_suite, SuiteOverrides, SUITES};
use wjh_core::{AdditiveMap, Error, MapFile, Ring, RingRecipe};

#[derive(Parser)]
#[command(name = "wjh", version, about = "Checks for weighted Jordan homomorphisms on small finite rings")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a ring descriptor.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Evaluate one predicate on a map file.
    Check {
        map: PathBuf,
        #[arg(long, value_enum)]
        predicate: CheckPredicate,
        /// Sample this many zero-Jordan pairs instead of enumerating them all.
        #[arg(long)]
        pair_samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Worked examples and certificates.
    #[command(subcommand)]
    Gallery(GalleryCommand),
    /// Verify the Jordan-chain independence lemma over F_p.
    LemmaM1 {
        #[arg(long)]
        p: u64,
        #[arg(long, conflicts_with = "samples")]
        all_lambdas: bool,
        /// Random parameter tuples per case instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        scalar_trials: usize,
    },
    /// Named verification suites.
    #[command(subcommand)]
    Suite(SuiteCommand),
    /// Scan additive maps for ones passing a predicate chain without being weighted Jordan homomorphisms.
    Search(SearchArgs),
}

#[derive(Subcommand)]
enum RingCommand {
    Info { ring: PathBuf },
    Idempotents {
        ring: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP as u64)]
        cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckPredicate {
    Zjp,
    Wjh,
    Jordan,
    Txy,
    ExistsS,
    L0,
}

#[derive(Subcommand)]
enum GalleryCommand {
    Grassmann {
        #[arg(long)]
        p: u64,
        /// Write T as a map file here instead of printing it.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    Char2 {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    Certify {
        #[arg(long)]
        ring: PathBuf,
    },
}

#[derive(Subcommand)]
enum SuiteCommand {
    List,
    Run {
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "WJH_THREADS")]
        threads: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    ring: PathBuf,
    #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
    exhaustive: bool,
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "WJH_THREADS")]
    threads: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SearchPredicate::Surjective, SearchPredicate::Zjp])]
    predicates: Vec<SearchPredicate>,
    #[arg(long, default_value_t = DEFAULT_QUICK_REJECT)]
    quick_reject: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchPredicate {
    Surjective,
    Bijective,
    Zjp,
    ExistsS,
}

impl From<SearchPredicate> for Predicate {
    fn from(p: SearchPredicate) -> Self {
        match p {
            SearchPredicate::Surjective => Predicate::Surjective,
            SearchPredicate::Bijective => Predicate::Bijective,
            SearchPredicate::Zjp => Predicate::ZeroJordanPreserving,
            SearchPredicate::ExistsS => Predicate::CompanionS,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_ring(path: &Path) -> Result<Ring, Error> {
    let recipe: RingRecipe = serde_json::from_str(&fs::read_to_string(path)?)?;
    recipe.build()
}

fn read_map(path: &Path) -> Result<AdditiveMap, Error> {
    let file: MapFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    AdditiveMap::from_file(&file)
}

fn print_report(report: &Report, format: Format) -> Result<bool, Error> {
    std::io::stdout().write_all(&emit_report(report, format.into())?)?;
    Ok(report.passed)
}

fn print_json(value: &serde_json::Value) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn emit_map(map: &AdditiveMap, emit: Option<PathBuf>) -> Result<bool, Error> {
    let text = serde_json::to_string_pretty(&map.to_file()?)? + "\n";
    match emit {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn verdict_report(map: &AdditiveMap, verdict: CheckVerdict) -> Report {
    let mut report = Report::new(verdict.check.clone());
    for (k, v) in &verdict.detail {
        report.set(k.clone(), *v as u64);
    }
    if let Some(w) = verdict.witness {
        let elements = match w {
            Witness::Element { x } => vec![x],
            Witness::Pair { x, y } => vec![x, y],
        };
        report.witnesses.push(ReportWitness {
            label: "witness".into(),
            ring: map.domain().recipe().cloned(),
            map: None,
            elements,
        });
    }
    report.passed = verdict.passed;
    report
}

fn run(cli: Cli) -> Result<bool, Error> {
    let format = cli.format;
    match cli.command {
        Command::Ring(RingCommand::Info { ring }) => {
            let r = read_ring(&ring)?;
            let flags = r.flags();
            let center: Vec<String> = r.center_basis().iter().map(|c| r.format_element(c)).collect();
            match format {
                Format::Json => print_json(&json!({
                    "modulus": r.modulus(),
                    "rank": r.rank(),
                    "order": r.order().to_string(),
                    "labels": r.labels(),
                    "commutative": r.is_commutative(),
                    "characteristic": flags.characteristic,
                    "has_half": flags.has_half,
                    "two_torsion_free": flags.two_torsion_free,
                    "center": center,
                }))?,
                Format::Text => {
                    println!("modulus {} rank {} order {}", r.modulus(), r.rank(), r.order());
                    println!("basis {}", r.labels().join(" "));
                    println!(
                        "characteristic {} commutative {} has_half {} two_torsion_free {}",
                        flags.characteristic,
                        r.is_commutative(),
                        flags.has_half,
                        flags.two_torsion_free
                    );
                    println!("center spanned by {}", center.join(", "));
                }
            }
            Ok(true)
        }
        Command::Ring(RingCommand::Idempotents { ring, cap }) => {
            let r = read_ring(&ring)?;
            let idem = r.enumerate_idempotents(cap as u128)?;
            match format {
                Format::Json => print_json(&json!({ "count": idem.len(), "idempotents": idem }))?,
                Format::Text => {
                    for e in &idem {
                        println!("{}", r.format_element(e));
                    }
                    println!("{} idempotents", idem.len());
                }
            }
            Ok(true)
        }
        Command::Check {
            map,
            predicate,
            pair_samples,
            seed,
        } => {
            let t = read_map(&map)?;
            let verdict = match predicate {
                CheckPredicate::Zjp => {
                    let scan = match pair_samples {
                        Some(samples) => PairScan::Sampled { seed, samples },
                        None => PairScan::default(),
                    };
                    preserves_zero_jordan_pairs(&t, &zero_jordan_pairs(t.domain(), scan)?)
                }
                CheckPredicate::Wjh => is_weighted_jordan_hom(&t),
                CheckPredicate::Jordan => is_jordan_hom(&t),
                CheckPredicate::Txy => satisfies_txy(&t),
                CheckPredicate::L0 => lemma_l0_equivalences(&t)?,
                CheckPredicate::ExistsS => {
                    let s = wjh_core::addmap::exists_companion_s(&t);
                    let mut report = Report::new("exists_companion_s");
                    report.passed = s.is_some();
                    if let Some(s) = s {
                        report.witnesses.push(ReportWitness {
                            label: "companion S".into(),
                            ring: t.domain().recipe().cloned(),
                            map: Some(s.matrix().to_rows()),
                            elements: vec![],
                        });
                    }
                    return print_report(&report, format);
                }
            };
            print_report(&verdict_report(&t, verdict), format)
        }
        Command::Gallery(GalleryCommand::Grassmann { p, emit }) => emit_map(&grassmann_example(p)?.t, emit),
        Command::Gallery(GalleryCommand::Char2 { emit }) => emit_map(&char2_example()?.t, emit),
        Command::Gallery(GalleryCommand::Certify { ring }) => {
            let r = read_ring(&ring)?;
            let certs = corollary_c1_certificate(&r)?;
            let ok = certs.iter().all(|c| c.verify(&r));
            match format {
                Format::Json => print_json(&json!({ "verified": ok, "certificates": certs }))?,
                Format::Text => {
                    for c in &certs {
                        let terms: Vec<String> = c
                            .terms
                            .iter()
                            .map(|t| {
                                format!(
                                    "{}/{} ({})∘({})",
                                    t.numerator,
                                    1u64 << t.half_power,
                                    r.format_element(&t.e),
                                    r.format_element(&t.f)
                                )
                            })
                            .collect();
                        println!("{} = {}", c.target_label, terms.join(" + "));
                    }
                    println!("{} certificates {}", certs.len(), if ok { "PASS" } else { "FAIL" });
                }
            }
            Ok(ok)
        }
        Command::LemmaM1 {
            p,
            all_lambdas: _,
            samples,
            seed,
            scalar_trials,
        } => {
            let mode = samples.map_or(LambdaMode::All, |samples| LambdaMode::Sampled { samples });
            print_report(&verify_lemma_m1(p, mode, seed, scalar_trials)?, format)
        }
        Command::Suite(SuiteCommand::List) => {
            for s in SUITES {
                println!("{s}");
            }
            Ok(true)
        }
        Command::Suite(SuiteCommand::Run {
            name,
            seed,
            threads,
            p,
            samples,
        }) => {
            let overrides = SuiteOverrides {
                seed,
                threads,
                p,
                samples,
            };
            print_report(&run_suite(&name, &overrides)?, format)
        }
        Command::Search(args) => {
            let ring = Arc::new(read_ring(&args.ring)?);
            let mode = match args.sample {
                Some(count) => SearchMode::Sample { count },
                None => SearchMode::Exhaustive,
            };
            let mut cfg = SearchConfig::new(ring, args.predicates.into_iter().map(Into::into).collect(), mode)
                .quick_reject(args.quick_reject);
            cfg.seed = args.seed;
            if let Some(t) = args.threads {
                cfg = cfg.threads(t);
            }
            print_report(&run_search(&cfg)?.report, format)
        }
    }
}
