//! Command-line front end for the reduction toolkit.
//!
//! Exit codes: 0 = success / all claims pass, 1 = a checked claim fails
//! (failed verification, non-witness, non-separating, ...), 2 = input or
//! usage error. The field prime defaults to 1000003 and can be overridden
//! with the FORGE_FIELD_P environment variable.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use forge_core::dowling::{build_dowling, build_weak_rep, witness_rank, Arrangement};
use forge_core::exactla::PrimeField;
use forge_core::expansion::{
    bruteforce_expansions_1arr, generic_c_basis, normalized_polymatroid, separates,
    separating_basis,
};
use forge_core::groups::{normalize, FiniteGroup, Homomorphism, Presentation};
use forge_core::inflation::{full_alg_pipeline, ExtensionArrangement};
use forge_core::matroids::{build_subset_order, Polymatroid, TriangleMatroid};
use forge_core::pipeline::{
    cmd_certify, cmd_reduce, cmd_verify, parse_word, Certificate, PipelineError, ReductionOutput,
    Scale,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "forge",
    about = "Exact-arithmetic toolkit for the word-problem-to-matroid reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the reduction data from a presentation
    Reduce {
        /// Presentation JSON file
        #[arg(short = 'p', long)]
        presentation: PathBuf,
        /// Override the witness word (e.g. "x" or "x y^-1")
        #[arg(short = 'w', long)]
        word: Option<String>,
        /// Output file
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Certify a finite-group witness against a reduction
    Certify {
        /// Reduction JSON file (from `forge reduce`)
        #[arg(short = 'r', long)]
        reduction: PathBuf,
        /// Finite group JSON file
        #[arg(short = 'G', long)]
        group: PathBuf,
        /// Homomorphism JSON file (generator images)
        #[arg(short = 'H', long)]
        hom: PathBuf,
        /// Scale: toy | truncated:K | full
        #[arg(long, default_value = "toy")]
        scale: String,
        /// Root seed for all generic choices
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output file
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Re-derive every claim of a certificate
    Verify {
        /// Certificate JSON file
        #[arg(short = 'c', long)]
        certificate: PathBuf,
        /// Optional report output file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build the Dowling matroid of a presentation
    Dowling {
        #[arg(short = 'p', long)]
        presentation: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Build the weak representation from a finite-group witness
    Weakrep {
        #[arg(short = 'p', long)]
        presentation: PathBuf,
        #[arg(short = 'G', long)]
        group: PathBuf,
        #[arg(short = 'H', long)]
        hom: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Check an arrangement against a matroid's weak-representation conditions
    CheckWeak {
        /// Matroid JSON file
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        /// Arrangement JSON file
        #[arg(short = 'a', long)]
        arrangement: PathBuf,
    },
    /// Compute the witness rank of an arrangement
    Witness {
        #[arg(short = 'p', long)]
        presentation: PathBuf,
        #[arg(short = 'a', long)]
        arrangement: PathBuf,
    },
    /// Run the inflation pipeline on a witness's weak representation
    Inflate {
        #[arg(short = 'p', long)]
        presentation: PathBuf,
        #[arg(short = 'G', long)]
        group: PathBuf,
        #[arg(short = 'H', long)]
        hom: PathBuf,
        /// Number of inflation steps (omit for the complete run)
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Split a c-admissible arrangement into a generic c-basis
    Cbasis {
        #[arg(short = 'a', long)]
        arrangement: PathBuf,
        /// Piece dimension
        #[arg(short = 'c', long)]
        c: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Build a separating c-basis of a doubled arrangement and evaluate
    /// the separation predicate
    Separate {
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        /// Doubled arrangement JSON file
        #[arg(short = 'a', long)]
        arrangement: PathBuf,
        /// Element to separate
        #[arg(short = 'x', long)]
        x: usize,
        /// Element to separate it from
        #[arg(short = 'y', long)]
        y: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Optional output file for the basis
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Enumerate expansions of a micro polymatroid by brute force
    Expansions {
        /// Polymatroid JSON file
        #[arg(short = 'g', long)]
        polymatroid: PathBuf,
        /// Required: acknowledge the brute-force scope limits
        #[arg(long)]
        brute: bool,
        /// Field size for the c = 1 enumeration
        #[arg(long, default_value_t = 3)]
        field: u64,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn field_from_env() -> Result<PrimeField> {
    let p = match std::env::var("FORGE_FIELD_P") {
        Ok(s) => s.parse::<u64>().context("FORGE_FIELD_P must be an integer")?,
        Err(_) => forge_core::DEFAULT_PRIME,
    };
    Ok(PrimeField::new(p)?)
}

/// Distinguishes claim failures (exit 1) from input errors (exit 2).
fn claim_failure(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<PipelineError>(),
        Some(PipelineError::NotAWitness { .. })
    )
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    let field = field_from_env()?;
    match cli.command {
        Command::Reduce { presentation, word, out } => {
            let pres: Presentation = read_json(&presentation)?;
            let word = word.map(|w| parse_word(&w)).transpose()?;
            let red = cmd_reduce(&pres, word.as_deref(), field)?;
            write_json(&out, &red)?;
            println!(
                "reduced: {} ground elements, g(E) = {}, hash {}",
                red.matroid.n(),
                red.g.g(red.matroid.full_mask()),
                &red.hash[..12]
            );
            Ok(0)
        }
        Command::Certify { reduction, group, hom, scale, seed, out } => {
            let red: ReductionOutput = read_json(&reduction)?;
            let group: FiniteGroup = read_json(&group)?;
            let hom: Homomorphism = read_json(&hom)?;
            let scale: Scale = scale.parse().map_err(anyhow::Error::msg)?;
            let cert = cmd_certify(&red, &group, &hom, scale, seed)?;
            write_json(&out, &cert)?;
            println!(
                "certified at scale {}: witness {}/{}, {} steps, hash {}",
                cert.scale,
                cert.witness.numerator,
                cert.witness.c,
                cert.trace.steps.len(),
                &cert.hash[..12]
            );
            Ok(0)
        }
        Command::Verify { certificate, report } => {
            let cert: Certificate = read_json(&certificate)?;
            let rep = cmd_verify(&cert);
            for c in &rep.claims {
                let status = if c.pass { "pass" } else { "FAIL" };
                match &c.detail {
                    Some(d) => println!("{status}  {} ({d})", c.name),
                    None => println!("{status}  {}", c.name),
                }
            }
            if let Some(path) = report {
                write_json(&path, &rep)?;
            }
            Ok(if rep.all_pass { 0 } else { 1 })
        }
        Command::Dowling { presentation, out } => {
            let pres: Presentation = read_json(&presentation)?;
            let np = normalize(&pres)?;
            let m = build_dowling(&np)?;
            write_json(&out, &m)?;
            println!("matroid: {} elements, {} dependent flats", m.n(), m.flats2.len());
            Ok(0)
        }
        Command::Weakrep { presentation, group, hom, out } => {
            let pres: Presentation = read_json(&presentation)?;
            let np = normalize(&pres)?;
            let m = build_dowling(&np)?;
            let group: FiniteGroup = read_json(&group)?;
            let hom: Homomorphism = read_json(&hom)?;
            let a = build_weak_rep(&m, &np, &group, &hom, field)?;
            write_json(&out, &a)?;
            println!("weak representation: c = {}, ambient {}", a.c, a.ambient);
            Ok(0)
        }
        Command::CheckWeak { matroid, arrangement } => {
            let m: TriangleMatroid = read_json(&matroid)?;
            let a: Arrangement = read_json(&arrangement)?;
            match forge_core::dowling::weak_rep_violation(&a, &m)? {
                None => {
                    println!("weak representation: yes");
                    Ok(0)
                }
                Some(mask) => {
                    println!("weak representation: no (violating subset {mask:#x})");
                    Ok(1)
                }
            }
        }
        Command::Witness { presentation, arrangement } => {
            let pres: Presentation = read_json(&presentation)?;
            let np = normalize(&pres)?;
            let m = build_dowling(&np)?;
            let a: Arrangement = read_json(&arrangement)?;
            let wr = witness_rank(&a, &m, &np)?;
            println!("witness rank: {}/{}", wr.numerator, wr.c);
            Ok(if wr.is_witness() { 0 } else { 1 })
        }
        Command::Inflate { presentation, group, hom, steps, seed, out } => {
            let pres: Presentation = read_json(&presentation)?;
            let np = normalize(&pres)?;
            let m = build_dowling(&np)?;
            let group: FiniteGroup = read_json(&group)?;
            let hom: Homomorphism = read_json(&hom)?;
            let a = build_weak_rep(&m, &np, &group, &hom, field)?;
            let order = build_subset_order(&m);
            let (u, trace) = full_alg_pipeline(&a, &m, &order, steps, seed)?;
            write_json(&out, &serde_json::json!({ "arrangement": u.arr, "trace": trace }))?;
            println!(
                "inflated {} steps: ambient {}, dim(U_E) = {}",
                trace.steps.len(),
                u.arr.ambient,
                u.arr.dim_of(u.matroid.full_mask())
            );
            Ok(0)
        }
        Command::Cbasis { arrangement, c, seed, out } => {
            let a: Arrangement = read_json(&arrangement)?;
            let cb = generic_c_basis(&a, c, seed)?;
            write_json(&out, &cb)?;
            println!("c-basis: {} pieces of dimension {c}", cb.pieces.len());
            Ok(0)
        }
        Command::Separate { matroid, arrangement, x, y, seed, out } => {
            let m: TriangleMatroid = read_json(&matroid)?;
            let a: Arrangement = read_json(&arrangement)?;
            let w = ExtensionArrangement { arr: a, matroid: m };
            let cb = separating_basis(&w, x, seed)?;
            let c = w.arr.c / 2;
            let g2 = normalized_polymatroid(&w.arr, c)?;
            let sep = separates(&cb.combinatorial_type(), x, y, &g2)?;
            if let Some(path) = out {
                write_json(&path, &cb)?;
            }
            println!("separates {x} from {y}: {sep}");
            Ok(if sep { 0 } else { 1 })
        }
        Command::Expansions { polymatroid, brute, field, out } => {
            if !brute {
                anyhow::bail!("expansion enumeration is brute-force only; pass --brute");
            }
            let g: Polymatroid = read_json(&polymatroid)?;
            let types = bruteforce_expansions_1arr(&g, field)?;
            println!("{} expansion type(s) realizable over GF({field})", types.len());
            if let Some(path) = out {
                write_json(&path, &types)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if claim_failure(&e) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
