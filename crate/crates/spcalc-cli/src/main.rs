//! Command-line front end: parsing, embedding, tree metrics, rule
//! application, derivation checking, normalization with bound reports,
//! proving and the base-system oracle. Trees, rules and derivations cross
//! the boundary as JSON; formulas as text or JSON. Every payload argument
//! accepts `-` for stdin.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict,
//! 2 unknown (budget exhausted), 64 usage error, 65 malformed data.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spcalc::calculus::{check, check_trace, Derivation, System};
use spcalc::embed::{to_formula, to_tree};
use spcalc::formula::Formula;
use spcalc::normalize::{bounds_for_shape, normalize};
use spcalc::prover::{entails_kplus, equiv, prove, EquivResult, ProofResult, SearchBudget};
use spcalc::rules::{apply, RuleInstance};
use spcalc::sequent::SequentProof;
use spcalc::tree::ModalTree;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(
    name = "spcalc",
    about = "Tree rewriting engine and prover for strictly positive modal logics",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SysArg {
    /// Calculus: k+, k4+, rc, or any subset of the letters 4, m, j.
    #[arg(long = "sys", default_value = "k+", value_parser = parse_system)]
    sys: System,
}

fn parse_system(s: &str) -> Result<System, String> {
    System::parse(s).ok_or_else(|| format!("unknown system {s:?}"))
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its JSON form.
    Parse {
        /// Formula text, or `-` for stdin.
        text: String,
    },
    /// Convert between formula text and tree JSON.
    Embed {
        #[command(subcommand)]
        direction: EmbedDirection,
    },
    /// Width, height and node count of a tree.
    Metrics {
        /// Tree JSON, or `-` for stdin.
        tree: String,
    },
    /// Apply one rule instance to a tree.
    Apply {
        /// Tree JSON, or `-` for stdin.
        tree: String,
        /// Rule in text form, e.g. `J@1.2(i=1,j=3)` or `m@e(i=2,b=0)`.
        rule: String,
    },
    /// Replay a derivation and print the final tree.
    Check {
        /// Derivation JSON, or `-` for stdin.
        derivation: String,
        #[command(flatten)]
        sys: SysArg,
        /// Also print every intermediate tree.
        #[arg(long)]
        trace: bool,
    },
    /// Reorder a derivation into normal shape and report the bounds.
    Normalize {
        /// Derivation JSON, or `-` for stdin.
        derivation: String,
        #[command(flatten)]
        sys: SysArg,
        /// Fail (exit 1) if any block exceeds its bound.
        #[arg(long = "verify-bounds")]
        verify_bounds: bool,
    },
    /// Translate a sequent proof into a rewrite derivation.
    Translate {
        /// Sequent proof JSON, or `-` for stdin.
        proof: String,
        #[command(flatten)]
        sys: SysArg,
    },
    /// Search for a derivation of `phi |- psi`.
    Prove {
        phi: String,
        psi: String,
        #[command(flatten)]
        sys: SysArg,
        /// Maximum rule applications along a candidate derivation.
        #[arg(long, default_value_t = 12)]
        budget: usize,
        /// Node-count cap on intermediate trees.
        #[arg(long = "max-nodes", default_value_t = 32)]
        max_nodes: usize,
        /// Visited-state cap.
        #[arg(long = "max-states", default_value_t = 200_000)]
        max_states: usize,
        /// Expand search levels with parallel workers.
        #[arg(long)]
        parallel: bool,
    },
    /// Decide both directions of `phi |- psi` under the same budget.
    Equiv {
        phi: String,
        psi: String,
        #[command(flatten)]
        sys: SysArg,
        #[arg(long, default_value_t = 12)]
        budget: usize,
    },
    /// Base-system semantic verdict for `phi |- psi`.
    Oracle { phi: String, psi: String },
}

#[derive(Subcommand)]
enum EmbedDirection {
    /// Formula text to tree JSON.
    ToTree {
        /// Formula text, or `-` for stdin.
        formula: String,
    },
    /// Tree JSON to formula text.
    ToFormula {
        /// Tree JSON, or `-` for stdin.
        tree: String,
        /// Print the formula as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

struct DataError(String);

impl<E: std::fmt::Display> From<E> for DataError {
    fn from(e: E) -> Self {
        DataError(e.to_string())
    }
}

fn payload(arg: &str) -> Result<String, DataError> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(arg.to_string())
    }
}

fn read_formula(arg: &str) -> Result<Formula, DataError> {
    let text = payload(arg)?;
    let trimmed = text.trim();
    // Accept either concrete syntax or the JSON form.
    if trimmed.starts_with('{') || trimmed.starts_with('"') {
        Ok(serde_json::from_str(trimmed)?)
    } else {
        Ok(spcalc::formula::parse(trimmed)?)
    }
}

fn read_tree(arg: &str) -> Result<ModalTree, DataError> {
    Ok(serde_json::from_str(payload(arg)?.trim())?)
}

fn read_derivation(arg: &str) -> Result<Derivation, DataError> {
    Ok(serde_json::from_str(payload(arg)?.trim())?)
}

fn run(cli: Cli) -> Result<u8, DataError> {
    match cli.command {
        Command::Parse { text } => {
            let f = read_formula(&text)?;
            println!("{}", serde_json::to_string(&f)?);
            Ok(0)
        }
        Command::Embed { direction } => match direction {
            EmbedDirection::ToTree { formula } => {
                let f = read_formula(&formula)?;
                println!("{}", serde_json::to_string(&to_tree(&f))?);
                Ok(0)
            }
            EmbedDirection::ToFormula { tree, json } => {
                let t = read_tree(&tree)?;
                let f = to_formula(&t);
                if json {
                    println!("{}", serde_json::to_string(&f)?);
                } else {
                    println!("{f}");
                }
                Ok(0)
            }
        },
        Command::Metrics { tree } => {
            let t = read_tree(&tree)?;
            println!(
                "{}",
                serde_json::json!({
                    "width": t.width(),
                    "height": t.height(),
                    "nodes": t.node_count(),
                })
            );
            Ok(0)
        }
        Command::Apply { tree, rule } => {
            let t = read_tree(&tree)?;
            let r = RuleInstance::parse(payload(&rule)?.trim())?;
            let out = apply(&t, &r)?;
            println!("{}", serde_json::to_string(&out)?);
            Ok(0)
        }
        Command::Check { derivation, sys, trace } => {
            let d = read_derivation(&derivation)?;
            if trace {
                let steps = check_trace(&d, &sys.sys)?;
                println!(
                    "{}",
                    serde_json::json!({
                        "final": steps.last(),
                        "trace": steps,
                    })
                );
            } else {
                let end = check(&d, &sys.sys)?;
                println!("{}", serde_json::to_string(&end)?);
            }
            Ok(0)
        }
        Command::Normalize { derivation, sys, verify_bounds } => {
            let d = read_derivation(&derivation)?;
            let shape = normalize(&d, &sys.sys)?;
            let report = bounds_for_shape(&d, &sys.sys, &shape);
            println!("{}", serde_json::to_string(&shape)?);
            eprintln!("block        length  bound");
            eprintln!(
                "replicative  {:>6}  {}",
                shape.replicative.len(),
                report.replicative
            );
            eprintln!("modal        {:>6}  {}", shape.modal.len(), report.modal);
            eprintln!(
                "decr+atomic  {:>6}  {}",
                shape.decreasing.len() + shape.atomic.len(),
                report.decreasing_atomic
            );
            eprintln!(
                "structural   {:>6}  {}",
                shape.structural.len(),
                report.structural
            );
            let violations = report.violations(&shape);
            if !violations.is_empty() {
                eprintln!("bound violations: {}", violations.join(", "));
                if verify_bounds {
                    return Ok(EXIT_NEGATIVE);
                }
            }
            Ok(0)
        }
        Command::Translate { proof, sys } => {
            let value: serde_json::Value = serde_json::from_str(payload(&proof)?.trim())?;
            let proof = SequentProof::from_json(&value)?;
            let d = spcalc::sequent::translate(&proof, &sys.sys)?;
            println!("{}", serde_json::to_string(&d)?);
            Ok(0)
        }
        Command::Prove { phi, psi, sys, budget, max_nodes, max_states, parallel } => {
            let phi = read_formula(&phi)?;
            let psi = read_formula(&psi)?;
            let budget = SearchBudget { max_steps: budget, max_nodes, max_states };
            let result = run_prove(&phi, &psi, &sys.sys, &budget, parallel);
            match result {
                ProofResult::Proved(d) => {
                    println!("{}", serde_json::to_string(&d)?);
                    Ok(0)
                }
                ProofResult::Refuted => {
                    eprintln!("refuted: no base-system model satisfies the consequent");
                    Ok(EXIT_NEGATIVE)
                }
                ProofResult::Unknown(diag) => {
                    eprintln!(
                        "unknown: budget exhausted ({} states visited, {} trees pruned, depth {})",
                        diag.states_visited, diag.nodes_pruned, diag.depth_reached
                    );
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Equiv { phi, psi, sys, budget } => {
            let phi = read_formula(&phi)?;
            let psi = read_formula(&psi)?;
            let budget = SearchBudget { max_steps: budget, ..Default::default() };
            match equiv(&phi, &psi, &sys.sys, &budget) {
                EquivResult::Equivalent(fwd, bwd) => {
                    println!(
                        "{}",
                        serde_json::json!({"forward": fwd, "backward": bwd})
                    );
                    Ok(0)
                }
                EquivResult::NotEquivalent => {
                    eprintln!("not equivalent");
                    Ok(EXIT_NEGATIVE)
                }
                EquivResult::Unknown => {
                    eprintln!("unknown: budget exhausted in at least one direction");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Oracle { phi, psi } => {
            let phi = read_formula(&phi)?;
            let psi = read_formula(&psi)?;
            if entails_kplus(&phi, &psi) {
                println!("entailed");
                Ok(0)
            } else {
                println!("not entailed");
                Ok(EXIT_NEGATIVE)
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn run_prove(
    phi: &Formula,
    psi: &Formula,
    sys: &System,
    budget: &SearchBudget,
    parallel: bool,
) -> ProofResult {
    if parallel {
        spcalc::prover::prove_parallel(phi, psi, sys, budget)
    } else {
        prove(phi, psi, sys, budget)
    }
}

#[cfg(not(feature = "parallel"))]
fn run_prove(
    phi: &Formula,
    psi: &Formula,
    sys: &System,
    budget: &SearchBudget,
    parallel: bool,
) -> ProofResult {
    if parallel {
        eprintln!("note: built without the parallel feature; searching sequentially");
    }
    prove(phi, psi, sys, budget)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(DataError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
