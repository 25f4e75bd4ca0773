//! `layerscope` — validate observable files, classify pairs into the
//! layer taxonomy, locate degrees of compatibility, verify broadcasting
//! witnesses, and run the named reproduction scenarios.
//!
//! Exit codes: 0 success / all claims pass, 1 a claim or verification
//! failed, 2 malformed or invalid input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use layerscope::compatibility::degree_of_compatibility;
use layerscope::json;
use layerscope::layers::{classify_pair_general_with_tol, Witness};
use layerscope::observable::validate_povm;
use layerscope::scenario::{self, DEFAULT_SEED, DEFAULT_TRIALS, SCENARIO_IDS};
use layerscope::DEFAULT_TOL;

#[derive(Parser)]
#[command(
    name = "layerscope",
    about = "Broadcastability, nondisturbance and joint measurability of observable pairs",
    long_about = None,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an observable file against the POVM constraints.
    Validate {
        /// Observable JSON document ({"dim", "effects", ["x_size", "y_size"]}).
        file: PathBuf,
    },
    /// Classify a pair of observables into the strongest provable layer.
    Classify {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Witness JSON documents (broadcaster, instrument or ancilla).
        #[arg(long)]
        witness: Vec<PathBuf>,
    },
    /// Largest unsharpness at which the smeared pair stays compatible.
    Degree {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Bisection bracket width.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Verify that a broadcasting channel broadcasts the given
    /// observable(s); with two observables the one-side conditions are
    /// reported as well.
    VerifyBroadcast {
        channel: PathBuf,
        file_a: PathBuf,
        file_b: Option<PathBuf>,
    },
    /// Run a named reproduction scenario, or all of them.
    Repro {
        /// One of the scenario names, or "all".
        scenario: String,
        /// Write machine-readable reports to this path ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
}

/// Global tolerance: LAYERSCOPE_TOL overrides the built-in default.
fn global_tol() -> f64 {
    match std::env::var("LAYERSCOPE_TOL") {
        Ok(raw) => match raw.parse::<f64>() {
            Ok(v) if v > 0.0 => v,
            _ => {
                eprintln!("warning: ignoring unparseable LAYERSCOPE_TOL={raw:?}");
                DEFAULT_TOL
            }
        },
        Err(_) => DEFAULT_TOL,
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

const EXIT_FAILED_CLAIM: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    let tol = global_tol();

    match cli.command {
        Command::Validate { file } => {
            let text = read_file(&file)?;
            let doc = json::observable_doc_from_json(&text).map_err(|e| e.to_string())?;
            // Surface diagnostics instead of a bare constructor error.
            let effects = match doc.into_observable(tol) {
                Ok(o) => o,
                Err(e) => return Err(format!("{}: {e}", file.display())),
            };
            let report = validate_povm(&effects, tol);
            println!("dim {}, {} effects", effects.dim(), effects.n_outcomes());
            for (k, min_eig) in report.effect_min_eigenvalues.iter().enumerate() {
                println!("  effect {}: min eigenvalue {:+.3e}", k + 1, min_eig);
            }
            println!("  sum residual vs identity: {:.3e}", report.sum_residual);
            if let Some(joint) = doc.into_joint(tol).map_err(|e| e.to_string())? {
                println!(
                    "  joint observable over a {}x{} outcome grid; margins are valid POVMs",
                    joint.x_size(),
                    joint.y_size()
                );
            }
            println!("VALID");
            Ok(0)
        }

        Command::Classify {
            file_a,
            file_b,
            witness,
        } => {
            let a = json::observable_from_json(&read_file(&file_a)?, tol)
                .map_err(|e| format!("{}: {e}", file_a.display()))?;
            let b = json::observable_from_json(&read_file(&file_b)?, tol)
                .map_err(|e| format!("{}: {e}", file_b.display()))?;
            let witnesses: Vec<Witness> = witness
                .iter()
                .map(|path| {
                    json::witness_from_json(&read_file(path)?, tol)
                        .map_err(|e| format!("{}: {e}", path.display()))
                })
                .collect::<Result<_, String>>()?;
            let verdict = classify_pair_general_with_tol(&a, &b, &witnesses, tol)
                .map_err(|e| e.to_string())?;
            println!("strongest layer: {}", verdict.strongest_layer);
            if let Some(stratum) = &verdict.strict_stratum {
                println!("strict stratum:  {stratum:?}");
            }
            println!("certainty:       {:?}", verdict.certainty);
            for line in &verdict.evidence {
                println!("  - {line}");
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&verdict).map_err(|e| e.to_string())?
            );
            Ok(0)
        }

        Command::Degree { file_a, file_b, tol: width } => {
            let a = json::observable_from_json(&read_file(&file_a)?, tol)
                .map_err(|e| format!("{}: {e}", file_a.display()))?;
            let b = json::observable_from_json(&read_file(&file_b)?, tol)
                .map_err(|e| format!("{}: {e}", file_b.display()))?;
            let deg = degree_of_compatibility(&a, &b, width).map_err(|e| e.to_string())?;
            println!(
                "degree of compatibility: {:.9} (bracket [{:.9}, {:.9}])",
                deg.value, deg.lower, deg.upper
            );
            Ok(0)
        }

        Command::VerifyBroadcast {
            channel,
            file_a,
            file_b,
        } => {
            let l = json::broadcasting_channel_from_json(&read_file(&channel)?)
                .map_err(|e| format!("{}: {e}", channel.display()))?;
            let a = json::observable_from_json(&read_file(&file_a)?, tol)
                .map_err(|e| format!("{}: {e}", file_a.display()))?;
            let verification_tol = tol.min(1e-9);
            match file_b {
                None => {
                    let residual = l.broadcast_residual(&a).map_err(|e| e.to_string())?;
                    let ok = residual <= verification_tol;
                    println!(
                        "broadcasts observable: {} (dual residual {:.3e})",
                        if ok { "yes" } else { "no" },
                        residual
                    );
                    Ok(if ok { 0 } else { EXIT_FAILED_CLAIM })
                }
                Some(path) => {
                    let b = json::observable_from_json(&read_file(&path)?, tol)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let res_a = l.broadcast_residual(&a).map_err(|e| e.to_string())?;
                    let res_b = l.broadcast_residual(&b).map_err(|e| e.to_string())?;
                    let one_side = l.one_side_residual(&a, &b).map_err(|e| e.to_string())?;
                    let pair_ok = res_a <= verification_tol && res_b <= verification_tol;
                    println!(
                        "broadcasts first:  {} (dual residual {:.3e})",
                        if res_a <= verification_tol { "yes" } else { "no" },
                        res_a
                    );
                    println!(
                        "broadcasts second: {} (dual residual {:.3e})",
                        if res_b <= verification_tol { "yes" } else { "no" },
                        res_b
                    );
                    println!(
                        "one-side (first left, second right): {} (dual residual {:.3e})",
                        if one_side <= verification_tol { "yes" } else { "no" },
                        one_side
                    );
                    println!(
                        "pair broadcast: {}",
                        if pair_ok { "yes" } else { "no" }
                    );
                    Ok(if pair_ok { 0 } else { EXIT_FAILED_CLAIM })
                }
            }
        }

        Command::Repro {
            scenario: which,
            json: json_out,
            seed,
            trials,
        } => {
            let reports = if which == "all" {
                scenario::run_all(seed, trials).map_err(|e| e.to_string())?
            } else {
                vec![scenario::run_scenario(&which, seed, trials).map_err(|e| e.to_string())?]
            };
            let all_pass = reports.iter().all(|r| r.all_pass());
            // With `--json -` stdout carries only the machine-readable
            // body; the tables go to stderr so piping stays clean.
            let json_to_stdout =
                json_out.as_deref().is_some_and(|p| p.as_os_str() == "-");
            for report in &reports {
                if json_to_stdout {
                    eprint!("{}", report.render());
                } else {
                    print!("{}", report.render());
                }
            }
            let summary = format!(
                "{} scenario(s), {}",
                reports.len(),
                if all_pass { "ALL PASS" } else { "FAILURES" }
            );
            if let Some(path) = json_out {
                let body =
                    serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?;
                if json_to_stdout {
                    eprintln!("{summary}");
                    println!("{body}");
                } else {
                    std::fs::write(&path, body)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    println!("{summary}");
                }
            } else {
                println!("{summary}");
            }
            let _ = SCENARIO_IDS;
            Ok(if all_pass { 0 } else { EXIT_FAILED_CLAIM })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
