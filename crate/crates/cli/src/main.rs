use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use delpezzo_core::format::{load, to_json, SurfaceDescription};
use delpezzo_core::pairs::{
    cox_finitely_generated, decide_klt_pair_exists, decide_weak_lc_pair_exists, redundant_blow_up,
    RedundantLocation,
};
use delpezzo_core::report::{analyze, classify, decompose, parse_divisor, witness};
use delpezzo_core::{corpus, Error};

/// Zariski decompositions, singularities and log del Pezzo pair classes of
/// surfaces given as blow-ups of a rational or ruled base.
#[derive(Parser, Debug)]
#[command(name = "delpezzo", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Exit with status 1 unless the surface has the property.
    #[arg(long = "assert", value_enum, global = true)]
    check: Option<Property>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Klt,
    WeakLc,
    Cox,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Cone,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: decomposition, singularities, all ten pair classes, Cox verdict.
    Analyze { file: PathBuf },
    /// Zariski decomposition of -K or of a given class.
    Decompose {
        file: PathBuf,
        /// `K`, `-K` or coordinates such as `[1,0,-1/2]`.
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
    },
    /// Singularities of the anticanonical model (or the declared contraction).
    Classify { file: PathBuf },
    /// Builds and validates a klt del Pezzo boundary.
    Witness {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// Blows up a redundant point and prints the new surface.
    Blowup {
        file: PathBuf,
        /// `generic:C`, `point:p`, `crossing:A,B` or `free`.
        #[arg(long)]
        at: String,
    },
    /// Runs the property suite on random blow-up sequences.
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

enum Failure {
    Input(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn render(
    format: Format,
    json: impl FnOnce() -> Value,
    text: impl FnOnce() -> String,
    dot: Option<String>,
) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&json()).expect("reports serialize");
            out.push('\n');
            Ok(out)
        }
        Format::Text => Ok(text()),
        Format::Dot => dot.ok_or_else(|| {
            Failure::Input("dot output is available for analyze, decompose and classify".into())
        }),
    }
}

fn holds(desc: &SurfaceDescription, property: Property) -> Result<bool, Failure> {
    let s = &desc.surface;
    Ok(match property {
        Property::Klt => decide_klt_pair_exists(s)?.member,
        Property::WeakLc => decide_weak_lc_pair_exists(s)?.member,
        Property::Cox => cox_finitely_generated(s, desc.contract.as_deref())
            .map(|v| v.finitely_generated)
            .unwrap_or(false),
    })
}

/// Output plus whether an `--assert` should be checked against `desc`.
fn execute(cli: &Cli) -> Result<(String, Option<SurfaceDescription>), Failure> {
    let f = cli.format;
    match &cli.command {
        Command::Analyze { file } => {
            let desc = load(file)?;
            let a = analyze(&desc)?;
            let out = render(f, || a.to_json(), || a.to_text(), Some(a.to_dot()))?;
            if !a.is_consistent() {
                print!("{out}");
                return Err(Failure::Inconsistent(a.classes.failures.join("; ")));
            }
            Ok((out, Some(desc)))
        }
        Command::Decompose { file, divisor } => {
            let desc = load(file)?;
            let d = divisor
                .as_deref()
                .map(|t| parse_divisor(&desc.surface, t))
                .transpose()?;
            let r = decompose(&desc.surface, d.as_ref())?;
            let out = render(f, || r.to_json(), || r.to_text(), Some(r.to_dot()))?;
            Ok((out, Some(desc)))
        }
        Command::Classify { file } => {
            let desc = load(file)?;
            let r = classify(&desc)?;
            let out = render(f, || r.to_json(), || r.to_text(), Some(r.to_dot()))?;
            if let Some(n) = r.nonrational.as_ref().filter(|n| !n.consistent) {
                print!("{out}");
                return Err(Failure::Inconsistent(n.messages.join("; ")));
            }
            Ok((out, Some(desc)))
        }
        Command::Witness { file, method } => {
            let desc = load(file)?;
            let r = witness(&desc.surface, *method == Method::Cone);
            let out = render(f, || r.to_json(), || r.to_text(), None)?;
            Ok((out, Some(desc)))
        }
        Command::Blowup { file, at } => {
            let desc = load(file)?;
            let location = RedundantLocation::parse(at)?;
            let t = redundant_blow_up(&desc.surface, &location)?;
            let new_desc = SurfaceDescription {
                surface: t,
                contract: None,
                boundary: None,
            };
            let text = to_json(&new_desc);
            let summary = format!(
                "blew up {location}: new exceptional curve {}, P pulls back, N pulls back minus the new curve\n",
                new_desc.surface.exceptional_ids().last().expect("one blow-up was made")
            );
            let out = match f {
                Format::Json => text,
                _ => render(f, || Value::Null, || summary, None)?,
            };
            Ok((out, Some(new_desc)))
        }
        Command::Corpus { seed, count } => {
            let summary = corpus::run(*seed, *count)?;
            let out = render(f, || summary.to_json(), || summary.to_text(), None)?;
            if !summary.is_clean() {
                print!("{out}");
                return Err(Failure::Inconsistent(format!(
                    "{} inconsistencies, {} witness failures",
                    summary.inconsistencies(),
                    summary.witness_failures()
                )));
            }
            Ok((out, None))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((out, desc)) => {
            print!("{out}");
            match (cli.check, desc) {
                (Some(p), Some(desc)) => match holds(&desc, p) {
                    Ok(true) => ExitCode::SUCCESS,
                    Ok(false) => {
                        eprintln!(
                            "assertion failed: {}",
                            p.to_possible_value().expect("no skipped values").get_name()
                        );
                        ExitCode::from(1)
                    }
                    Err(Failure::Input(e)) | Err(Failure::Inconsistent(e)) => {
                        eprintln!("error: {e}");
                        ExitCode::from(2)
                    }
                },
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Inconsistent(e)) => {
            eprintln!("inconsistency: {e}");
            ExitCode::from(3)
        }
    }
}
