//! Subcommands. Every verifier prints `CHECK <name> PASS|FAIL ...` lines;
//! the exit code is 0 when every check passes, 1 when one fails and 2 on
//! unreadable or invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use braceflow_core::correspondence::{
    alpha_coefficients, check_reconstruction, derive, gamma_coefficients, reconstruct_brace,
};
use braceflow_core::identities::{
    verify_quoted_identities, IdentityBudget, DEFAULT_IDENTITY_SAMPLES,
};
use braceflow_core::sample::{Budget, DEFAULT_SAMPLES, DEFAULT_SEED};
use braceflow_core::{Brace, Check, Report, ScalarRing};

use crate::fixtures;
use crate::format::{self, BraceBody, BraceDoc, Document, FormatError, PreLieDoc};
use crate::selftest;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "braceflow",
    version,
    about = "Braces and left-nilpotent pre-Lie rings over finite abelian p-groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Write `name=PASS|FAIL` lines to this file
    #[arg(short = 's', long = "summary", global = true, value_name = "FILE")]
    pub summary: Option<PathBuf>,

    /// Seed for every sampled check
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Sample count for checks too large to enumerate
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Skip the axiom checks on inputs
    #[arg(long, global = true)]
    pub no_verify: bool,

    /// Enumerate every tuple regardless of size
    #[arg(long, global = true)]
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coefficients {
    Alpha,
    Gamma,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the brace axioms (pre-Lie inputs are read as their group of flows)
    VerifyBrace { file: PathBuf },
    /// Check bilinearity, the pre-Lie identity and left nilpotency
    VerifyPrelie { file: PathBuf },
    /// Write the group of flows of a pre-Lie ring
    Flows {
        file: PathBuf,
        #[arg(short = 'o', value_name = "OUT")]
        out: PathBuf,
    },
    /// Write the pre-Lie ring (A/ann(p^2), +, •) of a brace
    Derive {
        file: PathBuf,
        #[arg(short = 'o', value_name = "OUT")]
        out: PathBuf,
    },
    /// Write the group of flows of the twisted derived ring
    Reconstruct {
        file: PathBuf,
        #[arg(short = 'o', value_name = "OUT")]
        out: PathBuf,
    },
    /// Run the reconstruction of A/ann(p^4) end to end
    CheckMain { file: PathBuf },
    /// Print the alpha or gamma coefficients modulo p^n
    Coeffs {
        which: Coefficients,
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'n')]
        n: u32,
    },
    /// Check the quoted brace identities on sampled tuples
    QuotedIdentities { file: PathBuf },
    /// Run the acceptance suite
    Selftest {
        /// Skip E2 and use fewer samples
        #[arg(long)]
        quick: bool,
        /// Print every check, not only failures
        #[arg(long)]
        verbose: bool,
    },
    /// Print a fixture, or write all of them into a directory
    Fixtures {
        name: Option<String>,
        #[arg(short = 'o', value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },

    #[error("{0}")]
    Core(#[from] braceflow_core::Error),

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
}

impl GlobalOpts {
    pub fn budget(&self) -> Budget {
        Budget {
            samples: self.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            exhaustive: self.exhaustive,
        }
    }

    pub fn identity_budget(&self) -> IdentityBudget {
        IdentityBudget {
            samples: self.samples.unwrap_or(DEFAULT_IDENTITY_SAMPLES),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        }
    }
}

fn read_doc(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    format::parse(&text).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn read_prelie(path: &Path) -> Result<PreLieDoc, CliError> {
    read_doc(path)?
        .into_prelie()
        .map_err(|source| CliError::Format {
            path: path.to_path_buf(),
            source,
        })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A brace input, checked unless `--no-verify`; `None` when the check
/// failed.
fn load_brace(
    path: &Path,
    opts: &GlobalOpts,
    report: &mut Report,
) -> Result<Option<Brace>, CliError> {
    let b = read_doc(path)?.to_brace()?;
    if !opts.no_verify {
        let r = b.verify(&opts.budget()).scoped("input");
        let ok = r.passed();
        report.extend(r);
        if !ok {
            return Ok(None);
        }
    }
    Ok(Some(b))
}

/// Output of one subcommand: the report plus text printed before it.
struct Outcome {
    preamble: String,
    report: Report,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self {
            preamble: String::new(),
            report,
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    let budget = opts.budget();
    let mut report = Report::new();
    match &cli.command {
        Command::VerifyBrace { file } => {
            let b = read_doc(file)?.to_brace()?;
            report = b.verify(&budget);
        }
        Command::VerifyPrelie { file } => {
            report = read_prelie(file)?.ring()?.verify(&budget);
        }
        Command::Flows { file, out } => {
            let doc = read_prelie(file)?;
            let ring = doc.ring()?;
            if !opts.no_verify {
                report.extend(ring.verify(&budget).scoped("input"));
                if !report.passed() {
                    return Ok(report.into());
                }
            }
            let b = braceflow_core::flows::flows_brace(&ring)?;
            if !opts.no_verify {
                report.extend(b.verify(&budget).scoped("flows"));
            }
            let out_doc = Document::Brace(BraceDoc {
                group: doc.group,
                body: BraceBody::Flows(doc.constants),
            });
            write_file(out, &format::serialize(&out_doc, &[]))?;
        }
        Command::Derive { file, out } => {
            let Some(b) = load_brace(file, opts, &mut report)? else {
                return Ok(report.into());
            };
            let d = derive(&b)?;
            if !opts.no_verify {
                report.extend(d.verify(&budget));
            }
            let out_doc = Document::PreLie(PreLieDoc::from_ring(&d.ring()));
            write_file(out, &format::serialize(&out_doc, &["(A/ann(p^2), +, •)"]))?;
        }
        Command::Reconstruct { file, out } => {
            let Some(b) = load_brace(file, opts, &mut report)? else {
                return Ok(report.into());
            };
            let d = derive(&b)?;
            let rec = reconstruct_brace(&d)?;
            if !opts.no_verify {
                report.extend(rec.verify(&budget).scoped("reconstructed"));
            }
            let s = b.group().scalars().twist_constant();
            let out_doc = Document::Brace(BraceDoc {
                group: d.group().clone(),
                body: BraceBody::Flows(d.ring().twist(s).structure_constants()),
            });
            write_file(
                out,
                &format::serialize(&out_doc, &["group of flows of s(•) on A/ann(p^2)"]),
            )?;
        }
        Command::CheckMain { file } => {
            let Some(b) = load_brace(file, opts, &mut report)? else {
                return Ok(report.into());
            };
            report.extend(check_reconstruction(&b, &budget));
        }
        Command::Coeffs { which, p, n } => {
            let ring = ScalarRing::new(*p, *n)?;
            let (name, coeffs) = match which {
                Coefficients::Alpha => ("alpha", alpha_coefficients(&ring)),
                Coefficients::Gamma => ("gamma", gamma_coefficients(&ring)),
            };
            let preamble = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{name}_{} = {c}\n", i + 1))
                .collect();
            report.push(
                Check::from_witness(
                    format!("{name}-1"),
                    (coeffs.first() != Some(&1))
                        .then(|| format!("{name}_1 = {:?}", coeffs.first())),
                )
                .with_note(format!("mod {p}^{n}")),
            );
            return Ok(Outcome { preamble, report });
        }
        Command::QuotedIdentities { file } => {
            let Some(b) = load_brace(file, opts, &mut report)? else {
                return Ok(report.into());
            };
            report.extend(verify_quoted_identities(&b, &opts.identity_budget()));
        }
        Command::Selftest { quick, verbose } => return Ok(selftest(opts, *quick, *verbose)),
        Command::Fixtures { name, out } => {
            return fixtures_command(name.as_deref(), out.as_deref())
        }
    }
    Ok(report.into())
}

fn selftest(opts: &GlobalOpts, quick: bool, verbose: bool) -> Outcome {
    let mut st = if quick {
        selftest::Options::quick()
    } else {
        selftest::Options::default()
    };
    if let Some(seed) = opts.seed {
        st.budget.seed = seed;
        st.identities.seed = seed;
    }
    if let Some(samples) = opts.samples {
        st.budget.samples = samples;
        st.identities.samples = samples;
    }
    st.budget.exhaustive = opts.exhaustive;
    let mut preamble = String::new();
    let mut report = Report::new();
    for outcome in selftest::run_all(&st) {
        for c in outcome
            .report
            .checks
            .iter()
            .filter(|c| verbose || !c.passed)
        {
            preamble.push_str(&format!("{c}\n"));
        }
        preamble.push_str(&outcome.line());
        preamble.push('\n');
        let name = format!("accept-{}-{}", outcome.criterion.id, outcome.criterion.name);
        report.push(if outcome.passed() {
            Check::pass(name)
        } else {
            Check::fail(name, outcome.line())
        });
    }
    Outcome { preamble, report }
}

fn fixtures_command(name: Option<&str>, out: Option<&Path>) -> Result<Outcome, CliError> {
    let selected: Vec<fixtures::Fixture> = match name {
        Some(n) => {
            vec![fixtures::by_name(n).ok_or_else(|| CliError::UnknownFixture(n.to_string()))?]
        }
        None => fixtures::ALL.to_vec(),
    };
    let mut preamble = String::new();
    for f in selected {
        let text = fixtures::generate(f.name).expect("every listed fixture has a generator");
        match (out, name) {
            (Some(dir), _) => write_file(&dir.join(f.file), &text)?,
            (None, Some(_)) => preamble.push_str(&text),
            (None, None) => preamble.push_str(&format!("{} {}\n", f.name, f.file)),
        }
    }
    Ok(Outcome {
        preamble,
        report: Report::new(),
    })
}

/// Parses `args` (including the program name), runs the command, prints to
/// `out` and returns the exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_PASS
            };
        }
    };
    run(&cli, out)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    match execute(cli) {
        Ok(Outcome { preamble, report }) => {
            let _ = write!(out, "{preamble}{report}");
            if let Some(path) = &cli.opts.summary {
                if let Err(e) = write_file(path, &report.summary()) {
                    eprintln!("error: {e}");
                    return EXIT_INPUT_ERROR;
                }
            }
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}
