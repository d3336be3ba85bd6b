//! Command-line front end. [`run`] parses arguments, does the work and returns
//! the process exit code; `main` only forwards to it.
//!
//! Exit codes: 0 success (or perfect / existence), 1 verification failure,
//! 2 nonexistence proven, 3 inconclusive or search budget exhausted,
//! 64 usage error, 65 malformed input file, 66 unreadable input file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::codes::{construct_m1_perfect, construct_m_perfect, is_perfect, Code, VerifyMode};
use crate::criteria::{run_battery, Verdict};
use crate::error::Error;
use crate::ideals::enumerate_ideals;
use crate::metric::ball_size;
use crate::poset::{Poset, PosetKind};
use crate::search::{
    exhaust_small_posets, find_perfect_code, find_poset_labeling, SearchConfig, SearchOutcome, ShapeConstraint,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_NONEXISTENCE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;

/// Environment variable overriding the default search budget.
pub const NODE_LIMIT_ENV: &str = "POSETCODE_NODE_LIMIT";

#[derive(Parser, Debug)]
#[command(name = "posetcode", version, about = "Perfect binary codes in poset metrics")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ideal family statistics and ball size at radius r.
    Analyze {
        poset: PathBuf,
        #[arg(short, long)]
        r: usize,
    },
    /// Check whether a code is r-perfect.
    Verify {
        poset: PathBuf,
        code: PathBuf,
        #[arg(short, long)]
        r: usize,
        /// Sweep all of F^n instead of using the two-ideal test and counting.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the criteria battery for codimension m and radius r.
    Criteria {
        poset: PathBuf,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        r: usize,
    },
    /// Exhaustive search for an r-perfect code.
    Search {
        poset: PathBuf,
        #[arg(short, long)]
        r: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Node budget per branch (default from POSETCODE_NODE_LIMIT, else 50000000).
        #[arg(long)]
        node_limit: Option<u64>,
        /// Do not fix the zero word as the first codeword.
        #[arg(long)]
        no_symmetry: bool,
        /// Write the code found here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a perfect code: th0 for r = m, m1 for r = m - 1.
    Construct {
        poset: PathBuf,
        #[arg(short, long)]
        m: usize,
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a poset from a named family.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// JSON lines for every poset up to n-max elements at r = m - offset.
    Catalog {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        offset: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a height-two poset of the given shape on which the code is r-perfect.
    Label {
        code: PathBuf,
        #[arg(short, long)]
        r: usize,
        #[arg(long)]
        maximal: usize,
        /// Comma-separated counts of maximal elements above each nonmaximal one.
        #[arg(long, value_delimiter = ',')]
        valencies: Vec<usize>,
        #[arg(long)]
        maximal_valency: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Variant {
    Th0,
    M1,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Chain { n: usize },
    Antichain { n: usize },
    /// Disjoint chains with the given comma-separated lengths.
    Chains {
        #[arg(value_delimiter = ',')]
        lengths: Vec<usize>,
    },
    Crown { t: usize },
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Report {
    tool_version: &'static str,
    command: Vec<String>,
    inputs: Vec<InputDigest>,
    result: Value,
    timing_ms: u128,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Json(serde_json::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Json(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(Error::Parse { .. }) => EXIT_PARSE,
            Failure::Lib(Error::BudgetExceeded(_)) => EXIT_INCONCLUSIVE,
            Failure::Lib(_) => EXIT_USAGE,
            Failure::Io(..) => EXIT_NO_INPUT,
            Failure::Json(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Json(e) => write!(f, "json: {e}"),
        }
    }
}

/// What a command produced: text, JSON payload and exit code.
struct Outcome {
    text: String,
    result: Value,
    code: i32,
}

struct Ctx {
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| {
            Failure::Lib(Error::Parse {
                line: 0,
                message: format!("{} is not UTF-8", path.display()),
            })
        })
    }

    fn poset(&mut self, path: &Path) -> Result<Poset, Failure> {
        Ok(Poset::parse_text(&self.read(path)?)?)
    }

    fn code(&mut self, path: &Path) -> Result<Code, Failure> {
        Ok(Code::parse_text(&self.read(path)?)?)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::NonexistenceProven => EXIT_NONEXISTENCE,
        Verdict::ExistenceConstructed => EXIT_OK,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::NonexistenceProven => "nonexistence proven",
        Verdict::ExistenceConstructed => "existence constructed",
        Verdict::Inconclusive => "inconclusive",
    }
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    r: usize,
    ideals: usize,
    union: crate::subset::Subset,
    core: crate::subset::Subset,
    u: usize,
    lambda: usize,
    k: usize,
    essential: crate::subset::Subset,
    essential_height: usize,
    ball_size: u64,
}

fn node_limit(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(NODE_LIMIT_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::Lib(Error::Precondition(format!("{NODE_LIMIT_ENV}={s:?} is not a node count")))
        }),
        Err(_) => Ok(SearchConfig::default().node_limit),
    }
}

fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    match cmd {
        Command::Analyze { poset, r } => {
            let p = ctx.poset(poset)?;
            let f = enumerate_ideals(&p, *r)?;
            let a = Analysis {
                n: p.len(),
                r: *r,
                ideals: f.len(),
                union: f.union,
                core: f.core,
                u: f.u,
                lambda: f.lambda,
                k: f.k,
                essential: f.essential,
                essential_height: p.height(f.essential),
                ball_size: ball_size(&p, *r)?,
            };
            let mut text = String::new();
            let _ = writeln!(text, "n = {}, r = {}", a.n, a.r);
            let _ = writeln!(text, "{}-ideals: {}", a.r, a.ideals);
            let _ = writeln!(text, "union P^r = {}", a.union);
            let _ = writeln!(text, "core = {} (u = {})", a.core, a.u);
            let _ = writeln!(text, "lambda = {}, k = {}", a.lambda, a.k);
            let _ = writeln!(text, "essential part = {} (height {})", a.essential, a.essential_height);
            let _ = writeln!(text, "ball size = {}", a.ball_size);
            Ok(Outcome {
                text,
                result: serde_json::to_value(&a)?,
                code: EXIT_OK,
            })
        }
        Command::Verify { poset, code, r, oracle } => {
            let p = ctx.poset(poset)?;
            let c = ctx.code(code)?;
            let mode = if *oracle { VerifyMode::Oracle } else { VerifyMode::Fast };
            let res = is_perfect(&p, &c, *r, mode)?;
            let mut text = String::new();
            let yes = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(text, "perfect: {}", yes(res.perfect));
            let _ = writeln!(text, "packing: {}", yes(res.packing));
            let _ = writeln!(text, "covering: {}", yes(res.covering));
            let _ = writeln!(text, "|C| = {}, |B| = {}, 2^n = {}", res.code_size, res.ball_size, 1u128 << p.len());
            if let Some(w) = &res.packing_witness {
                let _ = writeln!(
                    text,
                    "collision: {} and {} differ inside {} ∪ {}",
                    w.first.to_word(p.len()),
                    w.second.to_word(p.len()),
                    w.ideals[0],
                    w.ideals[1]
                );
            }
            if let Some(x) = res.covering_witness {
                let _ = writeln!(text, "uncovered: {}", x.to_word(p.len()));
            }
            Ok(Outcome {
                text,
                code: if res.perfect { EXIT_OK } else { EXIT_FAILED },
                result: serde_json::to_value(&res)?,
            })
        }
        Command::Criteria { poset, m, r } => {
            let p = ctx.poset(poset)?;
            let report = run_battery(&p, *m, *r)?;
            let mut text = String::new();
            let _ = writeln!(
                text,
                "n = {}, m = {}, r = {}: lambda = {}, u = {}, k = {}",
                report.n, report.m, report.r, report.lambda, report.u, report.k
            );
            for e in &report.entries {
                let name = serde_json::to_value(e.criterion)?;
                let _ = write!(text, "  {:<16} {}", name.as_str().unwrap_or("?"), verdict_name(e.verdict));
                if let Some(note) = &e.note {
                    let _ = write!(text, " ({note})");
                }
                text.push('\n');
            }
            let _ = writeln!(text, "verdict: {}", verdict_name(report.verdict));
            Ok(Outcome {
                text,
                code: verdict_exit(report.verdict),
                result: serde_json::to_value(&report)?,
            })
        }
        Command::Search {
            poset,
            r,
            jobs,
            node_limit: limit,
            no_symmetry,
            out,
        } => {
            let p = ctx.poset(poset)?;
            let cfg = SearchConfig {
                node_limit: node_limit(*limit)?,
                symmetry: !no_symmetry,
                jobs: *jobs,
                ..SearchConfig::default()
            };
            let outcome = find_perfect_code(&p, *r, &cfg)?;
            let (text, code) = match &outcome {
                SearchOutcome::Found { code } => {
                    if let Some(path) = out {
                        write_file(path, &code.to_text())?;
                    }
                    (format!("found {} codewords\n{}", code.size(), code.to_text()), EXIT_OK)
                }
                SearchOutcome::None => ("no perfect code exists\n".to_string(), EXIT_NONEXISTENCE),
                SearchOutcome::BudgetExceeded { node_limit } => {
                    (format!("budget of {node_limit} nodes exhausted\n"), EXIT_INCONCLUSIVE)
                }
            };
            Ok(Outcome {
                text,
                code,
                result: serde_json::to_value(&outcome)?,
            })
        }
        Command::Construct { poset, m, variant, out } => {
            let p = ctx.poset(poset)?;
            let code = match variant {
                Variant::Th0 => construct_m_perfect(&p, *m)?,
                Variant::M1 => construct_m1_perfect(&p, *m)?,
            };
            let text = code.to_text();
            if let Some(path) = out {
                write_file(path, &text)?;
            }
            Ok(Outcome {
                text,
                code: EXIT_OK,
                result: serde_json::to_value(&code)?,
            })
        }
        Command::Gen { kind, out } => {
            let kind = match kind {
                GenKind::Chain { n } => PosetKind::Chain { n: *n },
                GenKind::Antichain { n } => PosetKind::Antichain { n: *n },
                GenKind::Chains { lengths } => PosetKind::DisjointChains {
                    lengths: lengths.clone(),
                },
                GenKind::Crown { t } => PosetKind::Crown { t: *t },
            };
            let p = Poset::generate(&kind)?;
            let text = p.to_text();
            if let Some(path) = out {
                write_file(path, &text)?;
            }
            Ok(Outcome {
                result: serde_json::json!({ "kind": kind, "poset": text }),
                text,
                code: EXIT_OK,
            })
        }
        Command::Catalog { n_max, offset, out } => {
            let records = exhaust_small_posets(*n_max, *offset)?;
            let mut lines = String::new();
            for rec in &records {
                lines.push_str(&serde_json::to_string(rec)?);
                lines.push('\n');
            }
            let disagreements = records.iter().filter(|r| !r.agree).count();
            let text = match out {
                Some(path) => {
                    write_file(path, &lines)?;
                    format!("{} records, {} disagreements\n", records.len(), disagreements)
                }
                None => lines,
            };
            Ok(Outcome {
                text,
                code: if disagreements == 0 { EXIT_OK } else { EXIT_FAILED },
                result: serde_json::json!({ "records": records.len(), "disagreements": disagreements }),
            })
        }
        Command::Label {
            code,
            r,
            maximal,
            valencies,
            maximal_valency,
            out,
        } => {
            let c = ctx.code(code)?;
            let shape = ShapeConstraint {
                n: c.n(),
                maximal: *maximal,
                nonmax_valencies: valencies.clone(),
                maximal_valency: *maximal_valency,
            };
            match find_poset_labeling(&c, *r, &shape)? {
                Some(p) => {
                    let text = p.to_text();
                    if let Some(path) = out {
                        write_file(path, &text)?;
                    }
                    Ok(Outcome {
                        result: serde_json::json!({ "found": true, "poset": text }),
                        text,
                        code: EXIT_OK,
                    })
                }
                None => Ok(Outcome {
                    text: "no labelling of this shape makes the code perfect\n".into(),
                    result: serde_json::json!({ "found": false }),
                    code: EXIT_NONEXISTENCE,
                }),
            }
        }
    }
}

/// Runs the tool on `args` (including the program name), writing normal output
/// to `out` and diagnostics to standard error. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = e.print();
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Ctx { inputs: Vec::new() };
    let start = Instant::now();
    let outcome = match execute(&cli.command, &mut ctx) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("posetcode: {f}");
            return f.exit_code();
        }
    };
    let written = if cli.json {
        let report = Report {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
            inputs: ctx.inputs,
            result: outcome.result,
            timing_ms: start.elapsed().as_millis(),
        };
        serde_json::to_string_pretty(&report)
            .map_err(|e| e.to_string())
            .and_then(|s| writeln!(out, "{s}").map_err(|e| e.to_string()))
    } else {
        write!(out, "{}", outcome.text).map_err(|e| e.to_string())
    };
    if let Err(e) = written {
        eprintln!("posetcode: {e}");
        return EXIT_USAGE;
    }
    outcome.code
}
