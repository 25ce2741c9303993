//! The `evenif` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 model validation
//! error, 4 cap or budget exceeded, 5 no counterfactual exists.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use evenif::bench::{bench_scaling, to_csv};
use evenif::gen::{gen_random_model, GenParams, ModelKind};
use evenif::io::{parse_instance, parse_model, parse_preferences, serialize_model, ParseError};
use evenif::oracle::{oracle_best, Explanation, DEFAULT_MAX_FEATURES};
use evenif::solve::{enumerate, explain, verify_best, SolveOptions};
use evenif::{Error, ExplanationQuery, Instance, Model, Mode, PreferenceRule};

/// Environment variable overriding the brute-force feature cap.
pub const MAX_ORACLE_ENV: &str = "EVENIF_MAX_ORACLE_N";

#[derive(Debug, Parser)]
#[command(name = "evenif", version, about = "Semifactual and counterfactual explanations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the model's class for an instance.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        instance: String,
    },
    /// Compute best explanations with the polynomial solvers where possible.
    Explain(ExplainArgs),
    /// Decide whether a candidate is a best explanation.
    VerifyBest {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        candidate: String,
    },
    /// Like `explain`, but always by brute force.
    Oracle {
        #[command(flatten)]
        explain: ExplainArgs,
        /// Largest feature count to enumerate [default: $EVENIF_MAX_ORACLE_N or 20].
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Write a random model to standard output.
    Gen {
        #[arg(long)]
        kind: ModelKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// FBDD decision-tree node budget.
        #[arg(long, conflicts_with = "hidden")]
        nodes: Option<usize>,
        /// MLP hidden layer widths, comma separated.
        #[arg(long, value_delimiter = ',')]
        hidden: Option<Vec<usize>>,
        /// Integer weights are drawn from [-range, range].
        #[arg(long, default_value_t = 10)]
        range: i64,
    },
    /// Time the solvers on random models; CSV on standard output.
    Bench {
        #[arg(long)]
        kind: ModelKind,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "semi")]
        mode: Mode,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    mode: Mode,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    instance: String,
    #[arg(long)]
    prefs: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    #[command(flatten)]
    common: Common,
    /// Print up to N explanations instead of one.
    #[arg(long, value_name = "N")]
    all: Option<usize>,
}

enum Failure {
    Usage(String),
    /// A library error, optionally naming the file it came from.
    Lib(Error, Option<PathBuf>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e, None)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Lib(Error::Parse(e), None)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(e, _) => match e {
                Error::Parse(_) | Error::DimensionMismatch { .. } => 2,
                Error::InvalidFbdd(_) | Error::InvalidMlp(_) | Error::EmptyModel | Error::IndexOutOfRange { .. } => 3,
                Error::CapExceeded { .. } | Error::BudgetExceeded { .. } => 4,
                Error::NoCounterfactual => 5,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        let list = |kind: &str, items: Vec<String>| format!("invalid {kind} model:\n  {}", items.join("\n  "));
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Lib(e, file) => {
                let body = match e {
                    Error::InvalidFbdd(v) => list("fbdd", v.iter().map(|x| x.to_string()).collect()),
                    Error::InvalidMlp(v) => list("mlp", v.iter().map(|x| x.to_string()).collect()),
                    e => e.to_string(),
                };
                match file {
                    Some(path) => format!("{}: {body}", path.display()),
                    None => body,
                }
            }
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_model(path: &Path) -> std::result::Result<Model, Failure> {
    parse_model(&read(path)?).map_err(|e| Failure::Lib(e, Some(path.to_path_buf())))
}

struct Loaded {
    mode: Mode,
    model: Model,
    x: Instance,
    rules: Vec<PreferenceRule>,
}

fn load(common: &Common) -> std::result::Result<Loaded, Failure> {
    let model = load_model(&common.model)?;
    let n = model.feature_count();
    let x = parse_instance(&common.instance, n)?;
    let rules = match &common.prefs {
        Some(p) => parse_preferences(&read(p)?, n)
            .map_err(|e| Failure::Lib(Error::Parse(e), Some(p.clone())))?,
        None => Vec::new(),
    };
    Ok(Loaded { mode: common.mode, model, x, rules })
}

fn render(explanations: &[Explanation], with_degrees: bool) -> String {
    let mut out = format!("d={}\n", explanations[0].distance);
    for e in explanations {
        out.push_str(&e.instance.to_string());
        if with_degrees {
            let d: Vec<String> = e.degrees.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!(" deg=[{}]", d.join(",")));
        }
        out.push('\n');
    }
    out
}

fn oracle_cap(flag: Option<usize>) -> std::result::Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(MAX_ORACLE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_ORACLE_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_FEATURES),
    }
}

fn execute(command: Command) -> Outcome {
    let opts = SolveOptions::default();
    match command {
        Command::Eval { model, instance } => {
            let model = load_model(&model)?;
            let x = parse_instance(&instance, model.feature_count())?;
            Ok(format!("{}\n", u8::from(model.eval(&x)?)))
        }
        Command::Explain(args) => {
            let l = load(&args.common)?;
            let found = match args.all {
                None => vec![explain(&l.model, &l.x, l.mode, &l.rules, &opts)?],
                Some(0) => return Err(Failure::Usage("--all needs a positive count".into())),
                Some(limit) => enumerate(&l.model, &l.x, l.mode, &l.rules, limit, &opts)?.explanations,
            };
            if found.is_empty() {
                return Err(Error::NoCounterfactual.into());
            }
            Ok(render(&found, args.common.prefs.is_some()))
        }
        Command::VerifyBest { common, candidate } => {
            let l = load(&common)?;
            let y = parse_instance(&candidate, l.model.feature_count())?;
            Ok(format!("{}\n", verify_best(&l.model, &l.rules, &l.x, &y, l.mode, &opts)?))
        }
        Command::Oracle { explain: args, max_n } => {
            let cap = oracle_cap(max_n)?;
            let l = load(&args.common)?;
            let query = ExplanationQuery::new(l.mode, &l.model, &l.x).with_preferences(&l.rules);
            let mut best = oracle_best(&query, cap)?;
            match args.all {
                Some(0) => return Err(Failure::Usage("--all needs a positive count".into())),
                limit => best.truncate(limit.unwrap_or(1)),
            }
            if best.is_empty() {
                return Err(Error::NoCounterfactual.into());
            }
            Ok(render(&best, args.common.prefs.is_some()))
        }
        Command::Gen { kind, n, seed, nodes, hidden, range } => {
            let params = GenParams { weight_range: range, nodes, hidden };
            Ok(serialize_model(&gen_random_model(kind, n, seed, &params)?))
        }
        Command::Bench { kind, sizes, trials, seed, mode } => {
            Ok(to_csv(&bench_scaling(kind, &sizes, trials, seed, mode)?))
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                1
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}
