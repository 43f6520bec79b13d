//! Command-line front end: parse maps, run the classification pipeline,
//! and emit human-readable or JSON reports.
//!
//! Exit codes: 0 success; 1 enumeration found counterexamples; 2 input or
//! expression errors; 3 singular linear part; 4 internal verification
//! failure; 5 the map is not a shear where one is required; 6 enumeration
//! budget exceeded. Diagnostics go to stderr, reports to stdout.

use clap::{Args, Parser, Subcommand, ValueEnum};
use shearscope::harness::{
    cross_check_conditions, enumerate_divergence_free, enumerate_divergence_free_naive,
    ConditionSlice, EnumerationMode, EnumerationSpec, HarnessError, LinearPartRange,
    DEFAULT_BUDGET,
};
use shearscope::jacobian::LinearPart;
use shearscope::report::{
    classify, render_classification, render_conditions, to_json_string, Classification,
    ClassificationDocument, ConditionsCommandDocument, DecomposeDocument, EnumerationDocument,
    InvertDocument, NormalFormCommandDocument, Verdict,
};
use shearscope::shear::ShearNormalForm;
use shearscope::{expr, Rational};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_COUNTEREXAMPLES: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_INTERNAL: u8 = 4;
const EXIT_NOT_SHEAR: u8 = 5;
const EXIT_BUDGET: u8 = 6;

#[derive(Parser)]
#[command(
    name = "shearscope",
    version,
    about = "Exact classifier for planar polynomial maps: jacobian tests, shear decomposition, inverses, normal forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full classification: jacobian test, divergence, decomposition,
    /// inverse, normal form, and condition checks.
    Classify(MapArgs),
    /// Shear decomposition only (direction and coefficients).
    Decompose(MapArgs),
    /// Explicit polynomial inverse (requires a shear or affine map).
    Invert(MapArgs),
    /// Conjugated normal form (u, v) -> (u, v + g(u)).
    NormalForm(MapArgs),
    /// Gap-set, parity and sufficient-condition flags.
    CheckConditions(MapArgs),
    /// Sweep small coefficient spaces and verify that every
    /// divergence-free jacobian map decomposes as a shear.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct MapArgs {
    /// The two component expressions, e.g. --map "x - y^2" "y".
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_hyphen_values = true)]
    map: Option<Vec<String>>,
    /// File with P on the first line and Q on the second.
    #[arg(long, conflicts_with = "map")]
    file: Option<PathBuf>,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl MapArgs {
    fn sources(&self) -> Result<(String, String), String> {
        if let Some(exprs) = &self.map {
            if exprs.len() == 2 {
                return Ok((exprs[0].clone(), exprs[1].clone()));
            }
            return Err("--map takes exactly two expressions".into());
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let mut lines = text.lines();
            let p = lines.next().unwrap_or("").trim().to_string();
            let q = lines.next().unwrap_or("").trim().to_string();
            if p.is_empty() || q.is_empty() {
                return Err(format!(
                    "{} must contain P on the first line and Q on the second",
                    path.display()
                ));
            }
            return Ok((p, q));
        }
        Err("provide a map with --map \"P\" \"Q\" or --file <path>".into())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// Divergence-constrained generation (q forced up to a pure-x part).
    Pruned,
    /// Full sweep over both components; only feasible for tiny specs.
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinearPartsArg {
    /// Identity linear part only.
    Identity,
    /// All linear parts over the coefficient set.
    Set,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Largest total degree of nonlinear monomials.
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
    /// Comma-separated coefficient alphabet, e.g. "-1,0,1" or "0,1,1/2".
    #[arg(long, default_value = "-1,0,1", value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Number of samples in random mode.
    #[arg(long, default_value_t = 10_000)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check one sufficient-condition slice (c1_i, c1_ii, c1_iii,
    /// c1_iv, c2_i, c2_ii) instead of the divergence-free sweep.
    #[arg(long, value_parser = parse_slice)]
    cross_check: Option<ConditionSlice>,
    /// Linear parts composed with the pair during a cross-check.
    #[arg(long, value_enum, default_value_t = LinearPartsArg::Identity)]
    linear_parts: LinearPartsArg,
    /// Enumeration scheme for the divergence-free sweep.
    #[arg(long, value_enum, default_value_t = SchemeArg::Pruned)]
    scheme: SchemeArg,
    /// Candidate cap; overrides the SHEARSCOPE_BUDGET environment
    /// variable and the built-in default.
    #[arg(long)]
    budget: Option<u64>,
}

fn parse_slice(s: &str) -> Result<ConditionSlice, String> {
    ConditionSlice::parse(s)
        .ok_or_else(|| format!("unknown slice '{s}' (expected c1_i..c1_iv, c2_i, c2_ii)"))
}

fn parse_coefficient(s: &str) -> Result<Rational, String> {
    let trimmed = s.trim();
    let poly = expr::parse_poly(trimmed).map_err(|e| format!("bad coefficient '{trimmed}': {e}"))?;
    poly.constant_value()
        .ok_or_else(|| format!("coefficient '{trimmed}' is not a constant"))
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, String> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("SHEARSCOPE_BUDGET") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("SHEARSCOPE_BUDGET must be an integer, got '{raw}'")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn classify_from_args(args: &MapArgs) -> Result<Classification, ExitCode> {
    let (p_src, q_src) = args.sources().map_err(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_INPUT)
    })?;
    let map = expr::parse_map(&p_src, &q_src).map_err(|e| {
        eprintln!("parse error: {e}");
        ExitCode::from(EXIT_INPUT)
    })?;
    classify(&map).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_INTERNAL)
    })
}

fn singular_exit(c: &Classification) -> Option<ExitCode> {
    if c.is_singular() {
        eprintln!("error: the linear part at the origin is singular");
        Some(ExitCode::from(EXIT_SINGULAR))
    } else {
        None
    }
}

fn run_classify(args: &MapArgs) -> ExitCode {
    let c = match classify_from_args(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if args.json {
        print!("{}", to_json_string(&ClassificationDocument::of(&c)));
    } else {
        print!("{}", render_classification(&c));
    }
    singular_exit(&c).unwrap_or(ExitCode::SUCCESS)
}

fn run_decompose(args: &MapArgs) -> ExitCode {
    let c = match classify_from_args(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if args.json {
        print!("{}", to_json_string(&DecomposeDocument::of(&c)));
    } else {
        match &c.decomposition {
            Some(d) => {
                println!(
                    "direction: (alpha, beta) = ({}, {})",
                    d.direction().alpha(),
                    d.direction().beta()
                );
                for (i, e) in d.epsilons() {
                    println!("eps_{i} = {e}");
                }
            }
            None => println!("verdict: {}", c.verdict.as_str()),
        }
    }
    if let Some(code) = singular_exit(&c) {
        return code;
    }
    match c.verdict {
        Verdict::Shear | Verdict::Linear => ExitCode::SUCCESS,
        _ => {
            eprintln!("error: the map is not a shear map ({})", c.verdict.as_str());
            ExitCode::from(EXIT_NOT_SHEAR)
        }
    }
}

fn run_invert(args: &MapArgs) -> ExitCode {
    let c = match classify_from_args(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if args.json {
        print!("{}", to_json_string(&InvertDocument::of(&c)));
    } else if let Some(inverse) = &c.inverse {
        println!("{inverse}");
    }
    if let Some(code) = singular_exit(&c) {
        return code;
    }
    if c.inverse.is_some() {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: the map is not a shear map ({})", c.verdict.as_str());
        ExitCode::from(EXIT_NOT_SHEAR)
    }
}

fn run_normal_form(args: &MapArgs) -> ExitCode {
    let mut c = match classify_from_args(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    // An affine map conjugates to the identity normal form under the
    // identity change of variables.
    if c.verdict == Verdict::Linear && c.normal_form.is_none() {
        c.normal_form = Some(ShearNormalForm {
            change_of_variables: LinearPart::identity(),
            g: Default::default(),
        });
    }
    if args.json {
        print!("{}", to_json_string(&NormalFormCommandDocument::of(&c)));
    } else if let Some(nf) = &c.normal_form {
        let t = nf.change_of_variables.as_map();
        println!(
            "T = ({}, {}), g(u) = {}",
            t.p,
            t.q,
            expr::format_univariate(nf.g.iter(), "u")
        );
    }
    if let Some(code) = singular_exit(&c) {
        return code;
    }
    if c.normal_form.is_some() {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: the map is not a shear map ({})", c.verdict.as_str());
        ExitCode::from(EXIT_NOT_SHEAR)
    }
}

fn run_check_conditions(args: &MapArgs) -> ExitCode {
    let c = match classify_from_args(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if args.json {
        print!("{}", to_json_string(&ConditionsCommandDocument::of(&c)));
    } else {
        print!("{}", render_conditions(&c.conditions));
    }
    ExitCode::SUCCESS
}

fn run_enumerate(args: &EnumerateArgs) -> ExitCode {
    let budget = match resolve_budget(args.budget) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let mut coefficients = Vec::new();
    for raw in &args.coeffs {
        match parse_coefficient(raw) {
            Ok(c) => coefficients.push(c),
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_INPUT);
            }
        }
    }
    let mode = match args.mode {
        ModeArg::Exhaustive => EnumerationMode::Exhaustive,
        ModeArg::Random => EnumerationMode::Random {
            count: args.count,
            seed: args.seed,
        },
    };
    let spec = match EnumerationSpec::new(args.max_degree, coefficients, mode) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let linear_parts = match args.linear_parts {
        LinearPartsArg::Identity => LinearPartRange::Identity,
        LinearPartsArg::Set => LinearPartRange::FromCoefficientSet,
    };
    let outcome = match args.cross_check {
        Some(slice) => cross_check_conditions(&spec, slice, linear_parts, budget).map(|result| {
            let lp = match args.linear_parts {
                LinearPartsArg::Identity => "identity",
                LinearPartsArg::Set => "set",
            };
            EnumerationDocument::new(
                "cross-check",
                &spec,
                None,
                Some(slice.name()),
                Some(lp),
                result,
            )
        }),
        None => {
            let (scheme, run): (_, fn(&EnumerationSpec, u64) -> _) = match args.scheme {
                SchemeArg::Pruned => ("pruned", enumerate_divergence_free),
                SchemeArg::Naive => ("naive", enumerate_divergence_free_naive),
            };
            run(&spec, budget)
                .map(|result| EnumerationDocument::new("enumerate", &spec, Some(scheme), None, None, result))
        }
    };
    let document = match outcome {
        Ok(document) => document,
        Err(HarnessError::BudgetExceeded { candidates, budget }) => {
            eprintln!(
                "error: enumeration needs {candidates} candidates, over the budget of {budget}"
            );
            return ExitCode::from(EXIT_BUDGET);
        }
        Err(e @ HarnessError::InvalidSpec(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    print!("{}", to_json_string(&document));
    if document.result.counterexamples.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "error: {} counterexample(s) found",
            document.result.counterexamples.len()
        );
        ExitCode::from(EXIT_COUNTEREXAMPLES)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Decompose(args) => run_decompose(args),
        Command::Invert(args) => run_invert(args),
        Command::NormalForm(args) => run_normal_form(args),
        Command::CheckConditions(args) => run_check_conditions(args),
        Command::Enumerate(args) => run_enumerate(args),
    }
}
