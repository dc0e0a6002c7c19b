mod inputs;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use tentropy_core::acceptance::{self, CRITERIA};
use tentropy_core::conjugate::{biconjugate, lf_transform, lf_transform_reference};
use tentropy_core::defaults::NumericDefaults;
use tentropy_core::operators::{
    check_rfA, cycle_mean_exponent, lambda_functional, operator_series_detailed, pgf_of_operator,
    spectral_radius_detailed,
};
use tentropy_core::tentropy::{
    duality_reconstruct, lambda_conjugate_detailed, lambda_hat_conjugate, lambda_tilde_conjugate, DualPair,
};
use tentropy_core::tilting::{contraction_discrete, min_entropy_given_mean, min_form3};
use tentropy_core::Error;

use inputs::{InputError, InputResult};

/// Convex conjugates, Cramér transforms, exponential tilting, positive
/// operators and t-entropy on finite systems.
#[derive(Parser, Debug)]
#[command(name = "tentropy", version)]
struct Cli {
    /// JSON file overriding the numeric defaults (see `tentropy defaults`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discrete Legendre–Fenchel transform of a sampled function (CSV `x,value`).
    Conjugate(ConjugateArgs),
    /// Tabulate the Cramér transform or a related conjugate as CSV.
    Cramer(CramerArgs),
    /// Entropy minimisation under a mean constraint.
    Tilting {
        #[command(subcommand)]
        problem: TiltingCommand,
    },
    /// Spectral radius and power series of nonnegative matrices.
    Operators {
        #[command(subcommand)]
        op: OperatorsCommand,
    },
    /// t-entropy and the variational functionals on finite systems.
    Tentropy {
        #[command(subcommand)]
        op: TentropyCommand,
    },
    /// Print the numeric defaults as JSON.
    Defaults,
    /// Run the acceptance suite and write a JSON summary.
    VerifyAll {
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

#[derive(Args, Debug)]
struct ConjugateArgs {
    /// CSV `x,value`, with `inf` for +∞.
    #[arg(long)]
    input: PathBuf,
    /// Dual grid `lo:hi:step`; required unless `--biconjugate`.
    #[arg(long, required_unless_present = "biconjugate", allow_hyphen_values = true)]
    dual: Option<String>,
    /// Use the O(nm) reference transform.
    #[arg(long)]
    reference: bool,
    /// Output f** on the input grid instead.
    #[arg(long, conflicts_with_all = ["dual", "reference"])]
    biconjugate: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CramerFunction {
    /// `(ln M_X)*`.
    Cramer,
    /// `(ln M_X ∘ exp)*`.
    CgfExp,
    /// `((ln M_X)* ∘ exp)*`.
    CramerExp,
    /// `ln M_X` itself.
    Cgf,
}

#[derive(Args, Debug)]
struct CramerArgs {
    /// Law: `exponential:MU`, `poisson:MU`, `finite:p0,p1,...`, inline JSON or `@file.json`.
    #[arg(long)]
    dist: String,
    /// Evaluation grid `lo:hi:step`.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long, value_enum, default_value = "cramer")]
    function: CramerFunction,
}

#[derive(Subcommand, Debug)]
enum TiltingCommand {
    /// `min Σ t_n ln t_n` with mean `a`.
    Entropy {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// `min Σ t_k ln(t_k k! / EX^k)` with mean `a`.
    Form3 {
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// `min D(t ‖ p)` with mean `a`, for a discrete law.
    Contraction {
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        truncation: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum OperatorsCommand {
    /// Spectral radius with its certified bracket.
    SpectralRadius {
        /// CSV rows or a `.json` array of rows.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// `f(A)` as CSV.
    Series {
        #[arg(long)]
        matrix: PathBuf,
        /// `exp`, `cosh`, `geometric:MU`, `mgf:DIST`, `pgf:DIST`, `poly:c0,c1,...`.
        #[arg(long)]
        series: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare `r(f(A))` with `f(r(A))`.
    CheckRfa {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        series: String,
    },
    /// `ln r(g_X(A))` against `ln M_X(ln r(A))`.
    Pgf {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        dist: String,
    },
    /// Spectral exponent of a finite system, numeric and by cycle means.
    Lambda {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phi: Option<Vec<f64>>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    Tilde,
    Hat,
}

impl From<Which> for DualPair {
    fn from(w: Which) -> Self {
        match w {
            Which::Tilde => DualPair::Tilde,
            Which::Hat => DualPair::Hat,
        }
    }
}

#[derive(Subcommand, Debug)]
enum TentropyCommand {
    /// Rebuild `λ̃_X(φ)` or `λ̂_X(φ)` from its conjugate.
    Duality {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        dist: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phi: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "tilde")]
        which: Which,
        /// `numeric` (λ* by ascent) or `kl` (KL to uniform).
        #[arg(long, default_value = "numeric")]
        oracle: String,
        #[arg(long)]
        a_max: Option<f64>,
        #[arg(long)]
        a_points: Option<usize>,
    },
    /// Conjugate functional at a finite measure.
    Conjugate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        dist: String,
        /// Measure weights, comma separated.
        #[arg(long, value_delimiter = ',')]
        nu: Vec<f64>,
        #[arg(long, value_enum, default_value = "tilde")]
        which: Which,
        #[arg(long, default_value = "numeric")]
        oracle: String,
        #[arg(long)]
        cap: Option<f64>,
    },
    /// `λ*(ν)` with the maximising weight.
    LambdaStar {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_delimiter = ',')]
        nu: Vec<f64>,
        #[arg(long)]
        cap: Option<f64>,
    },
}

/// Rendered output and whether it counts as success.
struct Output {
    text: String,
    verified: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, verified: true }
    }

    fn json<T: Serialize>(value: &T) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("serialisable");
        text.push('\n');
        Self::ok(text)
    }
}

fn run(cli: Cli) -> InputResult<Output> {
    let defaults = inputs::defaults(cli.config.as_deref())?;
    match cli.command {
        Command::Conjugate(args) => conjugate(args),
        Command::Cramer(args) => cramer(args),
        Command::Tilting { problem } => tilting(problem, &defaults),
        Command::Operators { op } => operators(op, &defaults),
        Command::Tentropy { op } => tentropy(op, &defaults),
        Command::Defaults => Ok(Output::json(&defaults)),
        Command::VerifyAll { seed, only } => Ok(verify_all(seed.unwrap_or(defaults.seed), only)?),
    }
}

fn conjugate(args: ConjugateArgs) -> InputResult<Output> {
    let f = inputs::sampled_function(&args.input)?;
    if args.biconjugate {
        let b = biconjugate(&f)?;
        if let Some(w) = b.warning {
            eprintln!("{}", json!({ "warning": w }));
        }
        return Ok(Output::ok(format!("x,value\n{}", b.function.to_csv())));
    }
    let dual = inputs::grid(args.dual.as_deref().expect("required by clap"))?;
    let t = if args.reference { lf_transform_reference(&f, &dual)? } else { lf_transform(&f, &dual)? };
    let mut out = String::from("a,value,argmax,unreliable_edge\n");
    for (i, a) in dual.iter().enumerate() {
        let _ = writeln!(out, "{a},{},{},{}", inputs::csv_value(t.values()[i]), t.argmax()[i], t.unreliable_edge()[i]);
    }
    Ok(Output::ok(out))
}

fn cramer(args: CramerArgs) -> InputResult<Output> {
    let d = inputs::distribution(&args.dist)?;
    let grid = inputs::grid(&args.grid)?;
    let table = d.cramer_table();
    let (header, eval): (&str, Box<dyn Fn(f64) -> _>) = match args.function {
        CramerFunction::Cramer => ("cramer", Box::new(|a| table.eval(a))),
        CramerFunction::CgfExp => ("cgf_exp_conjugate", Box::new(|a| d.cgf_exp_conjugate(a))),
        CramerFunction::CramerExp => ("cramer_exp_conjugate", Box::new(|a| d.cramer_star_exp_conjugate(a))),
        CramerFunction::Cgf => ("cgf", Box::new(|t| d.cgf(t))),
    };
    let mut out = format!("a,{header}\n");
    for a in grid {
        let _ = writeln!(out, "{a},{}", inputs::csv_value(eval(a)));
    }
    Ok(Output::ok(out))
}

fn tilting(problem: TiltingCommand, defaults: &NumericDefaults) -> InputResult<Output> {
    let n = |t: Option<usize>| t.unwrap_or(defaults.truncation);
    let s = match problem {
        TiltingCommand::Entropy { a, truncation } => min_entropy_given_mean(a, n(truncation))?,
        TiltingCommand::Form3 { dist, a, truncation } => min_form3(&inputs::distribution(&dist)?, a, n(truncation))?,
        TiltingCommand::Contraction { dist, a, truncation } => {
            contraction_discrete(&inputs::distribution(&dist)?, a, n(truncation))?
        }
    };
    Ok(Output::json(&s))
}

fn operators(op: OperatorsCommand, defaults: &NumericDefaults) -> InputResult<Output> {
    Ok(match op {
        OperatorsCommand::SpectralRadius { matrix } => {
            Output::json(&spectral_radius_detailed(&inputs::matrix(&matrix)?))
        }
        OperatorsCommand::Series { matrix, series, tol } => {
            let a = inputs::matrix(&matrix)?;
            let f = inputs::series(&series)?;
            let eval = operator_series_detailed(&f, &a, tol.unwrap_or(defaults.series_tol))?;
            eprintln!(
                "{}",
                json!({ "terms": eval.terms, "tail_bound": eval.tail_bound, "spectral_radius": eval.spectral_radius })
            );
            Output::ok(eval.matrix.to_csv())
        }
        OperatorsCommand::CheckRfa { matrix, series } => {
            Output::json(&check_rfA(&inputs::series(&series)?, &inputs::matrix(&matrix)?)?)
        }
        OperatorsCommand::Pgf { matrix, dist } => {
            Output::json(&pgf_of_operator(&inputs::distribution(&dist)?, &inputs::matrix(&matrix)?)?)
        }
        OperatorsCommand::Lambda { system, phi } => {
            let s = inputs::system(&system, phi)?;
            let numeric = lambda_functional(&s);
            let cycle_mean = s.is_bijective().then(|| cycle_mean_exponent(&s));
            Output::json(&json!({ "lambda": numeric, "cycle_mean": cycle_mean, "phi": s.phi }))
        }
    })
}

fn tentropy(op: TentropyCommand, defaults: &NumericDefaults) -> InputResult<Output> {
    Ok(match op {
        TentropyCommand::Duality { system, dist, phi, which, oracle, a_max, a_points } => {
            let s = inputs::system(&system, phi)?;
            let d = inputs::distribution(&dist)?;
            let oracle = inputs::oracle(&oracle, defaults.lambda_star_cap)?;
            let grid = NumericDefaults {
                duality_a_max: a_max.unwrap_or(defaults.duality_a_max),
                duality_a_points: a_points.unwrap_or(defaults.duality_a_points),
                ..defaults.clone()
            }
            .duality_grid();
            Output::json(&duality_reconstruct(&oracle, &s, &d, which.into(), &grid, &[])?)
        }
        TentropyCommand::Conjugate { system, dist, nu, which, oracle, cap } => {
            let s = inputs::system(&system, None)?;
            let d = inputs::distribution(&dist)?;
            let oracle = inputs::oracle(&oracle, cap.unwrap_or(defaults.lambda_star_cap))?;
            let nu = inputs::measure(&nu)?;
            let value = match which {
                Which::Tilde => lambda_tilde_conjugate(&oracle, &s, &d, &nu)?,
                Which::Hat => lambda_hat_conjugate(&oracle, &s, &d, &nu)?,
            };
            Output::json(&json!({ "which": DualPair::from(which), "oracle": oracle.name(), "value": value }))
        }
        TentropyCommand::LambdaStar { system, nu, cap } => {
            let s = inputs::system(&system, None)?;
            let nu = inputs::measure(&nu)?;
            Output::json(&lambda_conjugate_detailed(&s, &nu, cap.unwrap_or(defaults.lambda_star_cap))?)
        }
    })
}

fn verify_all(seed: u64, only: Option<Vec<u32>>) -> tentropy_core::Result<Output> {
    let ids: Vec<u32> = match only {
        Some(ids) => ids,
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let outcomes = ids
        .iter()
        .map(|&id| acceptance::run(id, seed).ok_or_else(|| Error::Parse(format!("no criterion {id}"))))
        .collect::<tentropy_core::Result<Vec<_>>>()?;
    let passed = outcomes.iter().all(|o| o.passed);
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let mut out = Output::json(&json!({ "seed": seed, "passed": passed, "criteria": outcomes }));
    out.verified = passed;
    Ok(out)
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_json("usage", e.to_string().trim_end()));
            return ExitCode::from(2);
        }
    };
    let destination = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            match destination {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &out.text) {
                        eprintln!("{}", error_json("io", &format!("{}: {e}", path.display())));
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", out.text),
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError::Io { path, message }) => {
            eprintln!("{}", error_json("io", &format!("{path}: {message}")));
            ExitCode::from(2)
        }
        Err(InputError::Core(e)) => {
            eprintln!("{}", error_json(e.code(), &e.to_string()));
            ExitCode::from(2)
        }
    }
}
