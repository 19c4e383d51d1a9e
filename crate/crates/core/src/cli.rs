//! Command-line front end. [`run`] returns the exit code and captured
//! output so it can be driven from tests as well as from `main`.

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::basis::{
    classification_table, compose, decompose, decompose_generators_with_tolerance, fast_decompose,
    sector_block, GeneratorExpansion, SectorPart,
};
use crate::error::{Error, Result};
use crate::formats::{
    parse_operator, position_vec, to_json, BlockFile, DecompositionFile, GeneratorExpansionFile,
    MatrixFile, OperatorInput, TableFile,
};
use crate::gellmann::{generator, GeneratorIndex};
use crate::matrix::{ComplexMatrix, IntMatrix};
use crate::pauli::{classify_form, materialize, FormTag, PauliString};
use crate::render;
use crate::su::{
    build_element, exponentiate, extract_params_with_tolerance, free_parameter_breakdown,
    free_parameter_count, Convention, SuParameters, HERMITICITY_TOLERANCE,
};
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "gellmann-pauli",
    version,
    about = "su(2^m) generators, Pauli strings, and the change of basis between them"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Absolute tolerance for Hermiticity checks and verification thresholds.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Pauli,
    Generator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Real,
    Imaginary,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    /// exp(iH), unitary
    Physics,
    /// exp(H) exactly as the parameterization reads
    Literal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one generator of su(n)
    Gen {
        #[arg(long)]
        n: usize,
        /// Flat index (`8`, `X8`) or family and position (`sym:1,2`, `anti:1,2`, `diag:3`)
        #[arg(long, allow_hyphen_values = true)]
        index: String,
    },
    /// Materialize a Pauli string such as `ZIY`
    Pauli { string: String },
    /// D/OD form and masks of a Pauli string
    Classify { string: String },
    /// Generator indices of su(2^m) grouped by D/OD form
    Table {
        #[arg(long)]
        m: usize,
    },
    /// Expand an operator file in the Pauli or generator basis
    Decompose {
        /// Matrix, parameter or decomposition JSON; `-` reads stdin
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisArg::Pauli)]
        basis: BasisArg,
        /// Use the projection path instead of the Walsh–Hadamard one
        #[arg(long)]
        naive: bool,
    },
    /// Sum a Pauli decomposition or generator expansion back into a matrix
    Compose { input: PathBuf },
    /// Change-of-basis block for one D/OD form
    Cob {
        /// Form such as `DD-OD` or `D-OD-OD`
        #[arg(long)]
        form: String,
        #[arg(long, value_enum, default_value_t = PartArg::Real)]
        part: PartArg,
        /// Qubit count; must match the form when given
        #[arg(long)]
        m: Option<usize>,
    },
    /// Parameter counting, assembly and extraction
    Params {
        #[command(subcommand)]
        action: ParamsCommand,
    },
    /// Exponentiate a parameter file to the group
    Exp {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ConventionArg::Physics)]
        convention: ConventionArg,
    },
    /// Run an invariant suite
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum ParamsCommand {
    /// Number of free parameters of su(n)
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Parameter JSON to matrix
    Build { input: PathBuf },
    /// Hermitian traceless matrix JSON to parameters
    Extract { input: PathBuf },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// orthogonality, roundtrip, rank, identity-free, unitarity, all, or block
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Block JSON for `--suite block`; `-` reads stdin
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: String) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_stdin(args, &mut std::io::stdin())
}

pub fn run_with_stdin<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

fn emit<T: Serialize>(format: OutputFormat, value: &T, text: impl FnOnce() -> String) -> String {
    let mut out = match format {
        OutputFormat::Json => to_json(value),
        OutputFormat::Text => text(),
    };
    out.push('\n');
    out
}

#[derive(Serialize)]
struct LabeledMatrix<'a> {
    label: String,
    #[serde(flatten)]
    matrix: &'a MatrixFile,
}

fn emit_matrix(format: OutputFormat, label: String, m: &ComplexMatrix) -> String {
    let file = MatrixFile::from(m);
    emit(
        format,
        &LabeledMatrix {
            label: label.clone(),
            matrix: &file,
        },
        || format!("{label}\n{}", render::matrix(m)),
    )
}

/// Any operator input as a dense matrix.
fn operator_matrix(input: OperatorInput) -> Result<ComplexMatrix> {
    match input {
        OperatorInput::Matrix(m) => Ok(m),
        OperatorInput::Parameters(p) => build_element(&p),
        OperatorInput::Pauli(d) => compose(&d),
        OperatorInput::Generators(g) => build_element(&g.to_params()?),
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome> {
    let format = cli.format;
    let herm_tol = cli.tolerance.unwrap_or(HERMITICITY_TOLERANCE);
    let out = match &cli.command {
        Command::Gen { n, index } => {
            let idx = GeneratorIndex::parse(*n, index)?;
            let label = format!(
                "{idx} ({} {:?}) of su({n})",
                idx.family().name(),
                position_vec(&idx)
            );
            emit_matrix(format, label, &generator(&idx))
        }
        Command::Pauli { string } => {
            let p: PauliString = string.parse()?;
            emit_matrix(format, p.to_string(), &materialize(&p)?)
        }
        Command::Classify { string } => {
            let p: PauliString = string.parse()?;
            let form = classify_form(&p);
            #[derive(Serialize)]
            struct Classified {
                string: String,
                form: String,
                flip_mask: u64,
                z_mask: u64,
                y_count: u32,
            }
            let c = Classified {
                string: p.to_string(),
                form: form.to_ascii(),
                flip_mask: p.flip_mask(),
                z_mask: p.z_mask(),
                y_count: p.y_count(),
            };
            let m = p.num_qubits();
            emit(format, &c, || {
                format!(
                    "{p}: {form}\nflip mask {:0m$b}, z mask {:0m$b}, {} Y",
                    p.flip_mask(),
                    p.z_mask(),
                    p.y_count()
                )
            })
        }
        Command::Table { m } => {
            let table = classification_table(*m)?;
            emit(format, &TableFile::new(*m, &table), || {
                render::table(&table)
            })
        }
        Command::Decompose {
            input,
            basis,
            naive,
        } => {
            let op = operator_matrix(parse_operator(&read_input(input, stdin)?)?)?;
            match basis {
                BasisArg::Pauli => {
                    let d = if *naive {
                        decompose(&op)?
                    } else {
                        fast_decompose(&op)?
                    };
                    emit(format, &DecompositionFile::from(&d), || {
                        render::decomposition(&d)
                    })
                }
                BasisArg::Generator => {
                    let e = decompose_generators_with_tolerance(&op, herm_tol)?;
                    emit(format, &GeneratorExpansionFile::from(&e), || {
                        render::generator_expansion(&e)
                    })
                }
            }
        }
        Command::Compose { input } => {
            let m = match parse_operator(&read_input(input, stdin)?)? {
                OperatorInput::Pauli(d) => compose(&d)?,
                OperatorInput::Generators(g) => build_element(&g.to_params()?)?,
                _ => {
                    return Err(Error::Parse(
                        "compose expects a Pauli decomposition or generator expansion".into(),
                    ))
                }
            };
            emit_matrix(format, "composed".into(), &m)
        }
        Command::Cob { form, part, m } => {
            let form: FormTag = form.parse()?;
            if let Some(m) = m {
                if *m != form.num_qubits() {
                    return Err(Error::invalid(format!(
                        "form {form} has {} factors but --m is {m}",
                        form.num_qubits()
                    )));
                }
            }
            let part = match part {
                PartArg::Real => SectorPart::Real,
                PartArg::Imaginary => SectorPart::Imaginary,
                PartArg::Diagonal => SectorPart::Diagonal,
            };
            let block = sector_block(&form, part)?;
            emit(format, &BlockFile::from(&block), || render::block(&block))
        }
        Command::Params { action } => params(format, herm_tol, action, stdin)?,
        Command::Exp { input, convention } => {
            let p = match parse_operator(&read_input(input, stdin)?)? {
                OperatorInput::Parameters(p) => p,
                OperatorInput::Generators(g) => g.to_params()?,
                _ => return Err(Error::Parse("exp expects a parameter JSON file".into())),
            };
            let (conv, name) = match convention {
                ConventionArg::Physics => (Convention::PhysicsUnitary, "exp(iH)"),
                ConventionArg::Literal => (Convention::Literal, "exp(H)"),
            };
            emit_matrix(format, name.into(), &exponentiate(&p, conv)?)
        }
        Command::Verify(args) => return verify_command(format, cli.tolerance, args, stdin),
    };
    Ok(Outcome::ok(out))
}

fn params(
    format: OutputFormat,
    herm_tol: f64,
    action: &ParamsCommand,
    stdin: &mut dyn Read,
) -> Result<String> {
    Ok(match action {
        ParamsCommand::Count { n } => {
            let total = free_parameter_count(*n)?;
            let (d, a, b) = free_parameter_breakdown(*n)?;
            #[derive(Serialize)]
            struct Count {
                n: usize,
                count: usize,
                diagonal: usize,
                real: usize,
                imaginary: usize,
            }
            let c = Count {
                n: *n,
                count: total,
                diagonal: d,
                real: a,
                imaginary: b,
            };
            emit(format, &c, || {
                format!("su({n}): {d} + {a} + {b} = {total} free parameters")
            })
        }
        ParamsCommand::Build { input } => {
            let p = match parse_operator(&read_input(input, stdin)?)? {
                OperatorInput::Parameters(p) => p,
                OperatorInput::Generators(g) => g.to_params()?,
                _ => {
                    return Err(Error::Parse(
                        "params build expects a parameter JSON file".into(),
                    ))
                }
            };
            emit_matrix(format, format!("su({}) element", p.n), &build_element(&p)?)
        }
        ParamsCommand::Extract { input } => {
            let m = operator_matrix(parse_operator(&read_input(input, stdin)?)?)?;
            let p: SuParameters = extract_params_with_tolerance(&m, herm_tol)?;
            emit(format, &p, || {
                let e =
                    GeneratorExpansion::from_params(&p).expect("extracted parameters are valid");
                render::generator_expansion(&e)
            })
        }
    })
}

fn verify_command(
    format: OutputFormat,
    tolerance: Option<f64>,
    args: &VerifyArgs,
    stdin: &mut dyn Read,
) -> Result<Outcome> {
    let (m, checks) = if args.suite == "block" {
        let path = args.input.clone().unwrap_or_else(|| PathBuf::from("-"));
        let file: BlockFile = serde_json::from_str(&read_input(&path, stdin)?)
            .map_err(|e| Error::Parse(e.to_string()))?;
        let forward = IntMatrix::from_rows(&file.g)?;
        let inverse = IntMatrix::from_rows(&file.inverse)?;
        let m = file.form.parse::<FormTag>()?.num_qubits();
        (
            m,
            verify::block(&forward, &inverse, file.inverse_denominator),
        )
    } else {
        let suite = Suite::parse(&args.suite)?;
        let opts = VerifyOptions {
            m: args.m,
            trials: args.trials,
            seed: args.seed,
            tolerance,
        };
        let report = verify::run(suite, &opts)?;
        (report.m, report.checks)
    };
    let passed = checks.iter().all(|c| c.passed);
    #[derive(Serialize)]
    struct VerifyOutput<'a> {
        suite: &'a str,
        m: usize,
        passed: bool,
        checks: &'a [verify::Check],
    }
    let body = VerifyOutput {
        suite: &args.suite,
        m,
        passed,
        checks: &checks,
    };
    let stdout = emit(format, &body, || {
        let mut lines: Vec<String> = checks
            .iter()
            .map(|c| {
                format!(
                    "[{}] {}: {:e} (threshold {:e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                )
            })
            .collect();
        lines.push(format!(
            "{} suite, m = {m}: {}",
            args.suite,
            if passed { "pass" } else { "FAIL" }
        ));
        lines.join("\n")
    });
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
        stdout,
        stderr: String::new(),
    })
}
