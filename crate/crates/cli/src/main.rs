use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use hombasis::basis::{matrix_views, verify_matrix_identities, ExpansionKind, SLICE_LIMIT};
use hombasis::canon::{canonical_form, canonical_key, StructureClasses};
use hombasis::counting::{count_condens, count_hom, count_surjhom};
use hombasis::interpolation::{extract_hom_values, CombinationOracle, CountOracle};
use hombasis::io::{
    format_rational, parse_rational, signature_from_json, structure_from_json, structure_to_json, ExpansionFile,
};
use hombasis::sample::Sampler;
use hombasis::{Error, Rational, Signature, Structure};

#[derive(Parser)]
#[command(name = "hombasis", version, about = "Homomorphism counts and hom-basis expansions of finite relational structures")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountKind {
    Hom,
    Surjhom,
    Condens,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisKind {
    Surjhom,
    Condens,
}

impl From<BasisKind> for ExpansionKind {
    fn from(k: BasisKind) -> Self {
        match k {
            BasisKind::Surjhom => ExpansionKind::Surjhom,
            BasisKind::Condens => ExpansionKind::Condens,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Count maps from one structure to another.
    Count {
        #[arg(long, value_enum)]
        kind: CountKind,
        #[arg(long, value_name = "A.json")]
        from: PathBuf,
        #[arg(long, value_name = "B.json")]
        to: PathBuf,
    },
    /// Write the hom-basis expansion of Surjhom(., B) or Condens(., B).
    Expand {
        #[arg(long, value_enum)]
        kind: BasisKind,
        #[arg(long, value_name = "B.json")]
        template: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an expansion against direct counting on random structures.
    Verify {
        #[arg(long)]
        expansion: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recover hom(A, B_i) for every term from an oracle for the expansion.
    #[command(group(ArgGroup::new("oracle").required(true).args(["oracle_cmd", "self_test"])))]
    Extract {
        #[arg(long)]
        expansion: PathBuf,
        #[arg(long, value_name = "A.json")]
        input: PathBuf,
        /// Shell command reading a structure on stdin and printing a rational.
        #[arg(long)]
        oracle_cmd: Option<String>,
        #[arg(long)]
        self_test: bool,
    },
    /// List one canonical representative per isomorphism class.
    Enumerate {
        #[arg(long)]
        signature: PathBuf,
        #[arg(long)]
        max_size: usize,
    },
    /// Build the count matrices of a slice and check their identities.
    Matrices {
        #[arg(long)]
        signature: PathBuf,
        #[arg(long)]
        max_size: usize,
    },
}

/// Exit status 1: a check failed or an oracle misbehaved.
/// Exit status 2: bad input or configuration.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleInconsistent(_) | Error::OracleFailure(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_structure(path: &Path) -> std::result::Result<Structure, Failure> {
    structure_from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_expansion(path: &Path) -> std::result::Result<ExpansionFile, Failure> {
    ExpansionFile::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn rational(c: hombasis::Count) -> Rational {
    Rational::from_integer(c.into())
}

fn cmd_count(kind: CountKind, from: &Path, to: &Path, out: &mut impl Write) -> Outcome {
    let a = load_structure(from)?;
    let b = load_structure(to)?;
    let n = match kind {
        CountKind::Hom => count_hom(&a, &b)?,
        CountKind::Surjhom => count_surjhom(&a, &b)?,
        CountKind::Condens => count_condens(&a, &b)?,
    };
    writeln!(out, "{n}").ok();
    Ok(())
}

fn cmd_expand(kind: BasisKind, template: &Path, dest: Option<&Path>, out: &mut impl Write) -> Outcome {
    let b = load_structure(template)?;
    let text = ExpansionFile::build(kind.into(), b).to_json();
    match dest {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            out.write_all(text.as_bytes()).ok();
            Ok(())
        }
    }
}

fn cmd_verify(expansion: &Path, samples: usize, max_size: usize, seed: u64, out: &mut impl Write) -> Outcome {
    if samples == 0 {
        return Err(Failure::Input("config error: --samples must be at least 1".into()));
    }
    if max_size == 0 {
        return Err(Failure::Input("config error: --max-size must be at least 1".into()));
    }
    let file = load_expansion(expansion)?;
    let sampler = Sampler::new(file.template.signature().clone(), max_size, seed);
    let mut failures = 0;
    for (i, a) in sampler.take(samples).enumerate() {
        let predicted = file.expansion.evaluate(&a)?;
        let actual = rational(file.kind.count(&a, &file.template)?);
        if predicted == actual {
            writeln!(out, "sample {i}: pass").ok();
        } else {
            failures += 1;
            writeln!(
                out,
                "sample {i}: FAIL expansion gives {} but direct count is {}",
                format_rational(&predicted),
                format_rational(&actual)
            )
            .ok();
            writeln!(out, "  counterexample: {}", structure_to_json(&a)).ok();
        }
    }
    writeln!(out, "{} of {samples} samples passed", samples - failures).ok();
    if failures > 0 {
        return Err(Failure::Check(format!("{failures} sample(s) disagree")));
    }
    Ok(())
}

/// Runs `sh -c cmd` once per query with the structure JSON on stdin.
struct ExternalOracle {
    command: String,
}

impl CountOracle<Rational> for ExternalOracle {
    fn query(&self, structure: &Structure) -> hombasis::Result<Rational> {
        let fail = |msg: String| Error::OracleFailure(msg);
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| fail(format!("cannot start oracle: {e}")))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        // the oracle may exit without reading its input
        let _ = stdin.write_all(structure_to_json(structure).as_bytes());
        drop(stdin);
        let output = child.wait_with_output().map_err(|e| fail(format!("oracle did not finish: {e}")))?;
        if !output.status.success() {
            return Err(fail(format!("oracle exited with {}", output.status)));
        }
        let text = String::from_utf8_lossy(&output.stdout);
        parse_rational(&text).map_err(|_| fail(format!("oracle printed {:?}, expected a rational", text.trim())))
    }
}

fn cmd_extract(
    expansion: &Path,
    input: &Path,
    oracle_cmd: Option<String>,
    self_test: bool,
    out: &mut impl Write,
) -> Outcome {
    let file = load_expansion(expansion)?;
    let a = load_structure(input)?;
    let lc = &file.expansion;
    let result = match oracle_cmd {
        Some(command) => extract_hom_values(lc, &ExternalOracle { command }, &a)?,
        None => extract_hom_values(lc, &CombinationOracle::new(lc), &a)?,
    };
    for (term, value) in lc.terms().iter().zip(&result.values) {
        writeln!(out, "{} {}", term.key(), format_rational(value)).ok();
    }
    writeln!(out, "queries {}", result.queries).ok();
    if self_test {
        let mut agree = true;
        for (term, value) in lc.terms().iter().zip(&result.values) {
            agree &= rational(count_hom(&a, term.structure())?) == *value;
        }
        if !agree {
            writeln!(out, "agreement FAILED").ok();
            return Err(Failure::Check("recovered values differ from direct hom counts".into()));
        }
        writeln!(out, "agreement OK").ok();
    }
    Ok(())
}

fn slice(signature: &Path, max_size: usize) -> std::result::Result<(Signature, Vec<Structure>), Failure> {
    let sig = signature_from_json(&read(signature)?).map_err(|e| Failure::Input(format!("{}: {e}", signature.display())))?;
    let index: Vec<Structure> = StructureClasses::new(sig.clone(), max_size).take(SLICE_LIMIT + 1).collect();
    if index.len() > SLICE_LIMIT {
        return Err(Error::SliceTooLarge { limit: SLICE_LIMIT }.into());
    }
    Ok((sig, index))
}

fn cmd_enumerate(signature: &Path, max_size: usize, out: &mut impl Write) -> Outcome {
    for s in slice(signature, max_size)?.1 {
        writeln!(out, "{} {}", canonical_key(&s), structure_to_json(&canonical_form(&s))).ok();
    }
    Ok(())
}

fn cmd_matrices(signature: &Path, max_size: usize, out: &mut impl Write) -> Outcome {
    let (sig, _) = slice(signature, max_size)?;
    let view = matrix_views(&sig, max_size)?;
    let report = verify_matrix_identities(&view);
    writeln!(out, "dimension {}", report.dimension).ok();
    for v in &report.violations {
        writeln!(out, "violation {:?} at ({}, {})", v.identity, v.row, v.col).ok();
    }
    if !report.holds() {
        return Err(Failure::Check(format!("{} identity violation(s)", report.violations.len())));
    }
    writeln!(out, "identities hold").ok();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let outcome = match cli.command {
        Cmd::Count { kind, from, to } => cmd_count(kind, &from, &to, &mut out),
        Cmd::Expand { kind, template, out: dest } => cmd_expand(kind, &template, dest.as_deref(), &mut out),
        Cmd::Verify { expansion, samples, max_size, seed } => cmd_verify(&expansion, samples, max_size, seed, &mut out),
        Cmd::Extract { expansion, input, oracle_cmd, self_test } => {
            cmd_extract(&expansion, &input, oracle_cmd, self_test, &mut out)
        }
        Cmd::Enumerate { signature, max_size } => cmd_enumerate(&signature, max_size, &mut out),
        Cmd::Matrices { signature, max_size } => cmd_matrices(&signature, max_size, &mut out),
    };
    out.flush().ok();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
