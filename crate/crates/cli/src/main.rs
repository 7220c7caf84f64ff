use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hochex::{
    dual_hh2_basis, homology_table, oracle_report, slice_basis, theorem44_verdict, verify, Error, FieldSpec, Scalar,
    TruncatedAlgebra,
};

/// Second Hochschild homology of truncated cyclic quiver algebras and the
/// Gabriel quivers of the Hochschild extensions it produces.
#[derive(Parser, Debug)]
#[command(name = "hochex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of dim HH_{2,q}(A) for q = 1..2n, computed and by closed form.
    Homology(Common),
    /// Build the cocycle for a degree-q class and report the quiver of T_α(A).
    Extend(ExtendArgs),
    /// Run the full consistency sweep for one algebra.
    Verify(VerifyArgs),
    /// Cross-check against the bar complex (dim A ≤ 12).
    Oracle(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Number of vertices s of the cyclic quiver.
    #[arg(long, short = 's', value_parser = clap::value_parser!(u64).range(1..))]
    vertices: u64,
    /// Truncation n: paths of length n and longer vanish.
    #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(2..))]
    truncation: u64,
    /// Characteristic of the ground field: 0 for the rationals, or a prime.
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ExtendArgs {
    #[command(flatten)]
    common: Common,
    /// Homological grading q of the class; s must divide q and n ≤ q ≤ 2n−1.
    #[arg(long, short = 'q')]
    degree: usize,
    /// Comma-separated coefficients (integers or fractions) of the class,
    /// positional in the order of the class basis printed by this command.
    /// Defaults to all ones.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Seed for the symmetric-form search and the arrow-image search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random forms tried before falling back to exhaustive enumeration.
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(anyhow::Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => {
                eprintln!("error: internal consistency check failed: {e}");
                Failure::Check
            }
            other => Failure::Usage(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<bool, Failure>;

impl Common {
    fn algebra(&self) -> Result<TruncatedAlgebra, Failure> {
        let field = FieldSpec::new(self.characteristic)?;
        Ok(TruncatedAlgebra::cyclic(self.vertices as usize, self.truncation as usize, field)?)
    }
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn describe(a: &TruncatedAlgebra) -> String {
    format!(
        "A = K[{}-cycle]/R^{} over {} (dim {})",
        a.quiver().vertex_count(),
        a.truncation(),
        a.field(),
        a.dim()
    )
}

#[derive(Serialize)]
struct HomologyReport {
    schema: u32,
    s: usize,
    n: usize,
    char: u64,
    rows: Vec<hochex::HomologyRow>,
    all_match: bool,
}

fn homology(args: &Common) -> Outcome {
    let a = args.algebra()?;
    let rows = homology_table(&a)?;
    let all_match = rows.iter().all(|r| r.matches);
    match args.format {
        Format::Json => print_json(&HomologyReport {
            schema: 1,
            s: a.quiver().vertex_count(),
            n: a.truncation(),
            char: a.field().characteristic(),
            rows,
            all_match,
        })?,
        Format::Text => {
            println!("{}", describe(&a));
            println!("{:>4} {:>6} {:>8}  match", "q", "dim", "formula");
            for r in &rows {
                println!("{:>4} {:>6} {:>8}  {}", r.q, r.dim, r.formula, if r.matches { "yes" } else { "NO" });
            }
        }
    }
    Ok(all_match)
}

fn extend(args: &ExtendArgs) -> Outcome {
    let a = args.common.algebra()?;
    let field = a.field();
    let (s, n, q) = (a.quiver().vertex_count(), a.truncation(), args.degree);
    let basis = dual_hh2_basis(&a, q)?;
    let coeffs: Vec<Scalar> = match &args.coeffs {
        Some(list) => list
            .iter()
            .map(|t| field.parse(t.trim()).with_context(|| format!("invalid coefficient '{t}'")))
            .collect::<anyhow::Result<_>>()?,
        None => vec![field.one(); basis.len()],
    };
    let report = theorem44_verdict(s, n, q, field, &coeffs)?;
    if report.zero_class {
        eprintln!("warning: the chosen coefficients give the zero class; T is the trivial extension up to equivalence");
    }
    match args.common.format {
        Format::Json => print_json(&report)?,
        Format::Text => {
            println!("{}, degree {q}", describe(&a));
            let slice = slice_basis(&a, 2, q)?;
            println!("class basis:");
            for (k, u) in basis.iter().enumerate() {
                let terms: Vec<String> =
                    u.coeffs.iter().map(|(i, c)| format!("{c}·({})*", slice.label(i))).collect();
                println!("  u{} = {}", k + 1, terms.join(" + "));
            }
            println!("coefficients: {}", report.coefficients.join(", "));
            println!("class is zero: {}", report.zero_class);
            println!("cocycle ({} nonzero values on basis pairs):", report.cocycle_text.len());
            for line in &report.cocycle_text {
                println!("  {line}");
            }
            if report.cocycle_text.is_empty() {
                println!("  (zero)");
            }
            println!("arrows of T: {}", report.quiver_counts.describe().join(", "));
            println!("verdict: {} (expected {})", report.verdict, report.expected);
            println!("radical image condition: {}", report.lemma42);
            println!("dim T: {}", report.dim_t);
        }
    }
    Ok(report.agrees())
}

fn verify_cmd(args: &VerifyArgs) -> Outcome {
    let a = args.common.algebra()?;
    let report = verify(a.quiver().vertex_count(), a.truncation(), a.field(), args.seed, args.samples)?;
    for c in report.failures() {
        eprintln!("FAILED {}: {}", c.name, c.detail);
    }
    match args.common.format {
        Format::Json => print_json(&report)?,
        Format::Text => {
            println!("{}", describe(&a));
            for c in &report.checks {
                println!("{} {:<40} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = report.failures().count();
            if failed == 0 {
                println!("PASS ({} checks)", report.checks.len());
            } else {
                println!("FAIL ({failed} of {} checks)", report.checks.len());
            }
        }
    }
    Ok(report.passed)
}

fn oracle(args: &Common) -> Outcome {
    let a = args.algebra()?;
    let report = oracle_report(&a)?;
    match args.format {
        Format::Json => print_json(&report)?,
        Format::Text => {
            println!("{}", describe(&a));
            println!("H²(A, D(A)) from bar cochains:  {}", report.h2_bar);
            println!("HH₂(A) from bar chains:         {}", report.hh2_bar);
            println!("Σ_q HH₂,q(A) from slices:       {}", report.hh2_skoldberg_sum);
            println!("agree: {}", if report.agree { "yes" } else { "NO" });
        }
    }
    Ok(report.agree)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HOCHEX_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("HOCHEX_THREADS must be a positive integer, got '{v}'"))?;
        anyhow::ensure!(n > 0, "HOCHEX_THREADS must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let outcome = match &cli.command {
        Command::Homology(c) => homology(c),
        Command::Extend(e) => extend(e),
        Command::Verify(v) => verify_cmd(v),
        Command::Oracle(c) => oracle(c),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
