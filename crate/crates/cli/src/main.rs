//! `ltlab`: one entry point for every verification suite.
//!
//! Reports go to stdout as JSON (default) or CSV. The exit status tells a
//! refuted check (1) apart from bad input (2), a resource guard (3) and a
//! bug (4).

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use ltlab::cache::Cache;
use ltlab::congruence::verify_congruences;
use ltlab::formalmod::{verify_formal_module, TieBreak};
use ltlab::hypersurface::{brute_count, count_points, hermitian_count, Convention, HyperParams};
use ltlab::lfunc::{char_sum, char_sums_cached, conjecture_report, cyclotomic_json, zeta_consistency};
use ltlab::report::seconds;
use ltlab::skewpoly::symmetry_suite;
use ltlab::symbolic::{verify_identity, IDENTITIES};
use ltlab::Error;

use output::{Format, Rendered};

#[derive(Parser, Debug)]
#[command(name = "ltlab", version, about = "Exact checks on the level-two Lubin-Tate hypersurface")]
struct Cli {
    /// Worker threads for the parallel enumerations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Result cache directory; LTLAB_CACHE takes precedence.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Shape {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    h: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConventionArg {
    Full,
    ArtinSchreier,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Full => Convention::Full,
            ConventionArg::ArtinSchreier => Convention::ArtinSchreier,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TieArg {
    Least,
    Greatest,
}

impl From<TieArg> for TieBreak {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Least => TieBreak::Least,
            TieArg::Greatest => TieBreak::Greatest,
        }
    }
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// #X(F_{q^{hn}}) by the trace criterion, or by brute force.
    Count {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        brute: bool,
        #[arg(long, value_enum, default_value_t = ConventionArg::Full)]
        convention: ConventionArg,
    },
    /// Character sums S_n(psi_lambda).
    Charsum {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: u32,
        /// `all`, `primitive`, or comma-separated base-p digits of lambda.
        #[arg(long, default_value = "all")]
        lambda: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::Full)]
        convention: ConventionArg,
    },
    /// S_1..S_N against the closed form on every primitive lambda.
    Conjecture {
        #[command(flatten)]
        shape: Shape,
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long, default_value = "all")]
        lambda: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::Full)]
        convention: ConventionArg,
    },
    /// sum over lambda of S_n against the point count.
    Zeta {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = ConventionArg::Full)]
        convention: ConventionArg,
    },
    /// The exact polynomial identities.
    Identities {
        #[command(flatten)]
        shape: Shape,
        /// Check only this identity.
        #[arg(long)]
        identity: Option<String>,
    },
    /// Sampled checks of the determinant form on the formal module.
    FormalVerify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        residue_degree: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sampled congruences around the canonical point.
    CongruenceVerify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        residue_degree: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TieArg::Least)]
        tie: TieArg,
    },
    /// Invariance of X under H-translation and the twisted unit group.
    Symmetry {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: u32,
    },
    /// #X(F_{q^{2n}}) = q * #{y^q + y = v^{q+1}} for h = 2, both sides by
    /// enumeration.
    Hermitian {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
    },
}

/// What a cache entry holds: the exact bytes printed and the verdict.
#[derive(Serialize, Deserialize)]
struct Stored {
    ok: bool,
    output: String,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::VerificationFailed(_) => 1,
        Error::InvalidArgument(_) | Error::FieldMismatch(_) | Error::PrecisionTooLow(_) => 2,
        Error::GuardExceeded { .. } | Error::ResidueUnsolvable { .. } => 3,
        Error::NotInvertible(_) | Error::LiftFailed(_) | Error::Io(_) | Error::Internal(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(ok) => ExitCode::from(if ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("ltlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> ltlab::Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    let cache = Cache::from_env_or(cli.cache_dir.as_deref())?;
    // the thread count never changes a result, so it stays out of the key
    let key = serde_json::to_string(&json!({
        "version": env!("CARGO_PKG_VERSION"),
        "format": cli.format,
        "command": cli.command,
    }))?;
    if let Some(hit) = cache.as_ref().and_then(|c| c.get::<Stored>(&key)) {
        print!("{}", hit.output);
        return Ok(hit.ok);
    }
    let rendered = dispatch(&cli.command, cli.format, cache.as_ref())?;
    let output = rendered.text()?;
    if let Some(c) = &cache {
        c.put(&key, &Stored { ok: rendered.ok, output: output.clone() })?;
    }
    print!("{output}");
    Ok(rendered.ok)
}

fn dispatch(cmd: &Command, format: Format, cache: Option<&Cache>) -> ltlab::Result<Rendered> {
    match cmd {
        Command::Count { shape, n, brute, convention } => {
            let params = HyperParams::new(shape.q, shape.h, *n)?;
            let start = Instant::now();
            let (count, method) = if *brute {
                (brute_count(&params, (*convention).into())?, "brute")
            } else {
                (count_points(&params)?, "trace")
            };
            let report = json!({
                "q": shape.q, "h": shape.h, "n": n, "count": count,
                "method": method, "seconds": seconds(start.elapsed()),
            });
            Rendered::build(format, true, &report, output::count_rows)
        }
        Command::Charsum { shape, n, lambda, convention } => {
            let params = HyperParams::new(shape.q, shape.h, *n)?;
            let conv: Convention = (*convention).into();
            let records = match lambda.as_str() {
                "all" => char_sums_cached(&params, conv, cache)?,
                "primitive" => char_sums_cached(&params, conv, cache)?
                    .into_iter()
                    .filter(|r| r.primitive)
                    .collect(),
                digits => {
                    let field = params.char_field()?;
                    let l = field.from_digits(&parse_digits(digits)?)?;
                    vec![char_sum(&params, l, conv)?]
                }
            };
            let report = json!({
                "q": shape.q, "h": shape.h, "n": n, "convention": conv,
                "records": records.iter().map(|r| json!({
                    "lambda": r.lambda, "primitive": r.primitive, "S": cyclotomic_json(&r.value),
                })).collect::<Vec<_>>(),
            });
            Rendered::build(format, true, &report, output::charsum_rows)
        }
        Command::Conjecture { shape, big_n, lambda, convention } => {
            let mut report = conjecture_report(shape.q, shape.h, *big_n, (*convention).into(), cache)?;
            match lambda.as_str() {
                "all" => {}
                "primitive" => report.per_lambda.retain(|r| r.primitive),
                digits => {
                    let want = parse_digits(digits)?;
                    let field = HyperParams::new(shape.q, shape.h, 1)?.char_field()?;
                    let want = field.digits(field.from_digits(&want)?);
                    report.per_lambda.retain(|r| r.lambda == want);
                }
            }
            report.all_match = report.per_lambda.iter().all(|r| r.matches != Some(false));
            let ok = report.all_match;
            Rendered::build(format, ok, &report, output::conjecture_rows)
        }
        Command::Zeta { shape, n, convention } => {
            let report = zeta_consistency(shape.q, shape.h, *n, (*convention).into())?;
            Rendered::build(format, report.consistent, &report, output::flat_row)
        }
        Command::Identities { shape, identity } => {
            let names: Vec<&str> = match identity {
                Some(name) => vec![name.as_str()],
                None => IDENTITIES.to_vec(),
            };
            let reports = names
                .iter()
                .map(|name| verify_identity(name, shape.q, shape.h))
                .collect::<ltlab::Result<Vec<_>>>()?;
            let ok = reports.iter().all(|r| r.holds);
            let report = json!({"q": shape.q, "h": shape.h, "identities": reports, "all_hold": ok});
            Rendered::build(format, ok, &report, output::identity_rows)
        }
        Command::FormalVerify { shape, samples, prec, residue_degree, seed } => {
            let report = verify_formal_module(shape.q, shape.h, *samples, *prec, *residue_degree, *seed)?;
            Rendered::build(format, report.all_pass, &report, output::formal_rows)
        }
        Command::CongruenceVerify { shape, samples, prec, residue_degree, seed, tie } => {
            let report =
                verify_congruences(shape.q, shape.h, *samples, *prec, *residue_degree, *seed, (*tie).into())?;
            Rendered::build(format, report.all_pass, &report, output::congruence_rows)
        }
        Command::Symmetry { shape, n } => {
            let report = symmetry_suite(shape.q, shape.h, *n)?;
            let ok = report.preserved && report.action_law_holds && report.center_matches_translation;
            Rendered::build(format, ok, &report, output::flat_row)
        }
        Command::Hermitian { q, n } => {
            let params = HyperParams::new(*q, 2, *n)?;
            let surface = brute_count(&params, Convention::Full)?;
            let curve = hermitian_count(*q, *n)?;
            let holds = surface == *q as u64 * curve;
            let report = json!({
                "q": q, "n": n, "surface_points": surface, "curve_points": curve,
                "q_times_curve": *q as u64 * curve, "holds": holds,
            });
            Rendered::build(format, holds, &report, output::flat_row)
        }
    }
}

fn parse_digits(s: &str) -> ltlab::Result<Vec<u32>> {
    s.split(',')
        .map(|d| {
            d.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("lambda must be all, primitive or digits like 1,0; got {s:?}")))
        })
        .collect()
}
