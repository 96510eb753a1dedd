//! `lastsq` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or range error,
//! 3 class/domain precondition violation.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arrangements::{DominoArrangement, Parity, SignClass, SquareArrangement};
use crate::bijections::{
    board_to_domino, conjugate, domino_to_board, domino_to_square, square_to_domino, ConjugationOutcome,
    MarkedColoredBoard,
};
use crate::enumeration::{ClassFilter, Enumerator, Family};
use crate::formulas::{eval_t, SumName};
use crate::verify::{AuxLimits, Limits, Summary, VerificationReport, Verifier};
use crate::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "lastsq", version, about = "Tiling bijections and binomial-sum identities, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one of the sums S, T, U, V, W (S takes m, the others n).
    Compute { sum: String, size: usize, r: usize },
    /// Print the table of T(n, r) for n = 1..=N.
    Table {
        n_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Plain)]
        format: TableFormat,
    },
    /// List or count arrangements of family D or B.
    Enumerate(EnumerateArgs),
    /// Apply one of the bijections to an encoded arrangement.
    Biject {
        #[arg(value_enum)]
        map: MapName,
        input: String,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Plain,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MapName {
    Prop1,
    #[value(name = "prop1-inv")]
    Prop1Inv,
    Prop5,
    #[value(name = "prop5-inv")]
    Prop5Inv,
    Conjugate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Theorem,
    Lemma,
    Strata,
    Bijections,
    Auxiliary,
    All,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// D (dominoes) or B (squares).
    family: String,
    /// Board length: cells m for D, squares n for B.
    size: usize,
    /// Number of dominoes (D) or black squares (B).
    r: usize,
    /// Keep only one sign class.
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    /// Keep only arrangements whose weight has this parity (B only).
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Keep only arrangements of exactly this weight (B only).
    #[arg(long)]
    weight: Option<usize>,
    /// Print one encoded arrangement per line instead of the count.
    #[arg(long, conflicts_with = "count")]
    list: bool,
    /// Print the number of matching arrangements (the default).
    #[arg(long)]
    count: bool,
    /// Print an ASCII diagram next to each listed arrangement.
    #[arg(long)]
    render: bool,
    /// Worker threads for the enumeration.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Largest m for the formula agreement checks.
    #[arg(long, default_value_t = 200)]
    mmax: usize,
    /// Largest m whose D arrangements are enumerated against the formulas.
    #[arg(long, default_value_t = 16)]
    enum_limit: usize,
    /// Largest n for the conjugation and strata suites.
    #[arg(long, default_value_t = 14)]
    nmax: usize,
    /// Largest m for the bijection suite.
    #[arg(long, default_value_t = 16)]
    bijection_mmax: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Plain)]
    format: ReportFormat,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotPlusClass | Error::OutsideDomain => EXIT_PRECONDITION,
        Error::InternalInvariantViolation(_) | Error::NonIntegralResult(_) => EXIT_VERIFY_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Compute { sum, size, r } => compute(&sum, size, r, out),
        Command::Table { n_max, format } => table(n_max, format, out),
        Command::Enumerate(args) => enumerate(&args, out),
        Command::Biject { map, input } => biject(map, &input, out),
        Command::Verify(args) => verify(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

type CmdResult = crate::Result<u8>;

fn emit(out: &mut dyn Write, line: &str) {
    // A closed pipe is not an error worth reporting.
    let _ = writeln!(out, "{line}");
}

fn compute(sum: &str, size: usize, r: usize, out: &mut dyn Write) -> CmdResult {
    let value = sum.parse::<SumName>()?.eval(size, r)?;
    emit(out, &value.to_string());
    Ok(EXIT_OK)
}

/// Rows of the T table as strings; row `n` holds `T(n, 0..n)`.
fn table_rows(n_max: usize) -> crate::Result<Vec<Vec<String>>> {
    (1..=n_max).map(|n| (0..n).map(|r| eval_t(n, r).map(|v| v.to_string())).collect()).collect()
}

pub fn table_csv(n_max: usize) -> crate::Result<String> {
    let mut s = String::from("n\\r");
    for r in 0..n_max {
        s.push_str(&format!(",{r}"));
    }
    s.push('\n');
    for (i, row) in table_rows(n_max)?.iter().enumerate() {
        s.push_str(&(i + 1).to_string());
        for v in row {
            s.push(',');
            s.push_str(v);
        }
        s.push('\n');
    }
    Ok(s)
}

fn table_plain(n_max: usize) -> crate::Result<String> {
    let rows = table_rows(n_max)?;
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1).max(n_max.to_string().len());
    let label = n_max.to_string().len().max(3);
    let mut s = format!("{:>label$} |", "n\\r");
    for r in 0..n_max {
        s.push_str(&format!(" {r:>width$}"));
    }
    s.push('\n');
    for (i, row) in rows.iter().enumerate() {
        s.push_str(&format!("{:>label$} |", i + 1));
        for v in row {
            s.push_str(&format!(" {v:>width$}"));
        }
        s.push('\n');
    }
    Ok(s)
}

fn table(n_max: usize, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    if n_max < 1 {
        return Err(Error::Range("table needs n_max >= 1".into()));
    }
    let text = match format {
        TableFormat::Csv => table_csv(n_max)?,
        TableFormat::Plain => table_plain(n_max)?,
    };
    let _ = out.write_all(text.as_bytes());
    Ok(EXIT_OK)
}

fn enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let family: Family = args.family.parse()?;
    let filter = ClassFilter {
        sign: args.sign.map(|s| match s {
            SignArg::Plus => SignClass::Plus,
            SignArg::Minus => SignClass::Minus,
        }),
        weight_parity: args.parity.map(|p| match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }),
        exact_weight: args.weight,
    };
    let enumerator = Enumerator::new().with_jobs(args.jobs);
    let listing = args.list || args.render;
    if !listing {
        emit(out, &enumerator.count(family, args.size, args.r, &filter)?.to_string());
        return Ok(EXIT_OK);
    }
    let lines: Vec<String> = match family {
        Family::Domino => enumerator
            .domino(args.size, args.r, &filter)?
            .iter()
            .map(|a| listing_line(a.encode(), a.render_ascii(), args.render))
            .collect(),
        Family::Square => enumerator
            .square(args.size, args.r, &filter)?
            .iter()
            .map(|a| listing_line(a.encode(), a.render_ascii(), args.render))
            .collect(),
    };
    for line in lines {
        emit(out, &line);
    }
    Ok(EXIT_OK)
}

fn listing_line(encoding: String, diagram: String, render: bool) -> String {
    if render {
        format!("{encoding}  {diagram}")
    } else {
        encoding
    }
}

fn biject(map: MapName, input: &str, out: &mut dyn Write) -> CmdResult {
    let line = match map {
        MapName::Prop1 => board_to_domino(&MarkedColoredBoard::from_json(input)?)?.encode(),
        MapName::Prop1Inv => domino_to_board(&DominoArrangement::decode(input)?)?.to_json(),
        MapName::Prop5 => domino_to_square(&DominoArrangement::decode(input)?)?.encode(),
        MapName::Prop5Inv => square_to_domino(&SquareArrangement::decode(input)?)?.encode(),
        MapName::Conjugate => match conjugate(&SquareArrangement::decode(input)?)? {
            ConjugationOutcome::Conjugate(a) => a.encode(),
            ConjugationOutcome::Exceptional(e) => format!("EXCEPTIONAL {}", e.label()),
            ConjugationOutcome::OutsideDomain => return Err(Error::OutsideDomain),
        },
    };
    emit(out, &line);
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    if args.mmax < 2 || args.enum_limit < 1 || args.nmax < 1 || args.bijection_mmax < 1 {
        return Err(Error::Range("limits must be positive and --mmax at least 2".into()));
    }
    let verifier = if args.jobs == 0 { Verifier::new() } else { Verifier::with_jobs(args.jobs) };
    let limits = Limits {
        m_max: args.mmax,
        enum_limit: args.enum_limit,
        n_max: args.nmax,
        bijection_m: args.bijection_mmax,
        aux: AuxLimits::default(),
    };
    let reports = match args.suite {
        Suite::Theorem => verifier.theorem(limits.m_max, limits.enum_limit),
        Suite::Lemma => verifier.lemma(limits.n_max),
        Suite::Strata => verifier.strata(limits.n_max),
        Suite::Bijections => verifier.bijections(limits.bijection_m),
        Suite::Auxiliary => verifier.auxiliary(&limits.aux),
        Suite::All => verifier.all(&limits),
    };
    write_reports(&reports, args.format, out);
    let summary = Summary::of(&reports);
    Ok(if summary.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn write_reports(reports: &[VerificationReport], format: ReportFormat, out: &mut dyn Write) {
    let summary = Summary::of(reports);
    match format {
        ReportFormat::Plain => {
            for r in reports {
                emit(out, &r.to_plain());
            }
            emit(out, &summary.to_string());
        }
        ReportFormat::Json => {
            for r in reports {
                emit(out, &r.to_json());
            }
            let s = serde_json::json!({
                "summary": { "pass": summary.pass, "fail": summary.fail, "skipped": summary.skipped }
            });
            emit(out, &s.to_string());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["lastsq"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_examples() {
        assert_eq!(run_cli(&["compute", "T", "10", "4"]).1, "5503\n");
        assert_eq!(run_cli(&["compute", "S", "2", "0"]).1, "1\n");
        assert_eq!(run_cli(&["compute", "W", "9", "2"]).1, "2815\n");
        assert_eq!(run_cli(&["compute", "T", "3", "3"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["compute", "X", "3", "1"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["compute", "T", "three", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn table_rows_match_published_values() {
        let csv = table_csv(10).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n\\r,0,1,2,3,4,5,6,7,8,9");
        assert_eq!(lines[1], "1,1");
        assert_eq!(lines[5], "5,31,49,31,9,1");
        assert!(lines[10].ends_with(",161,19,1"));
        assert_eq!(run_cli(&["table", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(run_cli(&["enumerate", "B", "2", "0", "--count", "--sign", "plus"]).1, "3\n");
        assert_eq!(run_cli(&["enumerate", "D", "4", "1", "--list", "--sign", "plus"]).1, "bdw\n");
        assert_eq!(run_cli(&["enumerate", "B", "4", "1", "--count"]).1, "24\n");
        assert_eq!(run_cli(&["enumerate", "B", "17", "1", "--count"]).0, EXIT_USAGE);
        let (code, out, _) = run_cli(&["enumerate", "B", "2", "1", "--render"]);
        assert_eq!(code, 0);
        assert_eq!(out, "bt  [#][^]\nbw  [#][ ]\n");
    }

    #[test]
    fn biject_examples() {
        assert_eq!(run_cli(&["biject", "prop5", "bdw"]).1, "bt\n");
        assert_eq!(run_cli(&["biject", "prop5-inv", "bt"]).1, "bdw\n");
        assert_eq!(run_cli(&["biject", "conjugate", "bwbt"]).1, "tbbw\n");
        assert_eq!(run_cli(&["biject", "conjugate", "bt"]).1, "EXCEPTIONAL epsilon+\n");
        assert_eq!(run_cli(&["biject", "conjugate", "www"]).1, "EXCEPTIONAL epsilon-\n");
        assert_eq!(run_cli(&["biject", "prop1-inv", "bdw"]).1, "{\"m\":4,\"chosen\":[1,2,3,4],\"marks\":[1]}\n");
        assert_eq!(run_cli(&["biject", "prop1", r#"{"m":4,"chosen":[1,2,3,4],"marks":[1]}"#]).1, "bdw\n");
        assert_eq!(run_cli(&["biject", "prop5", "bb"]).0, EXIT_PRECONDITION);
        assert_eq!(run_cli(&["biject", "conjugate", "tw"]).0, EXIT_PRECONDITION);
        assert_eq!(run_cli(&["biject", "prop5", "bxw"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["biject", "nope", "bdw"]).0, EXIT_USAGE);
    }

    #[test]
    fn verify_small_suites() {
        let (code, out, _) = run_cli(&["verify", "lemma", "--nmax", "5", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let last = out.lines().last().unwrap();
        assert!(last.starts_with("{\"summary\""), "{last}");
        let (code, out, _) = run_cli(&["verify", "strata", "--nmax", "4"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.lines().any(|l| l.starts_with("SKIP strata.V n=3 r=0")));
        assert_eq!(run_cli(&["verify", "theorem", "--mmax", "1"]).0, EXIT_USAGE);
    }
}
