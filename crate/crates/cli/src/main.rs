//! `divkl`: per-n values, sequence scans, claim verification, tables and plots.
//!
//! Exit status: 0 success, 1 usage error, 2 verification failure (a proved
//! claim was violated), 3 resource or I/O error, 130 interrupted.

mod plot;
mod render;

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};

use divkl::sequences::{
    checkpoint_load_path, checkpoint_save_atomic, render_csv_row, render_json_row, B1Class, ScanOptions,
    Scanner, SequenceId, CSV_HEADER,
};
use divkl::verify;
use divkl::{Error, ScanContext};

static INTERRUPTED: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "divkl", version, about = "Divergence of divisor distributions: values, sequences, claim checks")]
struct Cli {
    /// Significant digits for printed reals.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(6..=17))]
    digits: u8,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Arithmetic and divergence values of one n.
    Compute(ComputeArgs),
    /// Deficiency, primitivity and KL sign of each n.
    Classify(ClassifyArgs),
    /// Record-setter scan of one sequence, with optional checkpointing.
    Scan(ScanArgs),
    /// Check registered claims over a range.
    Verify(VerifyArgs),
    /// Print a sequence as a table.
    Table(TableArgs),
    /// Scatter data and SVG plots of KL(n) against h(n).
    Plot(PlotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct ComputeArgs {
    n: u64,
    #[arg(long)]
    phi: bool,
    #[arg(long)]
    sigma: bool,
    #[arg(long)]
    tau: bool,
    /// Radical R(n).
    #[arg(long)]
    radical: bool,
    /// Abundancy σ(n)/n.
    #[arg(long)]
    h: bool,
    /// Totient index n/φ(n).
    #[arg(long = "big-h")]
    big_h: bool,
    /// Surplus H(n) − 2.
    #[arg(long)]
    s: bool,
    /// S(n)·√n.
    #[arg(long)]
    g: bool,
    #[arg(long)]
    kl: bool,
    #[arg(long)]
    v: bool,
    /// Pillai's function.
    #[arg(long)]
    pi: bool,
    /// Every value (default when no value is selected).
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(required = true)]
    n: Vec<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum B1ClassArg {
    OddNonDeficient,
    OddPositiveSurplus,
}

impl From<B1ClassArg> for B1Class {
    fn from(c: B1ClassArg) -> Self {
        match c {
            B1ClassArg::OddNonDeficient => B1Class::OddNonDeficient,
            B1ClassArg::OddPositiveSurplus => B1Class::OddPositiveSurplus,
        }
    }
}

#[derive(Args)]
struct ScanArgs {
    /// B1, B2, T, To or KLPrim.
    sequence: SequenceId,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    limit: u64,
    /// Restrict T to odd n (same as To).
    #[arg(long)]
    odd_only: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write rows here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Save scan state here after every block.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from --checkpoint.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Comparison class for B1 records.
    #[arg(long, value_enum, default_value = "odd-non-deficient")]
    b1_class: B1ClassArg,
    /// Numbers per parallel block.
    #[arg(long, default_value_t = divkl::sequences::DEFAULT_BLOCK_SIZE, value_parser = clap::value_parser!(u64).range(1..))]
    block_size: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Glob over claim ids; repeatable or comma-separated (default: all).
    #[arg(long, value_delimiter = ',')]
    claims: Vec<String>,
    /// Start of the range.
    #[arg(long, default_value_t = 1)]
    from: u64,
    /// End of the range (inclusive).
    #[arg(long, required_unless_present = "list", value_parser = clap::value_parser!(u64).range(1..))]
    limit: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// List registered claims and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct TableArgs {
    /// T, To, B1, B2 or KLPrim.
    table: SequenceId,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    limit: u64,
    #[arg(long)]
    odd_only: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    limit: u64,
    /// Directory for the CSV and SVG files.
    #[arg(long, default_value = ".")]
    output: PathBuf,
}

enum Failure {
    Core(Error),
    Usage(String),
    Verification,
    Interrupted,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match &f {
                Failure::Usage(m) => {
                    eprintln!("error: {m}");
                    1
                }
                Failure::Core(e) => {
                    eprintln!("error: {e}");
                    match e {
                        Error::Resource { .. } | Error::Io(_) => 3,
                        _ => 1,
                    }
                }
                Failure::Verification => 2,
                Failure::Interrupted => {
                    eprintln!("interrupted");
                    130
                }
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let digits = cli.digits as usize;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Compute(a) => cmd_compute(&a, digits, &mut out)?,
        Command::Classify(a) => cmd_classify(&a, &mut out)?,
        Command::Scan(a) => cmd_scan(&a, digits, &mut out)?,
        Command::Verify(a) => cmd_verify(&a, digits, &mut out)?,
        Command::Table(a) => cmd_table(&a, digits, &mut out)?,
        Command::Plot(a) => cmd_plot(&a, digits, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn require_format(f: Format, allowed: &[Format], what: &str) -> CmdResult {
    if allowed.contains(&f) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("this output format is not available for {what}")))
    }
}

fn cmd_compute(a: &ComputeArgs, digits: usize, out: &mut impl Write) -> CmdResult {
    require_format(a.format, &[Format::Text, Format::Json], "compute")?;
    if a.n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let f = divkl::factorize(a.n, None)?;
    let picked = [a.phi, a.sigma, a.tau, a.radical, a.h, a.big_h, a.s, a.g, a.kl, a.v, a.pi];
    let all = a.all || !picked.iter().any(|&b| b);
    let names = ["phi", "sigma", "tau", "radical", "h", "big_h", "s", "g", "kl", "v", "pi"];
    let wanted: Vec<&str> = names
        .iter()
        .zip(picked)
        .filter(|&(_, p)| all || p)
        .map(|(&n, _)| n)
        .collect();
    let values = render::compute_values(&f, &wanted)?;
    match a.format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = values
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_json(digits)))
                .collect();
            let obj = serde_json::json!({ "n": a.n, "values": map });
            writeln!(out, "{obj}")?;
        }
        _ => {
            for (k, v) in &values {
                writeln!(out, "{k} {}", v.to_text(digits))?;
            }
        }
    }
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs, out: &mut impl Write) -> CmdResult {
    require_format(a.format, &[Format::Text, Format::Json], "classify")?;
    if a.n.contains(&0) {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let rows = a
        .n
        .iter()
        .map(|&n| divkl::classify::classify(&divkl::factorize(n, None)?))
        .collect::<divkl::Result<Vec<_>>>()?;
    render::write_classifications(&rows, a.format == Format::Json, out)?;
    Ok(())
}

fn effective_sequence(id: SequenceId, odd_only: bool) -> Result<SequenceId, Failure> {
    match (id, odd_only) {
        (SequenceId::T, true) => Ok(SequenceId::To),
        (id, false) => Ok(id),
        (SequenceId::To, true) => Ok(SequenceId::To),
        _ => Err(Failure::Usage("--odd-only applies to T only".into())),
    }
}

fn cmd_scan(a: &ScanArgs, digits: usize, stdout: &mut impl Write) -> CmdResult {
    require_format(a.format, &[Format::Csv, Format::Json], "scan")?;
    let seq = effective_sequence(a.sequence, a.odd_only)?;
    let json = a.format == Format::Json;
    let ctx = ScanContext::new(a.limit, seq.needs_kl())?;

    let mut scanner = if a.resume {
        let path = a.checkpoint.as_deref().expect("clap requires --checkpoint");
        let cp = checkpoint_load_path(path)?;
        if cp.sequence_id != seq {
            return Err(Failure::Usage(format!(
                "checkpoint is for {}, not {seq}",
                cp.sequence_id
            )));
        }
        if cp.b1_class != B1Class::from(a.b1_class) {
            return Err(Failure::Usage("checkpoint was written with a different --b1-class".into()));
        }
        Scanner::resume(&ctx, &cp, a.block_size)?
    } else {
        Scanner::new(
            &ctx,
            seq,
            ScanOptions {
                b1_class: a.b1_class.into(),
                block_size: a.block_size,
            },
        )?
    };

    let mut file_out;
    let sink: &mut dyn Write = match &a.output {
        Some(path) => {
            file_out = if a.resume {
                let keep = scanner.checkpoint().entries_emitted as usize + usize::from(!json);
                BufWriter::new(truncate_to_lines(path, keep)?)
            } else {
                BufWriter::new(File::create(path)?)
            };
            &mut file_out
        }
        None => stdout,
    };
    if !json && !(a.resume && a.output.is_some()) {
        writeln!(sink, "{CSV_HEADER}")?;
    }

    // A second Ctrl-C while the handler is installed still only sets the flag;
    // the scan stops at the next block boundary.
    let _ = ctrlc::set_handler(|| INTERRUPTED.store(true, Ordering::SeqCst));
    let checkpoint = a.checkpoint.clone();
    scanner.run(a.limit, |entries, cp| {
        for e in entries {
            let row = if json {
                render_json_row(e, digits)
            } else {
                render_csv_row(e, digits)
            };
            writeln!(sink, "{row}")?;
        }
        sink.flush()?;
        if let Some(p) = &checkpoint {
            checkpoint_save_atomic(cp, p)?;
        }
        Ok(!INTERRUPTED.load(Ordering::SeqCst))
    })?;
    sink.flush()?;
    if INTERRUPTED.load(Ordering::SeqCst) && scanner.scanned_up_to() < a.limit {
        return Err(Failure::Interrupted);
    }
    Ok(())
}

/// Keeps the first `keep` lines of `path` and reopens it for appending.
fn truncate_to_lines(path: &Path, keep: usize) -> io::Result<File> {
    let mut kept = Vec::new();
    if path.exists() {
        let reader = BufReader::new(File::open(path)?);
        for line in reader.lines().take(keep) {
            kept.push(line?);
        }
    }
    let mut text = kept.join("\n");
    if !kept.is_empty() {
        text.push('\n');
    }
    fs::write(path, text)?;
    OpenOptions::new().append(true).open(path)
}

fn cmd_verify(a: &VerifyArgs, digits: usize, out: &mut impl Write) -> CmdResult {
    require_format(a.format, &[Format::Text, Format::Json], "verify")?;
    if a.list {
        for c in verify::registry() {
            writeln!(out, "{:<24} {:<15?} {}", c.id, c.kind, c.statement)?;
        }
        return Ok(());
    }
    let limit = a.limit.expect("clap requires --limit without --list");
    let needs_kl = verify::needs_kl(&a.claims)?;
    let ctx = ScanContext::new(limit, needs_kl)?;
    let reports = verify::verify_all(&ctx, a.from, limit, &a.claims)?;
    match a.format {
        Format::Json => {
            for r in &reports {
                writeln!(out, "{}", serde_json::to_string(r).expect("report serializes"))?;
            }
        }
        _ => write!(out, "{}", verify::render_text(&reports, digits))?,
    }
    out.flush()?;
    if verify::any_failure(&reports) {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn cmd_table(a: &TableArgs, digits: usize, out: &mut impl Write) -> CmdResult {
    require_format(a.format, &[Format::Text, Format::Csv, Format::Json], "table")?;
    let seq = effective_sequence(a.table, a.odd_only)?;
    let entries = divkl::sequences::scan(seq, a.limit, ScanOptions::default())?;
    match a.format {
        Format::Csv => divkl::sequences::write_csv(&entries, digits, true, &mut *out)?,
        Format::Json => divkl::sequences::write_jsonl(&entries, digits, &mut *out)?,
        _ => render::write_table_text(seq, &entries, digits, out)?,
    }
    Ok(())
}

fn cmd_plot(a: &PlotArgs, digits: usize, out: &mut impl Write) -> CmdResult {
    fs::create_dir_all(&a.output)?;
    let written = plot::write_all(a.limit, &a.output, digits)?;
    for p in written {
        writeln!(out, "{}", p.display())?;
    }
    Ok(())
}
