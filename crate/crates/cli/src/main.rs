use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use collatz_cli::render::{render, MatrixKind, RenderFormat, RenderRequest};
use collatz_cli::scan::{run_scan, ScanConfig, DEFAULT_BLOCK};
use collatz_cli::tables::{build_table, TableFormat};
use collatz_cli::verify::{run_verify, Suite, Verdict, VerifyRequest};
use collatz_cli::{info, CliError, CliResult, EXIT_IO, EXIT_USAGE, EXIT_VIOLATION};
use collatz_matrix::AlgoParam;

#[derive(Debug, Parser)]
#[command(
    name = "collatz-matrix",
    version,
    about = "Collatz matrices of the maps n/2 | a·n + 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InfoFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Standard, little and big matrix shapes.
    Shape {
        a: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: InfoFormat,
    },
    /// Annotated matrix: K knot, P perfect knot, U unbranched row, A axis.
    Render {
        a: u64,
        #[arg(long, value_enum)]
        matrix: MatrixKind,
        /// Rows to show; required for the tree matrix.
        #[arg(long)]
        rows: Option<u64>,
        /// Columns to show; required for the tree matrix.
        #[arg(long)]
        cols: Option<u64>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: RenderFormat,
        /// ANSI colors instead of marker letters.
        #[arg(long)]
        color: bool,
    },
    /// Symmetry label, pattern flags and number class.
    Classify {
        a: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: InfoFormat,
    },
    /// Rank (m_C - 1)/n_C and the criterion verdict.
    Rank {
        a: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: InfoFormat,
    },
    /// One JSON line per odd a in [from, to].
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        out: PathBuf,
        /// Resume from and update this checkpoint.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Odd values of a per checkpoint block.
        #[arg(long, default_value_t = DEFAULT_BLOCK)]
        block: u64,
        /// Stop after this many blocks (simulated interruption).
        #[arg(long, hide = true)]
        max_blocks: Option<u64>,
    },
    /// Reference table 1 to 5.
    Table {
        id: u8,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Run a verification suite; exit 2 on any violation.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        bound: Option<u64>,
        /// Shape checks bound (invariants suite).
        #[arg(long, default_value_t = 100_000)]
        shape_bound: u64,
        /// Big-window checks bound (invariants suite).
        #[arg(long, default_value_t = 25)]
        big_bound: u64,
        #[arg(long)]
        json: bool,
    },
}

fn param(a: u64) -> CliResult<AlgoParam> {
    AlgoParam::new(a).map_err(|e| CliError::Usage(e.to_string()))
}

fn print(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Shape { a, format } => {
            print(&info::shape_report(param(a)?, format == InfoFormat::Json)?)?
        }
        Command::Classify { a, format } => print(&info::classify_report(
            param(a)?,
            format == InfoFormat::Json,
        )?)?,
        Command::Rank { a, format } => {
            print(&info::rank_report(param(a)?, format == InfoFormat::Json)?)?
        }
        Command::Render {
            a,
            matrix,
            rows,
            cols,
            format,
            color,
        } => print(&render(&RenderRequest {
            a: param(a)?,
            matrix,
            rows,
            cols,
            format,
            color,
        })?)?,
        Command::Table { id, bound, format } => print(&build_table(id, bound)?.render(format)?)?,
        Command::Scan {
            from,
            to,
            out,
            checkpoint,
            workers,
            block,
            max_blocks,
        } => {
            let outcome = run_scan(&ScanConfig {
                from,
                to,
                out,
                checkpoint,
                workers,
                block,
                max_blocks,
            })?;
            let counts: Vec<String> = outcome
                .aggregates
                .class_counts
                .iter()
                .map(|(k, v)| format!("{k} {v}"))
                .collect();
            eprintln!(
                "scan [{}, {}]: {} records ({}), {} block(s) this run{}{}",
                outcome.from,
                outcome.to,
                outcome.aggregates.records,
                counts.join(", "),
                outcome.blocks_this_run,
                outcome
                    .resumed_at
                    .map_or(String::new(), |a| format!(", resumed at a = {a}")),
                if outcome.complete {
                    ""
                } else {
                    ", stopped early"
                },
            );
        }
        Command::Verify {
            suite,
            bound,
            shape_bound,
            big_bound,
            json,
        } => {
            let report = run_verify(&VerifyRequest {
                suite,
                bound,
                shape_bound,
                big_bound,
                json,
            })?;
            print(&report.text)?;
            return Ok(match report.verdict {
                Verdict::Passed => ExitCode::SUCCESS,
                Verdict::Violations(_) => ExitCode::from(EXIT_VIOLATION),
                Verdict::Incomplete => ExitCode::from(EXIT_IO),
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
