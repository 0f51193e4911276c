use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fano_ext::bounds::{BoundReport, ComparisonProtocol};
use fano_ext::oracle::{DmcSpec, EnumerationBudget};
use fano_ext::parallel::{run_with_cap, thread_cap_from_env};
use fano_ext::sweep::{self, format_sig, CsvRecord, Grid};
use fano_ext::verify::{verify_channel, verify_qsc, VerifyMode};
use fano_ext::Error;

const EXIT_BAD_ARGS: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;
const EXIT_IO: u8 = 4;

/// Extended Fano bounds for finite-blocklength coding over q-ary symmetric channels.
#[derive(Parser)]
#[command(name = "fano-ext", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every bound for one (q, eps, n) configuration.
    Report {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the blocklength and write CSV.
    SweepN {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = sweep::DEFAULT_N_MIN)]
        n_min: usize,
        #[arg(long, default_value_t = sweep::DEFAULT_N_MAX)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the crossover probability and write CSV.
    SweepEps {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps_min: f64,
        #[arg(long)]
        eps_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = GridArg::Linear)]
        grid: GridArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compare oracle values against the formulas.
    Verify {
        #[arg(long, required_unless_present = "channel")]
        q: Option<u32>,
        #[arg(long, required_unless_present = "channel")]
        eps: Option<f64>,
        /// Plain-text transition matrix: "q" then q rows.
        #[arg(long, conflicts_with_all = ["q", "eps"])]
        channel: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::FullEnum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Maximum number of codeword pairs to enumerate.
        #[arg(long, default_value_t = EnumerationBudget::DEFAULT_MAX_PAIRS)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fraction of P_s / P_b used as the codebook error constraint.
    #[arg(long, default_value_t = ComparisonProtocol::DEFAULT_FRACTION)]
    eps_fraction: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Linear,
    Geometric,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    FullEnum,
    MonteCarlo,
}

enum Failure {
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = thread_cap_from_env()
        .map_err(Failure::from)
        .and_then(|cap| run_with_cap(cap, || run(cli)).map_err(Failure::from)?);
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(summary)) => {
            eprintln!("verification failed:\n{summary}");
            ExitCode::from(EXIT_VERIFY_FAILED)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let code = match &e {
                Error::Io(_) => EXIT_IO,
                Error::Csv(c) if c.is_io_error() => EXIT_IO,
                _ => EXIT_BAD_ARGS,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Report { q, eps, n, common } => {
            let protocol = ComparisonProtocol::new(common.eps_fraction)?;
            let report = BoundReport::for_qsc(n, q, eps, &protocol)?;
            with_output(common.out.as_deref(), |w| write_report(w, &report))
        }
        Command::SweepN {
            q,
            eps,
            n_min,
            n_max,
            n_step,
            common,
        } => {
            let protocol = ComparisonProtocol::new(common.eps_fraction)?;
            let table = sweep::sweep_blocklength(q, eps, n_min, n_max, n_step, &protocol)?;
            write_table(common.out.as_deref(), &table)
        }
        Command::SweepEps {
            q,
            n,
            eps_min,
            eps_max,
            steps,
            grid,
            common,
        } => {
            let protocol = ComparisonProtocol::new(common.eps_fraction)?;
            let grid = match grid {
                GridArg::Linear => Grid::Linear,
                GridArg::Geometric => Grid::Geometric,
            };
            let table = sweep::sweep_crossover(q, n, eps_min, eps_max, steps, grid, &protocol)?;
            write_table(common.out.as_deref(), &table)
        }
        Command::Verify {
            q,
            eps,
            channel,
            n,
            mode,
            trials,
            seed,
            budget,
            out,
        } => {
            let mode = match mode {
                ModeArg::FullEnum => VerifyMode::FullEnumeration,
                ModeArg::MonteCarlo => VerifyMode::MonteCarlo { trials, seed },
            };
            let budget = EnumerationBudget::new(budget);
            let report = match channel {
                Some(path) => verify_channel(&DmcSpec::from_path(path)?, n, mode, &budget)?,
                None => verify_qsc(
                    q.expect("clap requires --q"),
                    eps.expect("clap requires --eps"),
                    n,
                    mode,
                    &budget,
                )?,
            };
            let text = report.render();
            with_output(out.as_deref(), |w| w.write_all(text.as_bytes()))?;
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
                Err(Failure::Verification(failed.join("\n")))
            }
        }
    }
}

fn write_table(out: Option<&Path>, table: &fano_ext::SweepTable) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = create(path)?;
            table.write_csv(BufWriter::new(file))?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn with_output(
    out: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(&mut io::stdout().lock())?,
    }
    Ok(())
}

fn create(path: &Path) -> io::Result<File> {
    File::create(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn write_report(w: &mut dyn Write, r: &BoundReport) -> io::Result<()> {
    let rec = CsvRecord::from_report(r);
    writeln!(w, "n: {}", rec.n)?;
    writeln!(w, "q: {}", rec.q)?;
    for (name, value) in rec.values() {
        writeln!(w, "{name}: {}", value.map(format_sig).unwrap_or_default())?;
    }
    writeln!(w, "h_rel_form: {}", format_sig(r.h_rel_form))?;
    writeln!(w, "h_symbol_form: {}", format_sig(r.h_symbol_form))?;
    writeln!(w, "i_rel_form: {}", format_sig(r.i_rel_form))?;
    writeln!(w, "eps_fraction: {}", format_sig(r.eps_fraction))?;
    Ok(())
}
