use std::path::PathBuf;
use std::process::ExitCode;

use atem_cli::job::{default_precision_bits, DEFAULT_DIGITS};
use atem_cli::{presets, reproduce_table, run_job, CliError, CliResult, JobSpec, RunOptions, TableId};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "atem", version, about = "Bound-state spectra of polynomial potentials by asymptotic Taylor expansion")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Mantissa bits for all arithmetic [default: $ATEM_PRECISION_BITS or 256]
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Final iteration number (replaces the end of the schedule)
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Directory for CSV and JSON output
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Significant digits in CSV output
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a JSON job file
    Run { spec: PathBuf },
    /// Recompute a built-in reference table and compare
    ReproduceTable { table: String },
    /// Built-in jobs
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand, Debug)]
enum PresetAction {
    /// Names and descriptions
    List,
    /// Print a preset as a job file
    Show { name: String },
}

fn options(g: &GlobalArgs) -> CliResult<RunOptions> {
    if let Some(m) = g.m {
        if m < 4 {
            return Err(CliError::Usage(format!("--m must be at least 4, got {m}")));
        }
    }
    if g.digits == 0 {
        return Err(CliError::Usage("--digits must be positive".into()));
    }
    // fail early on a malformed environment override
    default_precision_bits()?;
    Ok(RunOptions {
        precision_bits: g.precision_bits,
        final_m: g.m,
        output_dir: g.output_dir.clone(),
        digits: Some(g.digits),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { spec } => {
            let opts = options(&cli.global)?;
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", spec.display())))?;
            let job = JobSpec::from_json(&text)?;
            let outcome = run_job(&job, &opts, true)?;
            for r in &outcome.spectrum.records {
                println!(
                    "{:>3} {:>7} {} ({} stable digits)",
                    r.index,
                    r.parity.map(|p| p.to_string()).unwrap_or_else(|| "-".into()),
                    r.energy.to_decimal(opts.digits()),
                    r.stable_digits
                );
            }
            for f in &outcome.files {
                log::info!("wrote {}", f.display());
            }
            let failed: usize = outcome.comparisons.iter().map(|c| c.failures()).sum();
            if failed > 0 {
                return Err(CliError::TableMismatch {
                    failed,
                    total: outcome.comparisons.iter().map(|c| c.entries.len()).sum(),
                });
            }
            Ok(())
        }
        Command::ReproduceTable { table } => {
            let id: TableId = table.parse()?;
            let opts = options(&cli.global)?;
            let (report, _) = reproduce_table(id, &opts, opts.output_dir.is_some())?;
            print!("{}", report.render());
            match report.failures() {
                0 => Ok(()),
                failed => Err(CliError::TableMismatch {
                    failed,
                    total: report.entries.len(),
                }),
            }
        }
        Command::Presets { action } => {
            match action {
                PresetAction::List => {
                    for p in presets::all() {
                        let table = p.table.map(|(t, _)| format!(" [{t}]")).unwrap_or_default();
                        println!("{:<16} {}{}", p.name, p.description, table);
                    }
                }
                PresetAction::Show { name } => {
                    let p = presets::find(&name).ok_or_else(|| CliError::Usage(format!("no preset named {name:?}")))?;
                    println!("{}", p.job.to_json());
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
