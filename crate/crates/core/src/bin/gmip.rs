use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use gmip::cli::{self, CliError, RunReport, EXIT_OK};
use gmip::SolveConfig;

/// Natural 0-1 integer programs for graph matching problems.
#[derive(Parser)]
#[command(name = "gmip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the LP model of an instance file.
    Encode {
        spec: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance with the built-in branch and bound.
    Solve(RunArgs),
    /// Solve an instance and compare against brute-force enumeration.
    Verify(RunArgs),
    /// List the problem tags accepted in instance files.
    ListProblems,
}

#[derive(Args)]
struct RunArgs {
    spec: PathBuf,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Maximum number of search nodes.
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn config(&self) -> Result<SolveConfig, CliError> {
        let mut c = SolveConfig::default().with_threads(self.threads.max(1));
        if let Some(n) = self.node_limit {
            c = c.with_node_limit(n);
        }
        if let Some(t) = self.time_limit {
            let d = Duration::try_from_secs_f64(t).map_err(|_| CliError::Io(format!("bad time limit {t}")))?;
            c = c.with_time_limit(d);
        }
        Ok(c)
    }
}

fn print(report: &RunReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serialises"));
    } else {
        print!("{}", report.render());
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match args.command {
        Command::Encode { spec, out } => cli::load(&spec).and_then(|s| cli::encode_spec(&s)).and_then(|(model, text)| {
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    eprintln!("wrote {}: {}", path.display(), model.stats());
                }
                None => {
                    print!("{text}");
                    eprintln!("{}", model.stats());
                }
            }
            Ok(EXIT_OK)
        }),
        Command::Solve(run) => run.config().and_then(|c| {
            let report = cli::solve_spec(&cli::load(&run.spec)?, &c)?;
            print(&report, run.json);
            Ok(report.exit_code())
        }),
        Command::Verify(run) => run.config().and_then(|c| {
            let report = cli::verify_spec(&cli::load(&run.spec)?, &c)?;
            print(&report, run.json);
            Ok(report.exit_code())
        }),
        Command::ListProblems => {
            print!("{}", cli::list_problems());
            Ok(EXIT_OK)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
