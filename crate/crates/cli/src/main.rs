use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kdirac_cli::config::{ConfigError, Operator, Ordering, OutputFormat, RunConfig};
use kdirac_cli::matrix::verify_matrix;
use kdirac_cli::report::Report;
use kdirac_cli::run::run;

/// Cartan test reports for the Euclidean and parabolic k-Dirac operators.
#[derive(Debug, Parser)]
#[command(name = "kdirac", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Operator::Euclidean)]
    operator: Operator,

    /// Dimension of the spinor space factor.
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Number of Clifford variables.
    #[arg(long, default_value_t = 2)]
    k: usize,

    /// How many times the symbol tableau is prolonged before the test.
    #[arg(long, default_value_t = 0)]
    level: u8,

    /// paper, greedy, random or random:<seed>.
    #[arg(long, default_value = "paper")]
    ordering: String,

    /// Also compute polynomial solutions of this (weighted) degree.
    #[arg(long)]
    degree: Option<u32>,

    #[arg(long)]
    json: bool,

    /// Compare the JSON report with this file.
    #[arg(long, value_name = "PATH")]
    golden: Option<PathBuf>,

    /// Overwrite the --golden file instead of comparing.
    #[arg(long, requires = "golden")]
    write_golden: bool,

    /// Seed for `--ordering random`.
    #[arg(long)]
    seed: Option<u64>,

    /// Run the whole verification matrix.
    #[arg(long, conflicts_with_all = ["operator", "n", "k", "level", "ordering", "degree", "seed"])]
    verify_all: bool,
}

fn config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    if cli.write_golden && cli.golden.is_none() {
        return Err(ConfigError::GoldenPathMissing);
    }
    let ordering = Ordering::parse_with_seed(&cli.ordering, cli.seed)?;
    let mut cfg = RunConfig::new(cli.operator, cli.n, cli.k, cli.level, ordering);
    cfg.degree = cli.degree;
    cfg.output = if cli.json { OutputFormat::Json } else { OutputFormat::Text };
    cfg.golden_path = cli.golden.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn emit(report: &Report, json: bool) {
    if json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

/// Compares with or rewrites the golden file. Returns false on a mismatch.
fn golden(report: &Report, path: &PathBuf, write: bool) -> Result<bool, String> {
    let json = report.to_json();
    if write {
        fs::write(path, &json).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        eprintln!("wrote {}", path.display());
        return Ok(true);
    }
    let want = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    if want == json {
        return Ok(true);
    }
    eprintln!("report differs from golden {}", path.display());
    for (i, (a, b)) in want.lines().zip(json.lines()).enumerate() {
        if a != b {
            eprintln!("first difference at line {}:\n  golden: {a}\n  actual: {b}", i + 1);
            break;
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let report = if cli.verify_all {
        if cli.write_golden && cli.golden.is_none() {
            eprintln!("error: {}", ConfigError::GoldenPathMissing);
            return ExitCode::from(2);
        }
        verify_matrix()
    } else {
        let cfg = match config(&cli) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        match run(&cfg) {
            Ok(report) => report,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        }
    };

    emit(&report, cli.json);
    let mut code = report.exit_code();
    if let Some(path) = &cli.golden {
        match golden(&report, path, cli.write_golden) {
            Ok(true) => {}
            Ok(false) => code = 1,
            Err(e) => {
                eprintln!("error: {e}");
                code = 2;
            }
        }
    }
    ExitCode::from(code as u8)
}
