use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use smoothness_lab::approx::best_approx;
use smoothness_lab::harness::{
    all_passed, corpus, render_report, run_lemma_suite, run_theorem_sweep, Config, ReportFormat, VerificationReport,
};
use smoothness_lab::translation::{modulus, MultiplierTable};
use smoothness_lab::{Error, Result};

#[derive(Parser)]
#[command(name = "smoothness-lab", version, about = "Checks for generalized translation, moduli and weighted approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the lemma-level identity and bound checks.
    Verify(Common),
    /// Run the theorem ratio sweeps.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Emit a raw value table.
    Table {
        #[arg(long, value_enum)]
        op: TableOp,
        /// Largest degree for psi tables.
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
}

#[derive(Args)]
struct Common {
    /// Exponent p (a number >= 1, or "inf").
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Nodes for operator integrals.
    #[arg(long)]
    quad_nodes: Option<usize>,
    /// Multiplier on every identity tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// key = value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Grid {
    /// Comma-separated delta values.
    #[arg(long)]
    deltas: Option<String>,
    /// Comma-separated degrees.
    #[arg(long)]
    degrees: Option<String>,
    /// Witness degree cap for the K-functional.
    #[arg(long)]
    kdeg: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableOp {
    Psi,
    Modulus,
    Bestapprox,
}

fn build_config(common: &Common, grid: Option<&Grid>) -> Result<Config> {
    let mut config = Config::default();
    if let Some(path) = &common.config {
        config.merge_file(path)?;
    }
    let mut set = |key: &str, value: Option<String>| value.map_or(Ok(()), |v| config.set(key, &v));
    set("p", common.p.clone())?;
    set("alpha", common.alpha.map(|v| v.to_string()))?;
    set("quad_n", common.quad_nodes.map(|v| v.to_string()))?;
    set("tol", common.tol.map(|v| v.to_string()))?;
    set("seed", common.seed.map(|v| v.to_string()))?;
    if let Some(g) = grid {
        set("deltas", g.deltas.clone())?;
        set("degrees", g.degrees.clone())?;
        set("kdeg", g.kdeg.map(|v| v.to_string()))?;
    }
    config.validate()?;
    Ok(config)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn summarize(reports: &[VerificationReport]) {
    for r in reports {
        eprintln!("{:<40} {:<8} observed={:e}", r.check_id, r.status.as_str(), r.observed);
    }
}

fn run_checks(reports: Vec<VerificationReport>, config: &Config, common: &Common) -> Result<ExitCode> {
    summarize(&reports);
    write_output(common.out.as_ref(), &render_report(&reports, config, common.format.into())?)?;
    Ok(if all_passed(&reports) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct Row {
    function: String,
    parameter: f64,
    value: f64,
}

fn table_rows(op: TableOp, max_degree: usize, config: &Config) -> Result<Vec<Row>> {
    let params = config.params();
    let set = corpus(config.seed);
    let mut rows = Vec::new();
    match op {
        TableOp::Psi => {
            let ys: Vec<f64> = (0..=38).map(|k| -0.95 + 0.05 * k as f64).collect();
            let table = MultiplierTable::compute(max_degree, &ys, config.quad_n)?;
            for (n, values) in table.values.iter().enumerate() {
                for (y, v) in ys.iter().zip(values) {
                    rows.push(Row { function: format!("psi_{n}"), parameter: *y, value: *v });
                }
            }
        }
        TableOp::Modulus => {
            for e in &set {
                for &d in &config.deltas {
                    let value = modulus(&e.function, d, params, &config.modulus_config())?;
                    rows.push(Row { function: e.label.clone(), parameter: d, value });
                }
            }
        }
        TableOp::Bestapprox => {
            for e in &set {
                for &n in &config.degrees {
                    let value = best_approx(&e.function, n, params, config.norm_nodes)?.value;
                    rows.push(Row { function: e.label.clone(), parameter: n as f64, value });
                }
            }
        }
    }
    Ok(rows)
}

fn render_table(rows: &[Row], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(rows).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Config(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify(common) => {
            let config = build_config(&common, None)?;
            run_checks(run_lemma_suite(&config), &config, &common)
        }
        Command::Sweep { common, grid } => {
            let config = build_config(&common, Some(&grid))?;
            run_checks(run_theorem_sweep(&config), &config, &common)
        }
        Command::Table { op, max_degree, common, grid } => {
            let config = build_config(&common, Some(&grid))?;
            if max_degree > smoothness_lab::jacobi::MAX_DEGREE {
                return Err(Error::Config(format!("max-degree {max_degree} exceeds {}", smoothness_lab::jacobi::MAX_DEGREE)));
            }
            let rows = table_rows(op, max_degree, &config)?;
            write_output(common.out.as_ref(), &render_table(&rows, common.format)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
