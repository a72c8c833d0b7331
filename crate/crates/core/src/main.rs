use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use korenblum::harness::{emit_report, gen_corpus, run_configured, CorpusSpec, ReportFormat, Suite, SuiteConfig};
use korenblum::io::{read_samples, read_series, samples_to_json, series_to_json, write_series};
use korenblum::projections::partial_sum;
use korenblum::{forward_t, inverse_t, weighted_norm, Error, Result, WeightExponent};

/// Overrides the size of the worker pool.
const THREADS_ENV: &str = "KORENBLUM_THREADS";

#[derive(Parser)]
#[command(name = "korenblum", version, about = "Weighted sup-norms, projections and the block transform")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print ||f||_mu.
    Norm {
        file: PathBuf,
        #[arg(long)]
        mu: f64,
    },
    /// Write the partial sum P_n f.
    Project {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the block samples T f.
    Transform {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover f from block samples.
    Invtransform {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a corpus described by a TOML file into a directory.
    Corpus {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a property suite and write its report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        level_max: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={value} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Norm { file, mu } => {
            let f = read_series(&file)?;
            println!("{:.16e}", weighted_norm(&f, WeightExponent::new(mu)?));
        }
        Command::Project { file, n, out } => {
            let f = read_series(&file)?;
            emit(&series_to_json(&partial_sum(&f, n))?, out.as_deref())?;
        }
        Command::Transform { file, out } => {
            let f = read_series(&file)?;
            emit(&samples_to_json(&forward_t(&f))?, out.as_deref())?;
        }
        Command::Invtransform { file, out } => {
            let x = read_samples(&file)?;
            emit(&series_to_json(&inverse_t(&x))?, out.as_deref())?;
        }
        Command::Corpus { spec, out } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| Error::Io {
                path: spec.clone(),
                source: e,
            })?;
            let spec: CorpusSpec = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            std::fs::create_dir_all(&out).map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            let corpus = gen_corpus(&spec)?;
            for (i, (f, fam)) in corpus.iter().zip(&spec.families).enumerate() {
                let name: String = fam
                    .label()
                    .chars()
                    .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
                    .collect();
                write_series(&out.join(format!("{i:03}_{}.json", name.trim_end_matches('_'))), f)?;
            }
            eprintln!("wrote {} functions to {}", corpus.len(), out.display());
        }
        Command::Verify {
            suite,
            config,
            report,
            format,
            seed,
            level_max,
        } => {
            let suite: Suite = suite.parse()?;
            let format: ReportFormat = format.parse()?;
            let mut cfg = match &config {
                Some(path) => SuiteConfig::load(path)?,
                None => SuiteConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(level) = level_max {
                cfg.level_max = level;
            }
            let result = run_configured(suite, &cfg)?;
            emit_report(&result, &report, format)?;
            eprintln!(
                "{suite}: {} passed, {} failed",
                result.summary.pass_count, result.summary.fail_count
            );
            return Ok(result.pass());
        }
    }
    Ok(true)
}
