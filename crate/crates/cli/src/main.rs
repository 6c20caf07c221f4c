use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use wadec::exec::{CompareMode, ExecError};
use wadec_cli::commands::{cmd_dataset, cmd_decompile, cmd_eval, cmd_exec, cmd_offsets, cmd_slice, eval_table, Outcome};
use wadec_cli::config::{ConfigError, RunConfig};

/// WebAssembly to C decompilation, evaluation and dataset tooling.
#[derive(Debug, Parser)]
#[command(name = "wadec", version)]
struct Cli {
    /// TOML config file.
    #[arg(long, global = true, env = "WADEC_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads for per-file work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record wall-clock timings in reports (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// More logging; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Slice a module into loop-bounded blocks.
    Slice {
        /// `.wat` or `.wasm` input.
        input: PathBuf,
        #[arg(short, long, default_value = "blocks")]
        out_dir: PathBuf,
    },
    /// Decompile a module to C.
    Decompile {
        input: PathBuf,
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        backend: BackendFlags,
    },
    /// Score decompiled C against sources, matching files by stem.
    Eval {
        src_root: PathBuf,
        dec_root: PathBuf,
        /// JSON-lines report path.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Recompile and re-execute decompiled C, comparing against the originals.
    Exec {
        src_root: PathBuf,
        dec_root: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        toolchain: ToolchainFlags,
    },
    /// Build fine-tuning records from a corpus of C files.
    Dataset {
        corpus: PathBuf,
        #[arg(short, long, default_value = "dataset")]
        out_dir: PathBuf,
        /// Include the rendered prompt in each record.
        #[arg(long)]
        with_prompts: bool,
        #[command(flatten)]
        toolchain: ToolchainFlags,
    },
    /// Print the variable offset map of a debug build.
    Offsets {
        wasm: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the resolved configuration.
    Config,
}

#[derive(Debug, Args)]
struct BackendFlags {
    /// Completion endpoint URL, or `mock`.
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    max_tokens: Option<u32>,
    #[arg(long)]
    max_in_flight: Option<usize>,
    #[arg(long)]
    retries: Option<u32>,
    /// Lookup table for the mock backend; implies `--endpoint mock`.
    #[arg(long)]
    mock_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ToolchainFlags {
    /// Compile template with `{in}` and `{out}`.
    #[arg(long)]
    compile: Option<String>,
    #[arg(long)]
    compile_debug: Option<String>,
    /// Run template with `{wasm}`.
    #[arg(long)]
    run: Option<String>,
    /// Per-run timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, value_enum)]
    compare: Option<CompareArg>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum CompareArg {
    Exact,
    LineNormalized,
}

fn apply_backend(cfg: &mut RunConfig, f: &BackendFlags) {
    let b = &mut cfg.backend;
    if let Some(v) = f.endpoint.clone() {
        b.endpoint = v;
    }
    if let Some(v) = f.model.clone() {
        b.model = v;
    }
    if let Some(v) = f.temperature {
        b.temperature = v;
    }
    if let Some(v) = f.max_tokens {
        b.max_tokens = v;
    }
    if let Some(v) = f.max_in_flight {
        b.max_in_flight = v;
    }
    if let Some(v) = f.retries {
        b.retries = v;
    }
    if let Some(v) = f.mock_table.clone() {
        b.endpoint = wadec::pipeline::MOCK_ENDPOINT.into();
        b.mock_table = Some(v);
    }
}

fn apply_toolchain(cfg: &mut RunConfig, f: &ToolchainFlags) {
    let t = &mut cfg.toolchain;
    if let Some(v) = f.compile.clone() {
        t.compile = v;
    }
    if let Some(v) = f.compile_debug.clone() {
        t.compile_debug = v;
    }
    if let Some(v) = f.run.clone() {
        t.run = v;
    }
    if let Some(v) = f.timeout {
        t.timeout_secs = v;
    }
    if let Some(v) = f.compare {
        t.compare = match v {
            CompareArg::Exact => CompareMode::Exact,
            CompareArg::LineNormalized => CompareMode::LineNormalized,
        };
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::resolve(cli.config.as_deref(), |k| std::env::var(k).ok())?;
    if let Some(j) = cli.jobs {
        cfg.parallelism.jobs = j;
    }
    cfg.timings |= cli.timings;
    match &cli.command {
        Command::Decompile { backend, .. } => apply_backend(&mut cfg, backend),
        Command::Exec { toolchain, .. } | Command::Dataset { toolchain, .. } => apply_toolchain(&mut cfg, toolchain),
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Slice { input, out_dir } => {
            let manifest = cmd_slice(&input, &out_dir, cfg)?;
            println!("{} blocks written to {}", manifest.len(), out_dir.display());
            Ok(Outcome::Success)
        }
        Command::Decompile { input, out_dir, .. } => {
            let out = cmd_decompile(&input, &out_dir, cfg)?;
            match &out.decompiled {
                Some(p) => println!("{}", p.display()),
                None => eprintln!("aborted: backend unavailable; see {}", out.report.display()),
            }
            let missing = out.unit.unresolved_markers();
            if !missing.is_empty() {
                eprintln!("unresolved blocks: {}", missing.join(", "));
            }
            Ok(out.outcome())
        }
        Command::Eval { src_root, dec_root, out } => {
            let (report, outcome) = cmd_eval(&src_root, &dec_root, out.as_deref())?;
            print!("{}", eval_table(&report));
            Ok(outcome)
        }
        Command::Exec { src_root, dec_root, out, .. } => {
            let (report, outcome) = cmd_exec(&src_root, &dec_root, out.as_deref(), cfg)?;
            let a = &report.aggregate;
            println!(
                "files {}  recompilation {:.2}%  re-execution {:.2}%  consistency {:.2}%",
                a.files, a.recompilation, a.re_execution, a.consistency
            );
            Ok(outcome)
        }
        Command::Dataset { corpus, out_dir, with_prompts, .. } => {
            let (report, outcome) = cmd_dataset(&corpus, &out_dir, with_prompts, cfg)?;
            println!(
                "{} records from {} files, {} skipped",
                report.records.len(),
                report.accepted_files,
                report.skips.len()
            );
            Ok(outcome)
        }
        Command::Offsets { wasm, out } => {
            match out {
                Some(p) => {
                    let f = std::fs::File::create(&p)?;
                    cmd_offsets(&wasm, std::io::BufWriter::new(f))?;
                }
                None => {
                    cmd_offsets(&wasm, std::io::stdout().lock())?;
                }
            }
            Ok(Outcome::Success)
        }
        Command::Config => {
            print!("{}", cfg.to_toml());
            Ok(Outcome::Success)
        }
    }
}

fn is_setup_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<ConfigError>().is_some()
            || matches!(
                c.downcast_ref::<ExecError>(),
                Some(ExecError::ToolchainMissing(_) | ExecError::RuntimeMissing(_) | ExecError::Template(_) | ExecError::TrapPattern(_))
            )
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, &cfg) {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_setup_error(&e) { 2 } else { 1 })
        }
    }
}

