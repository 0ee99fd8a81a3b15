//! Command-line handling shared by the `gase` binary and its tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::config::{finish, RawConfig, ScenarioConfig};
use crate::presets;
use crate::run::{
    run_eval, run_optimize, run_sweep, run_verify, RunError, RunResult, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;

/// Options common to every subcommand.
#[derive(Debug, Clone, PartialEq, Eq, clap::Args)]
pub struct Common {
    /// Scenario configuration file (`section.key = value` lines)
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in preset: fig1, fig3, fig4, fig6, fig7a or fig7b
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Output CSV; multi-curve presets write one file per curve (`<stem>_<curve>.csv`)
    #[arg(long, value_name = "PATH.csv")]
    pub out: Option<PathBuf>,
    /// Monte Carlo seed (overrides `mc.seed`; default 42)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count (overrides `mc.samples`; default 1000000)
    #[arg(long)]
    pub samples: Option<u64>,
    /// Worker threads (default: all cores); output does not depend on it
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Parser)]
#[command(name = "gase", version, about = "Generalized area spectral efficiency of Rayleigh-faded links")]
struct Args {
    /// What to run
    #[arg(value_enum)]
    command: Mode,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Evaluate the configured point
    Eval,
    /// Evaluate every point of the sweep block
    Sweep,
    /// Find GASE-optimal transmit powers (p2p and dualhop)
    Optimize,
    /// Compare closed forms with Monte Carlo estimates (exit 2 on disagreement)
    Verify,
}

/// Named scenario configs selected by `--config` and/or `--preset`. With
/// both, the file's entries override each preset member's.
pub fn load(config: Option<&Path>, preset: Option<&str>) -> RunResult<Vec<(String, ScenarioConfig)>> {
    let file = match config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|source| RunError::Io {
            path: p.display().to_string(),
            source,
        })?),
        None => None,
    };
    let members = match preset {
        Some(name) => Some(presets::preset(name).ok_or_else(|| {
            RunError::Usage(format!(
                "unknown preset `{name}` (available: {})",
                presets::NAMES.join(", ")
            ))
        })?),
        None => None,
    };
    match (file, members) {
        (None, None) => Err(RunError::Usage("one of --config or --preset is required".into())),
        (Some(text), None) => {
            let (raw, errs) = RawConfig::lex_lenient(&text);
            let name = config
                .and_then(|p| p.file_stem())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "config".into());
            Ok(vec![(name, finish(errs, raw.validate())?)])
        }
        (None, Some(members)) => Ok(members),
        (Some(text), Some(members)) => members
            .into_iter()
            .map(|(name, base)| {
                let (top, errs) = RawConfig::lex_lenient(&text);
                let merged = RawConfig::from_config(&base).overlay(top);
                Ok((name, finish(errs, merged.validate())?))
            })
            .collect(),
    }
}

/// Path for member `name` of a multi-member output.
pub fn member_path(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}_{name}.{ext}"))
}

/// Runs `mode` over every member and returns each member's CSV text and
/// whether verification passed.
pub fn execute(mode: Mode, c: &Common) -> RunResult<(Vec<(String, String)>, bool)> {
    let members = load(c.config.as_deref(), c.preset.as_deref())?;
    let mut outputs = Vec::new();
    let mut ok = true;
    for (name, cfg) in &members {
        let csv = match mode {
            Mode::Eval => run_eval(cfg)?.to_csv(),
            Mode::Sweep => run_sweep(cfg)?.to_csv(),
            Mode::Optimize => run_optimize(cfg)?.to_csv(),
            Mode::Verify => {
                let seed = c.seed.or(cfg.mc.seed).unwrap_or(DEFAULT_SEED);
                let samples = c.samples.or(cfg.mc.samples).unwrap_or(DEFAULT_SAMPLES);
                if samples == 0 {
                    return Err(RunError::Usage("--samples must be >= 1".into()));
                }
                let r = run_verify(cfg, samples, seed)?;
                ok &= r.passed();
                r.to_csv()
            }
        };
        outputs.push((name.clone(), csv));
    }
    Ok((outputs, ok))
}

fn write_outputs(outputs: &[(String, String)], out: Option<&Path>) -> RunResult<()> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| RunError::Io { path, source }
    };
    match out {
        Some(path) if outputs.len() == 1 => std::fs::write(path, &outputs[0].1).map_err(io(path)),
        Some(path) => {
            for (name, csv) in outputs {
                let p = member_path(path, name);
                std::fs::write(&p, csv).map_err(io(&p))?;
            }
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let multi = outputs.len() > 1;
            for (i, (name, csv)) in outputs.iter().enumerate() {
                let r = if multi {
                    let sep = if i > 0 { "\n" } else { "" };
                    write!(lock, "{sep}# {name}\n{csv}")
                } else {
                    write!(lock, "{csv}")
                };
                r.map_err(io(Path::new("<stdout>")))?;
            }
            Ok(())
        }
    }
}

/// Entry point returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let c = &args.common;
    let result = match c.threads {
        Some(0) => Err(RunError::Usage("--threads must be >= 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(args.command, c)),
            Err(e) => Err(RunError::Usage(format!("cannot start {n} worker threads: {e}"))),
        },
        None => execute(args.command, c),
    };
    match result.and_then(|(outputs, ok)| write_outputs(&outputs, c.out.as_deref()).map(|_| ok)) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("verification failed: closed form outside {} standard errors of the oracle", crate::run::VERIFY_SIGMA);
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            match &e {
                RunError::Config(errs) => {
                    eprintln!("configuration errors:");
                    for d in &errs.0 {
                        eprintln!("  {d}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            e.exit_code()
        }
    }
}
