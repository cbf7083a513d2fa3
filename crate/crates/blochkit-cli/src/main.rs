use blochkit_cli::{parse_config, run, ConfigError, Mode, RunError};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Bloch dispersion, band gaps and resonances for Drude–Lorentz photonic crystals.
#[derive(Debug, Parser)]
#[command(name = "blochkit", version)]
struct Cli {
    /// sweep1d | gaps | cascade | poles | field | latsum | resonances
    mode: Mode,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Also write SVG diagrams.
    #[arg(long)]
    svg: bool,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if c.is_control() => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

fn config_line(e: &ConfigError) -> String {
    match e {
        ConfigError::Parse { line, col, message } => {
            format!(r#"{{"error":"parse","line":{line},"column":{col},"message":"{}"}}"#, escape(message))
        }
        ConfigError::Validation { key, message } => {
            format!(r#"{{"error":"validation","key":"{}","message":"{}"}}"#, escape(key), escape(message))
        }
    }
}

fn fail(code: u8, line: String) -> ExitCode {
    eprintln!("{line}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            return fail(2, format!(r#"{{"error":"io","path":"{}","message":"{}"}}"#, escape(&cli.config.display().to_string()), escape(&e.to_string())))
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(2, config_line(&e)),
    };
    cfg.mode = cli.mode;
    if let Some(dir) = cli.out {
        cfg.output.dir = dir;
    }
    if let Some(w) = cli.workers {
        if w == 0 {
            return fail(2, config_line(&ConfigError::Validation { key: "workers".into(), message: "must be at least 1".into() }));
        }
        cfg.workers = w;
    }
    cfg.output.svg |= cli.svg;
    match run(&cfg) {
        Ok(out) => {
            for p in out.tables.iter().chain(std::iter::once(&out.manifest)).chain(&out.svgs) {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Config(e)) => fail(2, config_line(&e)),
        Err(RunError::Numerical(e)) => fail(3, format!(r#"{{"error":"numerical","message":"{}"}}"#, escape(&e.to_string()))),
        Err(e) => fail(1, format!(r#"{{"error":"io","message":"{}"}}"#, escape(&e.to_string()))),
    }
}
