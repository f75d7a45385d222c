//! `qes`: batch front end. Prints a JSON run manifest; exits 0 only when
//! every certification the command performed passed.
//!
//! Exit codes: 0 success, 1 a certification failed, 2 bad usage or
//! parameters, 3 a numerical failure.

mod args;
mod config;
mod manifest;
mod run;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use qes_core::QesError;

use args::{Cli, CliCommand, Command, Emit};
use config::{Overrides, Settings};
use manifest::RunManifest;

enum Failure {
    Usage(anyhow::Error),
    Numeric(anyhow::Error),
}

fn classify(e: anyhow::Error) -> Failure {
    match e.downcast_ref::<QesError>() {
        Some(QesError::InvalidParameter(_) | QesError::Parse(_) | QesError::Ordering(_)) | None => {
            Failure::Usage(e)
        }
        Some(_) => Failure::Numeric(e),
    }
}

fn default_emit(cmd: &Command) -> Emit {
    match cmd {
        Command::Poly(_) => Emit::Coeffs,
        _ => Emit::Json,
    }
}

type Samples = Option<Vec<(f64, f64)>>;

fn run_manifest(cmd: &Command, settings: &Settings, emit: Emit) -> Result<(RunManifest, Samples)> {
    let start = Instant::now();
    let outcome = run::execute(cmd, settings, emit)?;
    let manifest = RunManifest {
        command: cmd.name().into(),
        parameters: cmd.clone(),
        emit,
        settings: settings.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        duration_seconds: start.elapsed().as_secs_f64(),
        certified: outcome.certifications.iter().all(|c| c.passed),
        certifications: outcome.certifications,
        results: outcome.results,
    };
    Ok((manifest, outcome.samples))
}

fn write_tsv(path: &std::path::Path, samples: &[(f64, f64)]) -> Result<()> {
    let mut f = std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    writeln!(f, "x\tvalue")?;
    for (x, v) in samples {
        writeln!(f, "{x}\t{v:e}")?;
    }
    Ok(())
}

fn main_inner(cli: Cli) -> std::result::Result<bool, Failure> {
    let g = &cli.global;
    let overrides = Overrides {
        precision_bits: g.precision_bits,
        tol: g.tol,
        x0: g.x0,
        xm: g.xm,
        xr: g.xr,
        sequential: g.sequential,
    };
    let (manifest, samples) = match &cli.command {
        CliCommand::Run(cmd) => {
            let settings = Settings::resolve(g.config.as_deref(), &overrides).map_err(Failure::Usage)?;
            let emit = g.emit.unwrap_or_else(|| default_emit(cmd));
            if emit == Emit::Tsv && g.out.is_none() {
                return Err(Failure::Usage(anyhow::anyhow!("--emit tsv needs --out FILE")));
            }
            run_manifest(cmd, &settings, emit).map_err(classify)?
        }
        CliCommand::Replay { manifest } => {
            let text = std::fs::read_to_string(manifest)
                .with_context(|| format!("cannot read {}", manifest.display()))
                .map_err(Failure::Usage)?;
            let stored: RunManifest = serde_json::from_str(&text)
                .context("not a run manifest")
                .map_err(Failure::Usage)?;
            let (fresh, _) = run_manifest(&stored.parameters, &stored.settings, stored.emit).map_err(classify)?;
            manifest::check_replay(&stored, &fresh).map_err(Failure::Numeric)?;
            (fresh, None)
        }
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Numeric(e.into()))?;
    match (&g.out, manifest.emit) {
        (Some(path), Emit::Tsv) => {
            let samples = samples
                .ok_or_else(|| anyhow::anyhow!("this command has no samples; give --grid"))
                .map_err(Failure::Usage)?;
            write_tsv(path, &samples).map_err(Failure::Numeric)?;
            println!("{text}");
        }
        (Some(path), _) => std::fs::write(path, text + "\n")
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::Numeric)?,
        (None, _) => println!("{text}"),
    }
    Ok(manifest.certified)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (code, e, kind) = match f {
                Failure::Usage(e) => (2, e, "usage"),
                Failure::Numeric(e) => (3, e, "numeric"),
            };
            let detail = e.downcast_ref::<QesError>().map(|q| q.code()).unwrap_or(kind);
            let err = serde_json::json!({"error": detail, "message": format!("{e:#}")});
            eprintln!("{err}");
            ExitCode::from(code)
        }
    }
}
