use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{invariant_suite, load_config, parse_override, run_preset_with, run_sweep, SweepSpec, PRESETS};
use crate::error::{Error, Result};
use crate::thermo::{run_cycle_numeric, CycleConfig};

#[derive(Debug, Parser)]
#[command(name = "spin-otto", version, about = "Two-spin XY quantum Otto cycle simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a named experiment and write CSV plus a JSON sidecar.
    Preset {
        /// One of the names printed by `list`.
        name: String,
        /// Base config document (TOML); defaults apply to absent keys.
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// `key=value` override; an override of a swept parameter pins that axis.
        #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output CSV path [default: <name>.csv].
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a sweep specification (TOML).
    Sweep {
        spec: PathBuf,
        /// Output CSV path [default: the spec path with a .csv extension].
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one cycle and print the result as JSON.
    Cycle {
        config: PathBuf,
        #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run the invariant suite; exits non-zero if any check fails.
    Validate,
    /// List preset names.
    List,
}

fn resolve(config: Option<&PathBuf>, overrides: &[String]) -> Result<(CycleConfig, Vec<(String, f64)>)> {
    let base = match config {
        Some(p) => load_config(p)?,
        None => CycleConfig::default(),
    };
    let parsed = overrides.iter().map(|s| parse_override(s)).collect::<Result<_>>()?;
    Ok((base, parsed))
}

/// Executes one command; the returned value is the process exit code.
pub fn run(cli: Cli, stdout: &mut impl Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match cli.command {
        Command::Preset {
            name,
            config,
            overrides,
            out,
        } => {
            let (base, parsed) = resolve(config.as_ref(), &overrides)?;
            let record = run_preset_with(&name, base, &parsed)?;
            let out = out.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
            let sidecar = record.write(&out)?;
            writeln!(stdout, "{} rows -> {} ({})", record.rows.len(), out.display(), sidecar.display()).map_err(io)?;
            for e in &record.metadata.row_errors {
                writeln!(stdout, "row error {e}").map_err(io)?;
            }
        }
        Command::Sweep { spec, out } => {
            let parsed = SweepSpec::from_path(&spec)?;
            let out = out.unwrap_or_else(|| spec.with_extension("csv"));
            let record = run_sweep(&parsed, &out)?;
            writeln!(stdout, "{} rows -> {}", record.rows.len(), out.display()).map_err(io)?;
        }
        Command::Cycle { config, overrides } => {
            let (mut cfg, parsed) = resolve(Some(&config), &overrides)?;
            super::apply_overrides(&mut cfg, &parsed)?;
            cfg.validate()?;
            let result = run_cycle_numeric(&cfg)?;
            let json = serde_json::to_string_pretty(&result).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(stdout, "{json}").map_err(io)?;
        }
        Command::Validate => {
            let outcomes = invariant_suite();
            for c in &outcomes {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(stdout, "{tag} {}: {}", c.name, c.detail).map_err(io)?;
            }
            if outcomes.iter().any(|c| !c.passed) {
                return Ok(1);
            }
        }
        Command::List => {
            for name in PRESETS {
                writeln!(stdout, "{name}").map_err(io)?;
            }
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["spin-otto", "preset", "local-workgap", "-s", "gamma=0.5", "-o", "x.csv"]).unwrap();
        assert!(matches!(cli.command, Command::Preset { ref overrides, .. } if overrides == &["gamma=0.5"]));
        assert!(Cli::try_parse_from(["spin-otto", "validate"]).is_ok());
        assert!(Cli::try_parse_from(["spin-otto", "frobnicate"]).is_err());
    }

    #[test]
    fn cycle_prints_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "gamma = 0.5\n").unwrap();
        let cli = Cli::try_parse_from(["spin-otto", "cycle", path.to_str().unwrap(), "--set", "tau=1"]).unwrap();
        let mut buf = Vec::new();
        assert_eq!(run(cli, &mut buf).unwrap(), 0);
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v["W"].as_f64().unwrap() < 0.0);
        assert!(v["W_irr"].as_f64().unwrap() > 0.0);
    }
}
