//! `irs-sim` command line: argument parsing, command execution and output.

mod config;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::{run_trial_methods, summarize, sweep, SweepAxis, SweepTable};
use crate::metrics::{flops_ais, flops_irses, flops_nsp};
use crate::selftest::run_selftest;

pub use config::{RunSettings, KEYS};
pub use table::{emit_table, render_table, OutputFormat, OutputTable};

pub const TOOL_NAME: &str = "irs-sim";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Run,
    SweepSnr,
    SweepN,
    SweepM,
    SweepDistance,
    Flops,
    Selftest,
}

impl CommandKind {
    pub const ALL: [CommandKind; 7] = [
        CommandKind::Run,
        CommandKind::SweepSnr,
        CommandKind::SweepN,
        CommandKind::SweepM,
        CommandKind::SweepDistance,
        CommandKind::Flops,
        CommandKind::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Run => "run",
            CommandKind::SweepSnr => "sweep-snr",
            CommandKind::SweepN => "sweep-n",
            CommandKind::SweepM => "sweep-m",
            CommandKind::SweepDistance => "sweep-distance",
            CommandKind::Flops => "flops",
            CommandKind::Selftest => "selftest",
        }
    }

    pub fn from_name(name: &str) -> Option<CommandKind> {
        CommandKind::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn sweep_axis(self) -> Option<SweepAxis> {
        match self {
            CommandKind::SweepSnr => Some(SweepAxis::SnrDb),
            CommandKind::SweepN => Some(SweepAxis::Elements),
            CommandKind::SweepM => Some(SweepAxis::Antennas),
            CommandKind::SweepDistance => Some(SweepAxis::Distance),
            _ => None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = TOOL_NAME, version, about = "Beamforming simulator for IRS-aided multi-antenna relaying")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Monte Carlo rates at a single operating point.
    Run(CommonArgs),
    /// Rate versus transmit SNR (dB).
    SweepSnr(CommonArgs),
    /// Rate versus number of IRS elements.
    SweepN(CommonArgs),
    /// Rate versus number of relay antennas.
    SweepM(CommonArgs),
    /// Rate versus relay/IRS horizontal position.
    SweepDistance(CommonArgs),
    /// Closed-form FLOP counts versus number of IRS elements.
    Flops(CommonArgs),
    /// Numerical invariant checks.
    Selftest,
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// Flat TOML file of KEY = VALUE pairs.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,
    /// Write the table here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated method names, `all` or `proposed`.
    #[arg(long)]
    methods: Option<String>,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse()
}

fn resolve(command: CommandKind, args: &CommonArgs, env_seed: Option<&str>) -> Result<RunSettings> {
    let mut settings = RunSettings::defaults_for(command);
    if let Some(raw) = env_seed {
        settings.set_seed_from_env(raw)?;
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
        settings.apply_document(&text)?;
    }
    for assignment in &args.set {
        settings.apply_override(assignment)?;
    }
    if let Some(trials) = args.trials {
        settings.set("trials", &toml::Value::Integer(trials as i64))?;
    }
    if let Some(seed) = args.seed {
        settings.scenario.base_seed = seed;
    }
    if let Some(methods) = &args.methods {
        settings.set("methods", &toml::Value::String(methods.clone()))?;
    }
    Ok(settings)
}

fn metadata(command: CommandKind, settings: &RunSettings) -> Vec<(String, toml::Value)> {
    let mut meta = vec![
        ("tool".to_string(), toml::Value::String(TOOL_NAME.into())),
        ("version".to_string(), toml::Value::String(env!("CARGO_PKG_VERSION").into())),
        ("command".to_string(), toml::Value::String(command.name().into())),
    ];
    meta.extend(settings.to_pairs());
    meta
}

/// Table for a finished sweep: the axis column, then mean and standard
/// error of R_s per method, then the trial count.
pub fn sweep_output_table(command: &str, settings: &RunSettings, table: &SweepTable) -> OutputTable {
    let kind = CommandKind::from_name(command).unwrap_or(CommandKind::Run);
    let mut header = vec![table.axis.column().to_string()];
    for m in &table.methods {
        header.push(format!("{}_mean", m.as_str()));
        header.push(format!("{}_se", m.as_str()));
    }
    header.push("trials".into());
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let mut r = vec![row.value];
            for s in &row.stats {
                r.push(s.mean);
                r.push(s.std_err);
            }
            r.push(row.stats.first().map_or(0, |s| s.trials) as f64);
            r
        })
        .collect();
    let mut meta = metadata(kind, settings);
    if let Some((_, v)) = meta.iter_mut().find(|(k, _)| k == "command") {
        *v = toml::Value::String(command.into());
    }
    OutputTable { metadata: meta, header, rows }
}

fn run_table(settings: &RunSettings) -> Result<OutputTable> {
    let sc = &settings.scenario;
    for &m in &settings.methods {
        sc.with_method(m).validate()?;
    }
    let records = (0..sc.trials)
        .into_par_iter()
        .map(|t| run_trial_methods(sc, t, &settings.methods))
        .collect::<Result<Vec<_>>>()?;
    let mut header = Vec::new();
    let mut row = Vec::new();
    for (k, m) in settings.methods.iter().enumerate() {
        let column = |f: fn(&crate::metrics::RateResult) -> f64| -> Vec<f64> {
            records.iter().map(|r| f(&r[k].result)).collect()
        };
        let rs = summarize(&column(|r| r.rate_s));
        let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
        let name = m.as_str();
        header.extend([
            format!("{name}_rate_s"),
            format!("{name}_se"),
            format!("{name}_rate_r"),
            format!("{name}_rate_d"),
        ]);
        row.extend([rs.mean, rs.std_err, mean(column(|r| r.rate_r)), mean(column(|r| r.rate_d))]);
    }
    header.push("trials".into());
    row.push(sc.trials as f64);
    Ok(OutputTable { metadata: metadata(CommandKind::Run, settings), header, rows: vec![row] })
}

fn flops_table(settings: &RunSettings) -> Result<OutputTable> {
    let m = settings.scenario.antennas as u64;
    let l = settings.flops_iterations;
    let mut rows = Vec::with_capacity(settings.values.len());
    for &v in &settings.values {
        if !(v >= 1.0 && v.fract() == 0.0) {
            return Err(Error::config("values", format!("N must be a positive integer, got {v}")));
        }
        let n = v as u64;
        if !n.is_multiple_of(m) {
            return Err(Error::config("values", format!("N = {n} is not a multiple of M = {m}")));
        }
        rows.push(vec![
            v,
            flops_ais(m, n, l, l)?.flops,
            flops_nsp(m, n, l, l)?.flops,
            flops_irses(m, n / m, n, l)?.flops,
        ]);
    }
    Ok(OutputTable {
        metadata: metadata(CommandKind::Flops, settings),
        header: ["N", "ais", "nsp", "irses"].map(String::from).to_vec(),
        rows,
    })
}

/// Computes the output table of `command` under `settings`.
pub fn execute(command: CommandKind, settings: &RunSettings) -> Result<OutputTable> {
    if let Some(axis) = command.sweep_axis() {
        let table = sweep(&settings.sweep_spec(axis))?;
        return Ok(sweep_output_table(command.name(), settings, &table));
    }
    match command {
        CommandKind::Run => run_table(settings),
        CommandKind::Flops => flops_table(settings),
        _ => Err(Error::Unsupported(format!("`{}` does not produce a table", command.name()))),
    }
}

/// Re-runs the command recorded in a table's metadata.
pub fn regenerate(table: &OutputTable) -> Result<OutputTable> {
    let command = match table.meta("command") {
        Some(toml::Value::String(name)) => CommandKind::from_name(name)
            .ok_or_else(|| Error::config("command", format!("unknown command `{name}`")))?,
        _ => return Err(Error::config("command", "missing from metadata")),
    };
    let mut settings = RunSettings::defaults_for(command);
    for (key, value) in &table.metadata {
        if !matches!(key.as_str(), "tool" | "version" | "command") {
            settings.set(key, value)?;
        }
    }
    execute(command, &settings)
}

fn report(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "{TOOL_NAME}: {e}");
    if e.is_config() {
        1
    } else {
        2
    }
}

fn dispatch(command: CommandKind, args: &CommonArgs, env_seed: Option<&str>, out: &mut dyn Write) -> Result<()> {
    let settings = resolve(command, args, env_seed)?;
    let table = execute(command, &settings)?;
    emit_table(&table, args.format, args.out.as_deref(), out)
}

/// Full entry point. Exit codes: 0 success, 1 usage or configuration
/// error, 2 runtime failure.
pub fn run_with<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                1
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    let (command, common) = match &cli.command {
        Sub::Run(a) => (CommandKind::Run, a),
        Sub::SweepSnr(a) => (CommandKind::SweepSnr, a),
        Sub::SweepN(a) => (CommandKind::SweepN, a),
        Sub::SweepM(a) => (CommandKind::SweepM, a),
        Sub::SweepDistance(a) => (CommandKind::SweepDistance, a),
        Sub::Flops(a) => (CommandKind::Flops, a),
        Sub::Selftest => {
            let checks = run_selftest();
            for c in &checks {
                let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            return if checks.iter().all(|c| c.passed) { 0 } else { 2 };
        }
    };
    match dispatch(command, common, env_seed, out) {
        Ok(()) => 0,
        Err(e) => report(err, &e),
    }
}

/// Reads a CSV table from disk.
pub fn read_csv(path: &Path) -> Result<OutputTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    OutputTable::from_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("irs-sim").chain(args.iter().copied()), None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = invoke(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn config_error_exits_one_and_names_key() {
        let (code, _, err) = invoke(&["run", "--set", "M=0"]);
        assert_eq!(code, 1);
        assert!(err.contains("`M`") || err.contains("M:") || err.contains(" M "), "{err}");
    }

    #[test]
    fn flops_table_columns() {
        let (code, out, _) = invoke(&["flops", "--set", "values=[100,200]"]);
        assert_eq!(code, 0);
        let t = OutputTable::from_csv(&out).unwrap();
        assert_eq!(t.header, ["N", "ais", "nsp", "irses"]);
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows.iter().all(|r| r[1] > r[2] && r[2] > r[3]));
    }

    #[test]
    fn flops_requires_divisible_n() {
        let (code, _, err) = invoke(&["flops", "--set", "values=[120]"]);
        assert_eq!(code, 1);
        assert!(err.contains("values"));
    }

    #[test]
    fn run_reports_each_method() {
        let (code, out, err) = invoke(&["run", "--trials", "3", "--set", "M=2", "--set", "N=4", "--methods", "ais,baseline-relay-only"]);
        assert_eq!(code, 0, "{err}");
        let t = OutputTable::from_csv(&out).unwrap();
        assert_eq!(t.header.len(), 9);
        assert_eq!(t.column("trials").unwrap(), vec![3.0]);
        assert_eq!(regenerate(&t).unwrap(), t);
    }
}
