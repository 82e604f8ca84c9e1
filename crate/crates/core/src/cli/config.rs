//! Flat key-value run configuration.
//!
//! Sources are applied in increasing precedence: command defaults, the
//! `IRS_SIM_SEED` environment variable, the `--config` file, `--set`
//! overrides, then the dedicated flags (`--trials`, `--seed`, `--methods`).

use toml::Value;

use super::CommandKind;
use crate::error::{Error, Result};
use crate::harness::{Method, ScenarioConfig, SweepAxis, SweepSpec};

/// All recognized configuration keys, in echo order.
pub const KEYS: [&str; 28] = [
    "pos_s_x",
    "pos_s_y",
    "pos_rs_x",
    "pos_rs_y",
    "pos_irs_x",
    "pos_irs_y",
    "pos_d_x",
    "pos_d_y",
    "alpha",
    "gain_s_dbi",
    "gain_rs_dbi",
    "gain_d_dbi",
    "gain_irs_dbi",
    "p_s_watt",
    "p_r_watt",
    "M",
    "N",
    "snr_db",
    "trials",
    "seed",
    "epsilon",
    "max_iter",
    "nsp_mode",
    "irses_mode",
    "method",
    "methods",
    "values",
    "flops_iterations",
];

/// Scenario plus the command-level choices that are not part of a single
/// trial.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub scenario: ScenarioConfig,
    pub methods: Vec<Method>,
    /// Axis values for sweeps, N values for `flops`.
    pub values: Vec<f64>,
    /// Iteration counts L1..L5 used by `flops`.
    pub flops_iterations: u64,
}

fn steps(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + step * k as f64).collect()
}

impl RunSettings {
    /// Defaults of each subcommand, on top of the standard scenario
    /// (positions, α = 2.4, gains 5/5/2 dBi, P_s = P_r = 10 W).
    pub fn defaults_for(command: CommandKind) -> Self {
        let mut s = RunSettings {
            scenario: ScenarioConfig::default(),
            methods: vec![Method::Ais, Method::Nsp, Method::Irses, Method::BaselineSingleAntenna],
            values: Vec::new(),
            flops_iterations: 3,
        };
        let sc = &mut s.scenario;
        match command {
            CommandKind::Run | CommandKind::Selftest => {}
            CommandKind::SweepSnr => s.values = steps(0.0, 5.0, 7),
            CommandKind::SweepN => s.values = steps(32.0, 32.0, 10),
            CommandKind::SweepM => {
                sc.elements = 200;
                s.values = vec![2.0, 4.0, 5.0, 8.0, 10.0, 20.0, 25.0, 40.0, 50.0];
            }
            CommandKind::SweepDistance => {
                sc.antennas = 50;
                sc.elements = 200;
                s.values = steps(10.0, 10.0, 9);
            }
            CommandKind::Flops => {
                sc.antennas = 50;
                s.values = steps(100.0, 100.0, 10);
            }
        }
        s
    }

    /// Settings that reproduce `spec` under the matching sweep command.
    pub fn from_sweep(spec: &SweepSpec) -> Self {
        RunSettings {
            scenario: spec.base.clone(),
            methods: spec.methods.clone(),
            values: spec.values.clone(),
            flops_iterations: 3,
        }
    }

    pub fn sweep_spec(&self, axis: SweepAxis) -> SweepSpec {
        SweepSpec {
            axis,
            values: self.values.clone(),
            base: self.scenario.clone(),
            methods: self.methods.clone(),
        }
    }

    /// Applies every key of a parsed configuration document.
    pub fn apply_table(&mut self, table: &toml::Table) -> Result<()> {
        for (key, value) in table {
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Parses and applies a configuration file body.
    pub fn apply_document(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config("config", e.message().to_string()))?;
        self.apply_table(&table)
    }

    /// Applies one `KEY=VALUE` override. Values that are not valid TOML
    /// literals are taken as bare strings.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(assignment, "expected KEY=VALUE"))?;
        let key = key.trim();
        let raw = raw.trim();
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(raw.to_string()));
        self.set(key, &value)
    }

    pub fn set_seed_from_env(&mut self, raw: &str) -> Result<()> {
        self.scenario.base_seed = raw
            .trim()
            .parse()
            .map_err(|_| Error::config("IRS_SIM_SEED", format!("expected an unsigned integer, got `{raw}`")))?;
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &Value) -> Result<()> {
        let sc = &mut self.scenario;
        match key {
            "pos_s_x" => sc.geometry.pos_s.x = float(key, value)?,
            "pos_s_y" => sc.geometry.pos_s.y = float(key, value)?,
            "pos_rs_x" => sc.geometry.pos_rs.x = float(key, value)?,
            "pos_rs_y" => sc.geometry.pos_rs.y = float(key, value)?,
            "pos_irs_x" => sc.geometry.pos_irs.x = float(key, value)?,
            "pos_irs_y" => sc.geometry.pos_irs.y = float(key, value)?,
            "pos_d_x" => sc.geometry.pos_d.x = float(key, value)?,
            "pos_d_y" => sc.geometry.pos_d.y = float(key, value)?,
            "alpha" => sc.budget.alpha = positive(key, value)?,
            "gain_s_dbi" => sc.budget.gain_s_dbi = float(key, value)?,
            "gain_rs_dbi" => sc.budget.gain_rs_dbi = float(key, value)?,
            "gain_d_dbi" => sc.budget.gain_d_dbi = float(key, value)?,
            "gain_irs_dbi" => sc.budget.gain_irs_dbi = float(key, value)?,
            "p_s_watt" => sc.budget.p_s_watt = positive(key, value)?,
            "p_r_watt" => sc.budget.p_r_watt = positive(key, value)?,
            "M" => sc.antennas = count(key, value)? as usize,
            "N" => sc.elements = count(key, value)? as usize,
            "snr_db" => sc.snr_db = float(key, value)?,
            "trials" => sc.trials = count(key, value)? as usize,
            "seed" => sc.base_seed = seed(key, value)?,
            "epsilon" => sc.convergence.epsilon = positive(key, value)?,
            "max_iter" => sc.convergence.max_iter = count(key, value)? as usize,
            "nsp_mode" => sc.nsp_mode = parse_str(key, value)?,
            "irses_mode" => sc.irses_mode = parse_str(key, value)?,
            "method" => sc.method = parse_str(key, value)?,
            "methods" => self.methods = methods(key, value)?,
            "values" => self.values = numbers(key, value)?,
            "flops_iterations" => self.flops_iterations = count(key, value)?,
            _ => return Err(Error::config(key, "unknown configuration key")),
        }
        Ok(())
    }

    /// Every key with its current value, in [`KEYS`] order.
    pub fn to_pairs(&self) -> Vec<(String, Value)> {
        let sc = &self.scenario;
        let g = &sc.geometry;
        let b = &sc.budget;
        let f = Value::Float;
        let int = |v: u64| Value::Integer(v as i64);
        let seed = if sc.base_seed <= i64::MAX as u64 {
            int(sc.base_seed)
        } else {
            Value::String(sc.base_seed.to_string())
        };
        let values = [
            f(g.pos_s.x),
            f(g.pos_s.y),
            f(g.pos_rs.x),
            f(g.pos_rs.y),
            f(g.pos_irs.x),
            f(g.pos_irs.y),
            f(g.pos_d.x),
            f(g.pos_d.y),
            f(b.alpha),
            f(b.gain_s_dbi),
            f(b.gain_rs_dbi),
            f(b.gain_d_dbi),
            f(b.gain_irs_dbi),
            f(b.p_s_watt),
            f(b.p_r_watt),
            int(sc.antennas as u64),
            int(sc.elements as u64),
            f(sc.snr_db),
            int(sc.trials as u64),
            seed,
            f(sc.convergence.epsilon),
            int(sc.convergence.max_iter as u64),
            Value::String(sc.nsp_mode.as_str().to_string()),
            Value::String(sc.irses_mode.as_str().to_string()),
            Value::String(sc.method.as_str().to_string()),
            Value::String(self.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(",")),
            Value::Array(self.values.iter().map(|&v| f(v)).collect()),
            int(self.flops_iterations),
        ];
        KEYS.iter().map(|k| k.to_string()).zip(values).collect()
    }
}

fn mismatch(key: &str, expected: &str, value: &Value) -> Error {
    Error::config(key, format!("expected {expected}, got {}", value.type_str()))
}

fn float(key: &str, value: &Value) -> Result<f64> {
    let v = match value {
        Value::Float(f) => *f,
        Value::Integer(i) => *i as f64,
        other => return Err(mismatch(key, "a number", other)),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, "must be finite"))
    }
}

fn positive(key: &str, value: &Value) -> Result<f64> {
    let v = float(key, value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must be positive, got {v}")))
    }
}

fn count(key: &str, value: &Value) -> Result<u64> {
    match value {
        Value::Integer(i) if *i >= 1 => Ok(*i as u64),
        Value::Integer(i) => Err(Error::config(key, format!("must be at least 1, got {i}"))),
        other => Err(mismatch(key, "an integer", other)),
    }
}

fn seed(key: &str, value: &Value) -> Result<u64> {
    match value {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        Value::Integer(i) => Err(Error::config(key, format!("must be non-negative, got {i}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::config(key, format!("expected an unsigned integer, got `{s}`"))),
        other => Err(mismatch(key, "an integer", other)),
    }
}

fn parse_str<T: std::str::FromStr<Err = String>>(key: &str, value: &Value) -> Result<T> {
    match value {
        Value::String(s) => s.parse().map_err(|e| Error::config(key, e)),
        other => Err(mismatch(key, "a string", other)),
    }
}

fn methods(key: &str, value: &Value) -> Result<Vec<Method>> {
    let names: Vec<String> = match value {
        Value::String(s) => s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect(),
        Value::Array(items) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                other => Err(mismatch(key, "a list of method names", other)),
            })
            .collect::<Result<_>>()?,
        other => return Err(mismatch(key, "a comma-separated list of methods", other)),
    };
    let mut out = Vec::new();
    for name in names {
        match name.as_str() {
            "all" => out.extend(Method::ALL),
            "proposed" => out.extend(Method::PROPOSED),
            other => out.push(other.parse().map_err(|e| Error::config(key, e))?),
        }
    }
    out.dedup();
    if out.is_empty() {
        return Err(Error::config(key, "at least one method is required"));
    }
    Ok(out)
}

fn numbers(key: &str, value: &Value) -> Result<Vec<f64>> {
    match value {
        Value::Array(items) => items.iter().map(|v| float(key, v)).collect(),
        Value::Float(_) | Value::Integer(_) => Ok(vec![float(key, value)?]),
        Value::String(s) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::config(key, format!("`{}` is not a number", p.trim())))
            })
            .collect(),
        other => Err(mismatch(key, "a list of numbers", other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamforming::NspMode;

    #[test]
    fn empty_document_keeps_defaults() {
        let mut s = RunSettings::defaults_for(CommandKind::Run);
        s.apply_document("").unwrap();
        assert_eq!(s, RunSettings::defaults_for(CommandKind::Run));
        let b = &s.scenario.budget;
        assert_eq!((b.alpha, b.gain_s_dbi, b.gain_rs_dbi, b.gain_d_dbi), (2.4, 5.0, 5.0, 2.0));
        assert_eq!((b.p_s_watt, b.p_r_watt), (10.0, 10.0));
        let g = &s.scenario.geometry;
        assert_eq!((g.pos_rs.x, g.pos_irs.y, g.pos_d.x), (50.0, 10.0, 100.0));
    }

    #[test]
    fn zero_antennas_names_key() {
        let mut s = RunSettings::defaults_for(CommandKind::Run);
        match s.apply_document("M = 0").unwrap_err() {
            Error::Config { key, .. } => assert_eq!(key, "M"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_and_type_mismatch() {
        let mut s = RunSettings::defaults_for(CommandKind::Run);
        assert!(matches!(s.apply_document("bogus = 1"), Err(Error::Config { key, .. }) if key == "bogus"));
        assert!(matches!(s.apply_document("alpha = \"x\""), Err(Error::Config { key, .. }) if key == "alpha"));
        assert!(matches!(s.apply_override("trials=1.5"), Err(Error::Config { key, .. }) if key == "trials"));
    }

    #[test]
    fn overrides_parse_bare_strings_and_lists() {
        let mut s = RunSettings::defaults_for(CommandKind::Run);
        s.apply_override("methods=ais,baseline-relay-only").unwrap();
        assert_eq!(s.methods, vec![Method::Ais, Method::BaselineRelayOnly]);
        s.apply_override("values=0,10,20").unwrap();
        assert_eq!(s.values, vec![0.0, 10.0, 20.0]);
        s.apply_override("values = [1, 2.5]").unwrap();
        assert_eq!(s.values, vec![1.0, 2.5]);
        s.apply_override("nsp_mode=literal").unwrap();
        assert_eq!(s.scenario.nsp_mode, NspMode::Literal);
        s.apply_override("seed=18446744073709551615").unwrap();
        assert_eq!(s.scenario.base_seed, u64::MAX);
    }

    #[test]
    fn echo_round_trips() {
        let mut s = RunSettings::defaults_for(CommandKind::SweepDistance);
        s.apply_override("seed=\"18446744073709551615\"").unwrap();
        s.apply_override("snr_db=17.25").unwrap();
        let mut doc = String::new();
        for (k, v) in s.to_pairs() {
            doc.push_str(&format!("{k} = {v}\n"));
        }
        let mut back = RunSettings::defaults_for(CommandKind::Run);
        back.apply_document(&doc).unwrap();
        assert_eq!(back, s);
    }
}
