use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{run_trial_methods, Method, ScenarioConfig};
use crate::error::{Error, Result};

/// Swept scenario parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    SnrDb,
    /// IRS elements N.
    Elements,
    /// Relay antennas M.
    Antennas,
    /// Horizontal position of RS and IRS, moved together parallel to S–D.
    Distance,
}

impl SweepAxis {
    /// Column name used in output tables.
    pub fn column(self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::Elements => "N",
            SweepAxis::Antennas => "M",
            SweepAxis::Distance => "d",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "snr_db" | "snr" => Ok(SweepAxis::SnrDb),
            "N" | "n" => Ok(SweepAxis::Elements),
            "M" | "m" => Ok(SweepAxis::Antennas),
            "d" | "distance" | "distance_d" => Ok(SweepAxis::Distance),
            other => Err(format!("unknown sweep axis `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Strictly increasing axis values.
    pub values: Vec<f64>,
    /// Everything that is not swept. Its `method` field is ignored.
    pub base: ScenarioConfig,
    pub methods: Vec<Method>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodStats {
    pub mean: f64,
    /// Standard error of the mean.
    pub std_err: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// One entry per method, in [`SweepTable::methods`] order.
    pub stats: Vec<MethodStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub methods: Vec<Method>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column(&self, method: Method) -> Option<Vec<MethodStats>> {
        let k = self.methods.iter().position(|&m| m == method)?;
        Some(self.rows.iter().map(|r| r.stats[k]).collect())
    }
}

/// Sample mean and standard error (n − 1 denominator; zero for one sample).
pub fn summarize(samples: &[f64]) -> MethodStats {
    let n = samples.len();
    if n == 0 {
        return MethodStats {
            mean: f64::NAN,
            std_err: f64::NAN,
            trials: 0,
        };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let std_err = if n > 1 {
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    MethodStats { mean, std_err, trials: n }
}

fn count_value(axis: SweepAxis, key: &str, value: f64) -> Result<usize> {
    if value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(Error::config(
            key,
            format!("{axis} sweep value must be a positive integer, got {value}"),
        ))
    }
}

/// Scenario at one point of the sweep.
pub fn config_at(base: &ScenarioConfig, axis: SweepAxis, value: f64) -> Result<ScenarioConfig> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::SnrDb => {
            if !value.is_finite() {
                return Err(Error::config("values", "SNR must be finite"));
            }
            cfg.snr_db = value;
        }
        SweepAxis::Elements => cfg.elements = count_value(axis, "values", value)?,
        SweepAxis::Antennas => cfg.antennas = count_value(axis, "values", value)?,
        SweepAxis::Distance => {
            let (lo, hi) = (base.geometry.pos_s.x, base.geometry.pos_d.x);
            if !(value > lo && value < hi) {
                return Err(Error::config(
                    "values",
                    format!("distance {value} must lie strictly between S ({lo}) and D ({hi})"),
                ));
            }
            cfg.geometry.pos_rs.x = value;
            cfg.geometry.pos_irs.x = value;
        }
    }
    Ok(cfg)
}

/// Mean end-to-end rate per axis value and method.
///
/// Trials run in parallel; results are merged in trial order, so the table
/// does not depend on the worker count.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.values.is_empty() {
        return Err(Error::config("values", "sweep needs at least one value"));
    }
    if spec.values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::config("values", "sweep values must be strictly increasing"));
    }
    if spec.methods.is_empty() {
        return Err(Error::config("methods", "at least one method is required"));
    }
    let configs = spec
        .values
        .iter()
        .map(|&v| {
            let cfg = config_at(&spec.base, spec.axis, v)?;
            for &m in &spec.methods {
                cfg.with_method(m).validate()?;
            }
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(configs.len());
    for (cfg, &value) in configs.iter().zip(&spec.values) {
        let records = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial_methods(cfg, t, &spec.methods))
            .collect::<Result<Vec<_>>>()?;
        let stats = (0..spec.methods.len())
            .map(|k| {
                let samples: Vec<f64> = records.iter().map(|r| r[k].result.rate_s).collect();
                summarize(&samples)
            })
            .collect();
        rows.push(SweepRow { value, stats });
    }
    Ok(SweepTable {
        axis: spec.axis,
        methods: spec.methods.clone(),
        rows,
    })
}
