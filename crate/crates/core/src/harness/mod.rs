//! Monte Carlo experiment engine.
//!
//! A trial is fully determined by `(config, trial_index)`: the trial seed is
//! derived from the base seed and the index, and every method evaluated in
//! that trial sees the same channel realization.

mod sweep;

pub use sweep::{sweep, summarize, MethodStats, SweepAxis, SweepRow, SweepSpec, SweepTable};

use std::fmt;
use std::str::FromStr;

use crate::beamforming::{
    ais_fixed_phase, ais_max_rp, irses_fixed_phase, irses_max_rp_mrc, irses_partition, nsp_fixed_phase,
    nsp_max_rp_mrc, second_slot_fixed_phase, second_slot_optimize, Convergence, FirstSlotSolution,
    InterferenceMode, NspMode, SecondSlotSolution,
};
use crate::channel::{sample_channels, ChannelSet, Geometry, LinkBudget};
use crate::error::{Error, Result};
use crate::metrics::{noise_variance_for_snr, rate_from_power, RateResult};

/// Evaluated network configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Ais,
    Nsp,
    Irses,
    AisFixedPhase,
    NspFixedPhase,
    IrsesFixedPhase,
    /// IRS plus a single-antenna relay.
    BaselineSingleAntenna,
    /// One hop S → IRS → D.
    BaselineIrsOnly,
    /// Multi-antenna relay without IRS.
    BaselineRelayOnly,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Ais,
        Method::Nsp,
        Method::Irses,
        Method::AisFixedPhase,
        Method::NspFixedPhase,
        Method::IrsesFixedPhase,
        Method::BaselineSingleAntenna,
        Method::BaselineIrsOnly,
        Method::BaselineRelayOnly,
    ];

    pub const PROPOSED: [Method; 3] = [Method::Ais, Method::Nsp, Method::Irses];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ais => "ais",
            Method::Nsp => "nsp",
            Method::Irses => "irses",
            Method::AisFixedPhase => "ais-fixed-phase",
            Method::NspFixedPhase => "nsp-fixed-phase",
            Method::IrsesFixedPhase => "irses-fixed-phase",
            Method::BaselineSingleAntenna => "baseline-single-antenna",
            Method::BaselineIrsOnly => "baseline-irs-only",
            Method::BaselineRelayOnly => "baseline-relay-only",
        }
    }

    fn uses_nsp(self) -> bool {
        matches!(self, Method::Nsp | Method::NspFixedPhase)
    }

    fn uses_irses(self) -> bool {
        matches!(self, Method::Irses | Method::IrsesFixedPhase)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Method::ALL.iter().map(|m| m.as_str()).collect();
                format!("unknown method `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Everything needed to reproduce a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub geometry: Geometry,
    /// Path loss, gains and powers. The noise variance stored here is
    /// ignored; it is derived from `snr_db`, see [`ScenarioConfig::link_budget`].
    pub budget: LinkBudget,
    /// Relay antennas M.
    pub antennas: usize,
    /// IRS elements N.
    pub elements: usize,
    pub method: Method,
    /// `(P_s + P_r) / σ_w²` in dB.
    pub snr_db: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub convergence: Convergence,
    pub nsp_mode: NspMode,
    pub irses_mode: InterferenceMode,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            geometry: Geometry::default(),
            budget: LinkBudget::default(),
            antennas: 16,
            elements: 160,
            method: Method::Ais,
            snr_db: 30.0,
            trials: 500,
            base_seed: 0,
            convergence: Convergence::default(),
            nsp_mode: NspMode::default(),
            irses_mode: InterferenceMode::default(),
        }
    }
}

impl ScenarioConfig {
    /// Link budget with the noise variance implied by `snr_db`.
    pub fn link_budget(&self) -> LinkBudget {
        LinkBudget {
            noise_variance_watt: noise_variance_for_snr(self.snr_db, self.budget.p_s_watt, self.budget.p_r_watt),
            ..self.budget
        }
    }

    pub fn noise_variance(&self) -> f64 {
        self.link_budget().noise_variance_watt
    }

    pub fn with_method(&self, method: Method) -> ScenarioConfig {
        ScenarioConfig {
            method,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.antennas == 0 {
            return Err(Error::config("M", "must be at least 1"));
        }
        if self.elements == 0 {
            return Err(Error::config("N", "must be at least 1"));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::config("snr_db", "must be finite"));
        }
        self.geometry.validate()?;
        self.link_budget().validate()?;
        self.convergence.validate()?;
        if self.method.uses_irses() && !self.elements.is_multiple_of(self.antennas) {
            return Err(Error::config(
                "N",
                format!(
                    "{} needs M | N, got M={}, N={}",
                    self.method, self.antennas, self.elements
                ),
            ));
        }
        if self.method.uses_nsp() {
            if self.antennas < 2 {
                return Err(Error::config("M", format!("{} needs M >= 2", self.method)));
            }
            if self.nsp_mode == NspMode::Literal && self.elements >= self.antennas {
                return Err(Error::config(
                    "nsp_mode",
                    format!(
                        "literal NSP needs M > N, got M={}, N={}",
                        self.antennas, self.elements
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Outcome of one trial of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub method: Method,
    pub result: RateResult,
    pub trace_r: Vec<f64>,
    pub trace_d: Vec<f64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index` under `base_seed`.
pub fn trial_seed(base_seed: u64, trial_index: usize) -> u64 {
    splitmix64(base_seed ^ splitmix64(trial_index as u64))
}

fn partition_seed(trial_seed: u64) -> u64 {
    splitmix64(trial_seed ^ 0x1125_E5E5_1EC7_0000)
}

fn two_hop(method: Method, index: usize, seed: u64, first: FirstSlotSolution, second: SecondSlotSolution) -> TrialRecord {
    TrialRecord {
        trial_index: index,
        seed,
        method,
        result: RateResult::two_hop(first.rate_r, second.rate_d, first.iterations, second.iterations),
        trace_r: first.trace,
        trace_d: second.trace,
    }
}

/// IRS-only reference: the S → IRS → D hop with every element aligned.
fn irs_only_rate(config: &ScenarioConfig, channels: &ChannelSet) -> Result<f64> {
    // θ_i = arg(h_id,i) − arg(h_si,i) makes every term of h_idᴴ Θ h_si real positive
    let gain: crate::linalg::C64 = channels
        .h_id
        .iter()
        .zip(channels.h_si.iter())
        .map(|(d, s)| {
            let theta = d.arg() - s.arg();
            d.conj() * crate::linalg::unit_phasor(theta) * s
        })
        .sum();
    rate_from_power(config.budget.p_s_watt * gain.norm_sqr(), config.noise_variance())
}

fn evaluate(config: &ScenarioConfig, method: Method, channels: &ChannelSet, index: usize, seed: u64) -> Result<TrialRecord> {
    let p_s = config.budget.p_s_watt;
    let p_r = config.budget.p_r_watt;
    let noise = config.noise_variance();
    let conv = &config.convergence;
    let m = channels.antennas();
    let record = match method {
        Method::Ais => two_hop(
            method,
            index,
            seed,
            ais_max_rp(channels, p_s, noise, conv)?,
            second_slot_optimize(channels, p_r, noise, conv)?,
        ),
        Method::AisFixedPhase => two_hop(
            method,
            index,
            seed,
            ais_fixed_phase(channels, p_s, noise)?,
            second_slot_fixed_phase(channels, p_r, noise)?,
        ),
        Method::Nsp => two_hop(
            method,
            index,
            seed,
            nsp_max_rp_mrc(channels, p_s, noise, conv, config.nsp_mode)?,
            second_slot_optimize(channels, p_r, noise, conv)?,
        ),
        Method::NspFixedPhase => two_hop(
            method,
            index,
            seed,
            nsp_fixed_phase(channels, p_s, noise, config.nsp_mode)?,
            second_slot_fixed_phase(channels, p_r, noise)?,
        ),
        Method::Irses | Method::IrsesFixedPhase => {
            let partition = irses_partition(channels.elements(), m, partition_seed(seed))?;
            let noise_per_antenna = vec![noise; m];
            if method == Method::Irses {
                two_hop(
                    method,
                    index,
                    seed,
                    irses_max_rp_mrc(channels, p_s, &noise_per_antenna, &partition, config.irses_mode)?,
                    second_slot_optimize(channels, p_r, noise, conv)?,
                )
            } else {
                two_hop(
                    method,
                    index,
                    seed,
                    irses_fixed_phase(channels, p_s, &noise_per_antenna, &partition, config.irses_mode)?,
                    second_slot_fixed_phase(channels, p_r, noise)?,
                )
            }
        }
        Method::BaselineSingleAntenna => {
            let single = channels.single_antenna(0);
            two_hop(
                method,
                index,
                seed,
                ais_max_rp(&single, p_s, noise, conv)?,
                second_slot_optimize(&single, p_r, noise, conv)?,
            )
        }
        Method::BaselineIrsOnly => TrialRecord {
            trial_index: index,
            seed,
            method,
            result: RateResult::single_hop(irs_only_rate(config, channels)?),
            trace_r: Vec::new(),
            trace_d: Vec::new(),
        },
        Method::BaselineRelayOnly => {
            let rate_r = rate_from_power(p_s * channels.h_sr.norm_squared(), noise)?;
            let rate_d = rate_from_power(p_r * channels.h_rd.norm_squared(), noise)?;
            TrialRecord {
                trial_index: index,
                seed,
                method,
                result: RateResult::two_hop(rate_r, rate_d, 0, 0),
                trace_r: Vec::new(),
                trace_d: Vec::new(),
            }
        }
    };
    Ok(record)
}

/// Runs every method in `methods` on the channel realization of trial
/// `trial_index`.
pub fn run_trial_methods(config: &ScenarioConfig, trial_index: usize, methods: &[Method]) -> Result<Vec<TrialRecord>> {
    for &method in methods {
        config.with_method(method).validate()?;
    }
    let seed = trial_seed(config.base_seed, trial_index);
    let channels = sample_channels(
        &config.geometry,
        &config.link_budget(),
        config.antennas,
        config.elements,
        seed,
    )?;
    methods
        .iter()
        .map(|&method| evaluate(config, method, &channels, trial_index, seed))
        .collect()
}

/// Runs `config.method` on trial `trial_index`.
pub fn run_trial(config: &ScenarioConfig, trial_index: usize) -> Result<TrialRecord> {
    let mut records = run_trial_methods(config, trial_index, &[config.method])?;
    Ok(records.remove(0))
}

/// IRS plus single-antenna relay: the AIS pipeline on relay antenna 0.
pub fn run_baseline_single_antenna(config: &ScenarioConfig, trial_index: usize) -> Result<TrialRecord> {
    run_trial(&config.with_method(Method::BaselineSingleAntenna), trial_index)
}

pub fn run_baseline_irs_only(config: &ScenarioConfig, trial_index: usize) -> Result<TrialRecord> {
    run_trial(&config.with_method(Method::BaselineIrsOnly), trial_index)
}

pub fn run_baseline_relay_only(config: &ScenarioConfig, trial_index: usize) -> Result<TrialRecord> {
    run_trial(&config.with_method(Method::BaselineRelayOnly), trial_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(method: Method) -> ScenarioConfig {
        ScenarioConfig {
            antennas: 4,
            elements: 8,
            method,
            trials: 10,
            base_seed: 5,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn trial_is_deterministic() {
        for m in Method::ALL {
            let c = small(m);
            assert_eq!(run_trial(&c, 3).unwrap(), run_trial(&c, 3).unwrap());
        }
    }

    #[test]
    fn system_rate_bounded_by_slot_rates() {
        for m in Method::ALL {
            let r = run_trial(&small(m), 1).unwrap().result;
            if !r.single_hop {
                assert!(r.rate_s <= r.rate_r / 2.0 && r.rate_s <= r.rate_d / 2.0);
            }
            assert!(r.rate_s >= 0.0);
        }
    }

    #[test]
    fn optimized_beats_fixed_phase() {
        for t in 0..10 {
            let opt = run_trial(&small(Method::Ais), t).unwrap().result;
            let fixed = run_trial(&small(Method::AisFixedPhase), t).unwrap().result;
            assert!(opt.rate_r >= fixed.rate_r - 1e-12);
            assert!(opt.rate_d >= fixed.rate_d - 1e-12);
        }
    }

    #[test]
    fn single_antenna_baseline_is_m1_ais() {
        let cfg = small(Method::Ais);
        let m1 = ScenarioConfig { antennas: 1, ..cfg.clone() };
        for t in 0..5 {
            let base = run_baseline_single_antenna(&cfg, t).unwrap().result;
            let ais = run_trial(&m1, t).unwrap().result;
            assert_eq!(base.rate_s, ais.rate_s);
        }
    }

    #[test]
    fn relay_only_ignores_irs_size() {
        let a = run_baseline_relay_only(&small(Method::Ais), 2).unwrap().result;
        let b = run_baseline_relay_only(&ScenarioConfig { elements: 32, ..small(Method::Ais) }, 2)
            .unwrap()
            .result;
        assert_eq!(a.rate_s, b.rate_s);
    }

    #[test]
    fn irs_only_scalar_case() {
        use crate::linalg::{CMat, CVec, C64};
        let cfg = ScenarioConfig { antennas: 1, elements: 1, ..ScenarioConfig::default() };
        let ch = ChannelSet {
            h_sr: CVec::from_element(1, C64::new(1.0, 0.0)),
            h_ir: CMat::from_element(1, 1, C64::new(1.0, 0.0)),
            h_si: CVec::from_element(1, C64::new(0.3, 0.0)),
            h_rd: CVec::from_element(1, C64::new(1.0, 0.0)),
            h_id: CVec::from_element(1, C64::new(0.2, 0.0)),
            h_ri: CMat::from_element(1, 1, C64::new(1.0, 0.0)),
        };
        let r = irs_only_rate(&cfg, &ch).unwrap();
        let expected = (1.0 + cfg.budget.p_s_watt * 0.06f64.powi(2) / cfg.noise_variance()).log2();
        assert!((r - expected).abs() < 1e-12);
    }

    #[test]
    fn configuration_errors_surface_early() {
        let mut c = small(Method::Irses);
        c.elements = 10;
        assert!(run_trial(&c, 0).unwrap_err().is_config());
        let mut c = small(Method::Nsp);
        c.antennas = 1;
        assert!(run_trial(&c, 0).unwrap_err().is_config());
        let mut c = small(Method::Ais);
        c.trials = 0;
        assert!(run_trial(&c, 0).unwrap_err().is_config());
    }
}
