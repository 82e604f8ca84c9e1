//! IRS element selection (IRSES) plus per-antenna MRC.
//!
//! The N elements are split evenly into M subsets; subset `m` is phase
//! aligned to relay antenna `m` and the antenna outputs are MRC-combined.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_power_noise, rate, FirstSlotSolution, PhaseShiftVector, ReceiveCombiner, Scheme};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{unit_phasor, wrap_phase, C64};

/// Treatment of the elements assigned to other antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterferenceMode {
    /// Reflections from the other subsets are assumed to average out at
    /// antenna `m` and are dropped.
    #[default]
    Idealized,
    /// Reflections from every element reach every antenna; the unselected
    /// subsets add (unaligned) to the useful signal.
    Full,
}

impl InterferenceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InterferenceMode::Idealized => "idealized",
            InterferenceMode::Full => "full",
        }
    }
}

impl std::str::FromStr for InterferenceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "idealized" => Ok(InterferenceMode::Idealized),
            "full" => Ok(InterferenceMode::Full),
            other => Err(format!("expected `idealized` or `full`, got `{other}`")),
        }
    }
}

/// Even assignment of IRS elements to relay antennas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    antennas: usize,
}

impl Partition {
    /// Builds a partition from an explicit element → antenna map (0-based).
    pub fn from_assignment(assignment: Vec<usize>, antennas: usize) -> Result<Self> {
        let n = assignment.len();
        if antennas == 0 || n == 0 || !n.is_multiple_of(antennas) {
            return Err(Error::config("N", format!("{n} elements cannot be split evenly over {antennas} antennas")));
        }
        let k = n / antennas;
        let mut counts = vec![0usize; antennas];
        for &m in &assignment {
            if m >= antennas {
                return Err(Error::config("partition", format!("antenna index {m} out of range")));
            }
            counts[m] += 1;
        }
        if counts.iter().any(|&c| c != k) {
            return Err(Error::config("partition", "subsets must all have N/M elements"));
        }
        Ok(Partition { assignment, antennas })
    }

    /// Antenna index of every element.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn elements(&self) -> usize {
        self.assignment.len()
    }

    /// Elements per subset, `K = N / M`.
    pub fn subset_size(&self) -> usize {
        self.assignment.len() / self.antennas
    }

    /// Element indices of subset `m`, ascending.
    pub fn subset(&self, m: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a == m).then_some(i))
            .collect()
    }
}

/// Uniformly random even partition of `elements` over `antennas`.
pub fn irses_partition(elements: usize, antennas: usize, seed: u64) -> Result<Partition> {
    if antennas == 0 {
        return Err(Error::config("M", "must be at least 1"));
    }
    if elements == 0 {
        return Err(Error::config("N", "must be at least 1"));
    }
    if !elements.is_multiple_of(antennas) {
        return Err(Error::config(
            "N",
            format!("IRSES needs M | N, got N={elements}, M={antennas}"),
        ));
    }
    let mut order: Vec<usize> = (0..elements).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let k = elements / antennas;
    let mut assignment = vec![0; elements];
    for (slot, &element) in order.iter().enumerate() {
        assignment[element] = slot / k;
    }
    Ok(Partition { assignment, antennas })
}

/// Per-antenna combined amplitudes `c_m` (direct plus reflected) for the given phases.
pub fn irses_antenna_gains(channels: &ChannelSet, partition: &Partition, theta: &PhaseShiftVector, mode: InterferenceMode) -> Vec<C64> {
    let coeffs: Vec<C64> = theta.angles().iter().map(|&t| unit_phasor(t)).collect();
    (0..channels.antennas())
        .map(|m| {
            let mut c = channels.h_sr[m];
            for (i, &owner) in partition.assignment().iter().enumerate() {
                if mode == InterferenceMode::Full || owner == m {
                    c += channels.h_ir[(m, i)] * coeffs[i] * channels.h_si[i];
                }
            }
            c
        })
        .collect()
}

fn evaluate(
    channels: &ChannelSet,
    p_s: f64,
    noise_per_antenna: &[f64],
    partition: &Partition,
    mode: InterferenceMode,
    theta1: PhaseShiftVector,
    fixed_phase: bool,
) -> Result<FirstSlotSolution> {
    channels.check_shapes()?;
    check_partition(channels, partition)?;
    if noise_per_antenna.len() != channels.antennas() {
        return Err(Error::Domain(format!(
            "expected {} per-antenna noise variances, got {}",
            channels.antennas(),
            noise_per_antenna.len()
        )));
    }
    for &noise in noise_per_antenna {
        check_power_noise(p_s, noise)?;
    }

    let gains = irses_antenna_gains(channels, partition, &theta1, mode);
    let mut num = 0.0;
    let mut den = 0.0;
    for (c, &noise) in gains.iter().zip(noise_per_antenna) {
        let p = c.norm_sqr();
        num += p * p;
        den += p * noise;
    }
    let snr = if den > 0.0 { num * p_s / den } else { 0.0 };
    let weights = gains
        .iter()
        .map(|c| if c.norm() > 0.0 { c.conj() / c.norm() } else { C64::new(0.0, 0.0) })
        .collect();
    // effective P_R referenced to the mean noise variance
    let mean_noise = noise_per_antenna.iter().sum::<f64>() / noise_per_antenna.len() as f64;
    let rate_r = rate(snr);
    Ok(FirstSlotSolution {
        scheme: Scheme::Irses(mode),
        fixed_phase,
        theta1,
        combiner: ReceiveCombiner::PerAntenna(weights),
        receive_power_watt: snr * mean_noise,
        rate_r,
        trace: vec![rate_r],
        iterations: 0,
    })
}

fn check_partition(channels: &ChannelSet, partition: &Partition) -> Result<()> {
    if partition.antennas() != channels.antennas() || partition.elements() != channels.elements() {
        return Err(Error::Domain(format!(
            "partition is for M={}, N={} but channels have M={}, N={}",
            partition.antennas(),
            partition.elements(),
            channels.antennas(),
            channels.elements()
        )));
    }
    Ok(())
}

/// IRSES-based Max-RP plus MRC.
///
/// Element `i` of subset `m` gets `θ_i = arg(h_sr,m) − arg(H_ir[m,i]) − arg(h_si,i)`,
/// so all selected reflections arrive in phase with the direct path at
/// antenna `m`. The rate is
/// `log2(1 + P_s Σ|c_m|⁴ / Σ|c_m|² σ_m²)`.
pub fn irses_max_rp_mrc(
    channels: &ChannelSet,
    p_s: f64,
    noise_per_antenna: &[f64],
    partition: &Partition,
    mode: InterferenceMode,
) -> Result<FirstSlotSolution> {
    channels.check_shapes()?;
    check_partition(channels, partition)?;
    let theta = PhaseShiftVector::from_angles(partition.assignment().iter().enumerate().map(|(i, &m)| {
        channels.h_sr[m].arg() - channels.h_ir[(m, i)].arg() - channels.h_si[i].arg()
    }));
    debug_assert!(theta.angles().iter().all(|&t| t == wrap_phase(t)));
    evaluate(channels, p_s, noise_per_antenna, partition, mode, theta, false)
}

/// IRSES combining with `Θ₁ = I`.
pub fn irses_fixed_phase(
    channels: &ChannelSet,
    p_s: f64,
    noise_per_antenna: &[f64],
    partition: &Partition,
    mode: InterferenceMode,
) -> Result<FirstSlotSolution> {
    let theta = PhaseShiftVector::identity(channels.elements());
    evaluate(channels, p_s, noise_per_antenna, partition, mode, theta, true)
}
