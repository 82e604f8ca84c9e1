//! First-slot receive-beamformer / IRS phase co-design, the second-slot
//! transmit optimizer, and a phase-grid oracle for small instances.

mod ais;
mod irses;
mod nsp;
mod oracle;
mod second_slot;

pub use ais::{ais_fixed_phase, ais_max_rp, theta_update_ais, theta_update_ais_pinv, ur_update_ais};
pub use irses::{
    irses_antenna_gains, irses_fixed_phase, irses_max_rp_mrc, irses_partition, InterferenceMode, Partition,
};
pub use nsp::{nsp_fixed_phase, nsp_max_rp_mrc, nsp_projector, NspBranches, NspMode};
pub use oracle::{brute_force_max_rp, brute_force_second_slot, grid_power_slack, GridOptimum, MAX_GRID_POINTS};
pub use second_slot::{second_slot_fixed_phase, second_slot_optimize};

use crate::error::{Error, Result};
use crate::linalg::{unit_phasor, wrap_phase, CMat, CVec, C64};

/// Below this norm a combined channel is considered zero.
pub const DEGENERATE_NORM: f64 = 1e-30;

/// IRS reflection phases, stored in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftVector {
    theta: Vec<f64>,
    degenerate: Vec<usize>,
}

impl PhaseShiftVector {
    pub fn from_angles<I: IntoIterator<Item = f64>>(angles: I) -> Self {
        PhaseShiftVector {
            theta: angles.into_iter().map(wrap_phase).collect(),
            degenerate: Vec::new(),
        }
    }

    /// All-zero phases, i.e. `Θ = I`.
    pub fn identity(len: usize) -> Self {
        PhaseShiftVector {
            theta: vec![0.0; len],
            degenerate: Vec::new(),
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Elements whose phase was undetermined (zero cascade gain) and set to 0.
    pub fn degenerate_elements(&self) -> &[usize] {
        &self.degenerate
    }

    /// Reflection coefficients `e^{jθ_i}`.
    pub fn coefficients(&self) -> CVec {
        CVec::from_iterator(self.theta.len(), self.theta.iter().map(|&t| unit_phasor(t)))
    }
}

/// Unit-norm complex beamforming vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    weights: CVec,
}

impl Beamformer {
    /// Normalizes `direction`; fails if it is numerically zero.
    pub fn from_direction(direction: CVec) -> Result<Self> {
        let norm = direction.norm();
        if !(norm >= DEGENERATE_NORM) {
            return Err(Error::DegenerateChannel(format!(
                "cannot normalize a vector of norm {norm:e}"
            )));
        }
        Ok(Beamformer {
            weights: direction.unscale(norm),
        })
    }

    pub fn weights(&self) -> &CVec {
        &self.weights
    }

    /// `uᴴ x`.
    pub fn response(&self, x: &CVec) -> C64 {
        self.weights.dotc(x)
    }
}

/// Iteration controls for the alternating solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    /// Stop once successive rates differ by at most this (bits/s/Hz).
    pub epsilon: f64,
    pub max_iter: usize,
}

impl Default for Convergence {
    fn default() -> Self {
        Convergence {
            epsilon: 1e-4,
            max_iter: 50,
        }
    }
}

impl Convergence {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::config("epsilon", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

/// Which first-slot co-design produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Ais,
    Nsp(NspMode),
    Irses(InterferenceMode),
}

/// Receive-side combining produced by a first-slot scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum ReceiveCombiner {
    /// One receive beamformer `u_r`.
    Single(Beamformer),
    /// Separate beamformers for the direct (`u_rs`) and reflected (`u_ri`)
    /// signals, combined by MRC.
    Separated { source: Beamformer, irs: Beamformer },
    /// Per-antenna MRC weights `u_{r,m}`.
    PerAntenna(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstSlotSolution {
    pub scheme: Scheme,
    pub fixed_phase: bool,
    pub theta1: PhaseShiftVector,
    pub combiner: ReceiveCombiner,
    /// Effective receive power `P_R`, i.e. SNR × σ_r².
    pub receive_power_watt: f64,
    pub rate_r: f64,
    /// Objective rate after each alternating iteration.
    pub trace: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondSlotSolution {
    pub theta2: PhaseShiftVector,
    pub u_t: Beamformer,
    /// `P_D`.
    pub receive_power_watt: f64,
    pub rate_d: f64,
    pub trace: Vec<f64>,
    pub iterations: usize,
}

pub(crate) fn check_power_noise(power: f64, noise: f64) -> Result<()> {
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::Domain(format!("transmit power must be positive, got {power}")));
    }
    if !(noise > 0.0 && noise.is_finite()) {
        return Err(Error::Domain(format!("noise variance must be positive, got {noise}")));
    }
    Ok(())
}

#[inline]
pub(crate) fn rate(snr: f64) -> f64 {
    snr.ln_1p() / std::f64::consts::LN_2
}

/// `H diag(h)`: column `i` is the cascaded path through element `i`.
pub(crate) fn cascade_matrix(h: &CMat, diag: &CVec) -> CMat {
    let mut out = h.clone();
    for (i, mut col) in out.column_iter_mut().enumerate() {
        col *= diag[i];
    }
    out
}

/// `direct + cascade · e^{jθ}`.
pub(crate) fn combined_channel(direct: &CVec, cascade: &CMat, theta: &PhaseShiftVector) -> CVec {
    direct + cascade * theta.coefficients()
}

/// Phases that rotate every cascaded path onto the direct path as seen
/// through `u`: `θ_i = arg(uᴴ d) − arg((uᴴ G)_i)`.
pub(crate) fn align_to_direct(direct: &CVec, cascade: &CMat, u: &Beamformer) -> PhaseShiftVector {
    let reference = u.response(direct).arg();
    let projected = cascade.ad_mul(u.weights());
    let mut degenerate = Vec::new();
    let theta = projected
        .iter()
        .enumerate()
        .map(|(i, g)| {
            if g.norm() <= f64::MIN_POSITIVE {
                degenerate.push(i);
                0.0
            } else {
                wrap_phase(reference - g.conj().arg())
            }
        })
        .collect();
    PhaseShiftVector { theta, degenerate }
}

pub(crate) struct Alternation {
    pub theta: PhaseShiftVector,
    pub beam: Beamformer,
    pub combined: CVec,
    pub trace: Vec<f64>,
}

/// Block-coordinate ascent on `|uᴴ (d + G θ)|²`: phase alignment for fixed
/// `u`, matched filter for fixed `θ`.
pub(crate) fn alternate_alignment(
    direct: &CVec,
    cascade: &CMat,
    initial: Beamformer,
    power: f64,
    noise: f64,
    conv: &Convergence,
) -> Result<Alternation> {
    conv.validate()?;
    let mut beam = initial;
    let mut trace: Vec<f64> = Vec::new();
    let mut theta = PhaseShiftVector::identity(cascade.ncols());
    let mut combined = direct.clone();
    for _ in 0..conv.max_iter {
        theta = align_to_direct(direct, cascade, &beam);
        combined = combined_channel(direct, cascade, &theta);
        beam = Beamformer::from_direction(combined.clone())?;
        let r = rate(power * combined.norm_squared() / noise);
        let done = trace.last().is_some_and(|prev| (r - prev).abs() <= conv.epsilon);
        trace.push(r);
        if done {
            break;
        }
    }
    Ok(Alternation {
        theta,
        beam,
        combined,
        trace,
    })
}
