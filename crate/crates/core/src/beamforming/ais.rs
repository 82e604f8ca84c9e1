//! Alternating (AIS) receive-power maximization for the first slot.

use super::{
    align_to_direct, alternate_alignment, cascade_matrix, check_power_noise, combined_channel, rate,
    Beamformer, Convergence, FirstSlotSolution, PhaseShiftVector, ReceiveCombiner, Scheme,
};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{pinv, wrap_phase, CVec};

fn check_beam(channels: &ChannelSet, u: &Beamformer) -> Result<()> {
    channels.check_shapes()?;
    if u.weights().len() != channels.antennas() {
        return Err(Error::Domain(format!(
            "beamformer has length {}, expected {}",
            u.weights().len(),
            channels.antennas()
        )));
    }
    Ok(())
}

/// Optimal IRS phases for a fixed receive beamformer `u_r`.
///
/// Every cascaded path is rotated to the phase of the direct path at the
/// beamformer output: `θ_i = arg(u_rᴴ h_sr) − arg((u_rᴴ H_ir diag(h_si))_i)`.
/// This is the closed form of the pseudo-inverse stationary point, see
/// [`theta_update_ais_pinv`].
pub fn theta_update_ais(channels: &ChannelSet, u_r: &Beamformer) -> Result<PhaseShiftVector> {
    check_beam(channels, u_r)?;
    let cascade = cascade_matrix(&channels.h_ir, &channels.h_si);
    Ok(align_to_direct(&channels.h_sr, &cascade, u_r))
}

/// Phase update evaluated through the explicit pseudo-inverse
/// `x = A† b` with `A = H_siᴴ H_irᴴ u uᴴ H_ir H_si` and
/// `b = H_siᴴ H_irᴴ u uᴴ h_sr`, taking `θ_i = arg(x_i)`.
///
/// O(N³) because of the SVD; kept as an independent route for checking
/// [`theta_update_ais`].
pub fn theta_update_ais_pinv(channels: &ChannelSet, u_r: &Beamformer) -> Result<PhaseShiftVector> {
    check_beam(channels, u_r)?;
    let cascade = cascade_matrix(&channels.h_ir, &channels.h_si);
    let v: CVec = cascade.ad_mul(u_r.weights());
    let a = &v * v.adjoint();
    let b = &v * u_r.response(&channels.h_sr);
    let x = pinv(&a) * b;
    let mut degenerate = Vec::new();
    let theta = x
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            if xi.norm() <= f64::MIN_POSITIVE {
                degenerate.push(i);
                0.0
            } else {
                wrap_phase(xi.arg())
            }
        })
        .collect();
    Ok(PhaseShiftVector { theta, degenerate })
}

/// Matched-filter receive beamformer for fixed phases:
/// `u_r = c / ‖c‖` with `c = h_sr + H_ir Θ₁ h_si`.
pub fn ur_update_ais(channels: &ChannelSet, theta1: &PhaseShiftVector) -> Result<Beamformer> {
    channels.check_shapes()?;
    if theta1.len() != channels.elements() {
        return Err(Error::Domain(format!(
            "phase vector has length {}, expected {}",
            theta1.len(),
            channels.elements()
        )));
    }
    let cascade = cascade_matrix(&channels.h_ir, &channels.h_si);
    Beamformer::from_direction(combined_channel(&channels.h_sr, &cascade, theta1))
}

/// Alternates [`theta_update_ais`] and [`ur_update_ais`] starting from the
/// matched filter of the direct link, until the rate settles within
/// `conv.epsilon` or `conv.max_iter` iterations run.
pub fn ais_max_rp(channels: &ChannelSet, p_s: f64, noise: f64, conv: &Convergence) -> Result<FirstSlotSolution> {
    channels.check_shapes()?;
    check_power_noise(p_s, noise)?;
    let initial = Beamformer::from_direction(channels.h_sr.clone())?;
    let cascade = cascade_matrix(&channels.h_ir, &channels.h_si);
    let alt = alternate_alignment(&channels.h_sr, &cascade, initial, p_s, noise, conv)?;
    let receive_power = p_s * alt.beam.response(&alt.combined).norm_sqr();
    Ok(FirstSlotSolution {
        scheme: Scheme::Ais,
        fixed_phase: false,
        iterations: alt.trace.len(),
        rate_r: rate(receive_power / noise),
        theta1: alt.theta,
        combiner: ReceiveCombiner::Single(alt.beam),
        receive_power_watt: receive_power,
        trace: alt.trace,
    })
}

/// `Θ₁ = I`; only the receive beamformer is optimized.
pub fn ais_fixed_phase(channels: &ChannelSet, p_s: f64, noise: f64) -> Result<FirstSlotSolution> {
    channels.check_shapes()?;
    check_power_noise(p_s, noise)?;
    let theta1 = PhaseShiftVector::identity(channels.elements());
    let u_r = ur_update_ais(channels, &theta1)?;
    let c = combined_channel(
        &channels.h_sr,
        &cascade_matrix(&channels.h_ir, &channels.h_si),
        &theta1,
    );
    let receive_power = p_s * u_r.response(&c).norm_sqr();
    let rate_r = rate(receive_power / noise);
    Ok(FirstSlotSolution {
        scheme: Scheme::Ais,
        fixed_phase: true,
        theta1,
        combiner: ReceiveCombiner::Single(u_r),
        receive_power_watt: receive_power,
        rate_r,
        trace: vec![rate_r],
        iterations: 0,
    })
}
