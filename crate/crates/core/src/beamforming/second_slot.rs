//! Second slot: joint transmit beamformer `u_t` and IRS phases `θ₂`.
//!
//! The destination has a single antenna, so the problem has the same
//! structure as the first-slot AIS problem with the combined row channel
//! `h_rdᴴ + h_idᴴ Θ₂ H_riᴴ`. Its conjugate transpose is
//! `h_rd + H_ri diag(h_id) e^{-jθ₂}`, so the first-slot alternation runs on
//! `(h_rd, H_ri diag(h_id))` and the resulting phases are negated.

use super::{
    alternate_alignment, cascade_matrix, check_power_noise, rate, Beamformer, Convergence, PhaseShiftVector,
    SecondSlotSolution,
};
use crate::channel::ChannelSet;
use crate::error::Result;
use crate::linalg::CVec;

fn conjugate_phases(theta: &PhaseShiftVector) -> PhaseShiftVector {
    let mut out = PhaseShiftVector::from_angles(theta.angles().iter().map(|t| -t));
    out.degenerate = theta.degenerate.clone();
    out
}

/// Conjugate-transposed combined channel `(h_rdᴴ + h_idᴴ Θ₂ H_riᴴ)ᴴ`.
pub(crate) fn downlink_channel(channels: &ChannelSet, theta2: &PhaseShiftVector) -> CVec {
    let cascade = cascade_matrix(&channels.h_ri, &channels.h_id);
    &channels.h_rd + cascade * conjugate_phases(theta2).coefficients()
}

/// Alternates the θ₂ alignment
/// `θ₂,i = arg(h_rdᴴ u_t) − arg((h_idᴴ)_i (H_riᴴ u_t)_i)` and the matched
/// transmit beamformer, starting from `u_t = h_rd / ‖h_rd‖`.
pub fn second_slot_optimize(channels: &ChannelSet, p_r: f64, noise: f64, conv: &Convergence) -> Result<SecondSlotSolution> {
    channels.check_shapes()?;
    check_power_noise(p_r, noise)?;
    let cascade = cascade_matrix(&channels.h_ri, &channels.h_id);
    let initial = Beamformer::from_direction(channels.h_rd.clone())?;
    let alt = alternate_alignment(&channels.h_rd, &cascade, initial, p_r, noise, conv)?;
    let receive_power = p_r * alt.beam.response(&alt.combined).norm_sqr();
    Ok(SecondSlotSolution {
        theta2: conjugate_phases(&alt.theta),
        u_t: alt.beam,
        receive_power_watt: receive_power,
        rate_d: rate(receive_power / noise),
        iterations: alt.trace.len(),
        trace: alt.trace,
    })
}

/// `Θ₂ = I` with the matched transmit beamformer.
pub fn second_slot_fixed_phase(channels: &ChannelSet, p_r: f64, noise: f64) -> Result<SecondSlotSolution> {
    channels.check_shapes()?;
    check_power_noise(p_r, noise)?;
    let theta2 = PhaseShiftVector::identity(channels.elements());
    let h = downlink_channel(channels, &theta2);
    let u_t = Beamformer::from_direction(h.clone())?;
    let receive_power = p_r * u_t.response(&h).norm_sqr();
    let rate_d = rate(receive_power / noise);
    Ok(SecondSlotSolution {
        theta2,
        u_t,
        receive_power_watt: receive_power,
        rate_d,
        trace: vec![rate_d],
        iterations: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channels, Geometry, LinkBudget};
    use crate::linalg::{phase_distance, CMat, C64};

    #[test]
    fn scalar_case_closed_form() {
        let ch = ChannelSet {
            h_sr: CVec::from_element(1, C64::new(1.0, 0.0)),
            h_ir: CMat::from_element(1, 1, C64::new(1.0, 0.0)),
            h_si: CVec::from_element(1, C64::new(1.0, 0.0)),
            h_rd: CVec::from_element(1, C64::new(0.2, 0.9)),
            h_id: CVec::from_element(1, C64::new(-0.4, 0.1)),
            h_ri: CMat::from_element(1, 1, C64::new(0.3, -1.2)),
        };
        let (p_r, noise) = (10.0, 0.3);
        let sol = second_slot_optimize(&ch, p_r, noise, &Convergence::default()).unwrap();
        let amp = ch.h_rd[0].norm() + ch.h_id[0].norm() * ch.h_ri[(0, 0)].norm();
        assert!((sol.rate_d - (1.0 + p_r * amp * amp / noise).log2()).abs() < 1e-12);
    }

    #[test]
    fn phases_follow_alignment_rule() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 4, 6, 10).unwrap();
        let sol = second_slot_optimize(&ch, 10.0, 0.02, &Convergence { epsilon: 1e-4, max_iter: 1 }).unwrap();
        // After one iteration θ₂ is aligned to the initial u_t = h_rd/‖h_rd‖.
        let u = Beamformer::from_direction(ch.h_rd.clone()).unwrap();
        let reference = ch.h_rd.dotc(u.weights()).arg();
        let hri_u = ch.h_ri.ad_mul(u.weights());
        for i in 0..6 {
            let expected = reference - (ch.h_id[i].conj() * hri_u[i]).arg();
            assert!(phase_distance(sol.theta2.angles()[i], expected) < 1e-12);
        }
    }

    #[test]
    fn transmit_beam_is_matched_to_row_channel() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 3, 5, 4).unwrap();
        let sol = second_slot_optimize(&ch, 10.0, 0.02, &Convergence::default()).unwrap();
        let h = downlink_channel(&ch, &sol.theta2);
        assert!((sol.receive_power_watt - 10.0 * h.norm_squared()).abs() <= 1e-12 * sol.receive_power_watt);
    }
}
