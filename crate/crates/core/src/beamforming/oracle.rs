//! Exhaustive search over a uniform phase grid, for small instances.

use std::f64::consts::{PI, TAU};

use super::second_slot::downlink_channel;
use super::{cascade_matrix, check_power_noise, combined_channel, rate, Beamformer, PhaseShiftVector};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};

/// Largest number of grid points the oracle will enumerate.
pub const MAX_GRID_POINTS: u64 = 10_000_000;

/// Best grid point found by exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub theta: PhaseShiftVector,
    pub beam: Beamformer,
    pub receive_power_watt: f64,
    pub rate: f64,
}

/// Lower bound on `grid power / continuous optimum` for a `levels`-point grid.
///
/// Rounding each optimal phase to the grid rotates every reflected term by at
/// most `π/levels`, so the projection of the rounded sum onto the optimal
/// direction keeps at least `cos(π/levels)` of its amplitude.
pub fn grid_power_slack(levels: u32) -> f64 {
    (PI / levels as f64).cos().powi(2)
}

fn grid_size(levels: u32, elements: usize) -> Result<u64> {
    if levels < 2 {
        return Err(Error::config("grid_levels", "must be at least 2"));
    }
    let mut total: u64 = 1;
    for _ in 0..elements {
        total = total
            .checked_mul(levels as u64)
            .filter(|&t| t <= MAX_GRID_POINTS)
            .ok_or_else(|| {
                Error::config(
                    "grid_levels",
                    format!("{levels}^{elements} grid points exceed the {MAX_GRID_POINTS} limit"),
                )
            })?;
    }
    Ok(total)
}

/// Enumerates the grid in lexicographic order (element 0 most significant)
/// and keeps the first maximizer of `objective`.
fn search<F>(levels: u32, elements: usize, mut objective: F) -> Result<(Vec<u32>, f64)>
where
    F: FnMut(&PhaseShiftVector) -> f64,
{
    let total = grid_size(levels, elements)?;
    let step = TAU / levels as f64;
    let mut digits = vec![0u32; elements];
    let mut best = (digits.clone(), f64::NEG_INFINITY);
    for _ in 0..total {
        let theta = PhaseShiftVector::from_angles(digits.iter().map(|&k| k as f64 * step));
        let value = objective(&theta);
        if value > best.1 {
            best = (digits.clone(), value);
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < levels {
                break;
            }
            *d = 0;
        }
    }
    Ok(best)
}

/// Grid oracle for the first slot: every phase vector on
/// `{2πk/levels}^N`, each with the matched receive beamformer.
pub fn brute_force_max_rp(channels: &ChannelSet, p_s: f64, noise: f64, levels: u32) -> Result<GridOptimum> {
    channels.check_shapes()?;
    check_power_noise(p_s, noise)?;
    let cascade = cascade_matrix(&channels.h_ir, &channels.h_si);
    let (digits, _) = search(levels, channels.elements(), |theta| {
        combined_channel(&channels.h_sr, &cascade, theta).norm_squared()
    })?;
    let step = TAU / levels as f64;
    let theta = PhaseShiftVector::from_angles(digits.iter().map(|&k| k as f64 * step));
    let c = combined_channel(&channels.h_sr, &cascade, &theta);
    let beam = Beamformer::from_direction(c.clone())?;
    let receive_power = p_s * beam.response(&c).norm_sqr();
    Ok(GridOptimum {
        theta,
        beam,
        receive_power_watt: receive_power,
        rate: rate(receive_power / noise),
    })
}

/// Grid oracle for the second slot over `θ₂` with the matched transmit
/// beamformer.
pub fn brute_force_second_slot(channels: &ChannelSet, p_r: f64, noise: f64, levels: u32) -> Result<GridOptimum> {
    channels.check_shapes()?;
    check_power_noise(p_r, noise)?;
    let (digits, _) = search(levels, channels.elements(), |theta| {
        downlink_channel(channels, theta).norm_squared()
    })?;
    let step = TAU / levels as f64;
    let theta = PhaseShiftVector::from_angles(digits.iter().map(|&k| k as f64 * step));
    let h = downlink_channel(channels, &theta);
    let beam = Beamformer::from_direction(h.clone())?;
    let receive_power = p_r * beam.response(&h).norm_sqr();
    Ok(GridOptimum {
        theta,
        beam,
        receive_power_watt: receive_power,
        rate: rate(receive_power / noise),
    })
}
