//! Rate, receive-power and complexity formulas.

use crate::beamforming::{Beamformer, PhaseShiftVector};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};

/// Per-trial rates in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub rate_r: f64,
    pub rate_d: f64,
    /// End-to-end rate. Two-hop links: `min(rate_r, rate_d) / 2`.
    pub rate_s: f64,
    pub iterations_r: usize,
    pub iterations_d: usize,
    /// Set for the one-hop S → IRS → D reference, which has no half-duplex
    /// pre-log; then `rate_r = rate_d = rate_s`.
    pub single_hop: bool,
}

impl RateResult {
    pub fn two_hop(rate_r: f64, rate_d: f64, iterations_r: usize, iterations_d: usize) -> Self {
        RateResult {
            rate_r,
            rate_d,
            rate_s: system_rate(rate_r, rate_d),
            iterations_r,
            iterations_d,
            single_hop: false,
        }
    }

    pub fn single_hop(rate: f64) -> Self {
        RateResult {
            rate_r: rate,
            rate_d: rate,
            rate_s: rate,
            iterations_r: 0,
            iterations_d: 0,
            single_hop: true,
        }
    }
}

/// `P_s |u_rᴴ (h_sr + H_ir Θ₁ h_si)|²`.
pub fn receive_power_ais(channels: &ChannelSet, theta1: &PhaseShiftVector, u_r: &Beamformer, p_s: f64) -> Result<f64> {
    channels.check_shapes()?;
    if theta1.len() != channels.elements() || u_r.weights().len() != channels.antennas() {
        return Err(Error::Domain("phase vector or beamformer has the wrong length".to_string()));
    }
    let coeffs = theta1.coefficients();
    let mut c = channels.h_sr.clone();
    for i in 0..channels.elements() {
        c += channels.h_ir.column(i) * (coeffs[i] * channels.h_si[i]);
    }
    Ok(p_s * u_r.response(&c).norm_sqr())
}

/// `log2(1 + power / noise)`.
pub fn rate_from_power(power_watt: f64, noise_variance_watt: f64) -> Result<f64> {
    if !(noise_variance_watt > 0.0) {
        return Err(Error::Domain(format!(
            "noise variance must be positive, got {noise_variance_watt}"
        )));
    }
    if !(power_watt >= 0.0) {
        return Err(Error::Domain(format!("power must be non-negative, got {power_watt}")));
    }
    Ok((power_watt / noise_variance_watt).ln_1p() / std::f64::consts::LN_2)
}

/// Half-duplex decode-and-forward rate `min(R_r, R_d) / 2`.
pub fn system_rate(rate_r: f64, rate_d: f64) -> f64 {
    0.5 * rate_r.min(rate_d)
}

/// σ_w² such that `(P_s + P_r) / σ_w²` equals `snr_db`.
pub fn noise_variance_for_snr(snr_db: f64, p_s_watt: f64, p_r_watt: f64) -> f64 {
    (p_s_watt + p_r_watt) / 10f64.powf(snr_db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityMethod {
    Ais,
    Nsp,
    Irses,
}

/// Floating-point operation count of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct FlopsEstimate {
    pub method: ComplexityMethod,
    pub antennas: u64,
    pub elements: u64,
    /// Iteration counts in the order the formula names them
    /// (L1, L2 / L3, L4 / L5).
    pub iterations: Vec<u64>,
    pub flops: f64,
}

fn require_positive(values: &[(&str, u64)]) -> Result<()> {
    for (name, v) in values {
        if *v == 0 {
            return Err(Error::Domain(format!("{name} must be at least 1")));
        }
    }
    Ok(())
}

/// `L2(N⁴ + 8MN³ + 5N³ + 24MN² − 2N²) + (3L1 + 18L2)MN + (5L1 + 2L2)M + (4L1 + 3L2)N`.
pub fn flops_ais(m: u64, n: u64, l1: u64, l2: u64) -> Result<FlopsEstimate> {
    require_positive(&[("M", m), ("N", n), ("L1", l1), ("L2", l2)])?;
    let (mf, nf, l1f, l2f) = (m as f64, n as f64, l1 as f64, l2 as f64);
    let flops = l2f * (nf.powi(4) + 8.0 * mf * nf.powi(3) + 5.0 * nf.powi(3) + 24.0 * mf * nf * nf - 2.0 * nf * nf)
        + (3.0 * l1f + 18.0 * l2f) * mf * nf
        + (5.0 * l1f + 2.0 * l2f) * mf
        + (4.0 * l1f + 3.0 * l2f) * nf;
    Ok(FlopsEstimate {
        method: ComplexityMethod::Ais,
        antennas: m,
        elements: n,
        iterations: vec![l1, l2],
        flops,
    })
}

/// `N³ + 2(1+L3)M³ + 2(1+L3)M²N + (4+3L3)MN² + (4+3L3)M² − L3N²
///  − (1−5L3−18L4)MN − (1−4L3−2L4)M + (1+2L3+3L4)N`.
pub fn flops_nsp(m: u64, n: u64, l3: u64, l4: u64) -> Result<FlopsEstimate> {
    require_positive(&[("M", m), ("N", n), ("L3", l3), ("L4", l4)])?;
    let (mf, nf, l3f, l4f) = (m as f64, n as f64, l3 as f64, l4 as f64);
    let flops = nf.powi(3)
        + 2.0 * (1.0 + l3f) * mf.powi(3)
        + 2.0 * (1.0 + l3f) * mf * mf * nf
        + (4.0 + 3.0 * l3f) * mf * nf * nf
        + (4.0 + 3.0 * l3f) * mf * mf
        - l3f * nf * nf
        - (1.0 - 5.0 * l3f - 18.0 * l4f) * mf * nf
        - (1.0 - 4.0 * l3f - 2.0 * l4f) * mf
        + (1.0 + 2.0 * l3f + 3.0 * l4f) * nf;
    Ok(FlopsEstimate {
        method: ComplexityMethod::Nsp,
        antennas: m,
        elements: n,
        iterations: vec![l3, l4],
        flops,
    })
}

/// `15MK + 8M + 10K + L5(18MN + 2M + 3N)` with `K = N / M`.
pub fn flops_irses(m: u64, k: u64, n: u64, l5: u64) -> Result<FlopsEstimate> {
    require_positive(&[("M", m), ("K", k), ("N", n), ("L5", l5)])?;
    let (mf, kf, nf, l5f) = (m as f64, k as f64, n as f64, l5 as f64);
    let flops = 15.0 * mf * kf + 8.0 * mf + 10.0 * kf + l5f * (18.0 * mf * nf + 2.0 * mf + 3.0 * nf);
    Ok(FlopsEstimate {
        method: ComplexityMethod::Irses,
        antennas: m,
        elements: n,
        iterations: vec![l5],
        flops,
    })
}
