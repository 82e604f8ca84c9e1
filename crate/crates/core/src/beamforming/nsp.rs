//! Null-space projection (NSP) receive power maximization plus MRC.
//!
//! Two receive beamformers separate the direct signal (`u_rs`) from the
//! IRS-reflected signal (`u_ri`); each sits in the null space of the other
//! signal's channel, and the two branch outputs are combined by MRC.

use super::{
    cascade_matrix, check_power_noise, rate, Beamformer, Convergence, FirstSlotSolution, PhaseShiftVector,
    ReceiveCombiner, Scheme, DEGENERATE_NORM,
};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{pinv, wrap_phase, CMat, CVec, C64};

/// How the direct-signal beamformer `u_rs` is constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NspMode {
    /// `u_rs ∝ P² h_sr` with `P` projecting out the column space of `H_ir`.
    /// Needs `M > N`; otherwise `P = 0`.
    Literal,
    /// `u_rs ∝ P_g h_sr` with `P_g` projecting out the converged cascade
    /// vector `g = H_ir Θ₁ h_si`.
    #[default]
    Effective,
}

impl NspMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NspMode::Literal => "literal",
            NspMode::Effective => "effective",
        }
    }
}

impl std::str::FromStr for NspMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "literal" => Ok(NspMode::Literal),
            "effective" => Ok(NspMode::Effective),
            other => Err(format!("expected `literal` or `effective`, got `{other}`")),
        }
    }
}

/// Orthogonal projector onto the complement of the column space of `a`:
/// `P = I − A (Aᴴ A)† Aᴴ`.
pub fn nsp_projector(a: &CMat) -> CMat {
    let m = a.nrows();
    let gram = a.ad_mul(a);
    CMat::identity(m, m) - a * pinv(&gram) * a.adjoint()
}

/// Branch gains after separation: `a = u_rsᴴ h_sr`, `b = u_riᴴ H_ir Θ₁ h_si`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NspBranches {
    pub direct: C64,
    pub reflected: C64,
}

impl NspBranches {
    pub fn evaluate(channels: &ChannelSet, theta1: &PhaseShiftVector, u_rs: &Beamformer, u_ri: &Beamformer) -> Self {
        let g = cascade_matrix(&channels.h_ir, &channels.h_si) * theta1.coefficients();
        NspBranches {
            direct: u_rs.response(&channels.h_sr),
            reflected: u_ri.response(&g),
        }
    }

    /// MRC output SNR in the combining normalization
    /// `(|a|⁴ + |b|⁴) P_s / (|a + b|² σ²)`.
    pub fn combined_snr(&self, p_s: f64, noise: f64) -> f64 {
        let num = self.direct.norm_sqr().powi(2) + self.reflected.norm_sqr().powi(2);
        let den = (self.direct + self.reflected).norm_sqr();
        if den == 0.0 {
            return 0.0;
        }
        num * p_s / (den * noise)
    }

    /// SNRs of the two separated branches on their own.
    pub fn branch_snrs(&self, p_s: f64, noise: f64) -> (f64, f64) {
        (
            p_s * self.direct.norm_sqr() / noise,
            p_s * self.reflected.norm_sqr() / noise,
        )
    }
}

fn column(v: &CVec) -> CMat {
    CMat::from_column_slice(v.len(), 1, v.as_slice())
}

fn project_normalized(projector: &CMat, v: &CVec, what: &str) -> Result<Beamformer> {
    let p = projector * v;
    if !(p.norm() >= DEGENERATE_NORM * v.norm().max(1.0)) {
        return Err(Error::ProjectorDegenerate(format!(
            "{what} vanishes after null-space projection"
        )));
    }
    Beamformer::from_direction(p)
}

/// `θ_i = −arg((uᴴ G)_i)`: all reflected paths co-phased at the output of `u`.
fn cophase(cascade: &CMat, u: &Beamformer) -> PhaseShiftVector {
    let projected = cascade.ad_mul(u.weights());
    let mut degenerate = Vec::new();
    let theta = projected
        .iter()
        .enumerate()
        .map(|(i, p)| {
            // (uᴴ G)_i = conj(p_i)
            if p.norm() <= f64::MIN_POSITIVE {
                degenerate.push(i);
                0.0
            } else {
                wrap_phase(p.arg())
            }
        })
        .collect();
    PhaseShiftVector { theta, degenerate }
}

fn check_nsp_shape(channels: &ChannelSet, mode: NspMode) -> Result<()> {
    channels.check_shapes()?;
    let (m, n) = (channels.antennas(), channels.elements());
    if m < 2 {
        return Err(Error::Unsupported(
            "NSP needs at least two relay antennas".to_string(),
        ));
    }
    if mode == NspMode::Literal && n >= m {
        return Err(Error::ProjectorDegenerate(format!(
            "literal NSP projector of H_ir is zero for N={n} >= M={m}"
        )));
    }
    Ok(())
}

fn source_beamformer(channels: &ChannelSet, g: &CVec, mode: NspMode) -> Result<Beamformer> {
    match mode {
        NspMode::Literal => {
            let p = nsp_projector(&channels.h_ir);
            // applied twice, as in the derivation; P is idempotent
            let once = &p * &channels.h_sr;
            project_normalized(&p, &once, "h_sr")
        }
        NspMode::Effective => project_normalized(&nsp_projector(&column(g)), &channels.h_sr, "h_sr"),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    channels: &ChannelSet,
    p_s: f64,
    noise: f64,
    mode: NspMode,
    theta1: PhaseShiftVector,
    u_ri: Beamformer,
    trace: Vec<f64>,
    fixed_phase: bool,
) -> Result<FirstSlotSolution> {
    let g = cascade_matrix(&channels.h_ir, &channels.h_si) * theta1.coefficients();
    let u_rs = source_beamformer(channels, &g, mode)?;
    let branches = NspBranches::evaluate(channels, &theta1, &u_rs, &u_ri);
    let snr = branches.combined_snr(p_s, noise);
    Ok(FirstSlotSolution {
        scheme: Scheme::Nsp(mode),
        fixed_phase,
        iterations: if fixed_phase { 0 } else { trace.len() },
        theta1,
        combiner: ReceiveCombiner::Separated {
            source: u_rs,
            irs: u_ri,
        },
        receive_power_watt: snr * noise,
        rate_r: rate(snr),
        trace,
    })
}

/// NSP-based Max-RP plus MRC.
///
/// `u_ri` (projection of the cascade onto the null space of `h_sr`) and
/// `θ₁` are alternated to maximize the reflected-branch power; the trace
/// records that branch's rate. `u_rs` is then formed per `mode` and the
/// branches are MRC-combined.
pub fn nsp_max_rp_mrc(
    channels: &ChannelSet,
    p_s: f64,
    noise: f64,
    conv: &Convergence,
    mode: NspMode,
) -> Result<FirstSlotSolution> {
    check_nsp_shape(channels, mode)?;
    check_power_noise(p_s, noise)?;
    conv.validate()?;

    let cascade = cascade_matrix(&channels.h_ir, &channels.h_si);
    let p_direct = nsp_projector(&column(&channels.h_sr));
    let mut theta = PhaseShiftVector::identity(channels.elements());
    let mut u_ri = project_normalized(&p_direct, &(&cascade * theta.coefficients()), "cascade")?;
    let mut trace: Vec<f64> = Vec::new();
    for _ in 0..conv.max_iter {
        theta = cophase(&cascade, &u_ri);
        let g = &cascade * theta.coefficients();
        u_ri = project_normalized(&p_direct, &g, "cascade")?;
        let r = rate(p_s * u_ri.response(&g).norm_sqr() / noise);
        let done = trace.last().is_some_and(|prev| (r - prev).abs() <= conv.epsilon);
        trace.push(r);
        if done {
            break;
        }
    }
    finish(channels, p_s, noise, mode, theta, u_ri, trace, false)
}

/// NSP plus MRC with `Θ₁ = I`.
pub fn nsp_fixed_phase(channels: &ChannelSet, p_s: f64, noise: f64, mode: NspMode) -> Result<FirstSlotSolution> {
    check_nsp_shape(channels, mode)?;
    check_power_noise(p_s, noise)?;
    let theta = PhaseShiftVector::identity(channels.elements());
    let g = cascade_matrix(&channels.h_ir, &channels.h_si) * theta.coefficients();
    let p_direct = nsp_projector(&column(&channels.h_sr));
    let u_ri = project_normalized(&p_direct, &g, "cascade")?;
    let trace = vec![rate(p_s * u_ri.response(&g).norm_sqr() / noise)];
    finish(channels, p_s, noise, mode, theta, u_ri, trace, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channels, Geometry, LinkBudget};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn projector_of_basis_vector() {
        let e1 = CMat::from_column_slice(3, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let p = nsp_projector(&e1);
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]));
        assert!((p - expected).norm() < 1e-15);
    }

    #[test]
    fn projector_of_full_rank_square_is_zero() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 4, 4, 2).unwrap();
        let p = nsp_projector(&ch.h_ir);
        assert!(p.norm() < 1e-10);
    }

    #[test]
    fn projector_identities_random() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 5, 2, 8).unwrap();
        let a = &ch.h_ir;
        let p = nsp_projector(a);
        assert!((&p * a).norm() <= 1e-10);
        assert!((&p * &p - &p).norm() <= 1e-10);
        assert!((p.adjoint() - &p).norm() <= 1e-10);
    }

    #[test]
    fn rejects_single_antenna_and_degenerate_literal() {
        let g = Geometry::default();
        let b = LinkBudget::default();
        let one = sample_channels(&g, &b, 1, 4, 1).unwrap();
        let err = nsp_max_rp_mrc(&one, 10.0, 0.02, &Convergence::default(), NspMode::Effective).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        let wide = sample_channels(&g, &b, 3, 3, 1).unwrap();
        let err = nsp_max_rp_mrc(&wide, 10.0, 0.02, &Convergence::default(), NspMode::Literal).unwrap_err();
        assert!(matches!(err, Error::ProjectorDegenerate(_)));
    }

    #[test]
    fn literal_source_beam_nulls_irs_channel() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 4, 2, 5).unwrap();
        let sol = nsp_max_rp_mrc(&ch, 10.0, 0.02, &Convergence::default(), NspMode::Literal).unwrap();
        let ReceiveCombiner::Separated { source, irs } = &sol.combiner else {
            panic!("expected separated combiner");
        };
        let leak = ch.h_ir.ad_mul(source.weights()).norm();
        assert!(leak <= 1e-10 * ch.h_ir.norm(), "leak {leak}");
        assert!(irs.response(&ch.h_sr).norm() <= 1e-10 * ch.h_sr.norm());
    }

    #[test]
    fn literal_double_projection_equals_single() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 6, 3, 12).unwrap();
        let p = nsp_projector(&ch.h_ir);
        let twice = &p * (&p * &ch.h_sr);
        let once = &p * &ch.h_sr;
        assert!((twice - once).norm() <= 1e-12 * ch.h_sr.norm());
    }

    #[test]
    fn branch_gains_are_real_positive() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 4, 8, 3).unwrap();
        let sol = nsp_max_rp_mrc(&ch, 10.0, 0.02, &Convergence::default(), NspMode::Effective).unwrap();
        let ReceiveCombiner::Separated { source, irs } = &sol.combiner else {
            panic!("expected separated combiner");
        };
        let br = NspBranches::evaluate(&ch, &sol.theta1, source, irs);
        assert!(br.direct.re > 0.0 && br.direct.im.abs() <= 1e-12 * br.direct.re);
        assert!(br.reflected.re > 0.0 && br.reflected.im.abs() <= 1e-12 * br.reflected.re);
    }
}
