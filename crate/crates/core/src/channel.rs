//! Rayleigh-fading channel realizations for the S / RS / IRS / D network.
//!
//! Every entry of every link is an i.i.d. `CN(0, 1)` draw scaled by the
//! distance path loss `d^(-α/2)` and the amplitude of the endpoint antenna
//! gains. Each link draws from its own ChaCha stream keyed by
//! `(seed, link)`, so the realization of one link never depends on the
//! shapes or sampling order of the others.

use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Node placement of source, relay station, IRS and destination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub pos_s: Point,
    pub pos_rs: Point,
    pub pos_irs: Point,
    pub pos_d: Point,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            pos_s: Point::new(0.0, 0.0),
            pos_rs: Point::new(50.0, 0.0),
            pos_irs: Point::new(50.0, 10.0),
            pos_d: Point::new(100.0, 0.0),
        }
    }
}

impl Geometry {
    /// Endpoints of a link. The IRS is treated as a point.
    pub fn endpoints(&self, link: Link) -> (Point, Point) {
        match link {
            Link::SourceRelay => (self.pos_s, self.pos_rs),
            Link::IrsRelay => (self.pos_irs, self.pos_rs),
            Link::SourceIrs => (self.pos_s, self.pos_irs),
            Link::RelayDest => (self.pos_rs, self.pos_d),
            Link::IrsDest => (self.pos_irs, self.pos_d),
            Link::RelayIrs => (self.pos_rs, self.pos_irs),
        }
    }

    pub fn link_distance(&self, link: Link) -> f64 {
        let (a, b) = self.endpoints(link);
        a.distance(&b)
    }

    pub fn validate(&self) -> Result<()> {
        for link in Link::ALL {
            let d = self.link_distance(link);
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::config(
                    "geometry",
                    format!("{} has non-positive distance {d}", link.name()),
                ));
            }
        }
        Ok(())
    }
}

/// Large-scale link parameters shared by all channel blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Path-loss exponent.
    pub alpha: f64,
    pub gain_s_dbi: f64,
    pub gain_rs_dbi: f64,
    pub gain_d_dbi: f64,
    pub gain_irs_dbi: f64,
    pub p_s_watt: f64,
    pub p_r_watt: f64,
    /// Receiver noise variance σ_w², common to RS and D.
    pub noise_variance_watt: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        LinkBudget {
            alpha: 2.4,
            gain_s_dbi: 5.0,
            gain_rs_dbi: 5.0,
            gain_d_dbi: 2.0,
            gain_irs_dbi: 0.0,
            p_s_watt: 10.0,
            p_r_watt: 10.0,
            // 30 dB SNR with the default powers
            noise_variance_watt: 0.02,
        }
    }
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("alpha", self.alpha),
            ("p_s_watt", self.p_s_watt),
            ("p_r_watt", self.p_r_watt),
            ("noise_variance_watt", self.noise_variance_watt),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(key, format!("must be positive and finite, got {v}")));
            }
        }
        let finite = [
            ("gain_s_dbi", self.gain_s_dbi),
            ("gain_rs_dbi", self.gain_rs_dbi),
            ("gain_d_dbi", self.gain_d_dbi),
            ("gain_irs_dbi", self.gain_irs_dbi),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }

    /// Transmit and receive antenna gains (dBi) of a link.
    pub fn endpoint_gains(&self, link: Link) -> (f64, f64) {
        match link {
            Link::SourceRelay => (self.gain_s_dbi, self.gain_rs_dbi),
            Link::IrsRelay => (self.gain_irs_dbi, self.gain_rs_dbi),
            Link::SourceIrs => (self.gain_s_dbi, self.gain_irs_dbi),
            Link::RelayDest => (self.gain_rs_dbi, self.gain_d_dbi),
            Link::IrsDest => (self.gain_irs_dbi, self.gain_d_dbi),
            Link::RelayIrs => (self.gain_rs_dbi, self.gain_irs_dbi),
        }
    }
}

/// The six channel blocks of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    SourceRelay,
    IrsRelay,
    SourceIrs,
    RelayDest,
    IrsDest,
    RelayIrs,
}

impl Link {
    pub const ALL: [Link; 6] = [
        Link::SourceRelay,
        Link::IrsRelay,
        Link::SourceIrs,
        Link::RelayDest,
        Link::IrsDest,
        Link::RelayIrs,
    ];

    /// RNG stream index of the link.
    fn stream(self) -> u64 {
        match self {
            Link::SourceRelay => 1,
            Link::IrsRelay => 2,
            Link::SourceIrs => 3,
            Link::RelayDest => 4,
            Link::IrsDest => 5,
            Link::RelayIrs => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Link::SourceRelay => "h_sr",
            Link::IrsRelay => "H_ir",
            Link::SourceIrs => "h_si",
            Link::RelayDest => "h_rd",
            Link::IrsDest => "h_id",
            Link::RelayIrs => "H_ri",
        }
    }
}

/// One network realization.
///
/// First slot: `y_r = √P_s (h_sr + H_ir Θ₁ h_si) s + n_r`.
/// Second slot: `y_d = √P_r (h_rdᴴ + h_idᴴ Θ₂ H_riᴴ) u_t s + n_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// S → RS, length M.
    pub h_sr: CVec,
    /// IRS → RS, M × N.
    pub h_ir: CMat,
    /// S → IRS, length N.
    pub h_si: CVec,
    /// RS → D, length M (the channel row is `h_rdᴴ`).
    pub h_rd: CVec,
    /// IRS → D, length N (the channel row is `h_idᴴ`).
    pub h_id: CVec,
    /// RS ↔ IRS, M × N (enters the second slot as `H_riᴴ`).
    pub h_ri: CMat,
}

impl ChannelSet {
    /// Number of relay antennas.
    pub fn antennas(&self) -> usize {
        self.h_sr.len()
    }

    /// Number of IRS elements.
    pub fn elements(&self) -> usize {
        self.h_si.len()
    }

    pub fn is_finite(&self) -> bool {
        let vecs = [&self.h_sr, &self.h_si, &self.h_rd, &self.h_id];
        let mats = [&self.h_ir, &self.h_ri];
        vecs.iter().all(|v| v.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            && mats.iter().all(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Checks that all blocks agree on M and N.
    pub fn check_shapes(&self) -> Result<()> {
        let (m, n) = (self.antennas(), self.elements());
        let ok = m >= 1
            && n >= 1
            && self.h_ir.shape() == (m, n)
            && self.h_rd.len() == m
            && self.h_id.len() == n
            && self.h_ri.shape() == (m, n);
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "inconsistent channel shapes for M={m}, N={n}"
            )))
        }
    }

    /// Keeps only relay antenna `m`, giving the single-antenna network
    /// over the same fading draws.
    pub fn single_antenna(&self, m: usize) -> ChannelSet {
        ChannelSet {
            h_sr: CVec::from_element(1, self.h_sr[m]),
            h_ir: self.h_ir.rows(m, 1).into_owned(),
            h_si: self.h_si.clone(),
            h_rd: CVec::from_element(1, self.h_rd[m]),
            h_id: self.h_id.clone(),
            h_ri: self.h_ri.rows(m, 1).into_owned(),
        }
    }

    /// Scales both first-slot paths by `c` through the relay-side blocks
    /// `h_sr` and `H_ir`, so `h_sr + H_ir Θ₁ h_si` becomes `c` times itself.
    pub fn scale_first_slot(&self, c: f64) -> ChannelSet {
        let mut out = self.clone();
        out.h_sr *= C64::from(c);
        out.h_ir *= C64::from(c);
        out
    }
}

/// Path-loss amplitude factor `d^(-α/2)`.
pub fn pathloss_amplitude(distance_m: f64, alpha: f64) -> Result<f64> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::Domain(format!("distance must be positive, got {distance_m}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("path-loss exponent must be positive, got {alpha}")));
    }
    Ok(distance_m.powf(-alpha / 2.0))
}

/// Amplitude multiplier of a link between antennas with the given gains.
pub fn dbi_to_amplitude_gain(g_tx_dbi: f64, g_rx_dbi: f64) -> f64 {
    (10f64.powf(g_tx_dbi / 10.0) * 10f64.powf(g_rx_dbi / 10.0)).sqrt()
}

/// Deterministic amplitude scale of every entry on `link`.
pub fn link_scale(geometry: &Geometry, budget: &LinkBudget, link: Link) -> Result<f64> {
    let (g_tx, g_rx) = budget.endpoint_gains(link);
    Ok(pathloss_amplitude(geometry.link_distance(link), budget.alpha)? * dbi_to_amplitude_gain(g_tx, g_rx))
}

struct LinkSampler {
    rng: ChaCha8Rng,
    scale: f64,
}

impl LinkSampler {
    fn new(seed: u64, link: Link, scale: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(link.stream());
        LinkSampler { rng, scale }
    }

    fn draw(&mut self) -> C64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        Complex::new(re, im) * (self.scale * std::f64::consts::FRAC_1_SQRT_2)
    }

    fn vector(mut self, len: usize) -> CVec {
        CVec::from_fn(len, |_, _| self.draw())
    }

    /// Fills row by row, so the first rows do not depend on the row count.
    fn matrix(mut self, rows: usize, cols: usize) -> CMat {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = self.draw();
            }
        }
        m
    }
}

/// Draws one Rayleigh-fading realization of all six links.
pub fn sample_channels(
    geometry: &Geometry,
    budget: &LinkBudget,
    antennas: usize,
    elements: usize,
    seed: u64,
) -> Result<ChannelSet> {
    if antennas == 0 {
        return Err(Error::config("M", "relay antenna count must be at least 1"));
    }
    if elements == 0 {
        return Err(Error::config("N", "IRS element count must be at least 1"));
    }
    geometry.validate()?;
    budget.validate()?;

    let sampler = |link| -> Result<LinkSampler> {
        Ok(LinkSampler::new(seed, link, link_scale(geometry, budget, link)?))
    };
    Ok(ChannelSet {
        h_sr: sampler(Link::SourceRelay)?.vector(antennas),
        h_ir: sampler(Link::IrsRelay)?.matrix(antennas, elements),
        h_si: sampler(Link::SourceIrs)?.vector(elements),
        h_rd: sampler(Link::RelayDest)?.vector(antennas),
        h_id: sampler(Link::IrsDest)?.vector(elements),
        h_ri: sampler(Link::RelayIrs)?.matrix(antennas, elements),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pathloss_examples() {
        assert_eq!(pathloss_amplitude(1.0, 2.4).unwrap(), 1.0);
        assert_eq!(pathloss_amplitude(4.0, 2.0).unwrap(), 0.25);
        let v = pathloss_amplitude(100.0, 2.4).unwrap();
        assert!((v - 10f64.powf(-2.4)).abs() < 1e-18);
        assert!((v - 3.9811e-3).abs() < 1e-7);
    }

    #[test]
    fn pathloss_domain_errors() {
        assert!(matches!(pathloss_amplitude(0.0, 2.4), Err(Error::Domain(_))));
        assert!(matches!(pathloss_amplitude(-3.0, 2.4), Err(Error::Domain(_))));
        assert!(matches!(pathloss_amplitude(3.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn dbi_examples() {
        assert_eq!(dbi_to_amplitude_gain(0.0, 0.0), 1.0);
        assert!((dbi_to_amplitude_gain(10.0, 10.0) - 10.0).abs() < 1e-12);
        let g = dbi_to_amplitude_gain(5.0, 2.0);
        assert!((g - 10f64.powf(7.0 / 20.0)).abs() < 1e-12);
        assert!((g - 2.2387).abs() < 1e-4);
    }

    #[test]
    fn shapes() {
        let ch = sample_channels(&Geometry::default(), &LinkBudget::default(), 2, 3, 9).unwrap();
        assert_eq!(ch.h_ir.shape(), (2, 3));
        assert_eq!(ch.h_ri.shape(), (2, 3));
        assert_eq!(ch.h_si.len(), 3);
        assert_eq!(ch.h_id.len(), 3);
        assert_eq!(ch.h_sr.len(), 2);
        assert_eq!(ch.h_rd.len(), 2);
        ch.check_shapes().unwrap();
        assert!(ch.is_finite());
    }

    #[test]
    fn zero_dimensions_rejected() {
        let g = Geometry::default();
        let b = LinkBudget::default();
        assert!(matches!(sample_channels(&g, &b, 0, 3, 1), Err(Error::Config { .. })));
        assert!(matches!(sample_channels(&g, &b, 3, 0, 1), Err(Error::Config { .. })));
    }

    #[test]
    fn colocated_nodes_rejected() {
        let mut g = Geometry::default();
        g.pos_irs = g.pos_rs;
        let err = sample_channels(&g, &LinkBudget::default(), 1, 1, 1).unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn deterministic_in_seed() {
        let g = Geometry::default();
        let b = LinkBudget::default();
        let a = sample_channels(&g, &b, 4, 6, 77).unwrap();
        let c = sample_channels(&g, &b, 4, 6, 77).unwrap();
        assert_eq!(a, c);
        let d = sample_channels(&g, &b, 4, 6, 78).unwrap();
        assert_ne!(a.h_sr, d.h_sr);
    }

    #[test]
    fn single_antenna_slice_matches_direct_sampling() {
        let g = Geometry::default();
        let b = LinkBudget::default();
        let big = sample_channels(&g, &b, 5, 7, 3).unwrap();
        let one = sample_channels(&g, &b, 1, 7, 3).unwrap();
        assert_eq!(big.single_antenna(0), one);
    }
}
