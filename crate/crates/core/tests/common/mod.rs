#![allow(dead_code)]

use irs_relay::channel::{sample_channels, ChannelSet, Geometry, LinkBudget};

pub const P: f64 = 10.0;
pub const NOISE: f64 = 0.02;

pub fn channels(m: usize, n: usize, seed: u64) -> ChannelSet {
    sample_channels(&Geometry::default(), &LinkBudget::default(), m, n, seed).unwrap()
}
