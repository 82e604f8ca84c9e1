//! Simulation and beamforming optimization for an IRS-aided decode-and-forward
//! relay network with a multi-antenna relay station (RS).
//!
//! In the first time slot the source S transmits to the RS directly and via
//! the IRS; in the second slot the RS forwards to the destination D, again
//! directly and via the IRS. The crate provides:
//!
//! * [`channel`]: Rayleigh-fading channel realizations with path loss and
//!   antenna gains.
//! * [`beamforming`]: the three first-slot co-designs (alternating AIS,
//!   null-space projection plus MRC, IRS element selection plus MRC), the
//!   second-slot transmit optimizer and a phase-grid oracle.
//! * [`metrics`]: rate and complexity formulas.
//! * [`harness`]: deterministic Monte Carlo trials and parameter sweeps.
//! * [`cli`]: the `irs-sim` command line front end.
//! * [`selftest`]: numerical invariant checks.
//!
//! ```
//! use irs_relay::channel::{sample_channels, Geometry, LinkBudget};
//! use irs_relay::beamforming::{ais_max_rp, Convergence};
//!
//! let budget = LinkBudget::default();
//! let ch = sample_channels(&Geometry::default(), &budget, 4, 16, 7).unwrap();
//! let sol = ais_max_rp(&ch, budget.p_s_watt, budget.noise_variance_watt, &Convergence::default()).unwrap();
//! assert!(sol.rate_r > 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beamforming;
pub mod channel;
pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod selftest;

pub use error::{Error, Result};
