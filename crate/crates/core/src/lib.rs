//! Recovery of the Brownian bridge component of a Lévy process `X = Y + σW`
//! from its increments on the grid `{k/n}`.
//!
//! Two schemes are provided. The randomized scheme reorders the increments of
//! an independent auxiliary Brownian motion so that their ranks match those of
//! the observed increments. The quantile scheme replaces the auxiliary order
//! statistics with the normal plotting-position quantiles `Q(k/(n+1))` and
//! needs no extra randomness.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel sweeps live in the `bridgesift` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(a > b)` is used on purpose so that NaN takes the failing branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;

pub mod accum;
pub mod experiments;
pub mod levy;
pub mod normal;
pub mod quad;
pub mod ranks;
pub mod recover;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use experiments::{fit_rate, run_sweep, RateFit, RateRow, ReplicateRecord, SweepConfig};
pub use levy::{partial_sums, simulate, GridPath, JumpDist, JumpPart, LevyModel, PathSample};
pub use normal::{cdf, mills_gap, phi, quantile, sf, MillsGap};
pub use ranks::{compute_ranks, order_statistics, RankSequence};
pub use recover::{
    bridge_error, recover_quantile, recover_randomized, BridgeError, PlottingQuantiles, RecoveryOutput, Scheme,
};
pub use rng::{SeedSpec, VariateStream};
