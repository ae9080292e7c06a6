//! Secrecy outage probability and secure energy efficiency for cooperative
//! multi-antenna links.
//!
//! Two relay strategies are modelled, both with transmit antenna selection
//! (TAS) at the transmitters and maximal ratio combining (MRC) at the
//! receivers:
//!
//! * CSI-aided decode-and-forward ([`sop_csidf`]): the legitimate nodes pick
//!   the better of the direct and relayed paths.
//! * Artificial noise ([`sop_an`]): the relay beamforms jamming into Bob's
//!   null space so that only Eve is degraded.
//!
//! Exact outage probabilities are built on a signed Erlang-mixture algebra
//! ([`erlang`]); the [`montecarlo`] module samples the underlying channels
//! as an independent check. [`see`] and [`optimize`] turn outage into secure
//! energy efficiency and maximize it over powers and secrecy rate.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// Negated comparisons are how parameter checks reject NaN along with
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod erlang;
pub mod fading;
pub mod linkbudget;
pub(crate) mod math;
pub mod montecarlo;
pub mod optimize;
pub mod quad;
pub mod see;
pub mod sop_an;
pub mod sop_csidf;
pub mod specfun;

pub use error::{Error, Result};
pub use fading::AntennaConfig;
pub use linkbudget::{build_snr_set, Layout, SnrSet, SystemParams, Topology};
pub use montecarlo::{CsidfMode, McResult};
pub use optimize::{OptConfig, OptResult, Problem};
pub use see::{Scheme, SeeResult};
pub use sop_an::JammingModel;
pub use sop_csidf::{CsidfTerms, SecrecyParams};
