//! Simulators and numeric tools for triangle processes on random edge streams.
//!
//! The crate has three layers that deliberately do not depend on each other's
//! internals:
//!
//! * process simulators over a uniformly random edge stream: an online
//!   triangle packing process ([`packing`]) that greedily matches revealed
//!   edges into edge-disjoint triangles while keeping the unmatched remainder
//!   triangle-free, and a triangle-free acceptance process ([`tfp`]) whose
//!   rejected edges form a triangle cover;
//! * deterministic baselines: fixed-step ODE solutions and closed-form
//!   statistics the scaled process variables should track ([`ode`]), and the
//!   packing/cover bound curves derived from them ([`bounds`]);
//! * exact oracles for small graphs ([`exact`]): optimal triangle packing and
//!   cover sizes by branch and bound, a max-cut based cover, and ratio checks
//!   between them.
//!
//! [`tracker`] compares the simulators against the baselines at checkpoints
//! and serializes trajectories; [`stream`] and [`seed`] pin down the random
//! edge stream and seed-splitting so that every run is reproducible
//! bit-for-bit from `(n, m, seed)`.

pub mod bounds;
pub mod exact;
pub mod graph;
pub mod graph6;
pub mod ode;
pub mod packing;
pub mod seed;
pub mod stream;
pub mod tfp;
pub mod tracker;

pub(crate) mod sorted;

/// Crate-wide error type. Variants separate caller mistakes (bad arguments),
/// out-of-domain numeric queries, refused oversized computations, and input
/// parsing failures, so the CLI can report each class differently.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
