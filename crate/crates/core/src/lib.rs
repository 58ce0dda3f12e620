//! Trace-driven simulation of topology shaping in opportunistic networks.
//!
//! An opportunistic network is modeled as an evolving graph: a link between
//! two nodes at interval `t` means they had contacts within the sliding
//! window of the last `delta` trace intervals. On top of that window each
//! node runs a small local rule set — sample a desired degree from a
//! truncated power law, link eligible peers until the target is reached,
//! drop neighbors after `delta` idle intervals, and occasionally swap a
//! weakest neighbor for a newcomer — which steers the overlay toward a
//! scale-free degree distribution.
//!
//! The crate provides:
//!
//! - [`trace`]: CSV contact-trace ingestion and a synthetic generator with
//!   heterogeneous node activity;
//! - [`window`]: the per-node sliding contact window;
//! - [`overlay`]: the degree sampler and the per-interval link-management
//!   engine;
//! - [`analytics`]: degree histograms, log-log least-squares and MLE
//!   power-law fits, components and sampled diameter;
//! - [`simulator`]: whole-trace runs and parameter sweeps (parallel when
//!   the `parallel` feature is on, the default);
//! - [`artifacts`]: deterministic rendering of the CSV/JSON output files.

#![forbid(unsafe_code)]

pub mod analytics;
pub mod artifacts;
pub mod error;
pub mod overlay;
pub mod sampling;
pub mod simulator;
pub mod trace;
pub mod window;

pub use error::{Error, Result};
pub use overlay::{OverlayConfig, OverlayEngine, OverlaySnapshot};
pub use simulator::{run, RunConfig, RunResult};
pub use trace::{generate_synthetic, parse_trace, ContactTrace, NodeId, SyntheticParams};
pub use window::ContactWindow;
