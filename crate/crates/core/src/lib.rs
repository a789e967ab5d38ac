//! Community detection in multiplex networks with a hierarchical
//! stochastic block model, fitted by a truncation-free slice sampler.
//!
//! Nodes in every layer share one countable set of communities; each layer
//! draws its own community weights from a shared top-level measure, so
//! community identities line up across layers. A single-layer DP-SBM
//! sampler is included as the independent-layers baseline.
//!
//! ```no_run
//! use hsbm::{build_scenario, run_chain, summarize, Hyperparameters, ScenarioOverrides};
//!
//! let (network, truth) = build_scenario("markov", &ScenarioOverrides::default())?;
//! let trace = run_chain(&network, &Hyperparameters::with_iters(500))?;
//! let report = summarize(&trace, Some(&truth))?;
//! println!("aggregate NMI = {:.3}", report.nmi.unwrap().aggregate);
//! # Ok::<(), hsbm::Error>(())
//! ```

pub mod dpsbm;
pub mod error;
pub mod experiment;
pub mod hsbm;
pub mod io;
pub mod metrics;
pub mod network;
pub mod params;
pub mod rng;
pub mod stats;
pub mod stick;
pub mod synth;
pub mod trace;

pub use crate::dpsbm::{fit_per_layer, run_dpsbm, DpsbmState};
pub use crate::error::{Error, Result};
pub use crate::experiment::{compare_models, fit_model, Model};
pub use crate::hsbm::{run_chain, run_chain_with, HsbmState};
pub use crate::io::{load_multiplex, save_results, NetworkManifest};
pub use crate::metrics::{map_labels, nmi, nmi_report, summarize, NmiReport};
pub use crate::network::{validate_network, Adjacency, LabelMatrix, MultiplexNetwork, SymMatrix};
pub use crate::params::Hyperparameters;
pub use crate::stick::{slice_sup, stick_transform, StickState};
pub use crate::synth::{build_scenario, generate, ScenarioConfig, ScenarioOverrides};
pub use crate::trace::{ChainTrace, SummaryReport};
