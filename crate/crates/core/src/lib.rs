//! Random Boolean network laboratory.
//!
//! Simulates Kauffman-style random Boolean networks and measures the
//! randomness of their time-evolution diagrams and state-transition graphs
//! with Shannon entropy, LZW compressibility and the Block Decomposition
//! Method (BDM). BDM tables come from exhaustive enumeration of small Turing
//! machines ([`turing`]).

pub mod config;
pub mod error;
pub mod experiments;
pub mod io;
pub mod matrix;
pub mod measures;
pub mod network;
pub mod perturbation;
pub mod rng;
pub mod transition;
pub mod turing;

pub use error::{Error, Result};
pub use matrix::{flatten, BitMatrix};
pub use measures::{randomness_report, BdmOptions, Boundary, CtmTable, RandomnessReport};
pub use network::{
    classify_regime, theoretical_critical_p, BooleanNetwork, EvolutionDiagram, NetworkState, RbnParams, Regime,
    WiringDist,
};
pub use rng::{derive_stream, RngStream};
pub use config::{parse_config, RunConfig};
pub use experiments::{CriticalityResult, SweepConfig, SweepSeries};
pub use perturbation::{PerturbationMode, PerturbationSeries, Removal};
pub use transition::{AttractorSet, PrestigeVector, TransitionDiagram};
