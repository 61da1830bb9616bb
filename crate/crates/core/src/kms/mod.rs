//! Finite-level realizations of the local KMS measures `μ_{β,p}` and of
//! their restricted products.

pub mod beta1;
pub mod phase;
pub mod rng;
pub mod sampler;
pub mod strata;

pub use beta1::{beta1_haar_cell, beta1_scaling_factor};
pub use phase::{mass_global, mass_yf, phase_csv, phase_scan, PhaseRow};
pub use rng::SplitMix64;
pub use sampler::{sample_local, Draw, LocalSampler};
pub use strata::{
    cell_kind, cell_mass, cell_mass_with, level_residues, rank_deficient_count,
    snf_type_at_level, stratum_count, stratum_count_closed, stratum_mass, stratum_mass_total,
    stratum_of_matrix, CellKind, LocalMeasureSpec, MassInterval, RefineConfig, StratumType,
};
