//! Source enumeration for sensor arrays by entropy estimation of eigenvalues
//! (EEE), with AIC and MDL baselines and a seeded Monte Carlo harness.
//!
//! The pipeline is `generate_snapshots -> sample_covariance ->
//! eigenvalues_descending -> {eee_tail, eee_head, aic, mdl}`. The EEE
//! criteria estimate the kernel (Parzen) entropy of eigenvalue windows and
//! locate the source count where removing one more eigenvalue from the tail
//! window stops reducing the entropy.

pub mod array_model;
pub mod enumerators;
pub mod error;
pub mod experiments;
pub mod kernel_entropy;
pub mod spectrum;

pub use array_model::{
    build_steering_matrix, default_doas, generate_snapshots, population_covariance, sample_noise,
    NoiseModel, ScenarioConfig, SnapshotMatrix, SteeringMatrix,
};
pub use enumerators::{aic, eee_head, eee_tail, estimate, mdl, EnumMethod, EstimateResult};
pub use error::{Error, Result};
pub use experiments::{
    binomial_se, mix_seed, run_batch, run_sweep, run_trial, Classification, SweepAxis, SweepRow,
    SweepSpec, TrialBatchStats, TrialOutcome, Workers,
};
pub use kernel_entropy::{
    delta_f, entropy_estimate, entropy_of_samples, gaussian_kernel, head_entropy_profile,
    scaled_kernel, silverman_bandwidth, tail_entropy_profile, BandwidthRule, BandwidthScope,
    EntropyWindow, Kernel, KernelConfig,
};
pub use spectrum::{
    eigen_decomposition, eigenvalues_descending, sample_covariance, snapshot_spectrum,
    EigenDecomposition, EigenSpectrum,
};
