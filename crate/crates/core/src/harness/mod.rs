//! Seeded instance generation, campaigns and findings.

pub mod campaign;
pub mod findings;
pub mod generator;
pub mod payload;
pub mod rng;

pub use generator::{
    gen_equality_triple, gen_monomial_map, gen_point, gen_polytope, gen_polytope_from, gen_smooth_vertex_instance,
    gen_surface_lattice, gen_surface_triple, gen_unimodular,
};
pub use campaign::{
    run_campaign, run_with, thread_pool, CampaignConfig, CampaignResult, CampaignSummary, InstanceOutcome, Statement,
    DEFAULT_LEVELS, EXIT_CLEAN, EXIT_INPUT_ERROR, EXIT_VIOLATION, THREADS_ENV,
};
pub use findings::{Category, Finding};
pub use payload::{Evaluation, InstancePayload};
pub use rng::{instance_seed, Rng};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
