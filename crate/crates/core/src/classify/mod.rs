//! Separability, packability and local-hidden-state decisions.

pub mod lhs;
pub mod packing;
pub mod scan;
pub mod separability;
pub mod stochastic;

pub use lhs::{lhs_response, CapResponse, LhsResponse};
pub use packing::{check_packing, PackingCertificate, DEFAULT_DIRECTIONS};
pub use scan::{bisect, threshold_scan};
pub use separability::{
    decide_separable, is_ppt, search_certificate, DecisionMethod, SeparabilityDecision,
};
pub use stochastic::{
    binary_povm_from_spectral, compose_stochastic, SpectralSplit, StochasticMatrix,
};
