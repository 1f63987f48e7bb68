//! Hypergeometric operators: construction, identities, and the rank-one
//! decomposition chain.

pub mod chain;
pub mod construct;
pub mod identity;
pub mod params;

pub use chain::{
    chain_verify, decompose, replay, ChainStep, ChainVerifyReport, DecompositionChain,
    StepReport,
};
pub use construct::{hyp_operator, hyp_theta_form};
pub use identity::{
    compare_up_to_unit, fourier_identity_check, inversion_identity_check,
    kummer_identity_check, CompareOutcome, IdentityReport, IdentityStatus,
};
pub use params::{param_add, param_neg_minus_one, param_sub, HypParams};
