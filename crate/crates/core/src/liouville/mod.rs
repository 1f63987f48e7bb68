//! Liouville-type diagnostics: certified non-Liouville parameters,
//! witnessed dangerous ones, valuation bounds, and sigma-orbit scans.

pub mod bounds;
pub mod diagnose;

pub use bounds::{factorial_meets_bound, meets_product_bound, shifted_product_valuation};
pub use diagnose::{
    diagnose, radius_estimate, sigma_scan, LiouvilleDiagnosis, RadiusEstimate, ScanOutcome,
    ShiftSide, SigmaScanEntry,
};
