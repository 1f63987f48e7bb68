//! Exact-arithmetic kernel for p-adic dagger Weyl algebras: scalars over
//! Q_p(pi), truncated-window operator algebra, hypergeometric operators and
//! their automorphism identities, Liouville-type parameter diagnostics, and
//! an x-inverse solver with certified residuals.

pub mod error;
pub mod fuzz;
pub mod hypergeom;
pub mod liouville;
pub mod padic;
pub mod solver;
pub mod weyl;

pub use fuzz::{fuzz_automorphism, fuzz_solver_residual, fuzz_valuation_bounds, run_suite, FuzzOutcome};
pub use error::{ConfigError, HypError, LiouvilleError, PadicError, SolveError, WeylError};
pub use hypergeom::{
    chain_verify, compare_up_to_unit, decompose, fourier_identity_check, hyp_operator,
    hyp_theta_form, inversion_identity_check, kummer_identity_check, replay, ChainStep,
    ChainVerifyReport, CompareOutcome, DecompositionChain, HypParams, IdentityReport,
    IdentityStatus, StepReport,
};
pub use liouville::{
    diagnose, factorial_meets_bound, meets_product_bound, radius_estimate,
    shifted_product_valuation, sigma_scan, LiouvilleDiagnosis, RadiusEstimate, ScanOutcome,
    ShiftSide, SigmaScanEntry,
};
pub use solver::{
    decay_fit, expand_solution, injectivity_witness, solve_x_inverse, DecayFit,
    InjectivityReport, SolveOptions, SolveReport,
};
pub use padic::{
    combine, rational_digits, Combination, DigitStream, ExactScalar, FieldCtx, PadicConfig,
    PadicParameter, PadicScalar, QpFloat, Scalar, Tri, ValBound, Valuation, Zeroness,
};
pub use weyl::{
    apply_substitution, fit_growth, verify_growth, Flavor, GrowthCertificate, PiVariant,
    SubstitutionRule, ThetaForm, WeylOperator, Window,
};
