//! Truncated-window dagger Weyl algebras: normal-form operators, theta
//! forms, growth certificates, and ring substitutions.

pub mod growth;
pub mod operator;
pub mod subst;
pub mod theta;

pub use growth::{fit_growth, verify_growth, GrowthCertificate};
pub use operator::{weight, Flavor, WeylOperator, Window};
pub use subst::{apply_substitution, PiVariant, SubstitutionRule};
pub use theta::{
    poly_add, poly_compose_affine, poly_eval, poly_is_zero, poly_mul, poly_scale, poly_trim,
    ThetaForm,
};
