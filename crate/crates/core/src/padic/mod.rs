//! Coefficient arithmetic in K = Q_p(pi), where pi^(q-1) = -(-p)^((q-1)/(p-1)).

pub mod config;
pub mod exact;
pub mod float;
pub mod param;
pub mod rational;
pub mod scalar;
pub mod valuation;

pub use config::{FieldCtx, PadicConfig};
pub use exact::ExactScalar;
pub use float::{PadicScalar, QpFloat};
pub use param::{combine, rational_digits, Combination, DigitStream, PadicParameter};
pub use scalar::Scalar;
pub use valuation::{Tri, ValBound, Valuation, Zeroness};
