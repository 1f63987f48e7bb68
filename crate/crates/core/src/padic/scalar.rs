//! The common interface for coefficient arithmetic. Algorithms upstream are
//! generic over [`Scalar`] and run unchanged in exact rational arithmetic
//! ([`ExactScalar`]) or capped-precision p-adic floating point
//! ([`PadicScalar`]).

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational};

use crate::error::PadicError;

use super::config::FieldCtx;
use super::exact::ExactScalar;
use super::float::{PadicScalar, QpFloat};
use super::param::PadicParameter;
use super::valuation::{ValBound, Zeroness};

pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + Sized + 'static
{
    /// Whether arithmetic in this mode is exact (no precision tracking).
    const EXACT: bool;

    fn ctx(&self) -> &Arc<FieldCtx>;
    fn zero(ctx: &Arc<FieldCtx>) -> Self;
    fn one(ctx: &Arc<FieldCtx>) -> Self;
    fn pi(ctx: &Arc<FieldCtx>) -> Self;
    fn pi_pow(ctx: &Arc<FieldCtx>, j: i64) -> Self;
    fn from_rational(ctx: &Arc<FieldCtx>, r: &BigRational) -> Self;
    fn from_param(ctx: &Arc<FieldCtx>, param: &PadicParameter) -> Result<Self, PadicError>;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn mul_rational(&self, r: &BigRational) -> Self;
    fn div(&self, other: &Self) -> Result<Self, PadicError>;

    fn zeroness(&self) -> Zeroness;
    fn is_exact_zero(&self) -> bool;
    fn valuation(&self) -> ValBound;
    fn to_json(&self) -> serde_json::Value;

    fn from_i64(ctx: &Arc<FieldCtx>, n: i64) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(BigInt::from(n)))
    }

    fn inv(&self) -> Result<Self, PadicError> {
        Self::one(self.ctx()).div(self)
    }
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;

    fn ctx(&self) -> &Arc<FieldCtx> {
        self.ctx()
    }
    fn zero(ctx: &Arc<FieldCtx>) -> Self {
        ExactScalar::zero(ctx)
    }
    fn one(ctx: &Arc<FieldCtx>) -> Self {
        ExactScalar::one(ctx)
    }
    fn pi(ctx: &Arc<FieldCtx>) -> Self {
        ExactScalar::pi(ctx)
    }
    fn pi_pow(ctx: &Arc<FieldCtx>, j: i64) -> Self {
        ExactScalar::pi_pow(ctx, j)
    }
    fn from_rational(ctx: &Arc<FieldCtx>, r: &BigRational) -> Self {
        ExactScalar::from_rational(ctx, r)
    }
    fn from_param(ctx: &Arc<FieldCtx>, param: &PadicParameter) -> Result<Self, PadicError> {
        match param {
            PadicParameter::Rational(r) => Ok(ExactScalar::from_rational(ctx, r)),
            PadicParameter::Stream(_) => Err(PadicError::StreamNotExact),
        }
    }
    fn add(&self, other: &Self) -> Self {
        ExactScalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ExactScalar::sub(self, other)
    }
    fn neg(&self) -> Self {
        ExactScalar::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        ExactScalar::mul(self, other)
    }
    fn mul_rational(&self, r: &BigRational) -> Self {
        ExactScalar::mul_rational(self, r)
    }
    fn div(&self, other: &Self) -> Result<Self, PadicError> {
        ExactScalar::div(self, other)
    }
    fn zeroness(&self) -> Zeroness {
        ExactScalar::zeroness(self)
    }
    fn is_exact_zero(&self) -> bool {
        ExactScalar::is_exact_zero(self)
    }
    fn valuation(&self) -> ValBound {
        ExactScalar::valuation(self)
    }
    fn to_json(&self) -> serde_json::Value {
        ExactScalar::to_json(self)
    }
}

impl Scalar for PadicScalar {
    const EXACT: bool = false;

    fn ctx(&self) -> &Arc<FieldCtx> {
        self.ctx()
    }
    fn zero(ctx: &Arc<FieldCtx>) -> Self {
        PadicScalar::zero(ctx)
    }
    fn one(ctx: &Arc<FieldCtx>) -> Self {
        PadicScalar::one(ctx)
    }
    fn pi(ctx: &Arc<FieldCtx>) -> Self {
        PadicScalar::pi(ctx)
    }
    fn pi_pow(ctx: &Arc<FieldCtx>, j: i64) -> Self {
        PadicScalar::pi_pow(ctx, j)
    }
    fn from_rational(ctx: &Arc<FieldCtx>, r: &BigRational) -> Self {
        PadicScalar::from_rational(ctx, r)
    }
    fn from_param(ctx: &Arc<FieldCtx>, param: &PadicParameter) -> Result<Self, PadicError> {
        match param {
            PadicParameter::Rational(r) => Ok(PadicScalar::from_rational(ctx, r)),
            PadicParameter::Stream(s) => {
                if s.p != ctx.p() {
                    return Err(PadicError::CtxMismatch);
                }
                let mut out = PadicScalar::zero(ctx);
                out.comps[0] = QpFloat::from_digits_le(ctx, &s.digits);
                Ok(out)
            }
        }
    }
    fn add(&self, other: &Self) -> Self {
        PadicScalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PadicScalar::sub(self, other)
    }
    fn neg(&self) -> Self {
        PadicScalar::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        PadicScalar::mul(self, other)
    }
    fn mul_rational(&self, r: &BigRational) -> Self {
        PadicScalar::mul_rational(self, r)
    }
    fn div(&self, other: &Self) -> Result<Self, PadicError> {
        PadicScalar::div(self, other)
    }
    fn zeroness(&self) -> Zeroness {
        PadicScalar::zeroness(self)
    }
    fn is_exact_zero(&self) -> bool {
        PadicScalar::is_exact_zero(self)
    }
    fn valuation(&self) -> ValBound {
        PadicScalar::valuation(self)
    }
    fn to_json(&self) -> serde_json::Value {
        PadicScalar::to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::config::PadicConfig;
    use crate::padic::param::DigitStream;
    use crate::padic::valuation::Valuation;
    use num::rational::Ratio;

    fn check_ring_sample<S: Scalar>(ctx: &Arc<FieldCtx>) {
        let a = S::from_rational(ctx, &BigRational::new(BigInt::from(5), BigInt::from(2)))
            .add(&S::pi(ctx));
        let b = S::pi(ctx).mul(&S::pi(ctx)).sub(&S::one(ctx));
        // distributivity spot check
        let lhs = a.mul(&b.add(&S::one(ctx)));
        let rhs = a.mul(&b).add(&a);
        assert_eq!(lhs, rhs);
        // inverse roundtrip
        let inv = b.inv().unwrap();
        let prod = b.mul(&inv);
        assert!(prod.sub(&S::one(ctx)).zeroness() != Zeroness::NonZero);
    }

    #[test]
    fn both_modes_share_behavior() {
        let ctx = PadicConfig::new(3, 3, 24).unwrap().context().unwrap();
        check_ring_sample::<ExactScalar>(&ctx);
        check_ring_sample::<PadicScalar>(&ctx);
    }

    #[test]
    fn stream_params_only_in_float_mode() {
        let ctx = PadicConfig::new(3, 3, 24).unwrap().context().unwrap();
        let param = PadicParameter::Stream(DigitStream::new(3, vec![2, 1, 1, 1]).unwrap());
        assert!(matches!(
            ExactScalar::from_param(&ctx, &param),
            Err(PadicError::StreamNotExact)
        ));
        let s = PadicScalar::from_param(&ctx, &param).unwrap();
        assert_eq!(
            s.valuation(),
            ValBound::Exactly(Valuation::Finite(Ratio::from_integer(0)))
        );
    }
}
