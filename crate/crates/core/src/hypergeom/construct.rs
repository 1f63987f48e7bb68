//! Construction of the hypergeometric operator from its parameter tuple.
//!
//! In theta form the operator has exactly two bands:
//!
//!   band 0:  prod_i (theta - alpha_i)
//!   band 1:  -sigma * pi_eff^(m-n) * prod_j (theta - beta_j)
//!
//! with sigma = (-1)^(m + n p) and pi_eff the variant-adjusted uniformizer.
//! The empty tuple gives 1 - x, and a single alpha gives theta - alpha + pi x.

use std::sync::Arc;

use num::{BigInt, BigRational};

use crate::error::HypError;
use crate::hypergeom::params::HypParams;
use crate::padic::config::FieldCtx;
use crate::padic::scalar::Scalar;
use crate::weyl::operator::{Flavor, WeylOperator, Window};
use crate::weyl::theta::{poly_mul, poly_scale, ThetaForm};

/// prod over params of (theta - param) as a coefficient polynomial.
fn linear_product<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &[crate::padic::param::PadicParameter],
) -> Result<Vec<S>, HypError> {
    let mut poly = vec![S::one(ctx)];
    for prm in params {
        let a = S::from_param(ctx, prm)?;
        poly = poly_mul(ctx, &poly, &[a.neg(), S::one(ctx)]);
    }
    Ok(poly)
}

pub fn hyp_theta_form<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    flavor: Flavor,
    window: Window,
) -> Result<ThetaForm<S>, HypError> {
    let band0 = linear_product::<S>(ctx, &params.alpha)?;
    let mut band1 = linear_product::<S>(ctx, &params.beta)?;

    let m = params.m() as i64;
    let n = params.n() as i64;
    let mut sign = -params.sigma(ctx.p());
    if params.variant.sign(ctx.p()) == -1 && (m - n).rem_euclid(2) == 1 {
        sign = -sign;
    }
    let coeff =
        S::pi_pow(ctx, m - n).mul_rational(&BigRational::from_integer(BigInt::from(sign)));
    band1 = poly_scale(&band1, &coeff);

    let mut tf = ThetaForm::new(ctx, flavor, window);
    tf.set_band(0, band0);
    tf.set_band(1, band1);
    Ok(tf)
}

pub fn hyp_operator<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    flavor: Flavor,
    window: Window,
) -> Result<WeylOperator<S>, HypError> {
    Ok(hyp_theta_form::<S>(ctx, params, flavor, window)?.to_operator()?)
}
