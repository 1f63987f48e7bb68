//! Ring substitutions: the Fourier-type automorphism x -> -d/pi, d -> pi x
//! (polynomial flavor), the x -> 1/x inversion (Laurent flavor), and the
//! bandwise twist theta -> theta - gamma.

use num::BigRational;

use crate::error::WeylError;
use crate::padic::param::PadicParameter;
use crate::padic::rational::factorial;
use crate::padic::scalar::Scalar;

use super::operator::{Flavor, WeylOperator};
use super::theta::ThetaForm;

/// Which square root convention the Fourier map uses: pi itself, or the
/// companion root (-1)^p pi of the same defining equation. For p = 2 the
/// two coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PiVariant {
    Standard,
    Flipped,
}

impl PiVariant {
    pub fn other(self) -> Self {
        match self {
            PiVariant::Standard => PiVariant::Flipped,
            PiVariant::Flipped => PiVariant::Standard,
        }
    }

    /// Sign s with pi_eff = s * pi: -1 only for the flipped variant at odd p.
    pub fn sign(self, p: u64) -> i64 {
        match self {
            PiVariant::Standard => 1,
            PiVariant::Flipped => {
                if p % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubstitutionRule {
    /// x -> -d/pi_eff, d -> pi_eff x (or the inverse map).
    Fourier { variant: PiVariant, inverse: bool },
    /// x -> 1/x.
    Inversion,
    /// theta -> theta - gamma bandwise (conjugation by x^gamma).
    KummerTwist { gamma: PadicParameter },
}

/// Image of x^l d^[k] under the Fourier map:
///   (-1)^l pi^(k-l) sum_j [l! / (j! (k-j)!)] x^(k-j) d^[l-j]
/// (the inverse map carries (-1)^k instead of (-1)^l).
fn fourier_term<S: Scalar>(
    out: &mut WeylOperator<S>,
    l: i64,
    k: u32,
    coeff: &S,
    sign_flip: i64,
    inverse: bool,
) {
    debug_assert!(l >= 0);
    let lu = l as u32;
    let ctx = out.ctx.clone();
    let global_sign = if inverse {
        if k % 2 == 0 { 1 } else { -1 }
    } else if l % 2 == 0 {
        1
    } else {
        -1
    };
    // pi_eff^(k-l) = (sign_flip)^(k-l) pi^(k-l)
    let pi_exp = k as i64 - l;
    let variant_sign = if sign_flip == -1 && pi_exp.rem_euclid(2) == 1 {
        -1
    } else {
        1
    };
    let base = S::pi_pow(&ctx, pi_exp)
        .mul_rational(&BigRational::from_integer((global_sign * variant_sign).into()));
    let scaled = coeff.mul(&base);
    let l_fact = factorial(lu);
    for j in 0..=lu.min(k) {
        let denom = factorial(j) * factorial(k - j);
        let frac = BigRational::new(l_fact.clone(), denom);
        out.insert_term(k as i64 - j as i64, lu - j, scaled.mul_rational(&frac));
    }
}

pub fn apply_substitution<S: Scalar>(
    op: &WeylOperator<S>,
    rule: &SubstitutionRule,
) -> Result<WeylOperator<S>, WeylError> {
    match rule {
        SubstitutionRule::Fourier { variant, inverse } => {
            if op.flavor != Flavor::A1 {
                return Err(WeylError::FlavorMismatch {
                    expected: Flavor::A1.to_string(),
                    found: op.flavor.to_string(),
                });
            }
            let sign = variant.sign(op.ctx.p());
            let mut out = WeylOperator::zero(&op.ctx, op.flavor, op.window);
            out.truncated = op.truncated;
            for (&(l, k), c) in &op.terms {
                fourier_term(&mut out, l, k, c, sign, *inverse);
            }
            Ok(out)
        }
        SubstitutionRule::Inversion => {
            let tf = ThetaForm::of_operator(op);
            tf.invert()?.to_operator()
        }
        SubstitutionRule::KummerTwist { gamma } => {
            let g = S::from_param(&op.ctx, gamma)?;
            ThetaForm::of_operator(op).twist(&g).to_operator()
        }
    }
}
