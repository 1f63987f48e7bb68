//! Identity checks between hypergeometric operators.
//!
//! Each check builds both sides independently, then discovers the scalar
//! unit c and the x-power shift d for which lhs = c * x^d * rhs, and
//! finally compares term by term.  Nothing is assumed about c or d up
//! front; the closed-form predictions are attached to the report so a
//! failure shows both what was discovered and what was expected.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::HypError;
use crate::hypergeom::construct::hyp_operator;
use crate::hypergeom::params::{param_neg_minus_one, HypParams};
use crate::padic::config::FieldCtx;
use crate::padic::param::PadicParameter;
use crate::padic::scalar::Scalar;
use crate::padic::valuation::Zeroness;
use crate::weyl::operator::{Flavor, WeylOperator, Window};
use crate::weyl::subst::{apply_substitution, SubstitutionRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityStatus {
    /// Both sides agree exactly.
    Verified,
    /// The difference is indistinguishable from zero at working precision.
    VerifiedToPrecision,
    /// Some coefficient of the difference is certainly nonzero.
    Failed,
    /// The comparison could not be decided (no usable reference term).
    Indeterminate,
}

impl IdentityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityStatus::Verified => "verified",
            IdentityStatus::VerifiedToPrecision => "verified-to-precision",
            IdentityStatus::Failed => "failed",
            IdentityStatus::Indeterminate => "indeterminate",
        }
    }

    pub fn passes(self) -> bool {
        matches!(
            self,
            IdentityStatus::Verified | IdentityStatus::VerifiedToPrecision
        )
    }
}

#[derive(Debug, Clone)]
pub struct CompareOutcome<S: Scalar> {
    pub status: IdentityStatus,
    pub unit: Option<S>,
    pub shift: Option<i64>,
    pub discrepancy: Option<Value>,
    pub notes: Vec<String>,
}

impl<S: Scalar> CompareOutcome<S> {
    fn finished(status: IdentityStatus, note: impl Into<String>) -> Self {
        CompareOutcome {
            status,
            unit: None,
            shift: None,
            discrepancy: None,
            notes: vec![note.into()],
        }
    }
}

/// Discover (c, d) with lhs = c * x^d * rhs and compare in full.
pub fn compare_up_to_unit<S: Scalar>(
    lhs: &WeylOperator<S>,
    rhs: &WeylOperator<S>,
) -> CompareOutcome<S> {
    let mut notes = Vec::new();
    if lhs.terms.is_empty() && rhs.terms.is_empty() {
        return CompareOutcome {
            status: IdentityStatus::Verified,
            unit: Some(S::one(&lhs.ctx)),
            shift: Some(0),
            discrepancy: None,
            notes,
        };
    }
    if lhs.terms.is_empty() || rhs.terms.is_empty() {
        let nonempty = if lhs.terms.is_empty() { rhs } else { lhs };
        return if nonempty.zeroness() == Zeroness::Indeterminate {
            CompareOutcome::finished(
                IdentityStatus::Indeterminate,
                "one side is exactly zero, the other indistinguishable from zero",
            )
        } else {
            CompareOutcome::finished(
                IdentityStatus::Failed,
                "one side is exactly zero, the other certainly not",
            )
        };
    }

    let span = |op: &WeylOperator<S>| {
        let min = op.terms.keys().map(|&(l, _)| l).min().unwrap();
        let max = op.terms.keys().map(|&(l, _)| l).max().unwrap();
        (min, max)
    };
    let (lmin, lmax) = span(lhs);
    let (rmin, rmax) = span(rhs);
    let d = lmin - rmin;
    if lmax - rmax != d {
        return CompareOutcome::finished(
            IdentityStatus::Failed,
            format!(
                "x-degree spans are not translates: lhs [{lmin},{lmax}] vs rhs [{rmin},{rmax}]"
            ),
        );
    }

    let Some((&(rl, rk), rcoeff)) = rhs
        .terms
        .iter()
        .find(|(_, c)| c.zeroness() == Zeroness::NonZero)
    else {
        return CompareOutcome::finished(
            IdentityStatus::Indeterminate,
            "no rhs coefficient is certainly nonzero; cannot discover the unit",
        );
    };
    let Some(lcoeff) = lhs.terms.get(&(rl + d, rk)) else {
        return CompareOutcome::finished(
            IdentityStatus::Failed,
            format!("lhs has no term matching the rhs reference at ({rl}, {rk})"),
        );
    };
    let unit = match lcoeff.div(rcoeff) {
        Ok(u) => u,
        Err(e) => {
            return CompareOutcome::finished(
                IdentityStatus::Indeterminate,
                format!("unit discovery failed: {e}"),
            )
        }
    };

    let mut scaled = WeylOperator::zero(&lhs.ctx, lhs.flavor, lhs.window);
    for (&(l, k), c) in &rhs.terms {
        scaled.insert_term(l + d, k, c.mul(&unit));
    }
    let clipped = scaled.truncated;
    if clipped {
        notes.push("shifted comparison clipped at the window edge".to_string());
    }

    let diff = lhs.sub(&scaled);
    let status = match diff.zeroness() {
        Zeroness::Zero => {
            if clipped {
                IdentityStatus::VerifiedToPrecision
            } else {
                IdentityStatus::Verified
            }
        }
        Zeroness::Indeterminate => {
            notes.push("difference indistinguishable from zero at working precision".to_string());
            IdentityStatus::VerifiedToPrecision
        }
        Zeroness::NonZero => IdentityStatus::Failed,
    };
    let discrepancy = diff
        .terms
        .iter()
        .find(|(_, c)| c.zeroness() == Zeroness::NonZero)
        .map(|(&(l, k), c)| json!({ "l": l, "k": k, "coeff": c.to_json() }));

    CompareOutcome {
        status,
        unit: Some(unit),
        shift: Some(d),
        discrepancy,
        notes,
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport<S: Scalar> {
    pub name: &'static str,
    pub status: IdentityStatus,
    pub unit: Option<S>,
    pub shift: Option<i64>,
    /// Closed-form unit the identity predicts, when one is known.
    pub predicted_unit: Option<S>,
    pub lhs: Value,
    pub rhs: Value,
    pub discrepancy: Option<Value>,
    pub notes: Vec<String>,
}

impl<S: Scalar> IdentityReport<S> {
    pub fn passes(&self) -> bool {
        self.status.passes()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.name,
            "status": self.status.as_str(),
            "unit": self.unit.as_ref().map(|u| u.to_json()),
            "shift": self.shift,
            "predicted_unit": self.predicted_unit.as_ref().map(|u| u.to_json()),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "discrepancy": self.discrepancy,
            "notes": self.notes,
        })
    }
}

fn report_from<S: Scalar>(
    name: &'static str,
    cmp: CompareOutcome<S>,
    predicted_unit: Option<S>,
    lhs: &WeylOperator<S>,
    rhs: &WeylOperator<S>,
) -> IdentityReport<S> {
    IdentityReport {
        name,
        status: cmp.status,
        unit: cmp.unit,
        shift: cmp.shift,
        predicted_unit,
        lhs: lhs.to_json(),
        rhs: rhs.to_json(),
        discrepancy: cmp.discrepancy,
        notes: cmp.notes,
    }
}

/// twist(Hyp(alpha; beta), g) = Hyp(alpha + g; beta + g), exactly.
pub fn kummer_identity_check<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    gamma: &PadicParameter,
    flavor: Flavor,
    window: Window,
) -> Result<IdentityReport<S>, HypError> {
    let h = hyp_operator::<S>(ctx, params, flavor, window)?;
    let lhs = apply_substitution(
        &h,
        &SubstitutionRule::KummerTwist {
            gamma: gamma.clone(),
        },
    )?;
    let shifted = params.shifted(ctx.p(), gamma)?;
    let rhs = hyp_operator::<S>(ctx, &shifted, flavor, window)?;
    let cmp = compare_up_to_unit(&lhs, &rhs);
    Ok(report_from(
        "kummer-twist",
        cmp,
        Some(S::one(ctx)),
        &lhs,
        &rhs,
    ))
}

/// x * inv(Hyp(alpha; beta)) = c * Hyp(-beta; -alpha) with the variant
/// flipped and c = -(-1)^(m + n p + n) pi_eff^(m - n).
pub fn inversion_identity_check<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    window: Window,
) -> Result<IdentityReport<S>, HypError> {
    let h = hyp_operator::<S>(ctx, params, Flavor::B1, window)?;
    let inv = apply_substitution(&h, &SubstitutionRule::Inversion)?;
    let lhs = WeylOperator::x(ctx, Flavor::B1, window).mul(&inv);

    let neg = |v: &[PadicParameter]| v.iter().map(|q| q.neg()).collect::<Vec<_>>();
    let dual = HypParams {
        alpha: neg(&params.beta),
        beta: neg(&params.alpha),
        variant: params.variant.other(),
    };
    let rhs = hyp_operator::<S>(ctx, &dual, Flavor::B1, window)?;

    let m = params.m() as i64;
    let n = params.n() as i64;
    let p = ctx.p();
    let mut sign = -params.sigma(p) * if n % 2 == 0 { 1 } else { -1 };
    if params.variant.sign(p) == -1 && (m - n).rem_euclid(2) == 1 {
        sign = -sign;
    }
    let predicted = S::pi_pow(ctx, m - n)
        .mul_rational(&num::BigRational::from_integer(num::BigInt::from(sign)));

    let cmp = compare_up_to_unit(&lhs, &rhs);
    Ok(report_from(
        "inversion",
        cmp,
        Some(predicted),
        &lhs,
        &rhs,
    ))
}

/// For alpha_1 = 0:
///   x * F(Hyp_flip(-beta - 1; -alpha' - 1)) = c * Hyp(alpha; beta)
/// where alpha' drops the zero entry, F is the Fourier map in the target
/// variant, and the dual operator carries the flipped variant.
pub fn fourier_identity_check<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    window: Window,
) -> Result<IdentityReport<S>, HypError> {
    let Some((first, rest)) = params.alpha.split_first() else {
        return Err(HypError::PreconditionViolated(
            "the Fourier gluing needs at least one alpha".to_string(),
        ));
    };
    if first.is_integer() != crate::padic::valuation::Tri::Yes
        || first.integer_value_in_range(0, 0) != Some(0)
    {
        return Err(HypError::PreconditionViolated(format!(
            "the Fourier gluing needs alpha_1 = 0, found {first}"
        )));
    }

    let p = ctx.p();
    let transform = |v: &[PadicParameter]| -> Result<Vec<PadicParameter>, HypError> {
        v.iter().map(|q| param_neg_minus_one(p, q)).collect()
    };
    let dual = HypParams {
        alpha: transform(&params.beta)?,
        beta: transform(rest)?,
        variant: params.variant.other(),
    };
    let h_dual = hyp_operator::<S>(ctx, &dual, Flavor::A1, window)?;
    let mapped = apply_substitution(
        &h_dual,
        &SubstitutionRule::Fourier {
            variant: params.variant,
            inverse: false,
        },
    )?;
    let lhs = WeylOperator::x(ctx, Flavor::A1, window).mul(&mapped);
    let rhs = hyp_operator::<S>(ctx, params, Flavor::A1, window)?;

    let cmp = compare_up_to_unit(&lhs, &rhs);
    Ok(report_from("fourier-gluing", cmp, None, &lhs, &rhs))
}
