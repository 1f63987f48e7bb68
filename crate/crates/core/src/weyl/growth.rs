//! Coefficient-growth certificates over a truncation window.
//!
//! A certificate (C, eta) = (p^kappa, p^-lambda) asserts |a_{l,k}| < C eta^w
//! for every term of weight w, i.e. v(a) > w*lambda - kappa in valuation
//! form. Fitting is canonical and deterministic: lambda is the negated
//! steepest consecutive chord slope of the weight-vs-valuation profile
//! (1/2 for flat or degenerate profiles), kappa the smallest margin that
//! makes every strict inequality hold with one unit to spare.

use num::rational::Ratio;
use num::Zero;
use serde_json::json;

use crate::error::WeylError;
use crate::padic::scalar::Scalar;
use crate::padic::valuation::{ValBound, Valuation};

use super::operator::{weight, Flavor, WeylOperator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    /// log_p C.
    pub kappa: Ratio<i64>,
    /// -log_p eta; positive means coefficients shrink with weight.
    pub lambda: Ratio<i64>,
    pub flavor: Flavor,
    /// Weight range the certificate was fitted on.
    pub weight_range: (i64, i64),
}

impl GrowthCertificate {
    /// The strict bound the certificate asserts at weight w.
    pub fn min_valuation_at(&self, w: i64) -> Ratio<i64> {
        self.lambda * Ratio::from_integer(w) - self.kappa
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kappa": format!("{}", self.kappa),
            "lambda": format!("{}", self.lambda),
            "C": format!("p^({})", self.kappa),
            "eta": format!("p^(-{})", self.lambda),
            "flavor": format!("{}", self.flavor),
            "weight_range": [self.weight_range.0, self.weight_range.1],
        })
    }
}

/// Valuation lower bound of a coefficient, for fitting purposes.
fn coeff_lower<S: Scalar>(c: &S) -> Option<Ratio<i64>> {
    match c.valuation() {
        ValBound::Exactly(Valuation::Finite(v)) => Some(v),
        ValBound::Exactly(Valuation::Infinite) => None,
        ValBound::AtLeast(b) => Some(b),
    }
}

/// Fit the canonical certificate for an operator on its window.
pub fn fit_growth<S: Scalar>(op: &WeylOperator<S>) -> Result<GrowthCertificate, WeylError> {
    // Worst (smallest) valuation lower bound per weight.
    let mut profile: std::collections::BTreeMap<i64, Ratio<i64>> = std::collections::BTreeMap::new();
    for (&(l, k), c) in &op.terms {
        let w = weight(op.flavor, l, k);
        if let Some(v) = coeff_lower(c) {
            profile
                .entry(w)
                .and_modify(|cur| {
                    if v < *cur {
                        *cur = v;
                    }
                })
                .or_insert(v);
        }
    }
    let points: Vec<(i64, Ratio<i64>)> = profile.into_iter().collect();
    let weight_range = match (points.first(), points.last()) {
        (Some(&(a, _)), Some(&(b, _))) => (a, b),
        _ => (0, 0),
    };
    // Steepest downward trend of the valuation profile.
    let mut steepest: Option<Ratio<i64>> = None; // max of -(dv/dw)
    for pair in points.windows(2) {
        let (w0, v0) = pair[0];
        let (w1, v1) = pair[1];
        let slope = (v0 - v1) / Ratio::from_integer(w1 - w0);
        steepest = Some(match steepest {
            Some(cur) => cur.max(slope),
            None => slope,
        });
    }
    let lambda = match steepest {
        Some(s) if s > Ratio::zero() => return Err(WeylError::NotOverconvergentOnWindow),
        Some(s) if s < Ratio::zero() => -s,
        _ => Ratio::new(1, 2), // flat or single-weight profile
    };
    // kappa: strict margin of one valuation unit over the worst excess.
    let mut kappa = Ratio::from_integer(0);
    for &(w, v) in &points {
        let excess = lambda * Ratio::from_integer(w) - v;
        if excess > kappa {
            kappa = excess;
        }
    }
    kappa += Ratio::from_integer(1);
    Ok(GrowthCertificate {
        kappa,
        lambda,
        flavor: op.flavor,
        weight_range,
    })
}

/// Check a certificate against an operator. Returns the first violating
/// term, judging by valuation lower bounds (conservative).
pub fn verify_growth<S: Scalar>(
    op: &WeylOperator<S>,
    cert: &GrowthCertificate,
) -> Option<((i64, u32), Ratio<i64>)> {
    for (&(l, k), c) in &op.terms {
        let w = weight(op.flavor, l, k);
        if let Some(v) = coeff_lower(c) {
            if v <= cert.min_valuation_at(w) {
                return Some(((l, k), v));
            }
        }
    }
    None
}
