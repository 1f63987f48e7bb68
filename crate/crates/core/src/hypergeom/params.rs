//! Parameter tuples (alpha; beta) for hypergeometric operators, with the
//! pi-variant bookkeeping and the non-integer-difference hypothesis check.

use std::fmt;

use num::BigRational;
use serde_json::json;

use crate::error::HypError;
use crate::padic::param::{combine, Combination, PadicParameter};
use crate::padic::valuation::Tri;
use crate::weyl::subst::PiVariant;

#[derive(Debug, Clone, PartialEq)]
pub struct HypParams {
    pub alpha: Vec<PadicParameter>,
    pub beta: Vec<PadicParameter>,
    pub variant: PiVariant,
}

impl HypParams {
    pub fn new(alpha: Vec<PadicParameter>, beta: Vec<PadicParameter>) -> Self {
        HypParams {
            alpha,
            beta,
            variant: PiVariant::Standard,
        }
    }

    pub fn with_variant(mut self, variant: PiVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new())
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// The sign (-1)^(m + n p).
    pub fn sigma(&self, p: u64) -> i64 {
        if (self.m() as u64 + self.n() as u64 * p) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Hypothesis: no alpha_i - beta_j is an integer. Exact for rational
    /// pairs; digit streams are checked against every integer candidate
    /// within +-range (the range that can influence a window computation).
    pub fn hypothesis_check(&self, p: u64, range: i64) -> Result<(), HypError> {
        for (i, a) in self.alpha.iter().enumerate() {
            for (j, b) in self.beta.iter().enumerate() {
                let diff = param_sub(p, a, b)?;
                let bad = match diff.is_integer() {
                    Tri::Yes => true,
                    Tri::No => false,
                    Tri::Unknown => diff.integer_value_in_range(-range, range).is_some(),
                };
                if bad {
                    return Err(HypError::HypothesisViolation(format!(
                        "alpha[{i}] = {a} and beta[{j}] = {b} differ by an integer"
                    )));
                }
            }
        }
        Ok(())
    }

    /// All parameters shifted by gamma: (alpha + g; beta + g).
    pub fn shifted(&self, p: u64, gamma: &PadicParameter) -> Result<Self, HypError> {
        let alpha = self
            .alpha
            .iter()
            .map(|a| param_add(p, a, gamma))
            .collect::<Result<_, _>>()?;
        let beta = self
            .beta
            .iter()
            .map(|b| param_add(p, b, gamma))
            .collect::<Result<_, _>>()?;
        Ok(HypParams {
            alpha,
            beta,
            variant: self.variant,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "alpha": self.alpha.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
            "beta": self.beta.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "variant": match self.variant {
                PiVariant::Standard => "standard",
                PiVariant::Flipped => "flipped",
            },
        })
    }
}

impl fmt::Display for HypParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_list = |v: &[PadicParameter]| -> String {
            v.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "Hyp({}; {})", fmt_list(&self.alpha), fmt_list(&self.beta))?;
        if self.variant == PiVariant::Flipped {
            write!(f, "[flipped]")?;
        }
        Ok(())
    }
}

/// x + y as parameters (exact when possible, stream-materialized otherwise).
pub fn param_add(
    p: u64,
    x: &PadicParameter,
    y: &PadicParameter,
) -> Result<PadicParameter, HypError> {
    param_combine(p, &[(1, x), (1, y)])
}

/// x - y as parameters.
pub fn param_sub(
    p: u64,
    x: &PadicParameter,
    y: &PadicParameter,
) -> Result<PadicParameter, HypError> {
    param_combine(p, &[(1, x), (-1, y)])
}

fn param_combine(
    p: u64,
    terms: &[(i64, &PadicParameter)],
) -> Result<PadicParameter, HypError> {
    match combine(p, terms) {
        Combination::Rational(r) => Ok(PadicParameter::Rational(r)),
        Combination::Stream(s) => Ok(PadicParameter::Stream(s)),
        Combination::NonIntegral { val } => Err(HypError::PreconditionViolated(format!(
            "combination mixes a digit stream with a rational of negative valuation {val}; \
             the result cannot be represented as digits"
        ))),
    }
}

/// -x - 1, the parameter transform the Fourier gluing uses.
pub fn param_neg_minus_one(p: u64, x: &PadicParameter) -> Result<PadicParameter, HypError> {
    let minus_one = PadicParameter::Rational(BigRational::from_integer((-1).into()));
    param_combine(p, &[(-1, x), (1, &minus_one)])
}
