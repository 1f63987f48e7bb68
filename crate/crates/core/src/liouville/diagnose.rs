//! p-adic Liouville diagnostics for parameters.
//!
//! A parameter alpha is dangerous when it admits integer approximations
//! that are far too good: v_p(alpha - k) growing linearly in k.  Rational
//! parameters can never do this (v_p(a - k b) <= log_p(|a| + k|b|)), so
//! they are certified outright.  Digit streams are scanned for a witness
//! k >= 3 with 2 v_p(alpha +- k) >= k; if none appears within reach of the
//! horizon the verdict stays open.

use num::rational::Ratio;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::LiouvilleError;
use crate::padic::param::{combine, Combination, PadicParameter};
use crate::padic::rational::vp_rational;
use crate::padic::valuation::{Tri, ValBound, Valuation};

/// Which of the two shift series produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSide {
    /// v_p(alpha - k)
    Minus,
    /// v_p(alpha + k)
    Plus,
}

impl ShiftSide {
    pub fn as_str(self) -> &'static str {
        match self {
            ShiftSide::Minus => "alpha-k",
            ShiftSide::Plus => "alpha+k",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LiouvilleDiagnosis {
    /// Integer approximations are provably no better than O(log k).
    NonLiouvilleCertified { radius: f64, note: String },
    /// Some shift is p-adically far too close to an integer.
    LiouvilleWitnessed { k: u64, val_lower: i64, side: ShiftSide },
    /// Neither certified nor witnessed within the scanned range.
    Indeterminate { scanned_to: u64, note: String },
}

impl LiouvilleDiagnosis {
    pub fn is_certified(&self) -> bool {
        matches!(self, LiouvilleDiagnosis::NonLiouvilleCertified { .. })
    }

    pub fn is_witnessed(&self) -> bool {
        matches!(self, LiouvilleDiagnosis::LiouvilleWitnessed { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            LiouvilleDiagnosis::NonLiouvilleCertified { radius, note } => json!({
                "status": "non-liouville-certified",
                "radius": radius,
                "note": note,
            }),
            LiouvilleDiagnosis::LiouvilleWitnessed { k, val_lower, side } => json!({
                "status": "liouville-witnessed",
                "k": k,
                "val_lower": val_lower,
                "side": side.as_str(),
            }),
            LiouvilleDiagnosis::Indeterminate { scanned_to, note } => json!({
                "status": "indeterminate",
                "scanned_to": scanned_to,
                "note": note,
            }),
        }
    }
}

fn bound_as_int(b: &ValBound) -> Option<i64> {
    match b.lower() {
        Valuation::Finite(r) if r.is_integer() => Some(r.to_integer()),
        _ => None,
    }
}

/// Classify a parameter.  `scan_max` caps the witness scan for streams;
/// rationals are decided analytically.
pub fn diagnose(
    p: u64,
    param: &PadicParameter,
    scan_max: u64,
) -> Result<LiouvilleDiagnosis, LiouvilleError> {
    if param.is_integer() == Tri::Yes {
        return Err(LiouvilleError::IsInteger);
    }
    match param {
        PadicParameter::Rational(r) => Ok(diagnose_rational(p, r)),
        PadicParameter::Stream(s) => {
            let h = s.horizon();
            if h < 4 {
                return Err(LiouvilleError::HorizonTooSmall(h));
            }
            let cap = scan_max.min(2 * h as u64);
            if let Some(n) = param.integer_value_in_range(
                -(cap.min(i64::MAX as u64) as i64),
                cap.min(i64::MAX as u64) as i64,
            ) {
                return Ok(LiouvilleDiagnosis::Indeterminate {
                    scanned_to: 0,
                    note: format!(
                        "indistinguishable from the integer {n} at horizon {h}"
                    ),
                });
            }
            for k in 3..=cap {
                let ki = BigInt::from(k);
                for (side, shift) in [(ShiftSide::Minus, ki.clone()), (ShiftSide::Plus, -ki)] {
                    if let Some(v) = bound_as_int(&param.val_of_shift(p, &shift)) {
                        if v >= 0 && 2 * (v as u64) >= k {
                            return Ok(LiouvilleDiagnosis::LiouvilleWitnessed {
                                k,
                                val_lower: v,
                                side,
                            });
                        }
                    }
                }
            }
            Ok(LiouvilleDiagnosis::Indeterminate {
                scanned_to: cap,
                note: "no witness within the scanned range".to_string(),
            })
        }
    }
}

fn diagnose_rational(p: u64, r: &BigRational) -> LiouvilleDiagnosis {
    let v = vp_rational(p, r);
    match v {
        Valuation::Finite(v) if v < Ratio::zero() => {
            let radius = (p as f64).powf(-(v.to_integer() as f64));
            LiouvilleDiagnosis::NonLiouvilleCertified {
                radius,
                note: format!(
                    "valuation {v} < 0 keeps every integer at distance p^{} > 1",
                    -v
                ),
            }
        }
        _ => LiouvilleDiagnosis::NonLiouvilleCertified {
            radius: 1.0,
            note: format!(
                "v_p({} - k) <= log_p(|{}| + k*{}) = O(log k)",
                r,
                r.numer(),
                r.denom().abs()
            ),
        },
    }
}

/// Estimated decay rate p^(-slope) of 1/prod_{s=1}^{k}(s - alpha), from the
/// chord of the valuation prefix sums between h/2 and h.  Non-Liouville
/// parameters approach the factorial rate p^(-1/(p-1)).
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEstimate {
    pub slope: Ratio<i64>,
    pub radius: f64,
    pub h: u64,
    /// False when a digit stream ran past its horizon and only lower
    /// bounds entered the sums.
    pub exact: bool,
}

impl RadiusEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "slope": format!("{}/{}", self.slope.numer(), self.slope.denom()),
            "radius": self.radius,
            "h": self.h,
            "exact": self.exact,
        })
    }
}

pub fn radius_estimate(
    p: u64,
    param: &PadicParameter,
    h: u64,
) -> Result<RadiusEstimate, LiouvilleError> {
    if h < 4 {
        return Err(LiouvilleError::PreconditionViolated(
            "need h >= 4 for a chord".to_string(),
        ));
    }
    if param.is_integer() == Tri::Yes {
        return Err(LiouvilleError::IsInteger);
    }
    let mid = h / 2;
    let mut v_mid = 0i64;
    let mut v_end = 0i64;
    let mut exact = true;
    for s in 1..=h {
        let b = param.val_of_shift(p, &BigInt::from(s));
        exact &= b.is_exact();
        let v = match b.lower() {
            Valuation::Finite(r) => r.to_integer(),
            Valuation::Infinite => return Err(LiouvilleError::IsInteger),
        };
        if s <= mid {
            v_mid += v;
        }
        v_end += v;
    }
    let slope = Ratio::new(v_end - v_mid, (h - mid) as i64);
    let sf = slope.to_f64().unwrap_or(f64::INFINITY);
    Ok(RadiusEstimate {
        slope,
        radius: (p as f64).powf(-sf),
        h,
        exact,
    })
}

/// One entry of a sigma-orbit scan: an integer combination of the given
/// parameters together with its diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaScanEntry {
    pub coeffs: Vec<i64>,
    pub value: String,
    pub outcome: ScanOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanOutcome {
    Integer,
    Diagnosis(LiouvilleDiagnosis),
}

impl SigmaScanEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs,
            "value": self.value,
            "outcome": match &self.outcome {
                ScanOutcome::Integer => json!({"status": "integer"}),
                ScanOutcome::Diagnosis(d) => d.to_json(),
            },
        })
    }
}

/// Diagnose every nonzero integer combination sum_g c_g * alpha_g with
/// |c_g| <= height, in lexicographic order of the coefficient vectors.
pub fn sigma_scan(
    p: u64,
    params: &[PadicParameter],
    height: i64,
    scan_max: u64,
) -> Result<Vec<SigmaScanEntry>, LiouvilleError> {
    if params.is_empty() || height < 1 {
        return Err(LiouvilleError::PreconditionViolated(
            "need at least one parameter and height >= 1".to_string(),
        ));
    }
    let g = params.len();
    let mut coeffs = vec![-height; g];
    let mut out = Vec::new();
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let terms: Vec<(i64, &PadicParameter)> = coeffs
                .iter()
                .zip(params)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, prm)| (c, prm))
                .collect();
            let entry = match combine(p, &terms) {
                Combination::Rational(r) if r.is_integer() => SigmaScanEntry {
                    coeffs: coeffs.clone(),
                    value: r.to_string(),
                    outcome: ScanOutcome::Integer,
                },
                Combination::Rational(r) => {
                    let prm = PadicParameter::Rational(r);
                    let d = diagnose(p, &prm, scan_max)?;
                    SigmaScanEntry {
                        coeffs: coeffs.clone(),
                        value: prm.to_string(),
                        outcome: ScanOutcome::Diagnosis(d),
                    }
                }
                Combination::Stream(s) => {
                    let prm = PadicParameter::Stream(s);
                    let d = diagnose(p, &prm, scan_max)?;
                    SigmaScanEntry {
                        coeffs: coeffs.clone(),
                        value: prm.to_string(),
                        outcome: ScanOutcome::Diagnosis(d),
                    }
                }
                Combination::NonIntegral { val } => SigmaScanEntry {
                    coeffs: coeffs.clone(),
                    value: format!("(valuation {val})"),
                    outcome: ScanOutcome::Diagnosis(LiouvilleDiagnosis::NonLiouvilleCertified {
                        radius: (p as f64).powi(-val as i32),
                        note: format!(
                            "negative valuation {val} keeps the combination away from the integers"
                        ),
                    }),
                },
            };
            out.push(entry);
        }
        // Odometer step.
        let mut i = g;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if coeffs[i] < height {
                coeffs[i] += 1;
                for c in coeffs.iter_mut().skip(i + 1) {
                    *c = -height;
                }
                break;
            }
        }
    }
}
