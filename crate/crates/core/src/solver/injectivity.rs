//! Injectivity witness for multiplication by x.
//!
//! A kernel element of x on the quotient by the hypergeometric ideal
//! would have coefficients u_{l+k} whose consecutive ratios are forced:
//!
//!   v(u_{l+k+1}) - v(u_{l+k}) =
//!       (n - m)/(p-1) + sum_i v(l+k - alpha_i) - sum_j v(l+k - beta_j).
//!
//! Tracking the running valuation v_k and the gap w_k = k*lambda - v_k
//! against a decay budget lambda: if w_k diverges, no kernel element can
//! decay at rate lambda, so multiplication by x is injective on that
//! growth class.  Divergence is certified by strictly increasing maxima
//! over trailing windows of w_k.

use num::rational::Ratio;
use num::{BigInt, ToPrimitive};
use serde_json::{json, Value};

use crate::error::SolveError;
use crate::hypergeom::params::HypParams;
use crate::padic::valuation::{ValBound, Valuation};

#[derive(Debug, Clone)]
pub struct InjectivityReport {
    /// Decay budget the witness is tested against.
    pub lambda: Ratio<i64>,
    /// Index the recurrence starts at.
    pub l_start: i64,
    /// Number of ratio steps taken.
    pub steps: u64,
    /// Maxima of w_k over consecutive trailing windows.
    pub window_maxima: Vec<f64>,
    /// True when the window maxima are strictly increasing.
    pub diverges: bool,
    /// Step at which a digit stream ran out of certified digits, if any.
    pub indeterminate_at: Option<u64>,
    pub notes: Vec<String>,
}

impl InjectivityReport {
    pub fn passes(&self) -> bool {
        self.diverges && self.indeterminate_at.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": format!("{}/{}", self.lambda.numer(), self.lambda.denom()),
            "l_start": self.l_start,
            "steps": self.steps,
            "window_maxima": self.window_maxima,
            "diverges": self.diverges,
            "indeterminate_at": self.indeterminate_at,
            "notes": self.notes,
        })
    }
}

pub fn injectivity_witness(
    p: u64,
    params: &HypParams,
    l_start: i64,
    steps: u64,
    lambda: Ratio<i64>,
    windows: usize,
) -> Result<InjectivityReport, SolveError> {
    if steps < 16 || windows < 2 {
        return Err(SolveError::PreconditionViolated(
            "need at least 16 steps and 2 windows".to_string(),
        ));
    }
    let pm1 = p as i64 - 1;
    let drift = Ratio::new(params.n() as i64 - params.m() as i64, pm1);
    let mut v = Ratio::from_integer(0i64);
    let mut w_series = Vec::with_capacity(steps as usize);
    let mut indeterminate_at = None;
    let mut notes = Vec::new();
    for k in 0..steps {
        let w = Ratio::from_integer(k as i64) * lambda - v;
        w_series.push(w.to_f64().unwrap_or(f64::NAN));
        let at = BigInt::from(l_start + k as i64);
        let mut step = drift;
        let mut exact = true;
        for a in &params.alpha {
            match a.val_of_shift(p, &at) {
                ValBound::Exactly(Valuation::Finite(x)) => step += x,
                ValBound::Exactly(Valuation::Infinite) => {
                    return Err(SolveError::IntegerAlpha(a.to_string()));
                }
                ValBound::AtLeast(_) => exact = false,
            }
        }
        for b in &params.beta {
            match b.val_of_shift(p, &at) {
                ValBound::Exactly(Valuation::Finite(x)) => step -= x,
                ValBound::Exactly(Valuation::Infinite) => {
                    notes.push(format!(
                        "beta parameter equals {at}; kernel support starts above it"
                    ));
                    exact = false;
                }
                ValBound::AtLeast(_) => exact = false,
            }
        }
        if !exact {
            indeterminate_at = Some(k);
            notes.push(format!(
                "digit stream exhausted its certified digits at step {k}"
            ));
            break;
        }
        v += step;
    }
    let burn_in = w_series.len() / 8;
    let usable = &w_series[burn_in..];
    let chunk = usable.len() / windows;
    let mut window_maxima = Vec::with_capacity(windows);
    if chunk > 0 {
        for w in 0..windows {
            let lo = w * chunk;
            let hi = if w + 1 == windows { usable.len() } else { lo + chunk };
            let max = usable[lo..hi]
                .iter()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            window_maxima.push(max);
        }
    }
    let diverges = window_maxima.len() == windows
        && window_maxima.windows(2).all(|pair| pair[1] > pair[0]);
    Ok(InjectivityReport {
        lambda,
        l_start,
        steps: w_series.len() as u64,
        window_maxima,
        diverges,
        indeterminate_at,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::param::{DigitStream, PadicParameter};

    #[test]
    fn generic_rational_parameters_diverge() {
        let params = HypParams::new(
            vec![PadicParameter::rational_i64(1, 2)],
            vec![PadicParameter::rational_i64(1, 5)],
        );
        let rep =
            injectivity_witness(3, &params, 0, 300, Ratio::new(1, 2), 6).unwrap();
        assert!(rep.passes(), "maxima: {:?}", rep.window_maxima);
    }

    #[test]
    fn pure_alpha_family_diverges() {
        let params = HypParams::new(
            vec![
                PadicParameter::rational_i64(1, 2),
                PadicParameter::rational_i64(-1, 4),
            ],
            vec![],
        );
        let rep =
            injectivity_witness(5, &params, 0, 300, Ratio::new(1, 2), 6).unwrap();
        assert!(rep.passes());
    }

    #[test]
    fn short_stream_reports_indeterminate_step() {
        let stream = DigitStream::new(3, vec![1, 2, 1]).unwrap();
        let params = HypParams::new(vec![PadicParameter::Stream(stream)], vec![]);
        let rep =
            injectivity_witness(3, &params, 0, 64, Ratio::new(1, 2), 4).unwrap();
        assert!(rep.indeterminate_at.is_some());
        assert!(!rep.passes());
    }

    #[test]
    fn integer_alpha_hits_the_pole() {
        let params = HypParams::new(vec![PadicParameter::rational_i64(7, 1)], vec![]);
        let err =
            injectivity_witness(3, &params, 0, 64, Ratio::new(1, 2), 4).unwrap_err();
        assert!(matches!(err, SolveError::IntegerAlpha(_)));
    }
}
