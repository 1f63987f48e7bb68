//! Solving x-inverse problems against a hypergeometric operator.
//!
//! Both sides live in the span of the divided powers d^[k].  Given
//! P = sum_k c_k d^[k], find R = sum_k d_k d^[k] with
//!
//!   P + R * H  in  x * (ambient algebra),
//!
//! i.e. every d^[k]-coefficient of P + R * H vanishes.  Writing
//! A(k) = prod_i (k - alpha_i), B(k) = prod_j (k - beta_j) and
//! pifac = sigma * pi_eff^(m-n), the condition is the recurrence
//!
//!   c_k + d_k A(k) - pifac B(k) d_{k+1} = 0,
//!
//! which has exactly one finitely supported solution: run it backward
//! from the top degree.  The result is verified independently by
//! multiplying out P + R * H in a window large enough to avoid clipping
//! and reducing modulo x.

use std::sync::Arc;

use num::rational::Ratio;
use num::{BigInt, BigRational, BigUint, Zero};
use serde_json::{json, Value};

use crate::error::{SolveError, WeylError};
use crate::hypergeom::construct::hyp_operator;
use crate::hypergeom::params::HypParams;
use crate::liouville::diagnose::{diagnose, LiouvilleDiagnosis};
use crate::padic::config::FieldCtx;
use crate::padic::param::PadicParameter;
use crate::padic::rational::{ceil_log, vp_rational};
use crate::padic::scalar::Scalar;
use crate::padic::valuation::{Tri, Valuation, Zeroness};
use crate::weyl::growth::{fit_growth, GrowthCertificate};
use crate::weyl::operator::{Flavor, WeylOperator, Window};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Accept digit-stream parameters whose Liouville status cannot be
    /// decided within the scan range.
    pub assume_non_liouville: bool,
    /// Witness-scan range for the Liouville gate.
    pub liouville_scan: u64,
    /// When set, fail with TailBoundTooWeak unless every certified
    /// coefficient floor reaches this valuation.
    pub min_tail_floor: Option<Ratio<i64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            assume_non_liouville: false,
            liouville_scan: 512,
            min_tail_floor: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<S: Scalar> {
    /// Coefficients d_0..d_T of the solution R.
    pub d: Vec<S>,
    /// R as an operator (terms (0, k)).
    pub r_op: WeylOperator<S>,
    /// First index past the integer beta shifts, where the downward pass
    /// of the classical head/tail split would start.
    pub l0: i64,
    /// Top degree T of the solve.
    pub truncation: u32,
    /// d^[k]-coefficients of P + R*H after reduction mod x; all of them
    /// are exact zeros (exact scalars) or indistinguishable from zero.
    pub residual: Vec<S>,
    pub residual_zeroness: Zeroness,
    /// Overconvergence certificate fitted to R, when one exists.
    pub growth: Result<GrowthCertificate, String>,
    /// Certified valuation floors for d_s (rational parameters only).
    pub floors: Vec<Ratio<i64>>,
    pub notes: Vec<String>,
}

impl<S: Scalar> SolveReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "l0": self.l0,
            "truncation": self.truncation,
            "residual_zeroness": format!("{:?}", self.residual_zeroness),
            "residual": self.residual.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "growth": match &self.growth {
                Ok(c) => c.to_json(),
                Err(e) => json!({ "unavailable": e }),
            },
            "floors": self
                .floors
                .iter()
                .map(|f| format!("{}/{}", f.numer(), f.denom()))
                .collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

/// prod over params of (k - param) as a scalar.
fn eval_product<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &[PadicParameter],
    k: i64,
) -> Result<S, SolveError> {
    let mut acc = S::one(ctx);
    for prm in params {
        let a = S::from_param(ctx, prm)?;
        let shift = S::from_i64(ctx, k).sub(&a);
        acc = acc.mul(&shift);
    }
    Ok(acc)
}

fn pifac<S: Scalar>(ctx: &Arc<FieldCtx>, params: &HypParams) -> S {
    let m = params.m() as i64;
    let n = params.n() as i64;
    let mut sign = params.sigma(ctx.p());
    if params.variant.sign(ctx.p()) == -1 && (m - n).rem_euclid(2) == 1 {
        sign = -sign;
    }
    S::pi_pow(ctx, m - n).mul_rational(&BigRational::from_integer(BigInt::from(sign)))
}

fn gate_parameters(
    p: u64,
    params: &HypParams,
    t: i64,
    opts: &SolveOptions,
) -> Result<i64, SolveError> {
    for a in &params.alpha {
        match a.is_integer() {
            Tri::Yes => {
                if a.integer_value_in_range(0, t).is_some() {
                    return Err(SolveError::IntegerAlpha(a.to_string()));
                }
            }
            Tri::Unknown => {
                if a.integer_value_in_range(0, t).is_some() {
                    return Err(SolveError::IndeterminateIntegrality);
                }
            }
            Tri::No => {}
        }
    }
    let mut l0 = 0i64;
    for b in &params.beta {
        if let Some(nb) = b.integer_value_in_range(0, t) {
            l0 = l0.max(nb + 1);
        }
    }
    for prm in params.alpha.iter().chain(&params.beta) {
        if prm.is_integer() == Tri::Yes {
            // Integers sit at maximal distance from every other integer;
            // the Liouville diagnostic does not apply to them.
            continue;
        }
        match diagnose(p, prm, opts.liouville_scan) {
            Ok(LiouvilleDiagnosis::NonLiouvilleCertified { .. }) => {}
            Ok(LiouvilleDiagnosis::LiouvilleWitnessed { k, .. }) => {
                return Err(SolveError::PreconditionViolated(format!(
                    "parameter {prm} is Liouville-witnessed at k = {k}"
                )));
            }
            Ok(LiouvilleDiagnosis::Indeterminate { .. }) => {
                if !opts.assume_non_liouville {
                    return Err(SolveError::LiouvilleIndeterminate);
                }
            }
            Err(e) => {
                return Err(SolveError::PreconditionViolated(format!(
                    "Liouville gate: {e}"
                )));
            }
        }
    }
    Ok(l0)
}

/// Certified lower bound for v(d_s) = v(sum_t g(s,t) c_t), from counting
/// bounds on consecutive-shift products.  Only available when every
/// parameter is rational.
fn coefficient_floors(
    p: u64,
    params: &HypParams,
    c_lower: &[Option<Ratio<i64>>],
    m_minus_n: i64,
) -> Option<Vec<Ratio<i64>>> {
    let pm1 = p as i64 - 1;
    let mut alphas = Vec::new();
    for a in &params.alpha {
        match a {
            PadicParameter::Rational(r) => alphas.push(r.clone()),
            PadicParameter::Stream(_) => return None,
        }
    }
    let mut betas = Vec::new();
    for b in &params.beta {
        match b {
            PadicParameter::Rational(r) => betas.push(r.clone()),
            PadicParameter::Stream(_) => return None,
        }
    }
    let val_of = |r: &BigRational| -> Ratio<i64> {
        match vp_rational(p, r) {
            Valuation::Finite(v) => v,
            Valuation::Infinite => Ratio::from_integer(i64::MAX / 4),
        }
    };
    let t_top = c_lower.len() as i64 - 1;
    let mut floors = Vec::with_capacity(c_lower.len());
    for s in 0..=t_top {
        let mut best: Option<Ratio<i64>> = None;
        for t in s..=t_top {
            let Some(clow) = c_lower[t as usize] else {
                continue;
            };
            let m_gap = t - s;
            let mut g = clow + Ratio::new(m_gap * m_minus_n, pm1);
            for b in &betas {
                let vb = val_of(b);
                if vb < Ratio::zero() {
                    g += vb * m_gap;
                } else if m_gap >= 1 {
                    let boost = Ratio::new(m_gap, pm1)
                        - Ratio::from_integer(1)
                        - Ratio::from_integer(
                            ceil_log(p, &BigUint::from(m_gap as u64)) as i64
                        );
                    if boost > Ratio::zero() {
                        g += boost;
                    }
                }
            }
            for a in &alphas {
                let va = val_of(a);
                if va < Ratio::zero() {
                    g -= va * (m_gap + 1);
                } else {
                    let reach = BigUint::from((t + 1) as u64)
                        * a.denom().magnitude()
                        + a.numer().magnitude();
                    g -= Ratio::new(m_gap + 1, pm1)
                        + Ratio::from_integer(ceil_log(p, &reach.max(BigUint::from(1u32))) as i64);
                }
            }
            best = Some(match best {
                Some(b) => b.min(g),
                None => g,
            });
        }
        floors.push(best.unwrap_or_else(|| Ratio::from_integer(0)));
    }
    Some(floors)
}

pub fn solve_x_inverse<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    c: &[S],
    opts: &SolveOptions,
) -> Result<SolveReport<S>, SolveError> {
    let mut notes = Vec::new();
    let mut c = c.to_vec();
    while c.last().is_some_and(|x| x.is_exact_zero()) {
        c.pop();
    }
    let m = params.m();
    let n = params.n();
    let t_top = c.len().saturating_sub(1) as i64;
    let l0 = gate_parameters(ctx.p(), params, t_top, opts)?;

    // Backward pass: d_k = (pifac B(k) d_{k+1} - c_k) / A(k).
    let pf: S = pifac(ctx, params);
    let mut d = vec![S::zero(ctx); c.len()];
    let mut d_above = S::zero(ctx);
    for k in (0..c.len()).rev() {
        let a_k: S = eval_product(ctx, &params.alpha, k as i64)?;
        let b_k: S = eval_product(ctx, &params.beta, k as i64)?;
        let num = pf.mul(&b_k).mul(&d_above).sub(&c[k]);
        d[k] = num.div(&a_k)?;
        d_above = d[k].clone();
    }

    // Independent verification: expand P + R*H and reduce mod x in a
    // window that provably cannot clip.
    let lmax = (m.max(n + 1) as i64) + 2;
    let kmax = c.len() as u32 + m.max(n) as u32 + 2;
    let window = Window::new(lmax, kmax);
    let h = hyp_operator::<S>(ctx, params, Flavor::A1, window)
        .map_err(|e| SolveError::PreconditionViolated(e.to_string()))?;
    let mut p_op = WeylOperator::zero(ctx, Flavor::A1, window);
    for (k, ck) in c.iter().enumerate() {
        p_op.insert_term(0, k as u32, ck.clone());
    }
    let mut r_op = WeylOperator::zero(ctx, Flavor::A1, window);
    for (k, dk) in d.iter().enumerate() {
        r_op.insert_term(0, k as u32, dk.clone());
    }
    let g = p_op.add(&r_op.mul(&h));
    if g.truncated {
        return Err(SolveError::Weyl(WeylError::TruncationOverflow(
            "residual window clipped; this is a bug in the window sizing".to_string(),
        )));
    }
    let residual = g.reduce_mod_x()?;
    let mut residual_zeroness = Zeroness::Zero;
    for r in &residual {
        match r.zeroness() {
            Zeroness::NonZero => {
                return Err(SolveError::ResidualNonzero(format!(
                    "{}",
                    r.valuation()
                )));
            }
            Zeroness::Indeterminate => residual_zeroness = Zeroness::Indeterminate,
            Zeroness::Zero => {}
        }
    }

    let growth = if r_op.terms.is_empty() {
        Err("solution is zero".to_string())
    } else {
        fit_growth(&r_op).map_err(|e| e.to_string())
    };

    let c_lower: Vec<Option<Ratio<i64>>> = c
        .iter()
        .map(|x| x.valuation().lower().finite())
        .collect();
    let floors = coefficient_floors(ctx.p(), params, &c_lower, m as i64 - n as i64)
        .unwrap_or_default();
    if floors.is_empty() && !c.is_empty() {
        notes.push("coefficient floors unavailable for stream parameters".to_string());
    }
    if let Some(target) = opts.min_tail_floor {
        let best = floors.iter().min().copied();
        match best {
            Some(b) if b >= target => {}
            Some(b) => {
                return Err(SolveError::TailBoundTooWeak {
                    truncation: c.len() as u32,
                    best: format!("{}/{}", b.numer(), b.denom()),
                });
            }
            None => {
                return Err(SolveError::TailBoundTooWeak {
                    truncation: c.len() as u32,
                    best: "unavailable".to_string(),
                });
            }
        }
    }

    Ok(SolveReport {
        d,
        r_op,
        l0,
        truncation: t_top.max(0) as u32,
        residual,
        residual_zeroness,
        growth,
        floors,
        notes,
    })
}

/// Split-sample decay fit for the solved coefficients: fit the offset
/// kappa on the first half of d_{l0..}, then require
/// v(d_{l0+s}) >= s*lambda/4 - kappa on the second half.
#[derive(Debug, Clone)]
pub struct DecayFit {
    /// Per-step decay rate the bound quarters.
    pub lambda: Ratio<i64>,
    /// Offset fitted on the first half (never below zero).
    pub kappa: Ratio<i64>,
    /// Number of verification points in the second half.
    pub checked: usize,
    pub pass: bool,
}

impl DecayFit {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": format!("{}/{}", self.lambda.numer(), self.lambda.denom()),
            "kappa": format!("{}/{}", self.kappa.numer(), self.kappa.denom()),
            "checked": self.checked,
            "pass": self.pass,
        })
    }
}

pub fn decay_fit<S: Scalar>(d: &[S], l0: i64, lambda: Ratio<i64>) -> DecayFit {
    let start = (l0.max(0) as usize).min(d.len());
    let tail = &d[start..];
    let rate = lambda / 4;
    let mut kappa = Ratio::from_integer(0i64);
    let half = tail.len() / 2;
    for (s, x) in tail[..half].iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        if let Valuation::Finite(v) = x.valuation().lower() {
            let gap = rate * (s as i64) - v;
            if gap > kappa {
                kappa = gap;
            }
        }
    }
    let mut pass = true;
    let mut checked = 0;
    for (off, x) in tail[half..].iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        checked += 1;
        let s = (half + off) as i64;
        match x.valuation().lower() {
            Valuation::Finite(v) => {
                if v < rate * s - kappa {
                    pass = false;
                }
            }
            Valuation::Infinite => {}
        }
    }
    DecayFit {
        lambda,
        kappa,
        checked,
        pass,
    }
}

/// The explicit expansion d_s = sum_{t=s}^{T} g(s,t) c_t with
/// g(s,s) = -1/A(s) and g(s,t+1) = g(s,t) * pifac * B(t) / A(t+1).
/// Same answer as the backward pass; used for cross-checks.
pub fn expand_solution<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    params: &HypParams,
    c: &[S],
) -> Result<Vec<S>, SolveError> {
    let pf: S = pifac(ctx, params);
    let t_top = c.len();
    let mut d = Vec::with_capacity(t_top);
    for s in 0..t_top {
        let a_s: S = eval_product(ctx, &params.alpha, s as i64)?;
        let mut g = S::one(ctx).neg().div(&a_s)?;
        let mut acc = g.mul(&c[s]);
        for t in s + 1..t_top {
            let b_prev: S = eval_product(ctx, &params.beta, t as i64 - 1)?;
            let a_t: S = eval_product(ctx, &params.alpha, t as i64)?;
            g = g.mul(&pf).mul(&b_prev).div(&a_t)?;
            acc = acc.add(&g.mul(&c[t]));
        }
        d.push(acc);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::config::PadicConfig;
    use crate::padic::exact::ExactScalar;
    use crate::padic::float::PadicScalar;
    use crate::padic::param::DigitStream;

    fn ctx3() -> Arc<FieldCtx> {
        PadicConfig::new(3, 3, 24).unwrap().context().unwrap()
    }

    fn half_alpha() -> HypParams {
        HypParams::new(vec![PadicParameter::rational_i64(1, 2)], vec![])
    }

    #[test]
    fn constant_source_single_alpha() {
        // P = 1, alpha = 1/2: d_0 = -c_0/(0 - 1/2) = 2.
        let ctx = ctx3();
        let c = vec![ExactScalar::one(&ctx)];
        let rep = solve_x_inverse(&ctx, &half_alpha(), &c, &SolveOptions::default()).unwrap();
        assert_eq!(rep.d.len(), 1);
        assert_eq!(rep.d[0], ExactScalar::from_i64(&ctx, 2));
        assert_eq!(rep.residual_zeroness, Zeroness::Zero);
        assert_eq!(rep.l0, 0);
    }

    #[test]
    fn backward_and_expanded_solutions_agree() {
        let ctx = ctx3();
        let params = HypParams::new(
            vec![
                PadicParameter::rational_i64(1, 2),
                PadicParameter::rational_i64(-1, 5),
            ],
            vec![PadicParameter::rational_i64(1, 3)],
        );
        let c: Vec<ExactScalar> = (0..6)
            .map(|i| ExactScalar::from_i64(&ctx, [3, -1, 4, 1, -5, 9][i]))
            .collect();
        let rep = solve_x_inverse(&ctx, &params, &c, &SolveOptions::default()).unwrap();
        let expanded = expand_solution(&ctx, &params, &c).unwrap();
        assert_eq!(rep.d, expanded);
        assert_eq!(rep.residual_zeroness, Zeroness::Zero);
    }

    #[test]
    fn integer_beta_sets_l0() {
        let ctx = ctx3();
        let params = HypParams::new(
            vec![PadicParameter::rational_i64(1, 2)],
            vec![
                PadicParameter::rational_i64(3, 1),
                PadicParameter::rational_i64(1, 2),
            ],
        );
        let c: Vec<ExactScalar> = (0..6)
            .map(|i| ExactScalar::from_i64(&ctx, i as i64 + 1))
            .collect();
        let rep = solve_x_inverse(&ctx, &params, &c, &SolveOptions::default()).unwrap();
        assert_eq!(rep.l0, 4);
        assert_eq!(rep.residual_zeroness, Zeroness::Zero);
    }

    #[test]
    fn integer_alpha_rejected() {
        let ctx = ctx3();
        let params = HypParams::new(vec![PadicParameter::rational_i64(2, 1)], vec![]);
        let c = vec![ExactScalar::one(&ctx); 4];
        let err = solve_x_inverse(&ctx, &params, &c, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, SolveError::IntegerAlpha(_)));
    }

    #[test]
    fn liouville_gate_blocks_streams_unless_assumed() {
        let ctx = ctx3();
        // Residues chosen so v(alpha -+ k) stays at most 1 wherever the
        // witness threshold 2v >= k could fire, and no integer in the scan
        // range matches the digits.
        let noise = DigitStream::new(3, vec![2, 0, 1, 1, 2, 0, 2, 1, 0, 2, 1, 2]).unwrap();
        let params = HypParams::new(vec![PadicParameter::Stream(noise)], vec![]);
        let c = vec![PadicScalar::one(&ctx); 3];
        let err = solve_x_inverse(&ctx, &params, &c, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, SolveError::LiouvilleIndeterminate));

        let opts = SolveOptions {
            assume_non_liouville: true,
            ..SolveOptions::default()
        };
        let rep = solve_x_inverse(&ctx, &params, &c, &opts).unwrap();
        assert_ne!(rep.residual_zeroness, Zeroness::NonZero);
    }

    #[test]
    fn floors_certify_computed_valuations() {
        let ctx = ctx3();
        let params = HypParams::new(
            vec![PadicParameter::rational_i64(1, 2)],
            vec![PadicParameter::rational_i64(1, 3)],
        );
        let c: Vec<ExactScalar> = (0..8)
            .map(|i| ExactScalar::from_i64(&ctx, 2 * i as i64 + 1))
            .collect();
        let rep = solve_x_inverse(&ctx, &params, &c, &SolveOptions::default()).unwrap();
        assert_eq!(rep.floors.len(), rep.d.len());
        for (s, dk) in rep.d.iter().enumerate() {
            let v = dk.valuation().lower().finite().unwrap();
            assert!(
                v >= rep.floors[s],
                "s={s}: computed {v} below floor {}",
                rep.floors[s]
            );
        }
    }

    #[test]
    fn tail_floor_gate() {
        let ctx = ctx3();
        let c = vec![ExactScalar::one(&ctx); 6];
        let opts = SolveOptions {
            min_tail_floor: Some(Ratio::from_integer(100)),
            ..SolveOptions::default()
        };
        let err = solve_x_inverse(&ctx, &half_alpha(), &c, &opts).unwrap_err();
        assert!(matches!(err, SolveError::TailBoundTooWeak { .. }));
    }

    #[test]
    fn float_mode_residual_indistinguishable_from_zero() {
        let ctx = ctx3();
        let params = HypParams::new(
            vec![PadicParameter::rational_i64(1, 2)],
            vec![PadicParameter::rational_i64(2, 3)],
        );
        let c: Vec<PadicScalar> = (0..5)
            .map(|i| PadicScalar::from_i64(&ctx, 7 - i as i64))
            .collect();
        let rep = solve_x_inverse(&ctx, &params, &c, &SolveOptions::default()).unwrap();
        assert_ne!(rep.residual_zeroness, Zeroness::NonZero);
    }
}
