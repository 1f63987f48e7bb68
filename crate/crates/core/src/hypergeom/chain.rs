//! Decomposition of a hypergeometric operator into rank-one pieces.
//!
//! The chain starts at the empty tuple and adds one parameter per step,
//! recording for each step the parameter tuples at which the enabling
//! identities (Fourier gluing, twist, inversion) have to hold.  Replaying
//! the chain re-derives every recorded tuple from scratch; verifying it
//! runs the recorded identity checks, one step independent of the next.

use std::sync::Arc;

use num::{BigInt, BigRational};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::HypError;
use crate::hypergeom::identity::{
    fourier_identity_check, inversion_identity_check, kummer_identity_check, IdentityReport,
};
use crate::hypergeom::params::{param_sub, HypParams};
use crate::padic::config::FieldCtx;
use crate::padic::param::PadicParameter;
use crate::padic::scalar::Scalar;
use crate::weyl::operator::{Flavor, Window};

#[derive(Debug, Clone, PartialEq)]
pub enum ChainStep {
    /// Prepend an alpha: glue the rank-one factor Hyp(a; -) onto the
    /// current state via the Fourier identity at `fourier_check`, then
    /// twist by `gamma` = a.
    AddAlpha {
        param: PadicParameter,
        fourier_check: HypParams,
        gamma: PadicParameter,
        state_after: HypParams,
    },
    /// Prepend a beta: pass through the inversion identity at
    /// `inversion_check`, glue Hyp(-; b) via the Fourier identity at
    /// `fourier_check` (flipped variant), then twist by `gamma` = -b.
    AddBeta {
        param: PadicParameter,
        inversion_check: HypParams,
        fourier_check: HypParams,
        gamma: PadicParameter,
        state_after: HypParams,
    },
}

impl ChainStep {
    pub fn kind(&self) -> &'static str {
        match self {
            ChainStep::AddAlpha { .. } => "add-alpha",
            ChainStep::AddBeta { .. } => "add-beta",
        }
    }

    pub fn state_after(&self) -> &HypParams {
        match self {
            ChainStep::AddAlpha { state_after, .. } => state_after,
            ChainStep::AddBeta { state_after, .. } => state_after,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ChainStep::AddAlpha {
                param,
                fourier_check,
                gamma,
                state_after,
            } => json!({
                "step": "add-alpha",
                "param": param.to_json(),
                "fourier_check": fourier_check.to_json(),
                "gamma": gamma.to_json(),
                "state_after": state_after.to_json(),
            }),
            ChainStep::AddBeta {
                param,
                inversion_check,
                fourier_check,
                gamma,
                state_after,
            } => json!({
                "step": "add-beta",
                "param": param.to_json(),
                "inversion_check": inversion_check.to_json(),
                "fourier_check": fourier_check.to_json(),
                "gamma": gamma.to_json(),
                "state_after": state_after.to_json(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionChain {
    pub target: HypParams,
    pub steps: Vec<ChainStep>,
}

impl DecompositionChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_json(),
            "length": self.steps.len(),
            "steps": self.steps.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn zero_param() -> PadicParameter {
    PadicParameter::Rational(BigRational::from_integer(BigInt::from(0)))
}

/// tuple - a, elementwise.
fn shifted_down(
    p: u64,
    tuple: &[PadicParameter],
    a: &PadicParameter,
) -> Result<Vec<PadicParameter>, HypError> {
    tuple.iter().map(|q| param_sub(p, q, a)).collect()
}

/// a - tuple_j, elementwise.
fn shifted_from(
    p: u64,
    a: &PadicParameter,
    tuple: &[PadicParameter],
) -> Result<Vec<PadicParameter>, HypError> {
    tuple.iter().map(|q| param_sub(p, a, q)).collect()
}

fn alpha_step(p: u64, state: &HypParams, a: &PadicParameter) -> Result<ChainStep, HypError> {
    let mut f_alpha = vec![zero_param()];
    f_alpha.extend(shifted_down(p, &state.alpha, a)?);
    let fourier_check = HypParams {
        alpha: f_alpha,
        beta: shifted_down(p, &state.beta, a)?,
        variant: state.variant,
    };
    let mut next_alpha = vec![a.clone()];
    next_alpha.extend(state.alpha.iter().cloned());
    let state_after = HypParams {
        alpha: next_alpha,
        beta: state.beta.clone(),
        variant: state.variant,
    };
    Ok(ChainStep::AddAlpha {
        param: a.clone(),
        fourier_check,
        gamma: a.clone(),
        state_after,
    })
}

fn beta_step(p: u64, state: &HypParams, b: &PadicParameter) -> Result<ChainStep, HypError> {
    let mut next_beta = vec![b.clone()];
    next_beta.extend(state.beta.iter().cloned());
    let state_after = HypParams {
        alpha: state.alpha.clone(),
        beta: next_beta,
        variant: state.variant,
    };
    let mut f_alpha = vec![zero_param()];
    f_alpha.extend(shifted_from(p, b, &state.beta)?);
    let fourier_check = HypParams {
        alpha: f_alpha,
        beta: shifted_from(p, b, &state.alpha)?,
        variant: state.variant.other(),
    };
    Ok(ChainStep::AddBeta {
        param: b.clone(),
        inversion_check: state_after.clone(),
        fourier_check,
        gamma: b.neg(),
        state_after,
    })
}

/// Build the chain for `target`: betas are added innermost-first, then
/// alphas, so the final state lists parameters in the target's order.
pub fn decompose(
    p: u64,
    target: &HypParams,
    hypothesis_range: i64,
) -> Result<DecompositionChain, HypError> {
    target.hypothesis_check(p, hypothesis_range)?;
    let mut state = HypParams::empty().with_variant(target.variant);
    let mut steps = Vec::with_capacity(target.m() + target.n());
    for b in target.beta.iter().rev() {
        let step = beta_step(p, &state, b)?;
        state = step.state_after().clone();
        steps.push(step);
    }
    for a in target.alpha.iter().rev() {
        let step = alpha_step(p, &state, a)?;
        state = step.state_after().clone();
        steps.push(step);
    }
    if state != *target {
        return Err(HypError::PreconditionViolated(format!(
            "decomposition ended at {state}, not at the target {target}"
        )));
    }
    Ok(DecompositionChain {
        target: target.clone(),
        steps,
    })
}

/// Re-derive every recorded tuple from the base state and compare with
/// what the chain stores.  Returns the final state on success.
pub fn replay(p: u64, chain: &DecompositionChain) -> Result<HypParams, HypError> {
    let mut state = HypParams::empty().with_variant(chain.target.variant);
    for (i, step) in chain.steps.iter().enumerate() {
        let fresh = match step {
            ChainStep::AddAlpha { param, .. } => alpha_step(p, &state, param)?,
            ChainStep::AddBeta { param, .. } => beta_step(p, &state, param)?,
        };
        if fresh != *step {
            return Err(HypError::PreconditionViolated(format!(
                "chain bookkeeping mismatch at step {i}"
            )));
        }
        state = step.state_after().clone();
    }
    if state != chain.target {
        return Err(HypError::PreconditionViolated(format!(
            "chain replays to {state}, not to the target {}",
            chain.target
        )));
    }
    Ok(state)
}

#[derive(Debug, Clone)]
pub struct StepReport<S: Scalar> {
    pub index: usize,
    pub kind: &'static str,
    pub reports: Vec<IdentityReport<S>>,
}

impl<S: Scalar> StepReport<S> {
    pub fn passes(&self) -> bool {
        self.reports.iter().all(|r| r.passes())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "kind": self.kind,
            "passes": self.passes(),
            "checks": self.reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ChainVerifyReport<S: Scalar> {
    pub steps: Vec<StepReport<S>>,
    pub replayed: HypParams,
}

impl<S: Scalar> ChainVerifyReport<S> {
    pub fn passes(&self) -> bool {
        self.steps.iter().all(|s| s.passes())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passes": self.passes(),
            "length": self.steps.len(),
            "steps": self.steps.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Replay the chain, then run every step's identity checks (steps in
/// parallel, results in chain order).
pub fn chain_verify<S: Scalar>(
    ctx: &Arc<FieldCtx>,
    chain: &DecompositionChain,
    window: Window,
) -> Result<ChainVerifyReport<S>, HypError> {
    let replayed = replay(ctx.p(), chain)?;
    let steps: Vec<StepReport<S>> = chain
        .steps
        .par_iter()
        .enumerate()
        .map(|(index, step)| -> Result<StepReport<S>, HypError> {
            let mut reports = Vec::new();
            match step {
                ChainStep::AddAlpha {
                    fourier_check,
                    gamma,
                    ..
                } => {
                    reports.push(fourier_identity_check::<S>(ctx, fourier_check, window)?);
                    reports.push(kummer_identity_check::<S>(
                        ctx,
                        fourier_check,
                        gamma,
                        Flavor::A1,
                        window,
                    )?);
                }
                ChainStep::AddBeta {
                    inversion_check,
                    fourier_check,
                    gamma,
                    ..
                } => {
                    reports.push(inversion_identity_check::<S>(ctx, inversion_check, window)?);
                    reports.push(fourier_identity_check::<S>(ctx, fourier_check, window)?);
                    reports.push(kummer_identity_check::<S>(
                        ctx,
                        fourier_check,
                        gamma,
                        Flavor::A1,
                        window,
                    )?);
                }
            }
            Ok(StepReport {
                index,
                kind: step.kind(),
                reports,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChainVerifyReport { steps, replayed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::config::PadicConfig;
    use crate::padic::exact::ExactScalar;

    fn ctx3() -> Arc<FieldCtx> {
        PadicConfig::new(3, 3, 24).unwrap().context().unwrap()
    }

    fn params_11() -> HypParams {
        HypParams::new(
            vec![PadicParameter::rational_i64(1, 2)],
            vec![PadicParameter::rational_i64(1, 3)],
        )
    }

    #[test]
    fn chain_length_is_m_plus_n() {
        let chain = decompose(3, &params_11(), 64).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.steps[0].kind(), "add-beta");
        assert_eq!(chain.steps[1].kind(), "add-alpha");
    }

    #[test]
    fn replay_matches_and_detects_tampering() {
        let chain = decompose(3, &params_11(), 64).unwrap();
        assert_eq!(replay(3, &chain).unwrap(), params_11());

        let mut bad = chain.clone();
        if let ChainStep::AddAlpha { gamma, .. } = &mut bad.steps[1] {
            *gamma = PadicParameter::rational_i64(2, 7);
        }
        assert!(replay(3, &bad).is_err());
    }

    #[test]
    fn chain_verifies_exactly() {
        let ctx = ctx3();
        let chain = decompose(3, &params_11(), 64).unwrap();
        let report = chain_verify::<ExactScalar>(&ctx, &chain, Window::new(10, 10)).unwrap();
        assert!(report.passes(), "{}", report.to_json());
        assert_eq!(report.replayed, params_11());
    }

    #[test]
    fn deeper_chain_verifies() {
        let ctx = ctx3();
        let target = HypParams::new(
            vec![
                PadicParameter::rational_i64(1, 2),
                PadicParameter::rational_i64(-1, 5),
            ],
            vec![PadicParameter::rational_i64(1, 3)],
        );
        let chain = decompose(3, &target, 64).unwrap();
        assert_eq!(chain.len(), 3);
        let report = chain_verify::<ExactScalar>(&ctx, &chain, Window::new(12, 12)).unwrap();
        assert!(report.passes(), "{}", report.to_json());
    }
}
