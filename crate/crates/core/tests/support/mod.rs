//! Shared test support: an independent evaluation oracle for operators.
//!
//! Operators act on monomials by the divided-power rule
//! d^[k](x^t) = C(t, k) x^(t-k), with the generalized binomial for
//! Laurent exponents. Acting never touches the normal-form product code,
//! so agreement between `mul` and composed actions is a real cross-check.

use std::collections::BTreeMap;
use std::sync::Arc;

use daggerhyp::{ExactScalar, FieldCtx, Scalar, WeylOperator, Zeroness};
use num::{BigInt, BigRational, One};

/// Generalized binomial C(t, k) for integer t (possibly negative).
pub fn binomial(t: i64, k: u32) -> BigRational {
    let mut num = BigRational::one();
    for j in 0..k as i64 {
        num *= BigRational::from_integer(BigInt::from(t - j));
        num /= BigRational::from_integer(BigInt::from(j + 1));
    }
    num
}

pub type Poly = BTreeMap<i64, ExactScalar>;

pub fn monomial(ctx: &Arc<FieldCtx>, t: i64) -> Poly {
    let mut poly = BTreeMap::new();
    poly.insert(t, ExactScalar::one(ctx));
    poly
}

/// Apply an operator to a Laurent polynomial, term by term.
pub fn act(op: &WeylOperator<ExactScalar>, poly: &Poly) -> Poly {
    let ctx = &op.ctx;
    let mut out: Poly = BTreeMap::new();
    for (&t, coeff) in poly {
        for (&(l, k), c) in &op.terms {
            let b = binomial(t, k);
            if num::Zero::is_zero(&b) {
                continue;
            }
            let contribution = c.mul(coeff).mul_rational(&b);
            let target = t + l - k as i64;
            let entry = out
                .remove(&target)
                .unwrap_or_else(|| ExactScalar::zero(ctx));
            let sum = entry.add(&contribution);
            if !sum.is_exact_zero() {
                out.insert(target, sum);
            }
        }
    }
    out
}

pub fn polys_equal(a: &Poly, b: &Poly) -> bool {
    let keys: std::collections::BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    for t in keys {
        let diff = match (a.get(&t), b.get(&t)) {
            (Some(x), Some(y)) => x.sub(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.neg(),
            (None, None) => continue,
        };
        if diff.zeroness() != Zeroness::Zero {
            return false;
        }
    }
    true
}

/// Operator equality via actions on x^0 .. x^kmax: the binomial matrix
/// [C(t,k)] over that range is unitriangular, so the actions determine
/// every coefficient.
pub fn ops_agree_by_action(
    a: &WeylOperator<ExactScalar>,
    b: &WeylOperator<ExactScalar>,
    kmax: u32,
) -> bool {
    for t in 0..=kmax as i64 {
        let m = monomial(&a.ctx, t);
        if !polys_equal(&act(a, &m), &act(b, &m)) {
            return false;
        }
    }
    true
}
