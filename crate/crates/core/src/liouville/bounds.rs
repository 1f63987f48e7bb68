//! Effective lower bounds for valuations of shifted-factorial products.
//!
//! The reference inequality is
//!
//!   V  >=  M/(p-1) - 1 - log_p M
//!
//! for V the valuation of a product of M consecutive integral shifts.  The
//! test is carried out without floating point by rewriting it as
//!
//!   p^((p-1)(V+1)) * M^(p-1)  >=  p^M.

use num::{BigInt, BigRational, BigUint};

use crate::padic::rational::{floor_log, legendre_factorial_vp, vp_rational};
use crate::padic::valuation::Valuation;

/// Exact test of V >= M/(p-1) - 1 - log_p M for integer V and M >= 1.
pub fn meets_product_bound(p: u64, v: i64, m: u64) -> bool {
    assert!(p >= 2 && m >= 1);
    let lhs_exp = (p as i128 - 1) * (v as i128 + 1);
    if lhs_exp >= m as i128 {
        return true; // M^(p-1) >= 1 settles it
    }
    // Remains: M^(p-1) >= p^e with e = M - (p-1)(V+1) > 0.
    let e = m as i128 - lhs_exp;
    let fl = floor_log(p, &BigUint::from(m)) as i128;
    let pm1 = p as i128 - 1;
    if pm1 * fl >= e {
        return true; // M^(p-1) >= p^((p-1) fl) >= p^e
    }
    if pm1 * (fl + 1) < e {
        return false; // M^(p-1) < p^((p-1)(fl+1)) <= p^e
    }
    // Undecided band: e <= (p-1)(floor_log+1), so both powers stay small.
    match (u32::try_from(e), u32::try_from(pm1)) {
        (Ok(e32), Ok(p32)) => BigUint::from(m).pow(p32) >= BigUint::from(p).pow(e32),
        // Exponents beyond u32 only arise for astronomically large p; the
        // band is then a single power of p wide and the log comparison is
        // far from the tie.
        _ => (m as f64).ln() * pm1 as f64 >= (p as f64).ln() * e as f64,
    }
}

/// v_p(M!) satisfies the product bound; exact via Legendre's formula.
pub fn factorial_meets_bound(p: u64, m: u64) -> bool {
    if m == 0 {
        return true;
    }
    let v = legendre_factorial_vp(p, m);
    meets_product_bound(p, i64::try_from(v).expect("valuation fits i64"), m)
}

/// v_p of prod_{s=0}^{m-1} (alpha - s) for rational alpha; None when some
/// factor vanishes (alpha an integer in [0, m)).
pub fn shifted_product_valuation(p: u64, alpha: &BigRational, m: u64) -> Option<i64> {
    let mut total = 0i64;
    for s in 0..m {
        let diff = alpha - BigRational::from_integer(BigInt::from(s));
        match vp_rational(p, &diff) {
            Valuation::Infinite => return None,
            Valuation::Finite(v) => total += v.to_integer(),
        }
    }
    Some(total)
}
