//! Field configuration: the prime p, the residue size q = p^f, working
//! precision, and the derived constants for the ramified element pi with
//! pi^(q-1) = -(-p)^((q-1)/(p-1)).

use std::sync::Arc;

use num::rational::Ratio;
use num::{BigInt, BigUint, One};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

use super::rational::is_prime;

/// Hard cap on the digit precision to keep arithmetic bounded.
pub const MAX_PRECISION: u32 = 4096;

/// User-facing configuration for the coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicConfig {
    /// The prime p.
    pub p: u64,
    /// Residue field size q = p^f.
    pub q: u64,
    /// Working precision in p-adic digits for inexact scalars.
    pub precision: u32,
}

impl PadicConfig {
    pub fn new(p: u64, q: u64, precision: u32) -> Result<Self, ConfigError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(ConfigError::InvalidPrime(p));
        }
        let mut r = q;
        if r < p {
            return Err(ConfigError::NonPrimePower { p, q });
        }
        while r > 1 {
            if r % p != 0 {
                return Err(ConfigError::NonPrimePower { p, q });
            }
            r /= p;
        }
        if precision == 0 || precision > MAX_PRECISION {
            return Err(ConfigError::PrecisionOverflow(precision));
        }
        Ok(PadicConfig { p, q, precision })
    }

    pub fn context(&self) -> Result<Arc<FieldCtx>, ConfigError> {
        Ok(Arc::new(FieldCtx::new(self.clone())?))
    }
}

/// Shared immutable context derived from a [`PadicConfig`].
///
/// pi is the root of pi^e = pi_pow_e with e = q - 1 and
/// pi_pow_e = -(-p)^d = p^d for odd d, -p^d for even d, where
/// d = (q - 1)/(p - 1). Its valuation is 1/(p - 1). When q = p the
/// defining polynomial is Eisenstein and K = Q_p(pi) is a field; for
/// q > p the quotient ring is used formally and division may fail.
#[derive(Debug)]
pub struct FieldCtx {
    pub config: PadicConfig,
    /// Degree of the extension: e = q - 1.
    pub e: u32,
    /// d = (q - 1)/(p - 1).
    pub d: u32,
    /// pi^e as an exact integer.
    pub pi_pow_e: BigInt,
    /// p as a big integer.
    pub p_big: BigUint,
    /// p^0 .. p^precision, cached.
    pub p_pows: Vec<BigUint>,
    /// val(pi) = 1/(p - 1).
    pub pi_val: Ratio<i64>,
}

impl FieldCtx {
    fn new(config: PadicConfig) -> Result<Self, ConfigError> {
        let p = config.p;
        let e64 = config.q - 1;
        if e64 == 0 || e64 > u32::MAX as u64 {
            return Err(ConfigError::NonPrimePower { p, q: config.q });
        }
        let e = e64 as u32;
        let d64 = e64 / (p - 1);
        debug_assert_eq!(e64 % (p - 1), 0);
        let d = d64 as u32;
        let p_int = BigInt::from(p);
        // -(-p)^d = p^d when d is odd, -p^d when d is even.
        let mut pi_pow_e = p_int.pow(d);
        if d % 2 == 0 {
            pi_pow_e = -pi_pow_e;
        }
        let p_big = BigUint::from(p);
        let mut p_pows = Vec::with_capacity(config.precision as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=config.precision {
            p_pows.push(acc.clone());
            acc *= &p_big;
        }
        Ok(FieldCtx {
            config,
            e,
            d,
            pi_pow_e,
            p_big,
            p_pows,
            pi_val: Ratio::new(1, (p - 1) as i64),
        })
    }

    pub fn p(&self) -> u64 {
        self.config.p
    }

    pub fn q(&self) -> u64 {
        self.config.q
    }

    pub fn precision(&self) -> u32 {
        self.config.precision
    }

    /// True when pi generates a genuine (Eisenstein) field extension.
    pub fn is_eisenstein(&self) -> bool {
        self.config.q == self.config.p
    }

    /// p^k for 0 <= k <= precision, from the cache; computed beyond.
    pub fn p_pow(&self, k: u32) -> BigUint {
        match self.p_pows.get(k as usize) {
            Some(v) => v.clone(),
            None => self.p_big.pow(k),
        }
    }

    /// val(pi^i) = i/(p-1).
    pub fn component_val(&self, i: u32) -> Ratio<i64> {
        Ratio::new(i as i64, (self.p() - 1) as i64)
    }

    /// Two contexts are compatible when their configs agree.
    pub fn same_as(&self, other: &FieldCtx) -> bool {
        self.config == other.config
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_equals_p_is_eisenstein() {
        let ctx = PadicConfig::new(3, 3, 20).unwrap().context().unwrap();
        assert_eq!(ctx.e, 2);
        assert_eq!(ctx.d, 1);
        assert_eq!(ctx.pi_pow_e, BigInt::from(3)); // pi^2 = 3
        assert!(ctx.is_eisenstein());
        assert_eq!(ctx.pi_val, Ratio::new(1, 2));
    }

    #[test]
    fn p2_pi_is_two() {
        let ctx = PadicConfig::new(2, 2, 16).unwrap().context().unwrap();
        assert_eq!(ctx.e, 1);
        assert_eq!(ctx.pi_pow_e, BigInt::from(2)); // pi = 2 directly
        assert_eq!(ctx.pi_val, Ratio::new(1, 1));
    }

    #[test]
    fn q9_formal_mode() {
        let ctx = PadicConfig::new(3, 9, 12).unwrap().context().unwrap();
        assert_eq!(ctx.e, 8);
        assert_eq!(ctx.d, 4);
        assert_eq!(ctx.pi_pow_e, BigInt::from(-81)); // d=4 even: pi^8 = -3^4
        assert!(!ctx.is_eisenstein());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(PadicConfig::new(4, 4, 10).is_err());
        assert!(PadicConfig::new(3, 6, 10).is_err());
        assert!(PadicConfig::new(3, 3, 0).is_err());
        assert!(PadicConfig::new(3, 3, 1 << 20).is_err());
    }

    #[test]
    fn component_valuations() {
        let ctx = PadicConfig::new(3, 3, 20).unwrap().context().unwrap();
        assert_eq!(ctx.component_val(0), Ratio::new(0, 1));
        assert_eq!(ctx.component_val(1), Ratio::new(1, 2));
    }
}
