//! Exact arithmetic in K = Q_p(pi): coefficient vectors of rationals in the
//! power basis 1, pi, ..., pi^(e-1), with pi^e folded via the defining
//! relation. All operations are exact; valuations are computed, never
//! approximated.

use std::fmt;
use std::sync::Arc;

use num::rational::Ratio;
use num::{BigInt, BigRational, One, Zero};
use serde_json::json;

use crate::error::PadicError;

use super::config::FieldCtx;
use super::rational::{fmt_rational, vp_rational};
use super::valuation::{ValBound, Valuation, Zeroness};

/// Exact element of K.
#[derive(Debug, Clone)]
pub struct ExactScalar {
    pub(crate) ctx: Arc<FieldCtx>,
    pub(crate) comps: Vec<BigRational>,
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.config == other.ctx.config && self.comps == other.comps
    }
}

impl ExactScalar {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        ExactScalar {
            ctx: Arc::clone(ctx),
            comps: vec![BigRational::zero(); ctx.e as usize],
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn pi(ctx: &Arc<FieldCtx>) -> Self {
        let mut s = Self::zero(ctx);
        if ctx.e == 1 {
            s.comps[0] = BigRational::from_integer(ctx.pi_pow_e.clone());
        } else {
            s.comps[1] = BigRational::one();
        }
        s
    }

    pub fn from_rational(ctx: &Arc<FieldCtx>, r: &BigRational) -> Self {
        let mut s = Self::zero(ctx);
        s.comps[0] = r.clone();
        s
    }

    pub fn from_i64(ctx: &Arc<FieldCtx>, n: i64) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn pi_pow(ctx: &Arc<FieldCtx>, j: i64) -> Self {
        let e = ctx.e as i64;
        let r = j.rem_euclid(e);
        let t = (j - r) / e;
        let coeff = if t >= 0 {
            BigRational::from_integer(ctx.pi_pow_e.pow(t as u32))
        } else {
            BigRational::new(BigInt::one(), ctx.pi_pow_e.pow((-t) as u32))
        };
        let mut s = Self::zero(ctx);
        s.comps[r as usize] = coeff;
        s
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self.comps.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.ctx.same_as(&other.ctx));
        ExactScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.ctx.same_as(&other.ctx));
        ExactScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.ctx.same_as(&other.ctx));
        let e = self.ctx.e as usize;
        let fold = BigRational::from_integer(self.ctx.pi_pow_e.clone());
        let mut acc = vec![BigRational::zero(); e];
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let k = i + j;
                if k < e {
                    acc[k] += prod;
                } else {
                    acc[k - e] += prod * &fold;
                }
            }
        }
        ExactScalar {
            ctx: Arc::clone(&self.ctx),
            comps: acc,
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        ExactScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self.comps.iter().map(|c| c * r).collect(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn zeroness(&self) -> Zeroness {
        if self.is_exact_zero() {
            Zeroness::Zero
        } else {
            Zeroness::NonZero
        }
    }

    pub fn valuation(&self) -> ValBound {
        let mut min: Option<Ratio<i64>> = None;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = match vp_rational(self.ctx.p(), c) {
                Valuation::Finite(v) => v + self.ctx.component_val(i as u32),
                Valuation::Infinite => unreachable!("nonzero rational"),
            };
            min = Some(match min {
                Some(cur) => cur.min(v),
                None => v,
            });
        }
        match min {
            None => ValBound::Exactly(Valuation::Infinite),
            Some(v) => {
                if self.ctx.is_eisenstein() {
                    ValBound::Exactly(Valuation::Finite(v))
                } else {
                    ValBound::AtLeast(v)
                }
            }
        }
    }

    /// Exact division: solve (mult-by-rhs matrix) x = self over the
    /// rationals. Always succeeds for nonzero divisors when q = p; in
    /// formal mode (q > p) the matrix may be singular.
    pub fn div(&self, rhs: &Self) -> Result<Self, PadicError> {
        if rhs.is_exact_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let e = self.ctx.e as usize;
        // Column j of the matrix is rhs * pi^j in basis coordinates.
        let mut m = vec![vec![BigRational::zero(); e]; e]; // m[row][col]
        let mut shifted = rhs.clone();
        for col in 0..e {
            for row in 0..e {
                m[row][col] = shifted.comps[row].clone();
            }
            if col + 1 < e {
                shifted = shifted.mul(&Self::pi(&self.ctx));
            }
        }
        let mut b: Vec<BigRational> = self.comps.clone();
        // Gaussian elimination with exact pivoting.
        let mut row_of_col = vec![usize::MAX; e];
        let mut used = vec![false; e];
        for col in 0..e {
            let pivot = (0..e).find(|&r| !used[r] && !m[r][col].is_zero());
            let pr = match pivot {
                Some(pr) => pr,
                None => {
                    return Err(PadicError::NotInvertible(
                        "multiplication matrix is singular (formal quotient ring)".into(),
                    ))
                }
            };
            used[pr] = true;
            row_of_col[col] = pr;
            let inv = m[pr][col].recip();
            for c in 0..e {
                m[pr][c] = &m[pr][c] * &inv;
            }
            b[pr] = &b[pr] * &inv;
            for r in 0..e {
                if r == pr || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..e {
                    let t = &factor * &m[pr][c];
                    m[r][c] = &m[r][c] - t;
                }
                let t = &factor * &b[pr];
                b[r] = &b[r] - t;
            }
        }
        let mut comps = vec![BigRational::zero(); e];
        for col in 0..e {
            comps[col] = b[row_of_col[col]].clone();
        }
        Ok(ExactScalar {
            ctx: Arc::clone(&self.ctx),
            comps,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "pi_coeffs_exact": self.comps.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_rational(c))?;
            if i == 1 {
                write!(f, "*pi")?;
            } else if i > 1 {
                write!(f, "*pi^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::config::PadicConfig;

    fn ctx3() -> Arc<FieldCtx> {
        PadicConfig::new(3, 3, 8).unwrap().context().unwrap()
    }

    #[test]
    fn pi_squares_to_p() {
        let ctx = ctx3();
        let pi = ExactScalar::pi(&ctx);
        assert_eq!(pi.mul(&pi), ExactScalar::from_i64(&ctx, 3));
    }

    #[test]
    fn division_is_exact() {
        let ctx = ctx3();
        let one = ExactScalar::one(&ctx);
        let b = one.sub(&ExactScalar::pi(&ctx)); // 1 - pi
        let inv = one.div(&b).unwrap();
        assert_eq!(inv.mul(&b), one);
        // 1/(1-pi) = (1+pi)/(1-pi^2) = (1+pi)/(1-3) = -(1+pi)/2
        let expected = one
            .add(&ExactScalar::pi(&ctx))
            .mul_rational(&BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(inv, expected);
    }

    #[test]
    fn valuations_mix_components() {
        let ctx = ctx3();
        let x = ExactScalar::from_i64(&ctx, 9).add(&ExactScalar::pi(&ctx));
        assert_eq!(
            x.valuation(),
            ValBound::Exactly(Valuation::Finite(Ratio::new(1, 2)))
        );
        assert_eq!(
            ExactScalar::zero(&ctx).valuation(),
            ValBound::Exactly(Valuation::Infinite)
        );
    }

    #[test]
    fn negative_pi_powers() {
        let ctx = ctx3();
        let a = ExactScalar::pi_pow(&ctx, -5);
        let b = ExactScalar::pi_pow(&ctx, 5);
        assert_eq!(a.mul(&b), ExactScalar::one(&ctx));
    }

    #[test]
    fn formal_mode_division() {
        let ctx = PadicConfig::new(3, 9, 8).unwrap().context().unwrap();
        let pi = ExactScalar::pi(&ctx);
        let one = ExactScalar::one(&ctx);
        // pi itself is invertible in the quotient ring (pi^8 = -81 a unit times power of p).
        let inv = one.div(&pi).unwrap();
        assert_eq!(inv.mul(&pi), one);
    }

    #[test]
    fn division_by_zero_fails() {
        let ctx = ctx3();
        assert!(matches!(
            ExactScalar::one(&ctx).div(&ExactScalar::zero(&ctx)),
            Err(PadicError::DivisionByZero)
        ));
    }
}
