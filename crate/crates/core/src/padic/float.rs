//! Capped-relative-precision p-adic floating point, and the inexact scalar
//! built from it: vectors of p-adic floats in the power basis 1, pi, ...,
//! pi^(e-1).
//!
//! A [`QpFloat`] tracks what is actually known about an element of Q_p:
//! exactly zero, zero to within p^-min_exp ("below the noise floor"), or a
//! value with exactly known valuation and a unit known to `prec` digits.
//! Every operation propagates knowledge honestly: exact valuations stay
//! exact, precisions shrink only when cancellation forces them to.

use std::fmt;
use std::sync::Arc;

use num::rational::Ratio;
use num::{BigInt, BigRational, BigUint, One, Zero};
use serde_json::json;

use crate::error::PadicError;

use super::config::FieldCtx;
use super::rational::{mod_inverse, mod_reduce, strip_p};
use super::valuation::{ValBound, Valuation, Zeroness};

/// One coefficient of Q_p, with explicit knowledge tracking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QpFloat {
    /// Exactly zero.
    Zero,
    /// Indistinguishable from zero at working precision: v >= min_exp.
    Below { min_exp: i64 },
    /// p^exp * unit with p not dividing unit, 0 < unit < p^prec.
    /// The valuation `exp` is exact; the unit is known to `prec` digits.
    Val { unit: BigUint, exp: i64, prec: u32 },
}

impl QpFloat {
    pub fn from_rational(ctx: &FieldCtx, r: &BigRational) -> Self {
        if r.is_zero() {
            return QpFloat::Zero;
        }
        let n = ctx.precision();
        let (vn, num_u) = strip_p(ctx.p(), r.numer());
        let (vd, den_u) = strip_p(ctx.p(), r.denom());
        let modulus = ctx.p_pow(n);
        let num_red = mod_reduce(&num_u, &modulus);
        let den_red = mod_reduce(&den_u, &modulus);
        let den_inv = mod_inverse(&den_red, &modulus).expect("denominator is a p-adic unit");
        let unit = (num_red * den_inv) % &modulus;
        QpFloat::Val {
            unit,
            exp: vn - vd,
            prec: n,
        }
    }

    pub fn from_i64(ctx: &FieldCtx, n: i64) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(BigInt::from(n)))
    }

    /// Build from little-endian base-p digits known up to the given length.
    /// All-zero digits yield `Below { min_exp: digits.len() }`.
    pub fn from_digits_le(ctx: &FieldCtx, digits: &[u32]) -> Self {
        let t = match digits.iter().position(|&d| d != 0) {
            Some(t) => t,
            None => {
                return QpFloat::Below {
                    min_exp: digits.len() as i64,
                }
            }
        };
        let p_big = BigUint::from(ctx.p());
        let mut unit = BigUint::zero();
        for &d in digits[t..].iter().rev() {
            unit = unit * &p_big + BigUint::from(d);
        }
        let prec = ((digits.len() - t) as u32).min(ctx.precision());
        let modulus = ctx.p_pow(prec);
        QpFloat::Val {
            unit: unit % modulus,
            exp: t as i64,
            prec,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, QpFloat::Zero)
    }

    /// Exact valuation when known, lower bound otherwise.
    pub fn val_bound(&self) -> ValBound {
        match self {
            QpFloat::Zero => ValBound::Exactly(Valuation::Infinite),
            QpFloat::Below { min_exp } => ValBound::AtLeast(Ratio::from_integer(*min_exp)),
            QpFloat::Val { exp, .. } => ValBound::Exactly(Valuation::from_int(*exp)),
        }
    }

    /// Exponent up to which the absolute value of the error is bounded:
    /// the element is known modulo p^(this).
    pub fn abs_known_to(&self) -> Option<i64> {
        match self {
            QpFloat::Zero => None,
            QpFloat::Below { min_exp } => Some(*min_exp),
            QpFloat::Val { exp, prec, .. } => Some(exp + *prec as i64),
        }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        match self {
            QpFloat::Zero => QpFloat::Zero,
            QpFloat::Below { min_exp } => QpFloat::Below { min_exp: *min_exp },
            QpFloat::Val { unit, exp, prec } => QpFloat::Val {
                unit: ctx.p_pow(*prec) - unit,
                exp: *exp,
                prec: *prec,
            },
        }
    }

    pub fn add(&self, other: &Self, ctx: &FieldCtx) -> Self {
        use QpFloat::*;
        match (self, other) {
            (Zero, x) | (x, Zero) => x.clone(),
            (Below { min_exp: a }, Below { min_exp: b }) => Below {
                min_exp: *a.min(b),
            },
            (Below { min_exp }, v @ Val { .. }) | (v @ Val { .. }, Below { min_exp }) => {
                let (unit, exp, prec) = match v {
                    Val { unit, exp, prec } => (unit, *exp, *prec),
                    _ => unreachable!(),
                };
                if *min_exp <= exp {
                    // The noise is at least as large as the value.
                    Below { min_exp: *min_exp }
                } else {
                    let keep = (min_exp - exp).min(prec as i64) as u32;
                    let unit = unit % ctx.p_pow(keep);
                    Val {
                        unit,
                        exp,
                        prec: keep,
                    }
                }
            }
            (
                Val {
                    unit: u1,
                    exp: e1,
                    prec: p1,
                },
                Val {
                    unit: u2,
                    exp: e2,
                    prec: p2,
                },
            ) => {
                if e1 == e2 {
                    let m = (*p1).min(*p2);
                    let modulus = ctx.p_pow(m);
                    let s = (u1 + u2) % &modulus;
                    if s.is_zero() {
                        return Below {
                            min_exp: e1 + m as i64,
                        };
                    }
                    let s_int = BigInt::from(s);
                    let (t, reduced) = strip_p(ctx.p(), &s_int);
                    debug_assert!((t as u32) < m);
                    Val {
                        unit: reduced.to_biguint().expect("positive"),
                        exp: e1 + t,
                        prec: m - t as u32,
                    }
                } else {
                    // Distinct exact valuations: the smaller one wins exactly.
                    let (ul, el, pl, uh, eh, ph) = if e1 < e2 {
                        (u1, *e1, *p1, u2, *e2, *p2)
                    } else {
                        (u2, *e2, *p2, u1, *e1, *p1)
                    };
                    let gap = eh - el;
                    let prec = (pl as i64).min(gap.saturating_add(ph as i64)) as u32;
                    let modulus = ctx.p_pow(prec);
                    let unit = if gap >= prec as i64 {
                        ul % &modulus
                    } else {
                        (ul + uh * ctx.p_pow(gap as u32)) % &modulus
                    };
                    Val {
                        unit,
                        exp: el,
                        prec,
                    }
                }
            }
        }
    }

    pub fn sub(&self, other: &Self, ctx: &FieldCtx) -> Self {
        self.add(&other.neg(ctx), ctx)
    }

    pub fn mul(&self, other: &Self, ctx: &FieldCtx) -> Self {
        use QpFloat::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (Below { min_exp: a }, Below { min_exp: b }) => Below { min_exp: a + b },
            (Below { min_exp }, Val { exp, .. }) | (Val { exp, .. }, Below { min_exp }) => Below {
                min_exp: min_exp + exp,
            },
            (
                Val {
                    unit: u1,
                    exp: e1,
                    prec: p1,
                },
                Val {
                    unit: u2,
                    exp: e2,
                    prec: p2,
                },
            ) => {
                let prec = (*p1).min(*p2);
                let unit = (u1 * u2) % ctx.p_pow(prec);
                Val {
                    unit,
                    exp: e1 + e2,
                    prec,
                }
            }
        }
    }

    /// Multiply by an exact nonzero integer without precision loss.
    pub fn mul_exact_int(&self, m: &BigInt, ctx: &FieldCtx) -> Self {
        use QpFloat::*;
        if m.is_zero() {
            return Zero;
        }
        let (v, m_unit) = strip_p(ctx.p(), m);
        match self {
            Zero => Zero,
            Below { min_exp } => Below { min_exp: min_exp + v },
            Val { unit, exp, prec } => {
                let modulus = ctx.p_pow(*prec);
                let m_red = mod_reduce(&m_unit, &modulus);
                Val {
                    unit: (unit * m_red) % modulus,
                    exp: exp + v,
                    prec: *prec,
                }
            }
        }
    }

    pub fn inv(&self, ctx: &FieldCtx) -> Result<Self, PadicError> {
        match self {
            QpFloat::Zero => Err(PadicError::DivisionByZero),
            QpFloat::Below { .. } => Err(PadicError::PrecisionLoss(
                "cannot invert a value indistinguishable from zero".into(),
            )),
            QpFloat::Val { unit, exp, prec } => {
                let modulus = ctx.p_pow(*prec);
                let inv = mod_inverse(unit, &modulus).expect("unit is invertible");
                Ok(QpFloat::Val {
                    unit: inv,
                    exp: -exp,
                    prec: *prec,
                })
            }
        }
    }

    /// Little-endian base-p digits of the unit, exactly `prec` of them.
    pub fn digits_le(&self, ctx: &FieldCtx) -> Option<Vec<u32>> {
        match self {
            QpFloat::Val { unit, prec, .. } => {
                let p = BigUint::from(ctx.p());
                let mut digits = Vec::with_capacity(*prec as usize);
                let mut m = unit.clone();
                for _ in 0..*prec {
                    let d = (&m % &p).to_u32_digits();
                    digits.push(d.first().copied().unwrap_or(0));
                    m /= &p;
                }
                Some(digits)
            }
            _ => None,
        }
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> serde_json::Value {
        match self {
            QpFloat::Zero => json!([[], serde_json::Value::Null]),
            QpFloat::Below { min_exp } => json!([serde_json::Value::Null, min_exp]),
            QpFloat::Val { exp, .. } => {
                json!([self.digits_le(ctx).expect("Val has digits"), exp])
            }
        }
    }
}

/// An element of K = Q_p(pi), stored as e floating coefficients of
/// 1, pi, ..., pi^(e-1).
#[derive(Debug, Clone)]
pub struct PadicScalar {
    pub(crate) ctx: Arc<FieldCtx>,
    pub(crate) comps: Vec<QpFloat>,
}

impl PartialEq for PadicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.config == other.ctx.config && self.comps == other.comps
    }
}

impl PadicScalar {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        PadicScalar {
            ctx: Arc::clone(ctx),
            comps: vec![QpFloat::Zero; ctx.e as usize],
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn pi(ctx: &Arc<FieldCtx>) -> Self {
        let mut s = Self::zero(ctx);
        if ctx.e == 1 {
            // e = 1 means pi = pi_pow_e itself (p = q = 2: pi = 2).
            s.comps[0] = QpFloat::from_rational(ctx, &BigRational::from_integer(ctx.pi_pow_e.clone()));
        } else {
            s.comps[1] = QpFloat::from_i64(ctx, 1);
        }
        s
    }

    pub fn from_rational(ctx: &Arc<FieldCtx>, r: &BigRational) -> Self {
        let mut s = Self::zero(ctx);
        s.comps[0] = QpFloat::from_rational(ctx, r);
        s
    }

    pub fn from_i64(ctx: &Arc<FieldCtx>, n: i64) -> Self {
        let mut s = Self::zero(ctx);
        s.comps[0] = QpFloat::from_i64(ctx, n);
        s
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// pi^j for any integer j (negative powers use pi^-e = 1/pi_pow_e).
    pub fn pi_pow(ctx: &Arc<FieldCtx>, j: i64) -> Self {
        let e = ctx.e as i64;
        let r = j.rem_euclid(e);
        let t = (j - r) / e; // j = t*e + r, 0 <= r < e
        let coeff = if t >= 0 {
            BigRational::from_integer(ctx.pi_pow_e.pow(t as u32))
        } else {
            BigRational::new(BigInt::one(), ctx.pi_pow_e.pow((-t) as u32))
        };
        let mut s = Self::zero(ctx);
        s.comps[r as usize] = QpFloat::from_rational(ctx, &coeff);
        s
    }

    pub fn neg(&self) -> Self {
        PadicScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self.comps.iter().map(|c| c.neg(&self.ctx)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.ctx.same_as(&other.ctx));
        PadicScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b, &self.ctx))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.ctx.same_as(&other.ctx));
        let e = self.ctx.e as usize;
        let mut acc = vec![QpFloat::Zero; e];
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                let prod = a.mul(b, &self.ctx);
                let k = i + j;
                if k < e {
                    acc[k] = acc[k].add(&prod, &self.ctx);
                } else {
                    let folded = prod.mul_exact_int(&self.ctx.pi_pow_e, &self.ctx);
                    acc[k - e] = acc[k - e].add(&folded, &self.ctx);
                }
            }
        }
        PadicScalar {
            ctx: Arc::clone(&self.ctx),
            comps: acc,
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let f = QpFloat::from_rational(&self.ctx, r);
        PadicScalar {
            ctx: Arc::clone(&self.ctx),
            comps: self.comps.iter().map(|c| c.mul(&f, &self.ctx)).collect(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_exact_zero())
    }

    pub fn zeroness(&self) -> Zeroness {
        if self.is_exact_zero() {
            return Zeroness::Zero;
        }
        if self.comps.iter().any(|c| matches!(c, QpFloat::Val { .. })) {
            return Zeroness::NonZero;
        }
        Zeroness::Indeterminate
    }

    /// Valuation of the element. For q = p the component valuations have
    /// pairwise distinct fractional parts, so the minimum over components
    /// is exact whenever the minimizing component is exactly known.
    pub fn valuation(&self) -> ValBound {
        let mut exact_min: Option<Ratio<i64>> = None;
        let mut below_min: Option<Ratio<i64>> = None;
        for (i, c) in self.comps.iter().enumerate() {
            let offset = self.ctx.component_val(i as u32);
            match c {
                QpFloat::Zero => {}
                QpFloat::Below { min_exp } => {
                    let b = Ratio::from_integer(*min_exp) + offset;
                    below_min = Some(match below_min {
                        Some(cur) => cur.min(b),
                        None => b,
                    });
                }
                QpFloat::Val { exp, .. } => {
                    let v = Ratio::from_integer(*exp) + offset;
                    exact_min = Some(match exact_min {
                        Some(cur) => cur.min(v),
                        None => v,
                    });
                }
            }
        }
        let eisenstein = self.ctx.is_eisenstein();
        match (exact_min, below_min) {
            (None, None) => ValBound::Exactly(Valuation::Infinite),
            (None, Some(b)) => ValBound::AtLeast(b),
            (Some(v), None) => {
                if eisenstein {
                    ValBound::Exactly(Valuation::Finite(v))
                } else {
                    ValBound::AtLeast(v)
                }
            }
            (Some(v), Some(b)) => {
                if eisenstein && v <= b {
                    ValBound::Exactly(Valuation::Finite(v))
                } else {
                    ValBound::AtLeast(v.min(b))
                }
            }
        }
    }

    /// Worst absolute precision over the nonzero components, in valuation
    /// units (component offset included). `None` when exactly zero.
    fn abs_known_floor(&self) -> Option<Ratio<i64>> {
        let mut floor: Option<Ratio<i64>> = None;
        for (i, c) in self.comps.iter().enumerate() {
            if let Some(k) = c.abs_known_to() {
                let b = Ratio::from_integer(k) + self.ctx.component_val(i as u32);
                floor = Some(match floor {
                    Some(cur) => cur.min(b),
                    None => b,
                });
            }
        }
        floor
    }

    /// Full division. Requires the divisor's valuation to be exactly known
    /// and (p-1)*val to be an integer; the quotient is found by Newton
    /// iteration after normalizing the divisor to a unit with invertible
    /// constant component.
    pub fn div(&self, rhs: &Self) -> Result<Self, PadicError> {
        match rhs.zeroness() {
            Zeroness::Zero => return Err(PadicError::DivisionByZero),
            Zeroness::Indeterminate => {
                return Err(PadicError::PrecisionLoss(
                    "divisor is indistinguishable from zero at working precision".into(),
                ))
            }
            Zeroness::NonZero => {}
        }
        let v = match rhs.valuation() {
            ValBound::Exactly(Valuation::Finite(v)) => v,
            ValBound::Exactly(Valuation::Infinite) => return Err(PadicError::DivisionByZero),
            ValBound::AtLeast(_) => {
                return Err(PadicError::PrecisionLoss(
                    "divisor valuation is not exactly known".into(),
                ))
            }
        };
        let t_ratio = v * Ratio::from_integer((self.ctx.p() - 1) as i64);
        if !t_ratio.is_integer() {
            return Err(PadicError::NotInvertible(format!(
                "divisor valuation {v} is not a multiple of 1/(p-1)"
            )));
        }
        let t = t_ratio.to_integer();
        let unit_part = rhs.mul(&Self::pi_pow(&self.ctx, -t));
        let inv_unit = unit_part.invert_unit()?;
        Ok(self.mul(&inv_unit).mul(&Self::pi_pow(&self.ctx, -t)))
    }

    /// Invert an element of valuation zero whose constant component is a
    /// p-adic unit, by Newton iteration y <- y(2 - by).
    fn invert_unit(&self) -> Result<Self, PadicError> {
        let ctx = &self.ctx;
        let (unit, prec) = match &self.comps[0] {
            QpFloat::Val {
                unit,
                exp: 0,
                prec,
            } => (unit.clone(), *prec),
            _ => {
                return Err(PadicError::NotInvertible(
                    "constant component is not a p-adic unit".into(),
                ))
            }
        };
        // Residual precision the iteration can certify: limited by how well
        // the divisor itself is known.
        let floor = self
            .abs_known_floor()
            .expect("nonzero divisor has a known component");
        let target = floor
            .floor()
            .to_integer()
            .min(ctx.precision() as i64)
            - 2;
        if target <= 0 {
            return Err(PadicError::PrecisionLoss(
                "divisor has too little precision to invert".into(),
            ));
        }
        let modulus = ctx.p_pow(prec);
        let inv0 = mod_inverse(&unit, &modulus).expect("unit component");
        let mut y = Self::zero(ctx);
        y.comps[0] = QpFloat::Val {
            unit: inv0,
            exp: 0,
            prec,
        };
        let two = Self::from_i64(ctx, 2);
        let bits = 64 - ((target as u64) * (ctx.p() - 1)).leading_zeros();
        for _ in 0..(bits + 2) {
            y = y.mul(&two.sub(&self.mul(&y)));
        }
        // Verify convergence: 1 - b*y must vanish to the certified depth.
        let residual = Self::one(ctx).sub(&self.mul(&y));
        let ok = match residual.valuation() {
            ValBound::Exactly(Valuation::Infinite) => true,
            ValBound::Exactly(Valuation::Finite(v)) => v >= Ratio::from_integer(target),
            ValBound::AtLeast(b) => b >= Ratio::from_integer(target),
        };
        if !ok {
            return Err(PadicError::NotInvertible(
                "Newton iteration did not converge; divisor is not a unit".into(),
            ));
        }
        Ok(y)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "pi_coeffs": self.comps.iter().map(|c| c.to_json(&self.ctx)).collect::<Vec<_>>(),
            "precision": self.ctx.precision(),
        })
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match c {
                QpFloat::Zero => unreachable!(),
                QpFloat::Below { min_exp } => write!(f, "O(p^{min_exp})")?,
                QpFloat::Val { unit, exp, prec } => {
                    write!(f, "p^{exp}*{unit}(+O(p^{}))", exp + *prec as i64)?
                }
            }
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
        PadicConfig::new(3, 3, 4).unwrap().context().unwrap()
    }

    fn ctx3_hi() -> Arc<FieldCtx> {
        PadicConfig::new(3, 3, 24).unwrap().context().unwrap()
    }

    #[test]
    fn half_in_z3() {
        let ctx = ctx3();
        let half = QpFloat::from_rational(&ctx, &BigRational::new(BigInt::one(), BigInt::from(2)));
        // 1/2 = 41 mod 81: digits 2,1,1,1
        assert_eq!(
            half,
            QpFloat::Val {
                unit: BigUint::from(41u32),
                exp: 0,
                prec: 4
            }
        );
        assert_eq!(half.digits_le(&ctx).unwrap(), vec![2, 1, 1, 1]);
        let one = half.add(&half, &ctx);
        assert_eq!(
            one,
            QpFloat::Val {
                unit: BigUint::one(),
                exp: 0,
                prec: 4
            }
        );
    }

    #[test]
    fn cancellation_drops_below_noise() {
        let ctx = ctx3();
        let a = QpFloat::from_i64(&ctx, 7);
        let s = a.add(&a.neg(&ctx), &ctx);
        assert_eq!(s, QpFloat::Below { min_exp: 4 });
    }

    #[test]
    fn partial_cancellation_keeps_exact_valuation() {
        let ctx = ctx3();
        // 1 + 8 = 9: valuation jumps to 2 with 2 digits left.
        let a = QpFloat::from_i64(&ctx, 1);
        let b = QpFloat::from_i64(&ctx, 8);
        let s = a.add(&b, &ctx);
        assert_eq!(
            s,
            QpFloat::Val {
                unit: BigUint::one(),
                exp: 2,
                prec: 2
            }
        );
    }

    #[test]
    fn unequal_valuations_add_exactly() {
        let ctx = ctx3();
        let a = QpFloat::from_i64(&ctx, 1); // exp 0 prec 4
        let b = QpFloat::from_i64(&ctx, 9); // exp 2 prec 4
        let s = a.add(&b, &ctx);
        // 10 = 1 + 0*3 + 1*9: known to min(4, 2+4)=4 digits
        assert_eq!(
            s,
            QpFloat::Val {
                unit: BigUint::from(10u32),
                exp: 0,
                prec: 4
            }
        );
    }

    #[test]
    fn noise_floor_masks_value() {
        let ctx = ctx3();
        let noise = QpFloat::Below { min_exp: 2 };
        let v = QpFloat::from_i64(&ctx, 1);
        let s = v.add(&noise, &ctx);
        assert_eq!(
            s,
            QpFloat::Val {
                unit: BigUint::one(),
                exp: 0,
                prec: 2
            }
        );
        let masked = QpFloat::from_i64(&ctx, 9).add(&noise, &ctx);
        assert_eq!(masked, QpFloat::Below { min_exp: 2 });
    }

    #[test]
    fn pi_squares_to_p() {
        let ctx = ctx3_hi();
        let pi = PadicScalar::pi(&ctx);
        let sq = pi.mul(&pi);
        assert_eq!(sq, PadicScalar::from_i64(&ctx, 3));
        assert_eq!(
            pi.valuation(),
            ValBound::Exactly(Valuation::Finite(Ratio::new(1, 2)))
        );
        assert_eq!(sq.valuation(), ValBound::Exactly(Valuation::from_int(1)));
    }

    #[test]
    fn pi_pow_negative() {
        let ctx = ctx3_hi();
        let a = PadicScalar::pi_pow(&ctx, -3);
        let b = PadicScalar::pi_pow(&ctx, 3);
        let prod = a.mul(&b);
        assert_eq!(prod, PadicScalar::one(&ctx));
    }

    #[test]
    fn division_roundtrip() {
        let ctx = ctx3_hi();
        // b = 1 + pi - 3^2/2
        let b = PadicScalar::one(&ctx)
            .add(&PadicScalar::pi(&ctx))
            .sub(&PadicScalar::from_rational(
                &ctx,
                &BigRational::new(BigInt::from(9), BigInt::from(2)),
            ));
        let inv = PadicScalar::one(&ctx).div(&b).unwrap();
        let prod = b.mul(&inv).sub(&PadicScalar::one(&ctx));
        match prod.valuation() {
            ValBound::Exactly(Valuation::Infinite) => {}
            ValBound::AtLeast(v) => assert!(v >= Ratio::from_integer(20), "residual too large: {v}"),
            ValBound::Exactly(Valuation::Finite(v)) => {
                assert!(v >= Ratio::from_integer(20), "residual too large: {v}")
            }
        }
    }

    #[test]
    fn division_by_pi() {
        let ctx = ctx3_hi();
        let three = PadicScalar::from_i64(&ctx, 3);
        let q = three.div(&PadicScalar::pi(&ctx)).unwrap();
        // 3/pi = pi; compare valuation and the pi-component unit.
        assert_eq!(
            q.valuation(),
            ValBound::Exactly(Valuation::Finite(Ratio::new(1, 2)))
        );
        match &q.comps[1] {
            QpFloat::Val { unit, exp, .. } => {
                assert_eq!(*exp, 0);
                assert_eq!(unit % BigUint::from(9u32), BigUint::one());
            }
            other => panic!("expected a value in the pi component, got {other:?}"),
        }
        assert!(q.comps[0].is_exact_zero() || matches!(q.comps[0], QpFloat::Below { .. }));
    }

    #[test]
    fn division_by_zeroish_fails() {
        let ctx = ctx3();
        let z = PadicScalar::zero(&ctx);
        assert!(matches!(
            PadicScalar::one(&ctx).div(&z),
            Err(PadicError::DivisionByZero)
        ));
        let mut noise = PadicScalar::zero(&ctx);
        noise.comps[0] = QpFloat::Below { min_exp: 4 };
        assert!(matches!(
            PadicScalar::one(&ctx).div(&noise),
            Err(PadicError::PrecisionLoss(_))
        ));
    }

    #[test]
    fn zeroness_tracking() {
        let ctx = ctx3();
        assert_eq!(PadicScalar::zero(&ctx).zeroness(), Zeroness::Zero);
        assert_eq!(PadicScalar::pi(&ctx).zeroness(), Zeroness::NonZero);
        let mut noise = PadicScalar::zero(&ctx);
        noise.comps[1] = QpFloat::Below { min_exp: 1 };
        assert_eq!(noise.zeroness(), Zeroness::Indeterminate);
    }
}
