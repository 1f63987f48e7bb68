//! Truncated-window dagger Weyl algebra operators in normal form:
//! finite sums of c_{l,k} x^l d^[k], where d^[k] is the divided power
//! (1/k!) d^k. The polynomial flavor keeps l >= 0; the Laurent flavor
//! allows negative powers of x.
//!
//! Products are clipped to the window and the `truncated` flag records
//! honestly whether anything was lost.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::BigRational;
use serde_json::json;

use crate::error::WeylError;
use crate::padic::config::FieldCtx;
use crate::padic::rational::binomial_int;
use crate::padic::scalar::Scalar;
use crate::padic::valuation::Zeroness;

/// Which dagger algebra the operator lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    /// Polynomial coefficients: x^l with l >= 0.
    A1,
    /// Laurent coefficients: x^l with l in Z.
    B1,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::A1 => write!(f, "A1"),
            Flavor::B1 => write!(f, "B1"),
        }
    }
}

/// Truncation window: retained exponents satisfy |l| <= lmax (l >= 0 only
/// for the polynomial flavor) and k <= kmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub lmax: i64,
    pub kmax: u32,
}

impl Window {
    pub fn new(lmax: i64, kmax: u32) -> Self {
        Window { lmax, kmax }
    }

    pub fn contains(&self, flavor: Flavor, l: i64, k: u32) -> bool {
        if k > self.kmax {
            return false;
        }
        match flavor {
            Flavor::A1 => l >= 0 && l <= self.lmax,
            Flavor::B1 => l.abs() <= self.lmax,
        }
    }
}

/// Weight of a monomial term, the grading the growth certificates use.
pub fn weight(flavor: Flavor, l: i64, k: u32) -> i64 {
    match flavor {
        Flavor::A1 => l + k as i64,
        Flavor::B1 => l.abs() + k as i64,
    }
}

/// An operator in normal form over scalars S.
#[derive(Debug, Clone)]
pub struct WeylOperator<S: Scalar> {
    pub ctx: Arc<FieldCtx>,
    pub flavor: Flavor,
    pub window: Window,
    /// (l, k) -> coefficient; exact zeros are never stored.
    pub terms: BTreeMap<(i64, u32), S>,
    /// True when some term fell outside the window during construction.
    pub truncated: bool,
}

impl<S: Scalar> PartialEq for WeylOperator<S> {
    fn eq(&self, other: &Self) -> bool {
        self.flavor == other.flavor && self.terms == other.terms
    }
}

impl<S: Scalar> WeylOperator<S> {
    pub fn zero(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window) -> Self {
        WeylOperator {
            ctx: Arc::clone(ctx),
            flavor,
            window,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window) -> Self {
        let mut op = Self::zero(ctx, flavor, window);
        op.insert_term(0, 0, S::one(ctx));
        op
    }

    /// The generator x.
    pub fn x(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window) -> Self {
        let mut op = Self::zero(ctx, flavor, window);
        op.insert_term(1, 0, S::one(ctx));
        op
    }

    /// The divided-power generator d^[1] = d.
    pub fn dx(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window) -> Self {
        let mut op = Self::zero(ctx, flavor, window);
        op.insert_term(0, 1, S::one(ctx));
        op
    }

    /// theta = x d.
    pub fn theta(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window) -> Self {
        let mut op = Self::zero(ctx, flavor, window);
        op.insert_term(1, 1, S::one(ctx));
        op
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window, l: i64, k: u32) -> Self {
        let mut op = Self::zero(ctx, flavor, window);
        op.insert_term(l, k, S::one(ctx));
        op
    }

    /// Add a term; out-of-window terms are dropped and flagged, exact zeros
    /// are elided, and coincident terms accumulate.
    pub fn insert_term(&mut self, l: i64, k: u32, coeff: S) {
        if coeff.is_exact_zero() {
            return;
        }
        if !self.window.contains(self.flavor, l, k) {
            self.truncated = true;
            return;
        }
        match self.terms.remove(&(l, k)) {
            Some(prev) => {
                let sum = prev.add(&coeff);
                if !sum.is_exact_zero() {
                    self.terms.insert((l, k), sum);
                }
            }
            None => {
                self.terms.insert((l, k), coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.flavor, other.flavor);
        let mut out = self.clone();
        out.truncated = self.truncated || other.truncated;
        for (&(l, k), c) in &other.terms {
            out.insert_term(l, k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        WeylOperator {
            ctx: Arc::clone(&self.ctx),
            flavor: self.flavor,
            window: self.window,
            terms: self
                .terms
                .iter()
                .map(|(&lk, c)| (lk, c.neg()))
                .collect(),
            truncated: self.truncated,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_exact_zero() {
            return Self::zero(&self.ctx, self.flavor, self.window);
        }
        let mut out = Self::zero(&self.ctx, self.flavor, self.window);
        out.truncated = self.truncated;
        for (&(l, k), c) in &self.terms {
            out.insert_term(l, k, c.mul(s));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&S::from_rational(&self.ctx, r))
    }

    /// Multiply by pi^j.
    pub fn scale_pi_pow(&self, j: i64) -> Self {
        self.scale(&S::pi_pow(&self.ctx, j))
    }

    /// Operator product via the normal-form commutation rule
    ///   d^[k] x^t = sum_j C(t, j) x^(t-j) d^[k-j]
    /// combined with d^[a] d^[b] = C(a+b, a) d^[a+b].
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.flavor, other.flavor);
        debug_assert_eq!(self.window, other.window);
        let ctx = &self.ctx;
        let mut out = Self::zero(ctx, self.flavor, self.window);
        out.truncated = self.truncated || other.truncated;
        for (&(l1, k1), a) in &self.terms {
            for (&(l2, k2), b) in &other.terms {
                let ab = a.mul(b);
                let jmax = if l2 >= 0 {
                    k1.min(l2 as u32)
                } else {
                    k1
                };
                for j in 0..=jmax {
                    let c_xj = binomial_int(l2, j);
                    if num::Zero::is_zero(&c_xj) {
                        continue;
                    }
                    let c_dd = binomial_int((k1 - j + k2) as i64, k2);
                    let coeff = ab.mul_rational(&BigRational::from_integer(c_xj * c_dd));
                    out.insert_term(l1 + l2 - j as i64, k1 + k2 - j, coeff);
                }
            }
        }
        out
    }

    /// Largest term weight present (None when zero).
    pub fn max_weight(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|&(l, k)| weight(self.flavor, l, k))
            .max()
    }

    /// Project onto the constant band modulo the left ideal generated by x:
    /// returns the coefficients of x^0 d^[k] for k = 0..=kmax.
    /// Polynomial flavor only.
    pub fn reduce_mod_x(&self) -> Result<Vec<S>, WeylError> {
        if self.flavor != Flavor::A1 {
            return Err(WeylError::FlavorMismatch {
                expected: Flavor::A1.to_string(),
                found: self.flavor.to_string(),
            });
        }
        let mut out = vec![S::zero(&self.ctx); self.window.kmax as usize + 1];
        for (&(l, k), c) in &self.terms {
            if l == 0 {
                out[k as usize] = c.clone();
            }
        }
        Ok(out)
    }

    /// First (l, k) where self - other has a certainly nonzero coefficient.
    pub fn nonzero_discrepancy(&self, other: &Self) -> Option<((i64, u32), S)> {
        let diff = self.sub(other);
        diff.terms
            .into_iter()
            .find(|(_, c)| c.zeroness() == Zeroness::NonZero)
    }

    /// Whether every coefficient is exactly zero.
    pub fn is_exactly_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zeroness of the whole operator: Zero only when structurally empty,
    /// NonZero when some coefficient certainly is, Indeterminate otherwise.
    pub fn zeroness(&self) -> Zeroness {
        if self.terms.is_empty() {
            return Zeroness::Zero;
        }
        if self
            .terms
            .values()
            .any(|c| c.zeroness() == Zeroness::NonZero)
        {
            Zeroness::NonZero
        } else {
            Zeroness::Indeterminate
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "flavor": self.flavor,
            "window": { "lmax": self.window.lmax, "kmax": self.window.kmax },
            "truncated": self.truncated,
            "terms": self.terms.iter().map(|(&(l, k), c)| json!({
                "l": l, "k": k, "coeff": c.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl<S: Scalar> fmt::Display for WeylOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (&(l, k), c) in &self.terms {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})")?;
                if l != 0 {
                    write!(f, "*x^{l}")?;
                }
                if k != 0 {
                    write!(f, "*d[{k}]")?;
                }
            }
        }
        if self.truncated {
            write!(f, " (truncated)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::config::PadicConfig;
    use crate::padic::exact::ExactScalar;

    fn setup() -> (Arc<FieldCtx>, Window) {
        let ctx = PadicConfig::new(3, 3, 16).unwrap().context().unwrap();
        (ctx, Window::new(8, 8))
    }

    #[test]
    fn dx_x_minus_x_dx_is_one() {
        let (ctx, w) = setup();
        let x = WeylOperator::<ExactScalar>::x(&ctx, Flavor::A1, w);
        let dx = WeylOperator::<ExactScalar>::dx(&ctx, Flavor::A1, w);
        let comm = dx.mul(&x).sub(&x.mul(&dx));
        assert_eq!(comm, WeylOperator::one(&ctx, Flavor::A1, w));
        assert!(!comm.truncated);
    }

    #[test]
    fn divided_powers_compose() {
        let (ctx, w) = setup();
        let d2 = WeylOperator::<ExactScalar>::monomial(&ctx, Flavor::A1, w, 0, 2);
        let d3 = WeylOperator::<ExactScalar>::monomial(&ctx, Flavor::A1, w, 0, 3);
        let prod = d2.mul(&d3);
        // d^[2] d^[3] = C(5,3) d^[5] = 10 d^[5]
        let expected =
            WeylOperator::monomial(&ctx, Flavor::A1, w, 0, 5).scale(&ExactScalar::from_i64(&ctx, 10));
        assert_eq!(prod, expected);
    }

    #[test]
    fn commutation_with_divided_power() {
        let (ctx, w) = setup();
        // d^[2] x = x d^[2] + d^[1]
        let d2 = WeylOperator::<ExactScalar>::monomial(&ctx, Flavor::A1, w, 0, 2);
        let x = WeylOperator::x(&ctx, Flavor::A1, w);
        let prod = d2.mul(&x);
        let mut expected = WeylOperator::zero(&ctx, Flavor::A1, w);
        expected.insert_term(1, 2, ExactScalar::one(&ctx));
        expected.insert_term(0, 1, ExactScalar::one(&ctx));
        assert_eq!(prod, expected);
    }

    #[test]
    fn laurent_commutation() {
        let (ctx, w) = setup();
        // d x^-1 = x^-1 d - x^-2
        let d = WeylOperator::<ExactScalar>::dx(&ctx, Flavor::B1, w);
        let xinv = WeylOperator::monomial(&ctx, Flavor::B1, w, -1, 0);
        let prod = d.mul(&xinv);
        let mut expected = WeylOperator::zero(&ctx, Flavor::B1, w);
        expected.insert_term(-1, 1, ExactScalar::one(&ctx));
        expected.insert_term(-2, 0, ExactScalar::from_i64(&ctx, -1));
        assert_eq!(prod, expected);
    }

    #[test]
    fn window_clipping_sets_flag() {
        let (ctx, _) = setup();
        let w = Window::new(2, 2);
        let x = WeylOperator::<ExactScalar>::x(&ctx, Flavor::A1, w);
        let x2 = x.mul(&x);
        assert!(!x2.truncated);
        let x3 = x2.mul(&x);
        assert!(x3.truncated);
        assert!(x3.is_exactly_zero());
    }

    #[test]
    fn theta_squared_normal_form() {
        let (ctx, w) = setup();
        // theta^2 = 2 x^2 d^[2] + x d^[1]
        let theta = WeylOperator::<ExactScalar>::theta(&ctx, Flavor::A1, w);
        let sq = theta.mul(&theta);
        let mut expected = WeylOperator::zero(&ctx, Flavor::A1, w);
        expected.insert_term(2, 2, ExactScalar::from_i64(&ctx, 2));
        expected.insert_term(1, 1, ExactScalar::one(&ctx));
        assert_eq!(sq, expected);
    }

    #[test]
    fn reduce_mod_x_picks_constant_band() {
        let (ctx, _) = setup();
        let w = Window::new(3, 3);
        let mut op = WeylOperator::<ExactScalar>::zero(&ctx, Flavor::A1, w);
        op.insert_term(0, 0, ExactScalar::from_i64(&ctx, 5));
        op.insert_term(0, 2, ExactScalar::from_i64(&ctx, -1));
        op.insert_term(1, 1, ExactScalar::from_i64(&ctx, 7));
        let r = op.reduce_mod_x().unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r[0], ExactScalar::from_i64(&ctx, 5));
        assert_eq!(r[1], ExactScalar::zero(&ctx));
        assert_eq!(r[2], ExactScalar::from_i64(&ctx, -1));
        let b1 = WeylOperator::<ExactScalar>::x(&ctx, Flavor::B1, w);
        assert!(b1.reduce_mod_x().is_err());
    }
}
