//! Bands-left theta form: operators written as sum_b x^b f_b(theta) with
//! theta = x d. Conversion to normal form and back is exact; the twist and
//! inversion substitutions act bandwise on the theta polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};
use serde_json::json;

use crate::error::WeylError;
use crate::padic::config::FieldCtx;
use crate::padic::rational::factorial;
use crate::padic::scalar::Scalar;
use crate::padic::valuation::Zeroness;

use super::operator::{Flavor, WeylOperator, Window};

// ---- dense polynomial helpers over S (ascending coefficients) ----

pub fn poly_trim<S: Scalar>(mut f: Vec<S>) -> Vec<S> {
    while matches!(f.last(), Some(c) if c.is_exact_zero()) {
        f.pop();
    }
    f
}

pub fn poly_is_zero<S: Scalar>(f: &[S]) -> bool {
    f.iter().all(|c| c.is_exact_zero())
}

pub fn poly_add<S: Scalar>(ctx: &Arc<FieldCtx>, f: &[S], g: &[S]) -> Vec<S> {
    let n = f.len().max(g.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.get(i).cloned().unwrap_or_else(|| S::zero(ctx));
        let b = g.get(i).cloned().unwrap_or_else(|| S::zero(ctx));
        out.push(a.add(&b));
    }
    poly_trim(out)
}

pub fn poly_mul<S: Scalar>(ctx: &Arc<FieldCtx>, f: &[S], g: &[S]) -> Vec<S> {
    if poly_is_zero(f) || poly_is_zero(g) {
        return Vec::new();
    }
    let mut out = vec![S::zero(ctx); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_exact_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    poly_trim(out)
}

pub fn poly_scale<S: Scalar>(f: &[S], s: &S) -> Vec<S> {
    poly_trim(f.iter().map(|c| c.mul(s)).collect())
}

/// f(a + b * theta), by Horner over polynomial arithmetic.
pub fn poly_compose_affine<S: Scalar>(ctx: &Arc<FieldCtx>, f: &[S], a: &S, b: &S) -> Vec<S> {
    let linear = vec![a.clone(), b.clone()];
    let mut acc: Vec<S> = Vec::new();
    for c in f.iter().rev() {
        acc = poly_mul(ctx, &acc, &linear);
        acc = poly_add(ctx, &acc, std::slice::from_ref(c));
    }
    acc
}

pub fn poly_eval<S: Scalar>(ctx: &Arc<FieldCtx>, f: &[S], at: &S) -> S {
    let mut acc = S::zero(ctx);
    for c in f.iter().rev() {
        acc = acc.mul(at).add(c);
    }
    acc
}

/// Falling factorial polynomials FF_k(t) = t(t-1)...(t-k+1) as integer
/// coefficient vectors, for k = 0..=kmax.
fn falling_factorials(kmax: u32) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(kmax as usize + 1);
    out.push(vec![BigInt::one()]);
    for k in 1..=kmax {
        let prev = &out[k as usize - 1];
        let shift = BigInt::from(k as i64 - 1);
        // FF_k = FF_{k-1} * (t - (k-1))
        let mut next = vec![BigInt::zero(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &shift;
        }
        out.push(next);
    }
    out
}

/// Stirling numbers of the second kind S2(j, k) for j, k = 0..=jmax.
fn stirling_second(jmax: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); jmax + 1]; jmax + 1];
    s[0][0] = BigInt::one();
    for j in 1..=jmax {
        for k in 1..=j {
            let t = &s[j - 1][k] * BigInt::from(k as i64);
            s[j][k] = t + &s[j - 1][k - 1];
        }
    }
    s
}

/// An operator in bands-left theta form.
#[derive(Debug, Clone)]
pub struct ThetaForm<S: Scalar> {
    pub ctx: Arc<FieldCtx>,
    pub flavor: Flavor,
    pub window: Window,
    /// band b -> coefficients of f_b(theta), ascending, trimmed.
    pub bands: BTreeMap<i64, Vec<S>>,
    pub truncated: bool,
}

impl<S: Scalar> PartialEq for ThetaForm<S> {
    fn eq(&self, other: &Self) -> bool {
        self.flavor == other.flavor && self.bands == other.bands
    }
}

impl<S: Scalar> ThetaForm<S> {
    pub fn new(ctx: &Arc<FieldCtx>, flavor: Flavor, window: Window) -> Self {
        ThetaForm {
            ctx: Arc::clone(ctx),
            flavor,
            window,
            bands: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn set_band(&mut self, band: i64, poly: Vec<S>) {
        let poly = poly_trim(poly);
        if poly.is_empty() {
            self.bands.remove(&band);
        } else {
            self.bands.insert(band, poly);
        }
    }

    /// x^l d^[k] = x^(l-k) FF_k(theta)/k!, summed over all terms.
    pub fn of_operator(op: &WeylOperator<S>) -> Self {
        let kmax = op.terms.keys().map(|&(_, k)| k).max().unwrap_or(0);
        let ff = falling_factorials(kmax);
        let mut bands: BTreeMap<i64, Vec<S>> = BTreeMap::new();
        for (&(l, k), c) in &op.terms {
            let b = l - k as i64;
            let kfact = BigRational::from_integer(factorial(k));
            let contrib: Vec<S> = ff[k as usize]
                .iter()
                .map(|fc| c.mul_rational(&(BigRational::from_integer(fc.clone()) / &kfact)))
                .collect();
            let entry = bands.remove(&b).unwrap_or_default();
            let sum = poly_add(&op.ctx, &entry, &contrib);
            if !sum.is_empty() {
                bands.insert(b, sum);
            }
        }
        ThetaForm {
            ctx: Arc::clone(&op.ctx),
            flavor: op.flavor,
            window: op.window,
            bands,
            truncated: op.truncated,
        }
    }

    /// theta^j = sum_k S2(j, k) k! x^k d^[k]; band b lands on terms
    /// (b + k, k). In the polynomial flavor any surviving negative power
    /// of x is an error (exact cancellations are fine).
    pub fn to_operator(&self) -> Result<WeylOperator<S>, WeylError> {
        let jmax = self
            .bands
            .values()
            .map(|f| f.len().saturating_sub(1))
            .max()
            .unwrap_or(0);
        let s2 = stirling_second(jmax);
        // accumulate without window/flavor filtering first
        let mut acc: BTreeMap<(i64, u32), S> = BTreeMap::new();
        for (&b, f) in &self.bands {
            for (j, c) in f.iter().enumerate() {
                if c.is_exact_zero() {
                    continue;
                }
                for k in 0..=j {
                    if s2[j][k].is_zero() {
                        continue;
                    }
                    let factor = BigRational::from_integer(&s2[j][k] * factorial(k as u32));
                    let term = c.mul_rational(&factor);
                    let key = (b + k as i64, k as u32);
                    let cur = acc.remove(&key);
                    let sum = match cur {
                        Some(prev) => prev.add(&term),
                        None => term,
                    };
                    if !sum.is_exact_zero() {
                        acc.insert(key, sum);
                    }
                }
            }
        }
        let mut op = WeylOperator::zero(&self.ctx, self.flavor, self.window);
        op.truncated = self.truncated;
        for ((l, k), c) in acc {
            if self.flavor == Flavor::A1 && l < 0 {
                if c.zeroness() == Zeroness::Zero {
                    continue;
                }
                return Err(WeylError::NegativePowerInA1(format!(
                    "band {} leaves coefficient at x^{l} d^[{k}]",
                    l - k as i64
                )));
            }
            op.insert_term(l, k, c);
        }
        Ok(op)
    }

    /// Bandwise twist: f_b(theta) -> f_b(theta - gamma). Conjugation by the
    /// formal power x^gamma; a ring map in either flavor.
    pub fn twist(&self, gamma: &S) -> Self {
        let neg = gamma.neg();
        let one = S::one(&self.ctx);
        let bands = self
            .bands
            .iter()
            .map(|(&b, f)| (b, poly_compose_affine(&self.ctx, f, &neg, &one)))
            .collect();
        ThetaForm {
            ctx: Arc::clone(&self.ctx),
            flavor: self.flavor,
            window: self.window,
            bands,
            truncated: self.truncated,
        }
    }

    /// The substitution x -> x^-1 (so theta -> -theta): bands flip sign and
    /// polynomials are composed with -theta. Laurent flavor only.
    pub fn invert(&self) -> Result<Self, WeylError> {
        if self.flavor != Flavor::B1 {
            return Err(WeylError::FlavorMismatch {
                expected: Flavor::B1.to_string(),
                found: self.flavor.to_string(),
            });
        }
        let zero = S::zero(&self.ctx);
        let minus_one = S::from_i64(&self.ctx, -1);
        let bands = self
            .bands
            .iter()
            .map(|(&b, f)| (-b, poly_compose_affine(&self.ctx, f, &zero, &minus_one)))
            .collect();
        Ok(ThetaForm {
            ctx: Arc::clone(&self.ctx),
            flavor: self.flavor,
            window: self.window,
            bands,
            truncated: self.truncated,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "flavor": self.flavor,
            "truncated": self.truncated,
            "bands": self.bands.iter().map(|(&b, f)| json!({
                "band": b,
                "poly": f.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl<S: Scalar> fmt::Display for ThetaForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bands.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&b, poly) in &self.bands {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if b != 0 {
                write!(f, "x^{b}*")?;
            }
            write!(f, "[")?;
            for (j, c) in poly.iter().enumerate() {
                if j > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "({c})t^{j}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
