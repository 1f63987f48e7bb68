//! Hypergeometric parameters: exact rationals, or p-adic integers known
//! only through a finite stream of base-p digits.
//!
//! A digit stream represents an element of Z_p modulo p^horizon. Every
//! question asked of it gets a three-valued answer: facts visible within
//! the horizon are exact, everything else is reported as unknown.

use std::fmt;

use num::{BigInt, BigRational, BigUint, Integer, ToPrimitive, Zero};
use serde_json::json;

use super::rational::{fmt_rational, mod_inverse, mod_reduce, parse_rational, vp_rational};
use super::valuation::{Tri, ValBound, Valuation};

/// Little-endian base-p digits of a p-adic integer, known modulo p^len.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitStream {
    pub p: u64,
    pub digits: Vec<u32>,
}

impl DigitStream {
    pub fn new(p: u64, digits: Vec<u32>) -> Result<Self, String> {
        if digits.is_empty() {
            return Err("digit stream must be nonempty".into());
        }
        if digits.iter().any(|&d| d as u64 >= p) {
            return Err(format!("digit out of range for base {p}"));
        }
        Ok(DigitStream { p, digits })
    }

    pub fn horizon(&self) -> u32 {
        self.digits.len() as u32
    }

    /// The value as an integer in [0, p^horizon).
    pub fn value(&self) -> BigUint {
        let p = BigUint::from(self.p);
        let mut v = BigUint::zero();
        for &d in self.digits.iter().rev() {
            v = v * &p + BigUint::from(d);
        }
        v
    }

    /// Rebuild digits from a residue in [0, p^horizon).
    pub fn from_residue(p: u64, mut v: BigUint, horizon: u32) -> Self {
        let p_big = BigUint::from(p);
        let mut digits = Vec::with_capacity(horizon as usize);
        for _ in 0..horizon {
            let d = (&v % &p_big).to_u32_digits();
            digits.push(d.first().copied().unwrap_or(0));
            v /= &p_big;
        }
        DigitStream { p, digits }
    }

    /// The canonical non-Liouville test stream: digits 1 at positions
    /// a_1 = 1, a_{i+1} = p^{a_i}, zero elsewhere.
    pub fn sparse_tower(p: u64, horizon: u32) -> Self {
        let mut digits = vec![0u32; horizon as usize];
        let mut a: u64 = 1;
        while a < horizon as u64 {
            digits[a as usize] = 1;
            // next position is p^a; stop once it can no longer fit
            let mut next: u64 = 1;
            let mut overflow = false;
            for _ in 0..a {
                next = match next.checked_mul(p) {
                    Some(n) if n <= u32::MAX as u64 => n,
                    _ => {
                        overflow = true;
                        break;
                    }
                };
            }
            if overflow {
                break;
            }
            a = next;
        }
        DigitStream { p, digits }
    }
}

/// A parameter value: exact rational, or digit-stream element of Z_p.
#[derive(Debug, Clone, PartialEq)]
pub enum PadicParameter {
    Rational(BigRational),
    Stream(DigitStream),
}

impl PadicParameter {
    pub fn rational_i64(n: i64, d: i64) -> Self {
        PadicParameter::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn integer(n: i64) -> Self {
        PadicParameter::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn parse(s: &str, p: u64, horizon: u32) -> Result<Self, String> {
        let s = s.trim();
        if s == "tower" {
            return Ok(PadicParameter::Stream(DigitStream::sparse_tower(
                p, horizon,
            )));
        }
        if let Some(rest) = s.strip_prefix("digits:") {
            let digits: Result<Vec<u32>, _> = rest
                .split(|c| c == ',' || c == ' ')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>())
                .collect();
            let digits = digits.map_err(|e| format!("bad digit list: {e}"))?;
            return Ok(PadicParameter::Stream(DigitStream::new(p, digits)?));
        }
        Ok(PadicParameter::Rational(parse_rational(s)?))
    }

    /// Is this parameter an element of Z (a rational integer)?
    pub fn is_integer(&self) -> Tri {
        match self {
            PadicParameter::Rational(r) => {
                if r.is_integer() {
                    Tri::Yes
                } else {
                    Tri::No
                }
            }
            PadicParameter::Stream(_) => Tri::Unknown,
        }
    }

    /// The unique integer in [lo, hi] this parameter could equal, if any.
    /// For a stream the congruence modulo p^horizon pins down at most one
    /// candidate in any short range; `None` rules the whole range out.
    pub fn integer_value_in_range(&self, lo: i64, hi: i64) -> Option<i64> {
        if lo > hi {
            return None;
        }
        match self {
            PadicParameter::Rational(r) => {
                if !r.is_integer() {
                    return None;
                }
                let n = r.to_integer();
                if n >= BigInt::from(lo) && n <= BigInt::from(hi) {
                    n.to_i64()
                } else {
                    None
                }
            }
            PadicParameter::Stream(s) => {
                let m = BigInt::from(BigUint::from(s.p).pow(s.horizon()));
                let v = BigInt::from(s.value());
                // unique representative of v mod m in [lo, lo + m)
                let c = BigInt::from(lo) + (v - BigInt::from(lo)).mod_floor(&m);
                if c <= BigInt::from(hi) {
                    c.to_i64()
                } else {
                    None
                }
            }
        }
    }

    /// v_p(self - k) for an integer shift k; exact for rationals, exact up
    /// to the horizon for streams.
    pub fn val_of_shift(&self, p: u64, k: &BigInt) -> ValBound {
        match self {
            PadicParameter::Rational(r) => {
                let diff = r - BigRational::from_integer(k.clone());
                ValBound::Exactly(vp_rational(p, &diff))
            }
            PadicParameter::Stream(s) => {
                debug_assert_eq!(s.p, p);
                let h = s.horizon();
                let m = BigInt::from(BigUint::from(p).pow(h));
                let diff = (BigInt::from(s.value()) - k).mod_floor(&m);
                if diff.is_zero() {
                    return ValBound::AtLeast(num::rational::Ratio::from_integer(h as i64));
                }
                let mut v = 0i64;
                let p_int = BigInt::from(p);
                let mut d = diff;
                while (&d % &p_int).is_zero() {
                    v += 1;
                    d /= &p_int;
                }
                ValBound::Exactly(Valuation::from_int(v))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            PadicParameter::Rational(r) => PadicParameter::Rational(-r),
            PadicParameter::Stream(s) => {
                let m = BigUint::from(s.p).pow(s.horizon());
                let v = s.value();
                let neg = if v.is_zero() { v } else { &m - v };
                PadicParameter::Stream(DigitStream::from_residue(s.p, neg, s.horizon()))
            }
        }
    }

    /// self + integer n.
    pub fn add_int(&self, n: i64) -> Self {
        match self {
            PadicParameter::Rational(r) => {
                PadicParameter::Rational(r + BigRational::from_integer(BigInt::from(n)))
            }
            PadicParameter::Stream(s) => {
                let m = BigInt::from(BigUint::from(s.p).pow(s.horizon()));
                let v = (BigInt::from(s.value()) + BigInt::from(n)).mod_floor(&m);
                PadicParameter::Stream(DigitStream::from_residue(
                    s.p,
                    v.to_biguint().expect("mod_floor is non-negative"),
                    s.horizon(),
                ))
            }
        }
    }

    /// Shift into [0, 1) for rationals; streams are already canonical
    /// representatives modulo p^horizon and unchanged by integer shifts.
    pub fn reduce_mod_z(&self) -> Self {
        match self {
            PadicParameter::Rational(r) => PadicParameter::Rational(r - r.floor()),
            PadicParameter::Stream(_) => self.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            PadicParameter::Rational(r) => json!({ "rational": fmt_rational(r) }),
            PadicParameter::Stream(s) => json!({
                "stream": { "p": s.p, "digits": s.digits }
            }),
        }
    }
}

impl fmt::Display for PadicParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicParameter::Rational(r) => write!(f, "{}", fmt_rational(r)),
            PadicParameter::Stream(s) => {
                let shown: Vec<String> = s
                    .digits
                    .iter()
                    .take(12)
                    .map(|d| d.to_string())
                    .collect();
                let ellipsis = if s.digits.len() > 12 { ".." } else { "" };
                write!(
                    f,
                    "stream[{}{}](mod {}^{})",
                    shown.join(""),
                    ellipsis,
                    s.p,
                    s.horizon()
                )
            }
        }
    }
}

/// Result of forming an integer combination of parameters.
pub enum Combination {
    Rational(BigRational),
    Stream(DigitStream),
    /// Streams mixed with a rational of negative valuation: the sum is not
    /// a p-adic integer and has exactly this (negative) valuation.
    NonIntegral { val: i64 },
}

/// Sum of c_i * param_i. All-rational combinations stay exact; any stream
/// forces materialization modulo p^(smallest horizon).
pub fn combine(p: u64, terms: &[(i64, &PadicParameter)]) -> Combination {
    let mut rational_sum = BigRational::zero();
    let mut min_horizon: Option<u32> = None;
    for (c, param) in terms {
        match param {
            PadicParameter::Rational(r) => {
                rational_sum += r * BigRational::from_integer(BigInt::from(*c));
            }
            PadicParameter::Stream(s) => {
                debug_assert_eq!(s.p, p);
                min_horizon = Some(match min_horizon {
                    Some(h) => h.min(s.horizon()),
                    None => s.horizon(),
                });
            }
        }
    }
    let horizon = match min_horizon {
        None => return Combination::Rational(rational_sum),
        Some(h) => h,
    };
    // Mixing a non-p-integral rational with streams: the exact rational part
    // alone determines the (negative) valuation.
    match vp_rational(p, &rational_sum) {
        Valuation::Finite(v) if v < num::rational::Ratio::zero() => {
            return Combination::NonIntegral {
                val: *v.numer(), // denominator is 1 for plain rationals
            };
        }
        _ => {}
    }
    // Materialize the exact rational part in one step (its sum is p-integral
    // even when individual terms are not), then add the stream residues.
    let m = BigUint::from(p).pow(horizon);
    let den = mod_reduce(rational_sum.denom(), &m);
    let den_inv = BigInt::from(mod_inverse(&den, &m).expect("sum checked p-integral"));
    let mut acc = rational_sum.numer() * den_inv;
    for (c, param) in terms {
        if let PadicParameter::Stream(s) = param {
            acc += BigInt::from(*c) * BigInt::from(s.value());
        }
    }
    let v = mod_reduce(&acc, &m);
    Combination::Stream(DigitStream::from_residue(p, v, horizon))
}

/// Digits of a p-integral rational modulo p^horizon.
pub fn rational_digits(p: u64, r: &BigRational, horizon: u32) -> Option<DigitStream> {
    if let Valuation::Finite(v) = vp_rational(p, r) {
        if v < num::rational::Ratio::zero() {
            return None;
        }
    }
    let m = BigUint::from(p).pow(horizon);
    let den = mod_reduce(r.denom(), &m);
    let den_inv = BigInt::from(mod_inverse(&den, &m)?);
    let v = mod_reduce(&(r.numer() * den_inv), &m);
    Some(DigitStream::from_residue(p, v, horizon))
}
