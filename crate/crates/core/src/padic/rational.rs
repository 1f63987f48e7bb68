//! Exact number-theory helpers over big integers and rationals.

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};

use super::valuation::Valuation;

/// Deterministic primality test by trial division (parameters here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// v_p of a nonzero big integer; `None` for zero.
pub fn vp_bigint(p: u64, n: &BigInt) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return Some(v);
        }
    }
}

/// Exact v_p of a rational.
pub fn vp_rational(p: u64, r: &BigRational) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let vn = vp_bigint(p, r.numer()).expect("nonzero numer");
    let vd = vp_bigint(p, r.denom()).expect("nonzero denom");
    Valuation::from_int(vn - vd)
}

/// Strip all factors of p from a nonzero integer: returns (v, n / p^v).
pub fn strip_p(p: u64, n: &BigInt) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if r.is_zero() && !m.is_zero() {
            v += 1;
            m = q;
        } else {
            return (v, m);
        }
    }
}

/// Largest w with p^w <= x, for x >= 1.
pub fn floor_log(p: u64, x: &BigUint) -> u32 {
    debug_assert!(!x.is_zero());
    let p = BigUint::from(p);
    let mut w = 0u32;
    let mut acc = p.clone();
    while acc <= *x {
        acc *= &p;
        w += 1;
    }
    w
}

/// Smallest w with p^w >= x, for x >= 1.
pub fn ceil_log(p: u64, x: &BigUint) -> u32 {
    debug_assert!(!x.is_zero());
    if x.is_one() {
        return 0;
    }
    let p_big = BigUint::from(p);
    let mut w = 1u32;
    let mut acc = p_big.clone();
    while acc < *x {
        acc *= &p_big;
        w += 1;
    }
    w
}

/// v_p(M!) by Legendre's formula: sum of floor(M / p^i).
pub fn legendre_factorial_vp(p: u64, m: u64) -> u64 {
    let mut total = 0u64;
    let mut q = m / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Parse "a/b" or "a" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| format!("invalid integer {num_s:?}"))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| format!("invalid integer {den_s:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical "a/b" (or "a" for integers) form.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Generalized binomial coefficient C(n, k) for n in Z, k >= 0 (always an integer).
pub fn binomial_int(n: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= BigInt::from(n - i);
        acc = acc / BigInt::from(i + 1); // exact: partial products of C are integers
    }
    acc
}

/// Binomial coefficient for non-negative arguments.
pub fn binomial_uint(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    binomial_int(n as i64, k.min(n - k) as u32)
}

/// n! as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as i64 {
        acc *= BigInt::from(i);
    }
    acc
}

/// Inverse of `a` modulo `m` (m > 1, gcd(a, m) = 1) by extended Euclid.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m_int = BigInt::from(m.clone());
    let (mut r0, mut r1) = (m_int.clone(), a.mod_floor(&m_int));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if !r0.is_one() {
        return None;
    }
    let t = t0.mod_floor(&m_int);
    match t.to_biguint() {
        Some(u) => Some(u),
        None => unreachable!("mod_floor of positive modulus is non-negative"),
    }
}

/// Reduce a big integer into [0, m).
pub fn mod_reduce(n: &BigInt, m: &BigUint) -> BigUint {
    let m_int = BigInt::from(m.clone());
    let r = n.mod_floor(&m_int);
    r.to_biguint().expect("mod_floor is non-negative")
}

/// Sign of a big integer as -1, 0, 1.
pub fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// (-1)^n as i64.
pub fn neg_one_pow(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// |r| <= bound check helper for fuzzing ranges.
pub fn rational_abs_le(r: &BigRational, bound: i64) -> bool {
    r.abs() <= BigRational::from_integer(BigInt::from(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    #[test]
    fn vp_of_known_values() {
        // v_3(-1/2) = 0 and v_3(-9/2) = 2
        let p = 3;
        let a = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(vp_rational(p, &a), Valuation::from_int(0));
        let b = BigRational::new(BigInt::from(-9), BigInt::from(2));
        assert_eq!(vp_rational(p, &b), Valuation::from_int(2));
        assert_eq!(vp_rational(p, &BigRational::zero()), Valuation::Infinite);
    }

    #[test]
    fn legendre_small() {
        // v_3(9!) = 4
        assert_eq!(legendre_factorial_vp(3, 9), 4);
        assert_eq!(legendre_factorial_vp(2, 10), 8);
        assert_eq!(legendre_factorial_vp(5, 4), 0);
    }

    #[test]
    fn binomial_negative_upper() {
        assert_eq!(binomial_int(-1, 3), BigInt::from(-1));
        assert_eq!(binomial_int(-2, 2), BigInt::from(3));
        assert_eq!(binomial_int(4, 2), BigInt::from(6));
        assert_eq!(binomial_int(2, 5), BigInt::zero());
    }

    #[test]
    fn mod_inverse_roundtrip() {
        let m = BigUint::from(3u32).pow(20);
        let a = BigUint::from_u64(123456).unwrap() + BigUint::from(1u32); // coprime to 3
        let inv = mod_inverse(&a, &m).unwrap();
        assert_eq!((a * inv) % &m, BigUint::from(1u32));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(fmt_rational(&parse_rational("-3/6").unwrap()), "-1/2");
        assert_eq!(fmt_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn logs() {
        assert_eq!(floor_log(3, &BigUint::from(82u32)), 4);
        assert_eq!(ceil_log(3, &BigUint::from(82u32)), 5);
        assert_eq!(ceil_log(3, &BigUint::from(81u32)), 4);
        assert_eq!(floor_log(2, &BigUint::from(1u32)), 0);
    }
}
