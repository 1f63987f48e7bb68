//! Valuation bookkeeping: exact values, lower bounds, and three-valued zero tests.

use num::rational::Ratio;
use std::cmp::Ordering;
use std::fmt;

/// Additive p-adic valuation normalized so that v(p) = 1.
///
/// Scalars in Q_p(pi) take values in (1/(p-1))*Z; `Infinite` is the valuation of 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite,
}

impl Valuation {
    pub fn from_int(v: i64) -> Self {
        Valuation::Finite(Ratio::from_integer(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    pub fn shift(&self, by: Ratio<i64>) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Multiplicative norm |x| = p^{-v(x)}.
    pub fn norm(&self, p: u64) -> f64 {
        match self {
            Valuation::Finite(v) => {
                let exp = (*v.numer() as f64) / (*v.denom() as f64);
                (p as f64).powf(-exp)
            }
            Valuation::Infinite => 0.0,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => {
                if v.denom() == &1 {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Knowledge about a valuation after possibly inexact arithmetic.
///
/// `Exactly` carries a provably exact value; `AtLeast(b)` records that every
/// tracked digit cancelled, so only the lower bound b is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValBound {
    Exactly(Valuation),
    AtLeast(Ratio<i64>),
}

impl ValBound {
    pub fn lower(&self) -> Valuation {
        match self {
            ValBound::Exactly(v) => *v,
            ValBound::AtLeast(b) => Valuation::Finite(*b),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ValBound::Exactly(_))
    }

    /// Knowledge about min(v1, v2) given knowledge about v1 and v2.
    pub fn min_of(&self, other: &ValBound) -> ValBound {
        match (self, other) {
            (ValBound::Exactly(a), ValBound::Exactly(b)) => ValBound::Exactly(*a.min(b)),
            (ValBound::Exactly(e), ValBound::AtLeast(b))
            | (ValBound::AtLeast(b), ValBound::Exactly(e)) => {
                match e {
                    // The bounded value is >= b; if the exact one is <= b it wins.
                    Valuation::Finite(ev) if ev <= b => ValBound::Exactly(*e),
                    _ => ValBound::AtLeast(*b),
                }
            }
            (ValBound::AtLeast(a), ValBound::AtLeast(b)) => ValBound::AtLeast(*a.min(b)),
        }
    }

    pub fn shift(&self, by: Ratio<i64>) -> ValBound {
        match self {
            ValBound::Exactly(v) => ValBound::Exactly(v.shift(by)),
            ValBound::AtLeast(b) => ValBound::AtLeast(b + by),
        }
    }
}

impl fmt::Display for ValBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValBound::Exactly(v) => write!(f, "{v}"),
            ValBound::AtLeast(b) => {
                write!(f, ">={}", Valuation::Finite(*b))
            }
        }
    }
}

/// Three-valued zero test for scalars at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zeroness {
    Zero,
    NonZero,
    /// All tracked digits vanish but the value is not provably zero.
    Indeterminate,
}

/// Three-valued answer for predicates on parameters (e.g. integrality of a
/// digit stream, decidable only up to its horizon).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}
