//! Exact multivariate rational functions in the jet coordinates `u^α_I`.

mod gcd;
mod parse;
mod poly;
mod ratexpr;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::multiindex::MultiIndex;

pub use gcd::gcd;
pub use parse::{parse_expr, ExprContext};
pub(crate) use parse::{line_col, parse_expr_at};
pub use poly::{Monomial, Poly};
pub use ratexpr::RatExpr;

/// The exact scalar field.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The jet coordinate `u^alpha_I`. `alpha` is 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct JetVar {
    pub alpha: u16,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(alpha: usize, index: MultiIndex) -> Self {
        assert!(alpha >= 1, "dependent-variable index is 1-based");
        JetVar {
            alpha: alpha as u16,
            index,
        }
    }

    pub fn order(&self) -> usize {
        self.index.len()
    }

    pub fn alpha(&self) -> usize {
        self.alpha as usize
    }
}

// Graded-lex on the multi-index first, dependent index second.
impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index
            .cmp(&other.index)
            .then(self.alpha.cmp(&other.alpha))
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u[{};", self.alpha)?;
        for (s, c) in self.index.counts().iter().enumerate() {
            if s > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
