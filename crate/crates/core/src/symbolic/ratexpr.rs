use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use super::{gcd, JetVar, Poly, Rational};
use crate::error::{Error, Result};

/// A rational function `num / den` kept in canonical form: the two parts
/// share no nonconstant factor and `den` is monic in the monomial order.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatExpr {
    num: Poly,
    den: Poly,
}

impl Default for RatExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(super::int(n))
    }

    pub fn var(v: JetVar) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatExpr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::make_monic(num, den)
    }

    fn make_monic(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatExpr { num, den }
        } else {
            let inv = lc.recip();
            RatExpr {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn max_order(&self) -> usize {
        self.num.max_order().max(self.den.max_order())
    }

    pub fn vars(&self) -> BTreeSet<JetVar> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn neg(&self) -> Self {
        RatExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        RatExpr {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        // a/b + c/d with g = gcd(b, d): the sum is (a d' + c b') / (b' d) and
        // any common factor of the new numerator with it divides g.
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return Self::make_monic(num, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            Self::make_monic(num, b1.mul(&other.den))
        } else {
            let num = num.div_exact(&h).expect("gcd divides");
            let g_h = g.div_exact(&h).expect("gcd divides");
            Self::make_monic(num, b1.mul(&d1).mul(&g_h))
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::make_monic(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::make_monic(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        // Powers of a reduced fraction stay reduced.
        Ok(Self::make_monic(base.num.pow(e), base.den.pow(e)))
    }

    pub fn partial(&self, v: &JetVar) -> Self {
        let dn = self.num.partial(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // (n'/d) - (n d'/d^2)
        let a = Self::reduce(dn, self.den.clone());
        let b = Self::reduce(self.num.mul(&dd), self.den.mul(&self.den));
        a.sub(&b)
    }

    /// Applies the derivation `Σ_v X^v ∂/∂v` over the variables present.
    pub fn derivation(&self, component: impl Fn(&JetVar) -> Option<RatExpr>) -> Self {
        let mut out = Self::zero();
        for v in self.vars() {
            if let Some(x) = component(&v) {
                if !x.is_zero() {
                    out = out.add(&self.partial(&v).mul(&x));
                }
            }
        }
        out
    }

    /// Structural equality of canonical forms, i.e. exact equality.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval(&self, at: &impl Fn(&JetVar) -> Rational) -> Option<Rational> {
        let d = eval_poly(&self.den, at);
        if d.is_zero() {
            return None;
        }
        Some(eval_poly(&self.num, at) / d)
    }
}

fn eval_poly(p: &Poly, at: &impl Fn(&JetVar) -> Rational) -> Rational {
    let mut acc = Rational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in m.factors() {
            t *= num_traits::pow(at(v), *e as usize);
        }
        acc += t;
    }
    acc
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Poly> for RatExpr {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<JetVar> for RatExpr {
    fn from(v: JetVar) -> Self {
        Self::var(v)
    }
}

impl From<i64> for RatExpr {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl std::ops::Add for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::add(self, rhs)
    }
}

impl std::ops::Sub for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::sub(self, rhs)
    }
}

impl std::ops::Mul for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::mul(self, rhs)
    }
}

impl std::ops::Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;
    use crate::symbolic::int;

    fn x(alpha: usize, c: &[u16]) -> RatExpr {
        RatExpr::var(JetVar::new(alpha, MultiIndex::from_counts(c)))
    }

    #[test]
    fn cancellation() {
        let a = x(1, &[1]);
        let one = RatExpr::one();
        let num = a.mul(&a).sub(&one);
        let q = num.div(&a.sub(&one)).unwrap();
        assert_eq!(q, a.add(&one));
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(x(1, &[1]).div(&RatExpr::zero()), Err(Error::DivisionByZero));
        assert_eq!(RatExpr::zero().recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn quotient_rule() {
        let v1 = JetVar::new(1, MultiIndex::from_counts(&[1]));
        let v2 = JetVar::new(2, MultiIndex::from_counts(&[1]));
        let a = RatExpr::var(v1);
        let b = RatExpr::var(v2);
        let l = a.mul(&a).div(&b).unwrap();
        let expect = a.mul(&a).div(&b.mul(&b)).unwrap().neg();
        assert_eq!(l.partial(&v2), expect);
        assert_eq!(a.mul(&b).partial(&v1), b);
        assert!(RatExpr::integer(5).partial(&v1).is_zero());
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let a = x(1, &[1]);
        let e = a.div(&a.scale(&int(-3)).add(&RatExpr::one())).unwrap();
        assert!(e.den().leading_coeff().is_one());
        let one_over = RatExpr::one().div(&a).unwrap();
        assert_eq!(one_over, a.div(&a.mul(&a)).unwrap());
    }

    #[test]
    fn max_order_examples() {
        assert_eq!(RatExpr::integer(5).max_order(), 0);
        assert_eq!(x(1, &[1, 0]).mul(&x(2, &[0, 1])).max_order(), 1);
        let e = x(1, &[1])
            .mul(&x(2, &[2]))
            .sub(&x(2, &[1]).mul(&x(1, &[2])))
            .div(&x(1, &[1]))
            .unwrap();
        assert_eq!(e.max_order(), 2);
    }
}
