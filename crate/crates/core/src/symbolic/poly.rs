use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{JetVar, Rational};

/// A power product of jet coordinates, variables kept in ascending order.
///
/// Monomials compare in graded lexicographic order: total degree first,
/// then exponents starting from the largest variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(JetVar, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: JetVar) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: JetVar, e: u32) -> Self {
        let mut s = SmallVec::new();
        if e > 0 {
            s.push((v, e));
        }
        Monomial(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &JetVar) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(&v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes `v` entirely, returning the exponent it had.
    pub fn split_var(&self, v: &JetVar) -> (u32, Monomial) {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(i);
                (e, Monomial(rest))
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn max_order(&self) -> usize {
        self.0.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => {
                    let c = va.cmp(vb).then(ea.cmp(eb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients. Terms are kept sorted in
/// ascending monomial order with no zero coefficients, so the leading term
/// is the last one.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: JetVar) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.last()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .last()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> BTreeSet<JetVar> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn contains_var(&self, v: &JetVar) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: &JetVar) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(v))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.terms
            .iter()
            .map(|(m, _)| m.max_order())
            .max()
            .unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        // Multiplication by a monomial preserves the order.
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c * k))
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let flip = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), flip(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), flip(c))));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: &JetVar) -> Poly {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split_var(v);
            (e > 0).then(|| {
                (
                    rest.mul(&Monomial::power(*v, e - 1)),
                    c * Rational::from_integer(BigInt::from(e)),
                )
            })
        }))
    }

    /// Applies the derivation `Σ_v X^v ∂/∂v`, with `component(v)` giving `X^v`.
    pub fn derivation(&self, component: impl Fn(&JetVar) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for v in self.vars() {
            if let Some(x) = component(&v) {
                if !x.is_zero() {
                    out = out.add(&self.partial(&v).mul(&x));
                }
            }
        }
        out
    }

    /// Coefficients with respect to `v`, as `(exponent, coefficient)` pairs
    /// sorted by exponent; coefficients are free of `v`.
    pub fn coeffs_in(&self, v: &JetVar) -> Vec<(u32, Poly)> {
        let mut buckets: Vec<(u32, Vec<(Monomial, Rational)>)> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            match buckets.iter_mut().find(|(f, _)| *f == e) {
                Some((_, ts)) => ts.push((rest, c.clone())),
                None => buckets.push((e, vec![(rest, c.clone())])),
            }
        }
        let mut out: Vec<(u32, Poly)> = buckets
            .into_iter()
            .map(|(e, ts)| {
                let mut ts = ts;
                ts.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                (e, Poly { terms: ts })
            })
            .collect();
        out.sort_unstable_by_key(|(e, _)| *e);
        out
    }

    /// Leading coefficient with respect to `v` (a polynomial free of `v`).
    pub fn lead_coeff_in(&self, v: &JetVar) -> (u32, Poly) {
        self.coeffs_in(v).pop().unwrap_or((0, Poly::zero()))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().cloned().unwrap();
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let qm = rm.div(&lm)?;
            let qc = &rc * &lc_inv;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.push((qm, qc));
        }
        quot.reverse();
        Some(Poly { terms: quot })
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Scales to integer coefficients with unit content and positive leading
    /// coefficient. Returns the scaled polynomial and the factor applied.
    pub fn integer_primitive(&self) -> (Poly, Rational) {
        if self.is_zero() {
            return (Poly::zero(), Rational::one());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        // factor = den_lcm / num_gcd, with the sign of the leading coefficient.
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        (self.scale(&factor), factor)
    }

    /// Substitutes every variable except `keep` by the value `values(v)`
    /// modulo `p`, returning dense univariate coefficients in `keep`.
    /// `None` if a coefficient denominator vanishes modulo `p`.
    pub(crate) fn eval_mod_univariate(
        &self,
        keep: &JetVar,
        p: u64,
        values: &impl Fn(&JetVar) -> u64,
    ) -> Option<Vec<u64>> {
        let deg = self.degree_in(keep) as usize;
        let mut out = vec![0u64; deg + 1];
        let pb = BigInt::from(p);
        for (m, c) in &self.terms {
            let num = residue(c.numer(), &pb);
            let den = residue(c.denom(), &pb);
            if den == 0 {
                return None;
            }
            let mut t = mul_mod(num, inv_mod(den, p), p);
            let mut e_keep = 0;
            for (v, e) in m.factors() {
                if v == keep {
                    e_keep = *e as usize;
                } else {
                    t = mul_mod(t, pow_mod(values(v), *e as u64, p), p);
                }
            }
            out[e_keep] = (out[e_keep] + t) % p;
        }
        Some(out)
    }
}

fn residue(n: &BigInt, p: &BigInt) -> u64 {
    let r = n.mod_floor(p);
    u64::try_from(r).expect("residue fits in u64")
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;
    use crate::symbolic::int;

    fn v(alpha: usize, c: &[u16]) -> Poly {
        Poly::var(JetVar::new(alpha, MultiIndex::from_counts(c)))
    }

    #[test]
    fn ring_operations() {
        let x = v(1, &[1]);
        let y = v(2, &[1]);
        let s = x.add(&y);
        let sq = s.mul(&s);
        let expect = x
            .mul(&x)
            .add(&x.mul(&y).scale(&int(2)))
            .add(&y.mul(&y));
        assert_eq!(sq, expect);
        assert_eq!(s.pow(2), sq);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn exact_division() {
        let x = v(1, &[1]);
        let one = Poly::one();
        let num = x.mul(&x).sub(&one);
        let den = x.sub(&one);
        assert_eq!(num.div_exact(&den), Some(x.add(&one)));
        assert_eq!(x.div_exact(&den), None);
    }

    #[test]
    fn partial_and_coeffs() {
        let x = JetVar::new(1, MultiIndex::from_counts(&[1]));
        let px = Poly::var(x);
        let y = v(2, &[0]);
        let p = px.pow(3).mul(&y).add(&px);
        assert_eq!(
            p.partial(&x),
            px.pow(2).mul(&y).scale(&int(3)).add(&Poly::one())
        );
        let cs = p.coeffs_in(&x);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0], (1, Poly::one()));
        assert_eq!(cs[1], (3, y));
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::var(JetVar::new(1, MultiIndex::from_counts(&[2])));
        let b = Monomial::power(JetVar::new(1, MultiIndex::from_counts(&[0])), 2);
        assert!(a < b);
        assert!(Monomial::one() < a);
    }
}
