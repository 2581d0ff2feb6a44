//! Multivariate polynomial gcd over the rationals.
//!
//! Primitive pseudo-remainder sequences in a recursive representation, with
//! cheap shortcuts tried first: monomial content, exact division, variables
//! present in only one operand, and a modular coprimality test.

use std::hash::{Hash, Hasher};

use num_traits::One;

use super::poly::{inv_mod, mul_mod, Monomial, Poly};
use super::{JetVar, Rational};

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

/// Greatest common divisor, normalized to integer coefficients with unit
/// content and positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.integer_primitive().0;
    }
    if b.is_zero() {
        return a.integer_primitive().0;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    let core = gcd_core(&a, &b);
    core.mul_monomial(&mono, &Rational::one())
}

fn strip_monomial(p: &Poly, m: &Monomial) -> Poly {
    if m.is_one() {
        p.integer_primitive().0
    } else {
        Poly::from_terms(p.terms().iter().map(|(t, c)| (t.div(m).unwrap(), c.clone())))
            .integer_primitive()
            .0
    }
}

/// Gcd of two nonzero polynomials without common monomial factors.
fn gcd_core(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let a = a.integer_primitive().0;
    let b = b.integer_primitive().0;
    if a == b {
        return a;
    }
    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    if large.total_degree() >= small.total_degree() && large.div_exact(small).is_some() {
        return small.clone();
    }

    let va = a.vars();
    let vb = b.vars();
    // A variable occurring in only one operand can be eliminated by
    // replacing that operand with its content in the variable.
    if let Some(v) = va.difference(&vb).next() {
        return gcd_core(&content_in(&a, v), &b);
    }
    if let Some(v) = vb.difference(&va).next() {
        return gcd_core(&a, &content_in(&b, v));
    }

    let v = *va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has a variable");

    let ca = content_in(&a, &v);
    let cb = content_in(&b, &v);
    let g_cont = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");

    let g_prim = if modular_coprime(&pa, &pb, &v) {
        Poly::one()
    } else {
        primitive_prs(pa, pb, &v)
    };
    g_cont.mul(&g_prim).integer_primitive().0
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Poly, v: &JetVar) -> Poly {
    let coeffs = p.coeffs_in(v);
    let mut g = Poly::zero();
    // Start from the sparsest coefficient, it bounds the gcd fastest.
    let mut cs: Vec<Poly> = coeffs.into_iter().map(|(_, c)| c).collect();
    cs.sort_by_key(|c| c.len());
    for c in cs {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Primitive part of `p` with respect to `v`.
fn primitive_part(p: &Poly, v: &JetVar) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").integer_primitive().0
}

fn pseudo_remainder(a: &Poly, b: &Poly, v: &JetVar) -> Poly {
    let db = b.degree_in(v);
    let (_, lb) = b.lead_coeff_in(v);
    let mut r = a.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < db {
            return r;
        }
        let (_, lr) = r.lead_coeff_in(v);
        let shift = Monomial::power(*v, dr - db);
        r = r
            .mul(&lb)
            .sub(&lr.mul(b).mul_monomial(&shift, &Rational::one()));
    }
}

/// Gcd of two polynomials primitive in `v`.
fn primitive_prs(a: Poly, b: Poly, v: &JetVar) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

fn sample_value(v: &JetVar, salt: u64) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    v.hash(&mut h);
    salt.hash(&mut h);
    let x = h.finish() % PRIME;
    x.max(2)
}

/// Returns true when the images of `a` and `b` at a pseudo-random point
/// (all variables except `v`) have a constant univariate gcd and the leading
/// coefficients survive. In that case no nonconstant factor in `v` is shared.
fn modular_coprime(a: &Poly, b: &Poly, v: &JetVar) -> bool {
    let values = |w: &JetVar| sample_value(w, 0x5eed);
    let (Some(ua), Some(ub)) = (
        a.eval_mod_univariate(v, PRIME, &values),
        b.eval_mod_univariate(v, PRIME, &values),
    ) else {
        return false;
    };
    if ua.last() == Some(&0) || ub.last() == Some(&0) {
        return false;
    }
    univariate_gcd_degree(trim(ua), trim(ub)) == 0
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let p = PRIME;
    let is_zero = |x: &Vec<u64>| x.iter().all(|&c| c == 0);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !is_zero(&b) {
        // a <- a mod b
        let lb_inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() && !is_zero(&a) {
            let la = *a.last().unwrap();
            let q = mul_mod(la, lb_inv, p);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                let t = mul_mod(q, bc, p);
                a[i + shift] = (a[i + shift] + p - t) % p;
            }
            a.pop();
            a = trim(a);
            if a.len() == 1 && a[0] == 0 {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
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
    fn common_factor_recovered() {
        let x = v(1, &[1]);
        let y = v(2, &[1]);
        let z = v(1, &[2]);
        let f = x.mul(&z).sub(&y.mul(&y)); // shared factor
        let a = f.mul(&x.add(&Poly::one()));
        let b = f.mul(&y.sub(&z)).mul(&x);
        let g = gcd(&a, &b);
        assert_eq!(g, f.integer_primitive().0);
    }

    #[test]
    fn coprime_and_monomial_cases() {
        let x = v(1, &[1]);
        let y = v(2, &[1]);
        assert!(gcd(&x.add(&y), &x.sub(&y)).is_one());
        let a = x.pow(3).mul(&y);
        let b = x.pow(2).mul(&y.pow(4));
        assert_eq!(gcd(&a, &b), x.pow(2).mul(&y));
        assert_eq!(gcd(&x.scale(&int(6)), &Poly::zero()), x);
    }

    #[test]
    fn gcd_with_powers() {
        let x = v(1, &[1]);
        let y = v(1, &[0]);
        let f = x.add(&y.scale(&int(3)));
        let a = f.pow(3).mul(&y.sub(&Poly::one()));
        let b = f.pow(2).mul(&x.sub(&Poly::one()));
        assert_eq!(gcd(&a, &b), f.pow(2));
    }
}
