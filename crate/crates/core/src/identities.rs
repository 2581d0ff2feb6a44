//! Exact coefficient identities behind the recovery formula, each evaluated
//! by brute-force summation and compared against its closed form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::multiindex::{factorial, MultiIndex};
use crate::symbolic::Rational;

fn fact(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(factorial(n)))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn pow2(e: usize) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

/// One brute-force versus closed-form comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub parameters: Vec<(String, i64)>,
    pub brute: Rational,
    pub closed: Rational,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: &str, parameters: &[(&str, i64)], brute: Rational, closed: Rational) -> Self {
        IdentityReport {
            name: name.to_string(),
            parameters: parameters
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            pass: brute == closed,
            brute,
            closed,
        }
    }

    pub fn parameter_text(&self) -> String {
        self.parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        json!({
            "name": self.name,
            "parameters": params,
            "brute": self.brute.to_string(),
            "closed": self.closed.to_string(),
            "pass": self.pass,
        })
    }
}

/// `C_{I,M,i,j}`, the coefficient in the formula for `d^I_i ϑ^j`.
pub fn coeff_c(index: &MultiIndex, mm: &MultiIndex, i: usize, j: usize) -> Rational {
    let a = index.len();
    let b = mm.len();
    assert!(a >= 1, "C_{{I,M,i,j}} needs |I| ≥ 1");
    let den = fact(a + b + 1);
    let sa = sign(a);
    let first = (fact(a) * fact(b) + &sa * fact(a + b - 1)) / &den;
    let second = (fact(a - 1) * fact(b + 1) - &sa * fact(a + b - 1)) / &den;
    let third = (fact(a) * fact(b) - &sa * fact(a + b)) / &den;
    let mut c = int(mm.at(i) as i64) * first - int(index.at(i) as i64) * second;
    if i == j {
        c += third;
    }
    c
}

/// `F_{a,b} = (a! b! + (-1)^a (a+b)!) / (a+b+1)!`.
pub fn coeff_f(a: usize, b: usize) -> Rational {
    (fact(a) * fact(b) + sign(a) * fact(a + b)) / fact(a + b + 1)
}

/// `G_{a,q}`, the binomial coefficient `a! / (q! (a-q)!)`.
pub fn coeff_g(a: usize, q: usize) -> Rational {
    assert!(q <= a, "G_{{a,q}} needs q ≤ a");
    fact(a) / (fact(q) * fact(a - q))
}

/// `λ_p = (-1)^p p! / (2^{p+1} (p+2)!)`.
pub fn lambda(p: usize) -> Rational {
    sign(p) * fact(p) / (pow2(p + 1) * fact(p + 2))
}

/// `Σ_j (C_{K+1_i,M,j,j} - C_{K+1_j,M,j,i})` against `(m-1) F_{|K|,|M|}`,
/// with `m` taken from the dimension of `K`.
pub fn c_difference_check(k: &MultiIndex, mm: &MultiIndex, i: usize) -> IdentityReport {
    let m = k.dim();
    assert_eq!(mm.dim(), m, "K and M must have the same dimension");
    let mut brute = Rational::zero();
    for j in 1..=m {
        brute += coeff_c(&k.increment(i), mm, j, j) - coeff_c(&k.increment(j), mm, j, i);
    }
    let closed = int(m as i64 - 1) * coeff_f(k.len(), mm.len());
    IdentityReport::new(
        "C-difference",
        &[
            ("m", m as i64),
            ("|K|", k.len() as i64),
            ("|M|", mm.len() as i64),
            ("i", i as i64),
        ],
        brute,
        closed,
    )
}

/// The triple sum defining `H_q`.
pub fn h_brute(q: usize) -> Rational {
    let mut t = Rational::zero();
    for p in 0..=q {
        for s in 0..=p {
            for r in 0..=p - s {
                let c = sign(r + q - p) * fact(q) / (fact(s) * fact(p - s) * fact(q - p));
                t += lambda(p) * c * coeff_f(s, r + q - p) * coeff_g(p - s, r);
            }
        }
    }
    t
}

/// `H_q = (-1)^q/(2(q+2)) + (-1)^q (2^{q+1} - 1) q! / (2^{q+1} (q+2)!)`.
pub fn h_closed(q: usize) -> Rational {
    a_closed(q) + b_closed(q)
}

pub fn a_closed(q: usize) -> Rational {
    sign(q) / int(2 * (q as i64 + 2))
}

pub fn b_closed(q: usize) -> Rational {
    sign(q) * (pow2(q + 1) - int(1)) * fact(q) / (pow2(q + 1) * fact(q + 2))
}

/// The part of the `H_q` sum coming from the first term of `F`.
pub fn a_brute(q: usize) -> Rational {
    let mut t = Rational::zero();
    for p in 0..=q {
        for s in 0..=p {
            for r in 0..=p - s {
                let num = sign(q + r) * fact(p) * fact(q) * fact(r + q - p);
                let den = pow2(p + 1)
                    * fact(p + 2)
                    * fact(r)
                    * fact(q - p)
                    * fact(p - s - r)
                    * fact(q + 1 - (p - s - r));
                t += num / den;
            }
        }
    }
    t
}

/// The part of the `H_q` sum coming from the second term of `F`.
pub fn b_brute(q: usize) -> Rational {
    let mut t = Rational::zero();
    for p in 0..=q {
        for s in 0..=p {
            for r in 0..=p - s {
                let num = sign(r + q + s) * fact(p) * fact(q);
                let den = pow2(p + 1)
                    * fact(r)
                    * fact(s)
                    * fact(p + 2)
                    * fact(q - p)
                    * fact(p - s - r)
                    * int((s + r + q - p + 1) as i64);
                t += num / den;
            }
        }
    }
    t
}

/// `Σ_{p=0}^r p!/(p+2)! = (r+1)/(r+2)`.
pub fn partial_fraction_sum(r: usize) -> IdentityReport {
    let brute = (0..=r).fold(Rational::zero(), |acc, p| acc + fact(p) / fact(p + 2));
    let closed = int(r as i64 + 1) / int(r as i64 + 2);
    IdentityReport::new("partial-fraction", &[("r", r as i64)], brute, closed)
}

/// `Σ_{s=0}^{p-r} 1/((p-r-s)! s!) = 2^{p-r}/(p-r)!`.
pub fn binomial_sum(p: usize, r: usize) -> IdentityReport {
    assert!(r <= p);
    let brute = (0..=p - r).fold(Rational::zero(), |acc, s| {
        acc + Rational::one() / (fact(p - r - s) * fact(s))
    });
    let closed = pow2(p - r) / fact(p - r);
    IdentityReport::new("binomial", &[("p", p as i64), ("r", r as i64)], brute, closed)
}

/// `Σ_{p=0}^{q-r} (-1)^p (p+r)!/((p+r+2)! p! (q-r-p)!) = (q-r+1) r!/(q+2)!`.
pub fn beta_sum(q: usize, r: usize) -> IdentityReport {
    assert!(r <= q);
    let brute = (0..=q - r).fold(Rational::zero(), |acc, p| {
        acc + sign(p) * fact(p + r) / (fact(p + r + 2) * fact(p) * fact(q - r - p))
    });
    let closed = int((q - r + 1) as i64) * fact(r) / fact(q + 2);
    IdentityReport::new("beta", &[("q", q as i64), ("r", r as i64)], brute, closed)
}

/// Dense univariate polynomial, lowest degree first.
type Univariate = Vec<Rational>;

fn binomial_power(e: usize, scale: &Rational) -> Univariate {
    (0..=e)
        .map(|i| scale * fact(e) / (fact(i) * fact(e - i)))
        .collect()
}

/// Divides by `2 + x`, failing on a nonzero remainder.
fn divide_by_two_plus_x(p: &Univariate) -> Result<Univariate> {
    let mut rem = p.clone();
    if rem.len() < 2 {
        return if rem.iter().all(|c| c.is_zero()) {
            Ok(Vec::new())
        } else {
            Err(Error::NonDivisible("constant is not a multiple of 2 + x".into()))
        };
    }
    let mut quo = vec![Rational::zero(); rem.len() - 1];
    for d in (1..rem.len()).rev() {
        let c = rem[d].clone();
        rem[d - 1] -= int(2) * &c;
        rem[d] = Rational::zero();
        quo[d - 1] = c;
    }
    if !rem[0].is_zero() {
        return Err(Error::NonDivisible(format!("remainder {}", rem[0])));
    }
    Ok(quo)
}

/// Divides `(1+x)^{q-p} + (-1)^{p-s}(1+x)^{q-s+1}` by `2 + x` and compares
/// the coefficient of `x^{q-p}` in the quotient with
/// `Σ_{r=0}^{p-s} (-1)^r 2^{p-r-s} (q+1-s)!/((q+1-r-s)! r!)`.
pub fn b_coefficient_check(q: usize, p: usize, s: usize) -> Result<IdentityReport> {
    assert!(s <= p && p <= q);
    let a = binomial_power(q - p, &Rational::one());
    let b = binomial_power(q - s + 1, &sign(p - s));
    let n = a.len().max(b.len());
    let sum: Univariate = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rational::zero)
                + b.get(i).cloned().unwrap_or_else(Rational::zero)
        })
        .collect();
    let quo = divide_by_two_plus_x(&sum)?;
    let brute = quo.get(q - p).cloned().unwrap_or_else(Rational::zero);
    let closed = (0..=p - s).fold(Rational::zero(), |acc, r| {
        acc + sign(r) * pow2(p - r - s) * fact(q + 1 - s) / (fact(q + 1 - r - s) * fact(r))
    });
    Ok(IdentityReport::new(
        "b-coefficient",
        &[("q", q as i64), ("p", p as i64), ("s", s as i64)],
        brute,
        closed,
    ))
}

/// Rows comparing `H_q`, its split into `A` and `B`, and their closed forms.
pub fn h_rows(max_q: usize) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for q in 0..=max_q {
        let qp = [("q", q as i64)];
        let (h, a, b) = (h_brute(q), a_brute(q), b_brute(q));
        out.push(IdentityReport::new("H", &qp, h.clone(), h_closed(q)));
        out.push(IdentityReport::new("H=A+B", &qp, a.clone() + b.clone(), h));
        out.push(IdentityReport::new("A", &qp, a, a_closed(q)));
        out.push(IdentityReport::new("B", &qp, b, b_closed(q)));
    }
    out
}

/// The full identity sweep up to `max_q` (the b-coefficient sweep stops two
/// below, at `max_q - 2`, and the C-difference sweep covers lengths up to 4
/// for `m ∈ {2, 3}`).
pub fn identity_sweep(max_q: usize) -> Result<Vec<IdentityReport>> {
    let mut out = h_rows(max_q);
    for r in 0..=max_q {
        out.push(partial_fraction_sum(r));
    }
    for p in 0..=max_q {
        for r in 0..=p {
            out.push(binomial_sum(p, r));
        }
    }
    for q in 0..=max_q {
        for r in 0..=q {
            out.push(beta_sum(q, r));
        }
    }
    for q in 0..=max_q.saturating_sub(2) {
        for p in 0..=q {
            for s in 0..=p {
                out.push(b_coefficient_check(q, p, s)?);
            }
        }
    }
    out.extend(c_difference_sweep(&[2, 3], 4));
    Ok(out)
}

/// `C_difference_check` over all `K`, `M` with lengths up to `max_len`.
pub fn c_difference_sweep(dims: &[usize], max_len: usize) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for &m in dims {
        let all = MultiIndex::enumerate_up_to(m, max_len);
        for k in &all {
            for mm in &all {
                for i in 1..=m {
                    out.push(c_difference_check(k, mm, i));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn mi(c: &[u16]) -> MultiIndex {
        MultiIndex::from_counts(c)
    }

    #[test]
    fn c_examples() {
        assert_eq!(coeff_c(&mi(&[1]), &mi(&[0]), 1, 1), rat(0, 1));
        assert_eq!(coeff_c(&mi(&[1, 0]), &mi(&[0, 1]), 1, 2), rat(-1, 2));
        assert_eq!(coeff_c(&mi(&[1]), &mi(&[1]), 1, 1), rat(0, 1));
    }

    #[test]
    fn small_coefficients() {
        assert_eq!(coeff_f(0, 0), rat(2, 1));
        assert_eq!(coeff_f(1, 1), rat(-1, 6));
        assert_eq!(coeff_g(3, 1), rat(3, 1));
        assert_eq!(lambda(0), rat(1, 4));
        assert_eq!(lambda(1), rat(-1, 24));
    }

    #[test]
    fn h_values() {
        assert_eq!(h_brute(0), rat(1, 2));
        assert_eq!(h_closed(0), rat(1, 2));
        assert_eq!(b_brute(1), rat(-1, 8));
        assert_eq!(b_closed(1), rat(-1, 8));
    }

    #[test]
    fn auxiliary_examples() {
        let pf = partial_fraction_sum(1);
        assert_eq!(pf.brute, rat(2, 3));
        assert!(pf.pass);
        let bs = binomial_sum(3, 1);
        assert_eq!(bs.closed, rat(2, 1));
        assert!(bs.pass);
        assert!(beta_sum(4, 4).pass);
        let b0 = b_coefficient_check(0, 0, 0).unwrap();
        assert_eq!(b0.brute, rat(1, 1));
        assert!(b0.pass);
        assert!(b_coefficient_check(1, 1, 0).unwrap().pass);
        assert!(b_coefficient_check(2, 1, 1).unwrap().pass);
    }

    #[test]
    fn c_difference_examples() {
        let r = c_difference_check(&mi(&[0, 0]), &mi(&[0, 0]), 1);
        assert!(r.pass);
        assert_eq!(r.closed, rat(2, 1));
        let r1 = c_difference_check(&mi(&[2]), &mi(&[1]), 1);
        assert!(r1.pass);
        assert_eq!(r1.closed, rat(0, 1));
        assert!(c_difference_check(&mi(&[1, 0]), &mi(&[0, 1]), 2).pass);
    }

    #[test]
    fn division_detects_remainder() {
        assert!(matches!(
            divide_by_two_plus_x(&vec![rat(1, 1), rat(1, 1)]),
            Err(Error::NonDivisible(_))
        ));
        assert_eq!(
            divide_by_two_plus_x(&vec![rat(2, 1), rat(1, 1)]).unwrap(),
            vec![rat(1, 1)]
        );
    }
}
