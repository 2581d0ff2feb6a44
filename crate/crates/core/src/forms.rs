//! Scalar differential forms over the jet coordinates and the operators of
//! the total-derivative calculus acting on them.
//!
//! Conventions. `T_j = Σ u^α_{I+1_j} ∂/∂u^α_I`. The vertical endomorphism acts
//! on basis covectors by `S^i du^α_K = K(i) du^α_{K-1_i}` (dual to
//! `∂/∂u^α_K ↦ (K(i)+1) ∂/∂u^α_{K+1_i}`), so that `Δ^I_j = S^I(T_j)` has
//! component `(L!/(L-I)!) u^α_{L-I+1_j}` along `∂/∂u^α_L`. Interior products
//! insert into the first slot.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::symbolic::{parse_expr, ExprContext, JetVar, Poly, RatExpr, Rational};

/// The basis 1-form `du^alpha_I`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Covector(pub JetVar);

impl Covector {
    pub fn new(alpha: usize, index: MultiIndex) -> Self {
        Covector(JetVar::new(alpha, index))
    }

    pub fn var(&self) -> JetVar {
        self.0
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }
}

// Order first, then dependent index, then the multi-index.
impl Ord for Covector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = (&self.0, &other.0);
        a.order()
            .cmp(&b.order())
            .then(a.alpha.cmp(&b.alpha))
            .then(a.index.cmp(&b.index))
    }
}

impl PartialOrd for Covector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d({})", self.0)
    }
}

impl fmt::Debug for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type Basis = SmallVec<[Covector; 4]>;

/// Sorts a covector tuple, returning the permutation sign, or `None` when a
/// factor repeats.
fn canonical(mut t: Basis) -> Option<(bool, Basis)> {
    let mut negative = false;
    // insertion sort, counting transpositions
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((negative, t))
}

/// A vector field `Σ X^α_I ∂/∂u^α_I` with explicitly listed components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField {
    components: BTreeMap<JetVar, RatExpr>,
}

impl VectorField {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: JetVar, x: RatExpr) {
        if x.is_zero() {
            self.components.remove(&v);
        } else {
            self.components.insert(v, x);
        }
    }

    pub fn component(&self, v: &JetVar) -> Option<&RatExpr> {
        self.components.get(v)
    }

    pub fn components(&self) -> impl Iterator<Item = (&JetVar, &RatExpr)> {
        self.components.iter()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// `T_j` truncated to coordinates of order at most `cap`, for `n` dependent
/// variables over `m` slots.
pub fn total_derivative_field(m: usize, n: usize, j: usize, cap: usize) -> VectorField {
    let mut x = VectorField::new();
    for index in MultiIndex::enumerate_up_to(m, cap) {
        for alpha in 1..=n {
            x.set(
                JetVar::new(alpha, index),
                RatExpr::var(JetVar::new(alpha, index.increment(j))),
            );
        }
    }
    x
}

/// `Δ^I_j = S^I(T_j)` with `T_j` truncated at order `cap`: components along
/// `∂/∂u^α_{K+I}` for `|K| ≤ cap`.
pub fn delta_field(m: usize, n: usize, index: &MultiIndex, j: usize, cap: usize) -> VectorField {
    let mut x = VectorField::new();
    for k in MultiIndex::enumerate_up_to(m, cap) {
        let target = k.add(index);
        let w = target.falling_factorial(index);
        for alpha in 1..=n {
            x.set(
                JetVar::new(alpha, target),
                RatExpr::var(JetVar::new(alpha, k.increment(j))).scale(&Rational::from(BigInt::from(w))),
            );
        }
    }
    x
}

/// A vector field acting on forms: either one of the infinite total-derivative
/// families, evaluated lazily on whatever coordinates occur, or an explicit one.
#[derive(Clone, Copy, Debug)]
pub enum Field<'a> {
    Total(usize),
    Delta(MultiIndex, usize),
    Explicit(&'a VectorField),
}

enum Component {
    Scaled(Rational, JetVar),
    Expr(RatExpr),
}

impl Field<'_> {
    fn component(&self, v: &JetVar) -> Option<Component> {
        match self {
            Field::Total(j) => Some(Component::Scaled(
                Rational::one(),
                JetVar::new(v.alpha(), v.index.increment(*j)),
            )),
            Field::Delta(index, j) => {
                let w = v.index.falling_factorial(index);
                if w == 0 {
                    return None;
                }
                let base = v.index.checked_sub(index)?;
                Some(Component::Scaled(
                    Rational::from(BigInt::from(w)),
                    JetVar::new(v.alpha(), base.increment(*j)),
                ))
            }
            Field::Explicit(x) => x.component(v).cloned().map(Component::Expr),
        }
    }

    fn is_polynomial(&self) -> bool {
        !matches!(self, Field::Explicit(_))
    }

    /// The field applied to a function.
    pub fn apply(&self, f: &RatExpr) -> RatExpr {
        if self.is_polynomial() {
            f.apply_poly_derivation(|v| match self.component(v) {
                Some(Component::Scaled(c, w)) => Some(Poly::var(w).scale(&c)),
                _ => None,
            })
        } else {
            f.derivation(|v| match self.component(v) {
                Some(Component::Expr(e)) => Some(e),
                _ => None,
            })
        }
    }

    /// `d` of the component along `∂/∂v`, as a 1-form.
    fn d_component(&self, v: &JetVar) -> ScalarForm {
        match self.component(v) {
            None => ScalarForm::zero(1),
            Some(Component::Scaled(c, w)) => {
                ScalarForm::basis(vec![Covector(w)], RatExpr::constant(c))
            }
            Some(Component::Expr(e)) => exterior_d(&ScalarForm::function(e)),
        }
    }

    fn value(&self, v: &JetVar) -> RatExpr {
        match self.component(v) {
            None => RatExpr::zero(),
            Some(Component::Scaled(c, w)) => RatExpr::var(w).scale(&c),
            Some(Component::Expr(e)) => e,
        }
    }
}

/// An exterior form of fixed degree with rational-function coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarForm {
    degree: usize,
    terms: BTreeMap<Basis, RatExpr>,
}

impl ScalarForm {
    pub fn zero(degree: usize) -> Self {
        ScalarForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(f: RatExpr) -> Self {
        let mut s = Self::zero(0);
        s.accumulate(Basis::new(), f);
        s
    }

    /// `coeff · c_1 ∧ … ∧ c_r` for covectors in any order.
    pub fn basis(covectors: Vec<Covector>, coeff: RatExpr) -> Self {
        let mut s = Self::zero(covectors.len());
        s.push_unsorted(covectors.into_iter().collect(), coeff);
        s
    }

    pub fn covector(c: Covector) -> Self {
        Self::basis(vec![c], RatExpr::one())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Covector], &RatExpr)> {
        self.terms.iter().map(|(b, c)| (b.as_slice(), c))
    }

    /// Coefficient of the given (sorted) covector tuple.
    pub fn coefficient(&self, covectors: &[Covector]) -> RatExpr {
        self.terms
            .get(&Basis::from_slice(covectors))
            .cloned()
            .unwrap_or_else(RatExpr::zero)
    }

    /// The function of a degree-0 form.
    pub fn as_function(&self) -> Option<RatExpr> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    pub fn max_order(&self) -> usize {
        self.terms
            .iter()
            .map(|(b, c)| {
                b.iter()
                    .map(|v| v.order())
                    .max()
                    .unwrap_or(0)
                    .max(c.max_order())
            })
            .max()
            .unwrap_or(0)
    }

    fn accumulate(&mut self, key: Basis, c: RatExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn push_unsorted(&mut self, key: Basis, c: RatExpr) {
        debug_assert_eq!(key.len(), self.degree);
        if let Some((neg, key)) = canonical(key) {
            self.accumulate(key, if neg { c.neg() } else { c });
        }
    }

    fn check_degree(&self, other: &Self) {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_degree(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_degree(other);
        for (k, c) in &other.terms {
            self.accumulate(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, f: &RatExpr) -> Self {
        if f.is_zero() {
            return Self::zero(self.degree);
        }
        self.map_coeffs(|c| c.mul(f))
    }

    pub fn scale_rat(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.degree);
        }
        self.map_coeffs(|c| c.scale(k))
    }

    fn map_coeffs(&self, f: impl Fn(&RatExpr) -> RatExpr) -> Self {
        let mut out = Self::zero(self.degree);
        for (k, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(k.clone(), v);
            }
        }
        out
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.degree == other.degree && self.sub(other).is_zero()
    }

    /// Multi-line listing, one term per line.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut lines = Vec::new();
        for (k, c) in &self.terms {
            let basis: Vec<String> = k.iter().map(|v| v.to_string()).collect();
            if basis.is_empty() {
                lines.push(c.to_string());
            } else {
                lines.push(format!("({c}) {}", basis.join(" ∧ ")));
            }
        }
        lines.join("\n")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(k, c)| JsonTerm {
                covectors: k.iter().map(|v| v.to_string()).collect(),
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }

    /// Reads the JSON produced by [`ScalarForm::to_json`]. The degree must be
    /// supplied since the zero form has no terms to infer it from.
    pub fn from_json(value: &serde_json::Value, degree: usize) -> Result<Self> {
        let terms: Vec<JsonTerm> = serde_json::from_value(value.clone())
            .map_err(|e| Error::Usage(format!("malformed form JSON: {e}")))?;
        let ctx = ExprContext::default();
        let mut out = Self::zero(degree);
        for t in terms {
            if t.covectors.len() != degree {
                return Err(Error::DimensionMismatch(format!(
                    "term has {} covectors, expected {degree}",
                    t.covectors.len()
                )));
            }
            let mut basis = Basis::new();
            for s in &t.covectors {
                basis.push(parse_covector(s)?);
            }
            out.push_unsorted(basis, parse_expr(&t.coeff, &ctx)?);
        }
        Ok(out)
    }
}

fn parse_covector(s: &str) -> Result<Covector> {
    let inner = s
        .trim()
        .strip_prefix("d(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Usage(format!("malformed covector '{s}'")))?;
    let e = parse_expr(inner, &ExprContext::default())?;
    let vars = e.vars();
    match (vars.iter().next(), vars.len(), e.num().len(), e.is_polynomial()) {
        (Some(v), 1, 1, true) if RatExpr::var(*v) == e => Ok(Covector(*v)),
        _ => Err(Error::Usage(format!("malformed covector '{s}'"))),
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    covectors: Vec<String>,
    coeff: String,
}

impl fmt::Display for ScalarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if k.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})")?;
                for v in k {
                    write!(f, " {v}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}-form] {}", self.degree, self)
    }
}

pub fn wedge(a: &ScalarForm, b: &ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero(a.degree + b.degree);
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let mut key = ka.clone();
            key.extend_from_slice(kb);
            out.push_unsorted(key, ca.mul(cb));
        }
    }
    out
}

pub fn exterior_d(w: &ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero(w.degree + 1);
    for (k, c) in &w.terms {
        for v in c.vars() {
            let mut key = Basis::with_capacity(k.len() + 1);
            key.push(Covector(v));
            key.extend_from_slice(k);
            out.push_unsorted(key, c.partial(&v));
        }
    }
    out
}

/// Interior product with the first slot.
pub fn contract_field(w: &ScalarForm, x: Field<'_>) -> Result<ScalarForm> {
    if w.degree == 0 {
        return Err(Error::ContractDegreeZero);
    }
    let mut out = ScalarForm::zero(w.degree - 1);
    for (k, c) in &w.terms {
        for s in 0..k.len() {
            let val = x.value(&k[s].0);
            if val.is_zero() {
                continue;
            }
            let mut key = k.clone();
            key.remove(s);
            let coeff = c.mul(&val);
            out.accumulate(key, if s % 2 == 1 { coeff.neg() } else { coeff });
        }
    }
    Ok(out)
}

pub fn contract(w: &ScalarForm, x: &VectorField) -> Result<ScalarForm> {
    contract_field(w, Field::Explicit(x))
}

/// Lie derivative along a vector field.
pub fn lie_field(w: &ScalarForm, x: Field<'_>) -> ScalarForm {
    let mut out = ScalarForm::zero(w.degree);
    for (k, c) in &w.terms {
        out.accumulate(k.clone(), x.apply(c));
        for s in 0..k.len() {
            let dx = x.d_component(&k[s].0);
            for (dk, dc) in &dx.terms {
                let mut key = k.clone();
                key[s] = dk[0];
                out.push_unsorted(key, c.mul(dc));
            }
        }
    }
    out
}

pub fn lie(w: &ScalarForm, x: &VectorField) -> ScalarForm {
    lie_field(w, Field::Explicit(x))
}

/// `d_j`, the Lie derivative along `T_j`.
pub fn lie_total(j: usize, w: &ScalarForm) -> ScalarForm {
    lie_field(w, Field::Total(j))
}

/// `i_j`, contraction with `T_j`.
pub fn contract_total(j: usize, w: &ScalarForm) -> Result<ScalarForm> {
    contract_field(w, Field::Total(j))
}

/// `d_I`, the composite of `d_j` over the slots of `I`.
pub fn lie_multi(index: &MultiIndex, w: &ScalarForm) -> ScalarForm {
    index
        .slots()
        .into_iter()
        .fold(w.clone(), |acc, j| lie_total(j, &acc))
}

/// `S^i`, a derivation of degree zero vanishing on functions.
pub fn s_single(i: usize, w: &ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero(w.degree);
    for (k, c) in &w.terms {
        for s in 0..k.len() {
            let v = k[s].0;
            let Some(lower) = v.index.decrement(i) else {
                continue;
            };
            let weight = v.index.at(i) as i64;
            let mut key = k.clone();
            key[s] = Covector(JetVar::new(v.alpha(), lower));
            out.push_unsorted(key, c.scale(&crate::symbolic::int(weight)));
        }
    }
    out
}

/// `S^I`, the iterate of `S^i` over the slots of `I`.
pub fn s_iter(index: &MultiIndex, w: &ScalarForm) -> ScalarForm {
    index
        .slots()
        .into_iter()
        .fold(w.clone(), |acc, i| s_single(i, &acc))
}

/// `S̃^I`, the single contraction of the composite tensor `S^I`.
pub fn s_composite(index: &MultiIndex, w: &ScalarForm) -> ScalarForm {
    if index.is_zero() {
        return w.clone();
    }
    let mut out = ScalarForm::zero(w.degree);
    for (k, c) in &w.terms {
        for s in 0..k.len() {
            let v = k[s].0;
            let Some(lower) = v.index.checked_sub(index) else {
                continue;
            };
            let weight = v.index.falling_factorial(index);
            let mut key = k.clone();
            key[s] = Covector(JetVar::new(v.alpha(), lower));
            out.push_unsorted(key, c.scale(&Rational::from(BigInt::from(weight))));
        }
    }
    out
}

/// `d^I_j`, the Lie derivative along `Δ^I_j`. For `I = 0` this is `d_j`.
pub fn lie_delta(index: &MultiIndex, j: usize, w: &ScalarForm) -> ScalarForm {
    lie_field(w, Field::Delta(*index, j))
}

/// `i^I_j`, contraction with `Δ^I_j`. For `I = 0` this is `i_j`.
pub fn contract_delta(index: &MultiIndex, j: usize, w: &ScalarForm) -> Result<ScalarForm> {
    contract_field(w, Field::Delta(*index, j))
}

/// `𝔇_p = Σ_{|I|=p} (1/I!) d_I S^I` over `m` slots.
pub fn frak_d(m: usize, p: usize, w: &ScalarForm) -> ScalarForm {
    if p == 0 {
        return w.clone();
    }
    let mut out = ScalarForm::zero(w.degree);
    for index in MultiIndex::enumerate(m, p) {
        let s = s_iter(&index, w);
        if s.is_zero() {
            continue;
        }
        let inv = Rational::new(BigInt::one(), BigInt::from(index.factorial()));
        out.add_assign(&lie_multi(&index, &s).scale_rat(&inv));
    }
    out
}

impl RatExpr {
    /// Applies a derivation whose components are polynomials, using the
    /// quotient rule with the cancellations known in advance.
    pub fn apply_poly_derivation(&self, component: impl Fn(&JetVar) -> Option<Poly>) -> RatExpr {
        let xn = self.num().derivation(&component);
        if self.den().is_one() {
            return RatExpr::from_poly(xn);
        }
        let d = self.den();
        let xd = d.derivation(&component);
        if xd.is_zero() {
            return RatExpr::new(xn, d.clone()).expect("nonzero denominator");
        }
        // X(n/d) = (Xn·d1 − n·e1) / (d1·d) where g = gcd(d, Xd) = d/d1 = Xd/e1;
        // the numerator can only share factors with g.
        let g = crate::symbolic::gcd(d, &xd);
        let d1 = d.div_exact(&g).expect("gcd divides");
        let e1 = xd.div_exact(&g).expect("gcd divides");
        let num = xn.mul(&d1).sub(&self.num().mul(&e1));
        if num.is_zero() {
            return RatExpr::zero();
        }
        let h = crate::symbolic::gcd(&num, &g);
        if h.is_one() {
            RatExpr::new(num, d1.mul(d)).expect("nonzero denominator")
        } else {
            let num = num.div_exact(&h).expect("gcd divides");
            let den = d1.mul(&d.div_exact(&h).expect("gcd divides"));
            RatExpr::new(num, den).expect("nonzero denominator")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{int, ExprContext};

    fn mi(c: &[u16]) -> MultiIndex {
        MultiIndex::from_counts(c)
    }

    fn cv(alpha: usize, c: &[u16]) -> Covector {
        Covector::new(alpha, mi(c))
    }

    fn e(s: &str) -> RatExpr {
        parse_expr(s, &ExprContext::default()).unwrap()
    }

    fn f(s: &str) -> ScalarForm {
        ScalarForm::function(e(s))
    }

    fn one_form(parts: &[(&str, Covector)]) -> ScalarForm {
        let mut out = ScalarForm::zero(1);
        for (c, v) in parts {
            out.add_assign(&ScalarForm::basis(vec![*v], e(c)));
        }
        out
    }

    #[test]
    fn wedge_signs() {
        let a = ScalarForm::covector(cv(1, &[0]));
        let b = ScalarForm::covector(cv(2, &[0]));
        assert!(wedge(&a, &a).is_zero());
        assert_eq!(wedge(&b, &a), wedge(&a, &b).neg());
        let g = f("u[1;1]");
        assert_eq!(wedge(&g, &a), a.scale(&e("u[1;1]")));
    }

    #[test]
    fn d_of_finsler_example() {
        let l = f("u[1;1]^2/u[2;1]");
        let expect = one_form(&[
            ("2*u[1;1]/u[2;1]", cv(1, &[1])),
            ("-u[1;1]^2/u[2;1]^2", cv(2, &[1])),
        ]);
        assert_eq!(exterior_d(&l), expect);
        assert_eq!(exterior_d(&f("u[1;1]")), ScalarForm::covector(cv(1, &[1])));
        assert!(exterior_d(&exterior_d(&l)).is_zero());
    }

    #[test]
    fn total_derivative_fields() {
        let t = total_derivative_field(1, 1, 1, 1);
        assert_eq!(t.len(), 2);
        assert_eq!(t.component(&JetVar::new(1, mi(&[0]))), Some(&e("u[1;1]")));
        assert_eq!(t.component(&JetVar::new(1, mi(&[1]))), Some(&e("u[1;2]")));
        let t2 = total_derivative_field(2, 1, 1, 0);
        assert_eq!(t2.len(), 1);
        assert_eq!(t2.component(&JetVar::new(1, mi(&[0, 0]))), Some(&e("u[1;1,0]")));
    }

    #[test]
    fn delta_fields_are_weighted() {
        let d = delta_field(1, 1, &mi(&[1]), 1, 1);
        assert_eq!(d.component(&JetVar::new(1, mi(&[1]))), Some(&e("u[1;1]")));
        assert_eq!(d.component(&JetVar::new(1, mi(&[2]))), Some(&e("2*u[1;2]")));
        let d2 = delta_field(1, 1, &mi(&[2]), 1, 0);
        assert_eq!(d2.len(), 1);
        assert_eq!(d2.component(&JetVar::new(1, mi(&[2]))), Some(&e("2*u[1;1]")));
        let d3 = delta_field(2, 1, &mi(&[1, 0]), 2, 0);
        assert_eq!(d3.component(&JetVar::new(1, mi(&[1, 0]))), Some(&e("u[1;0,1]")));
    }

    #[test]
    fn contraction_and_lie() {
        let du = ScalarForm::covector(cv(1, &[0]));
        assert_eq!(contract_total(1, &du).unwrap(), f("u[1;1]"));
        assert_eq!(contract_total(1, &f("u[1;0]")), Err(Error::ContractDegreeZero));
        assert_eq!(lie_total(1, &f("u[1;0]")), f("u[1;1]"));
        assert_eq!(lie_total(1, &du), ScalarForm::covector(cv(1, &[1])));
        assert_eq!(
            lie_total(1, &f("u[1;0]*u[2;0]")),
            f("u[1;1]*u[2;0] + u[1;0]*u[2;1]")
        );
        let a = f("u[1;0,0]");
        assert_eq!(lie_multi(&mi(&[1, 1]), &a), f("u[1;1,1]"));
        assert_eq!(lie_multi(&mi(&[0, 0]), &a), a);
    }

    #[test]
    fn vertical_endomorphism() {
        let dl = exterior_d(&f("u[1;1]^2/u[2;1]"));
        let expect = one_form(&[
            ("2*u[1;1]/u[2;1]", cv(1, &[0])),
            ("-u[1;1]^2/u[2;1]^2", cv(2, &[0])),
        ]);
        assert_eq!(s_single(1, &dl), expect);
        assert!(s_single(1, &ScalarForm::covector(cv(1, &[0]))).is_zero());
        assert!(s_single(1, &f("u[1;1]")).is_zero());
        assert!(s_iter(&mi(&[2]), &dl).is_zero());
        // weighted: S du_{(2)} = 2 du_{(1)}
        assert_eq!(
            s_single(1, &ScalarForm::covector(cv(1, &[2]))),
            ScalarForm::covector(cv(1, &[1])).scale_rat(&int(2))
        );
    }

    #[test]
    fn composite_differs_from_iterate_on_two_forms() {
        let w = wedge(
            &ScalarForm::covector(cv(1, &[1])),
            &ScalarForm::covector(cv(2, &[1])),
        );
        let expect = wedge(
            &ScalarForm::covector(cv(1, &[0])),
            &ScalarForm::covector(cv(2, &[1])),
        )
        .add(&wedge(
            &ScalarForm::covector(cv(1, &[1])),
            &ScalarForm::covector(cv(2, &[0])),
        ));
        assert_eq!(s_composite(&mi(&[1]), &w), expect);
        assert_eq!(s_iter(&mi(&[1]), &w), expect);

        let w2 = wedge(
            &ScalarForm::covector(cv(1, &[2])),
            &ScalarForm::covector(cv(1, &[1])),
        );
        let single = s_composite(&mi(&[2]), &w2);
        let iterated = s_iter(&mi(&[2]), &w2);
        assert_eq!(single.len(), 1);
        assert_ne!(single, iterated);
    }

    #[test]
    fn delta_derivatives_on_homogeneous_function() {
        let l = f("u[1;1]^2/u[2;1]");
        assert_eq!(lie_delta(&mi(&[1]), 1, &l), l);
        assert!(lie_delta(&mi(&[2]), 1, &l).is_zero());
        let dl = exterior_d(&l);
        assert_eq!(contract_delta(&mi(&[1]), 1, &dl).unwrap(), l);
    }

    #[test]
    fn frak_d_basics() {
        let dl = exterior_d(&f("u[1;1]^2/u[2;1]"));
        assert_eq!(frak_d(1, 0, &dl), dl);
        assert_eq!(frak_d(1, 1, &dl), lie_total(1, &s_single(1, &dl)));
        assert!(frak_d(1, 2, &dl).is_zero());
    }

    #[test]
    fn explicit_fields_agree_with_lazy_ones() {
        let l = f("(u[1;1]*u[2;2] - u[2;1]*u[1;2])/u[1;1]^2 + u[1;0]*u[2;1]");
        let w = wedge(&exterior_d(&l), &ScalarForm::covector(cv(2, &[2])).scale(&e("u[1;1]")));
        let k = w.max_order();
        for cap in k..k + 2 {
            let t = total_derivative_field(1, 2, 1, cap);
            assert_eq!(lie(&w, &t), lie_total(1, &w));
            assert_eq!(contract(&w, &t).unwrap(), contract_total(1, &w).unwrap());
            for i in 1..=2u16 {
                let index = mi(&[i]);
                let dx = delta_field(1, 2, &index, 1, cap);
                assert_eq!(lie(&w, &dx), lie_delta(&index, 1, &w));
                assert_eq!(contract(&w, &dx).unwrap(), contract_delta(&index, 1, &w).unwrap());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let w = wedge(
            &exterior_d(&f("u[1;1]^2/u[2;1]")),
            &ScalarForm::covector(cv(1, &[0])),
        );
        let j = w.to_json();
        assert_eq!(ScalarForm::from_json(&j, 2).unwrap(), w);
        assert!(w.pretty().contains("d(u[1;0])"));
    }
}
