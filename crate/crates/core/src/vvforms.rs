//! Forms valued in alternating s-linear forms on the space of independent
//! variables, and the operators `d`, `d_T`, `i_T` and `P` of the bicomplex.
//!
//! A value `Φ = Σ_{i_1<…<i_s} φ_{i_1…i_s} ⊗ dt^{i_1}∧…∧dt^{i_s}` is stored by
//! its basis coefficients. `P` is `Σ_j P^j_(s) ⊗ ι_{∂/∂t^j}` on the value
//! part, which is the displayed `s·P^j_(s)(φ_{j i_2…i_s})` read with fully
//! antisymmetric components.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::forms::{contract_total, exterior_d, lie_multi, lie_total, s_iter, ScalarForm};
use crate::multiindex::{factorial, MultiIndex};
use crate::symbolic::{RatExpr, Rational};

type Frame = Vec<usize>;

/// An element of `Ω^{r,s}` over `m` independent variables.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorValuedForm {
    m: usize,
    r: usize,
    s: usize,
    components: BTreeMap<Frame, ScalarForm>,
}

/// Sorts `t`, returning `None` on a repeated index and the sign otherwise.
fn sort_frame(mut t: Frame) -> Option<(bool, Frame)> {
    let mut neg = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((neg, t))
    }
}

impl VectorValuedForm {
    pub fn zero(m: usize, r: usize, s: usize) -> Self {
        VectorValuedForm {
            m,
            r,
            s,
            components: BTreeMap::new(),
        }
    }

    /// `L ⊗ dt^1∧…∧dt^m`.
    pub fn top(m: usize, f: RatExpr) -> Self {
        let mut out = Self::zero(m, 0, m);
        out.set(&(1..=m).collect::<Vec<_>>(), ScalarForm::function(f))
            .expect("valid frame");
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn check_frame(&self, frame: &[usize]) -> Result<()> {
        if frame.len() != self.s {
            return Err(Error::DimensionMismatch(format!(
                "frame {frame:?} has length {}, expected {}",
                frame.len(),
                self.s
            )));
        }
        if let Some(i) = frame.iter().find(|&&i| i < 1 || i > self.m) {
            return Err(Error::IndexOutOfRange(format!(
                "frame index {i} outside 1..={}",
                self.m
            )));
        }
        Ok(())
    }

    /// The component for any ordering of the frame indices, signed.
    pub fn get(&self, frame: &[usize]) -> Result<ScalarForm> {
        self.check_frame(frame)?;
        Ok(match sort_frame(frame.to_vec()) {
            None => ScalarForm::zero(self.r),
            Some((neg, key)) => {
                let c = self
                    .components
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| ScalarForm::zero(self.r));
                if neg {
                    c.neg()
                } else {
                    c
                }
            }
        })
    }

    /// Sets the component of `frame`, storing the signed value under the
    /// sorted tuple.
    pub fn set(&mut self, frame: &[usize], w: ScalarForm) -> Result<()> {
        self.check_frame(frame)?;
        if w.degree() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "component of degree {}, expected {}",
                w.degree(),
                self.r
            )));
        }
        match sort_frame(frame.to_vec()) {
            None if w.is_zero() => {}
            None => {
                return Err(Error::DimensionMismatch(
                    "repeated frame index with nonzero component".into(),
                ))
            }
            Some((neg, key)) => {
                let w = if neg { w.neg() } else { w };
                if w.is_zero() {
                    self.components.remove(&key);
                } else {
                    self.components.insert(key, w);
                }
            }
        }
        Ok(())
    }

    /// Adds `w ⊗ dt^{frame}` for a frame in any order.
    fn accumulate(&mut self, frame: Frame, w: ScalarForm) {
        if w.is_zero() {
            return;
        }
        let Some((neg, key)) = sort_frame(frame) else {
            return;
        };
        let w = if neg { w.neg() } else { w };
        let sum = match self.components.remove(&key) {
            Some(old) => old.add(&w),
            None => w,
        };
        if !sum.is_zero() {
            self.components.insert(key, sum);
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&[usize], &ScalarForm)> {
        self.components.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn max_order(&self) -> usize {
        self.components
            .values()
            .map(|w| w.max_order())
            .max()
            .unwrap_or(0)
    }

    fn check_shape(&self, other: &Self) {
        assert!(
            self.m == other.m && self.r == other.r && self.s == other.s,
            "vector-valued forms of different type"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_shape(other);
        let mut out = self.clone();
        for (k, w) in &other.components {
            out.accumulate(k.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|w| w.neg(), self.r)
    }

    pub fn scale_rat(&self, k: &Rational) -> Self {
        self.map(|w| w.scale_rat(k), self.r)
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.m == other.m && self.r == other.r && self.s == other.s && self.sub(other).is_zero()
    }

    fn map(&self, f: impl Fn(&ScalarForm) -> ScalarForm, r: usize) -> Self {
        let mut out = Self::zero(self.m, r, self.s);
        for (k, w) in &self.components {
            out.accumulate(k.clone(), f(w));
        }
        out
    }

    /// Componentwise exterior derivative, `(r,s) → (r+1,s)`.
    pub fn d(&self) -> Self {
        self.map(exterior_d, self.r + 1)
    }

    /// `Σ_j (d_j φ) ⊗ dt^j ∧ dt^I`, `(r,s) → (r,s+1)`; zero when `s = m`.
    pub fn d_total(&self) -> Self {
        let mut out = Self::zero(self.m, self.r, self.s + 1);
        for (k, w) in &self.components {
            for j in 1..=self.m {
                if k.contains(&j) {
                    continue;
                }
                let mut frame = vec![j];
                frame.extend_from_slice(k);
                out.accumulate(frame, lie_total(j, w));
            }
        }
        out
    }

    /// `Σ_j (i_j φ) ⊗ dt^j ∧ dt^I`, `(r,s) → (r−1,s+1)`.
    pub fn i_total(&self) -> Result<Self> {
        if self.r == 0 {
            return Err(Error::ContractDegreeZero);
        }
        let mut out = Self::zero(self.m, self.r - 1, self.s + 1);
        for (k, w) in &self.components {
            for j in 1..=self.m {
                if k.contains(&j) {
                    continue;
                }
                let mut frame = vec![j];
                frame.extend_from_slice(k);
                out.accumulate(frame, contract_total(j, w)?);
            }
        }
        Ok(out)
    }

    /// The homotopy operator, `(r,s) → (r,s−1)`, with the order bound taken
    /// from the operand.
    pub fn homotopy_p(&self) -> Result<Self> {
        self.homotopy_p_with_order(self.max_order())
    }

    /// The homotopy operator with an explicit order bound `k`; any `k` at
    /// least the operand's order gives the same result.
    pub fn homotopy_p_with_order(&self, k: usize) -> Result<Self> {
        if self.r == 0 || self.s == 0 {
            return Err(Error::DimensionMismatch(format!(
                "homotopy operator needs r ≥ 1 and s ≥ 1, got r = {}, s = {}",
                self.r, self.s
            )));
        }
        let mut out = Self::zero(self.m, self.r, self.s - 1);
        for (frame, w) in &self.components {
            for (pos, &j) in frame.iter().enumerate() {
                let mut rest = frame.clone();
                rest.remove(pos);
                let p = p_operator(self.m, self.s, j, k, w);
                out.accumulate(rest, if pos % 2 == 1 { p.neg() } else { p });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let mut comps = Map::new();
        for (k, w) in &self.components {
            let key: Vec<String> = k.iter().map(|i| i.to_string()).collect();
            comps.insert(key.join(","), w.to_json());
        }
        serde_json::json!({ "r": self.r, "s": self.s, "components": comps })
    }

    pub fn from_json(value: &Value, m: usize) -> Result<Self> {
        let bad = |what: &str| Error::Usage(format!("malformed vector-valued form JSON: {what}"));
        let r = value["r"].as_u64().ok_or_else(|| bad("r"))? as usize;
        let s = value["s"].as_u64().ok_or_else(|| bad("s"))? as usize;
        let comps = value["components"]
            .as_object()
            .ok_or_else(|| bad("components"))?;
        let mut out = Self::zero(m, r, s);
        for (key, w) in comps {
            let frame: Vec<usize> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|t| t.trim().parse().map_err(|_| bad(key)))
                    .collect::<Result<_>>()?
            };
            let w = ScalarForm::from_json(w, r)?;
            out.check_frame(&frame)?;
            out.accumulate(frame, w);
        }
        Ok(out)
    }
}

impl std::fmt::Debug for VectorValuedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ω^({},{}) ", self.r, self.s)?;
        f.debug_map()
            .entries(self.components.iter())
            .finish()
    }
}

/// Coefficient of `d_J S^{J+1_j}` in `P^j_(s)` acting on `r`-forms:
/// `(-1)^{|J|} (m-s)! |J|! / (r^{|J|+1} (m-s+|J|+1)! J!)`.
pub fn p_coefficient(m: usize, s: usize, r: usize, index: &MultiIndex) -> Rational {
    let len = index.len();
    let num = BigInt::from(factorial(m - s)) * BigInt::from(factorial(len));
    let den = BigInt::from(r).pow(len as u32 + 1)
        * BigInt::from(factorial(m - s + len + 1))
        * BigInt::from(index.factorial());
    let c = Rational::new(num, den);
    if len % 2 == 1 {
        -c
    } else {
        c
    }
}

/// The scalar operator `P^j_(s)` on an `r`-form, summing `|J| ≤ r·k − 1`.
pub fn p_operator(m: usize, s: usize, j: usize, k: usize, w: &ScalarForm) -> ScalarForm {
    let r = w.degree();
    let mut out = ScalarForm::zero(r);
    if r == 0 || r * k == 0 {
        return out;
    }
    for len in 0..r * k {
        for index in MultiIndex::enumerate(m, len) {
            let lowered = s_iter(&index.increment(j), w);
            if lowered.is_zero() {
                continue;
            }
            let c = p_coefficient(m, s, r, &index);
            if c.is_zero() {
                continue;
            }
            out.add_assign(&lie_multi(&index, &lowered).scale_rat(&c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{parse_expr, rat, ExprContext};

    fn f(s: &str) -> ScalarForm {
        ScalarForm::function(parse_expr(s, &ExprContext::default()).unwrap())
    }

    #[test]
    fn signed_component_lookup() {
        let mut phi = VectorValuedForm::zero(2, 0, 2);
        phi.set(&[2, 1], f("u[1;0,0]")).unwrap();
        assert_eq!(phi.get(&[1, 2]).unwrap(), f("-u[1;0,0]"));
        assert_eq!(phi.get(&[2, 1]).unwrap(), f("u[1;0,0]"));
        assert!(phi.get(&[1, 1]).unwrap().is_zero());
        assert!(phi.get(&[1]).is_err());
        assert!(phi.get(&[1, 3]).is_err());
    }

    #[test]
    fn total_differential_sign() {
        let mut phi = VectorValuedForm::zero(2, 0, 1);
        phi.set(&[1], f("u[1;0,0]^2")).unwrap();
        let dt = phi.d_total();
        assert_eq!(dt.get(&[1, 2]).unwrap(), f("-2*u[1;0,0]*u[1;0,1]"));
        assert!(dt.d_total().is_zero());
        let top = VectorValuedForm::top(2, parse_expr("u[1;1,0]", &ExprContext::default()).unwrap());
        assert!(top.d_total().is_zero());
    }

    #[test]
    fn coefficients() {
        let zero = MultiIndex::zero(1);
        assert_eq!(p_coefficient(1, 1, 1, &zero), rat(1, 1));
        assert_eq!(p_coefficient(1, 1, 1, &MultiIndex::unit(1, 1)), rat(-1, 2));
        // r = 2, m - s = 1: (-1)^1 1! 1! / (2^2 3! 1!) = -1/24
        assert_eq!(p_coefficient(2, 1, 2, &MultiIndex::unit(2, 2)), rat(-1, 24));
    }

    #[test]
    fn homotopy_rejects_bad_degrees() {
        let top = VectorValuedForm::top(1, parse_expr("u[1;1]", &ExprContext::default()).unwrap());
        assert!(top.homotopy_p().is_err());
        assert!(top.d().d_total().homotopy_p().is_ok());
    }

    #[test]
    fn json_round_trip() {
        let mut phi = VectorValuedForm::zero(2, 1, 1);
        phi.set(&[2], exterior_d(&f("u[1;1,0]^2/u[2;0,1]"))).unwrap();
        let j = phi.to_json();
        assert_eq!(VectorValuedForm::from_json(&j, 2).unwrap(), phi);
        assert!(j["components"]["2"].is_array());
    }
}
