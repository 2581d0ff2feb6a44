//! Homogeneous Lagrangians: homogeneity, Hilbert forms, the sequences
//! `Θ_q = (Pd)^q Θ_0` and `E_q = (Pd)^q E_0`, Euler-Lagrange forms, and the
//! checks built on them.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{
    contract_delta, contract_total, exterior_d, lie_delta, lie_multi, lie_total, s_iter, s_single,
    Covector, ScalarForm,
};
use crate::identities::coeff_c;
use crate::multiindex::{factorial, MultiIndex, MAX_SLOTS};
use crate::symbolic::{JetVar, RatExpr, Rational};
use crate::vvforms::VectorValuedForm;

/// A Lagrangian function on the bundle of `m`-frames with `n` dependent
/// variables, declared of order `k`. Derived objects are computed on demand
/// and cached.
pub struct Lagrangian {
    m: usize,
    n: usize,
    k: usize,
    l: RatExpr,
    homogeneity: OnceLock<HomogeneityReport>,
    hilbert: OnceLock<Vec<ScalarForm>>,
    thetas: Vec<OnceLock<VectorValuedForm>>,
    e_forms: Vec<OnceLock<VectorValuedForm>>,
    el_coordinate: OnceLock<ScalarForm>,
}

impl Clone for Lagrangian {
    fn clone(&self) -> Self {
        Lagrangian::new(self.m, self.n, self.k, self.l.clone()).expect("already validated")
    }
}

impl std::fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m={} n={} k={} L = {}", self.m, self.n, self.k, self.l)
    }
}

/// One failed homogeneity condition: `d^I_j L - δ L` is `residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: MultiIndex,
    pub j: usize,
    pub residual: RatExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub violations: Vec<Violation>,
}

impl HomogeneityReport {
    pub fn is_homogeneous(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "is_homogeneous": self.is_homogeneous(),
            "violations": self.violations.iter().map(|v| json!({
                "I": v.index.to_string(),
                "j": v.j,
                "residual": v.residual.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of an identity between vector-valued forms: `residual` is the
/// difference of the two sides.
#[derive(Clone, Debug)]
pub struct FormCheck {
    pub name: String,
    pub residual: VectorValuedForm,
}

impl FormCheck {
    pub fn pass(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Outcome of an identity between scalar forms.
#[derive(Clone, Debug)]
pub struct ScalarCheck {
    pub name: String,
    pub residual: ScalarForm,
}

impl ScalarCheck {
    pub fn pass(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub is_null: bool,
    pub dtheta_m_zero: bool,
    /// The equivalence is only established for `m ≤ 2`; above that the two
    /// facts are reported without asserting anything.
    pub proved_range: bool,
}

impl ClosureReport {
    /// True when the equivalence holds, or when it is not asserted.
    pub fn consistent(&self) -> bool {
        !self.proved_range || self.is_null == self.dtheta_m_zero
    }
}

fn scalar_residual(name: impl Into<String>, a: &ScalarForm, b: &ScalarForm) -> ScalarCheck {
    ScalarCheck {
        name: name.into(),
        residual: a.sub(b),
    }
}

impl Lagrangian {
    /// Validates that `l` lives on the declared jet space.
    pub fn new(m: usize, n: usize, k: usize, l: RatExpr) -> Result<Self> {
        if m == 0 || m > MAX_SLOTS {
            return Err(Error::IndexOutOfRange(format!(
                "m = {m} outside 1..={MAX_SLOTS}"
            )));
        }
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::IndexOutOfRange(format!("n = {n} must be positive")));
        }
        if k == 0 {
            return Err(Error::IndexOutOfRange("k must be at least 1".into()));
        }
        for v in l.vars() {
            if v.index.dim() != m {
                return Err(Error::IndexOutOfRange(format!(
                    "{v} has {} slots, expected {m}",
                    v.index.dim()
                )));
            }
            if v.alpha() > n {
                return Err(Error::IndexOutOfRange(format!(
                    "{v} has dependent index above n = {n}"
                )));
            }
            if v.order() > k {
                return Err(Error::IndexOutOfRange(format!(
                    "{v} has order {} above k = {k}",
                    v.order()
                )));
            }
        }
        Ok(Lagrangian {
            m,
            n,
            k,
            l,
            homogeneity: OnceLock::new(),
            hilbert: OnceLock::new(),
            thetas: (0..=m).map(|_| OnceLock::new()).collect(),
            e_forms: (0..=m).map(|_| OnceLock::new()).collect(),
            el_coordinate: OnceLock::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn function(&self) -> &RatExpr {
        &self.l
    }

    /// The same function declared on a jet space of another order.
    pub fn with_order(&self, k: usize) -> Result<Self> {
        Lagrangian::new(self.m, self.n, k, self.l.clone())
    }

    fn lf(&self) -> ScalarForm {
        ScalarForm::function(self.l.clone())
    }

    fn dl(&self) -> ScalarForm {
        exterior_d(&self.lf())
    }

    /// Evaluates `d^{1_i}_j L - δ^i_j L` and `d^I_j L` for `2 ≤ |I| ≤ k+1`.
    pub fn check_homogeneous(&self) -> &HomogeneityReport {
        self.homogeneity.get_or_init(|| {
            let lf = self.lf();
            let mut violations = Vec::new();
            for len in 1..=self.k + 1 {
                for index in MultiIndex::enumerate(self.m, len) {
                    for j in 1..=self.m {
                        let mut r = lie_delta(&index, j, &lf)
                            .as_function()
                            .expect("function");
                        if len == 1 && index.at(j) == 1 {
                            r = r.sub(&self.l);
                        }
                        if !r.is_zero() {
                            violations.push(Violation {
                                index,
                                j,
                                residual: r,
                            });
                        }
                    }
                }
            }
            HomogeneityReport { violations }
        })
    }

    pub fn require_homogeneous(&self) -> Result<()> {
        match self.check_homogeneous().violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::NotHomogeneous(format!(
                "d^{}_{} L leaves residual {}",
                v.index, v.j, v.residual
            ))),
        }
    }

    /// `ϑ^i = Σ_{|I|≤k} ((-1)^{|I|}/(I!(|I|+1))) d_I S^{I+1_i} dL`, i = 1..m.
    pub fn hilbert_forms(&self) -> Result<&[ScalarForm]> {
        self.require_homogeneous()?;
        Ok(self.hilbert.get_or_init(|| {
            let dl = self.dl();
            (1..=self.m).map(|i| hilbert_display(self.m, self.k, i, &dl)).collect()
        }))
    }

    /// The Hilbert forms read off from `Θ_1 = P d Θ_0`.
    pub fn hilbert_forms_via_homotopy(&self) -> Result<Vec<ScalarForm>> {
        let theta1 = self.theta(1)?;
        Ok((1..=self.m).map(|j| self.hilbert_component(theta1, j)).collect())
    }

    /// Component of `Θ_1` along `d^{m-1}t_j = ι_{∂/∂t^j} d^m t`.
    fn hilbert_component(&self, theta1: &VectorValuedForm, j: usize) -> ScalarForm {
        let frame: Vec<usize> = (1..=self.m).filter(|&i| i != j).collect();
        let c = theta1.get(&frame).expect("valid frame");
        if j.is_multiple_of(2) {
            c.neg()
        } else {
            c
        }
    }

    /// `Θ_q = (Pd)^q Θ_0`, with `Θ_0 = L ⊗ d^m t`.
    pub fn theta(&self, q: usize) -> Result<&VectorValuedForm> {
        if q > self.m {
            return Err(Error::Usage(format!("q = {q} exceeds m = {}", self.m)));
        }
        if let Some(t) = self.thetas[q].get() {
            return Ok(t);
        }
        let value = if q == 0 {
            VectorValuedForm::top(self.m, self.l.clone())
        } else {
            self.require_homogeneous()?;
            self.theta(q - 1)?.d().homotopy_p()?
        };
        Ok(self.thetas[q].get_or_init(|| value))
    }

    /// The fundamental form `Θ_m` as a scalar m-form.
    pub fn fundamental_form(&self) -> Result<ScalarForm> {
        self.theta(self.m)?.get(&[])
    }

    /// `ε = dL - d_i ϑ^i`.
    pub fn euler_lagrange_intrinsic(&self) -> Result<ScalarForm> {
        let mut e = self.dl();
        for (i, th) in self.hilbert_forms()?.iter().enumerate() {
            e = e.sub(&lie_total(i + 1, th));
        }
        Ok(e)
    }

    /// `ε = Σ_{|I|≤k} (-1)^{|I|} d_I(∂L/∂u^α_I) du^α`.
    pub fn euler_lagrange_coordinate(&self) -> &ScalarForm {
        self.el_coordinate.get_or_init(|| {
            let mut e = ScalarForm::zero(1);
            let zero = MultiIndex::zero(self.m);
            for alpha in 1..=self.n {
                let mut coeff = RatExpr::zero();
                for index in MultiIndex::enumerate_up_to(self.m, self.k) {
                    let p = self.l.partial(&JetVar::new(alpha, index));
                    if p.is_zero() {
                        continue;
                    }
                    let t = lie_multi(&index, &ScalarForm::function(p))
                        .as_function()
                        .expect("function");
                    coeff = if index.len() % 2 == 0 {
                        coeff.add(&t)
                    } else {
                        coeff.sub(&t)
                    };
                }
                e.add_assign(&ScalarForm::basis(vec![Covector::new(alpha, zero)], coeff));
            }
            e
        })
    }

    /// Null means a vanishing Euler-Lagrange form (coordinate route).
    pub fn is_null(&self) -> bool {
        self.euler_lagrange_coordinate().is_zero()
    }

    /// `E_q = (Pd)^q E_0` with `E_0 = ε ⊗ d^m t`.
    pub fn e_form(&self, q: usize) -> Result<&VectorValuedForm> {
        if q > self.m {
            return Err(Error::Usage(format!("q = {q} exceeds m = {}", self.m)));
        }
        if let Some(t) = self.e_forms[q].get() {
            return Ok(t);
        }
        self.require_homogeneous()?;
        let value = if q == 0 {
            let mut e0 = VectorValuedForm::zero(self.m, 1, self.m);
            let frame: Vec<usize> = (1..=self.m).collect();
            e0.set(&frame, self.euler_lagrange_intrinsic()?)?;
            e0
        } else {
            self.e_form(q - 1)?.d().homotopy_p()?
        };
        Ok(self.e_forms[q].get_or_init(|| value))
    }

    /// `E_q = (-1)^q (dΘ_q - d_T Θ_{q+1})` for `0 ≤ q ≤ m-1`.
    pub fn check_euler_differences(&self, q: usize) -> Result<FormCheck> {
        self.check_q_below_m(q)?;
        let mut rhs = self.theta(q)?.d().sub(&self.theta(q + 1)?.d_total());
        if q % 2 == 1 {
            rhs = rhs.neg();
        }
        Ok(FormCheck {
            name: format!("E_{q} = (-1)^{q} (dΘ_{q} - d_T Θ_{})", q + 1),
            residual: self.e_form(q)?.sub(&rhs),
        })
    }

    /// `i_T E_{q+1} = (m-q) E_q`.
    pub fn check_euler_recovery(&self, q: usize) -> Result<FormCheck> {
        self.check_q_below_m(q)?;
        let lhs = self.e_form(q + 1)?.i_total()?;
        let rhs = self.e_form(q)?.scale_rat(&int(self.m - q));
        Ok(FormCheck {
            name: format!("i_T E_{} = {} E_{q}", q + 1, self.m - q),
            residual: lhs.sub(&rhs),
        })
    }

    /// `E_{m-1} = (-1)^m i_T dΘ_m`.
    pub fn check_euler_top(&self) -> Result<FormCheck> {
        let m = self.m;
        let mut rhs = self.theta(m)?.d().i_total()?;
        if m % 2 == 1 {
            rhs = rhs.neg();
        }
        Ok(FormCheck {
            name: format!("E_{} = (-1)^{m} i_T dΘ_{m}", m - 1),
            residual: self.e_form(m - 1)?.sub(&rhs),
        })
    }

    fn check_q_below_m(&self, q: usize) -> Result<()> {
        if q >= self.m {
            return Err(Error::Usage(format!(
                "q = {q} must be below m = {}",
                self.m
            )));
        }
        Ok(())
    }

    /// `i_T Θ_{q+1} = (m-q) Θ_q`.
    pub fn verify_recovery(&self, q: usize) -> Result<FormCheck> {
        self.check_q_below_m(q)?;
        self.require_homogeneous()?;
        let lhs = self.theta(q + 1)?.i_total()?;
        let rhs = self.theta(q)?.scale_rat(&int(self.m - q));
        Ok(FormCheck {
            name: format!("i_T Θ_{} = {} Θ_{q}", q + 1, self.m - q),
            residual: lhs.sub(&rhs),
        })
    }

    pub fn verify_closure(&self) -> Result<ClosureReport> {
        self.require_homogeneous()?;
        let dtheta = self.fundamental_form()?;
        Ok(ClosureReport {
            is_null: self.is_null(),
            dtheta_m_zero: exterior_d(&dtheta).is_zero(),
            proved_range: self.m <= 2,
        })
    }

    /// `dΘ_q = d_T Θ_{q+1}` for all q and `dΘ_m = 0`, the consequences of a
    /// vanishing Euler-Lagrange form.
    pub fn check_null_chain(&self) -> Result<Vec<FormCheck>> {
        let mut out = Vec::new();
        for q in 0..self.m {
            out.push(FormCheck {
                name: format!("dΘ_{q} = d_T Θ_{}", q + 1),
                residual: self.theta(q)?.d().sub(&self.theta(q + 1)?.d_total()),
            });
        }
        out.push(FormCheck {
            name: format!("dΘ_{} = 0", self.m),
            residual: self.theta(self.m)?.d(),
        });
        Ok(out)
    }

    /// `(1/m!) (S^1 d)…(S^m d) L` for a first-order Lagrangian, the operator
    /// `S^1 d` being applied first.
    pub fn first_order_fundamental(&self) -> Result<ScalarForm> {
        if self.k != 1 {
            return Err(Error::OrderMismatch(format!(
                "closed formula needs k = 1, declared k = {}",
                self.k
            )));
        }
        let mut w = self.lf();
        for i in 1..=self.m {
            w = s_single(i, &exterior_d(&w));
        }
        let inv = Rational::new(BigInt::one(), BigInt::from(factorial(self.m)));
        Ok(w.scale_rat(&inv))
    }

    /// `i_k ϑ^i = δ^k_i L` and `i^K_k ϑ^i = 0` for `1 ≤ |K| ≤ 2k-1`.
    pub fn check_hilbert_contractions(&self) -> Result<Vec<ScalarCheck>> {
        let lf = self.lf();
        let mut out = Vec::new();
        for (i0, th) in self.hilbert_forms()?.iter().enumerate() {
            let i = i0 + 1;
            for k in 1..=self.m {
                let expect = if i == k { lf.clone() } else { ScalarForm::zero(0) };
                out.push(scalar_residual(
                    format!("i_{k} ϑ^{i}"),
                    &contract_total(k, th)?,
                    &expect,
                ));
                for len in 1..=2 * self.k - 1 {
                    for index in MultiIndex::enumerate(self.m, len) {
                        out.push(scalar_residual(
                            format!("i^{index}_{k} ϑ^{i}"),
                            &contract_delta(&index, k, th)?,
                            &ScalarForm::zero(0),
                        ));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `d^I_i ϑ^j = -Σ_M ((-1)^{|M|}/M!) C_{I,M,i,j} d_M S^{I+M-1_i+1_j} dL`.
    pub fn check_hilbert_derivative(
        &self,
        index: &MultiIndex,
        i: usize,
        j: usize,
    ) -> Result<ScalarCheck> {
        if index.is_zero() {
            return Err(Error::DegenerateIndex("|I| must be at least 1".into()));
        }
        self.check_slot(i)?;
        self.check_slot(j)?;
        let lhs = lie_delta(index, i, &self.hilbert_forms()?[j - 1]);
        let dl = self.dl();
        let mut rhs = ScalarForm::zero(1);
        // S^{I+M-1_i+1_j} dL vanishes once |I|+|M| exceeds k.
        for len in 0..=self.k {
            for mm in MultiIndex::enumerate(self.m, len) {
                let Some(shift) = index.add(&mm).increment(j).decrement(i) else {
                    continue;
                };
                let lowered = s_iter(&shift, &dl);
                if lowered.is_zero() {
                    continue;
                }
                let c = coeff_c(index, &mm, i, j);
                if c.is_zero() {
                    continue;
                }
                let mut w = c / Rational::from(BigInt::from(mm.factorial()));
                if len % 2 == 0 {
                    w = -w;
                }
                rhs.add_assign(&lie_multi(&mm, &lowered).scale_rat(&w));
            }
        }
        Ok(scalar_residual(
            format!("d^{index}_{i} ϑ^{j}"),
            &lhs,
            &rhs,
        ))
    }

    /// `S^i ϑ^j = S^j ϑ^i` for all pairs.
    pub fn check_hilbert_symmetry(&self) -> Result<Vec<ScalarCheck>> {
        let th = self.hilbert_forms()?;
        let mut out = Vec::new();
        for i in 1..=self.m {
            for j in i + 1..=self.m {
                out.push(scalar_residual(
                    format!("S^{i} ϑ^{j} = S^{j} ϑ^{i}"),
                    &s_single(i, &th[j - 1]),
                    &s_single(j, &th[i - 1]),
                ));
            }
        }
        Ok(out)
    }

    fn check_slot(&self, i: usize) -> Result<()> {
        if i < 1 || i > self.m {
            return Err(Error::IndexOutOfRange(format!(
                "slot {i} outside 1..={}",
                self.m
            )));
        }
        Ok(())
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The displayed Hilbert form `ϑ^i` for a Lagrangian of order at most `k`.
pub fn hilbert_display(m: usize, k: usize, i: usize, dl: &ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero(1);
    for len in 0..=k {
        for index in MultiIndex::enumerate(m, len) {
            let lowered = s_iter(&index.increment(i), dl);
            if lowered.is_zero() {
                continue;
            }
            let den = BigInt::from(index.factorial()) * BigInt::from(len + 1);
            let mut c = Rational::new(BigInt::one(), den);
            if len % 2 == 1 {
                c = -c;
            }
            out.add_assign(&lie_multi(&index, &lowered).scale_rat(&c));
        }
    }
    out
}
