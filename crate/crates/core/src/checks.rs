//! Operator identities of the total-derivative calculus, checked exactly on
//! seeded random polynomial forms.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::forms::{
    contract_delta, contract_total, exterior_d, frak_d, lie_delta, lie_multi, lie_total,
    s_composite, s_iter, s_single, ScalarForm,
};
use crate::identities::coeff_g;
use crate::multiindex::MultiIndex;
use crate::random::FormGen;
use crate::symbolic::Rational;
use crate::vvforms::VectorValuedForm;

/// Aggregated outcome of one identity over many random trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRow {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteRow {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "pass": self.pass(),
        })
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// One random instance: `Ok(None)` when both sides agree, otherwise a
/// description of the failing input.
type Trial = fn(&mut FormGen) -> Result<Option<String>>;

fn compare(lhs: &ScalarForm, rhs: &ScalarForm, input: &ScalarForm) -> Option<String> {
    if lhs.equals(rhs) {
        None
    } else {
        Some(format!("input {input}; residual {}", lhs.sub(rhs)))
    }
}

fn compare_vv(lhs: &VectorValuedForm, rhs: &VectorValuedForm) -> Option<String> {
    if lhs.equals(rhs) {
        None
    } else {
        Some(format!("residual {:?}", lhs.sub(rhs)))
    }
}

fn degree(g: &mut FormGen, min: usize) -> usize {
    g.rng().gen_range(min..=2)
}

/// `[i^I_i, d_j] = I(j) i^{I-1_j}_i`.
pub fn commutator_contract_total(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 1);
    let w = g.form(r);
    let index = g.index(1, 2);
    let (i, j) = (g.slot(), g.slot());
    let lhs = contract_delta(&index, i, &lie_total(j, &w))?
        .sub(&lie_total(j, &contract_delta(&index, i, &w)?));
    let rhs = match index.decrement(j) {
        Some(lower) => contract_delta(&lower, i, &w)?.scale_rat(&int(index.at(j))),
        None => ScalarForm::zero(r - 1),
    };
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("I={index} i={i} j={j}: {s}")))
}

/// `[d^I_i, S̃^J] = -J(i) S̃^{J+I-1_i}`.
pub fn commutator_lie_composite(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 1);
    let w = g.form(r);
    let index = g.index(1, 2);
    let jj = g.index(0, 2);
    let i = g.slot();
    let lhs = lie_delta(&index, i, &s_composite(&jj, &w))
        .sub(&s_composite(&jj, &lie_delta(&index, i, &w)));
    let rhs = match jj.add(&index).decrement(i) {
        Some(k) if jj.at(i) > 0 => s_composite(&k, &w).scale_rat(&-int(jj.at(i))),
        _ => ScalarForm::zero(r),
    };
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("I={index} J={jj} i={i}: {s}")))
}

/// `[i^I_i, S̃^J] = i^{I+J}_i` for `|J| ≥ 1` (`S̃^0` is the identity).
pub fn commutator_contract_composite(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 1);
    let w = g.form(r);
    let index = g.index(1, 2);
    let jj = g.index(1, 2);
    let i = g.slot();
    let lhs = contract_delta(&index, i, &s_composite(&jj, &w))?
        .sub(&s_composite(&jj, &contract_delta(&index, i, &w)?));
    let rhs = contract_delta(&index.add(&jj), i, &w)?;
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("I={index} J={jj} i={i}: {s}")))
}

/// `[d^I_i, d_j] = I(j) d^{I-1_j}_i`.
pub fn commutator_lie_total(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 0);
    let w = g.form(r);
    let index = g.index(1, 2);
    let (i, j) = (g.slot(), g.slot());
    let lhs = lie_delta(&index, i, &lie_total(j, &w)).sub(&lie_total(j, &lie_delta(&index, i, &w)));
    let rhs = match index.decrement(j) {
        Some(lower) => lie_delta(&lower, i, &w).scale_rat(&int(index.at(j))),
        None => ScalarForm::zero(r),
    };
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("I={index} i={i} j={j}: {s}")))
}

/// `S^J 𝔇_p = Σ_q r^q G_{|J|,q} 𝔇_{p-q} S^J` on `r`-forms; with `r = 1`
/// this is the binomial commutation rule for 1-forms.
fn s_frak_rhs(m: usize, jj: &MultiIndex, p: usize, w: &ScalarForm) -> ScalarForm {
    let r = w.degree();
    let sj = s_iter(jj, w);
    let mut rhs = ScalarForm::zero(r);
    for q in 0..=jj.len().min(p) {
        let c = coeff_g(jj.len(), q) * Rational::from_integer(BigInt::from(r).pow(q as u32));
        rhs.add_assign(&frak_d(m, p - q, &sj).scale_rat(&c));
    }
    rhs
}

pub fn s_frak_one_forms(g: &mut FormGen) -> Result<Option<String>> {
    let w = g.form(1);
    let jj = g.index(0, 2);
    let p = g.rng().gen_range(0..=2);
    let lhs = s_iter(&jj, &frak_d(g.m, p, &w));
    let rhs = s_frak_rhs(g.m, &jj, p, &w);
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("J={jj} p={p}: {s}")))
}

pub fn s_frak_graded(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 1);
    let w = g.form(r);
    let jj = g.index(0, 2);
    let p = g.rng().gen_range(0..=2);
    let lhs = s_iter(&jj, &frak_d(g.m, p, &w));
    let rhs = s_frak_rhs(g.m, &jj, p, &w);
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("J={jj} p={p}: {s}")))
}

/// `i_k 𝔇_p = Σ_{|K|≤p} Σ_{|J|=p-|K|} (1/(J!K!)) d_{J+K} S^J i^K_k`.
pub fn contract_frak(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 1);
    let w = g.form(r);
    let k = g.slot();
    let p = g.rng().gen_range(0..=2);
    let lhs = contract_total(k, &frak_d(g.m, p, &w))?;
    let mut rhs = ScalarForm::zero(r - 1);
    for klen in 0..=p {
        for kk in MultiIndex::enumerate(g.m, klen) {
            let contracted = contract_delta(&kk, k, &w)?;
            for jj in MultiIndex::enumerate(g.m, p - klen) {
                let t = s_iter(&jj, &contracted);
                if t.is_zero() {
                    continue;
                }
                let den = BigInt::from(jj.factorial()) * BigInt::from(kk.factorial());
                let c = Rational::new(BigInt::one(), den);
                rhs.add_assign(&lie_multi(&jj.add(&kk), &t).scale_rat(&c));
            }
        }
    }
    Ok(compare(&lhs, &rhs, &w).map(|s| format!("k={k} p={p}: {s}")))
}

pub fn d_squared(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 0);
    let w = g.form(r);
    let dd = exterior_d(&exterior_d(&w));
    Ok(compare(&dd, &ScalarForm::zero(w.degree() + 2), &w))
}

pub fn total_derivatives_commute(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 0);
    let w = g.form(r);
    let (j, k) = (g.slot(), g.slot());
    Ok(compare(&lie_total(j, &lie_total(k, &w)), &lie_total(k, &lie_total(j, &w)), &w))
}

pub fn vertical_endomorphisms_commute(g: &mut FormGen) -> Result<Option<String>> {
    let r = degree(g, 1);
    let w = g.form(r);
    let (i, j) = (g.slot(), g.slot());
    Ok(compare(&s_single(i, &s_single(j, &w)), &s_single(j, &s_single(i, &w)), &w))
}

/// `d_j = i_j d + d i_j` (on functions, `d_j f = i_j df`).
pub fn cartan_total(g: &mut FormGen) -> Result<Option<String>> {
    let r = g.rng().gen_range(0..=1);
    let w = g.form(r);
    let j = g.slot();
    let mut rhs = contract_total(j, &exterior_d(&w))?;
    if w.degree() > 0 {
        rhs = rhs.add(&exterior_d(&contract_total(j, &w)?));
    }
    Ok(compare(&lie_total(j, &w), &rhs, &w))
}

fn vv_degrees(g: &mut FormGen, min_r: usize, max_s: usize) -> (usize, usize) {
    let r = g.rng().gen_range(min_r..=2);
    let s = g.rng().gen_range(0..=max_s);
    (r, s)
}

pub fn d_total_squared(g: &mut FormGen) -> Result<Option<String>> {
    let m = g.m;
    let (r, s) = vv_degrees(g, 0, m);
    let phi = g.vvform(r, s);
    let dd = phi.d_total().d_total();
    Ok(compare_vv(&dd, &VectorValuedForm::zero(g.m, r, s + 2)))
}

pub fn d_commutes_with_d_total(g: &mut FormGen) -> Result<Option<String>> {
    let m = g.m;
    let (r, s) = vv_degrees(g, 0, m);
    let phi = g.vvform(r, s);
    Ok(compare_vv(&phi.d().d_total(), &phi.d_total().d()))
}

/// `d_T = d i_T + i_T d` for `r ≥ 1`.
pub fn d_total_cartan(g: &mut FormGen) -> Result<Option<String>> {
    let m = g.m;
    let (r, s) = vv_degrees(g, 1, m);
    let phi = g.vvform(r, s);
    let rhs = phi.i_total()?.d().add(&phi.d().i_total()?);
    Ok(compare_vv(&phi.d_total(), &rhs))
}

/// `i_T d_T + d_T i_T = 0`.
pub fn i_total_anticommutes(g: &mut FormGen) -> Result<Option<String>> {
    let m = g.m;
    let (r, s) = vv_degrees(g, 1, m);
    let phi = g.vvform(r, s);
    let sum = phi.d_total().i_total()?.add(&phi.i_total()?.d_total());
    Ok(compare_vv(&sum, &VectorValuedForm::zero(g.m, r - 1, s + 2)))
}

/// `P d_T Ψ + d_T P Ψ = Ψ` for `r ≥ 1`, `1 ≤ s < m`, and `d_T P Φ = Φ` on
/// `Φ = d_T Ψ` for `0 ≤ s < m`.
pub fn homotopy_formula(g: &mut FormGen) -> Result<Option<String>> {
    let r = g.rng().gen_range(1..=2);
    let m = g.m;
    let s = g.rng().gen_range(0..m);
    let psi = g.vvform(r, s);
    let dt = psi.d_total();
    let mut lhs = dt.homotopy_p()?;
    if s == 0 {
        lhs = lhs.d_total();
        return Ok(compare_vv(&lhs, &dt));
    }
    lhs = lhs.add(&psi.homotopy_p()?.d_total());
    Ok(compare_vv(&lhs, &psi))
}

/// Identities whose random instances must all hold, with their generators.
pub fn operator_identities() -> Vec<(&'static str, Trial)> {
    vec![
        ("[i^I_i, d_j] = I(j) i^(I-1_j)_i", commutator_contract_total),
        ("[d^I_i, S~^J] = -J(i) S~^(J+I-1_i)", commutator_lie_composite),
        ("[i^I_i, S~^J] = i^(I+J)_i", commutator_contract_composite),
        ("[d^I_i, d_j] = I(j) d^(I-1_j)_i", commutator_lie_total),
        ("S^J D_p = sum_q G(|J|,q) D_(p-q) S^J on 1-forms", s_frak_one_forms),
        ("S^J D_p = sum_q r^q G(|J|,q) D_(p-q) S^J on r-forms", s_frak_graded),
        ("i_k D_p = sum (1/(J!K!)) d_(J+K) S^J i^K_k", contract_frak),
        ("d d = 0", d_squared),
        ("d_j d_k = d_k d_j", total_derivatives_commute),
        ("S^i S^j = S^j S^i", vertical_endomorphisms_commute),
        ("d_j = i_j d + d i_j", cartan_total),
        ("d_T d_T = 0", d_total_squared),
        ("d d_T = d_T d", d_commutes_with_d_total),
        ("d_T = d i_T + i_T d", d_total_cartan),
        ("i_T d_T + d_T i_T = 0", i_total_anticommutes),
        ("P d_T + d_T P = 1", homotopy_formula),
    ]
}

/// Runs every identity on `trials` random inputs drawn with `seed`, cycling
/// through `m ∈ {1, 2}`, `n ∈ {1, 2}` and jet orders up to 3.
pub fn operator_suite(seed: u64, trials: usize) -> Result<Vec<SuiteRow>> {
    let mut rows = Vec::new();
    for (k, (name, trial)) in operator_identities().into_iter().enumerate() {
        let mut row = SuiteRow {
            name: name.to_string(),
            trials: 0,
            failures: 0,
            first_failure: None,
        };
        for t in 0..trials {
            let m = 1 + t % 2;
            let n = 1 + (t / 2) % 2;
            let order = 1 + (t / 4) % 3;
            let sub_seed = seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((k as u64) << 32 | t as u64);
            let mut g = FormGen::new(sub_seed, m, n, order);
            row.trials += 1;
            if let Some(msg) = trial(&mut g)? {
                row.failures += 1;
                row.first_failure
                    .get_or_insert_with(|| format!("m={m} n={n} order={order}: {msg}"));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// The literal 1-form rule `S^J 𝔇_p = Σ_q G_{|J|,q} 𝔇_{p-q} S^J` applied to
/// a form of arbitrary degree; it generally fails above degree one.
pub fn s_frak_literal_holds(m: usize, jj: &MultiIndex, p: usize, w: &ScalarForm) -> bool {
    let lhs = s_iter(jj, &frak_d(m, p, w));
    let sj = s_iter(jj, w);
    let mut rhs = ScalarForm::zero(w.degree());
    for q in 0..=jj.len().min(p) {
        rhs.add_assign(&frak_d(m, p - q, &sj).scale_rat(&coeff_g(jj.len(), q)));
    }
    lhs.equals(&rhs)
}
