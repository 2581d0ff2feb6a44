//! Seeded generators of random polynomial forms for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{Covector, ScalarForm};
use crate::multiindex::MultiIndex;
use crate::symbolic::{int, JetVar, Monomial, Poly, RatExpr};
use crate::vvforms::VectorValuedForm;

/// Draws small polynomial forms in `m` slots, `n` dependent variables and
/// jet order at most `max_order`.
pub struct FormGen {
    rng: ChaCha8Rng,
    pub m: usize,
    pub n: usize,
    pub max_order: usize,
}

impl FormGen {
    pub fn new(seed: u64, m: usize, n: usize, max_order: usize) -> Self {
        FormGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            m,
            n,
            max_order,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn index(&mut self, min_len: usize, max_len: usize) -> MultiIndex {
        let len = self.rng.gen_range(min_len..=max_len);
        let mut counts = vec![0u16; self.m];
        for _ in 0..len {
            counts[self.rng.gen_range(0..self.m)] += 1;
        }
        MultiIndex::from_counts(&counts)
    }

    pub fn slot(&mut self) -> usize {
        self.rng.gen_range(1..=self.m)
    }

    pub fn var(&mut self) -> JetVar {
        let alpha = self.rng.gen_range(1..=self.n);
        let max = self.max_order;
        JetVar::new(alpha, self.index(0, max))
    }

    /// A polynomial with up to three terms of degree at most two.
    pub fn poly(&mut self) -> Poly {
        let terms = self.rng.gen_range(1..=3);
        let mut p = Poly::zero();
        for _ in 0..terms {
            let mut mono = Monomial::one();
            for _ in 0..self.rng.gen_range(0..=2) {
                mono = mono.mul(&Monomial::var(self.var()));
            }
            let c = self.rng.gen_range(-3i64..=3);
            p = p.add(&Poly::term(mono, int(c)));
        }
        p
    }

    pub fn form(&mut self, degree: usize) -> ScalarForm {
        let mut w = ScalarForm::zero(degree);
        for _ in 0..self.rng.gen_range(1..=3) {
            let covectors: Vec<Covector> = (0..degree).map(|_| Covector(self.var())).collect();
            w.add_assign(&ScalarForm::basis(covectors, RatExpr::from_poly(self.poly())));
        }
        w
    }

    pub fn vvform(&mut self, r: usize, s: usize) -> VectorValuedForm {
        let mut phi = VectorValuedForm::zero(self.m, r, s);
        let frames = subsets(self.m, s);
        for frame in frames {
            if self.rng.gen_bool(0.7) {
                let w = self.form(r);
                let cur = phi.get(&frame).expect("valid frame");
                phi.set(&frame, cur.add(&w)).expect("valid frame");
            }
        }
        phi
    }
}

/// Increasing `s`-subsets of `1..=m`.
pub fn subsets(m: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(i);
            go(i + 1, m, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, s, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = FormGen::new(7, 2, 2, 3).form(2);
        let b = FormGen::new(7, 2, 2, 3).form(2);
        assert_eq!(a, b);
        assert!(a.max_order() <= 3);
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(3, 2).len(), 3);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }
}
