//! Multi-indices over the `m` independent-variable slots.
//!
//! Slots are numbered `1..=m` in the public API, matching the usual
//! `I(i)`, `1_i`, `I + 1_j` notation. Multi-indices are ordered graded
//! lexicographically: first by length, then by counts with the earlier
//! slots weighing more, so that for `m = 2, p = 2` the order is
//! `(2,0) < (1,1) < (0,2)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest number of independent variables supported.
pub const MAX_SLOTS: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    m: u8,
    len: u16,
    counts: [u16; MAX_SLOTS],
}

impl MultiIndex {
    /// The zero multi-index over `m` slots.
    pub fn zero(m: usize) -> Self {
        assert!(
            (1..=MAX_SLOTS).contains(&m),
            "m must lie in 1..={MAX_SLOTS}, got {m}"
        );
        MultiIndex {
            m: m as u8,
            len: 0,
            counts: [0; MAX_SLOTS],
        }
    }

    /// `1_i`, the unit multi-index in slot `i`.
    pub fn unit(m: usize, i: usize) -> Self {
        Self::zero(m).increment(i)
    }

    pub fn from_counts(counts: &[u16]) -> Self {
        let mut out = Self::zero(counts.len());
        for (slot, &c) in counts.iter().enumerate() {
            out.counts[slot] = c;
            out.len += c;
        }
        out
    }

    /// Number of slots `m`.
    pub fn dim(&self) -> usize {
        self.m as usize
    }

    /// `|I|`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_zero(&self) -> bool {
        self.len == 0
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts[..self.m as usize]
    }

    /// `I(i)` for a slot `i` in `1..=m`.
    pub fn at(&self, i: usize) -> usize {
        self.check_slot(i);
        self.counts[i - 1] as usize
    }

    /// `I!`, the product of the count factorials.
    pub fn factorial(&self) -> BigUint {
        self.counts()
            .iter()
            .fold(BigUint::one(), |acc, &c| acc * factorial(c as usize))
    }

    /// `|I|!/I!`, the multinomial coefficient.
    pub fn weight(&self) -> BigUint {
        factorial(self.len()) / self.factorial()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        self.check_dim(other);
        let mut out = *self;
        for slot in 0..self.dim() {
            out.counts[slot] += other.counts[slot];
        }
        out.len += other.len;
        out
    }

    /// Componentwise difference; any negative count is a hard error.
    pub fn subtract(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.checked_sub(other).ok_or_else(|| {
            Error::DegenerateIndex(format!("{self} - {other} has a negative count"))
        })
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.check_dim(other);
        let mut out = *self;
        for slot in 0..self.dim() {
            out.counts[slot] = self.counts[slot].checked_sub(other.counts[slot])?;
        }
        out.len -= other.len;
        Some(out)
    }

    /// `I + 1_i`.
    pub fn increment(&self, i: usize) -> MultiIndex {
        self.check_slot(i);
        let mut out = *self;
        out.counts[i - 1] += 1;
        out.len += 1;
        out
    }

    /// `I - 1_i`, or `None` when `I(i) = 0`.
    pub fn decrement(&self, i: usize) -> Option<MultiIndex> {
        self.check_slot(i);
        if self.counts[i - 1] == 0 {
            return None;
        }
        let mut out = *self;
        out.counts[i - 1] -= 1;
        out.len -= 1;
        Some(out)
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.check_dim(other);
        (0..self.dim()).all(|s| self.counts[s] >= other.counts[s])
    }

    /// `I!/(I-J)!`, the falling-factorial product; zero unless `I >= J`.
    pub fn falling_factorial(&self, lower: &MultiIndex) -> u64 {
        self.check_dim(lower);
        let mut acc = 1u64;
        for s in 0..self.dim() {
            let (a, b) = (self.counts[s] as u64, lower.counts[s] as u64);
            if b > a {
                return 0;
            }
            for t in (a - b + 1)..=a {
                acc *= t;
            }
        }
        acc
    }

    /// Slots listed with multiplicity, e.g. `(2,1)` gives `[1, 1, 2]`.
    pub fn slots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        for (s, &c) in self.counts().iter().enumerate() {
            out.extend(std::iter::repeat_n(s + 1, c as usize));
        }
        out
    }

    /// All multi-indices of length `p` over `m` slots, in graded-lex order.
    pub fn enumerate(m: usize, p: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut counts = vec![0u16; m];
        fill(&mut counts, 0, p, &mut out);
        out
    }

    /// All multi-indices with `|I| <= p`, in graded-lex order.
    pub fn enumerate_up_to(m: usize, p: usize) -> Vec<MultiIndex> {
        (0..=p).flat_map(|q| Self::enumerate(m, q)).collect()
    }

    fn check_slot(&self, i: usize) {
        assert!(
            i >= 1 && i <= self.dim(),
            "slot {i} out of range 1..={}",
            self.dim()
        );
    }

    fn check_dim(&self, other: &MultiIndex) {
        assert_eq!(self.m, other.m, "multi-indices over different slot counts");
    }
}

// Earlier slots first, largest count first: (p,0,..) precedes (p-1,1,..).
fn fill(counts: &mut [u16], slot: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if slot + 1 == counts.len() {
        counts[slot] = remaining as u16;
        out.push(MultiIndex::from_counts(counts));
        counts[slot] = 0;
        return;
    }
    for c in (0..=remaining).rev() {
        counts[slot] = c as u16;
        fill(counts, slot + 1, remaining - c, out);
    }
    counts[slot] = 0;
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m
            .cmp(&other.m)
            .then(self.len.cmp(&other.len))
            .then_with(|| other.counts().cmp(self.counts()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (s, c) in self.counts().iter().enumerate() {
            if s > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Parses `(c1,...,cm)`; the parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let counts = body
            .split(',')
            .map(|c| c.trim().parse::<u16>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::IndexOutOfRange(format!("bad multi-index {s:?}: {e}")))?;
        if counts.is_empty() || counts.len() > MAX_SLOTS {
            return Err(Error::IndexOutOfRange(format!(
                "multi-index {s:?} must have between 1 and {MAX_SLOTS} slots"
            )));
        }
        Ok(MultiIndex::from_counts(&counts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(c: &[u16]) -> MultiIndex {
        MultiIndex::from_counts(c)
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn length_factorial_weight() {
        assert_eq!(mi(&[0, 0]).len(), 0);
        assert_eq!(mi(&[2, 1]).len(), 3);
        assert_eq!(mi(&[0, 4]).len(), 4);
        assert_eq!(mi(&[0, 0]).factorial(), BigUint::from(1u32));
        assert_eq!(mi(&[2, 1]).factorial(), BigUint::from(2u32));
        assert_eq!(mi(&[3, 3]).factorial(), BigUint::from(36u32));
        assert_eq!(mi(&[0, 0]).weight(), BigUint::from(1u32));
        assert_eq!(mi(&[2, 1]).weight(), BigUint::from(3u32));
        assert_eq!(mi(&[1, 1]).weight(), BigUint::from(2u32));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(mi(&[1, 0]).add(&mi(&[0, 1])), mi(&[1, 1]));
        assert_eq!(mi(&[2, 1]).subtract(&mi(&[1, 1])).unwrap(), mi(&[1, 0]));
        assert!(matches!(
            mi(&[0, 1]).subtract(&mi(&[1, 0])),
            Err(Error::DegenerateIndex(_))
        ));
        assert_eq!(mi(&[0, 1]).increment(1), mi(&[1, 1]));
        assert_eq!(mi(&[2, 1]).at(1), 2);
        assert_eq!(mi(&[0, 1]).decrement(1), None);
        assert_eq!(mi(&[3, 1]).falling_factorial(&mi(&[2, 0])), 6);
        assert_eq!(mi(&[1, 1]).falling_factorial(&mi(&[2, 0])), 0);
        assert_eq!(mi(&[2, 1]).slots(), vec![1, 1, 2]);
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(MultiIndex::enumerate(2, 0), vec![mi(&[0, 0])]);
        assert_eq!(
            MultiIndex::enumerate(2, 2),
            vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]
        );
        assert_eq!(MultiIndex::enumerate(1, 3), vec![mi(&[3])]);
        let all = MultiIndex::enumerate_up_to(3, 3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_form_round_trips() {
        let i = mi(&[2, 0, 1]);
        assert_eq!(i.to_string(), "(2,0,1)");
        assert_eq!("(2,0,1)".parse::<MultiIndex>().unwrap(), i);
        assert_eq!("3".parse::<MultiIndex>().unwrap(), mi(&[3]));
        assert!("(a,1)".parse::<MultiIndex>().is_err());
    }

    fn arb_pair() -> impl Strategy<Value = (MultiIndex, MultiIndex)> {
        (1usize..=4).prop_flat_map(|m| {
            (
                proptest::collection::vec(0u16..5, m),
                proptest::collection::vec(0u16..5, m),
            )
                .prop_map(|(a, b)| (mi(&a), mi(&b)))
        })
    }

    proptest! {
        #[test]
        fn weight_times_factorial_is_length_factorial((a, b) in arb_pair()) {
            let s = a.add(&b);
            prop_assert_eq!(s.weight() * s.factorial(), factorial(a.len() + b.len()));
            prop_assert_eq!(s.subtract(&b).unwrap(), a);
        }

        #[test]
        fn enumeration_size_and_weight_sum(m in 1usize..=4, p in 0usize..=6) {
            let list = MultiIndex::enumerate(m, p);
            prop_assert_eq!(list.len(), binomial(p + m - 1, m - 1));
            let total: BigUint = list.iter().map(|i| i.weight()).sum();
            prop_assert_eq!(total, BigUint::from(m).pow(p as u32));
            let mut dedup = list.clone();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), list.len());
        }
    }
}
