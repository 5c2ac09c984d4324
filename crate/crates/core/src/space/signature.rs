use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Eventually periodic sequence of level sizes `λ_0, λ_1, ...`.
///
/// The signature fixes the alphabet at every level of the Cantor model:
/// digit `t` of a point ranges over `0..λ_t`. Signatures are stored in a
/// canonical form (primitive period, shortest preperiod) so that two
/// signatures describing the same sequence compare equal.
#[derive(Clone)]
pub struct Signature(Arc<Levels>);

#[derive(PartialEq, Eq, Hash)]
struct Levels {
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl Signature {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidSignature("empty period".into()));
        }
        if let Some(bad) = preperiod.iter().chain(&period).find(|&&l| l < 2) {
            return Err(Error::InvalidSignature(format!("level size {bad} < 2")));
        }
        let (preperiod, period) = canonical(preperiod, period);
        Ok(Signature(Arc::new(Levels { preperiod, period })))
    }

    pub fn dyadic() -> Self {
        Signature::constant(2)
    }

    pub fn constant(radix: u32) -> Self {
        Signature::new(vec![], vec![radix]).expect("radix >= 2")
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.0.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.0.period
    }

    pub fn is_dyadic(&self) -> bool {
        self.0.preperiod.is_empty() && self.0.period == [2]
    }

    /// `λ_t`.
    pub fn radix(&self, level: usize) -> u32 {
        let pre = &self.0.preperiod;
        if level < pre.len() {
            pre[level]
        } else {
            let per = &self.0.period;
            per[(level - pre.len()) % per.len()]
        }
    }

    pub fn max_radix(&self) -> u32 {
        self.0.preperiod.iter().chain(&self.0.period).copied().max().unwrap_or(2)
    }

    /// Number of cylinders of length `len`, i.e. `p_{len-1}`.
    pub fn cylinder_count(&self, len: usize) -> Result<u128> {
        (0..len).try_fold(1u128, |acc, t| acc.checked_mul(self.radix(t) as u128).ok_or(Error::Overflow))
    }

    /// Position class used to detect repetition in digit automata.
    pub(crate) fn phase(&self, level: usize) -> usize {
        let pre = self.0.preperiod.len();
        if level < pre {
            level
        } else {
            pre + (level - pre) % self.0.period.len()
        }
    }

    /// Whether `λ_{a+i} = λ_{b+i}` for all `i`, so that a tail read after
    /// position `a` can be written after position `b`.
    pub fn tails_compatible(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let horizon = self.0.preperiod.len() + self.0.period.len();
        (0..horizon).all(|i| self.radix(a + i) == self.radix(b + i))
    }

    /// Smallest length `>= len` in the tail-compatibility class of length 0
    /// when one exists beyond the preperiod; used to align cylinders before
    /// pairing them.
    pub(crate) fn aligned_length(&self, len: usize) -> usize {
        let pre = self.0.preperiod.len();
        let per = self.0.period.len();
        let mut l = len.max(pre);
        while (l - pre) % per != 0 {
            l += 1;
        }
        l
    }

    /// Product of the radices of one full period.
    pub(crate) fn period_product(&self) -> u128 {
        self.0.period.iter().map(|&l| l as u128).product()
    }
}

fn canonical(mut preperiod: Vec<u32>, period: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
    let n = period.len();
    let root = (1..=n)
        .find(|&d| n % d == 0 && (0..n).all(|i| period[i] == period[i % d]))
        .unwrap_or(n);
    let mut period: Vec<u32> = period[..root].to_vec();
    while let Some(&last) = preperiod.last() {
        if last != *period.last().unwrap() {
            break;
        }
        preperiod.pop();
        period.rotate_right(1);
    }
    (preperiod, period)
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Signature {}

impl std::hash::Hash for Signature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dyadic() {
            return write!(f, "dyadic");
        }
        let join = |v: &[u32]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "sig({}|{})", join(&self.0.preperiod), join(&self.0.period))
    }
}
