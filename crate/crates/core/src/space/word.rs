use std::fmt;

use crate::error::{Error, Result};
use crate::space::Signature;

/// A finite digit word; names the cylinder of all points extending it.
///
/// Words order lexicographically with a prefix sorting before its
/// extensions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(digits: Vec<u32>) -> Self {
        Word(digits)
    }

    pub fn checked(sig: &Signature, digits: Vec<u32>) -> Result<Self> {
        let w = Word(digits);
        w.validate(sig)?;
        Ok(w)
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for (level, &digit) in self.0.iter().enumerate() {
            let radix = sig.radix(level);
            if digit >= radix {
                return Err(Error::DigitOutOfRange { level, digit, radix });
            }
        }
        Ok(())
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    pub fn child(&self, digit: u32) -> Word {
        let mut d = self.0.clone();
        d.push(digit);
        Word(d)
    }

    pub fn children(&self, sig: &Signature) -> impl Iterator<Item = Word> + '_ {
        (0..sig.radix(self.len())).map(move |d| self.child(d))
    }

    pub fn parent(&self) -> Option<Word> {
        (!self.0.is_empty()).then(|| Word(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn concat(&self, tail: &[u32]) -> Word {
        let mut d = self.0.clone();
        d.extend_from_slice(tail);
        Word(d)
    }

    pub fn suffix_after(&self, prefix: &Word) -> &[u32] {
        debug_assert!(prefix.is_prefix_of(self));
        &self.0[prefix.len()..]
    }

    /// All words of length `len` extending `self`, in lexicographic order.
    pub fn extensions(&self, sig: &Signature, len: usize) -> Vec<Word> {
        let mut out = vec![self.clone()];
        for level in self.len()..len {
            let r = sig.radix(level);
            out = out.into_iter().flat_map(|w| (0..r).map(move |d| w.child(d))).collect();
        }
        out
    }

    /// Mixed-radix value with digit 0 least significant.
    pub fn value(&self, sig: &Signature) -> Result<u128> {
        let mut v = 0u128;
        let mut place = 1u128;
        for (t, &d) in self.0.iter().enumerate() {
            v = v.checked_add(place.checked_mul(d as u128).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            place = place.checked_mul(sig.radix(t) as u128).ok_or(Error::Overflow)?;
        }
        Ok(v)
    }

    /// Inverse of [`Word::value`] for words of length `len`.
    pub fn from_value(sig: &Signature, mut value: u128, len: usize) -> Word {
        let mut digits = Vec::with_capacity(len);
        for t in 0..len {
            let r = sig.radix(t) as u128;
            digits.push((value % r) as u32);
            value /= r;
        }
        Word(digits)
    }

    pub fn fmt_with(&self, separated: bool) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        if separated {
            parts.join(".")
        } else {
            parts.concat()
        }
    }
}

/// Adds `k` to the digit block `digits` whose first digit sits at level
/// `start`, returning the new block and the carry out (floor division, so
/// negative `k` borrows).
pub fn add_at(sig: &Signature, digits: &[u32], start: usize, k: i64) -> (Vec<u32>, i64) {
    let mut carry = k;
    let mut out = Vec::with_capacity(digits.len());
    for (i, &d) in digits.iter().enumerate() {
        let r = sig.radix(start + i) as i64;
        let s = d as i64 + carry;
        out.push(s.rem_euclid(r) as u32);
        carry = s.div_euclid(r);
    }
    (out, carry)
}

/// Index of the first digit at which `z` and `z + delta` differ, for any
/// tail `z` starting at level `start`; independent of `z`.
pub fn translation_valuation(sig: &Signature, start: usize, mut delta: i64) -> usize {
    debug_assert!(delta != 0);
    let mut i = 0;
    loop {
        let r = sig.radix(start + i) as i64;
        if delta % r != 0 {
            return i;
        }
        delta /= r;
        i += 1;
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.fmt_with(self.0.iter().any(|&d| d > 9)))
    }
}

impl From<&str> for Word {
    /// Digit-string shorthand for tests: `"010"`.
    fn from(s: &str) -> Self {
        Word(s.chars().map(|c| c.to_digit(10).expect("decimal digit")).collect())
    }
}
