use std::fmt;

use crate::error::{Error, Result};
use crate::space::{Point, Signature, Word};

/// A clopen subset of the Cantor model: a finite prefix-free union of
/// cylinders in canonical form (sorted, no complete sibling family).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    sig: Signature,
    words: Vec<Word>,
}

impl ClopenSet {
    pub fn empty(sig: &Signature) -> Self {
        ClopenSet { sig: sig.clone(), words: Vec::new() }
    }

    pub fn full(sig: &Signature) -> Self {
        ClopenSet { sig: sig.clone(), words: vec![Word::empty()] }
    }

    pub fn cylinder(sig: &Signature, w: Word) -> Self {
        ClopenSet::from_words(sig, vec![w])
    }

    /// Union of arbitrary cylinders, canonicalized.
    pub fn from_words(sig: &Signature, words: Vec<Word>) -> Self {
        ClopenSet { sig: sig.clone(), words: canonicalize(sig, words) }
    }

    /// Accepts only a list that is already canonical, naming the violated
    /// rule otherwise.
    pub fn from_canonical(sig: &Signature, words: Vec<Word>) -> Result<Self> {
        for w in &words {
            w.validate(sig)?;
        }
        for pair in words.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::NotCanonical("unsorted or duplicate words".into()));
            }
            if pair[0].is_prefix_of(&pair[1]) {
                return Err(Error::NotCanonical("prefix overlap".into()));
            }
        }
        if canonicalize(sig, words.clone()) != words {
            return Err(Error::NotCanonical("sibling-complete".into()));
        }
        Ok(ClopenSet { sig: sig.clone(), words })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.words.len() == 1 && self.words[0].is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    fn check(&self, other: &ClopenSet) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check(other)?;
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        Ok(ClopenSet::from_words(&self.sig, words))
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check(other)?;
        let mut out = Vec::new();
        for a in &self.words {
            out.extend(other.meet_word(a));
        }
        Ok(ClopenSet::from_words(&self.sig, out))
    }

    pub fn complement(&self) -> ClopenSet {
        let mut out = Vec::new();
        complement_into(&self.sig, &Word::empty(), &self.words, &mut out);
        ClopenSet { sig: self.sig.clone(), words: out }
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.intersect(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// Cylinders of `[w] ∩ self`, as words.
    pub fn meet_word(&self, w: &Word) -> Vec<Word> {
        if self.contains_cylinder(w) {
            return vec![w.clone()];
        }
        let start = self.words.partition_point(|x| x < w);
        self.words[start..].iter().take_while(|x| w.is_prefix_of(x)).cloned().collect()
    }

    /// The word of `self` that is a prefix of `w`, if `[w] ⊆ self`.
    pub fn covering_word(&self, w: &Word) -> Option<&Word> {
        let idx = self.words.partition_point(|x| x <= w);
        if idx == 0 {
            return None;
        }
        let cand = &self.words[idx - 1];
        cand.is_prefix_of(w).then_some(cand)
    }

    pub fn contains_cylinder(&self, w: &Word) -> bool {
        self.covering_word(w).is_some()
    }

    pub fn meets_cylinder(&self, w: &Word) -> bool {
        !self.meet_word(w).is_empty()
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.words.iter().any(|w| x.in_cylinder(w))
    }

    /// The cylinders of `self` refined to length at least `depth`.
    pub fn cylinders_at_least(&self, depth: usize) -> Vec<Word> {
        self.words
            .iter()
            .flat_map(|w| if w.len() >= depth { vec![w.clone()] } else { w.extensions(&self.sig, depth) })
            .collect()
    }

    pub fn fmt_words(&self) -> String {
        let sep = self.sig.max_radix() > 10;
        let parts: Vec<String> = self.words.iter().map(|w| w.fmt_with(sep)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_words())
    }
}

/// Sorted, prefix-free, sibling-merged form of an arbitrary cylinder union.
pub(crate) fn canonicalize(sig: &Signature, mut words: Vec<Word>) -> Vec<Word> {
    words.sort();
    words.dedup();
    let mut stack: Vec<Word> = Vec::with_capacity(words.len());
    for w in words {
        if let Some(top) = stack.last() {
            if top.is_prefix_of(&w) {
                continue;
            }
        }
        stack.push(w);
        collapse(sig, &mut stack);
    }
    stack
}

fn collapse(sig: &Signature, stack: &mut Vec<Word>) {
    loop {
        let Some(top) = stack.last() else { return };
        let Some(parent) = top.parent() else { return };
        let r = sig.radix(parent.len()) as usize;
        if top.last() != Some(r as u32 - 1) || stack.len() < r {
            return;
        }
        let tail = &stack[stack.len() - r..];
        let full = tail
            .iter()
            .enumerate()
            .all(|(d, w)| w.len() == parent.len() + 1 && parent.is_prefix_of(w) && w.last() == Some(d as u32));
        if !full {
            return;
        }
        stack.truncate(stack.len() - r);
        stack.push(parent);
    }
}

fn complement_into(sig: &Signature, prefix: &Word, words: &[Word], out: &mut Vec<Word>) {
    if words.is_empty() {
        out.push(prefix.clone());
        return;
    }
    if words[0] == *prefix {
        return;
    }
    let mut rest = words;
    for child in prefix.children(sig) {
        let n = rest.iter().take_while(|w| child.is_prefix_of(w)).count();
        let (mine, others) = rest.split_at(n);
        complement_into(sig, &child, mine, out);
        rest = others;
    }
}

/// Canonical split of a nonempty clopen set into `m` nonempty disjoint
/// parts: refine the lexicographically last cylinder until at least `m`
/// cylinders exist; the first `m-1` cylinders become singleton parts and the
/// remaining cylinders form the last part.
pub fn split(set: &ClopenSet, m: usize) -> Result<Vec<ClopenSet>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if m == 0 {
        return Err(Error::InvalidArgument("split into zero parts".into()));
    }
    let sig = set.signature();
    let mut cyl = set.words().to_vec();
    while cyl.len() < m {
        let last = cyl.pop().expect("nonempty");
        cyl.extend(last.children(sig));
    }
    let mut parts: Vec<ClopenSet> =
        cyl[..m - 1].iter().map(|w| ClopenSet::cylinder(sig, w.clone())).collect();
    parts.push(ClopenSet::from_words(sig, cyl[m - 1..].to_vec()));
    Ok(parts)
}
