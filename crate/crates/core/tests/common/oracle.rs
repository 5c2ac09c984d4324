//! Brute-force models for re-checking library results: clopen sets as
//! explicit word sets at one length, maps as branch lists applied digit by
//! digit, measures as sums over words.

use std::collections::BTreeSet;

use cdyn::homeo::{Branch, CylinderHomeo};
use cdyn::rational::{dyadic, int, Rational};
use cdyn::space::{ClopenSet, Signature, Word};

pub type Digits = Vec<u32>;

/// All words of length `len` extending `w`.
pub fn extend(sig: &Signature, w: &[u32], len: usize) -> Vec<Digits> {
    let mut out = vec![w.to_vec()];
    for level in w.len()..len {
        out = out
            .into_iter()
            .flat_map(|p| (0..sig.radix(level)).map(move |d| [p.as_slice(), &[d]].concat()))
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Set {
    pub len: usize,
    pub words: BTreeSet<Digits>,
}

impl Set {
    pub fn from_words(sig: &Signature, words: impl IntoIterator<Item = Digits>) -> Set {
        let words: Vec<Digits> = words.into_iter().collect();
        let len = words.iter().map(Vec::len).max().unwrap_or(0);
        Set { len, words: words.iter().flat_map(|w| extend(sig, w, len)).collect() }
    }

    pub fn of(c: &ClopenSet) -> Set {
        Set::from_words(c.signature(), c.words().iter().map(|w| w.digits().to_vec()))
    }

    pub fn full(sig: &Signature, len: usize) -> Set {
        Set { len, words: extend(sig, &[], len).into_iter().collect() }
    }

    pub fn at(&self, sig: &Signature, len: usize) -> Set {
        assert!(len >= self.len);
        Set { len, words: self.words.iter().flat_map(|w| extend(sig, w, len)).collect() }
    }

    pub fn to_clopen(&self, sig: &Signature) -> ClopenSet {
        ClopenSet::from_words(sig, self.words.iter().map(|w| Word::new(w.clone())).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self, sig: &Signature) -> bool {
        self.words.len() as u128 == (0..self.len).map(|l| sig.radix(l) as u128).product::<u128>()
    }

    /// Pointwise combination; `f(false, false)` must be false.
    fn op(&self, sig: &Signature, other: &Set, f: impl Fn(bool, bool) -> bool) -> Set {
        let len = self.len.max(other.len);
        let (a, b) = (self.at(sig, len), other.at(sig, len));
        let words = a
            .words
            .union(&b.words)
            .filter(|w| f(a.words.contains(*w), b.words.contains(*w)))
            .cloned()
            .collect();
        Set { len, words }
    }

    pub fn union(&self, sig: &Signature, o: &Set) -> Set {
        self.op(sig, o, |x, y| x || y)
    }

    pub fn intersect(&self, sig: &Signature, o: &Set) -> Set {
        self.op(sig, o, |x, y| x && y)
    }

    pub fn minus(&self, sig: &Signature, o: &Set) -> Set {
        self.op(sig, o, |x, y| x && !y)
    }

    pub fn complement(&self, sig: &Signature) -> Set {
        Set::full(sig, self.len).minus(sig, self)
    }

    pub fn same(&self, sig: &Signature, o: &Set) -> bool {
        self.op(sig, o, |x, y| x != y).is_empty()
    }

    pub fn subset(&self, sig: &Signature, o: &Set) -> bool {
        self.minus(sig, o).is_empty()
    }

    /// `sup d(x, y)` over the set, with `d = 2^-(first differing level)`.
    pub fn diameter(&self) -> Rational {
        let ws: Vec<&Digits> = self.words.iter().collect();
        let mut best = if ws.is_empty() { int(0) } else { dyadic(self.len) };
        for (i, u) in ws.iter().enumerate() {
            for v in &ws[i + 1..] {
                best = best.max(dyadic(common_prefix(u, v)));
            }
        }
        best
    }

    /// `inf d(x, y)` between two disjoint sets.
    pub fn distance(&self, sig: &Signature, o: &Set) -> Rational {
        let len = self.len.max(o.len);
        let (a, b) = (self.at(sig, len), o.at(sig, len));
        let mut best: Option<Rational> = None;
        for u in &a.words {
            for v in &b.words {
                let d = dyadic(common_prefix(u, v));
                best = Some(best.map_or(d.clone(), |b| b.min(d)));
            }
        }
        best.unwrap_or_else(|| int(0))
    }
}

pub fn common_prefix(u: &[u32], v: &[u32]) -> usize {
    u.iter().zip(v).take_while(|(a, b)| a == b).count()
}

/// Adds `k` to the mixed-radix integer whose least significant digit sits at
/// `start`; returns the digits and the carry out of the top.
pub fn add(sig: &Signature, digits: &[u32], start: usize, k: i64) -> (Digits, i64) {
    let mut carry = k as i128;
    let mut out = Vec::with_capacity(digits.len());
    for (i, &d) in digits.iter().enumerate() {
        let r = sig.radix(start + i) as i128;
        let v = d as i128 + carry;
        out.push(v.rem_euclid(r) as u32);
        carry = v.div_euclid(r);
    }
    (out, carry as i64)
}

/// A branch list `u·y ↦ v·(y + k)`.
#[derive(Clone, Debug)]
pub struct Map {
    pub sig: Signature,
    pub branches: Vec<(Digits, Digits, i64)>,
}

impl Map {
    pub fn new(sig: &Signature, branches: &[Branch]) -> Map {
        Map {
            sig: sig.clone(),
            branches: branches.iter().map(|b| (b.domain.digits().to_vec(), b.image.digits().to_vec(), b.shift)).collect(),
        }
    }

    pub fn of(c: &CylinderHomeo) -> Map {
        Map::new(c.signature(), c.branches())
    }

    pub fn depth(&self) -> usize {
        self.branches.iter().map(|b| b.0.len()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Map {
        Map { sig: self.sig.clone(), branches: self.branches.iter().map(|(u, v, k)| (v.clone(), u.clone(), -k)).collect() }
    }

    /// `[w]` is sent onto the cylinder `[word]`, with tails translated by
    /// `carry`. Needs `|w|` at least the depth of the branch covering it.
    pub fn piece(&self, w: &[u32]) -> Option<(Digits, i64)> {
        let (u, v, k) = self.branches.iter().find(|b| w.starts_with(&b.0))?;
        let (tail, carry) = add(&self.sig, &w[u.len()..], u.len(), *k);
        Some(([v.as_slice(), &tail].concat(), carry))
    }

    pub fn image(&self, s: &Set) -> Set {
        let s = s.at(&self.sig, s.len.max(self.depth()));
        Set::from_words(&self.sig, s.words.iter().map(|w| self.piece(w).expect("domains cover Ω").0))
    }

    pub fn preimage(&self, s: &Set) -> Set {
        self.inverse().image(s)
    }

    pub fn iterate(&self, s: &Set, n: usize) -> Set {
        (0..n).fold(s.clone(), |acc, _| self.image(&acc))
    }
}

/// `μ(s)` for a measure given by its per-level digit weights.
pub fn mass(s: &Set, row: &dyn Fn(usize, u32) -> Rational) -> Rational {
    s.words
        .iter()
        .map(|w| w.iter().enumerate().fold(int(1), |acc, (i, &d)| acc * row(i, d)))
        .fold(int(0), |a, b| a + b)
}

pub fn uniform_mass(sig: &Signature, s: &Set) -> Rational {
    mass(s, &|level, _| Rational::new(1.into(), sig.radix(level).into()))
}
