//! Branch tables: finite lists of affine cylinder pieces `u·y ↦ v·(y+κ)`.
//!
//! A tail `y` read from level `|u|` is translated by `κ` in the group of
//! mixed-radix integers and written after `v`; `κ = 0` is plain prefix
//! replacement. Tables may be partial (the domain need not cover Ω).

use std::fmt;

use crate::space::{add_at, canonicalize, ClopenSet, Signature, Word};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub domain: Word,
    pub image: Word,
    pub shift: i64,
}

impl Branch {
    pub fn new(domain: Word, image: Word, shift: i64) -> Self {
        Branch { domain, image, shift }
    }

    /// The same map restricted to the subcylinder `[c]` of the domain.
    pub fn restrict(&self, sig: &Signature, c: &Word) -> Branch {
        let s = c.suffix_after(&self.domain);
        let (digits, carry) = add_at(sig, s, self.domain.len(), self.shift);
        Branch { domain: c.clone(), image: self.image.concat(&digits), shift: carry }
    }

    /// The piece of this branch landing in `[target]`, `target` extending the image.
    pub fn pullback(&self, sig: &Signature, target: &Word) -> Branch {
        let r = target.suffix_after(&self.image);
        let (pre, carry) = add_at(sig, r, self.image.len(), -self.shift);
        Branch { domain: self.domain.concat(&pre), image: target.clone(), shift: -carry }
    }

    pub fn inverse(&self) -> Branch {
        Branch { domain: self.image.clone(), image: self.domain.clone(), shift: -self.shift }
    }

    pub fn fmt_with(&self, separated: bool) -> String {
        let mut s = format!("{}->{}", self.domain.fmt_with(separated), self.image.fmt_with(separated));
        if self.shift != 0 {
            s.push_str(&format!("{:+}", self.shift));
        }
        s
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(false))
    }
}

/// Branches with pairwise disjoint domains, sorted by domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct BranchMap {
    pub sig: Signature,
    pub branches: Vec<Branch>,
}

impl BranchMap {
    pub fn new(sig: &Signature, mut branches: Vec<Branch>) -> Self {
        branches.sort();
        BranchMap { sig: sig.clone(), branches }
    }

    pub fn empty(sig: &Signature) -> Self {
        BranchMap { sig: sig.clone(), branches: Vec::new() }
    }

    pub fn identity(sig: &Signature) -> Self {
        BranchMap { sig: sig.clone(), branches: vec![Branch::new(Word::empty(), Word::empty(), 0)] }
    }

    pub fn domain(&self) -> ClopenSet {
        ClopenSet::from_words(&self.sig, self.branches.iter().map(|b| b.domain.clone()).collect())
    }

    pub fn range(&self) -> ClopenSet {
        ClopenSet::from_words(&self.sig, self.branches.iter().map(|b| b.image.clone()).collect())
    }

    /// The branch whose domain contains `[w]`.
    pub fn branch_at(&self, w: &Word) -> Option<&Branch> {
        let i = self.branches.partition_point(|b| b.domain <= *w);
        i.checked_sub(1).map(|i| &self.branches[i]).filter(|b| b.domain.is_prefix_of(w))
    }

    /// Branches whose domain lies inside `[w]`.
    pub fn branches_under<'a>(&'a self, w: &'a Word) -> impl Iterator<Item = &'a Branch> + 'a {
        let i = self.branches.partition_point(|b| b.domain < *w);
        self.branches[i..].iter().take_while(move |b| w.is_prefix_of(&b.domain))
    }

    /// The branches covering `[w]`, each restricted to lie inside `[w]`;
    /// `None` unless the domain contains `[w]`.
    pub fn pieces_over(&self, w: &Word) -> Option<Vec<Branch>> {
        if let Some(b) = self.branch_at(w) {
            return Some(vec![b.restrict(&self.sig, w)]);
        }
        let pieces: Vec<Branch> = self.branches_under(w).cloned().collect();
        let words: Vec<Word> = pieces.iter().map(|b| b.domain.clone()).collect();
        let covered = canonicalize(&self.sig, words);
        (covered.len() == 1 && covered[0] == *w).then_some(pieces)
    }

    pub fn image_of_cylinder(&self, w: &Word) -> Option<Vec<Word>> {
        self.pieces_over(w).map(|p| p.into_iter().map(|b| b.image).collect())
    }

    /// Setwise image; `None` unless `set` lies in the domain.
    pub fn image(&self, set: &ClopenSet) -> Option<ClopenSet> {
        let mut words = Vec::new();
        for w in set.words() {
            words.extend(self.image_of_cylinder(w)?);
        }
        Some(ClopenSet::from_words(&self.sig, words))
    }

    pub fn inverse(&self) -> BranchMap {
        BranchMap::new(&self.sig, self.branches.iter().map(Branch::inverse).collect()).canonical()
    }

    /// `self ∘ inner`, defined where `inner` lands in the domain of `self`.
    pub fn compose(&self, inner: &BranchMap) -> BranchMap {
        let sig = &self.sig;
        let mut out = Vec::new();
        for ib in &inner.branches {
            if let Some(ob) = self.branch_at(&ib.image) {
                let r = ob.restrict(sig, &ib.image);
                out.push(Branch::new(ib.domain.clone(), r.image, ib.shift + r.shift));
            } else {
                for ob in self.branches_under(&ib.image) {
                    let p = ib.pullback(sig, &ob.domain);
                    out.push(Branch::new(p.domain, ob.image.clone(), p.shift + ob.shift));
                }
            }
        }
        BranchMap::new(sig, out).canonical()
    }

    /// Restriction to `set`; parts of `set` outside the domain are dropped.
    pub fn restrict(&self, set: &ClopenSet) -> BranchMap {
        let mut out = Vec::new();
        for w in set.words() {
            if let Some(b) = self.branch_at(w) {
                out.push(b.restrict(&self.sig, w));
            } else {
                out.extend(self.branches_under(w).cloned());
            }
        }
        BranchMap::new(&self.sig, out).canonical()
    }

    /// Union with a map on a disjoint domain.
    pub fn union(&self, other: &BranchMap) -> BranchMap {
        let mut all = self.branches.clone();
        all.extend(other.branches.iter().cloned());
        BranchMap::new(&self.sig, all).canonical()
    }

    /// Merges complete sibling families whose pieces are restrictions of a
    /// single affine branch. The result depends only on the map.
    pub fn canonical(self) -> BranchMap {
        let sig = self.sig;
        let mut stack: Vec<Branch> = Vec::with_capacity(self.branches.len());
        for b in self.branches {
            stack.push(b);
            while let Some(merged) = try_merge(&sig, &stack) {
                let n = sig.radix(merged.domain.len()) as usize;
                stack.truncate(stack.len() - n);
                stack.push(merged);
            }
        }
        BranchMap { sig, branches: stack }
    }

    pub fn is_total(&self) -> bool {
        self.domain().is_full()
    }

    /// Whether the images are pairwise disjoint.
    pub fn is_injective(&self) -> bool {
        let mut images: Vec<&Word> = self.branches.iter().map(|b| &b.image).collect();
        images.sort();
        images.windows(2).all(|p| !p[0].is_prefix_of(p[1]))
    }

    pub fn is_identity(&self) -> bool {
        self.branches.iter().all(|b| b.domain == b.image && b.shift == 0)
    }
}

fn try_merge(sig: &Signature, stack: &[Branch]) -> Option<Branch> {
    let last = stack.last()?;
    let u = last.domain.parent()?;
    let lambda = sig.radix(u.len());
    if last.domain.last() != Some(lambda - 1) || stack.len() < lambda as usize {
        return None;
    }
    let family = &stack[stack.len() - lambda as usize..];
    let v = family[0].image.parent()?;
    if sig.radix(v.len()) != lambda || !sig.tails_compatible(u.len(), v.len()) {
        return None;
    }
    let l = lambda as i64;
    let k = family[0].image.last()? as i64 + l * family[0].shift;
    for (d, b) in family.iter().enumerate() {
        let d = d as i64;
        if b.domain.parent().as_ref() != Some(&u)
            || b.domain.last() != Some(d as u32)
            || b.image.parent().as_ref() != Some(&v)
            || b.image.last() != Some((d + k).rem_euclid(l) as u32)
            || b.shift != (d + k).div_euclid(l)
        {
            return None;
        }
    }
    Some(Branch::new(u, v, k))
}
