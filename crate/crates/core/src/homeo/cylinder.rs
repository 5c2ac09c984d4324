use crate::error::{Error, Result};
use crate::homeo::branch::{Branch, BranchMap};
use crate::homeo::solve::{add_to_point, solve_shifted};
use crate::space::{canonicalize, ClopenSet, Point, Signature, Word};

/// A homeomorphism given by a finite table of affine cylinder pieces whose
/// domains and images each partition Ω. With all shifts zero this is a
/// tree-pair (prefix-exchange) map; nonzero shifts make compositions with
/// odometers exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CylinderHomeo {
    map: BranchMap,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FixedPoints {
    pub clopen: ClopenSet,
    pub isolated: Vec<Point>,
}

fn check_partition(sig: &Signature, words: &[&Word], what: &str) -> Result<()> {
    let mut sorted: Vec<&Word> = words.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0].is_prefix_of(pair[1]) {
            return Err(Error::NotAHomeomorphism(format!("{what} words overlap")));
        }
    }
    let covered = canonicalize(sig, sorted.into_iter().cloned().collect());
    if covered != [Word::empty()] {
        return Err(Error::NotAHomeomorphism(format!("{what} words do not cover the space")));
    }
    Ok(())
}

impl CylinderHomeo {
    pub fn new(sig: &Signature, branches: Vec<Branch>) -> Result<Self> {
        for b in &branches {
            b.domain.validate(sig)?;
            b.image.validate(sig)?;
            if !sig.tails_compatible(b.domain.len(), b.image.len()) {
                return Err(Error::IncompatibleTails(b.domain.len(), b.image.len()));
            }
        }
        check_partition(sig, &branches.iter().map(|b| &b.domain).collect::<Vec<_>>(), "domain")?;
        check_partition(sig, &branches.iter().map(|b| &b.image).collect::<Vec<_>>(), "image")?;
        Ok(CylinderHomeo { map: BranchMap::new(sig, branches).canonical() })
    }

    /// Plain prefix replacement `u·x ↦ v·x`.
    pub fn from_pairs(sig: &Signature, pairs: &[(Word, Word)]) -> Result<Self> {
        CylinderHomeo::new(sig, pairs.iter().map(|(u, v)| Branch::new(u.clone(), v.clone(), 0)).collect())
    }

    pub fn identity(sig: &Signature) -> Self {
        CylinderHomeo { map: BranchMap::identity(sig) }
    }

    /// Exchange of the two first-level cylinders, `0x ↔ 1x` (dyadic).
    pub fn swap() -> Self {
        let sig = Signature::dyadic();
        CylinderHomeo::from_pairs(&sig, &[("0".into(), "1".into()), ("1".into(), "0".into())]).expect("valid")
    }

    pub(crate) fn from_map(map: BranchMap) -> Self {
        debug_assert!(map.is_total() && map.is_injective() && map.range().is_full());
        CylinderHomeo { map: map.canonical() }
    }

    pub(crate) fn map(&self) -> &BranchMap {
        &self.map
    }

    pub fn signature(&self) -> &Signature {
        &self.map.sig
    }

    /// Canonical branch table, sorted by domain.
    pub fn branches(&self) -> &[Branch] {
        &self.map.branches
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }

    /// Whether every branch is a plain prefix replacement.
    pub fn is_tree_pair(&self) -> bool {
        self.map.branches.iter().all(|b| b.shift == 0)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CylinderHomeo) -> Result<CylinderHomeo> {
        if self.signature() != inner.signature() {
            return Err(Error::SignatureMismatch);
        }
        Ok(CylinderHomeo { map: self.map.compose(&inner.map) })
    }

    pub fn inverse(&self) -> CylinderHomeo {
        CylinderHomeo { map: self.map.inverse() }
    }

    pub fn power(&self, n: i64) -> CylinderHomeo {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CylinderHomeo::identity(self.signature());
        while e > 0 {
            if e & 1 == 1 {
                acc = CylinderHomeo { map: acc.map.compose(&base.map) };
            }
            e >>= 1;
            if e > 0 {
                base = CylinderHomeo { map: base.map.compose(&base.map) };
            }
        }
        acc
    }

    pub fn apply(&self, x: &Point) -> Point {
        let b = self
            .map
            .branches
            .iter()
            .find(|b| x.in_cylinder(&b.domain))
            .expect("branch domains cover the space");
        let tail = x.tail(b.domain.len());
        let moved = add_to_point(self.signature(), b.domain.len(), &tail, b.shift);
        Point::behind(b.image.digits(), &moved)
    }

    pub fn image(&self, set: &ClopenSet) -> Result<ClopenSet> {
        if set.signature() != self.signature() {
            return Err(Error::SignatureMismatch);
        }
        Ok(self.map.image(set).expect("total map"))
    }

    pub fn preimage(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.inverse().image(set)
    }

    /// Images of all cylinders of length `depth`, in lexicographic order.
    pub fn tabulate(&self, depth: usize) -> Vec<(Word, ClopenSet)> {
        let sig = self.signature();
        Word::empty()
            .extensions(sig, depth)
            .into_iter()
            .map(|w| {
                let img = ClopenSet::from_words(sig, self.map.image_of_cylinder(&w).expect("total map"));
                (w, img)
            })
            .collect()
    }

    /// Longest domain or image word.
    pub fn depth(&self) -> usize {
        self.map.branches.iter().map(|b| b.domain.len().max(b.image.len())).max().unwrap_or(0)
    }

    pub fn fixed_points(&self) -> FixedPoints {
        let sig = self.signature();
        let mut clopen = Vec::new();
        let mut isolated = Vec::new();
        for b in &self.map.branches {
            let (a, v) = (&b.domain, &b.image);
            if a == v {
                if b.shift == 0 {
                    clopen.push(a.clone());
                }
            } else if a.is_prefix_of(v) {
                let y = solve_shifted(sig, a.len(), 0, v.suffix_after(a), b.shift);
                isolated.push(Point::behind(a.digits(), &y));
            } else if v.is_prefix_of(a) {
                let y = solve_shifted(sig, a.len(), b.shift, a.suffix_after(v), 0);
                isolated.push(Point::behind(a.digits(), &y));
            }
        }
        isolated.sort();
        isolated.dedup();
        FixedPoints { clopen: ClopenSet::from_words(sig, clopen), isolated }
    }
}
