use crate::error::{Error, Result};
use crate::homeo::branch::Branch;
use crate::homeo::solve::solve_shifted;
use crate::homeo::{Homeo, PartialTable, DEFAULT_DEPTH};
use crate::rational::{dyadic, Rational};
use crate::space::{translation_valuation, ClopenSet, Point, Signature, Word};
use num_traits::Zero;

/// `E(S,T)` described exactly: `core` minus finitely many points, plus an
/// `unresolved` region (empty for exact operands) on which nothing is claimed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpenDiffSet {
    core: ClopenSet,
    removed: Vec<Point>,
    unresolved: ClopenSet,
}

impl OpenDiffSet {
    pub fn core(&self) -> &ClopenSet {
        &self.core
    }

    /// Points of the core not in the set.
    pub fn removed_points(&self) -> &[Point] {
        &self.removed
    }

    pub fn unresolved(&self) -> &ClopenSet {
        &self.unresolved
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty() && self.unresolved.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Smallest clopen set known to contain the whole difference set.
    pub fn hull(&self) -> ClopenSet {
        self.core.union(&self.unresolved).expect("one signature")
    }

    pub fn contains_point(&self, x: &Point) -> Option<bool> {
        if self.unresolved.contains_point(x) {
            return None;
        }
        Some(self.core.contains_point(x) && !self.removed.contains(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Equal,
    Everywhere,
    AllBut(Point),
}

/// One cell of a common refinement of two tables.
#[derive(Clone, Debug)]
pub(crate) struct CellDiff {
    pub cell: Word,
    pub relation: Relation,
    /// `sup d(Sx, Tx)` over the cell.
    pub sup: Rational,
}

/// Cellwise comparison of two tables on the region where both are defined;
/// the second component is the region where either is undefined.
pub(crate) fn compare_tables(s: &PartialTable, t: &PartialTable) -> (Vec<CellDiff>, ClopenSet) {
    let sig = s.map.sig.clone();
    let mut cells = Vec::new();
    for sb in &s.map.branches {
        if let Some(tb) = t.map.branch_at(&sb.domain) {
            cells.push(compare(&sig, sb, &tb.restrict(&sig, &sb.domain)));
        } else {
            for tb in t.map.branches_under(&sb.domain) {
                cells.push(compare(&sig, &sb.restrict(&sig, &tb.domain), tb));
            }
        }
    }
    let covered = ClopenSet::from_words(&sig, cells.iter().map(|c| c.cell.clone()).collect());
    (cells, covered.complement())
}

fn compare(sig: &Signature, a: &Branch, b: &Branch) -> CellDiff {
    debug_assert_eq!(a.domain, b.domain);
    let cell = a.domain.clone();
    let (u, v) = (&a.image, &b.image);
    let (relation, sup) = if u == v {
        if a.shift == b.shift {
            (Relation::Equal, Rational::zero())
        } else {
            let k = translation_valuation(sig, u.len(), a.shift - b.shift);
            (Relation::Everywhere, dyadic(u.len() + k))
        }
    } else if u.is_prefix_of(v) {
        let y = solve_shifted(sig, cell.len(), a.shift, v.suffix_after(u), b.shift);
        (Relation::AllBut(Point::behind(cell.digits(), &y)), dyadic(u.len()))
    } else if v.is_prefix_of(u) {
        let y = solve_shifted(sig, cell.len(), b.shift, u.suffix_after(v), a.shift);
        (Relation::AllBut(Point::behind(cell.digits(), &y)), dyadic(v.len()))
    } else {
        (Relation::Everywhere, dyadic(u.common_prefix_len(v)))
    };
    CellDiff { cell, relation, sup }
}

struct OneSided {
    core: ClopenSet,
    removed: Vec<Point>,
}

impl OneSided {
    fn contains(&self, x: &Point) -> bool {
        self.core.contains_point(x) && !self.removed.contains(x)
    }
}

fn one_sided(sig: &Signature, cells: &[CellDiff]) -> OneSided {
    let mut words = Vec::new();
    let mut removed = Vec::new();
    for c in cells {
        match &c.relation {
            Relation::Equal => {}
            Relation::Everywhere => words.push(c.cell.clone()),
            Relation::AllBut(p) => {
                words.push(c.cell.clone());
                removed.push(p.clone());
            }
        }
    }
    OneSided { core: ClopenSet::from_words(sig, words), removed }
}

/// `E(S,T) = {Sx ≠ Tx} ∪ {S⁻¹x ≠ T⁻¹x}`, exact for tabular operands.
pub fn difference_set(s: &Homeo, t: &Homeo) -> Result<OpenDiffSet> {
    difference_set_at(s, t, DEFAULT_DEPTH)
}

/// As [`difference_set`], resolving tower operands to `depth`.
pub fn difference_set_at(s: &Homeo, t: &Homeo, depth: usize) -> Result<OpenDiffSet> {
    if s.signature() != t.signature() {
        return Err(Error::SignatureMismatch);
    }
    let sig = s.signature().clone();
    let (fwd, u1) = compare_tables(&s.table(depth)?, &t.table(depth)?);
    let (bwd, u2) = compare_tables(&s.inverse().table(depth)?, &t.inverse().table(depth)?);
    let unresolved = u1.union(&u2)?;
    let e1 = one_sided(&sig, &fwd);
    let e2 = one_sided(&sig, &bwd);
    let core = e1.core.union(&e2.core)?.difference(&unresolved)?;
    let mut removed: Vec<Point> = e1
        .removed
        .iter()
        .filter(|p| !e2.contains(p))
        .chain(e2.removed.iter().filter(|p| !e1.contains(p)))
        .filter(|p| !unresolved.contains_point(p))
        .cloned()
        .collect();
    removed.sort();
    removed.dedup();
    Ok(OpenDiffSet { core, removed, unresolved })
}
