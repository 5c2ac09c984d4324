//! Homeomorphisms of the Cantor model and their group structure.

mod branch;
mod centralizer;
mod cylinder;
mod diff;
mod exchange;
mod fullgroup;
mod odometer;
mod periodic;
mod solve;
mod tower;

pub use branch::Branch;
pub(crate) use branch::BranchMap;
pub use centralizer::{centralizer_index_sequence, CentralizerResult};
pub use cylinder::{CylinderHomeo, FixedPoints};
pub use diff::{difference_set, difference_set_at, OpenDiffSet};
pub(crate) use diff::compare_tables;
pub use exchange::canonical_clopen_homeo;
pub(crate) use exchange::exchange;
pub use fullgroup::{full_group_membership, FullGroupResult};
pub use odometer::Odometer;
pub use periodic::{period_structure, PeriodStructure};
pub(crate) use solve::add_to_point;
pub use tower::{TowerSystem, MAX_STAGES};

use crate::error::{Error, Result};
use crate::space::{ClopenSet, Signature, Word};

/// Resolution used when a caller does not choose one.
pub const DEFAULT_DEPTH: usize = 12;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Homeo {
    Cylinder(CylinderHomeo),
    Odometer(Odometer),
    Tower(TowerSystem),
    /// Formal product `f_1^{k_1} ∘ … ∘ f_n^{k_n}`; the last factor acts first.
    Composite(Vec<(Homeo, i64)>),
}

/// A branch table, exact on its domain and unresolved off it.
#[derive(Clone, Debug)]
pub(crate) struct PartialTable {
    pub map: BranchMap,
}

impl PartialTable {
    fn exact(map: BranchMap) -> Self {
        PartialTable { map }
    }

    fn compose(&self, inner: &PartialTable) -> PartialTable {
        PartialTable { map: self.map.compose(&inner.map) }
    }
}

impl From<CylinderHomeo> for Homeo {
    fn from(c: CylinderHomeo) -> Self {
        Homeo::Cylinder(c)
    }
}

impl From<Odometer> for Homeo {
    fn from(o: Odometer) -> Self {
        Homeo::Odometer(o)
    }
}

impl From<TowerSystem> for Homeo {
    fn from(t: TowerSystem) -> Self {
        Homeo::Tower(t)
    }
}

impl Homeo {
    pub fn identity(sig: &Signature) -> Self {
        Homeo::Cylinder(CylinderHomeo::identity(sig))
    }

    pub fn signature(&self) -> &Signature {
        match self {
            Homeo::Cylinder(c) => c.signature(),
            Homeo::Odometer(o) => o.signature(),
            Homeo::Tower(t) => t.signature(),
            Homeo::Composite(fs) => fs[0].0.signature(),
        }
    }

    /// Exact branch table when one exists (no tower factors).
    pub fn exact(&self) -> Option<CylinderHomeo> {
        match self {
            Homeo::Cylinder(c) => Some(c.clone()),
            Homeo::Odometer(o) => Some(o.to_cylinder()),
            Homeo::Tower(_) => None,
            Homeo::Composite(fs) => {
                let mut acc = CylinderHomeo::identity(self.signature());
                for (f, k) in fs {
                    acc = acc.compose(&f.exact()?.power(*k)).ok()?;
                }
                Some(acc)
            }
        }
    }

    /// `self ∘ inner`. Products of tables and odometers stay exact.
    pub fn compose(&self, inner: &Homeo) -> Result<Homeo> {
        if self.signature() != inner.signature() {
            return Err(Error::SignatureMismatch);
        }
        if let (Homeo::Odometer(a), Homeo::Odometer(b)) = (self, inner) {
            return Ok(Homeo::Odometer(Odometer::new(a.signature(), a.shift() + b.shift())));
        }
        let tabular = |h: &Homeo| matches!(h, Homeo::Cylinder(_) | Homeo::Odometer(_));
        if tabular(self) && tabular(inner) {
            let c = self.exact().expect("tabular").compose(&inner.exact().expect("tabular"))?;
            return Ok(Homeo::Cylinder(c));
        }
        let mut factors = self.factors();
        factors.extend(inner.factors());
        Ok(Homeo::Composite(factors))
    }

    fn factors(&self) -> Vec<(Homeo, i64)> {
        match self {
            Homeo::Composite(fs) => fs.clone(),
            h => vec![(h.clone(), 1)],
        }
    }

    pub fn inverse(&self) -> Homeo {
        self.power(-1)
    }

    pub fn power(&self, n: i64) -> Homeo {
        match self {
            Homeo::Cylinder(c) => Homeo::Cylinder(c.power(n)),
            Homeo::Odometer(o) => Homeo::Odometer(o.power(n)),
            Homeo::Tower(_) if n == 0 => Homeo::identity(self.signature()),
            Homeo::Tower(_) => Homeo::Composite(vec![(self.clone(), n)]),
            Homeo::Composite(fs) => {
                if n == 0 {
                    return Homeo::identity(self.signature());
                }
                if n == -1 {
                    return Homeo::Composite(fs.iter().rev().map(|(f, k)| (f.clone(), -k)).collect());
                }
                let base = if n < 0 { self.inverse() } else { self.clone() };
                let mut factors = Vec::new();
                for _ in 0..n.unsigned_abs() {
                    factors.extend(base.factors());
                }
                Homeo::Composite(factors)
            }
        }
    }

    /// Setwise image `S(A)`, exact for every representation.
    pub fn image(&self, set: &ClopenSet) -> Result<ClopenSet> {
        if set.signature() != self.signature() {
            return Err(Error::SignatureMismatch);
        }
        match self {
            Homeo::Cylinder(c) => c.image(set),
            Homeo::Odometer(o) => o.to_cylinder().image(set),
            Homeo::Tower(t) => t.image(set),
            Homeo::Composite(fs) => {
                let mut cur = set.clone();
                for (f, k) in fs.iter().rev() {
                    for _ in 0..k.unsigned_abs() {
                        cur = if *k > 0 { f.image(&cur)? } else { f.preimage(&cur)? };
                    }
                }
                Ok(cur)
            }
        }
    }

    pub fn preimage(&self, set: &ClopenSet) -> Result<ClopenSet> {
        match self {
            Homeo::Tower(t) => t.preimage(set),
            h => h.inverse().image(set),
        }
    }

    /// Images of the cylinders of length `depth`, in lexicographic order.
    pub fn tabulate(&self, depth: usize) -> Result<Vec<(Word, ClopenSet)>> {
        let sig = self.signature();
        Word::empty()
            .extensions(sig, depth)
            .into_iter()
            .map(|w| {
                let img = self.image(&ClopenSet::cylinder(sig, w.clone()))?;
                Ok((w, img))
            })
            .collect()
    }

    /// Pointwise table, exact off a small unresolved set.
    pub(crate) fn table(&self, depth: usize) -> Result<PartialTable> {
        if let Some(c) = self.exact() {
            return Ok(PartialTable::exact(c.map().clone()));
        }
        match self {
            Homeo::Tower(t) => t.table(depth, false),
            Homeo::Composite(fs) => {
                let mut acc = PartialTable::exact(BranchMap::identity(self.signature()));
                for (f, k) in fs.iter().rev() {
                    let step = match f {
                        Homeo::Tower(t) => t.table(depth, *k < 0)?,
                        _ => f.power(k.signum()).table(depth)?,
                    };
                    for _ in 0..k.unsigned_abs() {
                        acc = step.compose(&acc);
                    }
                }
                Ok(acc)
            }
            _ => unreachable!("tabular variants are exact"),
        }
    }
}
