use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::homeo::branch::{Branch, BranchMap};
use crate::homeo::exchange::exchange;
use crate::homeo::PartialTable;
use crate::space::{split, ClopenSet, Signature};

/// Refinement stages tried before an evaluation gives up.
pub const MAX_STAGES: usize = 64;

/// An inverse limit of single cyclic towers.
///
/// Stage 0 is a given cycle of clopen atoms with maps between consecutive
/// atoms. Stage `t + 1` cuts the base into `λ_t` pieces (canonical split),
/// threads each through the tower and joins the top of column `k` to the
/// base of column `k + 1` by the canonical exchange. The limit map is known
/// exactly off the current top; the top itself is carried onto the base.
#[derive(Clone, Debug)]
pub struct TowerSystem {
    sig: Signature,
    cycle: Vec<ClopenSet>,
    links: Vec<BranchMap>,
    stages: Arc<Mutex<Vec<Stage>>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Stage {
    pub known: BranchMap,
    pub base: ClopenSet,
    pub top: ClopenSet,
    pub height: u128,
    /// First-return passage from the base to the top.
    pub passage: BranchMap,
}

impl PartialEq for TowerSystem {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.cycle == other.cycle && self.links == other.links
    }
}

impl Eq for TowerSystem {}

impl TowerSystem {
    /// Cycle `(A_0, …, A_{m-1})` joined by the canonical exchanges.
    pub fn from_cycle(cycle: Vec<ClopenSet>) -> Result<Self> {
        let links = cycle.windows(2).map(|p| exchange(&p[0], &p[1])).collect::<Result<Vec<_>>>()?;
        TowerSystem::build(cycle, links)
    }

    pub(crate) fn build(cycle: Vec<ClopenSet>, links: Vec<BranchMap>) -> Result<Self> {
        let first = cycle.first().ok_or(Error::EmptySet)?;
        let sig = first.signature().clone();
        let mut union = ClopenSet::empty(&sig);
        for a in &cycle {
            if a.signature() != &sig {
                return Err(Error::SignatureMismatch);
            }
            if a.is_empty() {
                return Err(Error::EmptySet);
            }
            if !union.is_disjoint(a)? {
                return Err(Error::NotAPartition("cycle atoms overlap".into()));
            }
            union = union.union(a)?;
        }
        if !union.is_full() {
            return Err(Error::NotAPartition("cycle atoms do not cover the space".into()));
        }
        if links.len() + 1 != cycle.len() {
            return Err(Error::InvalidArgument("need one link per consecutive pair of atoms".into()));
        }
        for (j, l) in links.iter().enumerate() {
            if l.domain() != cycle[j] || l.range() != cycle[j + 1] || !l.is_injective() {
                return Err(Error::NotAHomeomorphism(format!("link {j} is not a bijection between its atoms")));
            }
        }
        let mut known = BranchMap::empty(&sig);
        let mut passage = BranchMap::identity(&sig).restrict(&cycle[0]);
        for l in &links {
            known = known.union(l);
            passage = l.compose(&passage);
        }
        let stage = Stage {
            known,
            base: cycle[0].clone(),
            top: cycle[cycle.len() - 1].clone(),
            height: cycle.len() as u128,
            passage,
        };
        let links = links.into_iter().map(BranchMap::canonical).collect();
        Ok(TowerSystem { sig, cycle, links, stages: Arc::new(Mutex::new(vec![stage])) })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn cycle(&self) -> &[ClopenSet] {
        &self.cycle
    }

    pub(crate) fn links(&self) -> &[BranchMap] {
        &self.links
    }

    /// Branch tables of the links, `cycle[j] → cycle[j+1]`.
    pub fn link_branches(&self) -> Vec<Vec<Branch>> {
        self.links.iter().map(|l| l.branches.clone()).collect()
    }

    pub(crate) fn stage(&self, t: usize) -> Result<Stage> {
        let mut stages = self.stages.lock().expect("tower cache poisoned");
        while stages.len() <= t {
            let next = refine(&self.sig, stages.last().expect("stage 0"), stages.len() - 1)?;
            stages.push(next);
        }
        Ok(stages[t].clone())
    }

    /// Height of the single tower at stage `t`.
    pub fn height(&self, t: usize) -> Result<u128> {
        Ok(self.stage(t)?.height)
    }

    /// The cyclically ordered atoms of stage `t`, base first.
    pub fn level(&self, t: usize) -> Result<Vec<ClopenSet>> {
        let st = self.stage(t)?;
        if st.height > 1 << 16 {
            return Err(Error::CapExceeded(format!("stage {t} has {} atoms", st.height)));
        }
        let mut out = vec![st.base.clone()];
        for _ in 1..st.height {
            let next = st.known.image(out.last().expect("nonempty")).expect("below the top");
            out.push(next);
        }
        Ok(out)
    }

    /// Setwise image, exact: refines until `set` meets the top fully or not at all.
    pub fn image(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.setwise(set, false)
    }

    pub fn preimage(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.setwise(set, true)
    }

    fn setwise(&self, set: &ClopenSet, inverse: bool) -> Result<ClopenSet> {
        if set.signature() != &self.sig {
            return Err(Error::SignatureMismatch);
        }
        for t in 0..MAX_STAGES {
            let st = self.stage(t)?;
            let (map, from, to) = if inverse {
                (st.known.inverse(), &st.base, &st.top)
            } else {
                (st.known.clone(), &st.top, &st.base)
            };
            let inside = set.intersect(from)?;
            if inside.is_empty() {
                return Ok(map.image(set).expect("off the unresolved atom"));
            }
            if &inside == from {
                let rest = map.image(&set.difference(from)?).expect("off the unresolved atom");
                return rest.union(to);
            }
        }
        Err(Error::Unresolvable(MAX_STAGES))
    }

    /// Pointwise table exact off a top (or, inverted, base) of diameter at
    /// most `2^-depth`.
    pub(crate) fn table(&self, depth: usize, inverse: bool) -> Result<PartialTable> {
        for t in 0..MAX_STAGES {
            let st = self.stage(t)?;
            let small = |s: &ClopenSet| s.words().len() == 1 && s.words()[0].len() >= depth;
            if small(&st.top) && small(&st.base) {
                return Ok(if inverse {
                    PartialTable { map: st.known.inverse() }
                } else {
                    PartialTable { map: st.known }
                });
            }
        }
        Err(Error::Unresolvable(depth))
    }
}

fn refine(sig: &Signature, st: &Stage, t: usize) -> Result<Stage> {
    let lambda = sig.radix(t) as usize;
    let parts = split(&st.base, lambda)?;
    let tops: Vec<ClopenSet> = parts.iter().map(|p| st.passage.image(p).expect("passage covers the base")).collect();
    let mut known = st.known.clone();
    let mut passage = st.passage.restrict(&parts[0]);
    for k in 0..lambda - 1 {
        let link = exchange(&tops[k], &parts[k + 1])?;
        known = known.union(&link);
        passage = st.passage.compose(&link.compose(&passage));
    }
    Ok(Stage {
        known,
        base: parts[0].clone(),
        top: tops[lambda - 1].clone(),
        height: st.height.saturating_mul(lambda as u128),
        passage,
    })
}
