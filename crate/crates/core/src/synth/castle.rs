use crate::error::{Error, Result};
use crate::homeo::{period_structure, CylinderHomeo, Homeo};
use crate::measure::{measure_of, MeasureSpec};
use crate::rational::{int, Rational};
use crate::space::{ClopenSet, Word};

/// Longest cylinder the initial cover may use.
pub const COVER_DEPTH_CAP: usize = 32;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tower {
    pub base: ClopenSet,
    /// `levels[j] = T^j(base)`.
    pub levels: Vec<ClopenSet>,
}

impl Tower {
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> &ClopenSet {
        self.levels.last().expect("towers are nonempty")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Castle {
    pub towers: Vec<Tower>,
    /// Union of the tower bases.
    pub base_set: ClopenSet,
    /// `μ_i(⋃_{j<n} T^{-j} B)` for each measure.
    pub bounds: Vec<Rational>,
}

impl Castle {
    /// Levels pairwise disjoint, covering Ω, each the image of the one below.
    pub fn check(&self, t: &CylinderHomeo, n: usize) -> Result<bool> {
        let mut seen = ClopenSet::empty(t.signature());
        for tower in &self.towers {
            if tower.height() < n || tower.levels[0] != tower.base {
                return Ok(false);
            }
            for (j, level) in tower.levels.iter().enumerate() {
                if level.is_empty() || !seen.is_disjoint(level)? {
                    return Ok(false);
                }
                if j > 0 && t.image(&tower.levels[j - 1])? != *level {
                    return Ok(false);
                }
                seen = seen.union(level)?;
            }
        }
        Ok(seen.is_full())
    }
}

pub(crate) struct Powers {
    pub(crate) forward: Vec<CylinderHomeo>,
    pub(crate) backward: Vec<CylinderHomeo>,
}

impl Powers {
    pub(crate) fn new(t: &CylinderHomeo, up_to: usize) -> Self {
        let inv = t.inverse();
        let mut forward = vec![CylinderHomeo::identity(t.signature())];
        let mut backward = forward.clone();
        for j in 1..up_to {
            forward.push(forward[j - 1].compose(t).expect("one signature"));
            backward.push(backward[j - 1].compose(&inv).expect("one signature"));
        }
        Powers { forward, backward }
    }

    /// `⋃_{|j|<n} T^j set`.
    pub(crate) fn orbit(&self, set: &ClopenSet, n: usize) -> Result<ClopenSet> {
        let mut out = set.clone();
        for j in 1..n {
            out = out.union(&self.forward[j].image(set)?)?.union(&self.backward[j].image(set)?)?;
        }
        Ok(out)
    }
}

/// Cylinders `[w]` with `T^j[w] ∩ [w] = ∅` for `0 < j < n`, covering Ω, found
/// by splitting offending cylinders; returned in lexicographic order.
fn separated_cover(powers: &Powers, n: usize) -> Result<Vec<Word>> {
    let sig = powers.forward[0].signature();
    let mut pending = vec![Word::empty()];
    let mut cover = Vec::new();
    while let Some(w) = pending.pop() {
        let cyl = ClopenSet::cylinder(sig, w.clone());
        let mut good = true;
        for j in 1..n {
            if powers.forward[j].image(&cyl)?.meets_cylinder(&w) {
                good = false;
                break;
            }
        }
        if good {
            cover.push(w);
        } else if w.len() >= COVER_DEPTH_CAP {
            return Err(Error::CapExceeded(format!(
                "no cylinder of length ≤ {COVER_DEPTH_CAP} around {} is {n}-separated",
                w.fmt_with(sig.max_radix() > 10)
            )));
        } else {
            let mut kids: Vec<Word> = w.children(sig).collect();
            kids.reverse();
            pending.extend(kids);
        }
    }
    cover.sort();
    Ok(cover)
}

/// Clopen `A` with `T^j A ∩ A = ∅` for `0 < |j| < n` whose `n`-orbit is Ω:
/// `A_i = A_{i-1} ∪ (U_i ∖ ⋃_{|j|<n} T^j A_{i-1})`.
pub(crate) fn marker(powers: &Powers, n: usize) -> Result<ClopenSet> {
    let sig = powers.forward[0].signature();
    let mut a = ClopenSet::empty(sig);
    for w in separated_cover(powers, n)? {
        let u = ClopenSet::cylinder(sig, w);
        let fresh = u.difference(&powers.orbit(&a, n)?)?;
        a = a.union(&fresh)?;
    }
    Ok(a)
}

/// First-return towers over `a`: bases `a ∩ T^{-r}a ∖ (earlier bases)`.
pub(crate) fn return_towers(t: &CylinderHomeo, powers: &Powers, a: &ClopenSet, max_return: usize) -> Result<Vec<Tower>> {
    let mut rest = a.clone();
    let mut towers = Vec::new();
    for r in 1..=max_return {
        if rest.is_empty() {
            break;
        }
        let base = rest.intersect(&powers.backward[r].image(a)?)?;
        if base.is_empty() {
            continue;
        }
        rest = rest.difference(&base)?;
        let mut levels = vec![base.clone()];
        for _ in 1..r {
            let next = t.image(levels.last().unwrap())?;
            levels.push(next);
        }
        towers.push(Tower { base, levels });
    }
    if !rest.is_empty() {
        return Err(Error::CapExceeded(format!("return time to the marker exceeds {max_return}")));
    }
    Ok(towers)
}

/// Cut a tower of height `h ≥ n` into `⌊h/n⌋` blocks of height `n`, block
/// `k` absorbing the remainder.
fn cut(tower: &Tower, n: usize, k: usize) -> Vec<Tower> {
    let h = tower.height();
    let (blocks, rem) = (h / n, h % n);
    (0..blocks)
        .map(|i| {
            let start = i * n + if i > k { rem } else { 0 };
            let len = n + if i == k { rem } else { 0 };
            let levels = tower.levels[start..start + len].to_vec();
            Tower { base: levels[0].clone(), levels }
        })
        .collect()
}

fn bounds(powers: &Powers, measures: &[MeasureSpec], base: &ClopenSet, n: usize) -> Result<Vec<Rational>> {
    let mut hull = base.clone();
    for j in 1..n {
        hull = hull.union(&powers.backward[j].image(base)?)?;
    }
    measures.iter().map(|mu| measure_of(mu, &hull)).collect()
}

/// A castle of towers of height at least `n` whose base set `B` satisfies
/// `μ_i(⋃_{j<n} T^{-j}B) > 1 − ε` for every measure.
///
/// Towers are first returns to a marker separated by `n' = M·n`, cut into
/// blocks of height `n`; the remainder goes to block `K`. The uncovered
/// parts for different `K` are disjoint, so `M > #measures/ε` always works;
/// smaller `M` are tried first.
pub fn rokhlin_castle(t: &Homeo, n: usize, measures: &[MeasureSpec], epsilon: &Rational, period_bound: usize) -> Result<Castle> {
    if n == 0 || *epsilon <= int(0) {
        return Err(Error::InvalidArgument("need n ≥ 1 and ε > 0".into()));
    }
    if period_bound < n {
        return Err(Error::InvalidArgument(format!("period bound {period_bound} is below the tower height {n}")));
    }
    let t = t.exact().ok_or(Error::Unresolvable(crate::homeo::DEFAULT_DEPTH))?;
    if measures.iter().any(|mu| mu.signature() != t.signature()) {
        return Err(Error::SignatureMismatch);
    }
    if let Some((period, point)) = period_structure(&t, period_bound).first_periodic_point() {
        return Err(Error::PeriodicPoint { period, point });
    }
    let k = int(measures.len().max(1) as i64);
    let max_blocks = (k / epsilon).floor().to_integer().try_into().unwrap_or(usize::MAX).saturating_add(1);
    let mut last = Vec::new();
    for m in 1..=max_blocks {
        let sep = m * n;
        let powers = Powers::new(&t, 2 * sep);
        let a = marker(&powers, sep)?;
        let towers = return_towers(&t, &powers, &a, 2 * sep - 1)?;
        let mut best: Option<(Rational, Castle)> = None;
        for offset in 0..m {
            let cut_towers: Vec<Tower> = towers.iter().flat_map(|tw| cut(tw, n, offset)).collect();
            let mut base_set = ClopenSet::empty(t.signature());
            for tw in &cut_towers {
                base_set = base_set.union(&tw.base)?;
            }
            let b = bounds(&powers, measures, &base_set, n)?;
            let worst = b.iter().min().cloned().unwrap_or_else(|| int(1));
            if best.as_ref().is_none_or(|(w, _)| worst > *w) {
                best = Some((worst, Castle { towers: cut_towers, base_set, bounds: b }));
            }
        }
        let (worst, castle) = best.expect("at least one offset");
        if worst > int(1) - epsilon {
            return Ok(castle);
        }
        last = castle.bounds;
    }
    Err(Error::CapExceeded(format!(
        "no castle reached bound > 1 - ε with {max_blocks} blocks (bounds {})",
        last.iter().map(crate::rational::fmt_rational).collect::<Vec<_>>().join(", ")
    )))
}
