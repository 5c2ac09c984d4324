use crate::error::{Error, Result};
use crate::homeo::{period_structure, CylinderHomeo};
use crate::rational::{dyadic, Rational};
use crate::space::{translation_valuation, ClopenSet, Word};

/// `min_{0<i<p} inf_x d(x, P^i x)`, read off the branch tables.
pub fn separation(p_map: &CylinderHomeo, p: usize) -> Result<Rational> {
    let sig = p_map.signature();
    let mut best: Option<usize> = None;
    for i in 1..p {
        for b in p_map.power(i as i64).branches() {
            let level = if b.domain == b.image {
                if b.shift == 0 {
                    return Err(Error::NotPeriodic(p));
                }
                b.domain.len() + translation_valuation(sig, b.domain.len(), b.shift)
            } else if b.domain.comparable(&b.image) {
                return Err(Error::NotPeriodic(p));
            } else {
                b.domain.common_prefix_len(&b.image)
            };
            best = Some(best.map_or(level, |l| l.max(level)));
        }
    }
    Ok(best.map_or_else(|| dyadic(0), dyadic))
}

/// A clopen `E` whose images `E, PE, …, P^{p-1}E` partition Ω.
///
/// Atoms are the cylinders of length `k + 1`, where `2^-k` is the
/// separation, in lexicographic order; `E` grows greedily by
/// `E_i = E_{i-1} ∪ (A_i ∖ O_P(E_{i-1}))`.
pub fn fundamental_domain(p_map: &CylinderHomeo, p: usize) -> Result<ClopenSet> {
    if p == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if !p_map.power(p as i64).is_identity() {
        return Err(Error::NotPeriodic(p));
    }
    let ps = period_structure(p_map, p.saturating_sub(1));
    if let Some((period, point)) = ps.first_periodic_point() {
        return Err(Error::PeriodicPoint { period, point });
    }
    let sig = p_map.signature();
    let c = separation(p_map, p)?;
    let k = (0..).find(|&k| dyadic(k) == c).expect("separation is dyadic");
    let powers: Vec<CylinderHomeo> = (0..p).map(|i| p_map.power(i as i64)).collect();
    let orbit = |e: &ClopenSet| -> ClopenSet {
        let mut o = ClopenSet::empty(sig);
        for q in &powers {
            o = o.union(&q.image(e).expect("one signature")).expect("one signature");
        }
        o
    };
    let mut e = ClopenSet::empty(sig);
    for w in Word::empty().extensions(sig, k + 1) {
        let a = ClopenSet::cylinder(sig, w);
        let fresh = a.difference(&orbit(&e))?;
        e = e.union(&fresh)?;
    }
    Ok(e)
}

/// Whether `E, PE, …, P^{p-1}E` are pairwise disjoint and cover Ω.
pub fn is_fundamental(p_map: &CylinderHomeo, p: usize, e: &ClopenSet) -> bool {
    let mut union = ClopenSet::empty(p_map.signature());
    for i in 0..p {
        let img = p_map.power(i as i64).image(e).expect("one signature");
        if !union.is_disjoint(&img).expect("one signature") {
            return false;
        }
        union = union.union(&img).expect("one signature");
    }
    union.is_full()
}
