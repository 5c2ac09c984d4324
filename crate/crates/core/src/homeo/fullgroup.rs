use crate::error::{Error, Result};
use crate::homeo::{CylinderHomeo, Homeo};
use crate::space::ClopenSet;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FullGroupResult {
    /// Nonempty `E_i = {x : Sx = T^i x}` assignments, sorted by `i`.
    Member(Vec<(i64, ClopenSet)>),
    Refused,
}

/// Decides whether `S` acts as a locally constant power `T^i`, `|i| ≤ bound`.
/// Overlapping agreement regions are assigned to the first exponent in the
/// order `0, 1, -1, 2, -2, …`.
pub fn full_group_membership(s: &Homeo, t: &Homeo, bound: usize) -> Result<FullGroupResult> {
    if s.signature() != t.signature() {
        return Err(Error::SignatureMismatch);
    }
    let exact = |h: &Homeo| {
        h.exact().ok_or_else(|| Error::InvalidArgument("full-group test needs exact branch tables".into()))
    };
    let (s, t) = (exact(s)?, exact(t)?);
    let sig = s.signature().clone();
    let mut order = vec![0i64];
    for i in 1..=bound as i64 {
        order.extend([i, -i]);
    }
    let powers: Vec<CylinderHomeo> = order.iter().map(|&i| t.power(i)).collect();
    let mut assigned: Vec<Vec<crate::space::Word>> = vec![Vec::new(); order.len()];
    let mut work: Vec<_> = s.branches().to_vec();
    while let Some(sb) = work.pop() {
        let c = &sb.domain;
        let agree = powers.iter().position(|p| {
            p.map().branch_at(c).is_some_and(|b| {
                let r = b.restrict(&sig, c);
                r.image == sb.image && r.shift == sb.shift
            })
        });
        if let Some(k) = agree {
            assigned[k].push(c.clone());
        } else if powers.iter().any(|p| p.map().branch_at(c).is_none()) {
            work.extend(c.children(&sig).map(|w| sb.restrict(&sig, &w)));
        } else {
            return Ok(FullGroupResult::Refused);
        }
    }
    let mut parts: Vec<(i64, ClopenSet)> = order
        .into_iter()
        .zip(assigned)
        .filter(|(_, w)| !w.is_empty())
        .map(|(i, w)| (i, ClopenSet::from_words(&sig, w)))
        .collect();
    parts.sort_by_key(|(i, _)| *i);
    Ok(FullGroupResult::Member(parts))
}
