use crate::error::{Error, Result};
use crate::homeo::branch::{Branch, BranchMap};
use crate::space::{ClopenSet, Word};

/// Deterministic prefix-exchange bijection from `a` onto `b`.
///
/// Cylinders are first lengthened to a common tail class, then the side with
/// fewer cylinders repeatedly subdivides its lexicographically last cylinder
/// by one full period, and the two lists are paired in order. Over the
/// dyadic signature any two nonempty sets are exchangeable; in general the
/// cylinder counts must agree modulo `P - 1`, `P` the product of one period.
pub fn canonical_clopen_homeo(a: &ClopenSet, b: &ClopenSet) -> Result<Vec<Branch>> {
    Ok(exchange(a, b)?.branches)
}

pub(crate) fn exchange(a: &ClopenSet, b: &ClopenSet) -> Result<BranchMap> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let sig = a.signature();
    let align = |set: &ClopenSet| -> Vec<Word> {
        set.words().iter().flat_map(|w| w.extensions(sig, sig.aligned_length(w.len()))).collect()
    };
    let (mut da, mut db) = (align(a), align(b));
    let step = sig.period_product() - 1;
    let gap = (da.len() as u128).abs_diff(db.len() as u128);
    if step == 0 || gap % step != 0 {
        return Err(Error::NotExchangeable(format!(
            "{} and {} cylinders cannot be matched by whole-period subdivision",
            da.len(),
            db.len()
        )));
    }
    let per = sig.period().len();
    while da.len() != db.len() {
        let short = if da.len() < db.len() { &mut da } else { &mut db };
        let last = short.pop().expect("nonempty");
        let len = last.len() + per;
        short.extend(last.extensions(sig, len));
    }
    let branches = da.into_iter().zip(db).map(|(u, v)| Branch::new(u, v, 0)).collect();
    Ok(BranchMap::new(sig, branches).canonical())
}
