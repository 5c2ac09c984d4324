use crate::error::{Error, Result};
use crate::homeo::{Homeo, Odometer};
use crate::space::{ClopenSet, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CentralizerResult {
    /// `i_s ∈ [0, p_s)` for `s = 0..=depth`.
    Indices(Vec<u128>),
    /// At `level`, `cylinder` is sent to `image`, which no single power of
    /// the odometer matches on the whole level.
    Failure { level: usize, cylinder: Word, image: ClopenSet },
}

/// For each level `s ≤ depth`, finds `i_s` with `R = S^{i_s}` on every
/// cylinder of `ξ_s` (length `s + 1`).
pub fn centralizer_index_sequence(r: &Homeo, s: &Odometer, depth: usize) -> Result<CentralizerResult> {
    let sig = s.signature();
    if r.signature() != sig {
        return Err(Error::SignatureMismatch);
    }
    let mut indices = Vec::new();
    for level in 0..=depth {
        let len = level + 1;
        let p = sig.cylinder_count(len)?;
        let k = (s.shift() as i128).rem_euclid(p as i128) as u128;
        let table = r.tabulate(len)?;
        let target = |w: &Word, i: u128| -> Result<ClopenSet> {
            let v = (w.value(sig)? + i * k % p) % p;
            Ok(ClopenSet::cylinder(sig, Word::from_value(sig, v, len)))
        };
        let (w0, img0) = &table[0];
        let mut witness = (w0.clone(), img0.clone());
        let mut found = None;
        for i in 0..p {
            if target(w0, i)? != *img0 {
                continue;
            }
            let mut bad = None;
            for (w, img) in &table {
                if target(w, i)? != *img {
                    bad = Some((w.clone(), img.clone()));
                    break;
                }
            }
            match bad {
                None => {
                    found = Some(i);
                    break;
                }
                Some(b) if found.is_none() && witness.0 == *w0 => witness = b,
                Some(_) => {}
            }
        }
        match found {
            Some(i) => indices.push(i),
            None => return Ok(CentralizerResult::Failure { level, cylinder: witness.0, image: witness.1 }),
        }
    }
    Ok(CentralizerResult::Indices(indices))
}
