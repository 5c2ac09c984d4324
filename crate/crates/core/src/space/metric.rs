//! The fixed ultrametric `d(x, y) = 2^(-first differing level)`.

use crate::error::{Error, Result};
use crate::rational::{dyadic, Rational};
use crate::space::{ClopenSet, Point};
use num_traits::Zero;

pub fn diameter(set: &ClopenSet) -> Result<Rational> {
    let words = set.words();
    match words {
        [] => Err(Error::EmptySet),
        [w] => Ok(dyadic(w.len())),
        [first, .., last] => Ok(dyadic(first.common_prefix_len(last))),
    }
}

/// Infimum of `d(a, b)` over `a ∈ A`, `b ∈ B`.
pub fn set_distance(a: &ClopenSet, b: &ClopenSet) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_disjoint(b)? {
        return Ok(Rational::zero());
    }
    let best = a
        .words()
        .iter()
        .flat_map(|x| b.words().iter().map(move |y| x.common_prefix_len(y)))
        .max()
        .expect("nonempty");
    Ok(dyadic(best))
}

pub fn point_distance(x: &Point, y: &Point) -> Rational {
    match x.first_difference(y) {
        Some(i) => dyadic(i),
        None => Rational::zero(),
    }
}

/// Supremum of `d(a, b)` over `a ∈ A`, `b ∈ B`; an upper bound used for
/// unresolved regions.
pub fn spread(a: &ClopenSet, b: &ClopenSet) -> Result<Rational> {
    diameter(&a.union(b)?)
}
