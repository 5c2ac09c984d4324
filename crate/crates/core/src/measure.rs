//! Exact Borel probability measures: eventually periodic product measures,
//! Dirac measures at eventually periodic points, and finite mixtures.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::homeo::{Homeo, OpenDiffSet};
use crate::rational::Rational;
use crate::space::{ClopenSet, Point, Signature, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSpec {
    sig: Signature,
    kind: MeasureKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    /// Independent digits; level `t` uses the probability vector
    /// `preperiod[t]`, then the `period` vectors cyclically.
    Product { preperiod: Vec<Vec<Rational>>, period: Vec<Vec<Rational>> },
    Dirac(Point),
    Mixture(Vec<(Rational, MeasureSpec)>),
}

impl MeasureSpec {
    pub fn uniform(sig: &Signature) -> Self {
        let row = |l: &u32| vec![Rational::new(1.into(), (*l).into()); *l as usize];
        MeasureSpec {
            sig: sig.clone(),
            kind: MeasureKind::Product {
                preperiod: sig.preperiod().iter().map(row).collect(),
                period: sig.period().iter().map(row).collect(),
            },
        }
    }

    pub fn product(sig: &Signature, preperiod: Vec<Vec<Rational>>, period: Vec<Vec<Rational>>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("product measure needs a periodic part".into()));
        }
        let horizon = preperiod.len().max(sig.preperiod().len()) + period.len().lcm(&sig.period().len());
        for t in 0..horizon {
            let row = if t < preperiod.len() { &preperiod[t] } else { &period[(t - preperiod.len()) % period.len()] };
            if row.len() != sig.radix(t) as usize {
                return Err(Error::InvalidArgument(format!("weight vector at level {t} has wrong length")));
            }
            if row.iter().any(Signed::is_negative) {
                return Err(Error::InvalidArgument(format!("negative weight at level {t}")));
            }
            if row.iter().sum::<Rational>() != Rational::one() {
                return Err(Error::InvalidArgument(format!("weights at level {t} do not sum to 1")));
            }
        }
        Ok(MeasureSpec { sig: sig.clone(), kind: MeasureKind::Product { preperiod, period } })
    }

    pub fn dirac(sig: &Signature, atom: Point) -> Result<Self> {
        atom.validate(sig)?;
        Ok(MeasureSpec { sig: sig.clone(), kind: MeasureKind::Dirac(atom) })
    }

    /// Mixture with positive weights summing to one. Nested mixtures are
    /// flattened, equal components merged and components sorted, so equal
    /// measures built the same way compare equal.
    pub fn mixture(sig: &Signature, components: Vec<(Rational, MeasureSpec)>) -> Result<Self> {
        let mut flat: Vec<(Rational, MeasureSpec)> = Vec::new();
        let mut total = Rational::zero();
        for (w, m) in components {
            if !w.is_positive() {
                return Err(Error::InvalidArgument("mixture weights must be positive".into()));
            }
            if &m.sig != sig {
                return Err(Error::SignatureMismatch);
            }
            total += &w;
            match m.kind {
                MeasureKind::Mixture(inner) => flat.extend(inner.into_iter().map(|(v, c)| (&w * v, c))),
                _ => flat.push((w, m)),
            }
        }
        if total != Rational::one() {
            return Err(Error::InvalidArgument("mixture weights do not sum to 1".into()));
        }
        let mut merged: Vec<(Rational, MeasureSpec)> = Vec::new();
        for (w, m) in flat {
            match merged.iter_mut().find(|(_, c)| *c == m) {
                Some((v, _)) => *v += w,
                None => merged.push((w, m)),
            }
        }
        if merged.len() == 1 {
            return Ok(merged.pop().unwrap().1);
        }
        merged.sort_by_cached_key(|(_, m)| format!("{m:?}"));
        Ok(MeasureSpec { sig: sig.clone(), kind: MeasureKind::Mixture(merged) })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn is_uniform(&self) -> bool {
        *self == MeasureSpec::uniform(&self.sig)
    }

    fn weight(preperiod: &[Vec<Rational>], period: &[Vec<Rational>], t: usize, d: u32) -> Rational {
        let row = if t < preperiod.len() { &preperiod[t] } else { &period[(t - preperiod.len()) % period.len()] };
        row[d as usize].clone()
    }

    pub fn of_cylinder(&self, w: &Word) -> Rational {
        match &self.kind {
            MeasureKind::Product { preperiod, period } => w
                .digits()
                .iter()
                .enumerate()
                .map(|(t, &d)| Self::weight(preperiod, period, t, d))
                .product(),
            MeasureKind::Dirac(x) => {
                if x.in_cylinder(w) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            MeasureKind::Mixture(parts) => parts.iter().map(|(c, m)| c * m.of_cylinder(w)).sum(),
        }
    }

    /// `μ({x})`.
    pub fn point_mass(&self, x: &Point) -> Rational {
        match &self.kind {
            MeasureKind::Product { preperiod, period } => {
                let start = x.preperiod().len().max(preperiod.len());
                let len = x.cycle().len().lcm(&period.len());
                let block: Rational =
                    (start..start + len).map(|t| Self::weight(preperiod, period, t, x.digit(t))).product();
                if block.is_one() {
                    (0..start).map(|t| Self::weight(preperiod, period, t, x.digit(t))).product()
                } else {
                    Rational::zero()
                }
            }
            MeasureKind::Dirac(y) => {
                if x == y {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            MeasureKind::Mixture(parts) => parts.iter().map(|(c, m)| c * m.point_mass(x)).sum(),
        }
    }

    /// Atoms of positive mass that a Dirac component carries.
    pub fn dirac_atoms(&self) -> Vec<Point> {
        match &self.kind {
            MeasureKind::Dirac(x) => vec![x.clone()],
            MeasureKind::Mixture(parts) => parts.iter().flat_map(|(_, m)| m.dirac_atoms()).collect(),
            MeasureKind::Product { .. } => Vec::new(),
        }
    }
}

pub fn measure_of(mu: &MeasureSpec, set: &ClopenSet) -> Result<Rational> {
    if mu.signature() != set.signature() {
        return Err(Error::SignatureMismatch);
    }
    Ok(set.words().iter().map(|w| mu.of_cylinder(w)).sum())
}

/// Measure of an open difference set: the core minus the removed points.
/// When the set carries an unresolved part, this is an upper bound.
pub fn measure_of_open(mu: &MeasureSpec, set: &OpenDiffSet) -> Result<Rational> {
    let core = measure_of(mu, set.core())?;
    let removed: Rational = set.removed_points().iter().map(|p| mu.point_mass(p)).sum();
    Ok(core - removed)
}

/// `(μ∘S)(A) = μ(S A)`.
pub fn pushforward_measure_of(mu: &MeasureSpec, map: &Homeo, set: &ClopenSet) -> Result<Rational> {
    measure_of(mu, &map.image(set)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::{CylinderHomeo, Odometer};
    use crate::rational::ratio;

    fn dy() -> Signature {
        Signature::dyadic()
    }

    fn set(words: &[&str]) -> ClopenSet {
        ClopenSet::from_words(&dy(), words.iter().map(|&w| w.into()).collect())
    }

    #[test]
    fn basic_values() {
        let u = MeasureSpec::uniform(&dy());
        assert_eq!(measure_of(&u, &set(&["01"])).unwrap(), ratio(1, 4));
        let d = MeasureSpec::dirac(&dy(), Point::constant(0)).unwrap();
        assert_eq!(measure_of(&d, &set(&["0"])).unwrap(), ratio(1, 1));
        assert_eq!(measure_of(&d, &set(&["1"])).unwrap(), ratio(0, 1));
        let mix = MeasureSpec::mixture(
            &dy(),
            vec![(ratio(1, 2), u.clone()), (ratio(1, 2), MeasureSpec::dirac(&dy(), Point::constant(1)).unwrap())],
        )
        .unwrap();
        assert_eq!(measure_of(&mix, &set(&["1"])).unwrap(), ratio(3, 4));
    }

    #[test]
    fn pushforward_examples() {
        let u = MeasureSpec::uniform(&dy());
        let odo = Homeo::Odometer(Odometer::new(&dy(), 1));
        assert_eq!(pushforward_measure_of(&u, &odo, &set(&["01"])).unwrap(), ratio(1, 4));
        let swap = Homeo::Cylinder(CylinderHomeo::swap());
        let d = MeasureSpec::dirac(&dy(), Point::constant(0)).unwrap();
        assert_eq!(pushforward_measure_of(&d, &swap, &set(&["0"])).unwrap(), ratio(0, 1));
        let diss = Homeo::Cylinder(CylinderHomeo::from_pairs(&dy(), &[("0".into(), "00".into()), ("10".into(), "01".into()), ("11".into(), "1".into())]).unwrap());
        assert_eq!(pushforward_measure_of(&u, &diss, &set(&["0"])).unwrap(), ratio(1, 4));
    }

    #[test]
    fn point_masses() {
        let sig = dy();
        let p = MeasureSpec::product(&sig, vec![], vec![vec![ratio(1, 1), ratio(0, 1)]]).unwrap();
        assert_eq!(p.point_mass(&Point::constant(0)), ratio(1, 1));
        assert_eq!(MeasureSpec::uniform(&sig).point_mass(&Point::constant(0)), ratio(0, 1));
        assert!(MeasureSpec::product(&sig, vec![], vec![vec![ratio(1, 2)]]).is_err());
    }
}
