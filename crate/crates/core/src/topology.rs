//! The topologies as computable quantities: the weak metric, neighborhood
//! membership, partition-restricted defect functionals and the limsup test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::homeo::{compare_tables, difference_set_at, Homeo, DEFAULT_DEPTH};
use crate::measure::{measure_of, measure_of_open, MeasureSpec};
use crate::rational::Rational;
use crate::space::metric::{set_distance, spread};
use crate::space::ClopenSet;

/// Exact value, or certified bounds when an operand is only resolved off a
/// small set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WeakDistance {
    Exact(Rational),
    Interval { lower: Rational, upper: Rational },
}

impl WeakDistance {
    pub fn lower(&self) -> &Rational {
        match self {
            WeakDistance::Exact(v) => v,
            WeakDistance::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            WeakDistance::Exact(v) => v,
            WeakDistance::Interval { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            WeakDistance::Exact(v) => Some(v),
            WeakDistance::Interval { .. } => None,
        }
    }
}

pub fn weak_distance(s: &Homeo, t: &Homeo) -> Result<WeakDistance> {
    weak_distance_at(s, t, DEFAULT_DEPTH)
}

/// `d_w(S,T) = sup d(Sx,Tx) + sup d(S⁻¹x,T⁻¹x)`, resolving towers to `depth`.
pub fn weak_distance_at(s: &Homeo, t: &Homeo, depth: usize) -> Result<WeakDistance> {
    if s.signature() != t.signature() {
        return Err(Error::SignatureMismatch);
    }
    let (lo1, hi1) = one_way(s, t, depth)?;
    let (lo2, hi2) = one_way(&s.inverse(), &t.inverse(), depth)?;
    let (lower, upper) = (lo1 + lo2, hi1 + hi2);
    Ok(if lower == upper { WeakDistance::Exact(lower) } else { WeakDistance::Interval { lower, upper } })
}

fn one_way(s: &Homeo, t: &Homeo, depth: usize) -> Result<(Rational, Rational)> {
    let (cells, unresolved) = compare_tables(&s.table(depth)?, &t.table(depth)?);
    let resolved = cells.into_iter().map(|c| c.sup).max().unwrap_or_else(Rational::zero);
    if unresolved.is_empty() {
        return Ok((resolved.clone(), resolved));
    }
    let (su, tu) = (s.image(&unresolved)?, t.image(&unresolved)?);
    let lower = resolved.clone().max(set_distance(&su, &tu)?);
    let upper = resolved.max(spread(&su, &tu)?);
    Ok((lower, upper))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NeighborhoodSpec {
    /// `W(T; F_1,…,F_k)`: `SF_i = TF_i` for all `i`.
    P { base: Homeo, sets: Vec<ClopenSet> },
    /// `U(T; μ_1,…,μ_n; ε)`: `μ_i(E(S,T)) < ε`.
    Uniform { base: Homeo, measures: Vec<MeasureSpec>, epsilon: Rational },
    /// `μ_j(SF_i Δ TF_i) + μ_j(S⁻¹F_i Δ T⁻¹F_i) < ε` for all `i, j`.
    BarP { base: Homeo, sets: Vec<ClopenSet>, measures: Vec<MeasureSpec>, epsilon: Rational },
    /// `d_w(S,T) < radius`.
    WeakBall { base: Homeo, radius: Rational },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// Indices of the sets with `SF_i ≠ TF_i`.
    SetImages { mismatched: Vec<usize> },
    /// One value per measure (uniform) or per `(set, measure)` pair, set-major.
    Measures(Vec<Rational>),
    Distance(WeakDistance),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Membership {
    pub member: bool,
    pub certificate: Certificate,
}

impl NeighborhoodSpec {
    pub fn base(&self) -> &Homeo {
        match self {
            NeighborhoodSpec::P { base, .. }
            | NeighborhoodSpec::Uniform { base, .. }
            | NeighborhoodSpec::BarP { base, .. }
            | NeighborhoodSpec::WeakBall { base, .. } => base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |e: &Rational| {
            if e.is_positive() {
                Ok(())
            } else {
                Err(Error::InvalidArgument("epsilon must be positive".into()))
            }
        };
        let nonempty = |sets: &[ClopenSet]| {
            if sets.iter().any(ClopenSet::is_empty) {
                Err(Error::EmptySet)
            } else {
                Ok(())
            }
        };
        match self {
            NeighborhoodSpec::P { sets, .. } => nonempty(sets),
            NeighborhoodSpec::Uniform { epsilon, .. } => positive(epsilon),
            NeighborhoodSpec::BarP { sets, epsilon, .. } => {
                nonempty(sets)?;
                positive(epsilon)
            }
            NeighborhoodSpec::WeakBall { radius, .. } => positive(radius),
        }
    }
}

pub fn in_neighborhood(s: &Homeo, n: &NeighborhoodSpec) -> Result<Membership> {
    in_neighborhood_at(s, n, DEFAULT_DEPTH)
}

pub fn in_neighborhood_at(s: &Homeo, n: &NeighborhoodSpec, depth: usize) -> Result<Membership> {
    n.validate()?;
    let t = n.base();
    if s.signature() != t.signature() {
        return Err(Error::SignatureMismatch);
    }
    match n {
        NeighborhoodSpec::P { sets, .. } => {
            let mut mismatched = Vec::new();
            for (i, f) in sets.iter().enumerate() {
                if s.image(f)? != t.image(f)? {
                    mismatched.push(i);
                }
            }
            Ok(Membership { member: mismatched.is_empty(), certificate: Certificate::SetImages { mismatched } })
        }
        NeighborhoodSpec::Uniform { measures, epsilon, .. } => {
            let e = difference_set_at(s, t, depth)?;
            let mut values = Vec::new();
            let mut member = true;
            for mu in measures {
                let lower = measure_of_open(mu, &e)?;
                let upper = &lower + measure_of(mu, e.unresolved())?;
                if lower >= *epsilon {
                    member = false;
                } else if upper >= *epsilon {
                    return Err(Error::Indeterminate(depth));
                }
                values.push(upper);
            }
            Ok(Membership { member, certificate: Certificate::Measures(values) })
        }
        NeighborhoodSpec::BarP { sets, measures, epsilon, .. } => {
            let mut values = Vec::new();
            for f in sets {
                let fwd = s.image(f)?.symmetric_difference(&t.image(f)?)?;
                let bwd = s.preimage(f)?.symmetric_difference(&t.preimage(f)?)?;
                for mu in measures {
                    values.push(measure_of(mu, &fwd)? + measure_of(mu, &bwd)?);
                }
            }
            let member = values.iter().all(|v| v < epsilon);
            Ok(Membership { member, certificate: Certificate::Measures(values) })
        }
        NeighborhoodSpec::WeakBall { radius, .. } => {
            let d = weak_distance_at(s, t, depth)?;
            let member = if d.upper() < radius {
                true
            } else if d.lower() >= radius {
                false
            } else {
                return Err(Error::Indeterminate(depth));
            };
            Ok(Membership { member, certificate: Certificate::Distance(d) })
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DefectKind {
    /// `sup_F μ(TF Δ SF)`.
    TauPrime,
    /// `sup_F |μ(TF) − μ(SF)|`.
    BarTau,
}

/// Atom count up to which unions are enumerated exhaustively.
pub const EXHAUSTIVE_ATOMS: usize = 20;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DefectBound {
    /// A lower bound for the supremum over all clopen sets.
    pub value: Rational,
    /// The union of atoms attaining `value`.
    pub witness: ClopenSet,
    /// False when the greedy search was used.
    pub exhaustive: bool,
}

/// Maximizes the defect over unions of `partition` atoms. Beyond
/// [`EXHAUSTIVE_ATOMS`] atoms a greedy single-flip ascent is used, and only
/// when `heuristic` is set.
pub fn defect_over_partition(
    kind: DefectKind,
    s: &Homeo,
    t: &Homeo,
    mu: &MeasureSpec,
    partition: &[ClopenSet],
    heuristic: bool,
) -> Result<DefectBound> {
    check_partition(partition)?;
    let sig = s.signature();
    let n = partition.len();
    let sa: Vec<ClopenSet> = partition.iter().map(|a| s.image(a)).collect::<Result<_>>()?;
    let ta: Vec<ClopenSet> = partition.iter().map(|a| t.image(a)).collect::<Result<_>>()?;
    let union_of = |chosen: &[bool]| {
        let words = partition.iter().zip(chosen).filter(|(_, &c)| c).flat_map(|(a, _)| a.words().to_vec());
        ClopenSet::from_words(sig, words.collect())
    };
    match kind {
        DefectKind::BarTau => {
            let d: Vec<Rational> = (0..n)
                .map(|k| Ok(measure_of(mu, &ta[k])? - measure_of(mu, &sa[k])?))
                .collect::<Result<_>>()?;
            let pos: Rational = d.iter().filter(|v| v.is_positive()).sum();
            let neg: Rational = -d.iter().filter(|v| v.is_negative()).sum::<Rational>();
            let chosen: Vec<bool> =
                d.iter().map(|v| if pos >= neg { v.is_positive() } else { v.is_negative() }).collect();
            Ok(DefectBound { value: pos.max(neg), witness: union_of(&chosen), exhaustive: true })
        }
        DefectKind::TauPrime => {
            if n > EXHAUSTIVE_ATOMS && !heuristic {
                return Err(Error::CapExceeded(format!(
                    "{n} atoms exceed the exhaustive limit of {EXHAUSTIVE_ATOMS}; enable the heuristic"
                )));
            }
            // w[k][l] = μ(TA_k ∩ SA_l); a point there lies in TF Δ SF iff
            // exactly one of k, l is chosen.
            let mut w = vec![vec![Rational::zero(); n]; n];
            for k in 0..n {
                for l in 0..n {
                    if k != l {
                        w[k][l] = measure_of(mu, &ta[k].intersect(&sa[l])?)?;
                    }
                }
            }
            let denom = w.iter().flatten().fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()));
            let pair: Vec<Vec<i128>> = (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| {
                            let v = (&w[k][l] + &w[l][k]) * Rational::from_integer(denom.clone());
                            v.to_integer().to_i128().ok_or(Error::Overflow)
                        })
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            let mut chosen = vec![false; n];
            let delta = |chosen: &[bool], j: usize| -> i128 {
                (0..n).filter(|&l| l != j).map(|l| if chosen[l] == chosen[j] { pair[j][l] } else { -pair[j][l] }).sum()
            };
            let (mut best, mut best_set) = (0i128, chosen.clone());
            let exhaustive = n <= EXHAUSTIVE_ATOMS;
            if exhaustive {
                let mut cur = 0i128;
                for step in 1u64..(1u64 << n) {
                    let j = step.trailing_zeros() as usize;
                    cur += delta(&chosen, j);
                    chosen[j] = !chosen[j];
                    if cur > best {
                        best = cur;
                        best_set = chosen.clone();
                    }
                }
            } else {
                loop {
                    let (j, d) = (0..n).map(|j| (j, delta(&chosen, j))).max_by_key(|&(j, d)| (d, std::cmp::Reverse(j))).expect("atoms");
                    if d <= 0 {
                        break;
                    }
                    chosen[j] = !chosen[j];
                    best += d;
                }
                best_set = chosen;
            }
            let value = Rational::new(BigInt::from(best), denom);
            Ok(DefectBound { value, witness: union_of(&best_set), exhaustive })
        }
    }
}

fn check_partition(partition: &[ClopenSet]) -> Result<()> {
    let first = partition.first().ok_or_else(|| Error::NotAPartition("no atoms".into()))?;
    let mut union = ClopenSet::empty(first.signature());
    for a in partition {
        if a.is_empty() {
            return Err(Error::NotAPartition("empty atom".into()));
        }
        if !union.is_disjoint(a)? {
            return Err(Error::NotAPartition("atoms overlap".into()));
        }
        union = union.union(a)?;
    }
    if !union.is_full() {
        return Err(Error::NotAPartition("atoms do not cover the space".into()));
    }
    Ok(())
}

/// Finite-horizon form of `F = ∪_m ∩_{n>m} T_n F` (and likewise for the
/// inverses) over the supplied terms: `m` ranges over the indices leaving at
/// least `depth` terms in the tail intersection.
pub fn limsup_check(sequence: &[Homeo], f: &ClopenSet, depth: usize) -> Result<bool> {
    let len = sequence.len();
    let window = depth.max(1);
    if len < window {
        return Err(Error::InvalidArgument(format!("{len} terms cannot fill a tail of {window}")));
    }
    for inverse in [false, true] {
        let images: Vec<ClopenSet> = sequence
            .iter()
            .map(|t| if inverse { t.preimage(f) } else { t.image(f) })
            .collect::<Result<_>>()?;
        let mut union = ClopenSet::empty(f.signature());
        for m in 0..=len - window {
            let mut meet = ClopenSet::full(f.signature());
            for img in &images[m..] {
                meet = meet.intersect(img)?;
            }
            union = union.union(&meet)?;
        }
        if union != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::{CylinderHomeo, Odometer};
    use crate::rational::{int, ratio};
    use crate::space::{Point, Signature, Word};

    fn dy() -> Signature {
        Signature::dyadic()
    }

    fn set(words: &[&str]) -> ClopenSet {
        ClopenSet::from_words(&dy(), words.iter().map(|&w| w.into()).collect())
    }

    fn swap() -> Homeo {
        Homeo::Cylinder(CylinderHomeo::swap())
    }

    #[test]
    fn weak_distance_examples() {
        let id = Homeo::identity(&dy());
        assert_eq!(weak_distance(&id, &swap()).unwrap(), WeakDistance::Exact(int(2)));
        assert_eq!(weak_distance(&swap(), &swap()).unwrap(), WeakDistance::Exact(int(0)));
        let odo = Homeo::Odometer(Odometer::new(&dy(), 1));
        assert_eq!(weak_distance(&odo, &odo.power(3)).unwrap(), WeakDistance::Exact(int(1)));
    }

    #[test]
    fn neighborhood_examples() {
        let odo = Homeo::Odometer(Odometer::new(&dy(), 1));
        let p = NeighborhoodSpec::P { base: odo.clone(), sets: vec![set(&["0"]), set(&["1"])] };
        assert!(in_neighborhood(&odo, &p).unwrap().member);
        let u = NeighborhoodSpec::Uniform {
            base: Homeo::identity(&dy()),
            measures: vec![MeasureSpec::uniform(&dy())],
            epsilon: ratio(1, 2),
        };
        let m = in_neighborhood(&swap(), &u).unwrap();
        assert!(!m.member);
        assert_eq!(m.certificate, Certificate::Measures(vec![int(1)]));
        let dirac = MeasureSpec::dirac(&dy(), Point::constant(0)).unwrap();
        let b = NeighborhoodSpec::BarP { base: swap(), sets: vec![set(&["0"])], measures: vec![dirac], epsilon: ratio(1, 4) };
        assert!(!in_neighborhood(&Homeo::identity(&dy()), &b).unwrap().member);
    }

    #[test]
    fn defect_examples() {
        let dirac = MeasureSpec::dirac(&dy(), Point::constant(0)).unwrap();
        let xi1 = [set(&["0"]), set(&["1"])];
        let id = Homeo::identity(&dy());
        for kind in [DefectKind::BarTau, DefectKind::TauPrime] {
            assert_eq!(defect_over_partition(kind, &swap(), &id, &dirac, &xi1, false).unwrap().value, int(1));
            assert_eq!(defect_over_partition(kind, &id, &id, &dirac, &xi1, false).unwrap().value, int(0));
        }
    }

    #[test]
    fn limsup_examples() {
        let f = set(&["0"]);
        assert!(limsup_check(&vec![Homeo::identity(&dy()); 4], &f, 1).unwrap());
        assert!(!limsup_check(&vec![swap(); 4], &f, 1).unwrap());
        let _ = Word::empty();
    }
}
