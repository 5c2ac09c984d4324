use crate::error::{Error, Result};
use crate::homeo::{
    difference_set_at, exchange, period_structure, Branch, CylinderHomeo, Homeo, Odometer, TowerSystem,
    DEFAULT_DEPTH,
};
use crate::measure::{measure_of, measure_of_open, MeasureSpec};
use crate::rational::{dyadic, int, Rational};
use crate::space::metric::diameter;
use crate::space::{ClopenSet, Point, Word};
use crate::synth::castle::{marker, return_towers, Powers};
use crate::synth::fundamental::fundamental_domain;
use crate::topology::weak_distance_at;

/// Largest marker separation tried by the rank-one construction.
pub const RANK1_SEPARATION_CAP: usize = 256;
/// Deepest truncation or subtower refinement tried.
pub const APPROX_DEPTH_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct Rank1 {
    pub tower: TowerSystem,
    /// Separation of the marker the towers return to.
    pub separation: usize,
    /// Towers stand over `T^offset` of the marker.
    pub offset: usize,
    /// `μ_i` of the difference set `E(S,T)`, one per measure.
    pub certificate: Vec<Rational>,
}

/// A tower system `S` agreeing with `T` off the tops of a first-return
/// castle, with `μ_i(E(S,T)) < ε` certified exactly.
///
/// Towers stand over `T^K A` for a marker `A`; the sets `T^K A` are disjoint
/// for `0 ≤ K < n'`, so some rotation keeps both the tops and the bases
/// light once `n' > 2·#measures/ε`.
pub fn rank1_in_uniform_neighborhood(
    t: &Homeo,
    measures: &[MeasureSpec],
    epsilon: &Rational,
    period_bound: usize,
) -> Result<Rank1> {
    if *epsilon <= int(0) {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    if period_bound < 2 {
        return Err(Error::InvalidArgument("period bound must be at least 2".into()));
    }
    let tc = t.exact().ok_or(Error::Unresolvable(DEFAULT_DEPTH))?;
    if measures.iter().any(|mu| mu.signature() != tc.signature()) {
        return Err(Error::SignatureMismatch);
    }
    if let Some((period, point)) = period_structure(&tc, period_bound).first_periodic_point() {
        return Err(Error::PeriodicPoint { period, point });
    }
    let mass = |set: &ClopenSet| -> Result<Vec<Rational>> { measures.iter().map(|mu| measure_of(mu, set)).collect() };
    for sep in 2..=RANK1_SEPARATION_CAP {
        let powers = Powers::new(&tc, 2 * sep);
        let a = marker(&powers, sep)?;
        let mut best: Option<(Rational, usize)> = None;
        for k in 0..sep {
            let base = powers.forward[k].image(&a)?;
            let top = if k == 0 { powers.backward[1].image(&a)? } else { powers.forward[k - 1].image(&a)? };
            let worst = mass(&base)?
                .into_iter()
                .zip(mass(&top)?)
                .map(|(x, y)| x + y)
                .max()
                .unwrap_or_else(|| int(0));
            if best.as_ref().is_none_or(|(w, _)| worst < *w) {
                best = Some((worst, k));
            }
        }
        let (worst, k) = best.expect("sep ≥ 2");
        if worst >= *epsilon {
            continue;
        }
        let base = powers.forward[k].image(&a)?;
        let towers = return_towers(&tc, &powers, &base, 2 * sep - 1)?;
        let mut cycle = Vec::new();
        let mut links = Vec::new();
        for (i, tower) in towers.iter().enumerate() {
            for (j, level) in tower.levels.iter().enumerate() {
                if j + 1 < tower.height() {
                    links.push(tc.map().restrict(level));
                }
                cycle.push(level.clone());
            }
            if let Some(next) = towers.get(i + 1) {
                links.push(exchange(tower.top(), &next.base)?);
            }
        }
        let tower = TowerSystem::build(cycle, links)?;
        let diff = difference_set_at(&Homeo::Tower(tower.clone()), t, DEFAULT_DEPTH)?;
        let certificate = mass(&diff.hull())?;
        if certificate.iter().all(|m| m < epsilon) {
            return Ok(Rank1 { tower, separation: sep, offset: k, certificate });
        }
    }
    Err(Error::CapExceeded(format!("no marker separation up to {RANK1_SEPARATION_CAP} met the bound")))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ApproxMode {
    Weak(Rational),
    Uniform(Vec<MeasureSpec>, Rational),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ApproxCertificate {
    /// Exact `d_w(S,Q)`.
    Distance(Rational),
    /// `μ_i(E(Q,S))` per measure.
    Measures(Vec<Rational>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodicApprox {
    pub depth: usize,
    pub map: CylinderHomeo,
    /// Order of `map`.
    pub period: u128,
    pub certificate: ApproxCertificate,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ApproxOutcome {
    Success(PeriodicApprox),
    /// Every truncation's carry region holds an atom of this mass; no
    /// truncation can beat ε for measure `measure`.
    Obstruction { measure: usize, atom: Point, mass: Rational },
}

/// The depth-`t` truncation: the odometer with every carry out of level `t`
/// dropped, so the first `t` digits cycle and the tail is left alone.
pub fn truncation(s: &Odometer, t: usize) -> Result<CylinderHomeo> {
    Ok(truncate(s, t)?.0)
}

/// The truncation together with its carry region (where it differs from
/// `S`) and the image of that region.
fn truncate(s: &Odometer, t: usize) -> Result<(CylinderHomeo, ClopenSet, ClopenSet)> {
    let sig = s.signature();
    let mut pending = s.map().branches.clone();
    let mut out = Vec::new();
    let (mut top, mut base) = (Vec::new(), Vec::new());
    while let Some(b) = pending.pop() {
        if b.shift == 0 {
            out.push(b);
        } else if b.domain.len() >= t {
            top.push(b.domain.clone());
            base.push(b.image.clone());
            out.push(Branch::new(b.domain, b.image, 0));
        } else {
            pending.extend(b.domain.children(sig).map(|c| b.restrict(sig, &c)).collect::<Vec<_>>());
        }
    }
    Ok((CylinderHomeo::new(sig, out)?, ClopenSet::from_words(sig, top), ClopenSet::from_words(sig, base)))
}

/// Points every truncation's carry region contains: `0, …, |k|−1` and
/// `−1, …, −|k|` as mixed-radix integers.
fn carry_atoms(s: &Odometer) -> Vec<Point> {
    let sig = s.signature();
    let zero = Point::constant(0);
    let k = s.shift().abs();
    let mut atoms: Vec<Point> = (0..k).chain(-k..0).map(|j| crate::homeo::add_to_point(sig, 0, &zero, j)).collect();
    atoms.sort();
    atoms.dedup();
    atoms
}

/// A periodic map `Q` close to the odometer `S`: the depth-`t` truncation
/// for the least admissible `t`, with an exact certificate.
pub fn periodic_approx_odometer(s: &Odometer, mode: &ApproxMode) -> Result<ApproxOutcome> {
    let sig = s.signature();
    let start = 0;
    let order = |t: usize| -> Result<u128> {
        let p = sig.cylinder_count(t)?;
        Ok(p / num_integer::gcd(p, s.shift().unsigned_abs() as u128))
    };
    match mode {
        ApproxMode::Weak(eps) => {
            if *eps <= int(0) {
                return Err(Error::InvalidArgument("ε must be positive".into()));
            }
            let first = (start..).find(|&t| dyadic(t) * int(2) < *eps).expect("ε > 0");
            for t in first..=APPROX_DEPTH_CAP {
                let q = truncation(s, t)?;
                let d = weak_distance_at(&Homeo::Cylinder(q.clone()), &Homeo::Odometer(s.clone()), t.max(DEFAULT_DEPTH))?;
                let Some(d) = d.exact().cloned() else { continue };
                if d < *eps {
                    let period = order(t)?;
                    return Ok(ApproxOutcome::Success(PeriodicApprox {
                        depth: t,
                        map: q,
                        period,
                        certificate: ApproxCertificate::Distance(d),
                    }));
                }
            }
            Err(Error::CapExceeded(format!("no truncation up to depth {APPROX_DEPTH_CAP} is within ε")))
        }
        ApproxMode::Uniform(measures, eps) => {
            if *eps <= int(0) {
                return Err(Error::InvalidArgument("ε must be positive".into()));
            }
            if measures.iter().any(|mu| mu.signature() != sig) {
                return Err(Error::SignatureMismatch);
            }
            let atoms = carry_atoms(s);
            for (i, mu) in measures.iter().enumerate() {
                let mass: Rational = atoms.iter().map(|a| mu.point_mass(a)).sum();
                if mass >= *eps {
                    let atom = atoms.iter().find(|a| mu.point_mass(a) > int(0)).expect("positive mass").clone();
                    return Ok(ApproxOutcome::Obstruction { measure: i, atom, mass });
                }
            }
            for t in start..=APPROX_DEPTH_CAP {
                let (q, top, base) = truncate(s, t)?;
                let light = measures.iter().all(|mu| {
                    measure_of(mu, &top).and_then(|a| Ok(a + measure_of(mu, &base)?)).is_ok_and(|m| m < *eps)
                });
                if !light {
                    continue;
                }
                let diff = difference_set_at(&Homeo::Cylinder(q.clone()), &Homeo::Odometer(s.clone()), t.max(DEFAULT_DEPTH))?;
                let certificate = measures.iter().map(|mu| measure_of_open(mu, &diff)).collect::<Result<Vec<_>>>()?;
                if certificate.iter().all(|m| m < eps) {
                    let period = order(t)?;
                    return Ok(ApproxOutcome::Success(PeriodicApprox {
                        depth: t,
                        map: q,
                        period,
                        certificate: ApproxCertificate::Measures(certificate),
                    }));
                }
            }
            Err(Error::CapExceeded(format!("no truncation up to depth {APPROX_DEPTH_CAP} is light enough")))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Aperiodization {
    pub map: CylinderHomeo,
    pub fundamental_domain: ClopenSet,
    /// Subtower bases `F_m ⊆ E`, each carrying a local odometer.
    pub bases: Vec<Word>,
    /// Exact `d_w(T,P)`.
    pub certificate: Rational,
}

/// An aperiodic `T` with `d_w(T,P) < ε`: cut the `P`-tower over a
/// fundamental domain into subtowers whose levels have diameter `< ε/2`, and
/// compose `P` with the tail odometer `w·y ↦ w·(y+1)` on each subtower base.
pub fn aperiodize_periodic(p_map: &CylinderHomeo, epsilon: &Rational, p: usize) -> Result<Aperiodization> {
    if *epsilon <= int(0) {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let sig = p_map.signature();
    let e = fundamental_domain(p_map, p)?;
    let powers: Vec<CylinderHomeo> = (0..p).map(|i| p_map.power(i as i64)).collect();
    let half = epsilon / int(2);
    let small = |w: &Word| -> Result<bool> {
        let cyl = ClopenSet::cylinder(sig, w.clone());
        for q in &powers {
            if diameter(&q.image(&cyl)?)? >= half {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut bases = Vec::new();
    let mut pending: Vec<Word> = e.words().iter().rev().cloned().collect();
    while let Some(w) = pending.pop() {
        if small(&w)? {
            bases.push(w);
        } else if w.len() >= APPROX_DEPTH_CAP {
            return Err(Error::CapExceeded(format!("subtower levels stay wide below depth {APPROX_DEPTH_CAP}")));
        } else {
            let mut kids: Vec<Word> = w.children(sig).collect();
            kids.reverse();
            pending.extend(kids);
        }
    }
    bases.sort();
    let mut branches: Vec<Branch> = bases.iter().map(|w| Branch::new(w.clone(), w.clone(), 1)).collect();
    let rest = e.complement();
    branches.extend(rest.words().iter().map(|w| Branch::new(w.clone(), w.clone(), 0)));
    let local = CylinderHomeo::new(sig, branches)?;
    let t = local.compose(p_map)?;
    let d = weak_distance_at(&Homeo::Cylinder(t.clone()), &Homeo::Cylinder(p_map.clone()), DEFAULT_DEPTH)?;
    let d = d.exact().cloned().ok_or(Error::Unresolvable(DEFAULT_DEPTH))?;
    if d >= *epsilon {
        return Err(Error::InvalidArgument(format!("weak distance {} not below ε", crate::rational::fmt_rational(&d))));
    }
    Ok(Aperiodization { map: t, fundamental_domain: e, bases, certificate: d })
}
