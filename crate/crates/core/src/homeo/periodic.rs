use crate::homeo::CylinderHomeo;
use crate::space::{ClopenSet, Point};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodStructure {
    /// `(p, Ω_p)`: the clopen set of points of exact period `p`, for `p ≤ N`.
    pub parts: Vec<(usize, ClopenSet)>,
    /// Periodic points outside the clopen parts, with their exact periods.
    pub isolated: Vec<(usize, Point)>,
    /// The `m ≤ N` with `T^m = id`.
    pub identity_powers: Vec<usize>,
    pub residual: ClopenSet,
    pub aperiodic_up_to_bound: bool,
}

impl PeriodStructure {
    /// A periodic point of least period, if any was found.
    pub fn first_periodic_point(&self) -> Option<(usize, Point)> {
        let clopen = self.parts.iter().find(|(_, s)| !s.is_empty()).map(|(p, s)| {
            (*p, Point::behind(s.words()[0].digits(), &Point::constant(0)))
        });
        clopen.into_iter().chain(self.isolated.iter().cloned()).min_by_key(|(p, _)| *p)
    }
}

pub fn period_structure(t: &CylinderHomeo, bound: usize) -> PeriodStructure {
    let sig = t.signature();
    let mut fixed_so_far = ClopenSet::empty(sig);
    let mut parts = Vec::new();
    let mut isolated: Vec<(usize, Point)> = Vec::new();
    let mut identity_powers = Vec::new();
    let mut power = CylinderHomeo::identity(sig);
    for p in 1..=bound {
        power = power.compose(t).expect("one signature");
        if power.is_identity() {
            identity_powers.push(p);
        }
        let fix = power.fixed_points();
        parts.push((p, fix.clopen.difference(&fixed_so_far).expect("one signature")));
        fixed_so_far = fixed_so_far.union(&fix.clopen).expect("one signature");
        for x in fix.isolated {
            if isolated.iter().any(|(_, y)| *y == x) {
                continue;
            }
            let mut y = t.apply(&x);
            let mut period = 1;
            while y != x {
                y = t.apply(&y);
                period += 1;
            }
            isolated.push((period, x));
        }
    }
    isolated.retain(|(_, x)| !fixed_so_far.contains_point(x));
    isolated.sort();
    let residual = fixed_so_far.complement();
    let aperiodic_up_to_bound = residual.is_full() && isolated.is_empty();
    PeriodStructure { parts, isolated, identity_powers, residual, aperiodic_up_to_bound }
}
