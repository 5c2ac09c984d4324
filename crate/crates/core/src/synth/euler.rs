use num_integer::Integer;

use crate::error::{Error, Result};
use crate::homeo::{exchange, BranchMap, CylinderHomeo, Homeo, TowerSystem};
use crate::space::{split, ClopenSet};
use crate::synth::overlap::{overlap_graph, OverlapGraph};

/// A synthesized map, or a proper clopen union of atoms `F` with `TF ⊆ F`
/// showing that none exists at this partition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Synthesis<T> {
    Success(T),
    Witness(ClopenSet),
}

#[derive(Clone, Debug)]
pub struct OdometerSynthesis {
    pub tower: TowerSystem,
    /// The pieces `E_{ij,k}` in circuit order; the tower's first level.
    pub pieces: Vec<ClopenSet>,
    pub graph: OverlapGraph,
}

#[derive(Clone, Debug)]
pub struct PeriodicSynthesis {
    pub map: CylinderHomeo,
    /// Order of `map`: the least common multiple of the circuit lengths.
    pub period: u64,
    pub graph: OverlapGraph,
}

/// Hierholzer's algorithm from `start`, taking out-arcs in `(target, copy)`
/// order. Returns the arcs `(i, j, k)` of the circuit in order.
pub(crate) fn euler_circuit(m: &[Vec<u64>], start: usize) -> Vec<(usize, usize, u64)> {
    let n = m.len();
    let out: Vec<Vec<(usize, usize, u64)>> =
        (0..n).map(|i| (0..n).flat_map(|j| (0..m[i][j]).map(move |k| (i, j, k))).collect()).collect();
    let mut next = vec![0usize; n];
    let mut stack: Vec<(usize, Option<(usize, usize, u64)>)> = vec![(start, None)];
    let mut circuit = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        if next[v] < out[v].len() {
            let arc = out[v][next[v]];
            next[v] += 1;
            stack.push((arc.1, Some(arc)));
        } else {
            stack.pop();
            if let Some(arc) = via {
                circuit.push(arc);
            }
        }
    }
    circuit.reverse();
    circuit
}

fn pieces_along(g: &OverlapGraph, m: &[Vec<u64>], circuit: &[(usize, usize, u64)]) -> Result<Vec<ClopenSet>> {
    circuit
        .iter()
        .map(|&(i, j, k)| Ok(split(&g.cells[i][j], m[i][j] as usize)?.swap_remove(k as usize)))
        .collect()
}

fn union_of(g: &OverlapGraph, comp: &[usize]) -> ClopenSet {
    let words = comp.iter().flat_map(|&i| g.atoms[i].words().to_vec()).collect();
    ClopenSet::from_words(g.atoms[0].signature(), words)
}

fn has_arc_out(g: &OverlapGraph, comp: &[usize]) -> bool {
    comp.iter().any(|&i| (0..g.len()).any(|j| !comp.contains(&j) && g.has_arc(i, j)))
}

fn has_arc_in(g: &OverlapGraph, comp: &[usize]) -> bool {
    comp.iter().any(|&j| (0..g.len()).any(|i| !comp.contains(&i) && g.has_arc(i, j)))
}

fn verify(s: &Homeo, t: &Homeo, atoms: &[ClopenSet]) -> Result<()> {
    for (i, f) in atoms.iter().enumerate() {
        if s.image(f)? != t.image(f)? {
            return Err(Error::NotAHomeomorphism(format!("synthesized map moves atom {i} differently")));
        }
    }
    Ok(())
}

/// An odometer `S` with `SF_i = TF_i` for every atom, built from an Euler
/// circuit of the overlap graph; or a forward-closed witness when the graph
/// is not strongly connected.
pub fn odometer_in_weak_neighborhood(t: &Homeo, partition: &[ClopenSet]) -> Result<Synthesis<OdometerSynthesis>> {
    let g = overlap_graph(t, partition)?;
    let comps = g.components();
    if comps.len() > 1 {
        let sink = comps.iter().find(|c| !has_arc_out(&g, c)).expect("a condensation has a sink");
        return Ok(Synthesis::Witness(union_of(&g, sink)));
    }
    let m = g.multiplicities.clone().expect("strongly connected graphs balance");
    let circuit = euler_circuit(&m, 0);
    let pieces = pieces_along(&g, &m, &circuit)?;
    let tower = TowerSystem::from_cycle(pieces.clone())?;
    verify(&Homeo::Tower(tower.clone()), t, partition)?;
    Ok(Synthesis::Success(OdometerSynthesis { tower, pieces, graph: g }))
}

/// A periodic `P` with `PF_i = TF_i`, one Euler circuit per weakly connected
/// component; or a witness `F` with `TF ⊊ F` when some component is not
/// strongly connected.
pub fn periodic_in_weak_neighborhood(t: &Homeo, partition: &[ClopenSet]) -> Result<Synthesis<PeriodicSynthesis>> {
    let g = overlap_graph(t, partition)?;
    let comps = g.components();
    let bad = comps.iter().filter(|c| !has_arc_out(&g, c) && has_arc_in(&g, c)).min_by_key(|c| c[0]);
    if let Some(c) = bad {
        return Ok(Synthesis::Witness(union_of(&g, c)));
    }
    // Every weak component is now a single strong component.
    let m = g.multiplicities.clone().expect("componentwise strongly connected graphs balance");
    let sig = partition[0].signature().clone();
    let mut map = BranchMap::empty(&sig);
    let mut period = 1u64;
    for comp in &comps {
        let circuit = euler_circuit(&m, comp[0]);
        let pieces = pieces_along(&g, &m, &circuit)?;
        let mut passage = BranchMap::identity(&sig).restrict(&pieces[0]);
        for pair in pieces.windows(2) {
            let link = exchange(&pair[0], &pair[1])?;
            passage = link.compose(&passage);
            map = map.union(&link);
        }
        map = map.union(&passage.inverse());
        period = period.lcm(&(pieces.len() as u64));
    }
    let p = CylinderHomeo::from_map(map);
    if !p.power(period as i64).is_identity() {
        return Err(Error::NotPeriodic(period as usize));
    }
    verify(&Homeo::Cylinder(p.clone()), t, partition)?;
    Ok(Synthesis::Success(PeriodicSynthesis { map: p, period, graph: g }))
}
