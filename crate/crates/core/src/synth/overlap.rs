use crate::error::{Error, Result};
use crate::homeo::Homeo;
use crate::space::ClopenSet;

/// Overlap graph of a partition under `T`: arc `i → j` iff `F_ij = TF_i ∩ F_j`
/// is nonempty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OverlapGraph {
    pub atoms: Vec<ClopenSet>,
    /// `cells[i][j] = TF_i ∩ F_j`.
    pub cells: Vec<Vec<ClopenSet>>,
    /// Minimal circulation with every arc used at least once, when one exists.
    pub multiplicities: Option<Vec<Vec<u64>>>,
}

impl OverlapGraph {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        !self.cells[i][j].is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.has_arc(i, j)).collect()).collect()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.has_arc(i, j)).collect()
    }

    /// Strongly connected components, each sorted, listed by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        strong_components(&self.adjacency())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph overlap {\n");
        for (i, a) in self.atoms.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{i}: {}\"];\n", a.fmt_words()));
        }
        for (i, j) in self.arcs() {
            match &self.multiplicities {
                Some(m) => out.push_str(&format!("  v{i} -> v{j} [label=\"{}\"];\n", m[i][j])),
                None => out.push_str(&format!("  v{i} -> v{j};\n")),
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn overlap_graph(t: &Homeo, partition: &[ClopenSet]) -> Result<OverlapGraph> {
    check_partition(partition)?;
    let images: Vec<ClopenSet> = partition.iter().map(|f| t.image(f)).collect::<Result<_>>()?;
    let cells: Vec<Vec<ClopenSet>> = images
        .iter()
        .map(|tf| partition.iter().map(|f| tf.intersect(f)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut g = OverlapGraph { atoms: partition.to_vec(), cells, multiplicities: None };
    g.multiplicities = min_circulation(&g.adjacency());
    Ok(g)
}

pub(crate) fn check_partition(partition: &[ClopenSet]) -> Result<()> {
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

/// Tarjan's algorithm; components sorted internally and by first vertex.
pub(crate) fn strong_components(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<bool>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..s.adj.len() {
            if !s.adj[v][w] {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("on stack");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort();
            s.out.push(comp);
        }
    }
    let n = adj.len();
    let mut s = State {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out.sort();
    s.out
}

/// Minimal-total integer circulation with lower bound 1 on every arc.
///
/// Starts from `m ≡ 1` and repairs imbalances one unit at a time along
/// cheapest residual paths (each unit on an arc costs 1; lowering an arc
/// above its bound refunds 1). Paths run from the super-source through the
/// surplus vertices; Bellman–Ford scans arcs lexicographically and the
/// nearest deficit vertex with smallest index is served first.
pub fn min_circulation(adj: &[Vec<bool>]) -> Option<Vec<Vec<u64>>> {
    let n = adj.len();
    let mut m: Vec<Vec<u64>> = adj.iter().map(|row| row.iter().map(|&a| a as u64).collect()).collect();
    let arcs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j] && i != j).collect();
    // excess = inflow - outflow; positive vertices must push flow out.
    let excess = |m: &Vec<Vec<u64>>, v: usize| -> i64 {
        (0..n).map(|u| m[u][v] as i64).sum::<i64>() - (0..n).map(|w| m[v][w] as i64).sum::<i64>()
    };
    loop {
        let ex: Vec<i64> = (0..n).map(|v| excess(&m, v)).collect();
        if ex.iter().all(|&e| e == 0) {
            return Some(m);
        }
        const INF: i64 = i64::MAX / 4;
        let mut dist = vec![INF; n];
        // Predecessor: (vertex, forward?) along a residual arc.
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; n];
        for v in 0..n {
            if ex[v] > 0 {
                dist[v] = 0;
            }
        }
        for _ in 0..n {
            let mut changed = false;
            for &(u, v) in &arcs {
                if dist[u] < INF && dist[u] + 1 < dist[v] {
                    dist[v] = dist[u] + 1;
                    pred[v] = Some((u, true));
                    changed = true;
                }
                if m[u][v] > 1 && dist[v] < INF && dist[v] - 1 < dist[u] {
                    dist[u] = dist[v] - 1;
                    pred[u] = Some((v, false));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let target = (0..n).filter(|&v| ex[v] < 0 && dist[v] < INF).min_by_key(|&v| (dist[v], v))?;
        let mut v = target;
        while let Some((u, forward)) = pred[v] {
            if forward {
                m[u][v] += 1;
            } else {
                m[v][u] -= 1;
            }
            v = u;
        }
    }
}
