//! The supernode dag of all global optima.
//!
//! After a max-flow run, contracting the residual graph (source-reachable
//! set, sink-reaching set, and every remaining strongly connected component)
//! yields a dag with at most n + 2 supernodes. Predecessor-closed sets
//! (ideals) of its interior are in bijection with the set of global minima:
//! for an ideal I, residue i is P exactly when its supernode is t' or lies
//! in I. This module builds that dag, enumerates ideals lazily in a
//! deterministic order, and inverts the construction (a digraph becomes a
//! fitness function whose dag reproduces the digraph's condensation).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mincut::{build_network, max_flow, AdjacencyOrder};
use crate::model::{FitnessFunction, HpSequence};
use crate::scc::scc_ids;

/// Supernode holding residue `i`: the source supernode s', the sink
/// supernode t', or the interior supernode with the given topological id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho {
    Source,
    Sink,
    Interior(usize),
}

/// Endpoint of a dag edge, interior or boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum End {
    S,
    T,
    K(usize),
}

/// Everything that identifies a dag up to labels: s' members, t' members,
/// interior member lists, and interior edges.
pub type DagSignature = (Vec<usize>, Vec<usize>, Vec<Vec<usize>>, Vec<(usize, usize)>);

/// The condensed dag of optima. Interior supernodes carry topological ids:
/// every interior edge (u, v) satisfies u < v. `members` lists the residues
/// of each interior supernode in increasing order.
pub struct PqDag {
    rho: Vec<Rho>,
    members: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    s_members: Vec<usize>,
    t_members: Vec<usize>,
    boundary_edges: Vec<(End, End)>,
}

impl PqDag {
    /// Residue count n.
    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn interior_count(&self) -> usize {
        self.members.len()
    }

    /// Total supernode count, interior plus s' and t'.
    pub fn supernode_count(&self) -> usize {
        self.members.len() + 2
    }

    pub fn rho(&self, residue: usize) -> Rho {
        self.rho[residue]
    }

    /// Residues of interior supernode `id`, sorted.
    pub fn members(&self, id: usize) -> &[usize] {
        &self.members[id]
    }

    /// Residues in s' (always H) and t' (always P), sorted.
    pub fn s_members(&self) -> &[usize] {
        &self.s_members
    }

    pub fn t_members(&self) -> &[usize] {
        &self.t_members
    }

    /// Interior edges (u, v) with u < v, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges with a boundary endpoint, sorted. These never constrain the
    /// ideals (they point into s' or out of t'); they are kept for display.
    pub fn boundary_edges(&self) -> &[(End, End)] {
        &self.boundary_edges
    }

    pub fn preds(&self, id: usize) -> &[usize] {
        &self.preds[id]
    }

    pub fn succs(&self, id: usize) -> &[usize] {
        &self.succs[id]
    }

    /// Label-level signature: two dags are label-isomorphic exactly when
    /// their signatures are equal (ids are canonical by construction).
    pub fn signature(&self) -> DagSignature {
        (
            self.s_members.clone(),
            self.t_members.clone(),
            self.members.clone(),
            self.edges.clone(),
        )
    }

    /// The sequence selected by an ideal: residue i is P exactly when its
    /// supernode is t' or lies in the ideal. The ideal must be
    /// predecessor-closed; a violated edge is reported by name.
    pub fn ideal_to_sequence(&self, ideal: &[usize]) -> Result<HpSequence> {
        let mut inside = vec![false; self.interior_count()];
        for &id in ideal {
            if id >= self.interior_count() {
                return Err(Error::BadSupernode(id));
            }
            inside[id] = true;
        }
        for &(u, v) in &self.edges {
            if inside[v] && !inside[u] {
                return Err(Error::ClosureViolation { from: u, to: v });
            }
        }
        Ok(self.sequence_of(&inside))
    }

    fn sequence_of(&self, inside: &[bool]) -> HpSequence {
        HpSequence::from_bits(
            self.rho
                .iter()
                .map(|r| match r {
                    Rho::Source => true,
                    Rho::Sink => false,
                    Rho::Interior(id) => !inside[*id],
                })
                .collect(),
        )
    }

    /// The ideal whose sequence is `x`, or an explanation of why `x` is not
    /// an optimum.
    pub fn ideal_of(&self, x: &HpSequence) -> Result<Vec<usize>> {
        if x.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: x.len(),
            });
        }
        let mut inside = vec![None; self.interior_count()];
        for (i, r) in self.rho.iter().enumerate() {
            match r {
                Rho::Source if !x.get(i) => {
                    return Err(Error::NotAnOptimum(format!(
                        "residue {} must be H in every optimum",
                        i + 1
                    )))
                }
                Rho::Sink if x.get(i) => {
                    return Err(Error::NotAnOptimum(format!(
                        "residue {} must be P in every optimum",
                        i + 1
                    )))
                }
                Rho::Interior(id) => {
                    let want = !x.get(i);
                    match inside[*id] {
                        None => inside[*id] = Some(want),
                        Some(prev) if prev != want => {
                            return Err(Error::NotAnOptimum(format!(
                                "supernode k{} mixes H and P residues",
                                id
                            )))
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
        let inside: Vec<bool> = inside.into_iter().map(|b| b.unwrap_or(false)).collect();
        for &(u, v) in &self.edges {
            if inside[v] && !inside[u] {
                return Err(Error::NotAnOptimum(format!(
                    "edge k{} -> k{} is violated",
                    u, v
                )));
            }
        }
        Ok((0..self.interior_count()).filter(|&id| inside[id]).collect())
    }

    /// DOT rendering with member lists (1-based); s' and t' are boxed.
    pub fn to_dot(&self) -> String {
        let list = |members: &[usize]| {
            members
                .iter()
                .map(|&i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let name = |e: &End| match e {
            End::S => "s".to_string(),
            End::T => "t".to_string(),
            End::K(id) => format!("k{}", id),
        };
        let mut out = String::from("digraph pqdag {\n");
        let _ = writeln!(out, "  s [shape=box, label=\"s' {{{}}}\"];", list(&self.s_members));
        let _ = writeln!(out, "  t [shape=box, label=\"t' {{{}}}\"];", list(&self.t_members));
        for (id, members) in self.members.iter().enumerate() {
            let _ = writeln!(out, "  k{} [label=\"k{} {{{}}}\"];", id, id, list(members));
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  k{} -> k{};", u, v);
        }
        for (a, b) in &self.boundary_edges {
            let _ = writeln!(out, "  {} -> {};", name(a), name(b));
        }
        out.push_str("}\n");
        out
    }
}

/// Assembles a `PqDag` from a component assignment over an auxiliary graph.
/// `comp_of` maps each graph node to a raw component id; components other
/// than `s_comp`/`t_comp` become interior supernodes, relabeled
/// topologically with ties broken by smallest member residue.
pub(crate) fn assemble_dag(
    n: usize,
    comp_of: &[usize],
    comp_count: usize,
    s_comp: usize,
    t_comp: usize,
    residue_of: impl Fn(usize) -> Option<usize>,
    node_edges: impl Iterator<Item = (usize, usize)>,
) -> PqDag {
    debug_assert_ne!(s_comp, t_comp);
    // Residue members per raw component.
    let mut raw_members: Vec<Vec<usize>> = vec![Vec::new(); comp_count];
    for node in 0..comp_of.len() {
        if let Some(r) = residue_of(node) {
            raw_members[comp_of[node]].push(r);
        }
    }
    for members in &mut raw_members {
        members.sort_unstable();
    }
    let interior_raw: Vec<usize> = (0..comp_count)
        .filter(|&c| c != s_comp && c != t_comp && !raw_members[c].is_empty())
        .collect();
    debug_assert!(
        (0..comp_count)
            .filter(|&c| c != s_comp && c != t_comp)
            .all(|c| !raw_members[c].is_empty()),
        "every interior supernode contains a residue"
    );

    // Deduplicated component-level edges.
    let mut comp_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (a, b) in node_edges {
        let (ca, cb) = (comp_of[a], comp_of[b]);
        if ca != cb {
            comp_edges.insert((ca, cb));
        }
    }

    // Topological relabeling of the interior, smallest member first.
    let mut raw_index = vec![usize::MAX; comp_count];
    for (slot, &c) in interior_raw.iter().enumerate() {
        raw_index[c] = slot;
    }
    let is_interior = |c: usize| raw_index[c] != usize::MAX;
    let mut indegree = vec![0usize; interior_raw.len()];
    let mut raw_succs: Vec<Vec<usize>> = vec![Vec::new(); interior_raw.len()];
    for &(ca, cb) in &comp_edges {
        if is_interior(ca) && is_interior(cb) {
            raw_succs[raw_index[ca]].push(raw_index[cb]);
            indegree[raw_index[cb]] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..interior_raw.len())
        .filter(|&slot| indegree[slot] == 0)
        .map(|slot| Reverse((raw_members[interior_raw[slot]][0], slot)))
        .collect();
    let mut new_id = vec![usize::MAX; interior_raw.len()];
    let mut order = 0usize;
    while let Some(Reverse((_, slot))) = heap.pop() {
        new_id[slot] = order;
        order += 1;
        for &next in &raw_succs[slot] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                heap.push(Reverse((raw_members[interior_raw[next]][0], next)));
            }
        }
    }
    debug_assert_eq!(order, interior_raw.len(), "interior condensation is acyclic");

    let k = interior_raw.len();
    let mut members = vec![Vec::new(); k];
    for (slot, &c) in interior_raw.iter().enumerate() {
        members[new_id[slot]] = raw_members[c].clone();
    }
    let comp_end = |c: usize| {
        if c == s_comp {
            End::S
        } else if c == t_comp {
            End::T
        } else {
            End::K(new_id[raw_index[c]])
        }
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut boundary: Vec<(End, End)> = Vec::new();
    for &(ca, cb) in &comp_edges {
        match (comp_end(ca), comp_end(cb)) {
            (End::K(u), End::K(v)) => {
                debug_assert!(u < v, "edges follow the topological numbering");
                edges.push((u, v));
            }
            // A t' -> s' edge says nothing (both values are fixed); one can
            // arise when composed constraints force a formerly interior
            // supernode into a pole.
            (End::T, End::S) => {}
            (a, b) => boundary.push((a, b)),
        }
    }
    edges.sort_unstable();
    boundary.sort_unstable();
    let mut preds = vec![Vec::new(); k];
    let mut succs = vec![Vec::new(); k];
    for &(u, v) in &edges {
        preds[v].push(u);
        succs[u].push(v);
    }
    let mut rho = vec![Rho::Source; n];
    let mut s_members = Vec::new();
    let mut t_members = Vec::new();
    for (node, &node_comp) in comp_of.iter().enumerate() {
        if let Some(r) = residue_of(node) {
            rho[r] = match comp_end(node_comp) {
                End::S => {
                    s_members.push(r);
                    Rho::Source
                }
                End::T => {
                    t_members.push(r);
                    Rho::Sink
                }
                End::K(id) => Rho::Interior(id),
            };
        }
    }
    s_members.sort_unstable();
    t_members.sort_unstable();
    PqDag {
        rho,
        members,
        edges,
        preds,
        succs,
        s_members,
        t_members,
        boundary_edges: boundary,
    }
}

/// Builds the dag of all optima of `phi` from one max-flow run.
pub fn pq_dag(phi: &FitnessFunction) -> PqDag {
    pq_dag_with(phi, AdjacencyOrder::Forward)
}

/// Like [`pq_dag`], with an explicit augmentation order. Any maximum flow
/// yields the same dag; tests exercise both orders to confirm it.
pub fn pq_dag_with(phi: &FitnessFunction, order: AdjacencyOrder) -> PqDag {
    let net = build_network(phi);
    let flow = max_flow(&net, order);
    let nodes = net.node_count();

    // Residual adjacency, forward and reverse.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for e in 0..net.arc_count() {
        if flow.residual(e).is_positive() {
            let (from, to, _) = net.arc(e);
            adj[from].push(to);
            radj[to].push(from);
            arcs.push((from, to));
        }
    }

    let reach = |start: usize, lists: &[Vec<usize>]| {
        let mut seen = vec![false; nodes];
        let mut queue = std::collections::VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &w in &lists[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    };
    let s_set = reach(net.source(), &adj);
    let t_set = reach(net.sink(), &radj);
    debug_assert!(
        (0..nodes).all(|v| !(s_set[v] && t_set[v])),
        "max flow leaves no residual s-t path"
    );

    let scc = scc_ids(&adj);
    // Raw components: 0 = source side, 1 = sink side, then one per interior
    // SCC (compacted).
    let mut scc_slot = vec![usize::MAX; nodes];
    let mut comp_of = vec![usize::MAX; nodes];
    let mut comp_count = 2;
    for v in 0..nodes {
        comp_of[v] = if s_set[v] {
            0
        } else if t_set[v] {
            1
        } else {
            let id = scc[v];
            if scc_slot[id] == usize::MAX {
                scc_slot[id] = comp_count;
                comp_count += 1;
            }
            scc_slot[id]
        };
    }
    let n = phi.n();
    assemble_dag(
        n,
        &comp_of,
        comp_count,
        0,
        1,
        |node| (node < n).then_some(node),
        arcs.into_iter(),
    )
}

/// Lazy enumeration of all optima: one sequence per ideal of the interior
/// dag, in lexicographic order of the sorted supernode id sets, with O(n)
/// work between items.
pub fn enumerate_optima(dag: &PqDag) -> OptimaIter<'_> {
    OptimaIter {
        dag,
        chosen: Vec::new(),
        inside: vec![false; dag.interior_count()],
        cursor: 0,
        primed: false,
        done: false,
    }
}

pub struct OptimaIter<'a> {
    dag: &'a PqDag,
    chosen: Vec<usize>,
    inside: Vec<bool>,
    cursor: usize,
    primed: bool,
    done: bool,
}

impl Iterator for OptimaIter<'_> {
    type Item = HpSequence;

    fn next(&mut self) -> Option<HpSequence> {
        if self.done {
            return None;
        }
        if !self.primed {
            self.primed = true;
            return Some(self.dag.sequence_of(&self.inside));
        }
        loop {
            // Extend the current ideal with the smallest eligible id. Ids
            // are topological, so predecessors are already decided.
            while self.cursor < self.dag.interior_count() {
                let v = self.cursor;
                if self.dag.preds(v).iter().all(|&p| self.inside[p]) {
                    self.chosen.push(v);
                    self.inside[v] = true;
                    self.cursor = v + 1;
                    return Some(self.dag.sequence_of(&self.inside));
                }
                self.cursor += 1;
            }
            match self.chosen.pop() {
                Some(v) => {
                    self.inside[v] = false;
                    self.cursor = v + 1;
                }
                None => {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}

/// Inverse construction: turns a digraph on n nodes into the fitness
/// function with a_ij = e_ij + e_ji and b_i = outdegree(i). The interior of
/// its optimum dag reproduces the digraph's SCC condensation.
pub fn dag_to_phi(n: usize, edges: &[(usize, usize)]) -> Result<FitnessFunction> {
    let mut seen = BTreeSet::new();
    let mut pair_count: std::collections::BTreeMap<(usize, usize), u32> =
        std::collections::BTreeMap::new();
    let mut outdeg = vec![0u32; n];
    for &(from, to) in edges {
        if from >= n || to >= n {
            return Err(Error::BadEdge {
                from,
                to,
                why: format!("node out of range for n = {}", n),
            });
        }
        if from == to {
            return Err(Error::BadEdge {
                from,
                to,
                why: "self loop".to_string(),
            });
        }
        if !seen.insert((from, to)) {
            return Err(Error::BadEdge {
                from,
                to,
                why: "duplicate edge".to_string(),
            });
        }
        *pair_count.entry((from.min(to), from.max(to))).or_insert(0) += 1;
        outdeg[from] += 1;
    }
    FitnessFunction::from_integers(
        n,
        pair_count
            .into_iter()
            .map(|(ij, c)| (ij, BigInt::from(c)))
            .collect(),
        outdeg.into_iter().map(BigInt::from).collect(),
    )
}

/// Cheap bounds on the number of optima: at least
/// max(1 + #interior sources, longest interior chain + 1), at most
/// 2^(interior supernode count).
pub fn count_bound(dag: &PqDag) -> (BigUint, BigUint) {
    let k = dag.interior_count();
    let sources = (0..k).filter(|&v| dag.preds(v).is_empty()).count();
    let mut longest = vec![0usize; k];
    let mut chain = 0usize;
    for v in 0..k {
        longest[v] = 1 + dag.preds(v).iter().map(|&p| longest[p]).max().unwrap_or(0);
        chain = chain.max(longest[v]);
    }
    let lower = BigUint::from((1 + sources).max(chain + 1));
    let upper = BigUint::one() << k;
    (lower, upper)
}
