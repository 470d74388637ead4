//! Exact minimization of the fitness function by a single s-t max-flow run.
//!
//! The flow network has one node per residue, one node per pair term, a
//! source s and a sink t:
//!
//! * (s, u_ij) with capacity c*a_ij for every pair term,
//! * (u_ij, v_i) and (u_ij, v_j) with infinite capacity,
//! * (v_i, t) with capacity c*b_i when b_i > 0,
//! * (s, v_i) with capacity -c*b_i when b_i < 0.
//!
//! "Infinite" is the integer 1 + (sum of all finite capacities), so no
//! minimum cut ever crosses such an edge. Minimum cuts correspond to
//! minimizers: x_i = 1 exactly when v_i lands on the source side, and the
//! cut capacity equals c*(f(x) + K) with K = sum a_ij - sum over negative
//! b_i. All capacities are exact integers, so the optimum is exact.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::model::{FitnessFunction, HpSequence, Rational};

/// Iteration order over adjacency lists during augmentation. Any order
/// yields a maximum flow; exposing both directions lets tests confirm the
/// downstream analysis is flow-independent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacencyOrder {
    Forward,
    Reversed,
}

struct RawEdge {
    from: usize,
    to: usize,
    cap: BigInt,
}

/// The scaled flow network of a fitness function. Node numbering is
/// deterministic: residues 0..n, then pair nodes in (i, j) order, then
/// source and sink.
pub struct FlowNetwork {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<RawEdge>,
    infinite: BigInt,
}

impl FlowNetwork {
    pub fn node_count(&self) -> usize {
        self.n + self.m + 2
    }

    pub fn source(&self) -> usize {
        self.n + self.m
    }

    pub fn sink(&self) -> usize {
        self.n + self.m + 1
    }

    /// Node carrying residue `i`.
    pub fn residue_node(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i
    }

    /// Node carrying the k-th pair term.
    pub fn pair_node(&self, k: usize) -> usize {
        debug_assert!(k < self.m);
        self.n + k
    }

    /// The finite stand-in for infinite capacity.
    pub fn infinite(&self) -> &BigInt {
        &self.infinite
    }

    /// Number of directed residual arcs (forward edges and their reverses).
    pub(crate) fn arc_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn arc(&self, e: usize) -> (usize, usize, &BigInt) {
        let edge = &self.edges[e];
        (edge.from, edge.to, &edge.cap)
    }

    /// Original capacitated edges (from, to, capacity).
    pub fn forward_edges(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.edges
            .iter()
            .step_by(2)
            .map(|e| (e.from, e.to, &e.cap))
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: BigInt) {
        let id = self.edges.len();
        self.edges.push(RawEdge { from, to, cap });
        self.edges.push(RawEdge {
            from: to,
            to: from,
            cap: BigInt::zero(),
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }
}

/// Builds the scaled flow network of `phi`.
pub fn build_network(phi: &FitnessFunction) -> FlowNetwork {
    let n = phi.n();
    let m = phi.m();
    let mut finite_total = BigInt::zero();
    for k in 0..m {
        finite_total += phi.pair_scaled(k);
    }
    for i in 0..n {
        finite_total += phi.linear_scaled(i).abs();
    }
    let mut net = FlowNetwork {
        n,
        m,
        adj: vec![Vec::new(); n + m + 2],
        edges: Vec::with_capacity(2 * (3 * m + n)),
        infinite: finite_total + 1,
    };
    let (s, t) = (net.source(), net.sink());
    for (k, &(i, j)) in phi.pairs().iter().enumerate() {
        let u = net.pair_node(k);
        net.add_edge(s, u, phi.pair_scaled(k).clone());
        let inf = net.infinite.clone();
        net.add_edge(u, i, inf.clone());
        net.add_edge(u, j, inf);
    }
    for i in 0..n {
        let b = phi.linear_scaled(i);
        if b.is_positive() {
            net.add_edge(i, t, b.clone());
        } else if b.is_negative() {
            net.add_edge(s, i, -b);
        }
    }
    net
}

/// A maximum flow, stored as the residual capacity of every arc.
pub struct FlowResult {
    value: BigInt,
    residual: Vec<BigInt>,
}

impl FlowResult {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub(crate) fn residual(&self, e: usize) -> &BigInt {
        &self.residual[e]
    }

    /// Flow carried by a forward edge (its id in `forward_edges` order).
    pub fn flow(&self, net: &FlowNetwork, k: usize) -> BigInt {
        let (_, _, cap) = net.arc(2 * k);
        cap - &self.residual[2 * k]
    }

    /// Nodes reachable from the source in the residual graph; this is the
    /// source side of a minimum cut.
    pub fn s_side(&self, net: &FlowNetwork) -> Vec<bool> {
        let mut seen = vec![false; net.node_count()];
        let mut queue = std::collections::VecDeque::new();
        seen[net.source()] = true;
        queue.push_back(net.source());
        while let Some(v) = queue.pop_front() {
            for &e in &net.adj[v] {
                let to = net.edges[e].to;
                if !seen[to] && self.residual[e].is_positive() {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }
}

/// Dinic's algorithm. Deterministic for a fixed adjacency order.
pub fn max_flow(net: &FlowNetwork, order: AdjacencyOrder) -> FlowResult {
    let mut residual: Vec<BigInt> = net.edges.iter().map(|e| e.cap.clone()).collect();
    let mut value = BigInt::zero();
    let node_count = net.node_count();
    loop {
        // Level graph by BFS over positive residual arcs.
        let mut level = vec![usize::MAX; node_count];
        let mut queue = std::collections::VecDeque::new();
        level[net.source()] = 0;
        queue.push_back(net.source());
        while let Some(v) = queue.pop_front() {
            for &e in &net.adj[v] {
                let to = net.edges[e].to;
                if level[to] == usize::MAX && residual[e].is_positive() {
                    level[to] = level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        if level[net.sink()] == usize::MAX {
            return FlowResult { value, residual };
        }
        let mut ptr = vec![0usize; node_count];
        loop {
            let pushed = augment(net, &mut residual, &level, &mut ptr, net.source(), None, order);
            if pushed.is_zero() {
                break;
            }
            value += pushed;
        }
    }
}

fn augment(
    net: &FlowNetwork,
    residual: &mut [BigInt],
    level: &[usize],
    ptr: &mut [usize],
    v: usize,
    limit: Option<&BigInt>,
    order: AdjacencyOrder,
) -> BigInt {
    if v == net.sink() {
        return limit.expect("sink reached without a capacity bound").clone();
    }
    while ptr[v] < net.adj[v].len() {
        let slot = match order {
            AdjacencyOrder::Forward => ptr[v],
            AdjacencyOrder::Reversed => net.adj[v].len() - 1 - ptr[v],
        };
        let e = net.adj[v][slot];
        let to = net.edges[e].to;
        if level[to] == level[v] + 1 && residual[e].is_positive() {
            let step = match limit {
                Some(l) if l < &residual[e] => l.clone(),
                _ => residual[e].clone(),
            };
            let pushed = augment(net, residual, level, ptr, to, Some(&step), order);
            if pushed.is_positive() {
                residual[e] -= &pushed;
                residual[e ^ 1] += &pushed;
                return pushed;
            }
        }
        ptr[v] += 1;
    }
    BigInt::zero()
}

/// Returns one global minimizer of `phi` together with the optimum value.
/// Deterministic: the minimizer is read off the source side of the canonical
/// (source-minimal) minimum cut.
pub fn one_optimum(phi: &FitnessFunction) -> (HpSequence, Rational) {
    let net = build_network(phi);
    let flow = max_flow(&net, AdjacencyOrder::Forward);
    let side = flow.s_side(&net);
    let x = HpSequence::from_bits((0..phi.n()).map(|i| side[net.residue_node(i)]).collect());
    let value = phi.evaluate(&x).expect("sequence length matches by construction");
    (x, value)
}
