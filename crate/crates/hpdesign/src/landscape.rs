//! Analyses over the optimum set: nearest and extreme optima, intersection
//! of several optimum sets, diameter, and mutation connectivity.
//!
//! The nearest-optimum solver is the workhorse: it folds a weighted Hamming
//! distance into the linear coefficients at a scale too small to disturb
//! optimality, so a single min-cut solve picks the optimum closest to (or,
//! with negative weights, farthest from) a target.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mincut::one_optimum;
use crate::model::{FitnessFunction, HpSequence, Rational};
use crate::pqdag::{assemble_dag, End, PqDag, Rho};
use crate::scc::scc_ids;

/// Weighted Hamming distance sum w_i |x_i - t_i|.
pub fn weighted_distance(x: &HpSequence, target: &HpSequence, w: &[Rational]) -> Result<Rational> {
    if target.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: target.len(),
        });
    }
    if w.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: w.len(),
        });
    }
    let mut total = Rational::zero();
    for (i, wi) in w.iter().enumerate() {
        if x.get(i) != target.get(i) {
            total += wi;
        }
    }
    Ok(total)
}

/// The optimum of `phi` minimizing the weighted Hamming distance to
/// `target`. Weights may be negative, which turns minimization of that
/// term into maximization (e.g. all `-1` finds a farthest optimum).
///
/// The distance is blended into the objective exactly: with integer
/// weights `w_int = c_w * w` and `M > 2 n max|w_int|`, the integer
/// objective `M * c * phi(x) + c_w * dist(x)` orders primarily by fitness
/// (scaled fitness values are integers, so distinct ones differ by at
/// least 1) and breaks ties by distance. One min-cut solve.
pub fn nearest_optimal(
    phi: &FitnessFunction,
    target: &HpSequence,
    w: &[Rational],
) -> Result<HpSequence> {
    let n = phi.n();
    if target.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: target.len(),
        });
    }
    if w.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: w.len(),
        });
    }
    let mut c_w = BigInt::one();
    for wi in w {
        c_w = c_w.lcm(wi.denom());
    }
    let scale = Rational::from_integer(c_w);
    let w_int: Vec<BigInt> = w.iter().map(|wi| (wi * &scale).to_integer()).collect();
    let w_max = w_int.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
    let m_factor = BigInt::from(4u32) * BigInt::from(n) * &w_max + 1;

    let pairs = phi
        .pairs()
        .iter()
        .enumerate()
        .map(|(k, &ij)| (ij, &m_factor * phi.pair_scaled(k)))
        .collect();
    let linear = (0..n)
        .map(|i| {
            let dist_term = if target.get(i) { -&w_int[i] } else { w_int[i].clone() };
            &m_factor * phi.linear_scaled(i) + dist_term
        })
        .collect();
    let psi = FitnessFunction::from_integers(n, pairs, linear)?;
    Ok(one_optimum(&psi).0)
}

/// The optimum with the largest (or smallest) number of H residues:
/// nearest to the all-H (or all-P) sequence under unit weights.
pub fn extreme_h_count(phi: &FitnessFunction, maximize: bool) -> Result<HpSequence> {
    let target = HpSequence::from_bits(vec![maximize; phi.n()]);
    let w = vec![Rational::one(); phi.n()];
    nearest_optimal(phi, &target, &w)
}

/// Dag of the sequences simultaneously optimal for every input, or `None`
/// when no sequence minimizes all of them at once.
///
/// Each dag contributes order constraints on a graph over the residues
/// plus two poles S (forced H) and T (forced P): residues of one supernode
/// are tied together, an edge (A, B) becomes x_min(A) <= x_min(B), and
/// s'/t' members are tied to the poles. Contracting strongly connected
/// components and absorbing everything reachable from S (forced H) or
/// reaching T (forced P) leaves a dag with the usual ideal semantics.
pub fn intersect_dags(dags: &[&PqDag]) -> Result<Option<PqDag>> {
    let first = dags
        .first()
        .ok_or_else(|| Error::Parameter("intersection needs at least one dag".to_string()))?;
    let n = first.n();
    for dag in dags {
        if dag.n() != n {
            return Err(Error::Dimension {
                expected: n,
                got: dag.n(),
            });
        }
    }
    let (s_node, t_node) = (n, n + 1);
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for dag in dags {
        for i in 0..n {
            match dag.rho(i) {
                Rho::Source => {
                    arcs.push((s_node, i));
                    arcs.push((i, s_node));
                }
                Rho::Sink => {
                    arcs.push((t_node, i));
                    arcs.push((i, t_node));
                }
                Rho::Interior(_) => {}
            }
        }
        for id in 0..dag.interior_count() {
            for pair in dag.members(id).windows(2) {
                arcs.push((pair[0], pair[1]));
                arcs.push((pair[1], pair[0]));
            }
        }
        for &(a, b) in dag.edges() {
            arcs.push((dag.members(a)[0], dag.members(b)[0]));
        }
        // Boundary edges constrain nothing (they point into S or out of T)
        // but carrying them along keeps the composite's display faithful;
        // arcs into S or out of T cannot force anything new.
        for &(a, b) in dag.boundary_edges() {
            match (a, b) {
                (End::K(u), End::S) => arcs.push((dag.members(u)[0], s_node)),
                (End::T, End::K(v)) => arcs.push((t_node, dag.members(v)[0])),
                _ => {}
            }
        }
    }

    // The extra t -> s arc folds "t reachable from s" (no common optimum)
    // into the component test; it is vacuous otherwise and excluded below.
    let mut adj = vec![Vec::new(); n + 2];
    for &(a, b) in &arcs {
        adj[a].push(b);
    }
    adj[t_node].push(s_node);
    let comp = scc_ids(&adj);
    let s_comp = comp[s_node];
    let t_comp = comp[t_node];
    if s_comp == t_comp {
        return Ok(None);
    }

    // Everything reachable from S is forced H; everything reaching T is
    // forced P. Left interior, such components would drop constraints that
    // only run through a pole.
    let comp_count = comp.iter().max().unwrap() + 1;
    let mut comp_adj = vec![Vec::new(); comp_count];
    let mut comp_radj = vec![Vec::new(); comp_count];
    for &(a, b) in &arcs {
        if comp[a] != comp[b] {
            comp_adj[comp[a]].push(comp[b]);
            comp_radj[comp[b]].push(comp[a]);
        }
    }
    let reach = |start: usize, next: &[Vec<usize>]| {
        let mut seen = vec![false; comp_count];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            for &d in &next[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen
    };
    let forced_h = reach(s_comp, &comp_adj);
    let forced_p = reach(t_comp, &comp_radj);
    debug_assert!(
        (0..comp_count).all(|c| !(forced_h[c] && forced_p[c])),
        "a component forced both ways implies s reaches t"
    );

    let mut merged = vec![usize::MAX; comp_count];
    let mut count = 2;
    for c in 0..comp_count {
        merged[c] = if forced_h[c] {
            0
        } else if forced_p[c] {
            1
        } else {
            count += 1;
            count - 1
        };
    }
    let comp_of: Vec<usize> = (0..n + 2).map(|node| merged[comp[node]]).collect();
    Ok(Some(assemble_dag(
        n,
        &comp_of,
        count,
        0,
        1,
        |node| (node < n).then_some(node),
        arcs.iter().copied(),
    )))
}

/// Diameter of the optimum set in weighted Hamming distance: the canonical
/// extremes (empty and full ideal) disagree exactly on the interior
/// residues, so this is the total interior weight. Weights must be
/// nonnegative.
pub fn diameter(dag: &PqDag, w: &[Rational]) -> Result<Rational> {
    if w.len() != dag.n() {
        return Err(Error::Dimension {
            expected: dag.n(),
            got: w.len(),
        });
    }
    let mut total = Rational::zero();
    for (i, wi) in w.iter().enumerate() {
        if wi.is_negative() {
            return Err(Error::NegativeWeight { index: i });
        }
        if matches!(dag.rho(i), Rho::Interior(_)) {
            total += wi;
        }
    }
    Ok(total)
}

/// A set system given by its maximal elements; the system itself is every
/// subset of a listed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationSystem {
    sets: Vec<Vec<usize>>,
}

impl MutationSystem {
    /// Normalizes: sorts each set, drops duplicates and non-maximal sets.
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        let mut sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        sets.sort();
        sets.dedup();
        let maximal: Vec<Vec<usize>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
            .cloned()
            .collect();
        MutationSystem { sets: maximal }
    }

    /// Maximal sets, each sorted, in lexicographic order.
    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Whether `set` belongs to the system, i.e. is covered by a maximal set.
    pub fn covers(&self, set: &[usize]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.sets.iter().any(|t| is_subset(&sorted, t))
    }
}

fn is_subset(sub: &[usize], sup: &[usize]) -> bool {
    sub.iter().all(|e| sup.binary_search(e).is_ok())
}

/// The smallest downward-closed set system whose mutations connect the
/// whole optimum set (no pair), or the given pair of optima: maximal sets
/// are the residue classes of the supernodes that must flip.
pub fn min_mutation_system(
    dag: &PqDag,
    pair: Option<(&HpSequence, &HpSequence)>,
) -> Result<MutationSystem> {
    let ids: Vec<usize> = match pair {
        None => (0..dag.interior_count()).collect(),
        Some((x, y)) => {
            let ix = dag.ideal_of(x)?;
            let iy = dag.ideal_of(y)?;
            let mut sym: Vec<usize> = ix
                .iter()
                .filter(|id| iy.binary_search(id).is_err())
                .chain(iy.iter().filter(|id| ix.binary_search(id).is_err()))
                .copied()
                .collect();
            sym.sort_unstable();
            sym
        }
    };
    Ok(MutationSystem::new(
        ids.into_iter().map(|id| dag.members(id).to_vec()).collect(),
    ))
}

/// Whether mutations drawn from `system` connect the optimum set (or the
/// given pair): true iff every required supernode flip is covered.
pub fn is_connected_under(
    dag: &PqDag,
    system: &MutationSystem,
    pair: Option<(&HpSequence, &HpSequence)>,
) -> Result<bool> {
    let needed = min_mutation_system(dag, pair)?;
    Ok(needed.sets().iter().all(|s| system.covers(s)))
}
