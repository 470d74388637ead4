//! Iterative Tarjan strongly connected components over adjacency lists.

/// Returns the SCC id of every node. Ids number the components in reverse
/// topological order of the condensation: every edge (u, v) between distinct
/// components has `id[u] > id[v]`.
pub(crate) fn scc_ids(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comp_count = 0usize;
    // Call stack of (node, position in its adjacency list).
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        calls.push((root, 0));
        while let Some(&(v, pos)) = calls.last() {
            if pos == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(pos) {
                calls.last_mut().unwrap().1 += 1;
                if index[w] == UNSET {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    // Root of a component.
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_collapses_and_dag_orders_reverse_topologically() {
        // 0 -> 1 -> 2 -> 0 form one component feeding into 3 -> 4.
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![]];
        let ids = scc_ids(&adj);
        assert_eq!(ids[0], ids[1]);
        assert_eq!(ids[1], ids[2]);
        assert_ne!(ids[0], ids[3]);
        assert!(ids[0] > ids[3] && ids[3] > ids[4]);
    }

    #[test]
    fn isolated_nodes_get_distinct_ids() {
        let ids = scc_ids(&[vec![], vec![], vec![]]);
        assert_eq!(ids.iter().collect::<std::collections::HashSet<_>>().len(), 3);
    }
}
