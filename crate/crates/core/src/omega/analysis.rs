//! Graph algorithms behind emptiness, universality and lasso witnesses:
//! strongly connected components and a recursive search for cycles whose
//! minimal priority is even under several parity conditions at once.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// A finite graph with labelled edges.
#[derive(Clone, Debug)]
pub struct LabeledGraph<L> {
    pub succ: Vec<Vec<(L, usize)>>,
}

impl<L: Clone> LabeledGraph<L> {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn reachable(&self, root: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &(_, w) in &self.succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Nodes that can reach some node in `targets`.
    pub fn backward_closure(&self, targets: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            for &(_, w) in &self.succ[v] {
                pred[w].push(v);
            }
        }
        let mut seen = targets.to_vec();
        let mut stack: Vec<usize> = (0..n).filter(|&v| targets[v]).collect();
        while let Some(v) = stack.pop() {
            for &u in &pred[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Shortest path of labels from `from` to `to`, staying inside `allowed`.
    pub fn path(&self, from: usize, to: usize, allowed: &[bool]) -> Option<Vec<L>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut parent: Vec<Option<(usize, L)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for (l, w) in &self.succ[v] {
                let w = *w;
                if !allowed[w] || seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some((v, l.clone()));
                if w == to {
                    let mut labels = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let (p, l) = parent[cur].clone().unwrap();
                        labels.push(l);
                        cur = p;
                    }
                    labels.reverse();
                    return Some(labels);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// A closed walk from `start` through every node of `comp` (which must be
    /// strongly connected and contain a cycle).
    pub fn covering_cycle(&self, start: usize, comp: &[bool]) -> Vec<L> {
        let mut walk = Vec::new();
        let mut cur = start;
        for v in 0..self.len() {
            if comp[v] && v != start {
                walk.extend(
                    self.path(cur, v, comp)
                        .expect("component is strongly connected"),
                );
                cur = v;
            }
        }
        if cur == start {
            // single node: take its self-loop
            let (l, _) = self.succ[start]
                .iter()
                .find(|(_, w)| *w == start)
                .cloned()
                .expect("component has a cycle");
            walk.push(l);
        } else {
            walk.extend(
                self.path(cur, start, comp)
                    .expect("component is strongly connected"),
            );
        }
        walk
    }
}

/// Tarjan's algorithm restricted to `allowed`; returns component ids
/// (`usize::MAX` outside `allowed`) and the component count.
pub fn scc<L>(graph: &LabeledGraph<L>, allowed: &[bool]) -> (Vec<usize>, usize) {
    let n = graph.succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if !allowed[root] || index[root] != usize::MAX {
            continue;
        }
        // explicit call stack: (node, next edge position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < graph.succ[v].len() {
                let w = graph.succ[v][*pos].1;
                *pos += 1;
                if !allowed[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

fn nontrivial<L>(graph: &LabeledGraph<L>, members: &[usize], comp: &[usize]) -> bool {
    members.len() > 1
        || graph.succ[members[0]]
            .iter()
            .any(|&(_, w)| w == members[0] && comp[w] == comp[members[0]])
}

/// Finds a strongly connected node set inside `allowed` that carries a cycle
/// visiting all its nodes such that, for every priority function, the least
/// priority on it is even.
pub fn good_component<L>(
    graph: &LabeledGraph<L>,
    allowed: &[bool],
    priorities: &[&[u32]],
) -> Option<Vec<bool>> {
    let (comp, ncomp) = scc(graph, allowed);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in 0..graph.succ.len() {
        if comp[v] != usize::MAX {
            members[comp[v]].push(v);
        }
    }
    for ms in &members {
        if !nontrivial(graph, ms, &comp) {
            continue;
        }
        let mut bad: Option<(usize, u32)> = None;
        for (j, pri) in priorities.iter().enumerate() {
            let m = ms.iter().map(|&v| pri[v]).min().unwrap();
            if m % 2 == 1 {
                bad = Some((j, m));
                break;
            }
        }
        match bad {
            None => {
                let mut set = vec![false; graph.succ.len()];
                for &v in ms {
                    set[v] = true;
                }
                return Some(set);
            }
            Some((j, m)) => {
                let mut sub = vec![false; graph.succ.len()];
                for &v in ms {
                    sub[v] = priorities[j][v] != m;
                }
                if let Some(found) = good_component(graph, &sub, priorities) {
                    return Some(found);
                }
            }
        }
    }
    None
}

/// A lasso (stem labels, cycle labels) from `root` whose cycle satisfies all
/// parity conditions, staying inside `allowed`.
pub fn find_lasso<L: Clone>(
    graph: &LabeledGraph<L>,
    root: usize,
    allowed: &[bool],
    priorities: &[&[u32]],
) -> Option<(Vec<L>, Vec<L>)> {
    if !allowed[root] {
        return None;
    }
    let reach = graph.reachable_within(root, allowed);
    let comp = good_component(graph, &reach, priorities)?;
    let entry = (0..graph.len()).find(|&v| comp[v]).unwrap();
    let stem = graph
        .path(root, entry, &reach)
        .expect("component is reachable");
    let cycle = graph.covering_cycle(entry, &comp);
    Some((stem, cycle))
}

impl<L: Clone> LabeledGraph<L> {
    pub fn reachable_within(&self, root: usize, allowed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if !allowed[root] {
            return seen;
        }
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &(_, w) in &self.succ[v] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Nodes lying on some cycle that satisfies all parity conditions.
    pub fn good_nodes(&self, allowed: &[bool], priorities: &[&[u32]]) -> Vec<bool> {
        let mut result = vec![false; self.len()];
        let mut remaining = allowed.to_vec();
        while let Some(comp) = good_component(self, &remaining, priorities) {
            for v in 0..self.len() {
                if comp[v] {
                    result[v] = true;
                    remaining[v] = false;
                }
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(usize, usize)], n: usize) -> LabeledGraph<usize> {
        let mut succ = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            succ[a].push((i, b));
        }
        LabeledGraph { succ }
    }

    #[test]
    fn scc_of_two_cycles() {
        let g = graph(&[(0, 1), (1, 0), (1, 2), (2, 2), (2, 3)], 4);
        let (comp, n) = scc(&g, &[true; 4]);
        assert_eq!(n, 3);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[1], comp[2]);
    }

    #[test]
    fn conjunction_search_removes_odd_minimum() {
        // 0 <-> 1, priorities for one condition: 1 at node 0, 2 at node 1; self loop at 1
        let g = graph(&[(0, 1), (1, 0), (1, 1)], 2);
        let pri: Vec<u32> = vec![1, 2];
        let lasso = find_lasso(&g, 0, &[true, true], &[&pri]).unwrap();
        assert_eq!(lasso.1, vec![2]);
        // second condition forbids the self-loop-only cycle
        let pri2: Vec<u32> = vec![0, 1];
        assert!(find_lasso(&g, 0, &[true, true], &[&pri, &pri2]).is_none());
    }
}
