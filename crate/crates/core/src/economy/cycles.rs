//! Simple-cycle enumeration on the positive-coefficient digraph.
//!
//! Johnson's algorithm: for each start vertex `s` (in increasing order) take
//! the strongly connected component containing `s` within the subgraph
//! induced by vertices `>= s`, and enumerate elementary circuits through `s`
//! using the blocked-set / blocked-map bookkeeping. Every circuit is emitted
//! exactly once, rooted at its smallest vertex.

/// Enumerate all elementary circuits of the digraph given by `adj`
/// (`adj[u]` lists the heads of edges leaving `u`). Each circuit is returned
/// starting from its smallest vertex and following edge direction.
pub(crate) fn elementary_circuits(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    let mut search = CircuitSearch {
        blocked: vec![false; n],
        blocked_map: vec![Vec::new(); n],
        stack: Vec::with_capacity(n),
    };

    for s in 0..n {
        let component = component_of(adj, s);
        // component[v] marks membership of v in s's SCC over vertices >= s
        let sub: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                if component[u] {
                    adj[u].iter().copied().filter(|&v| component[v]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        if sub[s].is_empty() {
            continue;
        }
        for v in 0..n {
            search.blocked[v] = false;
            search.blocked_map[v].clear();
        }
        search.circuit(&sub, s, s, &mut out);
    }
    out
}

struct CircuitSearch {
    blocked: Vec<bool>,
    blocked_map: Vec<Vec<usize>>,
    stack: Vec<usize>,
}

impl CircuitSearch {
    fn circuit(&mut self, adj: &[Vec<usize>], v: usize, s: usize, out: &mut Vec<Vec<usize>>) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &adj[v] {
            if w == s {
                out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(adj, w, s, out) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &adj[v] {
                if !self.blocked_map[w].contains(&v) {
                    self.blocked_map[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        let waiting = std::mem::take(&mut self.blocked_map[u]);
        for w in waiting {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

/// Membership mask of the strongly connected component containing `s` in the
/// subgraph induced by vertices `>= s`.
fn component_of(adj: &[Vec<usize>], s: usize) -> Vec<bool> {
    let n = adj.len();
    let forward = reach(n, s, |u| adj[u].iter().copied().filter(move |&v| v >= s));
    let mut reverse_adj = vec![Vec::new(); n];
    for u in s..n {
        for &v in &adj[u] {
            if v >= s {
                reverse_adj[v].push(u);
            }
        }
    }
    let backward = reach(n, s, |u| reverse_adj[u].iter().copied());
    (0..n).map(|v| forward[v] && backward[v]).collect()
}

pub(crate) fn reach<I, F>(n: usize, start: usize, mut next: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for v in next(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}
