//! Karp's maximum mean-weight cycle on a weighted digraph.
//!
//! `D[k][v]` is the heaviest walk of exactly `k` edges ending at `v`, starting
//! anywhere (`D[0][v] = 0` for every `v`, i.e. a virtual source). The optimum
//! mean is `max_v min_{k<n} (D[n][v] - D[k][v]) / (n - k)`. A witness is read
//! off the predecessor table by walking back `n` edges from the optimal
//! vertex and splitting the walk into its simple cycles.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MeanCycle {
    /// Vertices in edge direction: `vertices[m] -> vertices[m + 1]`.
    pub vertices: Vec<usize>,
    pub mean: f64,
}

/// `edges` are `(tail, head, weight)` triples. Returns `None` when acyclic.
pub(crate) fn max_mean_cycle(n: usize, edges: &[(usize, usize, f64)]) -> Option<MeanCycle> {
    if n == 0 {
        return None;
    }
    let mut dist = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    let mut pred = vec![vec![usize::MAX; n]; n + 1];
    dist[0].iter_mut().for_each(|d| *d = 0.0);
    for k in 1..=n {
        for &(u, v, w) in edges {
            let cand = dist[k - 1][u] + w;
            if dist[k - 1][u] > f64::NEG_INFINITY && cand > dist[k][v] {
                dist[k][v] = cand;
                pred[k][v] = u;
            }
        }
    }

    let mut best: Option<(usize, f64)> = None;
    for v in 0..n {
        if dist[n][v] == f64::NEG_INFINITY {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| dist[k][v] > f64::NEG_INFINITY)
            .map(|k| (dist[n][v] - dist[k][v]) / (n - k) as f64)
            .fold(f64::INFINITY, f64::min);
        if best.map_or(true, |(_, b)| worst > b) {
            best = Some((v, worst));
        }
    }
    let (end, lambda) = best?;

    let mut walk = vec![end];
    let mut v = end;
    for k in (1..=n).rev() {
        v = pred[k][v];
        walk.push(v);
    }
    walk.reverse();

    let weight = weight_lookup(n, edges);
    let extracted = split_walk(&walk)
        .into_iter()
        .map(|c| {
            let mean = cycle_mean(&c, &weight);
            MeanCycle { vertices: c, mean }
        })
        .max_by(|a, b| a.mean.total_cmp(&b.mean));

    let tol = 1e-9 * (1.0 + lambda.abs());
    match extracted {
        Some(c) if c.mean >= lambda - tol => Some(c),
        _ => critical_cycle(n, edges, lambda, &weight),
    }
}

fn weight_lookup(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut w = vec![vec![f64::NEG_INFINITY; n]; n];
    for &(u, v, x) in edges {
        if x > w[u][v] {
            w[u][v] = x;
        }
    }
    w
}

fn cycle_mean(cycle: &[usize], weight: &[Vec<f64>]) -> f64 {
    let k = cycle.len();
    let total: f64 = (0..k).map(|m| weight[cycle[m]][cycle[(m + 1) % k]]).sum();
    total / k as f64
}

/// Split a walk into the simple cycles it closes, in order of closure.
fn split_walk(walk: &[usize]) -> Vec<Vec<usize>> {
    let mut cycles = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &v in walk {
        if let Some(pos) = stack.iter().position(|&u| u == v) {
            cycles.push(stack[pos..].to_vec());
            stack.truncate(pos);
        }
        stack.push(v);
    }
    cycles
}

/// Fallback witness: a cycle in the subgraph of edges that are tight for the
/// longest-path potentials under weights shifted by `-lambda`.
fn critical_cycle(n: usize, edges: &[(usize, usize, f64)], lambda: f64, weight: &[Vec<f64>]) -> Option<MeanCycle> {
    let mut pot = vec![0.0; n];
    for _ in 0..n {
        for &(u, v, w) in edges {
            let cand = pot[u] + w - lambda;
            if cand > pot[v] {
                pot[v] = cand;
            }
        }
    }
    let scale = 1.0 + pot.iter().fold(0.0_f64, |m, p| m.max(p.abs())) + lambda.abs();
    let tol = 1e-9 * scale;
    let mut tight = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        if pot[u] + w - lambda >= pot[v] - tol {
            tight[u].push(v);
        }
    }
    // iterative DFS for any cycle among tight edges
    let mut color = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(top) = stack.last_mut() {
            let u = top.0;
            if top.1 < tight[u].len() {
                let v = tight[u][top.1];
                top.1 += 1;
                if color[v] == 0 {
                    color[v] = 1;
                    parent[v] = u;
                    stack.push((v, 0));
                } else if color[v] == 1 {
                    let mut cycle = vec![u];
                    let mut x = u;
                    while x != v {
                        x = parent[x];
                        cycle.push(x);
                    }
                    cycle.reverse();
                    let mean = cycle_mean(&cycle, weight);
                    return Some(MeanCycle { vertices: cycle, mean });
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_heaviest_mean() {
        // 0 -> 1 -> 0 with weights 1 and 3 (mean 2); self-loop at 2 with weight 1.5
        let edges = vec![(0, 1, 1.0), (1, 0, 3.0), (2, 2, 1.5), (1, 2, 0.0), (2, 0, 0.0)];
        let c = max_mean_cycle(3, &edges).unwrap();
        assert!((c.mean - 2.0).abs() < 1e-12);
        let mut v = c.vertices.clone();
        v.sort();
        assert_eq!(v, vec![0, 1]);
    }

    #[test]
    fn acyclic_returns_none() {
        assert!(max_mean_cycle(3, &[(0, 1, 1.0), (1, 2, 1.0)]).is_none());
    }

    #[test]
    fn walk_splitting() {
        let cycles = split_walk(&[0, 1, 0, 2, 3, 2]);
        assert_eq!(cycles, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn critical_fallback_finds_optimal_cycle() {
        let edges = vec![(0, 1, 1.0), (1, 0, 3.0), (2, 2, 1.5), (1, 2, 0.0), (2, 0, 0.0)];
        let weight = weight_lookup(3, &edges);
        let c = critical_cycle(3, &edges, 2.0, &weight).unwrap();
        assert!((c.mean - 2.0).abs() < 1e-9);
    }
}
