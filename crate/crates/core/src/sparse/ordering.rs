//! Fill-reducing symmetric orderings.

use std::collections::VecDeque;

use super::CsrMatrix;

/// Reverse Cuthill-McKee ordering of the symmetric pattern of `a`.
///
/// Returns `perm` with `perm[new] = old`. Each connected component is started
/// from a pseudo-peripheral vertex; neighbours are visited by increasing degree
/// with ties broken by index, so the result is deterministic.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let adj = |i: usize| a.row(i).0.iter().copied().filter(move |&j| j != i);
    let degree: Vec<usize> = (0..n).map(|i| adj(i).count()).collect();

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut level = vec![usize::MAX; n];

    // components seeded in order of lowest unvisited index
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(seed, &degree, &adj, &mut level);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        let mut nbrs: Vec<usize> = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            nbrs.clear();
            nbrs.extend(adj(v).filter(|&w| !visited[w]));
            nbrs.sort_unstable_by_key(|&w| (degree[w], w));
            for &w in &nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// George-Liu search for a vertex of (near) maximal eccentricity.
fn pseudo_peripheral<F, I>(seed: usize, degree: &[usize], adj: &F, level: &mut [usize]) -> usize
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut root = seed;
    let (mut ecc, mut last) = bfs_levels(root, adj, level);
    loop {
        let candidate = last
            .iter()
            .copied()
            .min_by_key(|&v| (degree[v], v))
            .unwrap_or(root);
        let (e, l) = bfs_levels(candidate, adj, level);
        if e > ecc {
            root = candidate;
            ecc = e;
            last = l;
        } else {
            return root;
        }
    }
}

/// BFS from `root`; returns eccentricity and the vertices of the last level.
fn bfs_levels<F, I>(root: usize, adj: &F, level: &mut [usize]) -> (usize, Vec<usize>)
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut touched = vec![root];
    level[root] = 0;
    let mut frontier = vec![root];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for &v in &frontier {
            for w in adj(v) {
                if level[w] == usize::MAX {
                    level[w] = depth + 1;
                    next.push(w);
                    touched.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
        depth += 1;
    }
    for v in touched {
        level[v] = usize::MAX;
    }
    (depth, frontier)
}

/// Inverse of a permutation given as `perm[new] = old`.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

/// Half-bandwidth of `a` under `perm`.
pub fn bandwidth(a: &CsrMatrix, perm: &[usize]) -> usize {
    let inv = invert(perm);
    let mut bw = 0;
    for i in 0..a.nrows() {
        for &j in a.row(i).0 {
            bw = bw.max(inv[i].abs_diff(inv[j]));
        }
    }
    bw
}
